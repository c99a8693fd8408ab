import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinboson import (
    CONVENTION,
    MINUS,
    PLUS,
    TABLE,
    Coupling,
    DomainError,
    ModelSpec,
    UsageError,
    assemble_block,
    assemble_r,
    build_radial_grid,
    count_negative_eigs,
    default_grid,
    eig_below,
    find_phi_root,
    pair_order,
    schur_complement,
    total_count,
)


@pytest.fixture(scope="module")
def toy():
    q = build_radial_grid(1, 1, 2.0)
    spec = ModelSpec(eps=1.0, alpha=1.0, coupling=Coupling(family=TABLE, table=(1.0,)))
    return spec, q


@pytest.fixture(scope="module")
def default():
    spec = ModelSpec()
    return spec, default_grid(spec, 8, 4.0)


def test_pair_order():
    assert pair_order(3) == ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))
    assert len(pair_order(7)) == 7 * 8 // 2


def test_toy_block_entries(toy):
    spec, q = toy
    blk = assemble_block(spec, q, PLUS)
    assert blk.dim == 3
    expected = np.array(
        [
            [1.0, 2.0, 0.0],
            [2.0, 0.0, 2.0 * math.sqrt(2.0)],
            [0.0, 2.0 * math.sqrt(2.0), 3.0],
        ]
    )
    assert blk.matrix == pytest.approx(expected, abs=1e-15)

    # char poly -x^3 + 4x^2 + 9x - 20: eigenvalues 5 and (-1 +- sqrt 17)/2
    eigs = np.linalg.eigvalsh(blk.matrix)
    s17 = math.sqrt(17.0)
    assert eigs == pytest.approx(
        [(-1.0 - s17) / 2.0, (-1.0 + s17) / 2.0, 5.0], rel=1e-12
    )


def test_toy_counts(toy):
    spec, q = toy
    blk = assemble_block(spec, q, PLUS)
    # branch bottom is -2; the single bound state (-1-sqrt17)/2 = -2.56 lies below
    rep = eig_below(blk, -2.0)
    assert rep.count == 1
    assert rep.flagged == 0
    assert rep.method == "direct"
    assert eig_below(blk, -3.0).count == 0


def test_block_dimension(default):
    spec, q = default
    blk = assemble_block(spec, q, MINUS)
    assert blk.dim == 1 + 8 + 8 * 9 // 2
    assert np.max(np.abs(blk.matrix - blk.matrix.T)) == 0.0


def test_node_cap():
    spec = ModelSpec()
    q = default_grid(spec, 49, 4.0)
    with pytest.raises(UsageError):
        assemble_block(spec, q, PLUS)
    assemble_block(spec, q, PLUS, max_nodes=49)  # explicit override works


def test_schur_matches_pencil(default):
    spec, q = default
    rng = np.random.default_rng(7)
    for sigma in (PLUS, MINUS):
        blk = assemble_block(spec.with_alpha(1.3), q, sigma)
        for _ in range(8):
            z = sigma * spec.eps - 10.0 ** rng.uniform(-2.0, 1.5)
            s = schur_complement(blk, z)
            r = assemble_r(spec.with_alpha(1.3), q, sigma, z).r
            assert np.max(np.abs(s - r)) <= 1e-12 * (1.0 + np.max(np.abs(r)))


def test_schur_domain(toy):
    spec, q = toy
    blk = assemble_block(spec, q, PLUS)
    schur_complement(blk, 0.5)  # below vacuum (1) and pair diagonal (3)
    with pytest.raises(DomainError):
        schur_complement(blk, 1.5)
    with pytest.raises(DomainError):
        eig_below(blk, 1.0)


def test_total_count_moderate_coupling(default):
    spec, q = default
    tc = total_count(spec.with_alpha(2.0), q)
    assert (tc.plus.count, tc.minus.count, tc.total) == (1, 1, 2)
    assert tc.bottom_plus.value < tc.bottom_minus.value < -1.0
    assert tc.flags == ()


def test_total_count_weak_coupling(default):
    spec, q = default
    tc = total_count(spec.with_alpha(0.5), q)
    assert tc.bottom_minus.kind == CONVENTION
    assert "count_minus_informational" in tc.flags
    # the would-be spin-up bound state is absorbed at weak coupling, while
    # the perturbed vacuum of the spin-down sector already sits below -eps
    assert tc.plus.count == 0
    assert tc.minus.count == 1
    assert tc.total == 1


def test_total_count_free_model(default):
    spec, q = default
    tc = total_count(spec.with_alpha(0.0), q)
    assert tc.total == 0


@settings(deadline=None, max_examples=50)
@given(
    alpha=st.floats(min_value=0.1, max_value=5.0, allow_nan=False),
    u=st.floats(min_value=-1.5, max_value=1.0, allow_nan=False),
    sigma=st.sampled_from((PLUS, MINUS)),
)
def test_inertia_agreement_property(tiny, alpha, u, sigma):
    # the load-bearing identity: pencil inertia == direct count, any admissible z
    spec, q = tiny
    s = spec.with_alpha(alpha)
    z = sigma * s.eps - 10.0**u
    schur = count_negative_eigs(assemble_r(s, q, sigma, z).r, sigma=sigma, z=z)
    direct = eig_below(assemble_block(s, q, sigma), z)
    if schur.flagged == 0 and direct.flagged == 0:
        assert schur.count == direct.count


@pytest.fixture(scope="module")
def tiny():
    spec = ModelSpec()
    return spec, default_grid(spec, 3, 4.0)
