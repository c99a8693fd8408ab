"""Acceptance gate: one test per machine verification check, full level.

Each test prints a single ACCEPTANCE line so the run log doubles as the
sign-off table. The checks themselves live in spinboson.verify with pinned
tolerances; this file only drives them and refuses to pass on anything but
a clean result.
"""

import pytest

from spinboson import FULL_NAMES, cli, run_named


@pytest.fixture(scope="module")
def config():
    return cli.parse_config("{}")


@pytest.mark.parametrize("name", FULL_NAMES)
def test_acceptance(config, name):
    result = run_named(config, name)
    verdict = "PASS" if result.passed else "FAIL"
    print(f"ACCEPTANCE {name}: {verdict} ({result.detail})")
    assert result.passed, f"{name}: {result.detail}"
