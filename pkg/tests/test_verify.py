import pytest

from spinspec.verify import verify_paper


@pytest.fixture(scope="module")
def report():
    return verify_paper()


def _by_name(r):
    return {c.name: c for c in r.checks}


def test_report_has_enough_checks(report):
    assert len(report.checks) >= 30
    assert report.settings["seed"] == 42
    assert report.settings["triple_sweep"] == {"lo": 0.0, "hi": 2.0, "steps": 201}


def test_all_two_spin_and_catalog_checks_pass(report):
    failing = [c.name for c in report.failures() if not c.name.startswith("K3")]
    assert failing == []


def test_fresh_build_overall_pass(report):
    # Kept at full strength: the K3 checks are expected to stay red, see README.
    assert report.passed, [f"{c.name}: {c.note}" for c in report.failures()]


def test_failures_carry_explanations(report):
    for c in report.failures():
        assert c.note


@pytest.mark.parametrize("hbar", [2.0, 0.5])
def test_closed_forms_scale_with_hbar(hbar):
    checks = _by_name(verify_paper(hbar=hbar))
    for name in ("H2 spectrum matches E1..E4", "K2 spectrum matches k1..k4",
                 "H3 spectrum matches the commuting sign formula", "tr(H2) = 0", "tr(K2) = 0"):
        assert checks[name].passed, name


def test_fault_injection_breaks_k2_checks(report):
    faulty = verify_paper(fault="k2-entry")
    assert not faulty.passed
    checks = _by_name(faulty)
    assert not checks["K2 matrix equals printed K~"].passed
    assert not checks["K2 spectrum matches k1..k4"].passed
    assert checks["H2 spectrum matches E1..E4"].passed


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("SPINSPEC_SEED", "7")
    r = verify_paper()
    assert r.settings["seed"] == 7
    assert _by_name(r)["commutator [A(x)I, B(x)A] = [A,B](x)A"].passed


def test_report_is_deterministic(report):
    again = verify_paper()
    assert [(c.name, c.measured) for c in again.checks] == [(c.name, c.measured) for c in report.checks]
