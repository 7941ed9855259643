import json

import pytest

from stable_potentials import make_params
from stable_potentials.verify import (
    Check,
    MCPlan,
    all_passed,
    identity_suite,
    mc_suite,
    perturbed,
    report_dict,
    write_report,
)

KEYS = {"check", "params", "observed", "threshold", "pass"}


@pytest.mark.parametrize("alpha, rho", [(1.0, 0.5), (0.4, 0.3)])
def test_identity_suite_passes(alpha, rho):
    checks = identity_suite(make_params(alpha, rho), n_duality=200)
    failed = [c.check for c in checks if not c.passed]
    assert not failed
    names = {c.check for c in checks}
    assert {"duality.u1", "marginal.u_xyz", "marginal.r_xyz_zero", "limit.r1_zero"} <= names


def test_perturbed_leaves_admissible_set():
    q = perturbed(make_params(1.0, 0.5), 0.1)
    assert q.rho == pytest.approx(0.6) and q.alpha == 1.0


def test_report_schema(tmp_path):
    checks = [Check("a", {"alpha": 1.0, "rho": 0.5}, 0.1 + 0.2, 1.0, True), Check("b", {}, 2.0, 1.0, False)]
    path = tmp_path / "r.json"
    write_report(checks, path, "identities")
    data = json.loads(path.read_text())
    assert data == report_dict(checks, "identities")
    assert data["suite"] == "identities" and data["version"]
    assert all(set(c) == KEYS for c in data["checks"])
    # full precision survives the round trip
    assert data["checks"][0]["observed"] == 0.1 + 0.2
    assert not all_passed(checks)
    assert list(tmp_path.iterdir()) == [path]


def test_small_mc_suite_shape():
    plan = MCPlan(n_paths=3_000, step=1e-3, seed=1)
    checks = mc_suite(make_params(1.0, 0.5), plan)
    names = [c.check for c in checks]
    for tag in ("killed", "reflected"):
        assert f"mc.{tag}.occupation_sup_rel" in names
        assert f"mc.{tag}.overshoot_ks" in names
        assert f"mc.{tag}.perturbed_rho_+0.1" in names
    assert all(set(c.to_dict()) == KEYS for c in checks)
    assert all(c.params["seed"] == 1 for c in checks)
    # the perturbed targets are far off even at this size
    assert all(c.passed for c in checks if "perturbed" in c.check)
