"""End-to-end smoke checks for the Python bindings.

Run directly (PYTHONPATH pointing at the built package); plain asserts keep
the harness dependency-free.
"""

import json
import math

import hodgekit as hk


def test_version():
    assert hk.__version__ == "0.1.0"


def test_torus_flat_family():
    tb = hk.TorusBackend(d=2, K=1, tau=0.3 + 1.1j, volume=2.0)
    theta = [tb.constant_vector01([[0.3, 0.0], [0.0, 0.0]]),
             tb.constant_vector01([[0.0, 0.0], [0.0, 0.25]])]
    phi = hk.solve_kuranishi(tb, theta, 4)
    assert phi.nparams == 2 and phi.M == 4
    res = hk.mc_residual(tb, phi, [0.2, 0.1])
    assert res.value <= 1e-13 and not res.outside_radius
    assert hk.obstruction_terms(tb, phi) == []


def test_majorant_catalan():
    maj = hk.majorant(1.0, 1.0, 5)
    assert maj.x[1:] == [1.0, 1.0, 2.0, 5.0, 14.0]
    assert math.isclose(maj.tau_threshold, 0.25, rel_tol=0, abs_tol=1e-15)
    assert maj.radius_accepts(0.25) and not maj.radius_accepts(0.2525)


def test_scalar_transport():
    blk = hk.BlockUpperUnipotent(1, 1, 1)
    blk.B02 = [[0.5j]]
    blk.B12 = [[1.0]]
    seed = hk.KahlerSeed.from_row([1.0])
    state = hk.solve_alpha0(blk, seed)
    assert abs(state.alpha0[0] - (4.0 / 3.0 - 2.0j / 3.0)) <= 1e-13
    assert state.validate() == []


def test_metric_update():
    u = hk.metric_update([[1.0]], [[0.5]])
    assert abs(u[0, 0] - 4.0 / 3.0) <= 1e-12
    try:
        hk.metric_update([[1.0]], [[1.0]])
    except RuntimeError:
        pass
    else:
        raise AssertionError("expansive update must be rejected")


def test_lattice():
    ns = hk.IntegralLattice.hyperbolic_U()
    v = hk.mukai_vector(1, [0, 0], 0)
    assert hk.mukai_pairing(v, v, ns) == -2
    for n in range(1, 6):
        dim = hk.moduli_dimension(hk.mukai_vector(1, [0, 0], -n), ns)
        assert dim.value == 2 * n and not dim.warned_negative_square


def test_scenario_roundtrip():
    sdir = hk.default_scenario_dir()
    names = hk.list_scenarios(sdir)
    assert "dgla_unobstructed" in names
    ok, report_text = hk.run_scenario_file(hk.scenario_path(sdir, "dgla_unobstructed"))
    assert ok
    report = json.loads(report_text)
    assert report["schema_version"] == 1
    assert all(chk["pass"] for chk in report["checks"])


def main():
    tests = [(name, fn) for name, fn in sorted(globals().items())
             if name.startswith("test_") and callable(fn)]
    for name, fn in tests:
        fn()
        print(f"ok {name}")
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    main()
