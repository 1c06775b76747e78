import math

import pytest

cptgrowth = pytest.importorskip("cptgrowth")


def test_utility_values():
    up = cptgrowth.UtilityParams()
    assert cptgrowth.u(up, 0.0) == 0.0
    assert cptgrowth.u(up, 1.0) == 1.0
    assert cptgrowth.u(up, -1.0) == pytest.approx(-2.5, abs=1e-14)
    assert cptgrowth.v(up, math.e) == pytest.approx(1.0, abs=1e-14)


def test_envelope_regimes():
    up = cptgrowth.UtilityParams()
    a, b = cptgrowth.global_envelope_points(up)
    assert math.exp(-0.3) < a <= math.exp(-0.2)
    assert b > 1.0

    two = cptgrowth.Envelope(up, math.exp(-0.2))
    three = cptgrowth.Envelope(up, math.exp(-0.3))
    assert two.two_region
    assert not three.two_region
    assert 1.0 < two.d < two.b
    # the optimal level never lands strictly inside the chord interval
    lv = two.optimal_level(two.derivative(two.d) * 0.999999)
    assert lv >= two.d - 1e-9


def test_weighting_round_trip():
    w = cptgrowth.Weighting.jin_zhou()
    for p in (0.05, 0.3, 0.7, 0.95):
        assert w.w_inv(w.w(p)) == pytest.approx(p, abs=1e-12)
    power = cptgrowth.Weighting.power()
    assert power.w(0.25) == pytest.approx(0.5, abs=1e-15)
    assert power.nu(0.75) == pytest.approx(0.9375, abs=1e-15)


def test_choquet_identity_is_mean():
    ident = cptgrowth.Weighting.identity()
    got = cptgrowth.choquet_expectation(lambda p: 2.0 + 3.0 * p, ident)
    assert got == pytest.approx(3.5, abs=1e-9)


def test_solve_reference_cell():
    sol = cptgrowth.solve(c=0.2, g=0.0, weighting="identity", phi_points=1201)
    assert sol["status"] == "solved"
    assert sol["regime"] == "TwoRegion"
    assert sol["lambda"] == pytest.approx(2.0894157, rel=1e-4)
    assert sol["budget_residual"] < 1e-6
    assert sol["zhang"]["l"] == pytest.approx(1.615321e-05, rel=1e-4)

    three = cptgrowth.solve(c=0.3, g=0.0, weighting="identity", phi_points=1201)
    assert three["regime"] == "ThreeRegion"


def test_infeasible_scenario_reported():
    sol = cptgrowth.solve(c=0.1, g=0.2, weighting="identity", phi_points=801)
    assert sol["status"] == "infeasible"


def test_wealth_map_floor_and_comparison():
    rhos = [0.6, 1.0, 1.8]
    ours, zhang = cptgrowth.wealth_map(0.1, 0.0, "identity", rhos, phi_points=1201)
    floor = math.exp(0.02 - 0.1)
    for o, z in zip(ours, zhang):
        assert o >= floor - 1e-12
        assert z >= floor - 1e-12
    # bad states: ours at least the reference map
    assert ours[-1] >= zhang[-1] - 1e-9
