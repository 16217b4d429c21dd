import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgraph import (
    EigenvalueRecord,
    EnumerationCapError,
    ExpansionConfig,
    NotRegularError,
    build_step_graph,
    chain_to_trig_polynomial,
    convergence_scan,
    explicit_eigenvalue,
    power_law_fit,
    regularity,
    root_zone,
    separator,
)
from qgraph.explicit import oracle_eigenvalue, orbit_level_sums, window_median

G = build_step_graph(0.3, 0.5)
# bisection oracle values (see test_spectral)
K1 = 4.107148743807135
K10 = 39.305209327188216
K100 = 394.96471289092784


def test_config_validation():
    with pytest.raises(ValueError):
        ExpansionConfig(0)
    with pytest.raises(ValueError):
        ExpansionConfig(5, nu_max=0)
    with pytest.raises(ValueError):
        ExpansionConfig(5, nu_tail_tol=-1.0)
    with pytest.raises(ValueError):
        ExpansionConfig(5, order="random")
    with pytest.raises(EnumerationCapError):
        ExpansionConfig(29)
    assert ExpansionConfig(150, use_grouped=True).q_max == 150


@pytest.mark.parametrize("q_max", [1, 3, 8])
def test_free_well_is_exact(q_max):
    g = build_step_graph(0.4, 0.0)
    for n in range(1, 101):
        assert explicit_eigenvalue(g, n, ExpansionConfig(q_max)) == pytest.approx(math.pi * n / g.S0, abs=1e-12)


def test_free_well_is_exact_all_lengths():
    g = build_step_graph(0.4, 0.0)
    recs = convergence_scan(g, range(1, 101), range(0, 21), ExpansionConfig(20))
    recs += convergence_scan(g, [1, 10, 100], [25], ExpansionConfig(25))
    for r in recs:
        assert r.k_explicit == pytest.approx(math.pi * r.n / g.S0, abs=1e-12)


def test_free_well_grouped_to_long_orbits():
    g = build_step_graph(0.3, 0.0)
    cfg = ExpansionConfig(150, use_grouped=True)
    sums = orbit_level_sums(g, [1, 10, 100], cfg)
    assert np.all(sums == 0.0)


def test_first_root_at_q20():
    cfg = ExpansionConfig(20, nu_max=50)
    k = explicit_eigenvalue(G, 1, cfg)
    # regression value of this implementation
    assert k == pytest.approx(4.1051304416108065, rel=1e-12)
    eps20 = abs(k - K1) / K1
    eps5 = abs(explicit_eigenvalue(G, 1, ExpansionConfig(5)) - K1) / K1
    assert eps20 < 1e-3
    assert eps20 < eps5


@pytest.mark.parametrize("n, k_ref", [(10, K10), (100, K100)])
def test_higher_roots_at_q20(n, k_ref):
    k = explicit_eigenvalue(G, n, ExpansionConfig(20))
    assert abs(k - k_ref) / k_ref < 1e-5


def test_oracle_matches_frozen_values():
    assert oracle_eigenvalue(G, 1) == pytest.approx(K1, rel=2e-12)
    assert oracle_eigenvalue(G, 100) == pytest.approx(K100, rel=2e-12)


@pytest.mark.parametrize("q_max", [10, 18])
def test_zone_membership(q_max):
    trig = chain_to_trig_polynomial(G.chain())
    rep = regularity(trig)
    ns = list(range(1, 101))
    sums = orbit_level_sums(G, ns, ExpansionConfig(q_max))
    for i, n in enumerate(ns):
        k = math.pi * n / G.S0 - 2 / math.pi * math.fsum(sums[i])
        assert separator(rep, n - 1) <= k <= separator(rep, n)


def test_zone_membership_long_orbits():
    trig = chain_to_trig_polynomial(G.chain())
    rep = regularity(trig)
    recs = convergence_scan(G, range(1, 101), [150], ExpansionConfig(150, use_grouped=True))
    for r in recs:
        z = root_zone(rep, r.n)
        assert z.sep_lo <= r.k_explicit <= z.sep_hi


@pytest.mark.parametrize("order", ["total", "prime"])
def test_grouped_equals_enumerated(order):
    ns = [1, 2, 10, 37, 100]
    for q_max in (1, 2, 5, 11, 18):
        a = orbit_level_sums(G, ns, ExpansionConfig(q_max, order=order))
        b = orbit_level_sums(G, ns, ExpansionConfig(q_max, order=order, use_grouped=True))
        for i, n in enumerate(ns):
            ka = math.pi * n / G.S0 - 2 / math.pi * math.fsum(a[i])
            kb = math.pi * n / G.S0 - 2 / math.pi * math.fsum(b[i])
            assert ka == pytest.approx(kb, abs=1e-12)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0.05, 0.9), st.integers(1, 60), st.integers(1, 14))
def test_grouped_equals_enumerated_random_graphs(b, lam, n, q_max):
    g = build_step_graph(b, lam)
    ka = explicit_eigenvalue(g, n, ExpansionConfig(q_max))
    kb = explicit_eigenvalue(g, n, ExpansionConfig(q_max, use_grouped=True))
    assert ka == pytest.approx(kb, abs=1e-12)


@pytest.mark.parametrize("order", ["total", "prime"])
def test_doubling_nu_max_is_harmless(order):
    for n in (1, 10, 100):
        k50 = explicit_eigenvalue(G, n, ExpansionConfig(18, nu_max=50, order=order))
        k100 = explicit_eigenvalue(G, n, ExpansionConfig(18, nu_max=100, order=order))
        assert abs(k100 - k50) < 1e-12


def test_tail_tolerance_only_drops_tiny_terms():
    for n in (1, 100):
        exact = explicit_eigenvalue(G, n, ExpansionConfig(16, order="prime"))
        trimmed = explicit_eigenvalue(G, n, ExpansionConfig(16, nu_tail_tol=1e-20, order="prime"))
        assert trimmed == pytest.approx(exact, abs=1e-12)


def test_thread_count_does_not_change_bits():
    ns = [1, 10, 100]
    cfg = ExpansionConfig(16)
    one = orbit_level_sums(G, ns, cfg, threads=1)
    four = orbit_level_sums(G, ns, cfg, threads=4)
    assert one.tobytes() == four.tobytes()
    again = orbit_level_sums(G, ns, cfg, threads=1)
    assert one.tobytes() == again.tobytes()


def test_q_zero_is_mean_level():
    recs = convergence_scan(G, [1, 10], [0], ExpansionConfig(1))
    for r in recs:
        assert r.k_explicit == math.pi * r.n / G.S0
        assert r.eps == pytest.approx(abs(math.pi * r.n / G.S0 - r.k_oracle) / r.k_oracle, rel=1e-15)


def test_scan_layout_and_errors():
    recs = convergence_scan(G, [1, 10, 100], range(1, 26), ExpansionConfig(25))
    assert [(r.n, r.q) for r in recs] == [(n, q) for n in (1, 10, 100) for q in range(1, 26)]
    assert all(r.eps >= 0 for r in recs)
    for n in (1, 10, 100):
        oracle = {r.k_oracle for r in recs if r.n == n}
        assert len(oracle) == 1
    with pytest.raises(ValueError):
        convergence_scan(G, [1], [], ExpansionConfig(5))
    with pytest.raises(ValueError):
        convergence_scan(G, [], [1], ExpansionConfig(5))
    with pytest.raises(ValueError):
        explicit_eigenvalue(G, 0, ExpansionConfig(5))


def test_rejects_non_regular_graph():
    class Fake:
        r = 1.0

    with pytest.raises(NotRegularError):
        orbit_level_sums(Fake(), [1], ExpansionConfig(3))


def test_both_orders_improve_on_mean_level():
    for order, q in (("total", 25), ("prime", 18)):
        recs = convergence_scan(G, [1, 10, 100], [0, q], ExpansionConfig(q, order=order))
        by = {(r.n, r.q): r.eps for r in recs}
        for n in (1, 10, 100):
            assert by[(n, q)] < by[(n, 0)] / 10


def test_power_law_fit_on_exact_power_law():
    recs = [EigenvalueRecord(1, q, 1.0 - 0.3 * q**-2.0, 1.0) for q in range(1, 151)]
    assert power_law_fit(recs) == pytest.approx(-2.0, abs=1e-9)
    assert power_law_fit(recs, 5, 25) == pytest.approx(-2.0, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.floats(1e-2, 1.0), st.floats(-3.0, -0.5))
def test_power_law_fit_recovers_any_slope(c, slope):
    # eps is carried as 1 - k_explicit, so only about 1e-16 / eps digits survive
    recs = [EigenvalueRecord(1, q, 1.0 - c * q**slope, 1.0) for q in range(5, 60)]
    assert power_law_fit(recs) == pytest.approx(slope, abs=1e-6)


def test_power_law_fit_errors():
    recs = [EigenvalueRecord(1, q, 1.0 - 0.1 / q**2, 1.0) for q in range(1, 30)]
    with pytest.raises(ValueError):
        power_law_fit(recs, 5, 10)  # too few points
    with pytest.raises(ValueError):
        power_law_fit(recs, 15, 29)  # too narrow in q
    with pytest.raises(ValueError):
        power_law_fit(recs + [EigenvalueRecord(2, 10, 1.1, 1.0)])
    flat = [EigenvalueRecord(1, q, 1.0, 1.0) for q in range(1, 30)]
    with pytest.raises(ValueError):
        power_law_fit(flat)


def test_window_median():
    recs = [EigenvalueRecord(1, q, 1.0 + q, 1.0) for q in range(1, 11)]
    assert window_median(recs, 5, 10) == 7.5


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6, allow_subnormal=False), min_size=0, max_size=300))
def test_compensated_sum_against_exact_rounding(values):
    from qgraph.explicit import compensated_sum

    x = np.array(values, dtype=float)
    ours = float(compensated_sum(x[None, :])[0])
    exact = math.fsum(values)
    bound = 2 * np.finfo(float).eps * abs(exact) + 1e-28 * len(values) * float(np.sum(np.abs(x)))
    assert abs(ours - exact) <= bound


def test_compensated_sum_cancellation():
    from qgraph.explicit import compensated_sum

    x = np.array([[1e16, 1.0, -1e16, 1e-3] * 7])
    assert compensated_sum(x)[0] == pytest.approx(7 * 1.001, rel=1e-15)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-(10**9), 10**9), min_size=1, max_size=20), st.floats(0.01, 0.99))
def test_phase_reduction(ms, f):
    mpmath = pytest.importorskip("mpmath")
    from qgraph.explicit import _turns

    f1 = np.longdouble(f)
    ours = _turns(np.array(ms, dtype=np.int64), f1)
    mpmath.mp.dps = 40
    for m, t in zip(ms, ours):
        ref = mpmath.mpf(m) * mpmath.mpf(f)
        frac = float(ref - mpmath.nint(ref))
        # compare on the circle
        assert abs(math.remainder(t - frac, 1.0)) < 1e-13
