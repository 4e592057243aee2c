import pytest

from conftest import random_temporal, two_burst
from tempograph.segmentation import (
    Candidate,
    InfeasibleError,
    approx_dp_segment,
    brute_force_segment,
    candidate_cap,
    exact_dp_segment,
    post_process,
    segment,
    sprs,
)
from tempograph.static_densest import exact_densest
from tempograph.temporal_graph import Interval, TemporalGraph, induced_static


def _tiles(seg, r):
    spans = [(e.lo, e.hi) for e in seg.episodes]
    assert spans[0][0] == 1 and spans[-1][1] == r
    assert all(b[0] == a[1] + 1 for a, b in zip(spans, spans[1:]))


@pytest.mark.parametrize("solve", [brute_force_segment, exact_dp_segment])
def test_two_burst(solve):
    g = two_burst()
    seg = solve(g, 2)
    assert seg.total_profit == pytest.approx(2.5)
    assert seg.episodes[0].end < 5 <= seg.episodes[1].start


def test_k_one_and_k_r(rng):
    g = random_temporal(rng, 8, 6)
    whole = exact_densest(induced_static(g, Interval(1, g.r))).density
    assert exact_dp_segment(g, 1).total_profit == pytest.approx(whole)
    for eps in (0.1, 1.0):
        assert approx_dp_segment(g, 1, eps, "exact").total_profit == pytest.approx(whole)
    per_step = exact_dp_segment(g, g.r)
    assert [(e.lo, e.hi) for e in per_step.episodes] == [(t, t) for t in range(1, g.r + 1)]


def test_infeasible_k():
    g = two_burst()
    with pytest.raises(InfeasibleError):
        segment(g, 0)
    with pytest.raises(InfeasibleError):
        segment(g, g.r + 1)


def test_exact_dp_matches_brute_force(rng):
    for _ in range(60):
        g = random_temporal(rng, rng.randint(3, 10), rng.randint(1, 12))
        k = rng.randint(1, min(4, g.r))
        assert exact_dp_segment(g, k).total_profit == pytest.approx(
            brute_force_segment(g, k).total_profit, abs=1e-9)


def test_sprs_examples():
    flat = [Candidate(a, 1.0) for a in range(1, 8)]
    assert [c.start for c in sprs(flat, 4.0, 2, 0.5, 4)] == [1, 7]
    rising = [Candidate(a, float(a)) for a in range(1, 8)]
    assert sprs(rising, 0.0, 2, 0.5, 4) == rising
    assert sprs(rising, 100.0, 1, 0.5, 4)[-1].start == 7


def test_approx_guarantees(rng):
    for _ in range(40):
        g = random_temporal(rng, rng.randint(3, 10), rng.randint(2, 12))
        k = rng.randint(1, min(4, g.r))
        opt = brute_force_segment(g, k).total_profit
        for eps in (0.1, 1.0):
            ds = approx_dp_segment(g, k, eps, "exact")
            assert opt <= (1 + eps) * ds.total_profit + 1e-9
            assert ds.total_profit <= opt + 1e-9
            ap = approx_dp_segment(g, k, eps, "incremental", eps)
            assert opt <= 2 * (1 + eps) ** 2 * ap.total_profit + 1e-9
            _tiles(ap, g.r)
            assert len(ap.episodes) == k


def test_two_burst_approx_and_post_process():
    g = two_burst()
    seg = approx_dp_segment(g, 2, 0.1, "incremental", 0.1)
    assert seg.episodes[0].end < 5 <= seg.episodes[1].start
    post = post_process(g, seg)
    assert [e.density for e in post.episodes] == [1.0, 1.5]
    assert post_process(g, post).episodes == post.episodes


def test_post_process_keeps_empty_episode():
    g = TemporalGraph.from_edges([(0, 1, 1), (2, 3, 2)])
    seg = exact_dp_segment(g, 2)
    assert [e.density for e in post_process(g, seg).episodes] == [0.5, 0.5]


def test_table_monotone(rng):
    for _ in range(30):
        g = random_temporal(rng, rng.randint(3, 10), rng.randint(3, 15))
        k = rng.randint(1, min(4, g.r))
        for mode in ("kgapprox", "kgoptds"):
            s = segment(g, k, mode, eps_dp=0.5).profit_table
            for ell in range(1, k + 1):
                assert all(s[ell][i] <= s[ell][i + 1] + 1e-12 for i in range(1, g.r))
                if ell > 1:
                    assert all(s[ell - 1][i] <= s[ell][i] + 1e-12 for i in range(1, g.r + 1))


def test_deterministic(rng):
    g = random_temporal(rng, 12, 20)
    a = segment(g, 3, "kgapprox")
    b = segment(g, 3, "kgapprox")
    assert a.episodes == b.episodes and a.total_profit == b.total_profit


def test_tiny_eps_equals_exact(rng):
    for _ in range(25):
        g = random_temporal(rng, rng.randint(3, 10), rng.randint(2, 12))
        k = rng.randint(1, min(4, g.r))
        tiny = approx_dp_segment(g, k, 1e-9, "exact")
        assert tiny.total_profit == pytest.approx(exact_dp_segment(g, k).total_profit, abs=1e-9)


def test_provable_candidate_bound(rng):
    # SPRS keeps bases two positions apart more than delta apart, so the list is
    # at most 2 + 2 * ceil(k (1 + eps) / eps) long
    for _ in range(40):
        g = random_temporal(rng, rng.randint(3, 10), rng.randint(10, 30))
        k = rng.randint(1, 4)
        if k > g.r:
            continue
        eps = rng.choice([0.5, 1.0, 2.0])
        for densest in ("exact", "incremental"):
            seg = approx_dp_segment(g, k, eps, densest)
            assert seg.max_candidates <= 2 * candidate_cap(k, eps) - 2


def test_modes_dispatch():
    g = two_burst()
    for mode in ("optimal", "kgoptdp", "kgoptds", "kgapprox"):
        seg = segment(g, 2, mode, post=True)
        assert seg.mode == mode and seg.total_profit == pytest.approx(2.5)
    with pytest.raises(ValueError):
        segment(g, 2, "nope")
