"""Fractional matching: ladder growth, schedules, sampled variant."""

from fractions import Fraction

import pytest

from awakesim.fractional import (FractionalAssignment, SampleSchedule,
                                 extract_vertex_cover, iterated_log,
                                 sampled_fractional, saturation_phase,
                                 vanilla_fractional)
from awakesim.graphs import (Graph, canon, cycle_graph, gen_bipartite,
                             gen_gnp, path_graph, star_graph)
from awakesim.oracles import verify_vertex_cover


def ref_vanilla(g, eps):
    """Independent reference: simultaneous freezing on the (1+eps) ladder."""
    eps = Fraction(eps)
    delta = g.max_degree
    x = {e: Fraction(1, delta) for e in g.edges()}
    node_frozen = {}
    edge_frozen = {}
    j = 0
    while len(edge_frozen) < g.m:
        w = Fraction(1, delta) * (1 + eps) ** j
        cv = {v: Fraction(0) for v in range(g.n)}
        for e, val in x.items():
            cur = val if e in edge_frozen else w
            cv[e[0]] += cur
            cv[e[1]] += cur
        newly = [v for v in range(g.n)
                 if v not in node_frozen and cv[v] >= 1 - eps
                 and any(canon(v, u) not in edge_frozen for u in g.neighbors(v))]
        for v in newly:
            node_frozen[v] = j
            for u in g.neighbors(v):
                e = canon(v, u)
                if e not in edge_frozen:
                    edge_frozen[e] = j
                    x[e] = w
        j += 1
        assert j < 10_000
    return x, edge_frozen, node_frozen


def test_iterated_log_values():
    assert iterated_log(2 ** 16, 1) == 16
    assert iterated_log(2 ** 16, 2) == 4
    assert iterated_log(2 ** 16, 3) == 2
    assert iterated_log(2 ** 16, 9) == 2  # floored
    assert iterated_log(1000, 1) == 10
    assert saturation_phase(2 ** 16) == 3
    assert saturation_phase(4) == 1


def test_single_edge_saturates_at_one():
    g = path_graph(2)
    asg = vanilla_fractional(g, Fraction(1, 10))
    assert asg.x[(0, 1)] == 1
    assert asg.frozen_round[(0, 1)] == 0
    assert asg.frozen_nodes == {0, 1}
    assert asg.total() == 1


def test_vanilla_matches_reference():
    cases = [
        (path_graph(3), Fraction(1, 10)),
        (cycle_graph(4), Fraction(1, 10)),
        (star_graph(5), Fraction(1, 4)),
        (gen_gnp(24, 0.25, seed=3), Fraction(1, 10)),
        (gen_bipartite(10, 10, 0.3, seed=7), Fraction(1, 20)),
        (gen_gnp(40, 0.1, seed=9), Fraction(2, 5)),
    ]
    for g, eps in cases:
        asg = vanilla_fractional(g, eps)
        x, edge_frozen, node_frozen = ref_vanilla(g, eps)
        assert asg.x == x
        assert asg.frozen_round == edge_frozen
        assert {v: f for v, f in asg.node_freeze.items()
                if f is not None} == node_frozen


def test_vanilla_node_constraints():
    for seed in range(8):
        g = gen_gnp(30, 0.2, seed=seed)
        eps = Fraction(1, 10)
        asg = vanilla_fractional(g, eps)
        vals = asg.node_values()
        for v in range(g.n):
            assert vals[v] <= 1
            if asg.node_freeze[v] is not None:
                assert vals[v] >= 1 - eps  # frozen means genuinely tight
        # every edge froze with at least one tight endpoint
        for u, v in g.edges():
            assert (asg.node_freeze[u] is not None
                    or asg.node_freeze[v] is not None)


def test_vanilla_round_bound():
    g = gen_gnp(60, 0.15, seed=2)
    eps = Fraction(1, 10)
    asg = vanilla_fractional(g, eps)
    # every freeze happens by the round where w reaches 1
    import math
    bound = math.ceil(math.log(g.max_degree) / math.log1p(0.1)) + 1
    assert all(f <= bound for f in asg.frozen_round.values())


def test_schedule_stop_rule_fires_immediately():
    # 1/log2(n) dwarfs eps*ln(1+eps)/1000 for any n this side of absurd,
    # so the first phase already stops the pre-growth sampling stage
    for n in (10, 2 ** 10, 2 ** 16, 2 ** 40):
        sched = SampleSchedule(n, 30, Fraction(1, 20))
        assert sched.i_stop == 1
        assert sched.stop_round == 0


def test_schedule_ladder_and_phases():
    sched = SampleSchedule(2 ** 16, 10, Fraction(1, 10))
    assert sched.w(0) == Fraction(1, 10)
    assert sched.w(3) == Fraction(1, 10) * Fraction(11, 10) ** 3
    assert sched.w(sched.growth_rounds()) >= 1
    assert sched.w(sched.growth_rounds() - 1) < 1
    # a deep ladder walks through the phases in order
    deep = SampleSchedule(2 ** 16, 2048, Fraction(1, 10))
    phases = [deep.phase(j) for j in range(deep.growth_rounds())]
    assert phases == sorted(phases)
    assert phases[0] == 2 and phases[-1] == 3


def test_schedule_probability_overrides():
    sched = SampleSchedule(2 ** 16, 10, Fraction(1, 10))
    # default: C / L_i^4 capped at 1
    assert sched.p_of_phase(1) == Fraction(64, 16 ** 4)
    assert sched.p_of_phase(3) == 1
    forced = SampleSchedule(2 ** 16, 10, Fraction(1, 10),
                            force_phase_probabilities=1)
    assert forced.p_of_phase(1) == 1
    partial = SampleSchedule(2 ** 16, 10, Fraction(1, 10),
                             force_phase_probabilities={1: Fraction(1, 3)})
    assert partial.p_of_phase(1) == Fraction(1, 3)
    assert partial.p_of_phase(3) == 1  # falls back to the formula


def test_sampled_equals_vanilla_on_defaults():
    for seed in (1, 2, 3):
        g = gen_gnp(50, 0.12, seed=seed)
        v = vanilla_fractional(g, Fraction(1, 10))
        s, ledger, diag = sampled_fractional(g, Fraction(1, 10), seed=seed)
        assert s == v
        assert s.dump() == v.dump()
        assert diag.heavy_events == 0 and diag.spoiled_value == 0
        assert ledger.rounds >= 1


def test_sampled_forced_sampling_path():
    g = gen_gnp(80, 0.08, seed=21)
    kw = dict(force_stop_round=6, force_phase_probabilities=Fraction(1, 3))
    a1, l1, d1 = sampled_fractional(g, Fraction(1, 25), seed=9, **kw)
    a2, l2, d2 = sampled_fractional(g, Fraction(1, 25), seed=9, **kw)
    assert a1 == a2 and l1 == l2 and d1 == d2
    vals = a1.node_values()
    assert all(c <= 1 for c in vals.values())
    for u, v in g.edges():
        assert (a1.node_freeze[u] is not None
                or a1.node_freeze[v] is not None)
    assert l1.rounds > 6  # sampling rounds happened before the growth stage


def test_sampled_empty_and_tiny():
    asg, ledger, diag = sampled_fractional(Graph(0), Fraction(1, 10), seed=1)
    assert asg.n == 0 and ledger.n == 0
    asg, _, _ = sampled_fractional(Graph(3), Fraction(1, 10), seed=1)
    assert asg.x == {} and asg.frozen_nodes == set()


def test_cover_extraction():
    for seed in range(6):
        g = gen_gnp(40, 0.15, seed=seed)
        asg, _, _ = sampled_fractional(g, Fraction(1, 20), seed=seed)
        cover = extract_vertex_cover(asg)
        assert cover == asg.frozen_nodes
        assert verify_vertex_cover(g, cover)


def test_spoiled_zero_without_heavy():
    g = gen_bipartite(15, 15, 0.2, seed=4)
    _, _, diag = sampled_fractional(g, Fraction(1, 20), seed=4)
    assert diag.heavy_events == 0
    assert diag.spoiled_value == 0
    assert diag.light_events >= 0


def test_eps_validation():
    with pytest.raises(ValueError):
        vanilla_fractional(path_graph(2), Fraction(1, 2))
    with pytest.raises(ValueError):
        vanilla_fractional(path_graph(2), 0)
