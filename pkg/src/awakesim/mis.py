"""Maximal-independent-set protocols with low node-averaged awake time.

Three composable stages:

1. ``greedy_partial_mis``, a sampled partial run of randomized greedy MIS.
   Only a p-fraction of nodes participate; everyone else sleeps through the
   competition and wakes once for a final announcement round.
2. ``part2_reduce``, iterated doubling-probability marking on the residual
   graph.  A node sleeps until the first round it marks itself, then stays
   awake to the end of the iteration; in-set nodes inform neighbors, which
   terminate immediately.
3. ``luby_mis``, the classic one-fresh-key-per-round protocol, used both as
   a standalone baseline and as the cleanup stage.

``awake_mis`` chains all three and returns a verified MIS together with a
per-stage awake ledger.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Set, Tuple

import numpy as np

from .engine import BROADCAST, AwakeLedger, Protocol, RunMetrics, run
from .graphs import Graph
from .oracles import verify_mis
from .rng import TWO64, coin_threshold, node_rng_array

log = logging.getLogger(__name__)


def ceil_log2(x: int) -> int:
    """Smallest k with 2**k >= x, for x >= 1."""
    return (int(x) - 1).bit_length()


def _clog2(n: int) -> int:
    # log-type protocol parameters never go below 1
    return max(1, ceil_log2(n))


@dataclass
class MisParams:
    """Tunables for the three-stage MIS; ``None`` means the size-derived default."""

    p: Optional[Fraction] = None          # participation fraction, default 1/ceil(log2 n)
    C: int = 4                            # phase-length constant in stage 2
    d: Optional[int] = None               # stage-2 degree bound, default ceil((log2 n)^2)
    K: Optional[int] = None               # stage-2 iterations, default 2*ceil(log2 log2 n)
    luby_round_cap: Optional[int] = None
    part1_window: Optional[int] = None    # fixed competition length of stage 1

    def __post_init__(self):
        if self.p is not None and not (0 < self.p <= 1):
            raise ValueError("p must lie in (0, 1]")
        if self.C < 1:
            raise ValueError("C must be >= 1")
        if self.d is not None and self.d < 2:
            raise ValueError("d must be >= 2")
        if self.K is not None and self.K < 1:
            raise ValueError("K must be >= 1")


def default_participation(n: int) -> Fraction:
    return Fraction(1, _clog2(n))


def default_part1_window(n: int) -> int:
    # fixed schedule length: all participants decide well within this w.h.p.
    return 4 * _clog2(n) + 4


def default_degree_bound(n: int) -> int:
    return max(2, math.ceil(math.log2(max(2, n)) ** 2))


def default_iterations(n: int) -> int:
    if n < 3:
        return 1
    return max(1, 2 * math.ceil(math.log2(math.log2(n))))


def part2_schedule(d: int, C: int = 4):
    """Per-iteration marking schedule for degree bound d.

    Returns (phase_rounds, thresholds) where phase_rounds[j] is the length of
    phase j+1 and thresholds[o] is the 64-bit marking cutoff for marking-round
    offset o.  Phase i of P = ceil(log2 d) marks with probability min(1, 2^i/d)
    and lasts max(1, C*(P-i)^2) rounds.
    """
    d = max(2, int(d))
    P = _clog2(d)
    phase_rounds = [max(1, C * (P - i) ** 2) for i in range(1, P + 1)]
    thresholds = []
    for i in range(1, P + 1):
        q = Fraction(min(2 ** i, d), d)
        thresholds.extend([coin_threshold(q)] * phase_rounds[i - 1])
    return phase_rounds, thresholds


def part2_round_count(d: int, K: int, C: int = 4) -> int:
    """Exact full-schedule round count: K iterations of (marking rounds + 1 cleanup)."""
    phase_rounds, _ = part2_schedule(d, C)
    return K * (sum(phase_rounds) + 1)


# ---------------------------------------------------------------------------
# Luby baseline / cleanup


class LubyProtocol(Protocol):
    """Fresh random key each round; strictly-smallest key in the closed
    undecided neighborhood joins, neighbors of joiners leave.  Every undecided
    node is awake every round until it decides."""

    uses_subround2 = True

    def bind(self, graph, seed):
        super().bind(graph, seed)
        self._adj = graph.adj_arrays()
        self._keys = np.zeros(self.n, dtype=np.uint64)
        self._in_s = np.zeros(self.n, dtype=bool)
        self._joined: Set[int] = set()

    def wake_set(self, rnd, alive):
        ids = np.nonzero(alive)[0]
        if ids.size:
            self._keys[ids] = node_rng_array(self.seed, ids, "luby", rnd)
        self._joined.clear()
        return ids

    def send1(self, v, rnd):
        return ((BROADCAST, int(self._keys[v])),)

    def send2(self, v, rnd, inbox1):
        mine = (int(self._keys[v]), v)
        for w, key in inbox1:
            if (key, w) < mine:
                return ()
        self._joined.add(v)
        return ((BROADCAST, "I"),)

    def finish(self, v, rnd, inbox1, inbox2):
        if v in self._joined:
            nbrs = self._adj[v]
            assert not self._in_s[nbrs].any(), "independence violated"
            self._in_s[v] = True
            return True
        if inbox2:
            return False
        return None


def luby_mis(g: Graph, seed: int, round_cap: Optional[int] = None,
             record_schedule: bool = False) -> Tuple[Set[int], AwakeLedger]:
    """Luby-style MIS.  Output always satisfies ``verify_mis``."""
    if g.n == 0:
        return set(), AwakeLedger(0)
    cap = round_cap if round_cap is not None else 64 * (_clog2(g.n) + 2)
    outputs, ledger, _ = run(g, LubyProtocol(), seed, cap, part="luby",
                             record_schedule=record_schedule)
    return {v for v, flag in outputs.items() if flag}, ledger


# ---------------------------------------------------------------------------
# Stage 1: sampled partial greedy

_P1_NONPART, _P1_COMPETING, _P1_JOINED, _P1_DOMINATED = 0, 1, 2, 3


class Part1Protocol(Protocol):
    """Partial randomized greedy.

    Each node draws one 64-bit key; holders of the lowest p-fraction
    participate.  Participants rebroadcast their key while undecided; the
    strict (key, id) minimum of a neighborhood joins and announces, which
    puts its competing neighbors to sleep as dominated.  At the fixed window
    end every node wakes for one announcement round and terminates with
    "in" / "out" / "residual".
    """

    uses_subround2 = True

    def __init__(self, p: Fraction, window: int):
        self.p = p
        self.window = window

    def bind(self, graph, seed):
        super().bind(graph, seed)
        n = self.n
        ids = np.arange(n, dtype=np.int64)
        self._keys = node_rng_array(seed, ids, "p1key", 0) if n else np.zeros(0, np.uint64)
        thr = coin_threshold(self.p)
        if thr >= TWO64:
            part = np.ones(n, dtype=bool)
        elif thr <= 0:
            part = np.zeros(n, dtype=bool)
        else:
            part = self._keys < np.uint64(thr)
        self._status = np.where(part, _P1_COMPETING, _P1_NONPART).astype(np.int8)
        self._adj = graph.adj_arrays()
        self._in_s = np.zeros(n, dtype=bool)
        self._pending: Set[int] = set()

    def on_round_start(self, rnd):
        self._pending.clear()

    def wake_set(self, rnd, alive):
        if rnd >= self.window:
            return np.nonzero(alive)[0]
        return np.nonzero(self._status == _P1_COMPETING)[0]

    def send1(self, v, rnd):
        if rnd >= self.window:
            if self._status[v] == _P1_JOINED:
                return ((BROADCAST, "I"),)
            return ()
        return ((BROADCAST, int(self._keys[v])),)

    def send2(self, v, rnd, inbox1):
        if rnd >= self.window or self._status[v] != _P1_COMPETING:
            return ()
        mine = (int(self._keys[v]), v)
        for w, key in inbox1:
            if (key, w) < mine:
                return ()
        self._pending.add(v)
        return ((BROADCAST, "I"),)

    def finish(self, v, rnd, inbox1, inbox2):
        if rnd >= self.window:
            st = self._status[v]
            if st == _P1_JOINED:
                return "in"
            if st == _P1_DOMINATED:
                return "out"
            if any(p == "I" for _, p in inbox1):
                return "out"
            return "residual"
        if v in self._pending:
            nbrs = self._adj[v]
            assert not self._in_s[nbrs].any(), "independence violated"
            self._in_s[v] = True
            self._status[v] = _P1_JOINED
        elif inbox2:
            self._status[v] = _P1_DOMINATED
        return None


def _run_part1(g: Graph, seed: int, p: Fraction, window: int,
               record_schedule: bool = False):
    proto = Part1Protocol(p, window)
    return run(g, proto, seed, window + 2, part="part1",
               record_schedule=record_schedule)


def greedy_partial_mis(g: Graph, seed: int, p, window: Optional[int] = None,
                       record_schedule: bool = False):
    """Partial greedy MIS at participation fraction ``p``.

    Returns ``(joined, removed, residual_graph, ledger)``.  ``removed`` holds
    dominated nodes; the residual graph is induced on nodes that neither
    participated nor have a joined neighbor.
    """
    p = p if isinstance(p, Fraction) else Fraction(p).limit_denominator(10 ** 12)
    if not (0 < p <= 1):
        raise ValueError("p must lie in (0, 1]")
    window = window if window is not None else default_part1_window(g.n)
    outputs, ledger, _ = _run_part1(g, seed, p, window, record_schedule)
    joined = {v for v, o in outputs.items() if o == "in"}
    removed = {v for v, o in outputs.items() if o == "out"}
    residual_nodes = sorted(v for v, o in outputs.items() if o == "residual")
    residual, _ = g.induced(residual_nodes)
    log.debug("part1: |S|=%d removed=%d residual n=%d max_degree=%d",
              len(joined), len(removed), residual.n, residual.max_degree)
    return joined, removed, residual, ledger


# ---------------------------------------------------------------------------
# Stage 2: doubling-probability marking

_P2_UNDECIDED, _P2_IN = 0, 2


class Part2Protocol(Protocol):
    """K iterations of phased marking under degree bound d.

    Phase i of an iteration marks each undecided node per round with
    probability min(1, 2^i/d); a node sleeps until its first mark of the
    iteration and then stays awake to the iteration end.  Subround 1: in-set
    nodes announce, hearers terminate as "out".  Subround 2: surviving marked
    nodes announce; the smallest id among adjacent announcers joins.  The last
    round of each iteration is a cleanup every alive node attends: nodes with
    no surviving competitor join, so nodes isolated in the residual pay one
    awake round per iteration.
    """

    uses_subround2 = True

    def __init__(self, d: int, iterations: int, phase_constant: int = 4):
        self.d = max(2, int(d))
        self.K = int(iterations)
        self.C = int(phase_constant)
        phase_rounds, thresholds = part2_schedule(self.d, self.C)
        self._marking = sum(phase_rounds)
        self.t_iter = self._marking + 1
        self._thr = np.array([min(t, TWO64 - 1) for t in thresholds], dtype=np.uint64)
        self._always = np.array([t >= TWO64 for t in thresholds], dtype=bool)

    def bind(self, graph, seed):
        super().bind(graph, seed)
        n = self.n
        self._adj = graph.adj_arrays()
        self._deg = np.array([graph.degree(v) for v in range(n)], dtype=np.int64)
        self._status = np.full(n, _P2_UNDECIDED, dtype=np.int8)
        self._in_s = np.zeros(n, dtype=bool)
        self._awake = np.zeros(n, dtype=bool)
        self._first = np.full(n, -1, dtype=np.int64)
        self._marks = np.zeros((n, self._marking), dtype=bool)

    def _begin_iteration(self, k: int, alive: np.ndarray):
        self._awake[:] = False
        self._first[:] = -1
        ids = np.nonzero(alive & (self._deg > 0))[0]
        if ids.size == 0:
            return
        # marking coins for the whole iteration, keyed by global round index
        base = k * self.t_iter
        idx = base + np.arange(self._marking, dtype=np.uint64)
        draws = node_rng_array(self.seed, ids[:, None], "p2mark", idx[None, :])
        marks = (draws < self._thr[None, :]) | self._always[None, :]
        self._marks[ids] = marks
        any_mark = marks.any(axis=1)
        firsts = marks.argmax(axis=1)
        self._first[ids[any_mark]] = firsts[any_mark]

    def wake_set(self, rnd, alive):
        k, o = divmod(rnd, self.t_iter)
        if o == 0:
            self._begin_iteration(k, alive)
        if o == self._marking:
            return np.nonzero(alive)[0]
        self._awake |= self._first == o
        return np.nonzero(alive & self._awake)[0]

    def send1(self, v, rnd):
        if self._status[v] == _P2_IN:
            return ((BROADCAST, "S"),)
        return ()

    def send2(self, v, rnd, inbox1):
        if self._status[v] != _P2_UNDECIDED or any(p == "S" for _, p in inbox1):
            return ()
        o = rnd % self.t_iter
        if o == self._marking:
            return ((BROADCAST, "A"),)
        if self._marks[v, o]:
            return ((BROADCAST, v),)
        return ()

    def finish(self, v, rnd, inbox1, inbox2):
        k, o = divmod(rnd, self.t_iter)
        st = self._status[v]
        cleanup = o == self._marking
        if st == _P2_IN:
            return "in" if cleanup else None
        if any(p == "S" for _, p in inbox1):
            return "out"
        if cleanup:
            if not inbox2:
                # no surviving competitor in the neighborhood: join
                assert not self._in_s[self._adj[v]].any(), "independence violated"
                self._in_s[v] = True
                return "in"
            return "residual" if k == self.K - 1 else None
        if self._marks[v, o] and all(v < wid for _, wid in inbox2):
            assert not self._in_s[self._adj[v]].any(), "independence violated"
            self._in_s[v] = True
            self._status[v] = _P2_IN
        return None


def part2_reduce(g: Graph, seed: int, params: Optional[MisParams] = None,
                 record_schedule: bool = False):
    """Run the marking stage on a residual graph.

    Returns ``(added, residual_graph, ledger)``.  If the graph's max degree
    exceeds the degree bound, the bound is raised to it (logged) so the
    marking probabilities stay meaningful.
    """
    params = params or MisParams()
    if g.n == 0:
        return set(), g, AwakeLedger(0)
    d = params.d if params.d is not None else default_degree_bound(g.n)
    d = max(2, min(d, max(2, g.max_degree)))
    if g.max_degree > d:
        log.info("part2: degree bound raised %d -> %d", d, g.max_degree)
        d = g.max_degree
    K = params.K if params.K is not None else default_iterations(g.n)
    proto = Part2Protocol(d, K, params.C)
    cap = K * proto.t_iter + 2
    outputs, ledger, _ = run(g, proto, seed, cap, part="part2",
                             record_schedule=record_schedule)
    added = {v for v, o in outputs.items() if o == "in"}
    residual_nodes = sorted(v for v, o in outputs.items() if o == "residual")
    residual, _ = g.induced(residual_nodes)
    return added, residual, ledger


# ---------------------------------------------------------------------------
# Full pipeline


def awake_mis(g: Graph, seed: int, params: Optional[MisParams] = None,
              record_schedule: bool = False):
    """Three-stage MIS with O(1)-style node-averaged awake time.

    Returns ``(mis_set, ledger, metrics)``; the ledger splits awake rounds
    into parts "part1", "part2", "luby".  Las Vegas: the output is verified
    and ``metrics.validity`` records the check.
    """
    params = params or MisParams()
    n = g.n
    ledger = AwakeLedger(n, record_schedule=record_schedule)
    if n == 0:
        return set(), ledger, RunMetrics.from_ledger(ledger, validity=True,
                                                     solution_size=0)

    p = params.p if params.p is not None else default_participation(n)
    window = params.part1_window if params.part1_window is not None \
        else default_part1_window(n)
    outputs1, led1, _ = _run_part1(g, seed, p, window, record_schedule)
    ledger.merge(led1)
    mis: Set[int] = {v for v, o in outputs1.items() if o == "in"}
    residual_nodes = sorted(v for v, o in outputs1.items() if o == "residual")

    diags: Dict[str, object] = {
        "part1_in": len(mis),
        "residual1_n": len(residual_nodes),
    }

    res2_nodes_orig = []
    if residual_nodes:
        res_g, res_ids = g.induced(residual_nodes)
        delta_res = res_g.max_degree
        diags["residual1_max_degree"] = delta_res
        d_req = params.d if params.d is not None else default_degree_bound(n)
        d_eff = max(2, min(d_req, max(2, delta_res)))
        d_raised = delta_res > d_eff
        if d_raised:
            # low-probability residual-degree overshoot: keep going, loudly
            log.info("part2 degree bound raised %d -> %d", d_eff, delta_res)
            d_eff = delta_res
        diags.update(d_requested=d_req, d_used=d_eff, d_raised=d_raised)
        K = params.K if params.K is not None else default_iterations(n)
        proto2 = Part2Protocol(d_eff, K, params.C)
        outputs2, led2, _ = run(res_g, proto2, seed, K * proto2.t_iter + 2,
                                part="part2", record_schedule=record_schedule)
        ledger.merge(led2, id_map=res_ids)
        mis.update(res_ids[v] for v, o in outputs2.items() if o == "in")
        res2_local = sorted(v for v, o in outputs2.items() if o == "residual")
        res2_nodes_orig = [res_ids[v] for v in res2_local]
    diags["residual2_n"] = len(res2_nodes_orig)

    if res2_nodes_orig:
        res2_g, res2_ids = g.induced(res2_nodes_orig)
        cap = params.luby_round_cap if params.luby_round_cap is not None \
            else 64 * (_clog2(n) + 2)
        s3, led3 = luby_mis(res2_g, seed, round_cap=cap,
                            record_schedule=record_schedule)
        ledger.merge(led3, id_map=res2_ids)
        mis.update(res2_ids[v] for v in s3)

    metrics = RunMetrics.from_ledger(
        ledger,
        validity=verify_mis(g, mis),
        solution_size=len(mis),
        diagnostics=diags,
    )
    return mis, ledger, metrics
