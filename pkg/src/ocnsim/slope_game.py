"""The Slope Game: a finite symbolic game on the product control graph.

Each phase extends an acyclic product path, rule by rule, until a lasso
closes; the lasso's cycle effect is then compared against the phase slope.
Either one player wins outright or the game continues with the strictly less
steep cycle effect as the new slope.  Solving these games per representative
slope yields each state pair's boundary slope and the belt constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Literal

from .core import (
    Node,
    ProductGraph,
    ProductPath,
    _tarjan_sccs,
    graph_parameters,
)
from .geometry import (
    Slope,
    Vec2,
    interval_representatives,
    is_behind,
)

SPOILER = "spoiler"
DUPLICATOR = "duplicator"
Player = Literal["spoiler", "duplicator"]


class PhaseOutcome(Enum):
    DUPLICATOR_WINS_NOW = "duplicator_wins_now"
    SPOILER_WINS_NOW = "spoiler_wins_now"
    CONTINUE = "continue"


@dataclass(frozen=True)
class PhaseVerdict:
    """Evaluation of a completed phase: an immediate winner or a new slope."""

    outcome: PhaseOutcome
    new_slope: Slope | None = None


@dataclass(frozen=True)
class SlopeGamePosition:
    """A mid-phase position: acyclic path, phase slope, and, between Spoiler's
    and Duplicator's half-moves, the pending Spoiler rule."""

    path: ProductPath
    slope: Slope
    pending: tuple[str, int, str] | None = None  # (action, delta, target state)


@dataclass(frozen=True)
class SlopeGameResult:
    winner: Player
    segment_depth: int


def evaluate_lasso(cycle_effect: Vec2, slope: Slope) -> PhaseVerdict:
    """Apply the three-way winning condition to a closed phase.

    Not behind: Duplicator wins now.  Behind but not positive: Spoiler wins
    now.  Behind and positive: the game continues with the effect as slope.
    """
    if not is_behind(cycle_effect, slope):
        return PhaseVerdict(PhaseOutcome.DUPLICATOR_WINS_NOW)
    x, y = cycle_effect
    if x >= 0 and y >= 0 and (x, y) != (0, 0):
        return PhaseVerdict(PhaseOutcome.CONTINUE, Slope(x, y).normalized())
    return PhaseVerdict(PhaseOutcome.SPOILER_WINS_NOW)


class SlopeGameSolver:
    """Exhaustive memoized solver for Slope Games over one product graph.

    Phase-start values are memoized per (node, gcd-normalized slope); the
    winner depends only on the slope's direction.  The solver tracks the
    deepest phase chain it ever explores, which the theory bounds by
    (K+1)^2.
    """

    def __init__(self, product: ProductGraph):
        self.product = product
        self._memo: dict[tuple[Node, Slope], SlopeGameResult] = {}
        self._spoiler_rules: dict[str, list[tuple[str, int, str]]] = {}
        self._dup_rules: dict[tuple[str, str], list[tuple[int, str]]] = {}
        for s, a, d, t in product.spoiler.transitions:
            self._spoiler_rules.setdefault(s, []).append((a, d, t))
        for s, a, d, t in product.duplicator.transitions:
            self._dup_rules.setdefault((s, a), []).append((d, t))
        self.max_phase_depth = 0
        self._phase_bound = (product.K + 1) ** 2

    def solve(self, node: Node, slope: Slope) -> SlopeGameResult:
        return self._phase_value(node, slope.normalized(), 1)

    def _phase_value(self, node: Node, slope: Slope, chain_depth: int) -> SlopeGameResult:
        assert chain_depth <= self._phase_bound, "phase bound (K+1)^2 exceeded"
        self.max_phase_depth = max(self.max_phase_depth, chain_depth)
        key = (node, slope)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        # visited maps each path node to the cumulative effect at its first
        # occurrence; a repeat at w closes a lasso whose cycle effect is the
        # current total minus visited[w]
        result = self._position_value(
            node, {node: (0, 0)}, 0, 0, slope, chain_depth, {}
        )
        self._memo[key] = result
        return result

    def _position_value(
        self,
        at: Node,
        visited: dict[Node, tuple[int, int]],
        tx: int,
        ty: int,
        slope: Slope,
        chain_depth: int,
        phase_memo: dict,
    ) -> SlopeGameResult:
        # the subtree value depends only on the endpoint and each visited
        # node's effect relative to now (what a return there would close)
        key = (at, frozenset((v, tx - ex, ty - ey) for v, (ex, ey) in visited.items()))
        hit = phase_memo.get(key)
        if hit is not None:
            return hit
        q, q2 = at
        rules = self._spoiler_rules.get(q, ())
        if not rules:
            # Only reachable on non-normalized inputs: a stuck Spoiler loses.
            return SlopeGameResult(DUPLICATOR, 1)
        result: SlopeGameResult | None = None
        worst_dup = 0
        for a, d, p in rules:
            replies = self._dup_rules.get((q2, a))
            if not replies:
                raise RuntimeError(
                    f"product graph incomplete: no {a!r}-reply at {q2!r} "
                    "(nets must be normalized)"
                )
            sub = self._reply_value(
                at, visited, tx, ty, slope, chain_depth, phase_memo, d, p, replies
            )
            if sub.winner == SPOILER:
                # any winning rule suffices; its depth is a sound strategy depth
                result = sub
                break
            worst_dup = max(worst_dup, sub.segment_depth)
        if result is None:
            result = SlopeGameResult(DUPLICATOR, worst_dup)
        phase_memo[key] = result
        return result

    def _reply_value(
        self,
        at: Node,
        visited: dict[Node, tuple[int, int]],
        tx: int,
        ty: int,
        slope: Slope,
        chain_depth: int,
        phase_memo: dict,
        d: int,
        p: str,
        replies: list[tuple[int, str]],
    ) -> SlopeGameResult:
        worst_sp = 0
        # evaluate lasso-closing replies first: they resolve in constant time
        # and often decide the whole alternative
        ordered = sorted(replies, key=lambda r: (p, r[1]) not in visited)
        for d2, p2 in ordered:
            nxt = (p, p2)
            nx, ny = tx + d, ty + d2
            first = visited.get(nxt)
            if first is None:
                sub = self._position_value(
                    nxt, {**visited, nxt: (nx, ny)}, nx, ny, slope, chain_depth, phase_memo
                )
            else:
                verdict = evaluate_lasso((nx - first[0], ny - first[1]), slope)
                if verdict.outcome is PhaseOutcome.DUPLICATOR_WINS_NOW:
                    sub = SlopeGameResult(DUPLICATOR, 1)
                elif verdict.outcome is PhaseOutcome.SPOILER_WINS_NOW:
                    sub = SlopeGameResult(SPOILER, 1)
                else:
                    assert verdict.new_slope is not None
                    inner = self._phase_value(nxt, verdict.new_slope, chain_depth + 1)
                    sub = SlopeGameResult(inner.winner, inner.segment_depth + 1)
            if sub.winner == DUPLICATOR:
                # any winning reply suffices; its depth is a sound strategy depth
                return sub
            worst_sp = max(worst_sp, sub.segment_depth)
        return SlopeGameResult(SPOILER, worst_sp)


def solve_slope_game(g: ProductGraph, node: Node, slope: Slope) -> SlopeGameResult:
    """Winner of the Slope Game from (node, slope), with the segment depth of
    a winning strategy (the first one found, not necessarily the shallowest;
    any witness depth keeps the replay margins sound)."""
    return SlopeGameSolver(g).solve(node, slope)


def cycle_effect_candidates(
    g: ProductGraph, scope: tuple[Node, ...] | None = None
) -> set[Vec2]:
    """Effects of all closed walks of length at most K, non-zero and closed
    under negation; K is the number of (in-scope) product nodes.

    This is a superset of the simple-cycle effects; refining the vector set
    only refines the angular equivalence classes, which keeps the boundary
    scan sound.  Effects stay within [-K, K]^2 by construction.
    """
    nodes = g.nodes if scope is None else scope
    in_scope = set(nodes)
    succ = {
        v: tuple(w for w in g.successors.get(v, ()) if w in in_scope) for v in nodes
    }
    sccs = _tarjan_sccs(nodes, succ)
    comp_of = {v: i for i, scc in enumerate(sccs) for v in scc}
    out = g.out
    effects: set[Vec2] = set()
    for scc in sccs:
        comp = comp_of[scc[0]]
        for anchor in scc:
            # closed walks stay within the anchor's SCC, so the simple-cycle
            # length bound is the component size
            frontier: dict[Node, set[Vec2]] = {anchor: {(0, 0)}}
            for _ in range(len(scc)):
                nxt: dict[Node, set[Vec2]] = {}
                for v, effs in frontier.items():
                    for e in out.get(v, ()):
                        if comp_of.get(e[4]) != comp:
                            continue
                        tgt = nxt.setdefault(e[4], set())
                        for dx, dy in effs:
                            tgt.add((dx + e[2], dy + e[3]))
                for eff in nxt.get(anchor, ()):
                    if eff != (0, 0):
                        effects.add(eff)
                frontier = nxt
                if not frontier:
                    break
    return effects | {(-x, -y) for x, y in effects}


@dataclass(frozen=True)
class RepOutcome:
    slope: Slope
    winner: Player
    segment_depth: int


@dataclass(frozen=True)
class PairScan:
    """Slope-game outcomes for one state pair across all representatives,
    condensed to the boundary slope and the margins the key lemmas certify."""

    node: Node
    boundary: Slope
    outcomes: tuple[RepOutcome, ...]
    c_above: int  # K * depth of the first Duplicator-won representative
    c_below: int  # K * depth of the last Spoiler-won representative


def scan_pair(
    g: ProductGraph,
    node: Node,
    reps: list[Slope],
    solver: SlopeGameSolver,
    margin_k: int | None = None,
) -> PairScan:
    """Solve the Slope Game at every representative and locate the boundary.

    Spoiler-won slopes form a prefix of the steepness-ordered scan and
    Duplicator-won slopes a suffix (monotonicity); the boundary is the
    infimum of the Duplicator-won region, reported as the class boundary
    below the first Duplicator win.  Margins multiply segment depths by
    margin_k, the number of product states the game can actually reach.
    """
    outcomes = [RepOutcome(s, *_as_pair(solver.solve(node, s))) for s in reps]
    for earlier, later in zip(outcomes, outcomes[1:]):
        assert not (earlier.winner == DUPLICATOR and later.winner == SPOILER), (
            f"slope-game monotonicity violated at {node}"
        )
    first_dup = next((i for i, o in enumerate(outcomes) if o.winner == DUPLICATOR), None)
    K = margin_k if margin_k is not None else g.K
    if first_dup is None:
        boundary = Slope(0, 1)
        c_below = K * outcomes[-1].segment_depth
        c_above = c_below  # the above-zone of a vertical slope is empty
    elif first_dup == 0:
        boundary = Slope(1, 0)
        c_above = K * outcomes[0].segment_depth
        c_below = c_above  # the below-zone of a horizontal slope is empty
    else:
        # Criticals sit at even indices, mediants at odd ones; the infimum of
        # the Duplicator-won region is the critical at or below the first win.
        win = outcomes[first_dup]
        boundary = win.slope if first_dup % 2 == 0 else outcomes[first_dup - 1].slope
        c_above = K * win.segment_depth
        c_below = K * outcomes[first_dup - 1].segment_depth
    return PairScan(node, boundary, tuple(outcomes), c_above, c_below)


def _as_pair(res: SlopeGameResult) -> tuple[Player, int]:
    return res.winner, res.segment_depth


def boundary_slope(g: ProductGraph, node: Node) -> Slope:
    """The pair's boundary slope: Spoiler wins the Slope Game strictly below
    it, Duplicator strictly above; the winner at the boundary itself is left
    open.  Components lie in [0, K]."""
    reps = interval_representatives(cycle_effect_candidates(g))
    return scan_pair(g, node, reps, SlopeGameSolver(g)).boundary


def belt_constant(g: ProductGraph) -> int:
    """Sound belt width: min of K*(K+1)^2 and (scc+1)^2*scc + acyc_bound."""
    scc, acyc = graph_parameters(g)
    K = g.K
    return min(K * (K + 1) ** 2, (scc + 1) ** 2 * scc + acyc)
