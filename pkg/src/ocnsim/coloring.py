"""Deciding strong simulation: belts, periodic colorings, point queries.

The plane of every control-state pair splits into a Duplicator-won zone, a
Spoiler-won zone (both certified by Slope Game strategies and the key replay
lemmas) and a belt strip around the pair's boundary slope.  Belt points are
colored by a finite quotient game: points beyond a rectangle rect(j) are
identified with their k*slope translates, and the greatest fixpoint of the
one-step simulation condition is computed over the resulting window.  The
result is always a sound under-approximation of the simulation preorder and
is exact once (j, k) are large enough; verification makes that checkable.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from math import ceil

from .core import (
    Config,
    Node,
    Ocn,
    ProductGraph,
    build_product,
    graph_parameters,
    normalize_pair,
)
from .geometry import Slope, c_above, c_below, cross, interval_representatives
from .slope_game import (
    PairScan,
    SlopeGameSolver,
    belt_constant,
    cycle_effect_candidates,
    scan_pair,
)

Point = tuple[int, int]


class GeometryError(RuntimeError):
    """Internal inconsistency: a wrap edge left its belt or window."""


@dataclass(frozen=True)
class Belt:
    """A pair's belt: boundary slope plus certified margin width c.

    Points more than c above the slope are simulation-included, points more
    than c below are excluded; the frontier runs inside the strip between.
    """

    pair: Node
    slope: Slope
    c: int

    @property
    def vertical(self) -> bool:
        return self.slope == Slope(0, 1)


@dataclass(frozen=True)
class PairGeometry:
    """Belt geometry of one pair instantiated over a window (l0, j, k)."""

    pair: Node
    slope: Slope
    c: int
    l0: Point
    j: int
    k: int

    def zone_above(self, pt: Point) -> bool:
        return c_above(pt, self.slope, self.c)

    def zone_below(self, pt: Point) -> bool:
        return c_below(pt, self.slope, self.c)

    def in_belt(self, pt: Point) -> bool:
        return not self.zone_above(pt) and not self.zone_below(pt)

    def rect_cap(self, j: int) -> Point:
        return (self.l0[0] + j * self.slope.rho, self.l0[1] + j * self.slope.rho_prime)

    def in_rect(self, pt: Point, j: int) -> bool:
        cap = self.rect_cap(j)
        return pt[0] <= cap[0] and pt[1] <= cap[1]

    def window_points(self) -> list[Point]:
        """All points of belt /\\ rect(j + k), row by row."""
        rho, rho2 = self.slope.rho, self.slope.rho_prime
        X, Y = self.rect_cap(self.j + self.k)
        c = self.c
        pts: list[Point] = []
        for n in range(0, X + 1):
            if rho == 0:
                if n > c:  # vertical belt: columns beyond c are below-zone
                    break
                lo, hi = 0, Y
            else:
                hi = min(Y, (rho2 * (n + c)) // rho + c)
                if rho2 == 0:
                    lo = 0
                elif n <= c:
                    lo = 0
                else:
                    lo = max(0, -(-(rho2 * (n - c) - rho * c) // rho))
            pts.extend((n, m) for m in range(lo, hi + 1))
        return pts

    def wrap(self, pt: Point) -> Point:
        """Map an in-belt point beyond rect(j + k) to its window representative
        by subtracting multiples of k*slope."""
        rho, rho2 = self.slope.rho, self.slope.rho_prime
        X, Y = self.rect_cap(self.j + self.k)
        n, m = pt
        shifts = []
        if n > X:
            if rho == 0:
                raise GeometryError(f"{self.pair}: point {pt} unreachable by vertical wrap")
            shifts.append(-(-(n - X) // (self.k * rho)))
        if m > Y:
            if rho2 == 0:
                raise GeometryError(f"{self.pair}: point {pt} unreachable by horizontal wrap")
            shifts.append(-(-(m - Y) // (self.k * rho2)))
        if not shifts:
            return pt
        t = max(shifts)
        out = (n - t * self.k * rho, m - t * self.k * rho2)
        if out[0] < 0 or out[1] < 0 or not self.in_rect(out, self.j + self.k):
            raise GeometryError(f"{self.pair}: wrap of {pt} left the window at {out}")
        return out


@dataclass(frozen=True)
class PairColoring:
    """Exported description of one pair's coloring: explicit blocks plus the
    periodic block repeated along k*slope."""

    pair: Node
    slope: Slope
    c: int
    j: int
    k: int
    init: frozenset[Point]
    aper: frozenset[Point]
    per: frozenset[Point]


@dataclass
class PeriodicColoring:
    """Semilinear description of the simulation relation, per pair."""

    l0: Point
    pairs: dict[Node, PairColoring]

    def geometry(self, pair: Node) -> PairGeometry:
        pc = self.pairs[pair]
        return PairGeometry(pair, pc.slope, pc.c, self.l0, pc.j, pc.k)

    def lookup(self, pair: Node, pt: Point) -> bool:
        """Membership in the induced total relation: everything in the above
        zone, plus init/aper, plus the periodic block under k*slope shifts."""
        pc = self.pairs[pair]
        geo = self.geometry(pair)
        if geo.zone_above(pt):
            return True
        if geo.zone_below(pt):
            return False
        if not geo.in_rect(pt, pc.j + pc.k):
            pt = geo.wrap(pt)
        if pt[0] <= self.l0[0] and pt[1] <= self.l0[1]:
            return pt in pc.init
        if geo.in_rect(pt, pc.j):
            return pt in pc.aper
        return pt in pc.per

    def to_json_obj(self) -> dict:
        return {
            "schema": 1,
            "l0": list(self.l0),
            "pairs": [
                {
                    "q": pc.pair[0],
                    "q'": pc.pair[1],
                    "slope": [pc.slope.rho, pc.slope.rho_prime],
                    "c": pc.c,
                    "j": pc.j,
                    "k": pc.k,
                    "init": sorted(map(list, pc.init)),
                    "aper": sorted(map(list, pc.aper)),
                    "per": sorted(map(list, pc.per)),
                }
                for _, pc in sorted(self.pairs.items())
            ],
        }


@dataclass
class VerificationReport:
    """Outcome of checking a coloring: local simulation-condition violations
    on claimed points, unconfirmed claimed non-points, and periodicity
    certification failures."""

    yes_violations: list[tuple[Node, Point]] = field(default_factory=list)
    no_unconfirmed: list[tuple[Node, Point]] = field(default_factory=list)
    periodicity_failures: list[str] = field(default_factory=list)

    @property
    def yes_ok(self) -> bool:
        return not self.yes_violations and not self.periodicity_failures

    @property
    def all_ok(self) -> bool:
        return self.yes_ok and not self.no_unconfirmed


# ---------------------------------------------------------------------------
# Quotient game


class _Rules:
    """Per-pair move tables of a normalized product."""

    def __init__(self, product: ProductGraph):
        self.spoiler: dict[str, list[tuple[str, int, str]]] = {}
        self.dup: dict[tuple[str, str], list[tuple[int, str]]] = {}
        for s, a, d, t in product.spoiler.transitions:
            self.spoiler.setdefault(s, []).append((a, d, t))
        for s, a, d, t in product.duplicator.transitions:
            self.dup.setdefault((s, a), []).append((d, t))

    def moves(self, pair: Node, pt: Point):
        """Enabled one-round alternatives: per enabled Spoiler rule, the list
        of (successor pair, successor point) replies."""
        q, q2 = pair
        n, m = pt
        for a, d, p in self.spoiler.get(q, ()):
            if n + d < 0:
                continue
            replies = [
                ((p, p2), (n + d, m + d2))
                for d2, p2 in self.dup.get((q2, a), ())
                if m + d2 >= 0
            ]
            yield replies


class QuotientColoring:
    """Window values of the quotient-game greatest fixpoint plus the
    machinery to look points up through zones and wraps."""

    def __init__(
        self,
        product: ProductGraph,
        geometry: dict[Node, PairGeometry],
        rules: _Rules | None = None,
    ):
        self.product = product
        self.geometry = geometry
        self.rules = rules or _Rules(product)
        self.values: dict[Node, dict[Point, bool]] = {}
        self.certified_yes = False
        self.no_confirmed_depth: int | None = None
        self.exact = False
        self._solve()

    # -- lookup ------------------------------------------------------------

    def lookup(self, pair: Node, pt: Point) -> bool:
        geo = self.geometry[pair]
        if geo.zone_above(pt):
            return True
        if geo.zone_below(pt):
            return False
        if not geo.in_rect(pt, geo.j + geo.k):
            pt = geo.wrap(pt)
        try:
            return self.values[pair][pt]
        except KeyError as exc:
            raise GeometryError(f"{pair}: {pt} missing from window") from exc

    # -- greatest fixpoint ---------------------------------------------------

    def _resolve(self, pair: Node, pt: Point):
        """Constant value for zone points, else the window slot a lookup hits."""
        geo = self.geometry[pair]
        if geo.zone_above(pt):
            return True
        if geo.zone_below(pt):
            return False
        if not geo.in_rect(pt, geo.j + geo.k):
            pt = geo.wrap(pt)
        return (pair, pt)

    def _solve(self) -> None:
        values = self.values
        for pair, geo in self.geometry.items():
            values[pair] = dict.fromkeys(geo.window_points(), True)

        conds: dict[tuple[Node, Point], list[list[object]]] = {}
        readers: dict[tuple[Node, Point], list[tuple[Node, Point]]] = {}
        for pair, vals in values.items():
            for pt in vals:
                groups: list[list[object]] = []
                for replies in self.rules.moves(pair, pt):
                    slots: list[object] = []
                    for tgt_pair, tgt_pt in replies:
                        slot = self._resolve(tgt_pair, tgt_pt)
                        if slot is True:
                            slots = [True]
                            break
                        if slot is False:
                            continue
                        slots.append(slot)
                        readers.setdefault(slot, []).append((pair, pt))
                    groups.append(slots)
                conds[(pair, pt)] = groups

        def holds(key: tuple[Node, Point]) -> bool:
            for slots in conds[key]:
                ok = False
                for slot in slots:
                    if slot is True or values[slot[0]][slot[1]]:
                        ok = True
                        break
                if not ok:
                    return False
            return True

        queue = deque(conds)
        queued = set(conds)
        while queue:
            key = queue.popleft()
            queued.discard(key)
            pair, pt = key
            if not values[pair][pt]:
                continue
            if holds(key):
                continue
            values[pair][pt] = False
            for reader in readers.get(key, ()):
                if values[reader[0]][reader[1]] and reader not in queued:
                    queue.append(reader)
                    queued.add(reader)

    # -- verification --------------------------------------------------------

    def condition_holds(self, pair: Node, pt: Point) -> bool:
        """One-step simulation condition against this coloring, evaluated
        directly from the step semantics (works at any point)."""
        for replies in self.rules.moves(pair, pt):
            if not any(self.lookup(tp, tpt) for tp, tpt in replies):
                return False
        return True

    def fringe(self, pair: Node) -> list[Point]:
        """Window points whose k*slope translate leaves the window: exactly
        the wrap targets of all points beyond it."""
        geo = self.geometry[pair]
        step = (geo.k * geo.slope.rho, geo.k * geo.slope.rho_prime)
        return [
            pt
            for pt in self.values[pair]
            if not geo.in_rect((pt[0] + step[0], pt[1] + step[1]), geo.j + geo.k)
        ]

    def certify_periodicity(self, horizon_cap: int = 128) -> list[str]:
        """Verify that the periodic extension is self-supporting.

        For every wrap target, the one-step condition is checked explicitly at
        its first M translates, where M is computed so that every geometric
        test any lookup can make (belt and zone boundaries, window caps of
        successor pairs) has constant outcome beyond M.  Past that horizon the
        checked conditions repeat verbatim, so all translates are covered.
        """
        failures: list[str] = []
        succ_pairs: dict[Node, set[Node]] = {}
        for e in self.product.edges:
            succ_pairs.setdefault(e[0], set()).add(e[4])
        for pair, geo in self.geometry.items():
            fringe = self.fringe(pair)
            true_fringe = [pt for pt in fringe if self.values[pair][pt]]
            if not true_fringe:
                continue
            step = (geo.k * geo.slope.rho, geo.k * geo.slope.rho_prime)
            bbox = _bbox_with_margin(true_fringe, 1)
            horizon = 1
            for other in succ_pairs.get(pair, set()) | {pair}:
                og = self.geometry[other]
                if og.slope == geo.slope:
                    if og.k != geo.k:
                        failures.append(f"{pair}: parallel pair {other} has period {og.k} != {geo.k}")
                    continue
                horizon = max(horizon, _crossing_horizon(bbox, step, og))
            if horizon > horizon_cap:
                failures.append(f"{pair}: periodicity horizon {horizon} exceeds cap")
                continue
            for pt in true_fringe:
                x, y = pt
                for m in range(1, horizon + 1):
                    cand = (x + m * step[0], y + m * step[1])
                    if not self.condition_holds(pair, cand):
                        failures.append(f"{pair}: condition fails at translate {cand}")
                        break
        return failures

    def to_periodic_coloring(self) -> PeriodicColoring:
        pairs = {}
        for pair, vals in self.values.items():
            geo = self.geometry[pair]
            init, aper, per = set(), set(), set()
            for pt, v in vals.items():
                if not v:
                    continue
                if pt[0] <= geo.l0[0] and pt[1] <= geo.l0[1]:
                    init.add(pt)
                elif geo.in_rect(pt, geo.j):
                    aper.add(pt)
                else:
                    per.add(pt)
            pairs[pair] = PairColoring(
                pair, geo.slope, geo.c, geo.j, geo.k,
                frozenset(init), frozenset(aper), frozenset(per),
            )
        l0 = next(iter(self.geometry.values())).l0
        return PeriodicColoring(l0, pairs)


def _bbox_with_margin(points: list[Point], margin: int) -> tuple[Point, Point]:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return (
        (max(0, min(xs) - margin), max(0, min(ys) - margin)),
        (max(xs) + margin, max(ys) + margin),
    )


def _crossing_horizon(bbox: tuple[Point, Point], step: Point, og: PairGeometry) -> int:
    """Last translate index at which a point of the box can still change its
    classification against the other pair's geometry, plus one.

    Every geometric test is affine in the point, hence affine in the translate
    index m; its crossing index is affine in the base point and so extremal at
    the box corners.
    """
    rho, rho2 = og.slope.rho, og.slope.rho_prime
    c = og.c
    X, Y = og.rect_cap(og.j + og.k)
    # Affine functionals f(n, n') = a*n + b*n' + const whose sign matters.
    functionals = [
        (rho2, -rho, rho2 * c + rho * c),   # above-zone main inequality
        (0, 1, -c),                         # above-zone guard n' > c
        (-rho2, rho, rho * c + rho2 * c),   # below-zone main inequality
        (1, 0, -c),                         # below-zone guard n > c
        (1, 0, -X),                         # window cap on n
        (0, 1, -Y),                         # window cap on n'
    ]
    (x0, y0), (x1, y1) = bbox
    corners = [(x0, y0), (x0, y1), (x1, y0), (x1, y1)]
    horizon = 1
    for a, b, c0 in functionals:
        slope_m = a * step[0] + b * step[1]
        if slope_m == 0:
            continue
        for cx, cy in corners:
            base = a * cx + b * cy + c0
            # sign of base + m*slope_m is constant for m > |base / slope_m|
            horizon = max(horizon, ceil(abs(base) / abs(slope_m)) + 1)
    return horizon


# ---------------------------------------------------------------------------
# Bounded Spoiler reachability (engine side)


class SpoilerAttractor:
    """Least fixpoint of "Spoiler forces Duplicator stuck" over a bounded
    counter grid.  Cells outside the grid count as not yet won, so membership
    is a sound Spoiler-win certificate; it is complete for positions whose
    coordinates stay at least `depth` below the grid bound."""

    def __init__(self, product: ProductGraph, rules: _Rules, scope: tuple[Node, ...] | None = None):
        self.product = product
        self.rules = rules
        scope_set = set(scope) if scope is not None else set(product.nodes)
        self._rev: dict[Node, list[tuple[Node, int, int]]] = {}
        for e in self.product.edges:
            if e[0] in scope_set and e[4] in scope_set:
                self._rev.setdefault(e[4], []).append((e[0], e[2], e[3]))
        self._all_neg: dict[Node, list[tuple[str, int]]] = {}
        self._pair_rules: dict[Node, list[tuple[int, list[tuple[int, Node]]]]] = {}
        for pair in (scope if scope is not None else product.nodes):
            q, q2 = pair
            stuck_rules = []
            flat = []
            for a, d, p in self.rules.spoiler.get(q, ()):
                replies = self.rules.dup.get((q2, a))
                if replies is None:
                    raise GeometryError(
                        f"pair {pair}: Duplicator has no {a!r} rules (net not normalized)"
                    )
                if all(d2 == -1 for d2, _ in replies):
                    stuck_rules.append((a, d))
                flat.append((d, [(d2, (p, p2)) for d2, p2 in replies]))
            self._all_neg[pair] = stuck_rules
            self._pair_rules[pair] = flat
        self.won: dict[Node, dict[int, int]] = {}
        self._stride = 1
        self.bound = -1
        self.max_rank = 0

    def ensure(self, bound: int, max_rank: int) -> None:
        # bucket both parameters so repeated queries do not thrash recomputes
        b = 64
        while b < bound:
            b *= 2
        r = 64
        while r < max_rank:
            r *= 2
        if b <= self.bound and r <= self.max_rank:
            return
        self.bound = max(b, self.bound)
        self.max_rank = max(r, self.max_rank)
        self._compute()

    def _compute(self) -> None:
        N = self.bound
        stride = N + 2
        # per-pair win tables keyed by packed n*stride + m for cheap hashing
        won: dict[Node, dict[int, int]] = {pair: {} for pair in self._pair_rules}
        frontier: list[tuple[Node, int, int]] = []
        for pair, stuck_rules in self._all_neg.items():
            table = won[pair]
            for a, d in stuck_rules:
                lo = 0 if d >= 0 else 1
                for n in range(lo, N + 1):
                    packed = n * stride
                    if packed not in table:
                        table[packed] = 1
                        frontier.append((pair, n, 0))

        pair_rules = self._pair_rules

        def wins_now(pair: Node, n: int, m: int) -> bool:
            # a reply leading outside the grid counts as unresolved, not won
            for d, replies in pair_rules[pair]:
                nn = n + d
                if nn < 0 or nn > N:
                    continue
                base = nn * stride
                ok = True
                for d2, tpair in replies:
                    mm = m + d2
                    if mm < 0:
                        continue
                    if mm > N or base + mm not in won[tpair]:
                        ok = False
                        break
                if ok:
                    return True
            return False

        rank = 1
        while frontier and rank < self.max_rank:
            rank += 1
            nxt: list[tuple[Node, int, int]] = []
            for tgt_pair, tn, tm in frontier:
                for src_pair, d, d2 in self._rev.get(tgt_pair, ()):
                    cn, cm = tn - d, tm - d2
                    if cn < 0 or cm < 0 or cn > N or cm > N:
                        continue
                    table = won[src_pair]
                    packed = cn * stride + cm
                    if packed in table:
                        continue
                    if wins_now(src_pair, cn, cm):
                        table[packed] = rank
                        nxt.append((src_pair, cn, cm))
            frontier = nxt
        self.won = won
        self._stride = stride

    def rank(self, pair: Node, pt: Point) -> int | None:
        table = self.won.get(pair)
        if table is None or pt[0] > self.bound or pt[1] > self.bound:
            return None
        return table.get(pt[0] * self._stride + pt[1])


def spoiler_bounded_win(
    nets: tuple[Ocn, Ocn], position: tuple["Config", "Config"], depth: int = 64
) -> bool:
    """True iff Spoiler forces a win within `depth` rounds from the position.

    Backward induction over the counter grid bounded by start + depth, which
    is exhaustive for the bounded-round game.
    """
    left, right = position
    pair: Node = (left.state, right.state)
    point: Point = (left.counter, right.counter)
    product = build_product(*nets)
    att = SpoilerAttractor(product, _Rules(product))
    att.ensure(bound=max(point) + depth, max_rank=depth)
    r = att.rank(pair, point)
    return r is not None and r <= depth


# ---------------------------------------------------------------------------
# Initial rectangle


def initial_rectangle(belts: list[Belt]) -> Point:
    """Corner (l0, l0') outside of which all pairwise non-parallel belts are
    disjoint, minimally extended so that no belt contains the corner itself.

    Disjointness bounds come from exact corner analysis of the belt slabs;
    the returned corner may over-shoot the true minimum by the closed-form
    slack, never under-shoot.
    """
    lx = ly = 0
    for b1, b2 in itertools.combinations(belts, 2):
        if cross(b1.slope.as_vec(), b2.slope.as_vec()) == 0:
            continue
        bound = _strip_intersection_bound(b1, b2)
        lx = max(lx, bound[0])
        ly = max(ly, bound[1])
    if belts:
        ly = max(ly, max(b.c for b in belts) + 1)
    geos = [PairGeometry(b.pair, b.slope, b.c, (0, 0), 0, 1) for b in belts]
    while any(g.in_belt((lx, ly)) for g in geos):
        lx += 1
    return (lx, ly)


def _strip_intersection_bound(b1: Belt, b2: Belt) -> Point:
    """Componentwise bound on the intersection region of two non-parallel
    belts: slab-corner solutions plus the low lobes along the axes."""
    max_n = 0
    max_m = 0
    s1, s2 = b1.slope, b2.slope
    B1 = b1.c * (s1.rho + s1.rho_prime)
    B2 = b2.c * (s2.rho + s2.rho_prime)
    det = s1.rho_prime * s2.rho - s1.rho * s2.rho_prime
    for t1, t2 in itertools.product((-B1, B1), (-B2, B2)):
        # solve rho*n' - rho'*n = t for both belts
        n_num = s2.rho * t1 - s1.rho * t2
        m_num = s2.rho_prime * t1 - s1.rho_prime * t2
        max_n = max(max_n, ceil(abs(n_num) / abs(det)))
        max_m = max(max_m, ceil(abs(m_num) / abs(det)))
    # lobes: low rows n' <= c or low columns n <= c of one belt against the other
    cmax = max(b1.c, b2.c)
    for s, other_c in ((s1, b2.c), (s2, b1.c)):
        if s.rho_prime > 0:
            max_n = max(max_n, (s.rho * (cmax + other_c)) // s.rho_prime + other_c + cmax)
        if s.rho > 0:
            max_m = max(max_m, (s.rho_prime * (cmax + other_c)) // s.rho + other_c + cmax)
    return (max_n, max_m)


# ---------------------------------------------------------------------------
# Public quotient solver & verification


def _symmetric_geometry(
    belts: list[Belt], l0: Point, j: int, k: int
) -> dict[Node, PairGeometry]:
    return {b.pair: PairGeometry(b.pair, b.slope, b.c, l0, j, k) for b in belts}


def solve_quotient(
    nets: tuple[Ocn, Ocn], belts: list[Belt], l0: Point, j: int, k: int
) -> QuotientColoring:
    """Greatest fixpoint of the simulation condition over the finite quotient:
    belt windows up to rect(j + k) with k*slope wrap beyond rect(j), zone
    points fixed to their certified values.

    The result is the largest k-periodic-beyond-j simulation within the
    given belts: a sound under-approximation of the simulation preorder,
    exact once (j, k) subsume the relation's true periodicity.
    """
    if k < 1 or j < 0:
        raise ValueError("need k >= 1 and j >= 0")
    product = build_product(*nets)
    return QuotientColoring(product, _symmetric_geometry(belts, l0, j, k))


def verify_coloring(
    nets: tuple[Ocn, Ocn],
    pc: PeriodicColoring,
    spoiler_depth_cap: int = 128,
    *,
    check_no: bool = True,
    horizon_cap: int = 128,
) -> VerificationReport:
    """Check a periodic coloring against the nets.

    YES-soundness: every claimed point satisfies the one-step simulation
    condition against the coloring, with the k*slope wrap supplying the
    neighborhoods across the periodic boundary, and the periodic block's
    conditions certifiably repeat along the belt.  NO-soundness: every
    excluded window point is confirmed by a bounded Spoiler win within the
    cap.
    """
    product = build_product(*nets)
    rules = _Rules(product)
    report = VerificationReport()
    shell = _coloring_shell(product, pc, rules)
    for pair in pc.pairs:
        for pt, v in shell.values[pair].items():
            if v and not shell.condition_holds(pair, pt):
                report.yes_violations.append((pair, pt))
    report.periodicity_failures.extend(shell.certify_periodicity(horizon_cap))
    if check_no:
        att = SpoilerAttractor(product, rules)
        bound = 0
        false_pts = []
        for pair in pc.pairs:
            for pt, v in shell.values[pair].items():
                if not v:
                    false_pts.append((pair, pt))
                    bound = max(bound, pt[0], pt[1])
        att.ensure(bound=bound + spoiler_depth_cap, max_rank=spoiler_depth_cap)
        for pair, pt in false_pts:
            r = att.rank(pair, pt)
            if r is None or r > spoiler_depth_cap:
                report.no_unconfirmed.append((pair, pt))
    return report


def _coloring_shell(
    product: ProductGraph, pc: PeriodicColoring, rules: _Rules
) -> QuotientColoring:
    """A QuotientColoring whose window values are read off an exported
    description instead of being solved, for verification purposes."""
    shell = QuotientColoring.__new__(QuotientColoring)
    shell.product = product
    shell.rules = rules
    shell.geometry = {pair: pc.geometry(pair) for pair in pc.pairs}
    shell.values = {}
    shell.certified_yes = False
    shell.no_confirmed_depth = None
    shell.exact = False
    for pair, geo in shell.geometry.items():
        shell.values[pair] = {pt: pc.lookup(pair, pt) for pt in geo.window_points()}
    return shell


def find_equal_cross_sections(
    pc: PeriodicColoring | QuotientColoring,
    pair: Node,
    *,
    max_shift: int = 4,
    max_level: int | None = None,
) -> tuple[int, int, int] | None:
    """First pair of equal cross-sections of a pair's coloring.

    A cross-section at level L is the coloring on two consecutive lines at L;
    two sections are equal when one is the other shifted by a multiple of the
    slope.  Steep belts are scanned along Duplicator's axis, shallow belts
    along Spoiler's.  Returns (level1, level2, k) or None within the bound.
    """
    geo = pc.geometry[pair] if isinstance(pc, QuotientColoring) else pc.geometry(pair)
    s = geo.slope
    steep = s.rho_prime >= s.rho
    axis, step = (1, s.rho_prime) if steep else (0, s.rho)
    if step == 0:
        return None
    cap = geo.rect_cap(geo.j + geo.k)
    top = cap[axis] - 1
    if max_level is not None:
        top = min(top, max_level)

    by_level: dict[int, set[Point]] = {}
    for pt in geo.window_points():
        if pc.lookup(pair, pt):
            by_level.setdefault(pt[axis], set()).add(pt)

    def true_section(level: int) -> frozenset[Point]:
        return frozenset(by_level.get(level, set()) | by_level.get(level + 1, set()))

    for level1 in range(0, top + 1):
        for kk in range(1, max_shift + 1):
            level2 = level1 + kk * step
            if level2 + 1 > top + 1:
                break
            shift = (kk * s.rho, kk * s.rho_prime)
            shifted = frozenset((p[0] + shift[0], p[1] + shift[1]) for p in true_section(level1))
            if shifted == true_section(level2):
                return (level1, level2, kk)
    return None


# ---------------------------------------------------------------------------
# Engine


@dataclass
class EngineLimits:
    """Resource caps for the escalation loop; exceeding them yields an honest
    "undecided" answer, never a wrong one."""

    w0: int = 24
    k_schedule: tuple[int, ...] = (1, 2, 3, 4, 6, 8)
    depth0: int = 32
    max_rounds: int = 5
    spoiler_depth_cap: int = 4096
    horizon_cap: int = 256
    max_rect: int = 20000


class StrongSimEngine:
    """Shared state for deciding strong simulation between one fixed net pair.

    Construction normalizes the nets, builds the product, solves the Slope
    Game at every representative slope for every pair, and fixes each pair's
    boundary slope and certified belt margin.  Point queries then run the
    escalation loop over quotient colorings and bounded Spoiler search,
    caching everything across queries.
    """

    def __init__(
        self,
        spoiler_net: Ocn,
        duplicator_net: Ocn,
        limits: EngineLimits | None = None,
        threads: int = 1,
        roots: list[Node] | None = None,
    ):
        self.limits = limits or EngineLimits()
        self.spoiler_net, self.duplicator_net = normalize_pair(spoiler_net, duplicator_net)
        self.product = build_product(self.spoiler_net, self.duplicator_net)
        self.rules = _Rules(self.product)
        self.scc, self.acyc_bound = graph_parameters(self.product)
        self.c_global = belt_constant(self.product)
        self.scope = self._closure(roots)
        self.vectors = cycle_effect_candidates(self.product, self.scope)
        self.reps = interval_representatives(self.vectors)
        self.solver = SlopeGameSolver(self.product)
        self.scans: dict[Node, PairScan] = self._scan_all(threads)
        self.c_pair = {
            node: max(scan.c_above, scan.c_below) for node, scan in self.scans.items()
        }
        self.w = max(self.limits.w0, max(self.c_pair.values(), default=0) + 2)
        self._colorings: dict[tuple[int, int], QuotientColoring] = {}
        self._attractor = SpoilerAttractor(self.product, self.rules, self.scope)

    def _closure(self, roots: list[Node] | None) -> tuple[Node, ...]:
        """Pairs reachable from the roots in the product graph; queries and
        colorings are restricted to this successor-closed set."""
        if roots is None:
            return self.product.nodes
        seen = set()
        todo = [r for r in roots if r in self.product.out]
        while todo:
            v = todo.pop()
            if v in seen:
                continue
            seen.add(v)
            todo.extend(w for w in self.product.successors[v] if w not in seen)
        return tuple(v for v in self.product.nodes if v in seen)

    def _scan_all(self, threads: int) -> dict[Node, PairScan]:
        nodes = list(self.scope)
        mk = len(self.scope)
        if threads > 1:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = pool.map(
                    lambda v: scan_pair(self.product, v, self.reps, self.solver, mk),
                    nodes,
                )
                return dict(zip(nodes, results))
        return {v: scan_pair(self.product, v, self.reps, self.solver, mk) for v in nodes}

    # -- geometry ------------------------------------------------------------

    def belts(self) -> list[Belt]:
        return [
            Belt(node, scan.boundary, self.c_pair[node])
            for node, scan in sorted(self.scans.items())
        ]

    def geometry(self, j: int, k: int) -> dict[Node, PairGeometry]:
        l0 = (self.w, self.w)
        return {
            node: PairGeometry(node, scan.boundary, self.c_pair[node], l0, j, k)
            for node, scan in self.scans.items()
        }

    def _zone_value(self, pair: Node, pt: Point) -> bool | None:
        scan = self.scans[pair]
        if c_above(pt, scan.boundary, self.c_pair[pair]):
            return True
        if c_below(pt, scan.boundary, self.c_pair[pair]):
            return False
        return None

    # -- escalation ----------------------------------------------------------

    def _schedule(self) -> list[tuple[int, int, int]]:
        c_max = max(self.c_pair.values(), default=0)
        j0 = self.w + 2 * c_max + 1
        out = []
        for i in range(self.limits.max_rounds):
            k = self.limits.k_schedule[min(i, len(self.limits.k_schedule) - 1)]
            j = min(j0 * (2 ** max(0, i - 1)), self.limits.max_rect)
            depth = self.limits.depth0 * (2**i)
            out.append((j, k, min(depth, self.limits.spoiler_depth_cap)))
        return out

    def coloring(self, j: int, k: int) -> QuotientColoring:
        key = (j, k)
        col = self._colorings.get(key)
        if col is None:
            col = QuotientColoring(self.product, self.geometry(j, k), self.rules)
            failures = col.certify_periodicity(self.limits.horizon_cap)
            col.certified_yes = not failures
            self._colorings[key] = col
        return col

    def spoiler_rank(self, pair: Node, pt: Point, depth: int) -> int | None:
        # listed wins are valid witnesses regardless of the table's bound, so
        # only grow the table when the point is still unresolved
        r = self._attractor.rank(pair, pt)
        if r is None or r > depth:
            self._attractor.ensure(bound=max(pt) + depth, max_rank=depth)
            r = self._attractor.rank(pair, pt)
        return r if r is not None and r <= depth else None

    def _ensure_exact(self, col: QuotientColoring) -> bool:
        """Upgrade a YES-certified coloring to a fully exact description:
        confirm every excluded window point by bounded Spoiler search and find
        equal cross-sections, so wrap answers are valid for both colors."""
        if col.exact:
            return True
        if not col.certified_yes:
            return False
        bound = 0
        false_pts = []
        for pair, vals in col.values.items():
            for pt, v in vals.items():
                if not v:
                    false_pts.append((pair, pt))
                    bound = max(bound, pt[0], pt[1])
        # window ranks scale with the window, so escalate gently before
        # spending the full configured cap
        cap = None
        for attempt in (2 * bound + 64, 8 * bound + 256, self.limits.spoiler_depth_cap):
            attempt = min(attempt, self.limits.spoiler_depth_cap)
            self._attractor.ensure(bound=bound + attempt, max_rank=attempt)
            if all(
                (r := self._attractor.rank(pair, pt)) is not None and r <= attempt
                for pair, pt in false_pts
            ):
                cap = attempt
                break
            if attempt >= self.limits.spoiler_depth_cap:
                return False
        if cap is None:
            return False
        for pair in col.values:
            if any(col.values[pair].values()) and find_equal_cross_sections(col, pair) is None:
                return False
        col.no_confirmed_depth = cap
        col.exact = True
        return True

    # -- queries ---------------------------------------------------------------

    def decide(self, left: "Config | tuple[str, int]", right: "Config | tuple[str, int]") -> bool | None:
        """Exact simulation answer, or None when the resource caps are hit."""
        lstate, ln = (left.state, left.counter) if hasattr(left, "state") else left
        rstate, rn = (right.state, right.counter) if hasattr(right, "state") else right
        pair: Node = (lstate, rstate)
        if pair not in self.scans:
            raise GeometryError(f"unknown state pair {pair}")
        pt: Point = (ln, rn)
        zone = self._zone_value(pair, pt)
        if zone is not None:
            return zone
        attractor_feasible = max(pt) <= 4 * self.limits.max_rect
        for j, k, depth in self._schedule():
            col = self.coloring(j, k)
            if col.certified_yes and col.lookup(pair, pt):
                return True
            if attractor_feasible and self.spoiler_rank(pair, pt, depth) is not None:
                return False
            if not attractor_feasible and self._ensure_exact(col):
                return col.lookup(pair, pt)
        col = next((c for c in self._colorings.values() if c.certified_yes), None)
        if col is not None and self._ensure_exact(col):
            return col.lookup(pair, pt)
        return None

    def certified_coloring(self) -> QuotientColoring | None:
        """First coloring of the escalation schedule that certifies."""
        for j, k, _ in self._schedule():
            col = self.coloring(j, k)
            if col.certified_yes:
                return col
        return None

    def exact_coloring(self) -> QuotientColoring | None:
        """First coloring certified on both sides: claimed points verified
        locally, excluded window points confirmed by bounded Spoiler wins,
        periodicity witnessed by equal cross-sections."""
        for j, k, _ in self._schedule():
            col = self.coloring(j, k)
            if col.certified_yes and self._ensure_exact(col):
                return col
        return None

    def export_coloring(self) -> PeriodicColoring | None:
        col = self.certified_coloring()
        return col.to_periodic_coloring() if col is not None else None


def decide_strong(
    spoiler_net: Ocn,
    duplicator_net: Ocn,
    left: "Config",
    right: "Config",
    limits: EngineLimits | None = None,
) -> bool | None:
    """Decide left <= right (strong simulation) for one configuration pair.

    Normalizes, computes belts, resolves trivial-zone points immediately and
    otherwise escalates quotient colorings in tandem with bounded Spoiler
    search.  Returns None only when the resource caps are exceeded.
    """
    return StrongSimEngine(spoiler_net, duplicator_net, limits).decide(left, right)
