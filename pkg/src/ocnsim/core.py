"""One-counter nets: representation, semantics, normalization and product graphs.

A one-counter net (OCN) is a finite control graph whose transitions carry a
counter delta in {-1, 0, +1}.  Configurations are pairs of a control state and
a non-negative counter; a transition with delta -1 is disabled at counter 0.
This module also defines the line-oriented textual net format consumed by the
command line front end.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

# Identifiers starting with a double underscore are reserved for states and
# actions introduced internally (normalization, weak-simulation gadgets).
ELL = "__ell"
SINK = "__bot"
RESERVED_PREFIX = "__"

Transition = tuple[str, str, int, str]


class NetError(ValueError):
    """Raised for structurally invalid nets or invalid queries against them."""


@dataclass(frozen=True)
class Ocn:
    """A one-counter net: finite states, actions and counter transitions."""

    name: str
    states: tuple[str, ...]
    actions: tuple[str, ...]
    transitions: tuple[Transition, ...]

    def __post_init__(self) -> None:
        if len(set(self.states)) != len(self.states):
            raise NetError(f"net {self.name}: duplicate state identifiers")
        if len(set(self.actions)) != len(self.actions):
            raise NetError(f"net {self.name}: duplicate action identifiers")
        state_set, action_set = set(self.states), set(self.actions)
        for src, act, delta, dst in self.transitions:
            if src not in state_set or dst not in state_set:
                raise NetError(f"net {self.name}: transition uses unknown state {src!r} or {dst!r}")
            if act not in action_set:
                raise NetError(f"net {self.name}: transition uses unknown action {act!r}")
            if delta not in (-1, 0, 1):
                raise NetError(f"net {self.name}: delta {delta} not in {{-1, 0, +1}}")

    @cached_property
    def out(self) -> dict[str, tuple[Transition, ...]]:
        """Outgoing transitions grouped by source state."""
        grouped: dict[str, list[Transition]] = {s: [] for s in self.states}
        for t in self.transitions:
            grouped[t[0]].append(t)
        return {s: tuple(ts) for s, ts in grouped.items()}

    @cached_property
    def out_by_action(self) -> dict[tuple[str, str], tuple[Transition, ...]]:
        grouped: dict[tuple[str, str], list[Transition]] = {}
        for t in self.transitions:
            grouped.setdefault((t[0], t[1]), []).append(t)
        return {k: tuple(v) for k, v in grouped.items()}


@dataclass(frozen=True)
class Config:
    """A configuration: control state plus non-negative counter value."""

    state: str
    counter: int

    def __post_init__(self) -> None:
        if self.counter < 0:
            raise NetError(f"counter must be non-negative, got {self.counter}")


def steps(net: Ocn, c: Config) -> set[tuple[str, Config]]:
    """Enabled strong steps from a configuration.

    A transition with delta -1 is excluded when the counter is 0.
    """
    if c.state not in net.out:
        raise NetError(f"state {c.state!r} not in net {net.name}")
    result = set()
    for _, act, delta, dst in net.out[c.state]:
        n = c.counter + delta
        if n >= 0:
            result.add((act, Config(dst, n)))
    return result


def normalize_pair(spoiler_net: Ocn, duplicator_net: Ocn) -> tuple[Ocn, Ocn]:
    """Normalize a net pair for the simulation game.

    After normalization, over the shared (union) alphabet extended with a
    fresh no-op action:

    * every state of either net has a delta-0 self-loop on the fresh action,
      so Spoiler always has a non-negative move available;
    * the Duplicator net is complete: any missing (state, action) reply is
      routed to a decrementing sink, where Duplicator survives exactly as many
      rounds as his remaining counter.

    The construction preserves the winner of the Simulation Game from every
    pair of original configurations, and is idempotent.
    """
    alphabet = sorted(set(spoiler_net.actions) | set(duplicator_net.actions) | {ELL})

    def with_ell_loops(net: Ocn) -> tuple[list[str], list[Transition]]:
        trans = list(net.transitions)
        have = {(s, a) for s, a, _, _ in trans}
        for s in net.states:
            if (s, ELL) not in have:
                trans.append((s, ELL, 0, s))
        return list(net.states), trans

    sp_states, sp_trans = with_ell_loops(spoiler_net)
    dup_states, dup_trans = with_ell_loops(duplicator_net)

    covered = {(s, a) for s, a, _, _ in dup_trans}
    missing = [
        (s, a)
        for s in dup_states
        for a in alphabet
        if a != ELL and (s, a) not in covered
    ]
    if missing and SINK not in dup_states:
        dup_states.append(SINK)
        dup_trans.extend((SINK, a, -1, SINK) for a in alphabet)
    for s, a in missing:
        dup_trans.append((s, a, -1, SINK))

    spoiler_n = Ocn(spoiler_net.name, tuple(sp_states), tuple(alphabet), tuple(sp_trans))
    duplicator_n = Ocn(duplicator_net.name, tuple(dup_states), tuple(alphabet), tuple(dup_trans))
    return spoiler_n, duplicator_n


# ---------------------------------------------------------------------------
# Product control graph


Node = tuple[str, str]
Edge = tuple[Node, str, int, int, Node]


@dataclass(frozen=True)
class ProductGraph:
    """Synchronized control graph of a Spoiler/Duplicator net pair.

    Edges pair same-action transition rules of the two nets and carry both
    counter deltas; K is the number of control-state pairs.
    """

    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]
    spoiler: Ocn
    duplicator: Ocn

    @property
    def K(self) -> int:
        return len(self.nodes)

    @cached_property
    def out(self) -> dict[Node, tuple[Edge, ...]]:
        grouped: dict[Node, list[Edge]] = {v: [] for v in self.nodes}
        for e in self.edges:
            grouped[e[0]].append(e)
        return {v: tuple(es) for v, es in grouped.items()}

    @cached_property
    def successors(self) -> dict[Node, tuple[Node, ...]]:
        return {v: tuple(sorted({e[4] for e in es})) for v, es in self.out.items()}


def build_product(spoiler_net: Ocn, duplicator_net: Ocn) -> ProductGraph:
    """Build the product control graph of two nets over a shared alphabet."""
    if set(spoiler_net.actions) != set(duplicator_net.actions):
        raise NetError(
            f"alphabet mismatch between {spoiler_net.name} and {duplicator_net.name}"
        )
    nodes = tuple((p, q) for p in spoiler_net.states for q in duplicator_net.states)
    edges: list[Edge] = []
    for p, a, d, p2 in spoiler_net.transitions:
        for q, b, d2, q2 in duplicator_net.transitions:
            if a == b:
                edges.append(((p, q), a, d, d2, (p2, q2)))
    return ProductGraph(nodes, tuple(edges), spoiler_net, duplicator_net)


@dataclass(frozen=True)
class ProductPath:
    """A path in a product graph: a start node plus consecutive edges."""

    start: Node
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        at = self.start
        for e in self.edges:
            if e[0] != at:
                raise NetError("path edges are not consecutive")
            at = e[4]

    @property
    def end(self) -> Node:
        return self.edges[-1][4] if self.edges else self.start

    def nodes(self) -> list[Node]:
        result = [self.start]
        result.extend(e[4] for e in self.edges)
        return result

    @property
    def effect(self) -> tuple[int, int]:
        return (sum(e[2] for e in self.edges), sum(e[3] for e in self.edges))

    def extend(self, edge: Edge) -> "ProductPath":
        return ProductPath(self.start, self.edges + (edge,))


@dataclass(frozen=True)
class LassoSplit:
    """A lasso split into its acyclic prefix and closing cycle."""

    prefix: ProductPath
    cycle: ProductPath


def lasso_split(path: ProductPath) -> LassoSplit | None:
    """Split a lasso at its first repeated node; None if the path is no lasso.

    A path is a lasso when its final node is the only repetition: the node
    sequence repeats exactly once, at the very end.
    """
    nodes = path.nodes()
    seen: dict[Node, int] = {}
    for idx, v in enumerate(nodes):
        if v in seen:
            if idx != len(nodes) - 1:
                return None
            i = seen[v]
            prefix = ProductPath(path.start, path.edges[:i])
            cycle = ProductPath(v, path.edges[i:])
            return LassoSplit(prefix, cycle)
        seen[v] = idx
    return None


# ---------------------------------------------------------------------------
# Graph parameters for the belt constant


def _tarjan_sccs(nodes: Iterable[Node], succ: dict[Node, tuple[Node, ...]]) -> list[list[Node]]:
    """Iterative Tarjan strongly connected components."""
    index: dict[Node, int] = {}
    lowlink: dict[Node, int] = {}
    on_stack: set[Node] = set()
    stack: list[Node] = []
    sccs: list[list[Node]] = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            v, ei = work.pop()
            if ei == 0:
                index[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            advanced = False
            children = succ.get(v, ())
            while ei < len(children):
                w = children[ei]
                ei += 1
                if w not in index:
                    work.append((v, ei))
                    work.append((w, 0))
                    advanced = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            if lowlink[v] == index[v]:
                scc = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    scc.append(w)
                    if w == v:
                        break
                sccs.append(scc)
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
    return sccs


def graph_parameters(g: ProductGraph) -> tuple[int, int]:
    """Largest SCC size and an upper bound on the longest acyclic path length.

    The bound is the maximum node-weighted path through the SCC condensation
    (weight = SCC size) minus one; over-estimating only widens belts, which
    keeps the belt constant sound.
    """
    sccs = _tarjan_sccs(g.nodes, g.successors)
    comp_of: dict[Node, int] = {}
    for i, scc in enumerate(sccs):
        for v in scc:
            comp_of[v] = i
    scc_max = max((len(s) for s in sccs), default=0)

    comp_succ: dict[int, set[int]] = {i: set() for i in range(len(sccs))}
    for v in g.nodes:
        for w in g.successors.get(v, ()):
            if comp_of[v] != comp_of[w]:
                comp_succ[comp_of[v]].add(comp_of[w])

    # Tarjan emits SCCs in reverse topological order.
    best: dict[int, int] = {}
    for i, scc in enumerate(sccs):
        best[i] = len(scc) + max((best[j] for j in comp_succ[i]), default=0)
    acyc_bound = max(best.values(), default=1) - 1
    return scc_max, acyc_bound


# ---------------------------------------------------------------------------
# Textual net format


class ParseError(ValueError):
    """Parse failure with one-based line and column position."""

    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col
        self.message = message


def _check_identifier(tok: str, line: int, col: int) -> str:
    if tok.startswith(RESERVED_PREFIX):
        raise ParseError(line, col, f"identifier {tok!r} is reserved")
    return tok


_DELTAS = {"-1": -1, "0": 0, "+1": 1, "1": 1}


def parse_net(text: str, name_hint: str = "net") -> Ocn:
    """Parse the line-oriented textual net format.

    Grammar: one `net <name>` line, `states`/`actions` lines listing
    identifiers, and transition lines `<src> <action> <delta> <dst>` with
    delta in {-1, 0, +1}.  `#` starts a comment; blank lines are ignored.
    """
    name: str | None = None
    states: list[str] = []
    actions: list[str] = []
    transitions: list[Transition] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        toks = line.split()
        col = line.index(toks[0]) + 1
        if toks[0] == "net":
            if len(toks) != 2:
                raise ParseError(lineno, col, "expected: net <name>")
            if name is not None:
                raise ParseError(lineno, col, "duplicate net header")
            name = toks[1]
        elif toks[0] == "states":
            if len(toks) < 2:
                raise ParseError(lineno, col, "expected at least one state identifier")
            states.extend(_check_identifier(t, lineno, col) for t in toks[1:])
        elif toks[0] == "actions":
            if len(toks) < 2:
                raise ParseError(lineno, col, "expected at least one action identifier")
            actions.extend(_check_identifier(t, lineno, col) for t in toks[1:])
        else:
            if len(toks) != 4:
                raise ParseError(lineno, col, "expected: <src> <action> <delta> <dst>")
            src, act, delta_tok, dst = toks
            if delta_tok not in _DELTAS:
                raise ParseError(lineno, col, f"bad delta token {delta_tok!r}, want -1, 0 or +1")
            if src not in states:
                raise ParseError(lineno, col, f"unknown source state {src!r}")
            if dst not in states:
                raise ParseError(lineno, col, f"unknown target state {dst!r}")
            if act not in actions:
                raise ParseError(lineno, col, f"unknown action {act!r}")
            transitions.append((src, act, _DELTAS[delta_tok], dst))

    if name is None:
        name = name_hint
    if not states:
        raise ParseError(1, 1, "net has no states")
    try:
        return Ocn(name, tuple(states), tuple(actions), tuple(transitions))
    except NetError as exc:
        raise ParseError(1, 1, str(exc)) from exc


def format_net(net: Ocn) -> str:
    """Render a net in the textual format; inverse of parse_net."""
    lines = [f"net {net.name}"]
    lines.append("states " + " ".join(net.states))
    if net.actions:
        lines.append("actions " + " ".join(net.actions))
    for src, act, delta, dst in net.transitions:
        tok = {1: "+1", 0: "0", -1: "-1"}[delta]
        lines.append(f"{src} {act} {tok} {dst}")
    return "\n".join(lines) + "\n"
