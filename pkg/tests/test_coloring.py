import random

import pytest

from nets import NET_A, NET_ACOPY, NET_B, NET_Z, random_pair
from ocnsim.core import Config, Ocn, normalize_pair
from ocnsim.coloring import (
    Belt,
    GeometryError,
    PairGeometry,
    StrongSimEngine,
    decide_strong,
    find_equal_cross_sections,
    initial_rectangle,
    solve_quotient,
    spoiler_bounded_win,
    verify_coloring,
)
from ocnsim.geometry import Slope, c_above, c_below
from ocnsim.oracle import bounded_round_winner


def _engine(spoiler, duplicator, **kw):
    return StrongSimEngine(spoiler, duplicator, **kw)


# ---------------------------------------------------------------------------
# initial rectangle


def test_initial_rectangle_single_belt_corner_rule():
    belts = [Belt(("p", "q"), Slope(1, 1), 4)]
    lx, ly = initial_rectangle(belts)
    geo = PairGeometry(("p", "q"), Slope(1, 1), 4, (0, 0), 0, 1)
    assert not geo.in_belt((lx, ly))


def test_initial_rectangle_two_belts_disjoint_outside():
    belts = [
        Belt(("p", "q"), Slope(1, 1), 4),
        Belt(("p", "r"), Slope(2, 1), 4),
    ]
    lx, ly = initial_rectangle(belts)
    geos = [PairGeometry(b.pair, b.slope, b.c, (0, 0), 0, 1) for b in belts]
    assert not any(g.in_belt((lx, ly)) for g in geos)
    for n in range(0, 1000, 7):
        for m in range(0, 1000, 7):
            if n <= lx and m <= ly:
                continue
            assert not (geos[0].in_belt((n, m)) and geos[1].in_belt((n, m)))


def test_initial_rectangle_parallel_belts_only():
    belts = [
        Belt(("p", "q"), Slope(1, 1), 2),
        Belt(("p", "r"), Slope(2, 2), 3),
    ]
    lx, ly = initial_rectangle(belts)
    geos = [PairGeometry(b.pair, b.slope, b.c, (0, 0), 0, 1) for b in belts]
    assert not any(g.in_belt((lx, ly)) for g in geos)


# ---------------------------------------------------------------------------
# bounded Spoiler search


def test_spoiler_bounded_win_a_vs_a():
    nets = normalize_pair(NET_A, NET_ACOPY)
    assert spoiler_bounded_win(nets, (Config("p", 5), Config("q", 3)), depth=10)
    assert not spoiler_bounded_win(nets, (Config("p", 3), Config("q", 5)), depth=40)


def test_spoiler_bounded_win_sink_at_zero():
    # Duplicator routed to the decrementing sink at counter 0 loses in one round
    sp = Ocn("S", ("s",), ("a", "b"), (("s", "b", 0, "s"),))
    dup = Ocn("D", ("d",), ("a",), (("d", "a", 0, "d"),))
    nets = normalize_pair(sp, dup)
    from ocnsim.core import SINK

    assert spoiler_bounded_win(nets, (Config("s", 1), Config(SINK, 0)), depth=1)


def test_spoiler_bounded_win_matches_oracle():
    for seed in range(4):
        n, m = random_pair(seed)
        nets = normalize_pair(n, m)
        for q in nets[0].states[:1]:
            for q2 in nets[1].states[:2]:
                for c1 in (0, 3):
                    for c2 in (0, 3):
                        fast = spoiler_bounded_win(
                            nets, (Config(q, c1), Config(q2, c2)), depth=12
                        )
                        slow = bounded_round_winner(nets, (Config(q, c1), Config(q2, c2)), 12)
                        assert fast == slow.spoiler_wins


# ---------------------------------------------------------------------------
# quotient colorings


def test_solve_quotient_a_vs_a_matches_oracle_region():
    eng = _engine(NET_A, NET_ACOPY)
    nets = (eng.spoiler_net, eng.duplicator_net)
    col = solve_quotient(nets, eng.belts(), (24, 24), j=27, k=1)
    for n in range(0, 31):
        for m in range(0, 31):
            assert col.lookup(("p", "q"), (n, m)) == (n <= m)


def test_solve_quotient_all_win_pairs():
    for sp, dn, pair in [(NET_Z, NET_B, ("z", "r")), (NET_A, NET_Z, ("p", "z"))]:
        eng = _engine(sp, dn)
        nets = (eng.spoiler_net, eng.duplicator_net)
        col = solve_quotient(nets, eng.belts(), (eng.w, eng.w), j=eng.w + 3, k=1)
        for n in range(0, 25, 3):
            for m in range(0, 25, 3):
                assert col.lookup(pair, (n, m))


def test_solve_quotient_monotone_in_j_and_k():
    # growing the window or refining the period to a multiple never loses points
    for seed in (2, 5, 11):
        n, m = random_pair(seed)
        eng = _engine(n, m)
        nets = (eng.spoiler_net, eng.duplicator_net)
        belts = eng.belts()
        base = solve_quotient(nets, belts, (eng.w, eng.w), j=eng.w, k=1)
        bigger_j = solve_quotient(nets, belts, (eng.w, eng.w), j=2 * eng.w, k=1)
        multiple_k = solve_quotient(nets, belts, (eng.w, eng.w), j=eng.w, k=2)
        for pair, vals in base.values.items():
            for pt, v in vals.items():
                if v:
                    assert bigger_j.lookup(pair, pt)
                    assert multiple_k.lookup(pair, pt)


def test_window_points_match_zone_predicates():
    rng = random.Random(5)
    for _ in range(120):
        while True:
            x, y = rng.randint(0, 5), rng.randint(0, 5)
            if (x, y) != (0, 0):
                break
        geo = PairGeometry(
            ("a", "b"), Slope(x, y), rng.randint(0, 9),
            (rng.randint(2, 20), rng.randint(2, 20)), rng.randint(0, 8), rng.randint(1, 4),
        )
        X, Y = geo.rect_cap(geo.j + geo.k)
        expect = {(n, m) for n in range(X + 1) for m in range(Y + 1) if geo.in_belt((n, m))}
        assert set(geo.window_points()) == expect


def test_quotient_wrap_geometry_error():
    eng = _engine(NET_A, NET_ACOPY)
    col = eng.certified_coloring()
    geo = col.geometry[("p", "q")]
    with pytest.raises(GeometryError):
        # vertical wrap cannot reduce a horizontal overflow of a diagonal
        # belt's window: force an out-of-belt coordinate
        bad = PairGeometry(("p", "q"), Slope(0, 1), 1, (4, 4), 1, 1)
        bad.wrap((50, 2))


# ---------------------------------------------------------------------------
# verification


def _mutate(pc, pair, pt, value):
    data = pc.pairs[pair]
    pools = {"init": set(data.init), "aper": set(data.aper), "per": set(data.per)}
    geo = pc.geometry(pair)
    if pt[0] <= pc.l0[0] and pt[1] <= pc.l0[1]:
        which = "init"
    elif geo.in_rect(pt, data.j):
        which = "aper"
    else:
        which = "per"
    if value:
        pools[which].add(pt)
    else:
        pools[which].discard(pt)
    from dataclasses import replace

    pc.pairs[pair] = replace(
        data,
        init=frozenset(pools["init"]),
        aper=frozenset(pools["aper"]),
        per=frozenset(pools["per"]),
    )


def test_verify_coloring_clean():
    eng = _engine(NET_A, NET_ACOPY)
    pc = eng.export_coloring()
    report = verify_coloring((eng.spoiler_net, eng.duplicator_net), pc, spoiler_depth_cap=128)
    assert report.yes_violations == []
    assert report.no_unconfirmed == []
    assert report.periodicity_failures == []


def test_verify_coloring_flip_true_to_false():
    eng = _engine(NET_A, NET_ACOPY)
    pc = eng.export_coloring()
    _mutate(pc, ("p", "q"), (3, 5), False)  # a truly simulated point
    report = verify_coloring((eng.spoiler_net, eng.duplicator_net), pc, spoiler_depth_cap=64)
    assert (("p", "q"), (3, 5)) in report.no_unconfirmed


def test_verify_coloring_flip_false_to_true():
    eng = _engine(NET_A, NET_ACOPY)
    pc = eng.export_coloring()
    _mutate(pc, ("p", "q"), (5, 3), True)  # a truly excluded point
    report = verify_coloring((eng.spoiler_net, eng.duplicator_net), pc, spoiler_depth_cap=64)
    assert any(pt == (5, 3) or abs(pt[0] - 5) + abs(pt[1] - 3) <= 1
               for _, pt in report.yes_violations)


# ---------------------------------------------------------------------------
# decide_strong


def test_decide_strong_reference_answers():
    assert decide_strong(NET_A, NET_ACOPY, Config("p", 3), Config("q", 5)) is True
    assert decide_strong(NET_A, NET_ACOPY, Config("p", 5), Config("q", 3)) is False
    assert decide_strong(NET_Z, NET_B, Config("z", 0), Config("r", 0)) is True


def test_decide_strong_identity_simulation():
    for seed in range(8):
        n, _ = random_pair(seed)
        eng = _engine(n, n)
        for q in n.states:
            for c in range(0, 9, 4):
                assert eng.decide((q, c), (q, c)) is True


def test_decide_strong_monotone_in_counters():
    for seed in range(10):
        n, m = random_pair(seed)
        eng = _engine(n, m)
        for q in n.states[:2]:
            for q2 in m.states[:2]:
                vals = {
                    (c1, c2): eng.decide((q, c1), (q2, c2))
                    for c1 in range(8)
                    for c2 in range(8)
                }
                for c1 in range(7):
                    for c2 in range(7):
                        if vals[(c1, c2)]:
                            assert vals[(c1, c2 + 1)]  # upward closed in n'
                        if not vals[(c1, c2)]:
                            assert not vals[(c1 + 1, c2)]  # downward closed in n


def test_trivial_zone_correctness():
    # sampled zone points, checked against the engine's bounded Spoiler
    # search: the Duplicator zone never yields a win, the Spoiler zone always
    rng = random.Random(42)
    for seed in range(10):
        n, m = random_pair(seed)
        eng = _engine(n, m)
        for pair in eng.scope:
            scan = eng.scans[pair]
            c = eng.c_pair[pair]
            for _ in range(4):
                pt = (rng.randint(0, 40), rng.randint(0, 40))
                if c_above(pt, scan.boundary, c):
                    assert eng.spoiler_rank(pair, pt, depth=60) is None
                if c_below(pt, scan.boundary, c):
                    assert eng.spoiler_rank(pair, pt, depth=200) is not None


def test_decide_strong_huge_counters():
    eng = _engine(NET_A, NET_ACOPY)
    big = 10**12
    assert eng.decide(("p", big), ("q", big + 1)) is True
    assert eng.decide(("p", big), ("q", big)) is True
    assert eng.decide(("p", big + 1), ("q", big)) is False
    assert eng.decide(("p", big), ("q", 3)) is False


def test_periodic_expansion_matches_recomputation():
    # the exported description, re-expanded, matches a recomputation with the
    # window pushed two periods further
    for seed in (1, 3, 7, 13):
        n, m = random_pair(seed)
        eng = _engine(n, m)
        col = eng.certified_coloring()
        assert col is not None
        nets = (eng.spoiler_net, eng.duplicator_net)
        geo0 = next(iter(col.geometry.values()))
        wider = solve_quotient(nets, eng.belts(), geo0.l0, j=geo0.j + 2 * geo0.k, k=geo0.k)
        for pair, vals in wider.values.items():
            for pt, v in vals.items():
                assert col.lookup(pair, pt) == v, (pair, pt)


# ---------------------------------------------------------------------------
# cross-sections


def test_cross_sections_a_vs_a():
    eng = _engine(NET_A, NET_ACOPY)
    col = eng.certified_coloring()
    res = find_equal_cross_sections(col, ("p", "q"))
    assert res is not None
    level1, level2, k = res
    assert k == 1 and level2 == level1 + 1


def test_cross_sections_all_win_pair():
    eng = _engine(NET_Z, NET_B)
    col = eng.certified_coloring()
    res = find_equal_cross_sections(col, ("z", "r"))
    assert res is not None
    assert res[2] == 1


def test_cross_sections_parity_net():
    # Spoiler pays one unit per two rounds while Duplicator pays two units up
    # front in each four-round block: the frontier is n' >= n + (n mod 2),
    # whose staircase repeats only every second slope step
    sp = Ocn("SP2", ("s0", "s1"), ("a",), (("s0", "a", -1, "s1"), ("s1", "a", 0, "s0")))
    dup = Ocn(
        "DUP2", ("d0", "d1", "d2", "d3"), ("a",),
        (
            ("d0", "a", -1, "d1"),
            ("d1", "a", -1, "d2"),
            ("d2", "a", 0, "d3"),
            ("d3", "a", 0, "d0"),
        ),
    )
    eng = _engine(sp, dup)
    for n in range(8):
        for m in range(10):
            assert eng.decide(("s0", n), ("d0", m)) == (m >= n + (n % 2))
    col = eng.exact_coloring()
    assert col is not None
    res = find_equal_cross_sections(col, ("s0", "d0"))
    assert res is not None
    assert res[2] == 2
