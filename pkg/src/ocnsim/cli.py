"""Command line front end: parse nets, decide simulation, render and export.

Exit codes: 0 = simulated, 1 = not simulated, 2 = undecided at the resource
caps, 64 = input parse error.
"""

from __future__ import annotations

import json
import os
import sys
import time
from pathlib import Path

import click

from .coloring import EngineLimits, StrongSimEngine
from .core import Config, Ocn, ParseError, format_net, parse_net
from .oracle import bounded_round_winner, bounded_weak_round_winner
from .weaksim import decide_weak

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_UNDECIDED = 2
EXIT_PARSE = 64


def _load_net(path: str) -> Ocn:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        click.echo(f"{path}: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    try:
        return parse_net(text, name_hint=Path(path).stem)
    except ParseError as exc:
        click.echo(f"{path}: {exc}", err=True)
        sys.exit(EXIT_PARSE)


def _parse_config(literal: str, net: Ocn, path: str) -> Config:
    state, sep, counter = literal.partition(":")
    if not sep or not counter.lstrip("-").isdigit() or int(counter) < 0:
        click.echo(f"bad configuration literal {literal!r}, want state:counter", err=True)
        sys.exit(EXIT_PARSE)
    if state not in net.states:
        click.echo(f"state {state!r} not in net {net.name} ({path})", err=True)
        sys.exit(EXIT_PARSE)
    return Config(state, int(counter))


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("OCNSIM_THREADS", "1")))
    except ValueError:
        return 1


def _limits(max_depth: int | None, max_period: int | None, max_rect: int | None) -> EngineLimits:
    limits = EngineLimits()
    if max_depth is not None:
        limits.spoiler_depth_cap = max_depth
        limits.depth0 = min(limits.depth0, max_depth)
    if max_period is not None:
        limits.k_schedule = tuple(k for k in limits.k_schedule if k <= max_period) or (1,)
    if max_rect is not None:
        limits.max_rect = max_rect
    return limits


@click.group()
def main() -> None:
    """Decide strong and weak simulation preorder between one-counter nets."""


@main.command()
@click.option("--strong", "mode", flag_value="strong", default=True)
@click.option("--weak", "mode", flag_value="weak")
@click.option("--tau", default="tau", show_default=True, help="internal action for --weak")
@click.option("--json", "as_json", is_flag=True, help="machine-readable verdict")
@click.option("--max-depth", type=int, default=None, help="bounded Spoiler search cap")
@click.option("--max-period", type=int, default=None, help="largest period k to try")
@click.option("--max-rect", type=int, default=None, help="largest window rectangle")
@click.option(
    "--dump-approximants", "dump_dir", type=click.Path(), default=None,
    help="write each weak approximant net pair into this directory",
)
@click.argument("net_a")
@click.argument("net_b")
@click.argument("conf_a")
@click.argument("conf_b")
def check(mode, tau, as_json, max_depth, max_period, max_rect, dump_dir,
          net_a, net_b, conf_a, conf_b):
    """Decide whether CONF_A of NET_A is simulated by CONF_B of NET_B."""
    spoiler = _load_net(net_a)
    duplicator = _load_net(net_b)
    left = _parse_config(conf_a, spoiler, net_a)
    right = _parse_config(conf_b, duplicator, net_b)
    limits = _limits(max_depth, max_period, max_rect)
    started = time.monotonic()
    j = k = None
    belts_used = 0
    if mode == "strong":
        engine = StrongSimEngine(spoiler, duplicator, limits, threads=_threads())
        answer = engine.decide(left, right)
        belts_used = len(engine.scope)
        col = next((c for c in engine._colorings.values() if c.certified_yes), None)
        if col is not None:
            geo = next(iter(col.geometry.values()))
            j, k = geo.j, geo.k
    else:
        decision = decide_weak(
            spoiler, duplicator, left, right, tau=tau, limits=limits,
            collect=dump_dir is not None,
        )
        answer = decision.answer
        if dump_dir is not None:
            out_dir = Path(dump_dir)
            out_dir.mkdir(parents=True, exist_ok=True)
            for nets in decision.approximants:
                (out_dir / f"level{nets.level}_spoiler.ocn").write_text(
                    format_net(nets.spoiler), encoding="utf-8"
                )
                (out_dir / f"level{nets.level}_duplicator.ocn").write_text(
                    format_net(nets.duplicator), encoding="utf-8"
                )
    elapsed_ms = int((time.monotonic() - started) * 1000)
    verdict = {True: "true", False: "false", None: "undecided"}[answer]
    if as_json:
        click.echo(json.dumps({
            "schema": 1,
            "verdict": verdict,
            "pair": {"left": f"{left.state}:{left.counter}", "right": f"{right.state}:{right.counter}"},
            "belts_used": belts_used,
            "j": j,
            "k": k,
            "elapsed_ms": elapsed_ms,
        }))
    else:
        click.echo(f"simulated: {verdict}")
    sys.exit({True: EXIT_TRUE, False: EXIT_FALSE, None: EXIT_UNDECIDED}[answer])


@main.command()
@click.option("--json", "as_json", is_flag=True)
@click.argument("net_a")
@click.argument("net_b")
def belts(as_json, net_a, net_b):
    """Print each state pair's boundary slope and belt width."""
    spoiler = _load_net(net_a)
    duplicator = _load_net(net_b)
    engine = StrongSimEngine(spoiler, duplicator, threads=_threads())
    rows = [
        {
            "q": b.pair[0],
            "q'": b.pair[1],
            "slope": [b.slope.rho, b.slope.rho_prime],
            "c": b.c,
            "vertical": b.vertical,
        }
        for b in engine.belts()
    ]
    if as_json:
        click.echo(json.dumps({"schema": 1, "c_global": engine.c_global, "pairs": rows}))
        return
    click.echo(f"{'q':<12} {'q_prime':<12} {'slope':<8} {'c':<5} vertical")
    for r in rows:
        q, q2 = r["q"], r["q'"]
        slope = f"[{r['slope'][0]},{r['slope'][1]}]"
        vertical = "yes" if r["vertical"] else "no"
        click.echo(f"{q:<12} {q2:<12} {slope:<8} {r['c']:<5} {vertical}")


def _render_ascii(engine: StrongSimEngine, pair, size: int) -> str:
    rows = []
    for m in range(size - 1, -1, -1):
        cells = []
        for n in range(size):
            v = engine.decide((pair[0], n), (pair[1], m))
            cells.append("#" if v else "." if v is False else "?")
        rows.append("".join(cells))
    return "\n".join(rows) + "\n"


def _render_svg(engine: StrongSimEngine, pair, size: int) -> str:
    cell = 10
    span = size * cell
    scan = engine.scans[pair]
    c = engine.c_pair[pair]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{span}" height="{span}" viewBox="0 0 {span} {span}">',
        f'<rect width="{span}" height="{span}" fill="white"/>',
    ]
    from .geometry import c_above, c_below

    for n in range(size):
        for m in range(size):
            if c_above((n, m), scan.boundary, c):
                fill = "#d8f0d8"  # trivially simulated zone
            elif c_below((n, m), scan.boundary, c):
                fill = "#f0d8d8"  # trivially excluded zone
            else:
                fill = "#d8e4f4"  # belt strip
            x = n * cell
            y = (size - 1 - m) * cell
            parts.append(f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" fill="{fill}"/>')
    for n in range(size):
        for m in range(size):
            v = engine.decide((pair[0], n), (pair[1], m))
            if v:
                x = n * cell + cell // 2
                y = (size - 1 - m) * cell + cell // 2
                parts.append(f'<circle cx="{x}" cy="{y}" r="3" fill="#264d73"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


@main.command()
@click.option("--pair", "pair_opt", required=True, help="state pair q,q'")
@click.option("--max", "size", type=int, default=16, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["ascii", "svg"]), default="ascii")
@click.option("--out", type=click.Path(), default=None, help="output file (default stdout)")
@click.argument("net_a")
@click.argument("net_b")
def render(pair_opt, size, fmt, out, net_a, net_b):
    """Render the simulation coloring of one state pair as a grid."""
    spoiler = _load_net(net_a)
    duplicator = _load_net(net_b)
    q, sep, q2 = pair_opt.partition(",")
    if not sep or q not in spoiler.states or q2 not in duplicator.states:
        click.echo(f"bad --pair {pair_opt!r}", err=True)
        sys.exit(EXIT_PARSE)
    engine = StrongSimEngine(spoiler, duplicator, threads=_threads())
    text = (_render_ascii if fmt == "ascii" else _render_svg)(engine, (q, q2), size)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@main.command()
@click.option("--out", type=click.Path(), required=True)
@click.option("--pairs", "pairs_opt", default=None, help="semicolon-separated q,q' filters")
@click.argument("net_a")
@click.argument("net_b")
def export(out, pairs_opt, net_a, net_b):
    """Write the semilinear description of the simulation relation as JSON."""
    spoiler = _load_net(net_a)
    duplicator = _load_net(net_b)
    engine = StrongSimEngine(spoiler, duplicator, threads=_threads())
    pc = engine.export_coloring()
    if pc is None:
        click.echo("undecided: no certified coloring within the caps", err=True)
        sys.exit(EXIT_UNDECIDED)
    keep = None
    if pairs_opt:
        keep = set()
        for item in pairs_opt.split(";"):
            q, sep, q2 = item.partition(",")
            if not sep:
                click.echo(f"bad --pairs item {item!r}", err=True)
                sys.exit(EXIT_PARSE)
            keep.add((q, q2))
    obj = pc.to_json_obj()
    if keep is not None:
        obj["pairs"] = [p for p in obj["pairs"] if (p["q"], p["q'"]) in keep]
    with open(out, "w", encoding="utf-8") as fh:
        fh.write('{"schema": 1, "l0": %s, "pairs": [' % json.dumps(obj["l0"]))
        for i, p in enumerate(obj["pairs"]):
            fh.write(("," if i else "") + "\n" + json.dumps(p, sort_keys=True))
        fh.write("\n]}\n")


@main.command()
@click.option("--rounds", type=int, default=32, show_default=True)
@click.option("--weak", is_flag=True)
@click.option("--tau", default="tau", show_default=True)
@click.option("--tau-cap", type=int, default=4, show_default=True)
@click.option("--json", "as_json", is_flag=True)
@click.argument("net_a")
@click.argument("net_b")
@click.argument("conf_a")
@click.argument("conf_b")
def oracle(rounds, weak, tau, tau_cap, as_json, net_a, net_b, conf_a, conf_b):
    """Run the brute-force bounded-round game oracle."""
    spoiler = _load_net(net_a)
    duplicator = _load_net(net_b)
    left = _parse_config(conf_a, spoiler, net_a)
    right = _parse_config(conf_b, duplicator, net_b)
    if weak:
        verdict = bounded_weak_round_winner(
            (spoiler, duplicator), (left, right), rounds, tau_cap, tau
        )
    else:
        verdict = bounded_round_winner((spoiler, duplicator), (left, right), rounds)
    if as_json:
        click.echo(json.dumps({
            "schema": 1,
            "spoiler_wins": verdict.spoiler_wins,
            "rounds": verdict.rounds,
        }))
    else:
        kind = "spoiler_wins_within" if verdict.spoiler_wins else "duplicator_survives"
        click.echo(f"{kind}: {verdict.rounds}")


@main.command("print")
@click.argument("net_a")
def print_net(net_a):
    """Parse a net file and print its canonical form (round-trip check)."""
    click.echo(format_net(_load_net(net_a)), nl=False)


if __name__ == "__main__":
    main()
