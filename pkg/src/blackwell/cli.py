"""Command-line front end.

    blackwell minmax      --spec game.json --out DIR
    blackwell synth       --spec game.json --epsilon 0.1 --out DIR [--target 0.5,0.5]
    blackwell payoff-set  --spec game.json --epsilon 0.1 --out DIR --format json,csv,svg
    blackwell verify      --spec game.json --artifact DIR/automaton.json --epsilon 0.2 --out DIR
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .config import DEFAULT_CONFIG, SolverConfig
from .errors import BlackwellError, InfeasibleError, ResourceError, SpecError
from .equilibrium import folk_equilibrium, payoff_set, synthesize_equilibrium
from .deviation import verify_equilibrium
from .chain import exact_payoffs
from .model import to_fraction
from .montecarlo import monte_carlo
from .serialize import (
    SCHEMA_VERSION,
    automaton_to_dict,
    dump_json,
    load_automaton,
    load_spec,
    num,
    play_to_dict,
)
from .svg import ir_region, render
from .hull import in_hull
from .values import all_minmax, history_independence_report

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERIFY_FAIL = 2
EXIT_INFEASIBLE = 3
EXIT_RESOURCE = 4
EXIT_PARSE = 5
FORMATS = ("json", "csv", "svg")


@dataclass(frozen=True)
class RunConfig:
    command: str
    spec: Path
    epsilon: Fraction
    horizon: int
    reps: int
    seed: int
    denominator: int
    out: Path
    formats: tuple
    artifact: Path | None = None
    target: tuple | None = None

    def __post_init__(self):
        if not 0 < self.epsilon <= 1:
            raise ValueError("epsilon must lie in (0, 1]")
        if self.horizon < 1 or self.reps < 1:
            raise ValueError("horizon and reps must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.denominator < 1:
            raise ValueError("denominator must be at least 1")
        bad = set(self.formats) - set(FORMATS)
        if bad:
            raise ValueError(f"unknown formats {sorted(bad)}")

    @property
    def solver(self) -> SolverConfig:
        return SolverConfig(denominator_cap=self.denominator, seed=self.seed % 2**32)


def _envelope(command: str, cfg: RunConfig) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "spec": cfg.spec.name}


def cmd_minmax(cfg: RunConfig) -> int:
    spec = load_spec(cfg.spec)
    certs = all_minmax(spec, cfg.solver)
    doc = _envelope("minmax", cfg)
    doc["players"] = [
        {
            "player": spec.players[i],
            "objective": spec.objectives[i].kind,
            "certificate": c.to_json(spec),
            "history_independence": history_independence_report(spec, i, cfg.solver),
        }
        for i, c in enumerate(certs)
    ]
    doc["values"] = [num(c.value_lo) if c.exact else [num(c.value_lo), num(c.value_hi)] for c in certs]
    dump_json(doc, cfg.out / "minmax.json")
    print("minmax values:", ", ".join(f"{p}={v}" for p, v in zip(spec.players, doc["values"])))
    return EXIT_OK


def cmd_synth(cfg: RunConfig) -> int:
    spec = load_spec(cfg.spec)
    if cfg.target is not None:
        art = folk_equilibrium(spec, cfg.target, cfg.epsilon, cfg.solver)
    else:
        art = synthesize_equilibrium(spec, cfg.epsilon, cfg.solver)
    exact = exact_payoffs(spec, art.automaton)
    auto_doc = automaton_to_dict(spec, art.automaton)
    auto_doc["epsilon"] = num(art.epsilon)
    auto_doc["payoffs"] = [num(v) for v in exact]
    auto_doc["declared_gain"] = num(art.declared_gain)
    dump_json(auto_doc, cfg.out / "automaton.json")
    play_doc = _envelope("synth", cfg)
    play_doc["plays"] = [
        {**play_to_dict(p), "weight": num(w), "payoffs": [num(v) for v in _payoffs(spec, p)]}
        for p, w in zip(art.plays, art.weights)
    ]
    play_doc["expected_payoffs"] = [num(v) for v in exact]
    play_doc["certificates"] = [c.to_json(spec) for c in art.certificates]
    dump_json(play_doc, cfg.out / "play.json")
    lines = [
        f"epsilon: {art.epsilon}",
        f"automaton states: {len(art.automaton.states)}",
        "expected payoffs: " + ", ".join(f"{p}={v}" for p, v in zip(spec.players, exact)),
        "minmax lower bounds: " + ", ".join(f"{p}={c.value_lo}" for p, c in zip(spec.players, art.certificates)),
        f"declared deviation gain bound: {art.declared_gain}",
    ]
    for p, w in zip(art.plays, art.weights):
        lines.append(f"play (weight {w}): preamble={list(p.preamble)} cycle={list(p.cycle)}")
    lines.extend(art.notes)
    (cfg.out / "summary.txt").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))
    return EXIT_OK


def _payoffs(spec, play):
    from .model import payoff_vector

    return payoff_vector(spec, play)


def _witness_str(prov) -> str:
    if isinstance(prov, str):
        return prov
    enc = lambda seq: " ".join(",".join(a) for a in seq)
    return f"preamble=[{enc(prov.preamble)}] cycle=[{enc(prov.cycle)}]"


def cmd_payoff_set(cfg: RunConfig) -> int:
    spec = load_spec(cfg.spec)
    solver = cfg.solver
    certs = all_minmax(spec, solver)
    grid = sorted({cfg.epsilon} | {to_fraction(e) for e in solver.epsilon_grid}, reverse=True)
    polys = [payoff_set(spec, e, cfg.denominator, solver, certificates=certs) for e in grid]
    feasible = payoff_set(spec, cfg.epsilon, cfg.denominator, solver, ir=False, certificates=certs)
    main = polys[grid.index(cfg.epsilon)]
    if "json" in cfg.formats:
        doc = _envelope("payoff-set", cfg)
        doc["epsilon"] = num(cfg.epsilon)
        doc["minmax"] = [num(c.value_lo) for c in certs]
        doc["hulls"] = [
            {
                "epsilon": num(p.epsilon),
                "vertices": [[num(v) for v in vert] for vert in p.vertices],
                "witnesses": [_witness_str(w) for w in p.provenance],
            }
            for p in polys
        ]
        doc["feasible_points"] = [[num(v) for v in pt] for pt in feasible.points]
        dump_json(doc, cfg.out / "payoff_set.json")
    if "csv" in cfg.formats:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["epsilon"] + [f"w_{p}" for p in spec.players] + ["witness"])
        for p in polys:
            for vert, prov in zip(p.vertices, p.provenance):
                w.writerow([num(p.epsilon)] + [num(v) for v in vert] + [_witness_str(prov)])
        (cfg.out / "payoff_set.csv").write_text(buf.getvalue())
    if "svg" in cfg.formats:
        if spec.n != 2:
            print(f"notice: {spec.n} players; SVG needs exactly 2, wrote CSV/JSON only", file=sys.stderr)
        else:
            levels = [c.value_lo for c in certs]
            region = ir_region(feasible.points, levels) if feasible.points else []
            smallest = polys[-1].vertices
            marks = [p for p in region if not in_hull(smallest, p)]
            svg = render([(num(p.epsilon), list(p.vertices)) for p in polys], list(feasible.points), levels, marks, title=cfg.spec.stem)
            (cfg.out / "payoff_set.svg").write_text(svg)
    print(f"hull vertices at epsilon={cfg.epsilon}: " + ", ".join("(" + ", ".join(num(v) for v in vert) + ")" for vert in main.vertices))
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    spec = load_spec(cfg.spec)
    if cfg.artifact is None:
        raise SpecError("verify needs --artifact")
    auto = load_automaton(spec, cfg.artifact)
    certs = all_minmax(spec, cfg.solver)

    class _Art:
        automaton = auto
        certificates = certs

    report = verify_equilibrium(spec, _Art, cfg.epsilon, cfg.solver)
    mc = monte_carlo(spec, auto, max(cfg.horizon, spec.max_horizon), cfg.reps, cfg.seed)
    doc = _envelope("verify", cfg)
    doc["artifact"] = cfg.artifact.name
    doc.update(report.to_json(spec))
    doc["monte_carlo"] = mc.to_json(spec)
    dump_json(doc, cfg.out / "verify.json")
    status = "PASS" if report.passed else "FAIL"
    print(f"{status}: max deviation gain {report.max_gain} ({float(report.max_gain):.6g}) vs epsilon {cfg.epsilon}")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAIL


COMMANDS = {"minmax": cmd_minmax, "synth": cmd_synth, "payoff-set": cmd_payoff_set, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blackwell", description="Minmax values, equilibria and verification for Blackwell games.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--spec", required=True, type=Path, help="game spec JSON file")
        p.add_argument("--epsilon", default="0.1", help="approximation level in (0, 1]")
        p.add_argument("--horizon", type=int, default=1000, help="Monte Carlo horizon T")
        p.add_argument("--reps", type=int, default=200, help="Monte Carlo replications N")
        p.add_argument("--seed", type=int, default=0, help="64-bit unsigned seed")
        p.add_argument("--denominator", type=int, default=DEFAULT_CONFIG.denominator_cap, help="largest cycle length")
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")
        p.add_argument("--format", default="json,csv,svg", help="comma separated subset of json,csv,svg")
        if name == "verify":
            p.add_argument("--artifact", type=Path, required=True, help="automaton.json written by synth")
        if name == "synth":
            p.add_argument("--target", default=None, help="payoff target w_1,...,w_n (folk construction)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            spec=args.spec,
            epsilon=to_fraction(args.epsilon),
            horizon=args.horizon,
            reps=args.reps,
            seed=args.seed,
            denominator=args.denominator,
            out=args.out,
            formats=tuple(f.strip() for f in args.format.split(",") if f.strip()),
            artifact=getattr(args, "artifact", None),
            target=tuple(to_fraction(v) for v in args.target.split(",")) if getattr(args, "target", None) else None,
        )
    except (ValueError, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    cfg.out.mkdir(parents=True, exist_ok=True)
    try:
        return COMMANDS[cfg.command](cfg)
    except SpecError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except InfeasibleError as e:
        doc = _envelope(cfg.command, cfg)
        doc.update({"status": "infeasible", "message": str(e), "report": e.report})
        dump_json(doc, cfg.out / "infeasible.json")
        print(f"infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ResourceError as e:
        print(f"resource cap: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except BlackwellError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
