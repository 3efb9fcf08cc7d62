"""Command-line interface: play, verify, systole, scan.

All numeric inputs are rational strings ("3/4", "1/1048576") so every
run is exact and byte-identically reproducible from its config and seed.
Relative output paths resolve against $CUSPGAME_OUTPUT_DIR when set.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from typing import List, Optional

from .bob import BobConfig, make_bob
from .certarith import PrecisionExhausted, format_rational, parse_rational
from .game import GameKind, IllegalMove, ProductBall, run_game
from .geometry import (BudgetExceeded, RationalDirection, delta_membership)
from .lattice import systole_trajectory
from .strategy import StrategyState, make_alice, setup_constants
from .verify import SUITES, run_suite

F = Fraction


def _out_path(path: str) -> str:
    base = os.environ.get("CUSPGAME_OUTPUT_DIR")
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _reject_unknown(d: dict, allowed: set, where: str) -> None:
    extra = set(d) - allowed
    if extra:
        raise ValueError(f"unknown keys in {where}: {sorted(extra)}")


def _load_config(path: Optional[str]) -> dict:
    if path is None:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config must be a JSON object")
    return cfg


# ---------------------------------------------------------------------------
# play
# ---------------------------------------------------------------------------

_PLAY_KEYS = {"mode", "beta", "gamma", "rounds", "seed", "R", "epsilon",
              "initial_ball", "bob", "budget", "output"}
_BALL_KEYS = {"lambda", "center", "radius"}
_BOB_KEYS = {"kind", "seed", "shrink", "target", "script"}
_BUDGET_KEYS = {"q_max", "precision_cap"}
_OUTPUT_KEYS = {"transcript", "audit"}


def _parse_ball(d: dict) -> ProductBall:
    _reject_unknown(d, _BALL_KEYS, "initial_ball")
    return ProductBall.from_json(d)


def _parse_bob(d: dict) -> BobConfig:
    _reject_unknown(d, _BOB_KEYS, "bob")
    target = d.get("target")
    script = d.get("script")
    if script is not None:
        from .game import GameTranscript
        with open(script, "r", encoding="utf-8") as fh:
            script = GameTranscript.from_jsonl(fh.read()).bob_balls[1:]
    return BobConfig(
        d.get("kind", "random"),
        seed=int(d.get("seed", 0)),
        shrink=parse_rational(d.get("shrink", "1/2")),
        target=RationalDirection.from_json(target) if target else None,
        script=script)


def cmd_play(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    _reject_unknown(cfg, _PLAY_KEYS, "config")
    mode = cfg.get("mode", "demo")
    beta = parse_rational(cfg.get("beta", "1/2"))
    gamma = parse_rational(cfg.get("gamma", "1"))
    rounds = int(cfg.get("rounds", 30))
    initial = _parse_ball(cfg.get("initial_ball", {
        "lambda": "3/4", "center": ["3/4", "1/3", "2/3"], "radius": "1/10"}))
    budget_cfg = cfg.get("budget", {})
    _reject_unknown(budget_cfg, _BUDGET_KEYS, "budget")
    q_budget = int(budget_cfg.get("q_max", 10 ** 7))
    out_cfg = cfg.get("output", {})
    _reject_unknown(out_cfg, _OUTPUT_KEYS, "output")

    kwargs = {}
    if mode == "demo":
        kwargs = {"R": int(cfg.get("R", 16)),
                  "epsilon": parse_rational(cfg.get("epsilon", "1/1048576"))}
    constants = setup_constants(initial, beta, gamma, mode=mode, **kwargs)
    state = StrategyState(constants, initial, budget=q_budget)
    bob = make_bob(_parse_bob(cfg.get("bob", {
        "kind": "greedy_cusp", "seed": 42, "target": [0, 0, 1]})))
    params = {"beta": beta, "gamma": gamma, "seed": cfg.get("seed", 0),
              "constants": constants.to_json()}
    try:
        t = run_game(make_alice(state), bob, rounds, GameKind.POTENTIAL,
                     params, initial)
    except (BudgetExceeded, PrecisionExhausted) as exc:
        print(f"error: resource limit reached: {exc}", file=sys.stderr)
        return 2
    except IllegalMove as exc:
        print(f"error: illegal move: {exc}", file=sys.stderr)
        return 1
    transcript_path = _out_path(out_cfg.get("transcript", "transcript.jsonl"))
    audit_path = _out_path(out_cfg.get("audit", "audit.json"))
    with open(transcript_path, "w", encoding="utf-8") as fh:
        fh.write(t.to_jsonl())
    with open(audit_path, "w", encoding="utf-8") as fh:
        json.dump(state.audit, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"played {len(t.bob_balls) - 1} rounds -> {transcript_path}")
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    kwargs = {}
    if args.trials is not None:
        kwargs["trials"] = args.trials
    if args.seed is not None:
        kwargs["seed"] = args.seed
    try:
        report = run_suite(args.suite, **kwargs)
    except TypeError:
        report = run_suite(args.suite)  # suite takes no trial/seed knobs
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(_out_path(args.out), "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"suite {args.suite}: {report['passes']}/{report['trials']} passed",
          file=sys.stderr)
    return 0 if not report["failures"] else 1


# ---------------------------------------------------------------------------
# systole
# ---------------------------------------------------------------------------


def _parse_point(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError("point must be three comma-separated rationals")
    return tuple(parse_rational(p) for p in parts)


def cmd_systole(args: argparse.Namespace) -> int:
    lam = parse_rational(args.lam)
    point = _parse_point(args.point)
    t_max = parse_rational(args.t_max)
    rows = ["t,length_lo,length_hi,c1,c2,c3"]
    status = 0
    try:
        traj = systole_trajectory(lam, point, t_max, args.steps)
    except PrecisionExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for row in traj:
        rows.append("{},{},{},{},{},{}".format(
            format_rational(row["t"]), format_rational(row["lo"]),
            format_rational(row["hi"]), *row["coeffs"]))
    text = "\n".join(rows) + "\n"
    if args.out:
        with open(_out_path(args.out), "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------


def _covering_direction(lam: Fraction, point, q_max: int,
                        eps: Fraction) -> Optional[RationalDirection]:
    """The lowest-q primitive tube containing the point, if any."""
    x, y, z = point
    for q in range(1, q_max + 1):
        # |q*y - r| < eps*q^(lambda-1) <= eps and similarly for p
        r_c = q * y
        r_lo = math.ceil(r_c - eps)
        r_hi = math.floor(r_c + eps)
        for r in range(r_lo, r_hi + 1):
            p_c = q * x - z * (q * y - r)
            for p in range(math.ceil(p_c - eps), math.floor(p_c + eps) + 1):
                v = RationalDirection(p, r, q)
                if v.is_primitive() and delta_membership(lam, point, v, eps):
                    return v
    return None


def cmd_scan(args: argparse.Namespace) -> int:
    lam = parse_rational(args.lam)
    eps = parse_rational(args.epsilon)
    z = parse_rational(args.z)
    x0, x1 = parse_rational(args.x_min), parse_rational(args.x_max)
    y0, y1 = parse_rational(args.y_min), parse_rational(args.y_max)
    nx, ny = args.nx, args.ny
    if nx < 1 or ny < 1:
        print("error: need nx, ny >= 1", file=sys.stderr)
        return 2
    if nx * ny > args.cell_budget:
        print(f"error: {nx * ny} cells exceed the budget {args.cell_budget}",
              file=sys.stderr)
        return 2
    rows = ["x,y,covered,p,r,q"]
    for i in range(nx):
        x = x0 + (x1 - x0) * F(i, max(nx - 1, 1))
        for j in range(ny):
            y = y0 + (y1 - y0) * F(j, max(ny - 1, 1))
            v = _covering_direction(lam, (x, y, z), args.q_max, eps)
            if v is None:
                rows.append(f"{format_rational(x)},{format_rational(y)},0,,,")
            else:
                rows.append(f"{format_rational(x)},{format_rational(y)},1,"
                            f"{v.p},{v.r},{v.q}")
    text = "\n".join(rows) + "\n"
    if args.out:
        with open(_out_path(args.out), "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cuspgame",
        description="Hyperplane potential game on the weighted parameter "
                    "strip: play games, verify properties, monitor systoles.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("play", help="run a full game from a config file")
    p.add_argument("--config", help="JSON run config")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="report file (default: stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("systole", help="shortest-vector trajectory CSV")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--point", required=True, help="x,y,z rationals")
    p.add_argument("--t-max", dest="t_max", required=True)
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--out")
    p.set_defaults(func=cmd_systole)

    p = sub.add_parser("scan", help="tube-coverage grid CSV")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--z", default="0")
    p.add_argument("--x-min", dest="x_min", default="0")
    p.add_argument("--x-max", dest="x_max", default="1")
    p.add_argument("--y-min", dest="y_min", default="0")
    p.add_argument("--y-max", dest="y_max", default="1")
    p.add_argument("--nx", type=int, default=21)
    p.add_argument("--ny", type=int, default=21)
    p.add_argument("--q-max", dest="q_max", type=int, default=16)
    p.add_argument("--cell-budget", dest="cell_budget", type=int,
                   default=10_000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_scan)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
