"""Command-line surface.

Subcommands: ``fairp``, ``board dump|load``, ``play``, ``tournament``,
``decision-quality``, ``analyze``, ``validate``.  Output files embed
provenance comments (tool version, parameters, content hash) and are
byte-identical across re-runs with the same parameters and seed; a
missing ``--seed`` is filled from system entropy and recorded.

Exit codes: 0 success, 1 runtime or check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import secrets
import sys
from pathlib import Path

from . import __version__
from .analysis import error_model_curve, fair_p
from .board import (
    ConfigurationTooLarge,
    GameConfig,
    Player,
    detect_trap,
    dump_text,
    generate_board,
    load_text,
    split,
)
from .experiments import (
    TournamentSpec,
    decision_quality,
    decision_quality_csv,
    pathology_index,
    run_tournament,
    tournament_csv,
)
from .rng import TIP_STREAM, derive_seed
from .search import EvaluatorKind, choose_move
from .validation import SUITES

_EVALUATORS = {e.value: e for e in EvaluatorKind}


def _add_game_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--b", type=int, required=True, help="branching factor")
    parser.add_argument("--d", type=int, required=True, help="number of rounds")
    bias = parser.add_mutually_exclusive_group()
    bias.add_argument("--p", type=float, help="cell one-probability")
    bias.add_argument(
        "--fair",
        action="store_true",
        help="use the fair bias for --b (default when --p is omitted)",
    )
    parser.add_argument(
        "--single-diagonal",
        action="store_true",
        help="count only the top-left to bottom-right diagonal as a trap",
    )


def _config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> GameConfig:
    try:
        p = fair_p(args.b) if args.p is None else args.p
        return GameConfig(args.b, args.d, p, single_diagonal=args.single_diagonal)
    except ValueError as exc:
        parser.error(str(exc))


def _seed(args: argparse.Namespace) -> int:
    if args.seed is None:
        seed = secrets.randbits(63)
        print(f"generated seed: {seed} (pass --seed {seed} to reproduce)")
        return seed
    return args.seed


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _k_series(parity: str, d: int, parser: argparse.ArgumentParser) -> tuple[int, ...]:
    if parity == "even":
        ks = tuple(range(0, 2 * (d - 1) + 1, 2))
    else:
        ks = tuple(range(1, 2 * d - 3 + 1, 2))
    if not ks:
        parser.error(f"no {parity} lookahead values exist for d={d}")
    return ks


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="boardsplit",
        description="Board-splitting games: search experiments and the trap-miss model.",
    )
    parser.add_argument("--version", action="version", version=f"boardsplit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fairp = sub.add_parser("fairp", help="print the fair cell bias for a branching factor")
    p_fairp.add_argument("--b", type=int, required=True)

    p_board = sub.add_parser("board", help="dump or load a board in the text format")
    board_sub = p_board.add_subparsers(dest="board_command", required=True)
    p_dump = board_sub.add_parser("dump", help="generate a board and write it as text")
    _add_game_flags(p_dump)
    p_dump.add_argument("--seed", type=int)
    p_dump.add_argument("--out", help="output path (default stdout)")
    p_load = board_sub.add_parser("load", help="read a board dump and summarize it")
    p_load.add_argument("--in", dest="infile", required=True)

    p_play = sub.add_parser("play", help="play one game and print the move trace")
    _add_game_flags(p_play)
    p_play.add_argument("--seed", type=int)
    p_play.add_argument("--h-look", type=int, default=0)
    p_play.add_argument("--v-look", type=int, default=0)
    p_play.add_argument("--eval", choices=sorted(_EVALUATORS), default="n")

    p_tour = sub.add_parser("tournament", help="win curve over a lookahead series")
    _add_game_flags(p_tour)
    p_tour.add_argument("--games", type=int, default=100)
    p_tour.add_argument("--eval", choices=sorted(_EVALUATORS), default="n")
    p_tour.add_argument("--parity", choices=("even", "odd"), default="even")
    p_tour.add_argument("--v-look", type=int, default=0)
    p_tour.add_argument("--seed", type=int)
    p_tour.add_argument("--out", help="CSV output path (default stdout)")
    p_tour.add_argument("--workers", type=int, default=1)
    p_tour.add_argument(
        "--spec-json", help="JSON tournament spec; overrides the other flags"
    )

    p_dq = sub.add_parser(
        "decision-quality", help="correct-decision rates against the exact solver"
    )
    _add_game_flags(p_dq)
    p_dq.add_argument("--positions", type=int, default=100)
    p_dq.add_argument("--eval", choices=sorted(_EVALUATORS), default="n")
    p_dq.add_argument("--parity", choices=("even", "odd"), default="even")
    p_dq.add_argument("--ply", type=int, default=1, help="decision ply to sample")
    p_dq.add_argument(
        "--deep-tips",
        action="store_true",
        help="let tips pass the next-to-last-round cutoff, down to the true leaves",
    )
    p_dq.add_argument("--seed", type=int)
    p_dq.add_argument("--out", help="CSV output path (default stdout)")

    p_an = sub.add_parser("analyze", help="emit the trap-miss model curve as CSV")
    p_an.add_argument("--b", type=int, required=True)
    p_an.add_argument("--d", type=int, required=True)
    bias = p_an.add_mutually_exclusive_group()
    bias.add_argument("--p", type=float)
    bias.add_argument("--fair", action="store_true")
    p_an.add_argument("--k-max", type=int, required=True, help="largest (even) tip level")
    p_an.add_argument("--out", help="CSV output path (default stdout)")

    p_val = sub.add_parser("validate", help="run a cross-validation battery")
    p_val.add_argument("--suite", choices=sorted(SUITES), required=True)
    p_val.add_argument("--seed", type=int)

    args = parser.parse_args(argv)

    if args.command == "fairp":
        if args.b < 1:
            p_fairp.error(f"branching must be >= 1, got {args.b}")
        print(f"{fair_p(args.b):.12f}")
        return 0

    if args.command == "board":
        return _cmd_board(args, parser)
    if args.command == "play":
        return _cmd_play(args, parser)
    if args.command == "tournament":
        return _cmd_tournament(args, p_tour)
    if args.command == "decision-quality":
        return _cmd_decision_quality(args, p_dq)
    if args.command == "analyze":
        return _cmd_analyze(args, p_an)
    if args.command == "validate":
        return _cmd_validate(args)
    raise AssertionError(args.command)


def _cmd_board(args, parser) -> int:
    if args.board_command == "dump":
        config = _config(args, parser)
        seed = _seed(args)
        try:
            board = generate_board(config, seed)
        except ConfigurationTooLarge as exc:
            parser.error(str(exc))
        params = json.dumps(
            {"b": config.b, "d": config.d, "p": config.p, "seed": seed},
            sort_keys=True,
        )
        text = dump_text(board) + f"# tool=boardsplit version={__version__}\n# params={params}\n"
        _emit(text, args.out)
        return 0

    try:
        board = load_text(Path(args.infile).read_text())
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    config = board.config
    ones = int(board.cells.sum())
    trap = detect_trap(board.root_view())
    print(
        f"B={config.b} D={config.d} side={config.side} ones={ones} "
        f"fraction={ones / config.side**2:.6f} root_trap={trap.value if trap else 'none'}"
    )
    return 0


def _cmd_play(args, parser) -> int:
    config = _config(args, parser)
    seed = _seed(args)
    try:
        board = generate_board(config, seed)
    except ConfigurationTooLarge as exc:
        parser.error(str(exc))
    evaluator = _EVALUATORS[args.eval]
    view = board.root_view()
    for ply in range(config.total_plies):
        mover = Player.to_move(ply)
        k = args.v_look if mover is Player.VERTICAL else args.h_look
        tip_seed = None
        if evaluator is EvaluatorKind.RANDOM_TIPS:
            tip_seed = derive_seed(seed, TIP_STREAM, ply, k)
        decision = choose_move(view, k, evaluator, tip_seed)
        print(
            f"ply {ply:2d} {mover.value} keeps section {decision.chosen_index} "
            f"(value {decision.backed_value}, ties {decision.tie_count})"
        )
        view = split(view, mover, decision.chosen_index)
    final = int(view.cells()[0, 0])
    winner = Player.HORIZONTAL if final == 1 else Player.VERTICAL
    print(f"final cell: {final}")
    print(f"winner: {winner.value}")
    return 0


def _cmd_tournament(args, parser) -> int:
    if args.spec_json:
        try:
            spec = TournamentSpec.from_json(Path(args.spec_json).read_text())
        except (OSError, ValueError, KeyError) as exc:
            print(f"error: bad spec file: {exc}", file=sys.stderr)
            return 1
    else:
        config = _config(args, parser)
        if args.games < 1:
            parser.error("--games must be >= 1")
        spec = TournamentSpec(
            config=config,
            n_games=args.games,
            k_values=_k_series(args.parity, args.d, parser),
            evaluator=_EVALUATORS[args.eval],
            v_lookahead=args.v_look,
            master_seed=_seed(args),
        )
    try:
        result = run_tournament(spec, workers=max(1, args.workers))
    except ConfigurationTooLarge as exc:
        parser.error(str(exc))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(tournament_csv(result), args.out)
    curve = result.curve()
    if args.out:
        for k, w, n in curve:
            print(f"k={k:2d}  H wins {w}/{n} ({w / n:.1%})")
    index = pathology_index(curve) if len(curve) > 1 else None
    if index:
        print(
            f"max drop {index.max_drop:+.3f} (z={index.z_score:.2f}) -> "
            + ("PATHOLOGICAL" if index.is_pathological else "not pathological")
        )
    return 0


def _cmd_decision_quality(args, parser) -> int:
    config = _config(args, parser)
    if args.positions < 1:
        parser.error("--positions must be >= 1")
    if not 0 <= args.ply < config.total_plies:
        parser.error(f"--ply must be in [0, {config.total_plies})")
    seed = _seed(args)
    result = decision_quality(
        config,
        _k_series(args.parity, args.d, parser),
        args.positions,
        _EVALUATORS[args.eval],
        seed,
        decision_ply=args.ply,
        deep_tips=args.deep_tips,
    )
    _emit(decision_quality_csv(result), args.out)
    if args.out:
        for k in result.k_values:
            print(
                f"k={k:2d}  exact {result.exact_rate(k):.3f}  "
                f"trapwise {result.trapwise_rate(k):.3f}"
            )
    return 0


def _cmd_analyze(args, parser) -> int:
    if args.b < 1:
        parser.error(f"--b must be >= 1, got {args.b}")
    p = args.p if args.p is not None else fair_p(args.b)
    if args.k_max < 2 or args.k_max % 2:
        parser.error(f"--k-max must be an even value >= 2, got {args.k_max}")
    if args.d - args.k_max // 2 - 1 < 0:
        parser.error(f"--k-max {args.k_max} too deep for d={args.d}")
    try:
        points = error_model_curve(args.b, args.d, p, range(2, args.k_max + 1, 2))
    except ValueError as exc:
        parser.error(str(exc))
    params = json.dumps(
        {"b": args.b, "d": args.d, "p": p, "k_max": args.k_max}, sort_keys=True
    )
    digest = hashlib.sha256(params.encode()).hexdigest()
    lines = [
        f"# tool=boardsplit version={__version__}",
        f"# analyze={params}",
        f"# sha256={digest}",
        "B,D,p,k,S,P_trap,pr_r_errs_tip,P0",
    ]
    for pt in points:
        lines.append(
            f"{args.b},{args.d},{p!r},{pt.k},{pt.side},"
            f"{pt.trap_prob!r},{pt.tip_error!r},{pt.root_error!r}"
        )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_validate(args) -> int:
    suite = SUITES[args.suite]
    report = suite(args.seed) if args.seed is not None else suite()
    print(report.to_json())
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
