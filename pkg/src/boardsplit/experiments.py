"""Seeded tournaments, decision-quality measurement, and the pathology
metric.

A tournament fixes (config, evaluator, vertical lookahead, master seed)
and replays the *same* boards for every horizontal lookahead in a
series: board ``i`` is regenerated from ``derive_seed(master_seed, i)``,
so reuse across lookaheads and across worker processes is exact by
construction.  Winners are pure functions of (board, lookaheads,
evaluator, game seed); aggregation is commutative counting, which is
why worker count cannot change results.
"""

from __future__ import annotations

import concurrent.futures
import functools
import hashlib
import json
import math
from dataclasses import dataclass

from . import __version__
from .board import GameConfig, Player, RootBoard, detect_trap, generate_board, split
from .rng import POSITION_STREAM, TIP_STREAM, derive_seed
from .search import (
    EvaluatorKind,
    choose_move,
    exact_solve,
    is_correct_trapwise,
)


@dataclass(frozen=True)
class TournamentSpec:
    """Everything that determines a tournament's outcome."""

    config: GameConfig
    n_games: int
    k_values: tuple[int, ...]
    evaluator: EvaluatorKind
    v_lookahead: int
    master_seed: int

    def __post_init__(self) -> None:
        if self.n_games < 1:
            raise ValueError(f"need at least one game, got {self.n_games}")
        if not self.k_values:
            raise ValueError("need at least one lookahead value")
        if len({k % 2 for k in self.k_values}) > 1:
            raise ValueError(f"lookahead series must share parity: {self.k_values}")
        if any(k < 0 for k in self.k_values) or self.v_lookahead < 0:
            raise ValueError("lookaheads must be >= 0")

    def to_json(self) -> str:
        c = self.config
        payload = {
            "config": {
                "b": c.b,
                "d": c.d,
                "p": c.p,
                "single_diagonal": c.single_diagonal,
            },
            "n_games": self.n_games,
            "k_values": list(self.k_values),
            "evaluator": self.evaluator.value,
            "v_lookahead": self.v_lookahead,
            "master_seed": self.master_seed,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "TournamentSpec":
        data = json.loads(text)
        c = data["config"]
        return cls(
            config=GameConfig(
                c["b"], c["d"], c["p"], single_diagonal=c.get("single_diagonal", False)
            ),
            n_games=data["n_games"],
            k_values=tuple(data["k_values"]),
            evaluator=EvaluatorKind(data["evaluator"]),
            v_lookahead=data["v_lookahead"],
            master_seed=data["master_seed"],
        )

    @property
    def sha256(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()


@dataclass(frozen=True)
class TournamentResult:
    """Horizontal win counts per lookahead, aligned with spec.k_values."""

    spec: TournamentSpec
    h_wins: tuple[int, ...]

    def curve(self) -> list[tuple[int, int, int]]:
        """(k, h_wins, n_games) points sorted by k."""
        points = sorted(zip(self.spec.k_values, self.h_wins))
        return [(k, w, self.spec.n_games) for k, w in points]


@dataclass(frozen=True)
class DecisionQualityResult:
    """Correct-decision fractions per lookahead at a fixed decision ply."""

    config: GameConfig
    evaluator: EvaluatorKind
    decision_ply: int
    n_positions: int
    master_seed: int
    k_values: tuple[int, ...]
    correct_exact: tuple[int, ...]
    correct_trapwise: tuple[int, ...]

    def exact_rate(self, k: int) -> float:
        return self.correct_exact[self.k_values.index(k)] / self.n_positions

    def trapwise_rate(self, k: int) -> float:
        return self.correct_trapwise[self.k_values.index(k)] / self.n_positions


@dataclass(frozen=True)
class PathologyIndex:
    """Largest win-rate drop along a curve and its significance."""

    max_drop: float
    is_pathological: bool
    z_score: float


def play_game(
    root: RootBoard,
    h_look: int,
    v_look: int,
    evaluator: EvaluatorKind,
    game_seed: int,
    *,
    v_evaluator: EvaluatorKind | None = None,
    prune: bool = True,
) -> Player:
    """Play one full game and return the winner.

    Both movers use ``evaluator`` (the protocol setting) unless
    ``v_evaluator`` overrides the vertical side.  Random tip draws,
    when used, come from one stream per (game, mover lookahead, move),
    derived from ``game_seed``.
    """
    config = root.config
    view = root.root_view()
    for ply in range(config.total_plies):
        mover = Player.to_move(ply)
        k = v_look if mover is Player.VERTICAL else h_look
        ev = evaluator
        if mover is Player.VERTICAL and v_evaluator is not None:
            ev = v_evaluator
        tip_seed = None
        if ev is EvaluatorKind.RANDOM_TIPS:
            tip_seed = derive_seed(game_seed, TIP_STREAM, ply, k)
        decision = choose_move(view, k, ev, tip_seed, prune=prune)
        view = split(view, mover, decision.chosen_index)
    ones = view.root._cells[view.row_start][view.col_start]
    return Player.HORIZONTAL if ones == 1 else Player.VERTICAL


def _game_winners(spec: TournamentSpec, index: int) -> list[int]:
    """Horizontal-win flags for game ``index``, one per lookahead."""
    game_seed = derive_seed(spec.master_seed, index)
    board = generate_board(spec.config, game_seed)
    flags = []
    for k in spec.k_values:
        winner = play_game(
            board, k, spec.v_lookahead, spec.evaluator, game_seed
        )
        flags.append(1 if winner is Player.HORIZONTAL else 0)
    return flags


def run_tournament(spec: TournamentSpec, workers: int = 1) -> TournamentResult:
    """Play ``spec.n_games`` boards at every lookahead in the series.

    ``workers > 1`` distributes whole games over processes; results are
    identical to a serial run because each game depends only on (spec,
    game index) and win counting commutes.
    """
    wins = [0] * len(spec.k_values)
    if workers <= 1:
        rows = map(functools.partial(_game_winners, spec), range(spec.n_games))
        for flags in rows:
            for j, f in enumerate(flags):
                wins[j] += f
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, spec.n_games // (workers * 8))
            for flags in pool.map(
                functools.partial(_game_winners, spec),
                range(spec.n_games),
                chunksize=chunk,
            ):
                for j, f in enumerate(flags):
                    wins[j] += f
    return TournamentResult(spec=spec, h_wins=tuple(wins))


def decision_quality(
    config: GameConfig,
    k_list,
    n_positions: int,
    evaluator: EvaluatorKind,
    master_seed: int,
    *,
    decision_ply: int = 1,
    deep_tips: bool = False,
    prune: bool = True,
) -> DecisionQualityResult:
    """Measure correct-decision rates against two criteria.

    Positions are reached on fresh boards (board ``j`` from
    ``derive_seed(master_seed, j)``) by playing lookahead-0 moves with
    the same evaluator up to ``decision_ply`` (default: the horizontal
    player's first move).  For each lookahead the decision there is
    scored (a) against the exact solver's optimal move set and (b)
    trapwise: not bypassing an available favorable trap child.

    ``deep_tips`` lifts the next-to-last-round truncation so tips sit
    at min(children + k, true leaves); with tips on the leaves the
    exact criterion is met by construction.
    """
    if n_positions < 1:
        raise ValueError(f"need at least one position, got {n_positions}")
    if not 0 <= decision_ply < config.total_plies:
        raise ValueError(f"decision ply {decision_ply} outside the game")
    k_list = tuple(k_list)
    exact_hits = [0] * len(k_list)
    trap_hits = [0] * len(k_list)
    mover = Player.to_move(decision_ply)
    for j in range(n_positions):
        position_seed = derive_seed(master_seed, j)
        board = generate_board(config, position_seed)
        view = board.root_view()
        for ply in range(decision_ply):
            tip_seed = None
            if evaluator is EvaluatorKind.RANDOM_TIPS:
                tip_seed = derive_seed(position_seed, TIP_STREAM, ply, 0)
            lead = choose_move(view, 0, evaluator, tip_seed, prune=prune)
            view = split(view, Player.to_move(ply), lead.chosen_index)

        optimal = exact_solve(view).optimal_moves
        traps = [
            detect_trap(split(view, mover, i)) for i in range(config.b)
        ]
        for idx, k in enumerate(k_list):
            tips_at = None
            if deep_tips:
                tips_at = min(decision_ply + 1 + k, config.total_plies)
            tip_seed = None
            if evaluator is EvaluatorKind.RANDOM_TIPS:
                tip_seed = derive_seed(
                    position_seed, POSITION_STREAM, decision_ply, k
                )
            decision = choose_move(
                view, k, evaluator, tip_seed, prune=prune, tips_at=tips_at
            )
            if decision.chosen_index in optimal:
                exact_hits[idx] += 1
            if is_correct_trapwise(decision, traps, mover):
                trap_hits[idx] += 1
    return DecisionQualityResult(
        config=config,
        evaluator=evaluator,
        decision_ply=decision_ply,
        n_positions=n_positions,
        master_seed=master_seed,
        k_values=k_list,
        correct_exact=tuple(exact_hits),
        correct_trapwise=tuple(trap_hits),
    )


def drop_z_scores(curve) -> list[tuple[int, int, float, float]]:
    """Per consecutive pair (k_lo, k_hi): win-rate drop and pooled
    two-proportion z score (0 when the pooled variance vanishes)."""
    pairs = []
    for (k0, w0, n0), (k1, w1, n1) in zip(curve, curve[1:]):
        drop = w0 / n0 - w1 / n1
        pooled = (w0 + w1) / (n0 + n1)
        var = pooled * (1.0 - pooled) * (1.0 / n0 + 1.0 / n1)
        z = drop / math.sqrt(var) if var > 0 else 0.0
        pairs.append((k0, k1, drop, z))
    return pairs


def pathology_index(curve) -> PathologyIndex:
    """Largest win-fraction decrease between consecutive lookaheads.

    ``curve`` is a sorted sequence of (k, h_wins, n_games) with a
    common n.  The drop is significant (pathological) when its pooled
    two-proportion z score reaches 2.
    """
    curve = list(curve)
    if len(curve) < 2:
        raise ValueError("need at least two curve points")
    ks = [k for k, _, _ in curve]
    if ks != sorted(ks):
        raise ValueError("curve must be sorted by lookahead")
    if len({n for _, _, n in curve}) != 1:
        raise ValueError("curve points must share the same game count")
    best = max(drop_z_scores(curve), key=lambda item: item[2])
    _, _, max_drop, z = best
    return PathologyIndex(
        max_drop=max_drop,
        is_pathological=bool(max_drop > 0 and z >= 2.0),
        z_score=z,
    )


def _provenance_lines(kind: str, payload: str) -> list[str]:
    digest = hashlib.sha256(payload.encode()).hexdigest()
    return [
        f"# tool=boardsplit version={__version__}",
        f"# {kind}={payload}",
        f"# sha256={digest}",
    ]


def tournament_csv(result: TournamentResult) -> str:
    """CSV with schema ``B,D,p,eval,v_look,k,h_wins,n_games,master_seed``
    plus provenance comment lines; byte-stable for identical specs."""
    spec = result.spec
    c = spec.config
    lines = _provenance_lines("spec", spec.to_json())
    lines.append("B,D,p,eval,v_look,k,h_wins,n_games,master_seed")
    for k, w, n in result.curve():
        lines.append(
            f"{c.b},{c.d},{c.p!r},{spec.evaluator.value},{spec.v_lookahead},"
            f"{k},{w},{n},{spec.master_seed}"
        )
    return "\n".join(lines) + "\n"


def decision_quality_csv(result: DecisionQualityResult) -> str:
    """CSV with schema
    ``B,D,p,eval,k,n_positions,correct_exact,correct_trapwise,master_seed``."""
    c = result.config
    params = {
        "b": c.b,
        "d": c.d,
        "p": c.p,
        "evaluator": result.evaluator.value,
        "decision_ply": result.decision_ply,
        "n_positions": result.n_positions,
        "k_values": list(result.k_values),
        "master_seed": result.master_seed,
    }
    payload = json.dumps(params, sort_keys=True, separators=(",", ":"))
    lines = _provenance_lines("decision_quality", payload)
    lines.append("B,D,p,eval,k,n_positions,correct_exact,correct_trapwise,master_seed")
    for k in result.k_values:
        lines.append(
            f"{c.b},{c.d},{c.p!r},{result.evaluator.value},{k},{result.n_positions},"
            f"{result.exact_rate(k)!r},{result.trapwise_rate(k)!r},{result.master_seed}"
        )
    return "\n".join(lines) + "\n"
