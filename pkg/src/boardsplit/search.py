"""Depth-limited minimax with pluggable tip evaluators, plus the exact
full-tree solver used as ground truth.

Lookahead semantics: a mover with lookahead ``k`` scores the nodes ``k``
plies below her immediate children, except that tips never pass level
2(D-1) -- neither player may peek at the final round early.  In the
forced final round the children themselves already lie past that
cutoff and are scored directly.

``minimax_value`` is the plain reference recursion.  ``choose_move``
evaluates every root child with a full alpha-beta window and prunes
only inside the subtrees, so its child values (and therefore the chosen
move and tie count) are bit-identical to the reference; ``prune=False``
switches to the reference path outright.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .board import BoardView, GameConfig, Player, RootBoard, TrapKind
from .rng import derive_seed, unit_float

_INF = float("inf")


class EvaluatorKind(enum.Enum):
    """Tip-scoring policies.

    COUNT_ONES scores a tip by its ones count.  TRAP_AWARE prices
    detected forced-win patterns at the full-board magnitude and counts
    ones otherwise.  RANDOM_TIPS draws an independent uniform score per
    tip from a seeded stream: the arbitrary chooser used as an analytic
    baseline.
    """

    COUNT_ONES = "n"
    TRAP_AWARE = "y"
    RANDOM_TIPS = "r"


@dataclass(frozen=True)
class MoveDecision:
    """Outcome of one searched decision."""

    chosen_index: int
    backed_value: float
    child_values: tuple
    tie_count: int


@dataclass(frozen=True)
class ExactResult:
    """Ground truth for a position: winner under optimal play and the
    moves that preserve the mover's best achievable outcome.

    When the mover cannot win, every move preserves the (lost) outcome,
    so ``optimal_moves`` is all of them.  Terminal views have no moves.
    """

    winner: Player
    optimal_moves: tuple[int, ...]


def tip_level(ply_of_decision: int, k: int, config: GameConfig) -> int:
    """Absolute tree level whose nodes are scored for this decision.

    ``max(t + 1, min(t + 1 + k, 2D - 2))``: tips sit ``k`` plies below
    the mover's children, truncated at level 2(D-1); in the final round
    the children lie past the truncation point and are scored anyway.
    """
    total = config.total_plies
    if k < 0:
        raise ValueError(f"lookahead must be >= 0, got {k}")
    if not 0 <= ply_of_decision < total:
        raise ValueError(f"decision ply {ply_of_decision} outside [0, {total})")
    return max(ply_of_decision + 1, min(ply_of_decision + 1 + k, total - 2))


def _tip_scorer(root: RootBoard, evaluator: EvaluatorKind, tip_seed: int | None):
    """Build the hot tip-scoring closure over the root's list tables.

    Must agree with count_ones / trap_aware_score / the documented
    random-tip derivation; the search engine works on raw coordinates
    to avoid building a view per node.
    """
    if evaluator is EvaluatorKind.COUNT_ONES:
        t = root._total

        def score(r0: int, h: int, c0: int, w: int):
            top, bot = t[r0], t[r0 + h]
            c1 = c0 + w
            return bot[c1] - top[c1] - bot[c0] + top[c0]

        return score

    if evaluator is EvaluatorKind.TRAP_AWARE:
        t = root._total
        rp = root._row
        cp = root._col
        dg = root._diag
        ad = root._adiag
        magnitude = root.config.trap_magnitude
        both_diagonals = not root.config.single_diagonal

        def score(r0: int, h: int, c0: int, w: int):
            r1 = r0 + h
            c1 = c0 + w
            if w >= 2:
                for r in range(r0, r1):
                    row = rp[r]
                    if row[c1] - row[c0] == w:
                        return magnitude
            if h == w and w >= 2:
                if dg[r1][c1] - dg[r0][c0] == w:
                    return magnitude
                if both_diagonals and ad[r1][c0] - ad[r0][c1] == w:
                    return magnitude
            if h >= 2:
                top, bot = cp[r0], cp[r1]
                for c in range(c0, c1):
                    if bot[c] == top[c]:
                        return -magnitude
            top, bot = t[r0], t[r1]
            return bot[c1] - top[c1] - bot[c0] + top[c0]

        return score

    if tip_seed is None:
        raise ValueError("RANDOM_TIPS needs a tip_seed to draw from")

    def score(r0: int, h: int, c0: int, w: int):
        # One uniform per tip, keyed by the tip's rectangle; rectangles
        # are unique within a search tree, so parallel and serial
        # traversals see identical draws.
        return unit_float(derive_seed(tip_seed, r0, c0, h, w))

    return score


def _value_plain(score, b: int, r0: int, h: int, c0: int, w: int, ply: int, tips: int):
    if ply == tips:
        return score(r0, h, c0, w)
    if ply & 1:
        hh = h // b
        return max(
            _value_plain(score, b, r0 + i * hh, hh, c0, w, ply + 1, tips)
            for i in range(b)
        )
    ww = w // b
    return min(
        _value_plain(score, b, r0, h, c0 + i * ww, ww, ply + 1, tips)
        for i in range(b)
    )


def _value_ab(score, b, r0, h, c0, w, ply, tips, alpha, beta):
    if ply == tips:
        return score(r0, h, c0, w)
    if ply & 1:  # horizontal: split rows, maximize
        hh = h // b
        best = -_INF
        r = r0
        for _ in range(b):
            v = _value_ab(score, b, r, hh, c0, w, ply + 1, tips, alpha, beta)
            r += hh
            if v > best:
                best = v
                if best > alpha:
                    alpha = best
                    if alpha >= beta:
                        break
        return best
    ww = w // b  # vertical: split columns, minimize
    best = _INF
    c = c0
    for _ in range(b):
        v = _value_ab(score, b, r0, h, c, ww, ply + 1, tips, alpha, beta)
        c += ww
        if v < best:
            best = v
            if best < beta:
                beta = best
                if beta <= alpha:
                    break
    return best


def minimax_value(
    view: BoardView,
    tips_at: int,
    evaluator: EvaluatorKind,
    tip_seed: int | None = None,
):
    """Reference minimax value of ``view`` with tips scored at level
    ``tips_at``: the tip score itself when the view sits at that level,
    else min over children at vertical plies and max at horizontal.
    """
    config = view.root.config
    if not view.ply <= tips_at <= config.total_plies:
        raise ValueError(f"tip level {tips_at} outside [{view.ply}, {config.total_plies}]")
    score = _tip_scorer(view.root, evaluator, tip_seed)
    return _value_plain(
        score,
        config.b,
        view.row_start,
        view.row_count,
        view.col_start,
        view.col_count,
        view.ply,
        tips_at,
    )


def choose_move(
    view: BoardView,
    k: int,
    evaluator: EvaluatorKind,
    tip_seed: int | None = None,
    *,
    prune: bool = True,
    tips_at: int | None = None,
) -> MoveDecision:
    """Search every child of ``view`` and pick the mover's best.

    Vertical takes the minimum child value, horizontal the maximum;
    ties break to the lowest index.  ``tips_at`` overrides the standard
    lookahead policy (used by oracle tests to reach the true leaves);
    otherwise tips sit at ``tip_level(view.ply, k, config)``.
    """
    config = view.root.config
    if view.ply >= config.total_plies:
        raise ValueError("game is over; nothing to choose")
    if tips_at is None:
        tips = tip_level(view.ply, k, config)
    else:
        tips = tips_at
        if not view.ply + 1 <= tips <= config.total_plies:
            raise ValueError(f"tips_at {tips} outside ({view.ply}, {config.total_plies}]")
    score = _tip_scorer(view.root, evaluator, tip_seed)
    b = config.b
    mover = Player.to_move(view.ply)
    r0, h = view.row_start, view.row_count
    c0, w = view.col_start, view.col_count

    values = []
    for i in range(b):
        if mover is Player.VERTICAL:
            ww = w // b
            args = (r0, h, c0 + i * ww, ww)
        else:
            hh = h // b
            args = (r0 + i * hh, hh, c0, w)
        if prune:
            values.append(_value_ab(score, b, *args, view.ply + 1, tips, -_INF, _INF))
        else:
            values.append(_value_plain(score, b, *args, view.ply + 1, tips))

    best = max(values) if mover.is_maximizer else min(values)
    return MoveDecision(
        chosen_index=values.index(best),
        backed_value=best,
        child_values=tuple(values),
        tie_count=values.count(best),
    )


def _solve(cells: list, b: int, r0: int, h: int, c0: int, w: int, ply: int, total: int) -> bool:
    """True iff horizontal wins this view under optimal play."""
    if ply == total:
        return cells[r0][c0] == 1
    if ply & 1:  # horizontal picks a row section; wins if any child wins
        hh = h // b
        return any(
            _solve(cells, b, r0 + i * hh, hh, c0, w, ply + 1, total) for i in range(b)
        )
    ww = w // b  # vertical picks a column section; horizontal needs them all
    return all(
        _solve(cells, b, r0, h, c0 + i * ww, ww, ply + 1, total) for i in range(b)
    )


def exact_solve(view: BoardView) -> ExactResult:
    """Solve the view to the true leaves: the final cell decides.

    Cost is proportional to the view's cell count, so this is the
    ground-truth oracle for desk-scale boards.
    """
    config = view.root.config
    cells = view.root._cells
    b = config.b
    total = config.total_plies
    r0, h = view.row_start, view.row_count
    c0, w = view.col_start, view.col_count
    if view.ply == total:
        winner = Player.HORIZONTAL if cells[r0][c0] == 1 else Player.VERTICAL
        return ExactResult(winner, ())

    mover = Player.to_move(view.ply)
    child_h_wins = []
    for i in range(b):
        if mover is Player.VERTICAL:
            ww = w // b
            child_h_wins.append(_solve(cells, b, r0, h, c0 + i * ww, ww, view.ply + 1, total))
        else:
            hh = h // b
            child_h_wins.append(_solve(cells, b, r0 + i * hh, hh, c0, w, view.ply + 1, total))

    mover_wins = [hw == (mover is Player.HORIZONTAL) for hw in child_h_wins]
    if any(mover_wins):
        winner = mover
        optimal = tuple(i for i, ok in enumerate(mover_wins) if ok)
    else:
        winner = mover.opponent
        optimal = tuple(range(b))
    return ExactResult(winner, optimal)


def is_correct_exact(decision: MoveDecision, view: BoardView) -> bool:
    """Whether the decision's move is in the exact solver's optimal set."""
    return decision.chosen_index in exact_solve(view).optimal_moves


def is_correct_trapwise(
    decision: MoveDecision,
    children_traps: list[TrapKind | None],
    mover: Player,
) -> bool:
    """Trap-based correctness: a decision is wrong only when a child
    trap favoring the mover exists and the chosen child is not one.
    """
    favorable = [
        i for i, kind in enumerate(children_traps) if kind is not None and kind.favors is mover
    ]
    if not favorable:
        return True
    return decision.chosen_index in favorable
