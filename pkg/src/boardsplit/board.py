"""Board representation, splitting geometry, and tip scoring.

The game is played on a B^D x B^D 0/1 board.  The vertical player moves
first and repeatedly keeps one of B equal-width column sections; the
horizontal player keeps one of B equal-height row sections.  After D
rounds a single cell remains: a 1 is a horizontal win, a 0 a vertical
win.

Positions are never copied.  A :class:`BoardView` is a rectangle into
one immutable :class:`RootBoard`, and the queries the search engine
needs (ones counts, forced-win patterns) are answered from prefix
tables built once per board:

* ``total_prefix`` -- 2-D summed-area table, O(1) rectangle counts;
* ``row_prefix`` / ``col_prefix`` -- per-row / per-column running
  counts, O(edge) pattern checks;
* ``diag_prefix`` / ``adiag_prefix`` -- running counts along every
  (col - row)-constant diagonal and (col + row)-constant anti-diagonal,
  O(1) diagonal checks on square views.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field

import numpy as np

from .rng import bernoulli_matrix

# Generation guard: five prefix tables over side^2 cells.  729^2 boards
# (B=3, D=6) take ~25 MB; 4096^2 is the point where a board stops being
# a throwaway per-game object.
MAX_SIDE = 4096


class ConfigurationTooLarge(ValueError):
    """Raised when B^D exceeds the supported board side."""


class Player(enum.Enum):
    """The two movers.

    Vertical moves first, keeps a column section, and minimizes the
    count of ones; horizontal moves second, keeps a row section, and
    maximizes it.
    """

    VERTICAL = "V"
    HORIZONTAL = "H"

    @property
    def is_maximizer(self) -> bool:
        return self is Player.HORIZONTAL

    @property
    def opponent(self) -> "Player":
        return Player.HORIZONTAL if self is Player.VERTICAL else Player.VERTICAL

    @staticmethod
    def to_move(ply: int) -> "Player":
        """Vertical moves at even plies, horizontal at odd plies."""
        return Player.VERTICAL if ply % 2 == 0 else Player.HORIZONTAL


class TrapKind(enum.Enum):
    """Forced-win patterns recognizable on a view.

    A full row of 1s or a full main/anti-diagonal of 1s (square views
    only) forces a horizontal win; a full column of 0s forces a
    vertical win.  A row of 1s meets every column, so the horizontal
    kinds can never coexist with ``V_COL_ZEROS`` on one view.
    """

    H_ROW_ONES = "h_row_ones"
    H_DIAG_ONES = "h_diag_ones"
    V_COL_ZEROS = "v_col_zeros"

    @property
    def favors(self) -> Player:
        if self is TrapKind.V_COL_ZEROS:
            return Player.VERTICAL
        return Player.HORIZONTAL


@dataclass(frozen=True)
class GameConfig:
    """Game parameters: branching ``b``, rounds ``d``, cell bias ``p``.

    ``p`` is the probability that a cell holds a 1; ``float('nan')``
    marks boards of unknown bias (e.g. loaded from a text dump).  With
    ``single_diagonal`` set, only the top-left to bottom-right diagonal
    counts as a trap pattern (sensitivity switch; both diagonals force
    a horizontal win, so the default checks both).
    """

    b: int
    d: int
    p: float
    single_diagonal: bool = False

    def __post_init__(self) -> None:
        if self.b < 2:
            raise ValueError(f"branching must be >= 2, got {self.b}")
        if self.d < 1:
            raise ValueError(f"rounds must be >= 1, got {self.d}")
        if not (self.p != self.p or 0.0 <= self.p <= 1.0):
            raise ValueError(f"cell probability must be in [0, 1], got {self.p}")

    @property
    def side(self) -> int:
        """Board side length, B^D."""
        return self.b**self.d

    @property
    def trap_magnitude(self) -> int:
        """Score assigned to a detected trap: the initial cell count B^(2D)."""
        return self.side * self.side

    @property
    def total_plies(self) -> int:
        """Number of moves in a full game, 2D."""
        return 2 * self.d


class RootBoard:
    """Immutable B^D x B^D bit matrix with ones-count prefix tables."""

    def __init__(self, config: GameConfig, cells: np.ndarray):
        side = config.side
        cells = np.ascontiguousarray(cells, dtype=np.uint8)
        if cells.shape != (side, side):
            raise ValueError(f"cells must be {side}x{side}, got {cells.shape}")
        if cells.max(initial=0) > 1:
            raise ValueError("cells must be 0/1")
        self.config = config
        self.cells = cells

        counts = cells.astype(np.int64)
        s = side
        total = np.zeros((s + 1, s + 1), dtype=np.int64)
        total[1:, 1:] = counts.cumsum(axis=0).cumsum(axis=1)
        row = np.zeros((s, s + 1), dtype=np.int64)
        row[:, 1:] = counts.cumsum(axis=1)
        col = np.zeros((s + 1, s), dtype=np.int64)
        col[1:, :] = counts.cumsum(axis=0)
        # diag[i][j]: ones along the (col-row)-constant diagonal ending
        # at cell (i-1, j-1), walking up-left to the border.
        diag = np.zeros((s + 1, s + 1), dtype=np.int64)
        # adiag[i][j]: ones along the (col+row)-constant anti-diagonal
        # ending at cell (i-1, j), walking up-right to the border.
        adiag = np.zeros((s + 1, s + 1), dtype=np.int64)
        for i in range(1, s + 1):
            diag[i, 1:] = diag[i - 1, :-1] + counts[i - 1]
            adiag[i, :-1] = adiag[i - 1, 1:] + counts[i - 1]

        for a in (self.cells, total, row, col, diag, adiag):
            a.setflags(write=False)
        self.total_prefix = total
        self.row_prefix = row
        self.col_prefix = col
        self.diag_prefix = diag
        self.adiag_prefix = adiag

    # Plain nested lists index ~5x faster than numpy scalars; the
    # search engine runs millions of lookups per tournament.
    @functools.cached_property
    def _total(self) -> list:
        return self.total_prefix.tolist()

    @functools.cached_property
    def _row(self) -> list:
        return self.row_prefix.tolist()

    @functools.cached_property
    def _col(self) -> list:
        return self.col_prefix.tolist()

    @functools.cached_property
    def _diag(self) -> list:
        return self.diag_prefix.tolist()

    @functools.cached_property
    def _adiag(self) -> list:
        return self.adiag_prefix.tolist()

    @functools.cached_property
    def _cells(self) -> list:
        return self.cells.tolist()

    def root_view(self) -> "BoardView":
        side = self.config.side
        return BoardView(self, 0, side, 0, side, 0)

    def __repr__(self) -> str:
        c = self.config
        return f"RootBoard(b={c.b}, d={c.d}, side={c.side}, ones={int(self.cells.sum())})"


@dataclass(frozen=True)
class BoardView:
    """A rectangle into a root board: the universal game position.

    Even plies are squares of side B^(D - ply/2); odd plies are B times
    taller than wide.  Views produced by :func:`split` always satisfy
    this; hand-built views only need to fit inside the root.
    """

    root: RootBoard = field(repr=False)
    row_start: int
    row_count: int
    col_start: int
    col_count: int
    ply: int

    def __post_init__(self) -> None:
        side = self.root.config.side
        if self.row_count < 1 or self.col_count < 1:
            raise ValueError("view extents must be positive")
        if not (0 <= self.row_start and self.row_start + self.row_count <= side):
            raise ValueError("view rows out of board bounds")
        if not (0 <= self.col_start and self.col_start + self.col_count <= side):
            raise ValueError("view cols out of board bounds")
        if not (0 <= self.ply <= self.root.config.total_plies):
            raise ValueError(f"ply {self.ply} outside the game")

    @property
    def is_square(self) -> bool:
        return self.row_count == self.col_count

    @property
    def area(self) -> int:
        return self.row_count * self.col_count

    def cells(self) -> np.ndarray:
        """The view's cells as a (row_count, col_count) array."""
        return self.root.cells[
            self.row_start : self.row_start + self.row_count,
            self.col_start : self.col_start + self.col_count,
        ]


def generate_board(config: GameConfig, seed: int) -> RootBoard:
    """Sample a root board: every cell an independent Bernoulli(p) draw.

    The cell stream is PCG64 keyed by ``seed`` (row-major order), so an
    identical (config, seed) pair reproduces the board bit for bit on
    any platform.
    """
    side = config.side
    if side > MAX_SIDE:
        raise ConfigurationTooLarge(
            f"side {config.b}^{config.d} = {side} exceeds the supported {MAX_SIDE}"
        )
    return RootBoard(config, bernoulli_matrix(side, side, config.p, seed))


def split(view: BoardView, mover: Player, index: int) -> BoardView:
    """Keep the ``index``-th of B sections of ``view`` for ``mover``.

    Vertical keeps a column section, horizontal a row section.  The B
    children of a view are pairwise disjoint and tile it exactly.
    """
    config = view.root.config
    if view.ply >= config.total_plies:
        raise ValueError("game is over; the final cell cannot be split")
    expected = Player.to_move(view.ply)
    if mover is not expected:
        raise ValueError(f"{mover.value} cannot move at ply {view.ply} ({expected.value} to move)")
    b = config.b
    if not 0 <= index < b:
        raise ValueError(f"split index {index} outside [0, {b})")
    if mover is Player.VERTICAL:
        width, rem = divmod(view.col_count, b)
        if rem:
            raise ValueError(f"width {view.col_count} not divisible by {b}")
        return BoardView(
            view.root,
            view.row_start,
            view.row_count,
            view.col_start + index * width,
            width,
            view.ply + 1,
        )
    height, rem = divmod(view.row_count, b)
    if rem:
        raise ValueError(f"height {view.row_count} not divisible by {b}")
    return BoardView(
        view.root,
        view.row_start + index * height,
        height,
        view.col_start,
        view.col_count,
        view.ply + 1,
    )


def count_ones(view: BoardView) -> int:
    """Exact ones count of the view, O(1) from the summed-area table."""
    t = view.root._total
    r0, c0 = view.row_start, view.col_start
    r1, c1 = r0 + view.row_count, c0 + view.col_count
    top, bot = t[r0], t[r1]
    return bot[c1] - top[c1] - bot[c0] + top[c0]


def detect_trap(view: BoardView) -> TrapKind | None:
    """Report a forced-win pattern on the view, if any.

    Checked in order: full row of 1s, full main or anti-diagonal of 1s
    (square views only), full column of 0s.  The horizontal kinds take
    precedence, which is safe because they cannot coexist with a zero
    column.  Patterns need length >= 2: a lone cell is not a row,
    column, or diagonal.  With ``config.single_diagonal`` only the
    top-left to bottom-right diagonal is checked.
    """
    root = view.root
    h, w = view.row_count, view.col_count
    r0, c0 = view.row_start, view.col_start
    r1, c1 = r0 + h, c0 + w

    if w >= 2:
        rp = root._row
        for r in range(r0, r1):
            row = rp[r]
            if row[c1] - row[c0] == w:
                return TrapKind.H_ROW_ONES
    if h == w and w >= 2:
        dg = root._diag
        if dg[r1][c1] - dg[r0][c0] == w:
            return TrapKind.H_DIAG_ONES
        if not root.config.single_diagonal:
            ad = root._adiag
            if ad[r1][c0] - ad[r0][c1] == w:
                return TrapKind.H_DIAG_ONES
    if h >= 2:
        cp = root._col
        top, bot = cp[r0], cp[r1]
        for c in range(c0, c1):
            if bot[c] == top[c]:
                return TrapKind.V_COL_ZEROS
    return None


def trap_aware_score(view: BoardView, config: GameConfig | None = None) -> int:
    """Tip score that prices detected traps at the full-board magnitude.

    +B^(2D) for a horizontal trap, -B^(2D) for a vertical one, and the
    plain ones count otherwise.  ``config`` defaults to the root's; it
    only supplies the magnitude.
    """
    kind = detect_trap(view)
    if kind is None:
        return count_ones(view)
    magnitude = (config or view.root.config).trap_magnitude
    return magnitude if kind.favors is Player.HORIZONTAL else -magnitude


def dump_text(board: RootBoard) -> str:
    """Serialize a board: first line ``B D``, then B^D lines of 0/1."""
    config = board.config
    lines = [f"{config.b} {config.d}"]
    lines.extend("".join("1" if v else "0" for v in row) for row in board._cells)
    return "\n".join(lines) + "\n"


def load_text(
    text: str,
    p: float = float("nan"),
    single_diagonal: bool = False,
) -> RootBoard:
    """Parse the text format produced by :func:`dump_text`.

    Trailing lines starting with ``#`` (provenance comments) and blank
    lines are ignored.  ``p`` is not stored in the format, so callers
    may supply it; it defaults to unknown (NaN).
    """
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty board text")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"header must be 'B D', got {lines[0]!r}")
    b, d = int(header[0]), int(header[1])
    config = GameConfig(b, d, p, single_diagonal=single_diagonal)
    side = config.side
    grid = lines[1:]
    if len(grid) != side:
        raise ValueError(f"expected {side} board lines, got {len(grid)}")
    cells = np.empty((side, side), dtype=np.uint8)
    for i, line in enumerate(grid):
        if len(line) != side or set(line) - {"0", "1"}:
            raise ValueError(f"line {i + 2} is not {side} characters of 0/1")
        cells[i] = [1 if ch == "1" else 0 for ch in line]
    return RootBoard(config, cells)
