"""Game variant definitions, board states, legal moves, and leaf rewards.

A game variant is a rectangular grid plus three rule parameters: the line
length needed to win, the set of directions a winning line may run in, and
a gravity restriction on where pieces may be placed within a column.
Everything here is an immutable value; the functions are pure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, NamedTuple

import yaml

EMPTY = 0
X = 1
O = 2

# Extended-integer sentinels for won/lost positions.  Finite rewards are
# bounded by (#windows * match_len), far below this.
REWARD_WIN = 1 << 30
REWARD_LOSS = -(1 << 30)

_CELL_CHARS = {EMPTY: ".", X: "X", O: "O"}
_CHAR_CELLS = {v: k for k, v in _CELL_CHARS.items()}

_DIR_ORDER = "RCD"


class RulesError(ValueError):
    """Invalid game config, board literal, or move."""


class Player(enum.IntEnum):
    P1 = 1  # plays X
    P2 = 2  # plays O

    @property
    def mark(self) -> int:
        return X if self is Player.P1 else O

    @property
    def other(self) -> "Player":
        return Player.P2 if self is Player.P1 else Player.P1


class GameStatus(enum.Enum):
    ONGOING = "Ongoing"
    P1_WIN = "P1Win"
    P2_WIN = "P2Win"
    DRAW = "Draw"


class Move(NamedTuple):
    row: int
    col: int


@dataclass(frozen=True)
class Gravity:
    """Placement restriction within a column.

    kind 'full' forces the lowest empty cell, 'bottom' allows the lowest
    `ell` empty cells, 'none' allows any empty cell.  'full' behaves like
    bottom-1 and 'none' like bottom-rows; the surface form is preserved so
    configs round-trip.
    """

    kind: str  # "none" | "full" | "bottom"
    ell: int | None = None

    def window(self, rows: int) -> int:
        if self.kind == "full":
            return 1
        if self.kind == "none":
            return rows
        assert self.ell is not None
        return self.ell

    def __str__(self) -> str:
        if self.kind == "bottom":
            return f"bottom:{self.ell}"
        return self.kind


@dataclass(frozen=True)
class GameSpec:
    name: str
    rows: int
    cols: int
    match_len: int
    win_dirs: str  # canonical subset of "RCD", e.g. "RCD", "RD"
    gravity: Gravity = field(default_factory=lambda: Gravity("none"))

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise RulesError("rows and cols must be positive")
        if self.match_len < 1:
            raise RulesError("match_len must be positive")
        if self.match_len > max(self.rows, self.cols):
            raise RulesError(
                f"match_len: {self.match_len} exceeds max board dimension "
                f"{max(self.rows, self.cols)}"
            )
        dirs = "".join(d for d in _DIR_ORDER if d in self.win_dirs)
        if not dirs or set(self.win_dirs) - set(_DIR_ORDER):
            raise RulesError(
                f"win_dirs: must be a non-empty subset of R, C, D, got {self.win_dirs!r}"
            )
        object.__setattr__(self, "win_dirs", dirs)
        g = self.gravity
        if g.kind not in ("none", "full", "bottom"):
            raise RulesError(f"gravity: unknown kind {g.kind!r}")
        if g.kind == "bottom":
            if g.ell is None or not (1 <= g.ell <= self.rows):
                raise RulesError(
                    f"gravity: bottom window {g.ell} outside 1..{self.rows}"
                )

    @property
    def cells(self) -> int:
        return self.rows * self.cols

    @property
    def gravity_window(self) -> int:
        return self.gravity.window(self.rows)


@dataclass(frozen=True)
class BoardState:
    """A board plus the side to move.  `cells` is row-major, row 0 on top;
    gravity pulls toward the largest row index."""

    cells: bytes
    turn: Player

    def cell(self, row: int, col: int, cols: int) -> int:
        return self.cells[row * cols + col]

    def counts(self) -> tuple[int, int]:
        return self.cells.count(X), self.cells.count(O)


def initial_state(spec: GameSpec) -> BoardState:
    return BoardState(bytes(spec.cells), Player.P1)


# ---------------------------------------------------------------------------
# Winning windows

@lru_cache(maxsize=None)
def _windows(rows: int, cols: int, m: int, dirs: str) -> tuple[tuple[int, ...], ...]:
    out: list[tuple[int, ...]] = []
    if "R" in dirs:
        for r in range(rows):
            for c in range(cols - m + 1):
                out.append(tuple(r * cols + c + i for i in range(m)))
    if "C" in dirs:
        for r in range(rows - m + 1):
            for c in range(cols):
                out.append(tuple((r + i) * cols + c for i in range(m)))
    if "D" in dirs:
        for r in range(rows - m + 1):
            for c in range(cols - m + 1):
                out.append(tuple((r + i) * cols + c + i for i in range(m)))
        for r in range(rows - m + 1):
            for c in range(m - 1, cols):
                out.append(tuple((r + i) * cols + c - i for i in range(m)))
    return tuple(out)


def windows(spec: GameSpec) -> tuple[tuple[int, ...], ...]:
    """All index windows a winning line can occupy, in a fixed order."""
    return _windows(spec.rows, spec.cols, spec.match_len, spec.win_dirs)


def _has_line(spec: GameSpec, cells: bytes, mark: int) -> bool:
    for w in windows(spec):
        if all(cells[i] == mark for i in w):
            return True
    return False


# ---------------------------------------------------------------------------
# Core operations

def status(spec: GameSpec, state: BoardState) -> GameStatus:
    xline = _has_line(spec, state.cells, X)
    oline = _has_line(spec, state.cells, O)
    if xline and not oline:
        return GameStatus.P1_WIN
    if oline and not xline:
        return GameStatus.P2_WIN
    # Under these gravity rules every non-full column admits a move, so a
    # draw is exactly a full board without a winner.
    if EMPTY not in state.cells:
        return GameStatus.DRAW
    return GameStatus.ONGOING


def legal_moves(spec: GameSpec, state: BoardState) -> list[Move]:
    """Legal placements, column-major ascending, rows bottom-to-top within
    a column.  Caller must ensure the state is ongoing."""
    ell = spec.gravity_window
    out: list[Move] = []
    for c in range(spec.cols):
        offered = 0
        for r in range(spec.rows - 1, -1, -1):
            if state.cells[r * spec.cols + c] == EMPTY:
                out.append(Move(r, c))
                offered += 1
                if offered == ell:
                    break
    return out


def is_legal_move(spec: GameSpec, state: BoardState, mv: Move) -> bool:
    if not (0 <= mv.row < spec.rows and 0 <= mv.col < spec.cols):
        return False
    if state.cells[mv.row * spec.cols + mv.col] != EMPTY:
        return False
    empties_below = sum(
        1
        for r in range(mv.row + 1, spec.rows)
        if state.cells[r * spec.cols + mv.col] == EMPTY
    )
    return empties_below < spec.gravity_window


def apply_move(spec: GameSpec, state: BoardState, mv: Move) -> BoardState:
    if not (0 <= mv.row < spec.rows and 0 <= mv.col < spec.cols):
        raise RulesError(f"move {mv} out of range")
    if state.cells[mv.row * spec.cols + mv.col] != EMPTY:
        raise RulesError(f"cell ({mv.row},{mv.col}) is occupied")
    if not is_legal_move(spec, state, mv):
        raise RulesError(
            f"move {mv} violates gravity: only the lowest "
            f"{spec.gravity_window} empty cell(s) of a column are playable"
        )
    buf = bytearray(state.cells)
    buf[mv.row * spec.cols + mv.col] = state.turn.mark
    return BoardState(bytes(buf), state.turn.other)


# ---------------------------------------------------------------------------
# Leaf reward

RewardFn = Callable[[GameSpec, bytes], int]


def _open_window_weight(spec: GameSpec, cells: bytes, mark: int) -> int:
    """Sum, over windows free of the opponent holding >= 2 of `mark`, of the
    number of `mark` pieces in the window."""
    other = O if mark == X else X
    n = 0
    for w in windows(spec):
        cnt = 0
        for i in w:
            v = cells[i]
            if v == other:
                cnt = -1
                break
            if v == mark:
                cnt += 1
        if cnt >= 2:
            n += cnt
    return n


def _near_complete_count(spec: GameSpec, cells: bytes, mark: int) -> int:
    """Number of windows with exactly match_len-1 of `mark` and one empty."""
    other = O if mark == X else X
    m = spec.match_len
    n = 0
    for w in windows(spec):
        own = emp = 0
        for i in w:
            v = cells[i]
            if v == other:
                own = -m
                break
            if v == mark:
                own += 1
            else:
                emp += 1
        if own == m - 1 and emp == 1:
            n += 1
    return n


def open_window_reward(spec: GameSpec, cells: bytes) -> int:
    """Default static reward: difference of per-player open-window weights.

    Calibrated against the reference scores for the 5x5 full-gravity game
    (depth 1..3 column evaluations) and the 3x3 depth-2 grid (+0 center,
    -2 elsewhere).  For match_len 3 it equals twice the near-complete count,
    so both variants induce the same move distributions there.
    """
    return _open_window_weight(spec, cells, X) - _open_window_weight(spec, cells, O)


def near_complete_reward(spec: GameSpec, cells: bytes) -> int:
    """Alternative reward: windows one piece short of a win, per player."""
    return _near_complete_count(spec, cells, X) - _near_complete_count(spec, cells, O)


def reward(spec: GameSpec, state: BoardState, fn: RewardFn = open_window_reward) -> int:
    st = status(spec, state)
    if st is GameStatus.P1_WIN:
        return REWARD_WIN
    if st is GameStatus.P2_WIN:
        return REWARD_LOSS
    return fn(spec, state.cells)


# ---------------------------------------------------------------------------
# Config format

_REQUIRED_KEYS = ("name", "rows", "cols", "match_len", "win_dirs", "gravity")


def parse_gravity(text: str) -> Gravity:
    t = str(text).strip().lower()
    if t == "none":
        return Gravity("none")
    if t == "full":
        return Gravity("full")
    if t.startswith("bottom:"):
        try:
            ell = int(t.split(":", 1)[1])
        except ValueError:
            raise RulesError(f"gravity: malformed bottom window in {text!r}") from None
        return Gravity("bottom", ell)
    raise RulesError(f"gravity: expected none | full | bottom:<l>, got {text!r}")


def parse_game_spec(config_text: str) -> GameSpec:
    try:
        data = yaml.safe_load(config_text)
    except yaml.YAMLError as e:
        raise RulesError(f"config syntax error: {e}") from None
    if not isinstance(data, dict):
        raise RulesError("config must be a mapping of keys to values")
    for key in _REQUIRED_KEYS:
        if key not in data:
            raise RulesError(f"{key}: missing required key")
    extra = set(data) - set(_REQUIRED_KEYS)
    if extra:
        raise RulesError(f"unknown config key(s): {', '.join(sorted(extra))}")
    ints = {}
    for key in ("rows", "cols", "match_len"):
        v = data[key]
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise RulesError(f"{key}: must be a positive integer, got {v!r}")
        ints[key] = v
    return GameSpec(
        name=str(data["name"]),
        rows=ints["rows"],
        cols=ints["cols"],
        match_len=ints["match_len"],
        win_dirs=str(data["win_dirs"]),
        gravity=parse_gravity(str(data["gravity"])),
    )


def dump_game_spec(spec: GameSpec) -> str:
    return (
        f"name: {spec.name}\n"
        f"rows: {spec.rows}\n"
        f"cols: {spec.cols}\n"
        f"match_len: {spec.match_len}\n"
        f"win_dirs: {spec.win_dirs}\n"
        f"gravity: {spec.gravity}\n"
    )


# ---------------------------------------------------------------------------
# Board literal format: rows top-to-bottom joined by '/', then the side to
# move, e.g. "..../..X./..../OX.. X"

def parse_board(spec: GameSpec, literal: str) -> BoardState:
    parts = literal.split()
    if len(parts) != 2:
        raise RulesError(
            f"board literal must be '<rows> <X|O>', got {literal!r}"
        )
    grid, turn_ch = parts
    rows = grid.split("/")
    if len(rows) != spec.rows:
        raise RulesError(f"board literal has {len(rows)} rows, expected {spec.rows}")
    buf = bytearray()
    for r, row in enumerate(rows):
        if len(row) != spec.cols:
            raise RulesError(
                f"board literal row {r} has {len(row)} cells, expected {spec.cols}"
            )
        for ch in row:
            if ch not in _CHAR_CELLS:
                raise RulesError(f"board literal: bad cell character {ch!r}")
            buf.append(_CHAR_CELLS[ch])
    if turn_ch not in ("X", "O"):
        raise RulesError(f"board literal: side to move must be X or O, got {turn_ch!r}")
    turn = Player.P1 if turn_ch == "X" else Player.P2
    nx, no = bytes(buf).count(X), bytes(buf).count(O)
    if nx - no not in (0, 1):
        raise RulesError(f"board has {nx} X vs {no} O; counts must differ by 0 or 1")
    expected = Player.P1 if nx == no else Player.P2
    if turn is not expected:
        raise RulesError(
            f"side to move {turn_ch} inconsistent with piece counts ({nx} X, {no} O)"
        )
    return BoardState(bytes(buf), turn)


def format_board(spec: GameSpec, state: BoardState) -> str:
    grid = "/".join(
        "".join(_CELL_CHARS[state.cells[r * spec.cols + c]] for c in range(spec.cols))
        for r in range(spec.rows)
    )
    return f"{grid} {'X' if state.turn is Player.P1 else 'O'}"
