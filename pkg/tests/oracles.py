"""Independent reference implementations used as test oracles.

Everything here recomputes results by brute force (truth tables, explicit
breadth-first search, retrograde analysis) without touching the BDD kernel
or the symbolic layer, so equality checks are meaningful.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from boardgen.rules import (
    EMPTY,
    BoardState,
    GameSpec,
    GameStatus,
    Player,
    apply_move,
    initial_state,
    legal_moves,
    status,
)


# ---------------------------------------------------------------------------
# Boolean formula oracle: random expression trees over n variables, each
# evaluable directly and buildable in a BddManager.

@dataclass
class Formula:
    op: str  # "var" | "not" | "and" | "or" | "xor" | "const"
    var: int = 0
    value: bool = False
    args: tuple = ()

    def eval(self, bits) -> bool:
        if self.op == "var":
            return bool(bits[self.var])
        if self.op == "const":
            return self.value
        if self.op == "not":
            return not self.args[0].eval(bits)
        a = self.args[0].eval(bits)
        b = self.args[1].eval(bits)
        if self.op == "and":
            return a and b
        if self.op == "or":
            return a or b
        return a != b

    def build(self, mgr):
        if self.op == "var":
            return mgr.var(self.var)
        if self.op == "const":
            return mgr.true if self.value else mgr.false
        if self.op == "not":
            return mgr.not_(self.args[0].build(mgr))
        a = self.args[0].build(mgr)
        b = self.args[1].build(mgr)
        return mgr.apply(self.op, a, b)


def random_formula(rng, nvars: int, depth: int) -> Formula:
    if depth == 0 or rng.random() < 0.2:
        if rng.random() < 0.05:
            return Formula("const", value=rng.random() < 0.5)
        return Formula("var", var=rng.randrange(nvars))
    op = rng.choice(["and", "or", "xor", "not"])
    if op == "not":
        return Formula("not", args=(random_formula(rng, nvars, depth - 1),))
    return Formula(
        op,
        args=(
            random_formula(rng, nvars, depth - 1),
            random_formula(rng, nvars, depth - 1),
        ),
    )


def truth_table(formula: Formula, nvars: int) -> list[bool]:
    return [
        formula.eval(bits) for bits in itertools.product((False, True), repeat=nvars)
    ][::1] if False else [
        formula.eval([(i >> (nvars - 1 - b)) & 1 for b in range(nvars)])
        for i in range(1 << nvars)
    ]


def bdd_truth_table(mgr, f, nvars: int) -> list[bool]:
    out = []
    for i in range(1 << nvars):
        bits = [(i >> (nvars - 1 - b)) & 1 for b in range(nvars)]
        out.append(mgr.evaluate(f, bits))
    return out


# ---------------------------------------------------------------------------
# Explicit game-graph oracle.

@dataclass
class ExplicitGame:
    """Full explicit enumeration of a game's reachable graph plus every
    derived set the symbolic layer computes, via independent algorithms."""

    spec: GameSpec
    states: dict[BoardState, tuple[BoardState, ...]] = field(default_factory=dict)
    t1: set = field(default_factory=set)
    t2: set = field(default_factory=set)
    draws: set = field(default_factory=set)

    @classmethod
    def explore(cls, spec: GameSpec) -> "ExplicitGame":
        g = cls(spec)
        start = initial_state(spec)
        seen = {start}
        q = deque([start])
        while q:
            s = q.popleft()
            st = status(spec, s)
            if st is not GameStatus.ONGOING:
                g.states[s] = ()
                if st is GameStatus.P1_WIN:
                    g.t1.add(s)
                elif st is GameStatus.P2_WIN:
                    g.t2.add(s)
                else:
                    g.draws.add(s)
                continue
            nxt = tuple(apply_move(spec, s, mv) for mv in legal_moves(spec, s))
            g.states[s] = nxt
            for t in nxt:
                if t not in seen:
                    seen.add(t)
                    q.append(t)
        return g

    # -- predecessor operators (definitions independent of the BDD layer) --

    def epre(self, xs: set) -> set:
        return {
            s
            for s, nxt in self.states.items()
            if s.turn is Player.P1 and nxt and any(t in xs for t in nxt)
        }

    def apre(self, xs: set) -> set:
        return {
            s
            for s, nxt in self.states.items()
            if s.turn is Player.P2 and nxt and all(t in xs for t in nxt)
        }

    def win_layers(self, jmax: int):
        """Returns (attractor list, depth layers, raw chain, fresh layers)."""
        a = self.epre(self.t1)
        attractor = [set(a)]
        depth_layers = [set(a)]
        for _ in range(jmax):
            nxt = a | self.epre(self.apre(a))
            depth_layers.append(nxt - a)
            attractor.append(set(nxt))
            a = nxt
        raw = [self.epre(self.t1)]
        for _ in range(jmax):
            raw.append(self.epre(self.apre(raw[-1])))
        fresh = []
        acc: set = set()
        init = initial_state(self.spec)
        for w in raw:
            fresh.append(w - acc - {init})
            acc |= w
        return attractor, depth_layers, raw, fresh

    def solve_full(self):
        """Retrograde three-way partition by iterated backward induction."""

        def attract(target: set, existential: Player) -> set:
            won = set(target)
            changed = True
            while changed:
                changed = False
                for s, nxt in self.states.items():
                    if s in won or not nxt:
                        continue
                    if s.turn is existential:
                        ok = any(t in won for t in nxt)
                    else:
                        ok = all(t in won for t in nxt)
                    if ok:
                        won.add(s)
                        changed = True
            return won

        w1 = attract(self.t1, Player.P1)
        w2 = attract(self.t2, Player.P2)
        draw = set(self.states) - w1 - w2
        return w1, w2, draw

    def forced_win_depth(self, s: BoardState) -> int | None:
        """Minimal number of P1 moves to force a win from a P1 state, via
        a fixpoint over the explicit graph; None when not forceable."""
        _, depth_layers, _, _ = self.win_layers(self.spec.cells)
        for j, layer in enumerate(depth_layers):
            if s in layer:
                return j + 1
        return None
