"""Fugitive policies: canonical, random principle-obeying, scripted and lifting."""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .chase import Request, requests
from .game import FugitivePolicy, Game
from .homomorphism import is_homomorphism
from .language import enumerate_words, holds, witness_path
from .structure import Structure
from .symbols import OMEGA, Label, alpha, format_word, grid, temperature_consistent, x, y

DELTA = {"H": (1, 0), "V": (0, 1)}


@dataclass
class ShadingOracle:
    """Shade of the grid edge leaving ``(i, j)`` in direction ``orient``.

    Asks ``shading`` first (a :class:`GridShading` or any callable); coordinates it
    does not cover get ``exit_shade`` on vertical edges entering the diagonal and
    ``default`` elsewhere, so an exit after ``v(k, k-1) -> v(k, k)`` is black.
    """

    shading: Callable[[int, int, str], str] | None = None
    default: str = "gray"
    exit_shade: str = "black"

    def __call__(self, i: int, j: int, orient: str) -> str:
        if self.shading is not None:
            try:
                return self.shading(i, j, orient)
            except (KeyError, IndexError):
                pass
        if orient == "V" and i == j + 1:
            return self.exit_shade
        return self.default


@dataclass(frozen=True)
class ExitScript:
    """When to take the ``$`` exit: at the cycle whose diagonal vertex is ``v(k, k)``."""

    at: int | None = None

    def __call__(self, coord: tuple[int, int] | None) -> bool:
        return self.at is not None and coord == (self.at, self.at)

    @classmethod
    def parse(cls, text: str | None) -> ExitScript:
        if text in (None, "", "none", "never"):
            return cls(None)
        return cls(int(text.removeprefix("k=")))


def grid_coordinates(d: Structure, origin: int) -> dict[int, tuple[int, int]]:
    """Coordinates of the vertices reachable from ``origin`` along grid edges (either way)."""
    key = ("coords", origin)
    hit = d._cache.get(key)
    if hit is not None:
        return hit
    coords = {origin: (0, 0)}
    todo = deque([origin])
    while todo:
        v = todo.popleft()
        i, j = coords[v]
        for e in d.out_edges[v]:
            if e.label.symbol.is_grid and e.dst not in coords:
                di, dj = DELTA[e.label.symbol.orient]
                coords[e.dst] = (i + di, j + dj)
                todo.append(e.dst)
        for e in d.in_edges[v]:
            if e.label.symbol.is_grid and e.src not in coords:
                di, dj = DELTA[e.label.symbol.orient]
                coords[e.src] = (i - di, j - dj)
                todo.append(e.src)
    d._cache[key] = coords
    return coords


def reshade(word: Sequence[Label], start: tuple[int, int] | None, end: tuple[int, int] | None, oracle) -> tuple[Label, ...]:
    """Give every grid letter of ``word`` the oracle's shade at the coordinate it leaves."""
    n = len(word)
    fwd: list[tuple[int, int] | None] = [None] * (n + 1)
    back: list[tuple[int, int] | None] = [None] * (n + 1)
    fwd[0], back[n] = start, end
    for p, lab in enumerate(word):
        if fwd[p] is not None and lab.symbol.is_grid:
            di, dj = DELTA[lab.symbol.orient]
            fwd[p + 1] = (fwd[p][0] + di, fwd[p][1] + dj)
    for p in range(n - 1, -1, -1):
        lab = word[p]
        if back[p + 1] is not None and lab.symbol.is_grid:
            di, dj = DELTA[lab.symbol.orient]
            back[p] = (back[p + 1][0] - di, back[p + 1][1] - dj)
    out = []
    for p, lab in enumerate(word):
        if lab.symbol.is_grid:
            c = fwd[p] or back[p]
            shade = oracle(*c, lab.symbol.orient) if c is not None else oracle.default
            out.append(Label(lab.symbol.with_shade(shade), lab.color))
        else:
            out.append(lab)
    return tuple(out)


def shape_representatives(head, budget: int) -> list[tuple[Label, ...]]:
    """The first word (shortlex) of each shade-blind shape among the first ``budget`` words."""
    words, _ = enumerate_words(head, budget)
    seen: dict[tuple, tuple[Label, ...]] = {}
    for w in words:
        seen.setdefault(tuple(l.erase_shade() for l in w), w)
    return list(seen.values())


def has_dollar(word: Sequence[Label]) -> bool:
    return any(lab.symbol.kind == "dollar" for lab in word)


@dataclass
class AuditEntry:
    step: int
    request: str
    alternative: str
    verdict: str  # "loses" or "survives"


class Canonical(FugitivePolicy):
    """Obeys the three principles and otherwise plays the shortest safe word.

    For each request: take the head's words (one representative per shade-blind
    shape), shade grid letters with the oracle, drop wrong-ink words, drop words
    that hand Crocodile a red Q0 path or a green bad/ugly path from a to b, let the
    exit script decide between ``$`` and ``$``-free words, then pick the shortest
    (shortlex first).  If nothing safe is left the policy is beaten and plays the
    shortest legal word anyway.

    With ``audit_depth > 0`` every rejected alternative is checked by a bounded
    lookahead and the result is logged in ``audit``; the audit never changes a move.
    """

    name = "canonical"

    def __init__(self, oracle=None, exits: ExitScript | Callable | None = None, audit_depth: int = 0):
        self.oracle = oracle if isinstance(oracle, ShadingOracle) else ShadingOracle(oracle)
        self.exits = exits if exits is not None else ExitScript()
        self.audit_depth = audit_depth
        self.audit: list[AuditEntry] = []
        self.beaten = 0
        self._shapes: dict[int, list[tuple[Label, ...]]] = {}

    # -- hooks ----------------------------------------------------------------------

    def initial_word(self, game: Game) -> tuple[Label, ...]:
        shade = self.oracle(1, 0, "V")
        return (
            Label(alpha("C"), "G"),
            Label(x("C"), "G"),
            Label(grid("A", "H", "C", "gray"), "G"),
            Label(grid("B", "V", "C", shade), "G"),
            Label(y("C"), "G"),
            Label(OMEGA, "G"),
        )

    def answer(self, game: Game, r: Request) -> tuple[Label, ...]:
        cands = self.candidates(game, r)
        legal = [w for w in cands if all(temperature_consistent(l) for l in w)]
        safe = [w for w in legal if self.safe(game, r, w)]
        chosen = self.choose(game, r, safe) if safe else None
        if chosen is None:
            self.beaten += 1
            chosen = (legal or cands)[0]
        if self.audit_depth > 0:
            self._audit(game, r, cands, chosen)
        return chosen

    # -- pieces -----------------------------------------------------------------------

    def shapes(self, game: Game, r: Request) -> list[tuple[Label, ...]]:
        key = id(r.constraint)
        if key not in self._shapes:
            self._shapes[key] = shape_representatives(r.constraint.head, game.config.word_budget)
        return self._shapes[key]

    def coords(self, game: Game) -> dict[int, tuple[int, int]]:
        path = game.initial_path
        if len(path) < 3:
            return {}
        return grid_coordinates(game.structure, path[2])

    def candidates(self, game: Game, r: Request) -> list[tuple[Label, ...]]:
        c = self.coords(game)
        head = r.constraint.head
        out = []
        for w in self.shapes(game, r):
            shaded = reshade(w, c.get(r.u), c.get(r.v), self.oracle)
            out.append(shaded if head.accepts(shaded) else w)
        return out

    def safe(self, game: Game, r: Request, word: tuple[Label, ...]) -> bool:
        d = game.structure.add_path(r.u, r.v, word)[0]
        cfg = game.config
        return not cfg.lost(d) and not holds(cfg.green_trap, d, d.a, d.b)

    def wants_exit(self, game: Game, r: Request) -> bool:
        return bool(self.exits(self.coords(game).get(r.u)))

    def choose(self, game: Game, r: Request, safe: list[tuple[Label, ...]]) -> tuple[Label, ...] | None:
        with_d = [w for w in safe if has_dollar(w)]
        without = [w for w in safe if not has_dollar(w)]
        if with_d and without:
            pool = with_d if self.wants_exit(game, r) else without
        else:
            pool = with_d or without
        return min(pool, key=lambda w: (len(w), [l.sort_key() for l in w]))

    # -- lookahead audit ------------------------------------------------------------

    def _audit(self, game: Game, r: Request, cands, chosen) -> None:
        for w in cands:
            if w == chosen:
                continue
            d = game.structure.add_path(r.u, r.v, w)[0]
            verdict = "loses" if _forced_loss(game, d, self.audit_depth) else "survives"
            self.audit.append(AuditEntry(game.step + 1, f"{r.constraint.name} ({r.u},{r.v})", format_word(w), verdict))

    def discrepancies(self) -> list[AuditEntry]:
        return [e for e in self.audit if e.verdict == "survives"]


def _forced_loss(game: Game, d: Structure, depth: int) -> bool:
    """Can Crocodile force a loss from ``d`` within ``depth`` more moves?

    Crocodile may pick any pending request; the Fugitive may answer with any word
    of the head, one per shade-blind shape.
    """
    cfg = game.config
    if cfg.lost(d) or holds(cfg.green_trap, d, d.a, d.b):
        return True
    if depth == 0:
        return False
    for q in requests(cfg.reduction.constraints(), d):
        words = shape_representatives(q.constraint.head, cfg.word_budget)
        if all(_forced_loss(game, d.add_path(q.u, q.v, w)[0], depth - 1) for w in words):
            return True
    return False


class RandomPolicy(Canonical):
    """A principle-obeying fugitive with random shades, exits and tie-breaks."""

    name = "random"

    def __init__(self, seed: int = 0, exit_prob: float = 0.5):
        self.rng = random.Random(seed)
        self.seed = seed
        self.exit_prob = exit_prob
        self._shade_memo: dict[tuple[int, int, str], str] = {}
        super().__init__(ShadingOracle(self._random_shade))

    def _random_shade(self, i: int, j: int, orient: str) -> str:
        key = (i, j, orient)
        if key not in self._shade_memo:
            self._shade_memo[key] = self.rng.choice(self._shades)
        return self._shade_memo[key]

    def initial_word(self, game: Game) -> tuple[Label, ...]:
        self._shades = game.config.shades
        return super().initial_word(game)

    def wants_exit(self, game: Game, r: Request) -> bool:
        return self.rng.random() < self.exit_prob

    def choose(self, game, r, safe):
        with_d = [w for w in safe if has_dollar(w)]
        without = [w for w in safe if not has_dollar(w)]
        if with_d and without:
            pool = with_d if self.wants_exit(game, r) else without
        else:
            pool = with_d or without
        shortest = min(len(w) for w in pool)
        return self.rng.choice([w for w in pool if len(w) == shortest])


class Scripted(FugitivePolicy):
    """Fixed answers by constraint name, consumed in order; everything else goes to ``fallback``."""

    name = "scripted"

    def __init__(
        self,
        initial: Sequence[Label] | None = None,
        answers: Mapping[str, Sequence[Sequence[Label]]] | None = None,
        fallback: FugitivePolicy | None = None,
    ):
        self.initial = tuple(initial) if initial is not None else None
        self.answers = {k: deque(tuple(w) for w in v) for k, v in (answers or {}).items()}
        self.fallback = fallback if fallback is not None else Canonical()
        self.used: list[tuple[int, str]] = []

    def initial_word(self, game: Game) -> tuple[Label, ...]:
        if self.initial is not None:
            return self.initial
        return self.fallback.initial_word(game)

    def answer(self, game: Game, r: Request) -> tuple[Label, ...]:
        queue = self.answers.get(r.constraint.name)
        if queue:
            self.used.append((game.step + 1, r.constraint.name))
            return queue.popleft()
        return self.fallback.answer(game, r)

    def notify(self, game, r, word, fresh) -> None:
        self.fallback.notify(game, r, word, fresh)


@dataclass
class Certificate:
    step: int
    valid: bool
    extends: bool


class Lifting(FugitivePolicy):
    """Copies paths out of a fixed target structure, keeping a homomorphism into it.

    Every answer is a shortest path of the head language in ``target`` between the
    images of the request's endpoints; the fresh vertices map onto that path.  If
    ``target`` satisfies every constraint such a path always exists, and since
    ``target`` has no red Q0 path from a to b neither does any position of the play.
    """

    name = "lifting"

    def __init__(self, target: Structure, check_every: int = 1):
        self.target = target
        self.h: dict[int, int] = {}
        self.certificates: list[Certificate] = []
        self.check_every = check_every
        self._pending: list | None = None

    def initial_word(self, game: Game) -> tuple[Label, ...]:
        t = self.target
        path = witness_path(game.config.reduction.green_q0, t, t.a, t.b)
        if path is None:
            raise LookupError("target has no green q0 path from a to b")
        self._pending = path
        return tuple(e.label for e in path)

    def answer(self, game: Game, r: Request) -> tuple[Label, ...]:
        hu, hv = self.h[r.u], self.h[r.v]
        path = witness_path(r.constraint.head, self.target, hu, hv)
        if path is None:
            raise LookupError(f"target has no {r.constraint.name} head path between {hu} and {hv}")
        self._pending = path
        return tuple(e.label for e in path)

    def notify(self, game: Game, r, word, fresh) -> None:
        path = self._pending
        self._pending = None
        before = dict(self.h)
        if r is None:
            self.h[game.structure.a] = self.target.a
            self.h[game.structure.b] = self.target.b
        for v, e in zip(fresh, path):
            self.h[v] = e.dst
        extends = all(self.h.get(k) == v for k, v in before.items())
        if game.step % self.check_every == 0 or r is None:
            ok = is_homomorphism(self.h, game.structure, self.target)
            self.certificates.append(Certificate(game.step, ok, extends))

    @property
    def certified(self) -> bool:
        return all(c.valid and c.extends for c in self.certificates)
