"""The Escape game: Fugitive builds, Crocodile picks requests, red Q0 paths lose.

A play starts from ``G(w)[a, b]`` for a word ``w`` of Q0 chosen by the Fugitive.
The Crocodile strategy is a sequence of phases; phase ``i`` serves requests of
the constraints named by ``sequence[i]`` until none is left.  After every Add the
engine checks for a red Q0 path from ``a`` to ``b``.
"""
from __future__ import annotations

import hashlib
import json
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

from .chase import RegularConstraint, Request, add_path, is_pending, requests
from .errors import InvalidInstanceError, NotInLanguageError, StaleRequestError
from .language import PathLanguage, color, enumerate_words, holds, union_all
from .reduction import ReductionOutput
from .structure import Edge, Structure
from .symbols import Label, format_word, parse_word, temperature_consistent

LOST, QUIESCENT, BUDGET, FAULT = "FugitiveLost", "Quiescent", "BudgetExhausted", "PolicyFault"


@dataclass(frozen=True)
class Outcome:
    kind: str
    step: int
    detail: str = ""

    def __str__(self) -> str:
        text = f"{self.kind}({self.step})"
        return f"{text}: {self.detail}" if self.detail else text

    @classmethod
    def parse(cls, text: str) -> Outcome | None:
        """Inverse of ``str``; ``"None"`` or an empty string give None."""
        if not text or text == "None":
            return None
        head, _, detail = text.partition(": ")
        kind, _, rest = head.partition("(")
        return cls(kind, int(rest.rstrip(")")), detail)


@dataclass
class GameConfig:
    """Q0, the tagged view languages and the budgets of one game."""

    reduction: ReductionOutput
    step_budget: int = 10_000
    word_budget: int = 1_000
    stop_on_loss: bool = True

    def __post_init__(self):
        if self.step_budget < 1:
            raise InvalidInstanceError("step_budget must be >= 1")
        if self.word_budget < 1:
            raise InvalidInstanceError("word_budget is too small to name any word of q0")
        shades = set(self.reduction.shades)
        for _, _, l in self.reduction.tagged():
            if set(l.shades) != shades:
                raise InvalidInstanceError(f"{l.name} is over another shade set")
        if set(self.reduction.q0.shades) != shades:
            raise InvalidInstanceError("q0 is over another shade set")

    @property
    def q0(self) -> PathLanguage:
        return self.reduction.q0

    @property
    def shades(self) -> tuple[str, ...]:
        return self.reduction.shades

    def phase_constraints(self, item) -> list[RegularConstraint]:
        """Constraints of one strategy phase.

        ``item`` is a good-language index, a ``(group, index)`` pair, or ``None``
        for free play over every constraint.
        """
        if item is None:
            return self.reduction.constraints()
        if isinstance(item, int):
            item = ("good", item)
        group, idx = item
        return list(self.reduction.constraints_of(group, idx))

    def constraint(self, group: str, index: int, direction: str) -> RegularConstraint:
        fwd, back = self.reduction.constraints_of(group, index)
        return fwd if direction == fwd.direction else back

    @cached_property
    def trap_constraints(self) -> list[RegularConstraint]:
        """Green-to-red constraints of the bad and ugly languages (Crocodile's punishments)."""
        return [t for t in self.reduction.constraints(("bad", "ugly")) if t.direction == "->"]

    @cached_property
    def green_trap(self) -> PathLanguage:
        return color(union_all(self.reduction.bad + self.reduction.ugly), "G")

    @cached_property
    def green_bad(self) -> PathLanguage | None:
        return color(union_all(self.reduction.bad), "G") if self.reduction.bad else None

    @cached_property
    def red_bad(self) -> PathLanguage | None:
        return color(union_all(self.reduction.bad), "R") if self.reduction.bad else None

    def lost(self, d: Structure) -> bool:
        return holds(self.reduction.red_q0, d, d.a, d.b)

    def to_json(self) -> dict:
        return {
            "instance": self.reduction.instance.to_json(),
            "step_budget": self.step_budget,
            "word_budget": self.word_budget,
            "stop_on_loss": self.stop_on_loss,
        }


@dataclass(frozen=True)
class CrocodileStrategy:
    """Phases of a Crocodile strategy.

    ``order`` is ``"chase"`` (requests in the fixed chase order, recomputed once a
    batch is used up), ``"random"`` (each batch shuffled) or ``"random-step"`` (one
    uniformly random pending request per step).  With ``punish`` on, a pending
    bad/ugly request at ``(a, b)`` is served before anything else.
    """

    sequence: tuple = ()
    order: str = "chase"
    seed: int = 0
    punish: bool = True
    name: str = ""

    def __post_init__(self):
        if self.order not in ("chase", "random", "random-step"):
            raise ValueError(f"unknown request order {self.order!r}")
        for item in self.sequence:
            if item is None or isinstance(item, int) and 1 <= item <= 15:
                continue
            if isinstance(item, tuple) and len(item) == 2 and item[0] in ("good", "bad", "ugly"):
                continue
            raise ValueError(f"bad strategy phase {item!r}")

    @classmethod
    def free(cls, order: str = "random", seed: int = 0) -> CrocodileStrategy:
        return cls((None,), order, seed, True, "free")


@dataclass(frozen=True)
class StepRecord:
    step: int
    group: str
    index: int
    direction: str
    u: int
    v: int
    word: tuple[Label, ...]
    fresh: tuple[int, ...]
    phase: int

    @property
    def constraint_name(self) -> str:
        return f"{self.group}{self.index}{self.direction}"

    def tsv(self) -> str:
        return "\t".join(
            [str(self.step), self.group, str(self.index), self.direction, str(self.u), str(self.v), format_word(self.word)]
        )


@dataclass
class PlayTranscript:
    initial_word: tuple[Label, ...]
    steps: list[StepRecord] = field(default_factory=list)
    outcome: Outcome | None = None
    phase_ends: list[int] = field(default_factory=list)
    seed: int = 0
    strategy: str = ""
    fugitive: str = ""
    final: Structure | None = field(default=None, repr=False)
    stored_digest: str = ""

    @property
    def initial_path(self) -> tuple[int, ...]:
        """Vertex chain of the initial word: ``a, a', v0, ..., b``."""
        n = len(self.initial_word)
        return (0, *range(2, n + 1), 1)

    def header(self) -> list[str]:
        return [
            f"# seed={self.seed}",
            f"# strategy={self.strategy}",
            f"# fugitive={self.fugitive}",
            f"# initial={format_word(self.initial_word)}",
            f"# phase_ends={','.join(map(str, self.phase_ends))}",
            f"# outcome={self.outcome}",
            f"# final_sha256={self.final.digest() if self.final is not None else self.stored_digest}",
        ]

    def to_tsv(self) -> str:
        lines = self.header() + ["step\tgroup\tindex\tdirection\tu\tv\tword"]
        lines += [s.tsv() for s in self.steps]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tsv(cls, text: str) -> PlayTranscript:
        meta: dict[str, str] = {}
        steps: list[StepRecord] = []
        for line in text.splitlines():
            if not line.strip():
                continue
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition("=")
                meta[key] = val
                continue
            if line.startswith("step\t"):
                continue
            n, group, idx, direction, u, v, word = line.split("\t")
            steps.append(StepRecord(int(n), group, int(idx), direction, int(u), int(v), parse_word(word), (), -1))
        t = cls(parse_word(meta.get("initial", "")), steps, seed=int(meta.get("seed", 0) or 0))
        t.strategy = meta.get("strategy", "")
        t.fugitive = meta.get("fugitive", "")
        ends = meta.get("phase_ends", "")
        t.phase_ends = [int(x) for x in ends.split(",")] if ends else []
        t.stored_digest = meta.get("final_sha256", "")
        t.outcome = Outcome.parse(meta.get("outcome", ""))
        return t

    def digest(self) -> str:
        return hashlib.sha256(self.to_tsv().encode()).hexdigest()

    @property
    def lost(self) -> bool:
        return self.outcome is not None and self.outcome.kind == LOST


class FugitivePolicy:
    """Base class: pick the initial word and answer requests."""

    name = "fugitive"

    def initial_word(self, game: Game) -> tuple[Label, ...]:
        raise NotImplementedError

    def answer(self, game: Game, r: Request) -> tuple[Label, ...]:
        raise NotImplementedError

    def notify(self, game: Game, r: Request | None, word: tuple[Label, ...], fresh: tuple[int, ...]) -> None:
        """Called after every Add (and after the initial position, with ``r=None``)."""


@dataclass
class Game:
    """Mutable state of one play, shown to the policies."""

    config: GameConfig
    structure: Structure
    rng: random.Random
    initial_path: tuple[int, ...] = ()
    step: int = 0
    phase: int = -1


def initial_position(policy: FugitivePolicy, config: GameConfig, seed: int = 0) -> Structure:
    game = Game(config, Structure.initial(), random.Random(seed))
    word = tuple(policy.initial_word(game))
    _check_initial(config, word)
    return game.structure.add_path(game.structure.a, game.structure.b, word)[0]


def _check_initial(config: GameConfig, word: Sequence[Label]) -> None:
    if not word or not config.reduction.green_q0.accepts(word):
        raise NotInLanguageError(f"initial word {format_word(word)} is not a green word of q0")


def _punishment(config: GameConfig, d: Structure) -> Request | None:
    if not holds(config.green_trap, d, d.a, d.b):
        return None
    for r in requests(config.trap_constraints, d, sources=(d.a,)):
        if r.v == d.b:
            return r
    return None


def play(
    config: GameConfig,
    fugitive: FugitivePolicy,
    crocodile: CrocodileStrategy,
    on_phase_end: Callable[[int, object, Structure], None] | None = None,
) -> PlayTranscript:
    rng = random.Random(crocodile.seed)
    game = Game(config, Structure.initial(), rng)
    word = tuple(fugitive.initial_word(game))
    _check_initial(config, word)
    d, fresh = game.structure.add_path(0, 1, word)
    t = PlayTranscript(word, seed=crocodile.seed, strategy=crocodile.name, fugitive=getattr(fugitive, "name", ""))
    game.structure = d
    game.initial_path = t.initial_path
    fugitive.notify(game, None, word, fresh)
    first_loss: int | None = 0 if config.lost(d) else None

    def finish(outcome: Outcome) -> PlayTranscript:
        t.outcome = outcome
        t.final = game.structure
        return t

    if first_loss is not None and config.stop_on_loss:
        return finish(Outcome(LOST, 0, "red q0 path in the initial position"))

    def serve(r: Request, phase: int) -> Outcome | None:
        nonlocal first_loss
        try:
            word = tuple(fugitive.answer(game, r))
            d2, fresh = add_path(game.structure, r, word)
        except (NotInLanguageError, StaleRequestError, ValueError, LookupError) as exc:
            return Outcome(FAULT, game.step + 1, f"{r.constraint.name} at ({r.u},{r.v}): {exc}")
        game.step += 1
        game.structure = d2
        t.steps.append(
            StepRecord(game.step, r.constraint.group, r.constraint.index, r.constraint.direction, r.u, r.v, word, fresh, phase)
        )
        fugitive.notify(game, r, word, fresh)
        if first_loss is None and config.lost(d2):
            first_loss = game.step
            if config.stop_on_loss:
                return Outcome(LOST, game.step, f"after serving {r.constraint.name} at ({r.u},{r.v})")
        return None

    for phase, item in enumerate(crocodile.sequence):
        game.phase = phase
        constraints = config.phase_constraints(item)
        while True:
            if game.step >= config.step_budget:
                return finish(Outcome(BUDGET, game.step))
            if crocodile.punish:
                pr = _punishment(config, game.structure)
                if pr is not None:
                    out = serve(pr, phase)
                    if out is not None:
                        return finish(out)
                    continue
            batch = requests(constraints, game.structure)
            if not batch:
                break
            if crocodile.order == "random-step":
                batch = [rng.choice(batch)]
            elif crocodile.order == "random":
                rng.shuffle(batch)
            for r in batch:
                if game.step >= config.step_budget:
                    break
                if not is_pending(game.structure, r):
                    continue
                if crocodile.punish and holds(config.green_trap, game.structure, 0, 1):
                    break
                out = serve(r, phase)
                if out is not None:
                    return finish(out)
        t.phase_ends.append(game.step)
        if on_phase_end is not None:
            on_phase_end(phase, item, game.structure)
    if first_loss is not None:
        return finish(Outcome(LOST, first_loss, "red q0 path appeared"))
    return finish(Outcome(QUIESCENT, game.step))


def replay(t: PlayTranscript, config: GameConfig) -> Structure:
    """Rebuild the final structure of ``t`` by re-serving every recorded request."""
    _check_initial(config, t.initial_word)
    d = Structure.initial().add_path(0, 1, t.initial_word)[0]
    for s in t.steps:
        r = Request(s.u, s.v, config.constraint(s.group, s.index, s.direction))
        d, fresh = add_path(d, r, s.word)
        if s.fresh and fresh != s.fresh:
            raise ValueError(f"step {s.step}: fresh ids {fresh} differ from the record {s.fresh}")
    return d


def replay_structures(t: PlayTranscript, config: GameConfig) -> Iterable[tuple[int, Structure, tuple[Edge, ...]]]:
    """Yield ``(step, structure, new edges)`` for step 0 and every recorded step."""
    d = Structure.initial().add_path(0, 1, t.initial_word)[0]
    yield 0, d, tuple(sorted(d.edges, key=lambda e: (e.src, e.dst)))
    for s in t.steps:
        r = Request(s.u, s.v, config.constraint(s.group, s.index, s.direction))
        d2 = add_path(d, r, s.word)[0]
        yield s.step, d2, tuple(d2.edges - d.edges)
        d = d2


# -- principles --------------------------------------------------------------------


def p2_ready(d: Structure, a_prime: int, b_prime: int) -> tuple[bool, str]:
    """The structural precondition under which the temperature principle is enforced."""
    a, b = d.a, d.b
    want_a = {(a, a_prime, "G", "C"), (a, a_prime, "R", "W")}
    at_a = {(e.src, e.dst, e.label.color, e.label.symbol.temp) for e in d.out_edges[a] + d.in_edges[a]}
    if at_a != want_a or any(e.label.symbol.kind != "alpha" for e in d.out_edges[a] + d.in_edges[a]):
        return False, "edges at a are not exactly G(alpha^C) and R(alpha^W) to a'"
    at_b = {(e.src, e.dst, e.label.color, e.label.symbol.kind) for e in d.out_edges[b] + d.in_edges[b]}
    if at_b != {(b_prime, b, "G", "omega"), (b_prime, b, "R", "omega")}:
        return False, "edges at b are not exactly the two omega edges from b'"
    for e in d.edges:
        k = e.label.symbol.kind
        if k == "alpha" and (e.src, e.dst) != (a, a_prime):
            return False, f"alpha edge outside (a, a'): {e}"
        if k == "omega" and (e.src, e.dst) != (b_prime, b):
            return False, f"omega edge outside (b', b): {e}"
    fwd = _bfs(d, a_prime, forward=True)
    back = _bfs(d, b_prime, forward=False)
    for v in d.vertices:
        if v in (a, b):
            continue
        if fwd.get(v, 99) > 4 or back.get(v, 99) > 4:
            return False, f"vertex {v} is too far from a' or b'"
    return True, ""


def _bfs(d: Structure, root: int, forward: bool) -> dict[int, int]:
    dist = {root: 0}
    todo = deque([root])
    while todo:
        v = todo.popleft()
        for e in d.out_edges[v] if forward else d.in_edges[v]:
            w = e.dst if forward else e.src
            if w not in dist:
                dist[w] = dist[v] + 1
                todo.append(w)
    return dist


@dataclass(frozen=True)
class Violation:
    step: int
    principle: str  # "I", "II", "III" or "temperature"
    detail: str


@dataclass
class PrincipleReport:
    violations: list[Violation]
    p2_ready: list[tuple[int, bool]]

    @property
    def clean(self) -> bool:
        return not self.violations

    def steps_violating(self, principle: str) -> list[int]:
        return [v.step for v in self.violations if v.principle == principle]


def monitor_principles(t: PlayTranscript, config: GameConfig) -> PrincipleReport:
    """Replay ``t`` and report every step that breaks a principle.

    ``temperature`` flags any new edge in the wrong ink for its temperature; ``II``
    flags a wrong-ink grid edge at a step where the structure is P2-ready.
    """
    start = config.reduction.green_start
    out: list[Violation] = []
    ready: list[tuple[int, bool]] = []
    path = t.initial_path
    a_prime, b_prime = path[1], path[-2]
    if not start.accepts(t.initial_word):
        out.append(Violation(0, "I", f"initial word {format_word(t.initial_word)} is not a Q_start word"))
    flagged: set[Edge] = set()
    bad_seen = {"green": False, "red": False}
    for step, d, new in replay_structures(t, config):
        ok, _ = p2_ready(d, a_prime, b_prime)
        ready.append((step, ok))
        wrong = [e for e in new if not temperature_consistent(e.label)]
        if wrong and step > 0:
            out.append(Violation(step, "temperature", "; ".join(f"{e.src}->{e.dst} {e.label}" for e in wrong)))
        if ok:
            bad_grid = {e for e in d.edges if e.label.symbol.is_grid and not temperature_consistent(e.label)}
            if bad_grid - flagged:
                out.append(Violation(step, "II", f"{len(bad_grid - flagged)} grid edges in the wrong ink"))
                flagged |= bad_grid
        for lang, ink in ((config.green_bad, "green"), (config.red_bad, "red")):
            if lang is not None and not bad_seen[ink] and holds(lang, d, d.a, d.b):
                bad_seen[ink] = True
                out.append(Violation(step, "III", f"{ink} Q_bad path from a to b"))
    return PrincipleReport(out, ready)
