"""Finite path languages as acyclic automata over symbol patterns.

A language never stores its words.  Transitions carry :class:`Pattern` objects, so
``Σ^{≤4}`` over a 25-letter alphabet is a five-state chain instead of ~4·10^5 words.
States are kept in topological order (every transition goes from a smaller to a
larger state), which makes longest-path, counting and evaluation single sweeps.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import ColorspaceError
from .structure import Structure
from .symbols import Label, Pattern, Symbol, alphabet

Transition = tuple[int, Pattern, int]

DEFAULT_SHADES = ("black", "gray")


@dataclass(frozen=True, eq=False)
class PathLanguage:
    """An acyclic pattern automaton; equality is identity (use ``same_words`` to compare)."""

    n_states: int
    start: int
    accept: frozenset[int]
    transitions: tuple[Transition, ...]
    shades: tuple[str, ...] = DEFAULT_SHADES
    name: str = ""

    def __post_init__(self):
        if self.start in self.accept:
            raise ValueError("the empty word is not allowed in a path language")
        for s, _, d in self.transitions:
            if not s < d:
                raise ValueError("transitions must respect the topological state order")

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other

    # -- derived data -----------------------------------------------------------

    @cached_property
    def colorspace(self) -> str:
        colors = {p.color for _, p, _ in self.transitions}
        if colors == {None}:
            return "Base"
        if colors == {"G"}:
            return "Green"
        if colors == {"R"}:
            return "Red"
        if None in colors:
            raise ColorspaceError("language mixes base and colored patterns")
        return "Mixed"

    @cached_property
    def out(self) -> dict[int, list[tuple[Pattern, int]]]:
        out: dict[int, list[tuple[Pattern, int]]] = defaultdict(list)
        for s, p, d in self.transitions:
            out[s].append((p, d))
        return out

    @cached_property
    def maxlen(self) -> int:
        best = [-1] * self.n_states
        best[self.start] = 0
        for s, _, d in sorted(self.transitions, key=lambda t: t[0]):
            if best[s] >= 0:
                best[d] = max(best[d], best[s] + 1)
        return max(best[q] for q in self.accept)

    @cached_property
    def minlen(self) -> int:
        best = [None] * self.n_states
        best[self.start] = 0
        for s, _, d in sorted(self.transitions, key=lambda t: t[0]):
            if best[s] is not None and (best[d] is None or best[s] + 1 < best[d]):
                best[d] = best[s] + 1
        return min(best[q] for q in self.accept)

    @cached_property
    def _lengths_to_accept(self) -> list[int]:
        """Bitmask per state: bit r set iff some path of length r reaches an accept state."""
        mask = [0] * self.n_states
        for q in self.accept:
            mask[q] |= 1
        for s, _, d in sorted(self.transitions, key=lambda t: -t[0]):
            mask[s] |= mask[d] << 1
        return mask

    def concrete_alphabet(self) -> list:
        """The letters this language is over: base symbols or labels in the used colors."""
        syms = alphabet(self.shades)
        cs = self.colorspace
        if cs == "Base":
            return syms
        colors = {"Green": ("G",), "Red": ("R",), "Mixed": ("G", "R")}[cs]
        return sorted((Label(s, c) for s in syms for c in colors), key=Label.sort_key)

    @staticmethod
    def _hit(p: Pattern, letter) -> bool:
        if isinstance(letter, Label):
            return p.matches(letter)
        return p.color is None and p.matches_symbol(letter)

    def _step(self, states: frozenset[int], letter) -> frozenset[int]:
        return frozenset(d for q in states for p, d in self.out.get(q, ()) if self._hit(p, letter))

    def accepts(self, word: Sequence[Label | Symbol]) -> bool:
        cur = frozenset([self.start])
        for letter in word:
            cur = self._step(cur, letter)
            if not cur:
                return False
        return bool(cur & self.accept)

    def count_words(self) -> int:
        """Exact number of distinct words, by a subset construction over the concrete alphabet."""
        letters = self.concrete_alphabet()
        layer = {frozenset([self.start]): 1}
        total = 0
        for _ in range(self.maxlen):
            nxt: dict[frozenset[int], int] = defaultdict(int)
            for subset, n in layer.items():
                for letter in letters:
                    t = self._step(subset, letter)
                    if t:
                        nxt[t] += n
            layer = nxt
            total += sum(n for subset, n in layer.items() if subset & self.accept)
        return total

    def __len__(self) -> int:
        return self.count_words()

    def patterns(self) -> set[Pattern]:
        return {p for _, p, _ in self.transitions}

    def rename(self, name: str) -> PathLanguage:
        return PathLanguage(self.n_states, self.start, self.accept, self.transitions, self.shades, name)

    def __repr__(self) -> str:
        tag = f" {self.name!r}" if self.name else ""
        return f"<PathLanguage{tag} states={self.n_states} transitions={len(self.transitions)} {self.colorspace}>"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "n_states": self.n_states,
            "start": self.start,
            "accept": sorted(self.accept),
            "shades": list(self.shades),
            "transitions": [{"src": s, "dst": d, "pattern": p.to_json()} for s, p, d in self.transitions],
        }

    @classmethod
    def from_json(cls, obj: dict) -> PathLanguage:
        trans = [(t["src"], Pattern.from_json(t["pattern"]), t["dst"]) for t in obj["transitions"]]
        return _normalize(obj["n_states"], obj["start"], obj["accept"], trans, tuple(obj["shades"]), obj.get("name", ""))


def _normalize(
    n: int,
    start: int,
    accept: Iterable[int],
    transitions: Iterable[Transition],
    shades: tuple[str, ...],
    name: str = "",
) -> PathLanguage:
    """Drop dead and unreachable states, renumber topologically, dedupe transitions."""
    trans = list(dict.fromkeys(transitions))
    accept = set(accept)
    succ = defaultdict(set)
    pred = defaultdict(set)
    for s, _, d in trans:
        succ[s].add(d)
        pred[d].add(s)

    def closure(seeds, nbrs):
        seen, todo = set(seeds), list(seeds)
        while todo:
            q = todo.pop()
            for r in nbrs[q]:
                if r not in seen:
                    seen.add(r)
                    todo.append(r)
        return seen

    live = closure([start], succ) & closure(accept, pred)
    if start not in live:
        raise ValueError("language is empty")
    trans = [t for t in trans if t[0] in live and t[2] in live]

    # Kahn's algorithm; ties by old id keep the numbering stable
    indeg = {q: 0 for q in live}
    for _, _, d in trans:
        indeg[d] += 1
    ready = sorted(q for q in live if indeg[q] == 0)
    order = []
    out = defaultdict(list)
    for s, _, d in trans:
        out[s].append(d)
    while ready:
        q = ready.pop(0)
        order.append(q)
        for d in out[q]:
            indeg[d] -= 1
            if indeg[d] == 0:
                ready.append(d)
                ready.sort()
    if len(order) != len(live):
        raise ValueError("automaton has a cycle; path languages must be finite")
    new = {q: i for i, q in enumerate(order)}
    renum = sorted(((new[s], p, new[d]) for s, p, d in trans), key=lambda t: (t[0], t[2], str(t[1])))
    return PathLanguage(len(order), new[start], frozenset(new[q] for q in accept & live), tuple(renum), shades, name)


# -- constructors -----------------------------------------------------------------


def from_pattern(p: Pattern, shades: Sequence[str] = DEFAULT_SHADES, name: str = "") -> PathLanguage:
    if not p.symbols(shades):
        raise ValueError(f"pattern {p} denotes no symbol")
    return PathLanguage(2, 0, frozenset([1]), ((0, p, 1),), tuple(shades), name)


def from_patterns(ps: Sequence[Pattern], shades: Sequence[str] = DEFAULT_SHADES, name: str = "") -> PathLanguage:
    """The concatenation of single-pattern languages ``ps[0] ps[1] ...``."""
    if not ps:
        raise ValueError("empty pattern sequence")
    trans = tuple((i, p, i + 1) for i, p in enumerate(ps))
    return PathLanguage(len(ps) + 1, 0, frozenset([len(ps)]), trans, tuple(shades), name)


def from_word(word: Sequence[Symbol | Label], shades: Sequence[str] = DEFAULT_SHADES, name: str = "") -> PathLanguage:
    ps = [Pattern.of(w.symbol, w.color) if isinstance(w, Label) else Pattern.of(w) for w in word]
    return from_patterns(ps, shades, name)


def sigma_upto(n: int, shades: Sequence[str] = DEFAULT_SHADES, color: str | None = None) -> PathLanguage:
    """``Σ^1 + ... + Σ^n`` (the empty word is excluded; see :func:`concat_opt`)."""
    if n < 1:
        raise ValueError("sigma_upto needs n >= 1")
    any_sym = Pattern(color=color)
    trans = tuple((i, any_sym, i + 1) for i in range(n))
    return PathLanguage(n + 1, 0, frozenset(range(1, n + 1)), trans, tuple(shades), f"Σ^≤{n}")


def _check_pair(a: PathLanguage, b: PathLanguage) -> None:
    if a.colorspace != b.colorspace:
        raise ColorspaceError(f"cannot combine {a.colorspace} and {b.colorspace} languages without recoloring")
    if tuple(a.shades) != tuple(b.shades):
        raise ValueError("languages over different shade sets")


def concat(a: PathLanguage, b: PathLanguage, name: str = "") -> PathLanguage:
    _check_pair(a, b)
    off = a.n_states
    trans = list(a.transitions) + [(s + off, p, d + off) for s, p, d in b.transitions]
    for f in a.accept:
        trans += [(f, p, d + off) for s, p, d in b.transitions if s == b.start]
    return _normalize(a.n_states + b.n_states, a.start, {q + off for q in b.accept}, trans, a.shades, name)


def union(a: PathLanguage, b: PathLanguage, name: str = "") -> PathLanguage:
    _check_pair(a, b)
    oa, ob = 1, 1 + a.n_states
    trans = [(s + oa, p, d + oa) for s, p, d in a.transitions]
    trans += [(s + ob, p, d + ob) for s, p, d in b.transitions]
    trans += [(0, p, d + oa) for s, p, d in a.transitions if s == a.start]
    trans += [(0, p, d + ob) for s, p, d in b.transitions if s == b.start]
    acc = {q + oa for q in a.accept} | {q + ob for q in b.accept}
    return _normalize(1 + a.n_states + b.n_states, 0, acc, trans, a.shades, name)


def union_all(langs: Sequence[PathLanguage], name: str = "") -> PathLanguage:
    if not langs:
        raise ValueError("union of no languages")
    out = langs[0]
    for l in langs[1:]:
        out = union(out, l)
    return out.rename(name) if name else out


def concat_all(langs: Sequence[PathLanguage], name: str = "") -> PathLanguage:
    out = langs[0]
    for l in langs[1:]:
        out = concat(out, l)
    return out.rename(name) if name else out


def concat_opt(a: PathLanguage, b: PathLanguage, name: str = "") -> PathLanguage:
    """``a · (ε + b)``: concatenation where the right operand may be skipped."""
    return union(a, concat(a, b), name)


def color(l: PathLanguage, c: str) -> PathLanguage:
    """Write every symbol of a base language in ink ``c`` ("G" or "R")."""
    if l.colorspace != "Base":
        raise ColorspaceError(f"color() expects a Base language, got {l.colorspace}")
    if c not in ("G", "R"):
        raise ValueError(f"bad color {c!r}")
    trans = tuple((s, p.recolor(c), d) for s, p, d in l.transitions)
    name = f"{c}({l.name})" if l.name else ""
    return PathLanguage(l.n_states, l.start, l.accept, trans, l.shades, name)


def same_words(a: PathLanguage, b: PathLanguage) -> bool:
    """Language equality, decided on the product of the two subset constructions."""
    if a.colorspace != b.colorspace:
        return False
    letters = a.concrete_alphabet()
    seen = set()
    todo = [(frozenset([a.start]), frozenset([b.start]))]
    while todo:
        x, y = todo.pop()
        if (x, y) in seen:
            continue
        seen.add((x, y))
        if bool(x & a.accept) != bool(y & b.accept):
            return False
        for letter in letters:
            nx, ny = a._step(x, letter), b._step(y, letter)
            if nx or ny:
                todo.append((nx, ny))
    return True


# -- enumeration ------------------------------------------------------------------


def enumerate_words(l: PathLanguage, budget: int, shades: Sequence[str] | None = None) -> tuple[list[tuple], bool]:
    """Words of ``l`` in shortlex order, at most ``budget`` of them.

    Returns ``(words, complete)``; ``complete`` is False iff more words exist.
    ``shades`` overrides the language's shade set (e.g. one shade to get a single
    representative per shade-blind shape).
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if shades is not None:
        l = PathLanguage(l.n_states, l.start, l.accept, l.transitions, tuple(shades), l.name)
    letters = l.concrete_alphabet()
    masks = l._lengths_to_accept
    words: list[tuple] = []

    def can_finish(states: frozenset[int], r: int) -> bool:
        return any(masks[q] >> r & 1 for q in states)

    def walk(states: frozenset[int], prefix: list, r: int) -> bool:
        """Depth-first over exactly ``r`` more letters; False once budget+1 words are seen."""
        if r == 0:
            if states & l.accept:
                if len(words) == budget:
                    return False
                words.append(tuple(prefix))
            return True
        for letter in letters:
            nxt = l._step(states, letter)
            if nxt and can_finish(nxt, r - 1):
                prefix.append(letter)
                ok = walk(nxt, prefix, r - 1)
                prefix.pop()
                if not ok:
                    return False
        return True

    start = frozenset([l.start])
    for length in range(1, l.maxlen + 1):
        if can_finish(start, length) and not walk(start, [], length):
            return words, False
    return words, True


# -- evaluation -------------------------------------------------------------------


def _pattern_matrix(p: Pattern, d: Structure) -> np.ndarray:
    key = ("pattern_matrix", p)
    m = d._cache.get(key)
    if m is None:
        n = len(d.vertices)
        m = np.zeros((n, n), dtype=bool)
        for lab in d.labels:
            if p.matches(lab):
                m |= d.label_matrix(lab)
        d._cache[key] = m
    return m


def eval_matrix(l: PathLanguage, d: Structure, sources: Sequence[int] | None = None) -> np.ndarray:
    """Boolean reachability matrix of ``l`` on ``d`` (rows: sources, columns: all vertices).

    Product construction: one boolean matrix per automaton state, propagated along
    the topological order of states.  Results are memoized on the structure.
    """
    if l.colorspace == "Base":
        raise ColorspaceError("edges are colored; evaluate a colored language (use color())")
    src_key = None if sources is None else tuple(sources)
    key = ("eval", id(l), src_key)
    hit = d._cache.get(key)
    if hit is not None and hit[0] is l:
        return hit[1]
    n = len(d.vertices)
    if sources is None:
        init = np.eye(n, dtype=bool)
    else:
        init = np.zeros((len(src_key), n), dtype=bool)
        for r, v in enumerate(src_key):
            init[r, d.index[v]] = True
    reach: list[np.ndarray | None] = [None] * l.n_states
    reach[l.start] = init
    result = np.zeros_like(init)
    for q in range(l.n_states):
        rq = reach[q]
        if rq is None or not rq.any():
            continue
        if q in l.accept:
            result |= rq
        for p, dst in l.out.get(q, ()):
            a = _pattern_matrix(p, d)
            step = rq @ a
            reach[dst] = step if reach[dst] is None else (reach[dst] | step)
    d._cache[key] = (l, result)  # keep l alive so id() stays unique
    return result


def evaluate(l: PathLanguage, d: Structure, sources: Sequence[int] | None = None) -> frozenset[tuple[int, int]]:
    """All pairs ``(u, v)`` such that some word of ``l`` labels a path ``u -> v`` in ``d``."""
    m = eval_matrix(l, d, sources)
    rows = d.vertices if sources is None else tuple(sources)
    cols = d.vertices
    ri, ci = np.nonzero(m)
    return frozenset((rows[i], cols[j]) for i, j in zip(ri.tolist(), ci.tolist()))


def holds(l: PathLanguage, d: Structure, u: int, v: int) -> bool:
    m = eval_matrix(l, d, (u,))
    return bool(m[0, d.index[v]])


def evaluate_brute(l: PathLanguage, d: Structure) -> frozenset[tuple[int, int]]:
    """Reference evaluation by explicit path enumeration.

    Walks every path of length <= maxlen from every vertex, carrying the set of
    automaton states the path's word can reach; a prefix whose set is empty is
    abandoned.  Walks that meet in the same (vertex, state set, depth) share their
    continuations.  Shares no code with the matrix product.
    """
    cap = l.maxlen
    memo: dict[tuple[int, frozenset[int], int], frozenset[int]] = {}

    def ends(v: int, states: frozenset[int], depth: int) -> frozenset[int]:
        key = (v, states, depth)
        hit = memo.get(key)
        if hit is not None:
            return hit
        out = {v} if depth and states & l.accept else set()
        if depth < cap:
            for e in d.out_edges[v]:
                nxt = l._step(states, e.label)
                if nxt:
                    out |= ends(e.dst, nxt, depth + 1)
        memo[key] = frozenset(out)
        return memo[key]

    start = frozenset([l.start])
    return frozenset((u, v) for u in d.vertices for v in ends(u, start, 0))


def witness_path(l: PathLanguage, d: Structure, u: int, v: int) -> list | None:
    """A shortest path ``u -> v`` in ``d`` spelling a word of ``l``, as a list of edges."""
    start = (u, l.start)
    parent: dict[tuple[int, int], tuple | None] = {start: None}
    frontier = [start]
    while frontier:
        nxt = []
        for node in frontier:
            x, q = node
            if x == v and q in l.accept:
                path = []
                while parent[node] is not None:
                    node, edge = parent[node]
                    path.append(edge)
                return path[::-1]
            for p, q2 in l.out.get(q, ()):
                for e in d.out_edges[x]:
                    key = (e.dst, q2)
                    if key not in parent and p.matches(e.label):
                        parent[key] = (node, e)
                        nxt.append(key)
        frontier = nxt
    return None
