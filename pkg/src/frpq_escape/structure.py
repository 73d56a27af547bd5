"""Finite edge-labeled multigraphs with the two distinguished constants ``a`` and ``b``.

Structures are immutable.  Every operation that "grows" a structure returns a new
one; vertex ids come from a per-structure counter so fresh vertices never reuse an
id, and serialized structures keep their ids (replays compare them verbatim).
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .symbols import Label, Symbol


class Edge(NamedTuple):
    src: int
    dst: int
    label: Label


def _edge_key(e: Edge) -> tuple:
    return (e.src, e.dst, e.label.sort_key())


@dataclass(frozen=True)
class Structure:
    vertices: tuple[int, ...]
    edges: frozenset[Edge]
    a: int
    b: int
    next_id: int
    names: tuple[tuple[int, str], ...] = ()
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        if self.a == self.b:
            raise ValueError("constants a and b must be distinct")
        if self.a not in vs or self.b not in vs:
            raise ValueError("constants a and b must be vertices")
        for e in self.edges:
            if e.src not in vs or e.dst not in vs:
                raise ValueError(f"edge endpoint outside the vertex set: {e}")
        if self.vertices and self.next_id <= max(self.vertices):
            raise ValueError("next_id must exceed every used vertex id")

    # -- construction -------------------------------------------------------

    @classmethod
    def initial(cls) -> Structure:
        """Two vertices ``a`` (id 0) and ``b`` (id 1) and no edges."""
        return cls((0, 1), frozenset(), 0, 1, 2, ((0, "a"), (1, "b")))

    @classmethod
    def build(
        cls,
        vertices: Iterable[int],
        edges: Iterable[tuple[int, int, Label]],
        a: int,
        b: int,
        names: Mapping[int, str] | None = None,
        next_id: int | None = None,
    ) -> Structure:
        vs = tuple(sorted(set(vertices)))
        es = frozenset(Edge(*e) for e in edges)
        nid = next_id if next_id is not None else (max(vs) + 1 if vs else 0)
        nm = tuple(sorted((names or {}).items()))
        return cls(vs, es, a, b, nid, nm)

    def with_edges(self, edges: Iterable[tuple[int, int, Label]]) -> Structure:
        new = frozenset(Edge(*e) for e in edges)
        if new <= self.edges:
            return self
        return Structure(self.vertices, self.edges | new, self.a, self.b, self.next_id, self.names)

    def without_edges(self, edges: Iterable[Edge]) -> Structure:
        return Structure(self.vertices, self.edges - frozenset(edges), self.a, self.b, self.next_id, self.names)

    def add_path(self, u: int, v: int, word: Sequence[Label]) -> tuple[Structure, tuple[int, ...]]:
        """Append a fresh path ``u -> s_1 -> ... -> v`` spelling ``word``.

        Returns the new structure and the ids of the fresh intermediate vertices.
        """
        if not word:
            raise ValueError("cannot freeze the empty word")
        if u not in self.vertex_set or v not in self.vertex_set:
            raise ValueError(f"path endpoints {u}, {v} must be vertices of the host")
        fresh = tuple(range(self.next_id, self.next_id + len(word) - 1))
        chain = (u, *fresh, v)
        new_edges = {Edge(chain[i], chain[i + 1], lab) for i, lab in enumerate(word)}
        grown = Structure(
            self.vertices + fresh,
            self.edges | new_edges,
            self.a,
            self.b,
            self.next_id + len(fresh),
            self.names,
        )
        return grown, fresh

    def rename(self, names: Mapping[int, str]) -> Structure:
        merged = dict(self.names)
        merged.update(names)
        return Structure(self.vertices, self.edges, self.a, self.b, self.next_id, tuple(sorted(merged.items())))

    def induced(self, keep: Iterable[int]) -> Structure:
        keep = set(keep) | {self.a, self.b}
        vs = tuple(v for v in self.vertices if v in keep)
        es = frozenset(e for e in self.edges if e.src in keep and e.dst in keep)
        nm = tuple((v, n) for v, n in self.names if v in keep)
        return Structure(vs, es, self.a, self.b, self.next_id, nm)

    def erase_shades(self) -> Structure:
        es = frozenset(Edge(e.src, e.dst, e.label.erase_shade()) for e in self.edges)
        return Structure(self.vertices, es, self.a, self.b, self.next_id, self.names)

    # -- views ----------------------------------------------------------------

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    @cached_property
    def name_of(self) -> dict[int, str]:
        return dict(self.names)

    @cached_property
    def id_of(self) -> dict[str, int]:
        return {n: v for v, n in self.names}

    def name(self, v: int) -> str:
        return self.name_of.get(v, f"#{v}")

    @cached_property
    def out_edges(self) -> dict[int, list[Edge]]:
        out: dict[int, list[Edge]] = {v: [] for v in self.vertices}
        for e in sorted(self.edges, key=_edge_key):
            out[e.src].append(e)
        return out

    @cached_property
    def in_edges(self) -> dict[int, list[Edge]]:
        inn: dict[int, list[Edge]] = {v: [] for v in self.vertices}
        for e in sorted(self.edges, key=_edge_key):
            inn[e.dst].append(e)
        return inn

    @cached_property
    def labels(self) -> frozenset[Label]:
        return frozenset(e.label for e in self.edges)

    @cached_property
    def index(self) -> dict[int, int]:
        """Vertex id -> row/column in the adjacency matrices."""
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def _label_matrices(self) -> dict[Label, np.ndarray]:
        n = len(self.vertices)
        idx = self.index
        out: dict[Label, np.ndarray] = {}
        for e in self.edges:
            m = out.get(e.label)
            if m is None:
                m = out[e.label] = np.zeros((n, n), dtype=bool)
            m[idx[e.src], idx[e.dst]] = True
        return out

    def label_matrix(self, label: Label) -> np.ndarray:
        m = self._label_matrices.get(label)
        if m is None:
            n = len(self.vertices)
            return np.zeros((n, n), dtype=bool)
        return m

    def has_edge(self, u: int, v: int, label: Label) -> bool:
        return Edge(u, v, label) in self.edges

    def __len__(self) -> int:
        return len(self.vertices)

    def summary(self) -> str:
        return f"Structure(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        obj = {
            "vertices": list(self.vertices),
            "a": self.a,
            "b": self.b,
            "next_id": self.next_id,
            "edges": [
                {"src": e.src, "dst": e.dst, "color": e.label.color, "symbol": e.label.symbol.to_json()}
                for e in sorted(self.edges, key=_edge_key)
            ],
        }
        if self.names:
            obj["names"] = {str(v): n for v, n in self.names}
        return obj

    @classmethod
    def from_json(cls, obj: Mapping) -> Structure:
        edges = [
            (e["src"], e["dst"], Label(Symbol.from_json(e["symbol"]), e["color"]))
            for e in obj["edges"]
        ]
        names = {int(k): v for k, v in obj.get("names", {}).items()}
        return cls.build(obj["vertices"], edges, obj["a"], obj["b"], names, obj.get("next_id"))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()

    def to_dot(self, erase_shades: bool = False, title: str = "structure") -> str:
        lines = [f'digraph "{title}" {{', "  rankdir=LR;"]
        for v in self.vertices:
            shape = "doublecircle" if v in (self.a, self.b) else "circle"
            lines.append(f'  n{v} [label="{self.name(v)}", shape={shape}];')
        for e in sorted(self.edges, key=_edge_key):
            sym = e.label.symbol.erase_shade() if erase_shades else e.label.symbol
            ink = "green" if e.label.color == "G" else "red"
            lines.append(f'  n{e.src} -> n{e.dst} [color={ink}, fontcolor={ink}, label="{sym}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def freeze(word: Sequence[Label], u: int, v: int, host: Structure) -> Structure:
    """``host`` plus a fresh path from ``u`` to ``v`` spelling ``word``."""
    return host.add_path(u, v, word)[0]


def frozen_body(word: Sequence[Label]) -> Structure:
    """The canonical structure ``word[a, b]``."""
    return freeze(word, 0, 1, Structure.initial())


def named_edges(s: Structure) -> frozenset[tuple[str, str, Label]]:
    """Edges with vertex ids replaced by vertex names (for equality up to naming)."""
    return frozenset((s.name(e.src), s.name(e.dst), e.label) for e in s.edges)


def same_named(x: Structure, y: Structure) -> bool:
    """Equal as named graphs: same vertex names, same named edges, same constants."""
    return (
        {x.name(v) for v in x.vertices} == {y.name(v) for v in y.vertices}
        and named_edges(x) == named_edges(y)
        and (x.name(x.a), x.name(x.b)) == (y.name(y.a), y.name(y.b))
    )
