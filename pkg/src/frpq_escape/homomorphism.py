"""Homomorphism and isomorphism search between structures.

Plain backtracking: the next vertex is the unassigned one with the fewest remaining
candidates (ties broken by degree, then id), and every assignment prunes the
candidate sets of its neighbours.  Structures in scope have at most a few hundred
vertices, so completeness matters more than speed.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Mapping

from .structure import Structure


class SeedConflictError(ValueError):
    """The seed map is not a partial function between the two vertex sets."""


def is_homomorphism(h: Mapping[int, int], source: Structure, target: Structure) -> bool:
    """``h`` is total on ``source``, fixes the constants and preserves labeled edges."""
    if h.get(source.a) != target.a or h.get(source.b) != target.b:
        return False
    if any(v not in h or h[v] not in target.vertex_set for v in source.vertices):
        return False
    return all(target.has_edge(h[e.src], h[e.dst], e.label) for e in source.edges)


def _neighbour_index(s: Structure):
    succ = defaultdict(lambda: defaultdict(set))  # u -> label -> {v}
    pred = defaultdict(lambda: defaultdict(set))
    for e in s.edges:
        succ[e.src][e.label].add(e.dst)
        pred[e.dst][e.label].add(e.src)
    return succ, pred


def find_homomorphism(
    source: Structure,
    target: Structure,
    seed: Mapping[int, int] | None = None,
    injective: bool = False,
) -> dict[int, int] | None:
    """A homomorphism ``source -> target`` extending ``seed`` (and a->a, b->b), or None.

    With ``injective=True`` only injective maps are returned.  The search order is
    fixed, so the answer is deterministic for given inputs.
    """
    seed = dict(seed or {})
    for v, img in ((source.a, target.a), (source.b, target.b)):
        if seed.setdefault(v, img) != img:
            raise SeedConflictError(f"seed maps constant {v} to {seed[v]}, expected {img}")
    for v, img in seed.items():
        if v not in source.vertex_set or img not in target.vertex_set:
            raise SeedConflictError(f"seed pair {v}->{img} outside the vertex sets")
    if injective and len(set(seed.values())) != len(seed):
        raise SeedConflictError("injective search with a non-injective seed")

    s_succ, s_pred = _neighbour_index(source)
    t_succ, t_pred = _neighbour_index(target)

    def compatible(u: int, x: int) -> bool:
        if not all(lab in t_succ[x] for lab in s_succ[u]):
            return False
        if not all(lab in t_pred[x] for lab in s_pred[u]):
            return False
        if injective:
            deg_s = sum(map(len, s_succ[u].values())) + sum(map(len, s_pred[u].values()))
            deg_t = sum(map(len, t_succ[x].values())) + sum(map(len, t_pred[x].values()))
            return deg_s <= deg_t
        return True

    domains: dict[int, set[int]] = {}
    for u in source.vertices:
        if u in seed:
            domains[u] = {seed[u]} if compatible(u, seed[u]) else set()
        else:
            domains[u] = {x for x in target.vertices if compatible(u, x)}
        if not domains[u]:
            return None

    degree = {u: sum(map(len, s_succ[u].values())) + sum(map(len, s_pred[u].values())) for u in source.vertices}

    def propagate(u: int, x: int, doms: dict[int, set[int]], assigned: dict[int, int]) -> bool:
        for lab, outs in s_succ[u].items():
            allowed = t_succ[x][lab]
            for w in outs:
                if w in assigned:
                    if assigned[w] not in allowed:
                        return False
                else:
                    doms[w] = doms[w] & allowed
                    if not doms[w]:
                        return False
        for lab, ins in s_pred[u].items():
            allowed = t_pred[x][lab]
            for w in ins:
                if w in assigned:
                    if assigned[w] not in allowed:
                        return False
                else:
                    doms[w] = doms[w] & allowed
                    if not doms[w]:
                        return False
        if injective:
            for w in doms:
                if w not in assigned and x in doms[w]:
                    doms[w] = doms[w] - {x}
                    if not doms[w]:
                        return False
        return True

    def solve(doms: dict[int, set[int]], assigned: dict[int, int]) -> dict[int, int] | None:
        free = [u for u in doms if u not in assigned]
        if not free:
            return dict(assigned)
        u = min(free, key=lambda v: (len(doms[v]), -degree[v], v))
        for x in sorted(doms[u]):
            nd = dict(doms)
            nd[u] = {x}
            assigned[u] = x
            if propagate(u, x, nd, assigned):
                found = solve(nd, assigned)
                if found is not None:
                    return found
            del assigned[u]
        return None

    # seeded vertices are assigned up front
    assigned: dict[int, int] = {}
    doms = dict(domains)
    for u in sorted(seed):
        x = seed[u]
        assigned[u] = x
        if not propagate(u, x, doms, assigned):
            return None
    return solve(doms, assigned)


def _label_profile(s: Structure) -> dict:
    prof: dict = defaultdict(int)
    for e in s.edges:
        prof[e.label] += 1
    return prof


def find_isomorphism(x: Structure, y: Structure) -> dict[int, int] | None:
    """A label-preserving bijection ``x -> y`` fixing a and b, or None."""
    if len(x.vertices) != len(y.vertices) or len(x.edges) != len(y.edges):
        return None
    if _label_profile(x) != _label_profile(y):
        return None
    # an injective homomorphism between equal-size finite structures with equally
    # many edges is onto both vertices and edges, hence an isomorphism
    return find_homomorphism(x, y, injective=True)


def isomorphic_mod_shades(x: Structure, y: Structure) -> bool:
    """Isomorphic once the shade of every grid symbol is erased on both sides."""
    return find_isomorphism(x.erase_shades(), y.erase_shades()) is not None
