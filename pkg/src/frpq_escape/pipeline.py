"""Staged runs of the Crocodile strategies against the canonical fugitive.

The Crocodile plays ``S_{m+1}`` (Stage I, then ``m`` cycles) followed by
``S_layer^{m+1}``.  With no exit the fugitive ends with the staircase
``P_{m+1}`` and then the grid ``G_{m+1}``; with the exit taken at cycle ``k`` it
ends with ``P_k^$`` and ``G_k^$``.  Every stage boundary is compared with the
fixture builders, both up to isomorphism (shades ignored) and as named graphs
after naming the game's vertices by grid coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import LemmaShapeMismatch
from .fixtures import build_G, build_L, build_P, vname
from .game import LOST, CrocodileStrategy, GameConfig, PlayTranscript, play
from .homomorphism import isomorphic_mod_shades
from .policies import Canonical, ExitScript, grid_coordinates
from .reduction import S_START, reduce, s_k, s_layer
from .structure import Structure, named_edges
from .tiling import TilingInstance


@dataclass
class Checkpoint:
    label: str
    expected: str
    structure: Structure
    isomorphic: bool
    named_equal: bool
    missing: list[str] = field(default_factory=list)
    extra: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.isomorphic and self.named_equal

    def report(self) -> dict:
        return {
            "checkpoint": self.label,
            "expected": self.expected,
            "isomorphic_mod_shades": self.isomorphic,
            "named_equal": self.named_equal,
            "vertices": len(self.structure.vertices),
            "edges": len(self.structure.edges),
            "missing_edges": self.missing[:20],
            "extra_edges": self.extra[:20],
        }


@dataclass
class PipelineRun:
    structure: Structure
    transcript: PlayTranscript
    checkpoints: list[Checkpoint]
    m: int
    exit_at: int | None
    config: GameConfig
    fugitive: Canonical

    @property
    def expected_final(self) -> str:
        return f"G_{self.exit_at}^$" if self.exit_at else f"G_{self.m + 1}"

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checkpoints)


def name_by_coordinates(d: Structure, initial_path: tuple[int, ...]) -> Structure:
    """Name ``a, b, a', b'`` and every grid vertex ``v(i,j)`` (origin: the vertex after ``x``)."""
    names = {d.a: "a", d.b: "b", initial_path[1]: "a'", initial_path[-2]: "b'"}
    for v, (i, j) in grid_coordinates(d, initial_path[2]).items():
        names[v] = vname(i, j)
    return d.rename(names)


def _compare(label: str, expected_name: str, actual: Structure, expected: Structure) -> Checkpoint:
    iso = isomorphic_mod_shades(actual, expected)
    got = named_edges(actual.erase_shades())
    want = named_edges(expected.erase_shades())
    fmt = lambda es: sorted(f"{u}->{v} {lab}" for u, v, lab in es)
    return Checkpoint(label, expected_name, actual, iso, got == want, fmt(want - got), fmt(got - want))


def run_stage_pipeline(
    instance: TilingInstance | None,
    m: int,
    exits: ExitScript | int | None = None,
    oracle=None,
    order: str = "chase",
    seed: int = 0,
    check: bool = True,
    config: GameConfig | None = None,
) -> PipelineRun:
    """Play ``S_{m+1} ++ S_layer^{m+1}`` against the canonical fugitive and check every stage.

    ``exits`` is an :class:`ExitScript` or the cycle number ``k`` (``1 <= k <= m``).
    Raises :class:`LemmaShapeMismatch` on any deviation when ``check`` is set.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not isinstance(exits, ExitScript):
        exits = ExitScript(exits)
    if exits.at is not None and not 1 <= exits.at <= m:
        raise ValueError(f"exit cycle must lie in 1..{m}")
    if config is None:
        config = GameConfig(reduce(instance or TilingInstance(("black", "gray"), frozenset())))
    big = m + 1
    stage1, stage2 = len(S_START), len(s_k(big))
    layer_ends = {stage2 + len(s_layer(j)) - 1: j for j in range(1, big + 1)}
    seq = s_k(big) + s_layer(big)
    snaps: dict[int, Structure] = {}

    def grab(phase: int, item, d: Structure) -> None:
        if phase in (stage1 - 1, stage2 - 1) or phase in layer_ends:
            snaps[phase] = d

    fugitive = Canonical(oracle, exits)
    croc = CrocodileStrategy(seq, order, seed, True, f"S_{big}+S_layer({big})")
    t = play(config, fugitive, croc, on_phase_end=grab)
    path = t.initial_path
    k = exits.at

    def named(d: Structure) -> Structure:
        return name_by_coordinates(d, path)

    checkpoints: list[Checkpoint] = []
    if stage1 - 1 in snaps:
        checkpoints.append(_compare("stage I", "P_1", named(snaps[stage1 - 1]), build_P(1)))
    if stage2 - 1 in snaps:
        want = ("P_%d^$" % k, build_P(k, dollar_edges=True)) if k else (f"P_{big}", build_P(big))
        checkpoints.append(_compare("stage II", want[0], named(snaps[stage2 - 1]), want[1]))
    side = k or big
    for phase, j in sorted(layer_ends.items()):
        if phase not in snaps:
            continue
        jj = min(j, side)
        name = f"L_{{{side},{jj}}}" + ("^$" if k else "")
        checkpoints.append(_compare(f"layer {j}", name, named(snaps[phase]), build_L(side, jj, dollar_edges=bool(k))))
    final = named(t.final)
    checkpoints.append(_compare("final", f"G_{side}" + ("^$" if k else ""), final, build_G(side, dollar_edges=bool(k))))
    run = PipelineRun(final, t, checkpoints, m, k, config, fugitive)
    if check:
        problems = [c.report() for c in checkpoints if not c.ok]
        if t.outcome is None or t.outcome.kind == LOST or problems or len(snaps) < 2 + big:
            raise LemmaShapeMismatch(
                f"pipeline m={m} exit={k}: outcome {t.outcome}, {len(problems)} failing checkpoints",
                {"outcome": str(t.outcome), "failing": problems, "checkpoints_seen": len(snaps)},
            )
    return run
