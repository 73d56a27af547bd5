"""Command line entry points: reduce, play, verify, search, replay, export.

Exit codes: 0 success or Valid, 1 usage or input error, 2 Invalid / Fugitive lost /
no shading, 3 step budget exhausted, 4 stage-shape or replay mismatch (and policy faults).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .chase import validate_counterexample
from .errors import InvalidInstanceError, LemmaShapeMismatch
from .fixtures import (
    assemble_counterexample,
    build_G,
    build_L,
    build_P,
    cold_alpha_mirror,
)
from .game import BUDGET, FAULT, LOST, CrocodileStrategy, GameConfig, PlayTranscript, monitor_principles, play, replay
from .language import enumerate_words
from .pipeline import run_stage_pipeline
from .policies import Canonical, ExitScript, Lifting, RandomPolicy, Scripted
from .reduction import ReductionOutput, reduce, strategy_by_name
from .structure import Structure
from .symbols import Label
from .tiling import GridShading, TilingInstance, check_shading, enumerate_shadings_exists, search_shading

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_BUDGET, EXIT_MISMATCH = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _out_dir(args) -> Path | None:
    if not args.out:
        return None
    p = Path(args.out)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _emit(obj: dict) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _load_reduction(args) -> ReductionOutput:
    if getattr(args, "bundle", None):
        return ReductionOutput.from_json(_read_json(args.bundle))
    if getattr(args, "instance", None):
        return reduce(TilingInstance.from_json(_read_json(args.instance)))
    raise UsageError("need --bundle or --instance")


def _options(spec: str) -> tuple[str, dict[str, str]]:
    """``name:key=val,key=val`` -> (name, {key: val})."""
    name, _, rest = spec.partition(":")
    opts = {}
    for part in filter(None, rest.split(",")):
        k, _, v = part.partition("=")
        opts[k] = v
    return name, opts


def _fugitive(spec: str, red: ReductionOutput, args):
    name, opts = _options(spec)
    exits = ExitScript.parse(args.exit_script)
    shading = None
    if "shading" in opts:
        shading = GridShading.from_json(_read_json(opts["shading"]))
    if name == "canonical":
        return Canonical(shading, exits)
    if name == "random":
        return RandomPolicy(int(opts.get("seed", args.seed)))
    if name == "lifting":
        if "target" not in opts:
            raise UsageError("lifting needs target=<structure.json>")
        return Lifting(Structure.from_json(_read_json(opts["target"])))
    if name == "scripted":
        start = opts.get("start", "")
        group = start.rstrip("0123456789")
        if group not in ("good", "bad", "ugly", "start") or group == start:
            raise UsageError("scripted needs start=<bad|ugly|start><n> (n counts from 0)")
        pos = int(start[len(group):])
        lang = red.q_start if group == "start" else getattr(red, group)[pos]
        words, _ = enumerate_words(lang, 1)
        return Scripted(tuple(Label(s, "G") for s in words[0]), fallback=Canonical(shading, exits))
    raise UsageError(f"unknown fugitive {spec!r}")


def _schedule(spec: str | None, seed: int) -> tuple[str, int]:
    if not spec:
        return "chase", seed
    name, opts = _options(spec)
    if name not in ("chase", "random", "random-step"):
        raise UsageError(f"unknown schedule {spec!r}")
    return name, int(opts.get("seed", seed))


def cmd_reduce(args) -> int:
    inst = TilingInstance.from_json(_read_json(args.instance))
    red = reduce(inst)
    summary = red.summary()
    out = _out_dir(args)
    if out is not None:
        (out / "bundle.json").write_text(json.dumps(red.to_json(), sort_keys=True))
        lines = [f"# instance {inst.dumps()}"]
        for group, idx, lang in red.tagged():
            lines.append(f"{group}{idx}: {lang.n_states} states, {lang.count_words()} words, length <= {lang.maxlen}")
        lines += [f"bad{i}: {note}" for i, note in enumerate(red.bad_notes, 1)]
        (out / "languages.txt").write_text("\n".join(lines) + "\n")
    _emit(summary)
    return EXIT_OK


def cmd_play(args) -> int:
    red = _load_reduction(args)
    config = GameConfig(red, step_budget=args.budget)
    order, seed = _schedule(args.schedule, args.seed)
    out = _out_dir(args)
    if args.pipeline:
        try:
            run = run_stage_pipeline(None, args.pipeline, ExitScript.parse(args.exit_script), order=order, seed=seed, config=config)
        except LemmaShapeMismatch as exc:
            _emit({"status": "mismatch", "message": str(exc), "report": exc.report})
            return EXIT_MISMATCH
        t = run.transcript
        extra = {"checkpoints": [c.report() for c in run.checkpoints], "expected_final": run.expected_final}
    else:
        seq = tuple(strategy_by_name(args.strategy)) if args.strategy != "free" else (None,)
        fugitive = _fugitive(args.fugitive, red, args)
        croc = CrocodileStrategy(seq, order, seed, True, args.strategy)
        t = play(config, fugitive, croc)
        extra = {}
        if isinstance(fugitive, Lifting):
            extra["certified"] = fugitive.certified
    report = monitor_principles(t, config)
    if out is not None:
        (out / "transcript.tsv").write_text(t.to_tsv())
        (out / "final.json").write_text(t.final.dumps())
        (out / "final.dot").write_text(t.final.to_dot())
        (out / "run.json").write_text(json.dumps({"command": "play", "seed": seed, "args": vars(args)}, default=str, sort_keys=True))
    _emit(
        {
            "outcome": str(t.outcome),
            "steps": len(t.steps),
            "vertices": len(t.final.vertices),
            "edges": len(t.final.edges),
            "final_sha256": t.final.digest(),
            "principle_violations": len(report.violations),
            "seed": seed,
            **extra,
        }
    )
    kind = t.outcome.kind
    return {LOST: EXIT_INVALID, BUDGET: EXIT_BUDGET, FAULT: EXIT_MISMATCH}.get(kind, EXIT_OK)


def cmd_verify(args) -> int:
    red = _load_reduction(args)
    m = Structure.from_json(_read_json(args.structure))
    verdict = validate_counterexample(m, red.constraints(), red.q0)
    if args.format == "json":
        _emit(verdict.to_json())
    else:
        print(verdict)
    return EXIT_OK if verdict.valid else EXIT_INVALID


def cmd_search(args) -> int:
    inst = TilingInstance.from_json(_read_json(args.instance))
    s = search_shading(inst, args.k)
    if s is not None:
        report = check_shading(inst, s)
        _emit({"status": "found", "k": args.k, "proper": report.proper, "shading": s.to_json()})
        out = _out_dir(args)
        if out is not None:
            (out / f"shading_k{args.k}.json").write_text(json.dumps(s.to_json()))
        return EXIT_OK
    cert = {"status": "exhausted", "k": args.k, "search": "complete backtracking over a1,a2,b1,b2,b3"}
    try:
        cert["enumeration_agrees"] = not enumerate_shadings_exists(inst, args.k)
    except ValueError:
        cert["enumeration_agrees"] = None
    _emit(cert)
    return EXIT_INVALID


def cmd_replay(args) -> int:
    red = _load_reduction(args)
    t = PlayTranscript.from_tsv(Path(args.transcript).read_text())
    final = replay(t, GameConfig(red))
    digest = final.digest()
    ok = not t.stored_digest or t.stored_digest == digest
    _emit({"final_sha256": digest, "stored_sha256": t.stored_digest, "match": ok, "steps": len(t.steps)})
    return EXIT_OK if ok else EXIT_MISMATCH


def _fixture(args) -> Structure:
    name, opts = _options(args.fixture)
    m = int(opts.get("m", 1))
    if name in ("P", "P$"):
        return build_P(m, dollar_edges=name.endswith("$"))
    if name in ("G", "G$"):
        return build_G(m, dollar_edges=name.endswith("$"))
    if name in ("L", "L$"):
        return build_L(m, int(opts.get("k", 0)), dollar_edges=name.endswith("$"))
    if name == "mirror":
        return cold_alpha_mirror()
    if name == "counterexample":
        inst = TilingInstance.from_json(_read_json(args.instance))
        s = search_shading(inst, m)
        if s is None:
            raise UsageError(f"no proper shading of the {m}x{m} grid")
        return assemble_counterexample(inst, s, repair=opts.get("repair", "yes") != "no")
    raise UsageError(f"unknown fixture {args.fixture!r}")


def cmd_export(args) -> int:
    if args.fixture:
        s = _fixture(args)
    elif args.structure:
        s = Structure.from_json(_read_json(args.structure))
    else:
        raise UsageError("need --structure or --fixture")
    if args.erase_shades:
        s = s.erase_shades()
    text = s.to_dot(title=args.fixture or "structure") if args.format == "dot" else s.dumps() + "\n"
    out = _out_dir(args)
    if out is not None:
        (out / ("structure.dot" if args.format == "dot" else "structure.json")).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="frpq-escape", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("reduce", help="build the view languages and Q0 for a tiling instance")
    r.add_argument("--instance", required=True)
    r.add_argument("--out")
    r.set_defaults(func=cmd_reduce)

    g = sub.add_parser("play", help="play the Escape game")
    g.add_argument("--bundle")
    g.add_argument("--instance")
    g.add_argument("--strategy", default="S_start", help="S_start, S_k(3), S_3+S_layer(3), 1,2,15 or free")
    g.add_argument("--fugitive", default="canonical", help="canonical | random:seed=N | scripted:start=bad0 | lifting:target=F")
    g.add_argument("--exit-script", default=None, help="k=K: take the $ exit at cycle K")
    g.add_argument("--schedule", default=None, help="chase | random:seed=N | random-step:seed=N")
    g.add_argument("--pipeline", type=int, default=0, metavar="M", help="run the staged pipeline for m=M with stage shape checks")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--budget", type=int, default=10_000)
    g.add_argument("--out")
    g.set_defaults(func=cmd_play)

    v = sub.add_parser("verify", help="validate a counterexample structure")
    v.add_argument("--structure", required=True)
    v.add_argument("--bundle")
    v.add_argument("--instance")
    v.add_argument("--format", choices=("json", "text"), default="json")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="search a proper shading of the k x k grid")
    s.add_argument("--instance", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_search)

    y = sub.add_parser("replay", help="replay a TSV transcript and compare the final hash")
    y.add_argument("--transcript", required=True)
    y.add_argument("--bundle")
    y.add_argument("--instance")
    y.set_defaults(func=cmd_replay)

    e = sub.add_parser("export", help="write a structure or fixture as JSON or DOT")
    e.add_argument("--structure")
    e.add_argument("--fixture", help="P:m=2, G$:m=1, L:m=3,k=1, mirror, counterexample:m=1 (needs --instance)")
    e.add_argument("--instance")
    e.add_argument("--format", choices=("json", "dot"), default="dot")
    e.add_argument("--erase-shades", action="store_true")
    e.add_argument("--out")
    e.set_defaults(func=cmd_export)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, InvalidInstanceError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
