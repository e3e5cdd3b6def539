"""Command-line entry point: one subcommand per pipeline stage plus run-all.

Exit codes: 0 evaluation ran (regardless of scores), 2 config error,
3 missing stage inputs, 4 toolchain spawn failure.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import os
import sys

from skelgraft.config import PipelineConfig, load_config
from skelgraft.errors import ConfigError, MissingInputError, SpawnError
from skelgraft.grafting import assemble_whole_repo, graft, outcomes_to_json, plan_grafts
from skelgraft.harness import RepoReport, evaluate_plans, evaluate_whole_repo
from skelgraft.instrument import (
    CoverageMap,
    build_coverage,
    discover_test_ids,
    instrument_repo,
    run_traced_tests,
)
from skelgraft.report import aggregate, render
from skelgraft.skeletonize import is_test_path, skeletonize_repo
from skelgraft.structmap import StructuralMap, build_map
from skelgraft.syntax import StructuralModel, parse_repo, parse_repo_tolerant
from skelgraft.translate import (
    EchoSkeletonClient,
    ScriptedClient,
    TranslationTask,
    run_pipeline,
)

log = logging.getLogger("skelgraft")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_MISSING_INPUT = 3
EXIT_SPAWN = 4

STAGES = (
    "skeletonize", "map", "instrument", "trace", "graft",
    "evaluate", "translate", "report", "run-all",
)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config, {
            "parallelism": args.parallelism,
            "iterations": args.iterations,
            "run_root": args.run_root,
        })
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    run_dir = _resolve_run_dir(cfg, args)
    ctx = _Context(cfg, run_dir, args)
    if args.dry_run:
        print(ctx.describe(args.stage))
        return EXIT_OK
    if args.toolchain_check:
        return _toolchain_check(ctx)
    try:
        handler = _HANDLERS[args.stage]
        return handler(ctx)
    except MissingInputError as err:
        print(f"missing inputs for stage '{err.stage}':", file=sys.stderr)
        for item in err.missing:
            print(f"  - {item}", file=sys.stderr)
        return EXIT_MISSING_INPUT
    except SpawnError as err:
        print(f"toolchain spawn failure: {err}", file=sys.stderr)
        return EXIT_SPAWN
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skelgraft", description=__doc__)
    parser.add_argument("stage", choices=STAGES)
    parser.add_argument("--config", required=True, help="pipeline config YAML")
    parser.add_argument("--run-dir", default="", help="explicit run directory")
    parser.add_argument("--run-root", default="", help="override runs root")
    parser.add_argument("--parallelism", type=int, default=0)
    parser.add_argument("--iterations", type=int, default=0)
    parser.add_argument("--no-skeleton", action="store_true",
                        help="ablation: translation prompts without the skeleton")
    parser.add_argument("--whole-repo", action="store_true",
                        help="also run the binary whole-repo evaluation")
    parser.add_argument("--recorded-traces", default="",
                        help="directory of pre-recorded per-test trace files")
    parser.add_argument("--trace-mode", choices=("per_test", "marker"), default="per_test")
    parser.add_argument("--translation", default="",
                        help="translated repo dir for graft/evaluate (overrides config)")
    parser.add_argument("--toolchain-check", action="store_true",
                        help="verify build/test commands are runnable, then exit")
    parser.add_argument("--dry-run", action="store_true", help="print the resolved plan")
    return parser


def _resolve_run_dir(cfg: PipelineConfig, args) -> str:
    if args.run_dir:
        return os.path.abspath(args.run_dir)
    root = cfg.resolve(cfg.run_root)
    os.makedirs(root, exist_ok=True)
    stamp = _dt.datetime.now(_dt.timezone.utc).strftime("%Y%m%dT%H%M%S")
    candidate = os.path.join(root, stamp)
    suffix = 0
    while os.path.exists(candidate):
        suffix += 1
        candidate = os.path.join(root, f"{stamp}-{suffix}")
    os.makedirs(candidate)
    with open(os.path.join(root, "latest"), "w", encoding="utf-8") as fh:
        fh.write(os.path.basename(candidate) + "\n")
    return candidate


class _Context:
    def __init__(self, cfg: PipelineConfig, run_dir: str, args):
        self.cfg = cfg
        self.run_dir = run_dir
        self.args = args
        self._source_model: StructuralModel | None = None
        self._skeleton_model: StructuralModel | None = None

    # -- paths

    def stage_dir(self, stage: str) -> str:
        path = os.path.join(self.run_dir, stage)
        os.makedirs(path, exist_ok=True)
        return path

    @property
    def source_root(self) -> str:
        return self.cfg.resolve(self.cfg.source.root)

    @property
    def skeleton_root(self) -> str:
        return self.cfg.resolve(self.cfg.target.root)

    def translation_root(self) -> str:
        if self.args.translation:
            return os.path.abspath(self.args.translation)
        if self.cfg.translation_root:
            return self.cfg.resolve(self.cfg.translation_root)
        return ""

    # -- models

    def source_model(self) -> StructuralModel:
        if self._source_model is None:
            self._source_model = parse_repo(self.source_root, self.cfg.source.profile)
        return self._source_model

    def skeleton_model(self) -> StructuralModel:
        if self._skeleton_model is None:
            self._skeleton_model = parse_repo(self.skeleton_root, self.cfg.target.profile)
        return self._skeleton_model

    def nontest_view(self, model: StructuralModel, globs: tuple[str, ...]) -> StructuralModel:
        return StructuralModel(
            units=model.units,
            classes=model.classes,
            functions=[f for f in model.functions if not is_test_path(f.unit_path, globs)],
            fields_decls=model.fields_decls,
        )

    # -- artifact discovery

    def require(self, stage: str, paths: dict[str, str]) -> None:
        missing = [f"{name}: {path}" for name, path in paths.items() if not os.path.exists(path)]
        if missing:
            raise MissingInputError(stage, missing)

    def coverage_path(self) -> str:
        return os.path.join(self.run_dir, "trace", "coverage.json")

    def map_path(self) -> str:
        return os.path.join(self.run_dir, "map", "structural-map.json")

    def describe(self, stage: str) -> str:
        lines = [
            f"stage: {stage}",
            f"run dir: {self.run_dir}",
            f"repo: {self.cfg.repo_id}",
            f"source: {self.source_root} [{self.cfg.source.profile}]",
            f"skeleton: {self.skeleton_root} [{self.cfg.target.profile}]",
            f"translation: {self.translation_root() or '<client-driven>'}",
            f"client: {self.cfg.client.kind}",
            f"iterations: {self.cfg.max_iterations}  parallelism: {self.cfg.parallelism}",
            f"ablation: {self.args.no_skeleton}  whole-repo: {self.args.whole_repo}",
        ]
        return "\n".join(lines)


def _toolchain_check(ctx: _Context) -> int:
    """Verify the configured build/test binaries can be spawned at all."""
    import shutil as _shutil

    for label, side in (("source", ctx.cfg.source), ("target", ctx.cfg.target)):
        binary = side.toolchain.build_cmd.split("{", 1)[0].strip().split()
        if not binary:
            print(f"{label}: empty build command", file=sys.stderr)
            return EXIT_CONFIG
        if _shutil.which(binary[0]) is None:
            print(f"{label}: cannot spawn {binary[0]!r}", file=sys.stderr)
            return EXIT_SPAWN
        print(f"{label}: ok ({binary[0]})")
    return EXIT_OK


# -- stage handlers --------------------------------------------------------------


def _stage_skeletonize(ctx: _Context) -> int:
    out = ctx.stage_dir("skeletonize")
    skeleton_dir = os.path.join(out, "skeleton")
    manifest = skeletonize_repo(
        ctx.source_root, skeleton_dir, ctx.cfg.source.profile,
        test_globs=ctx.cfg.source.test_globs, model=ctx.source_model(),
    )
    with open(os.path.join(out, "manifest.json"), "w", encoding="utf-8") as fh:
        fh.write(manifest.to_json())
    print(f"skeleton: {skeleton_dir} ({len(manifest.entries)} bodies replaced)")
    return EXIT_OK


def _stage_map(ctx: _Context) -> int:
    out = ctx.stage_dir("map")
    smap = build_map(
        ctx.nontest_view(ctx.source_model(), ctx.cfg.source.test_globs),
        ctx.nontest_view(ctx.skeleton_model(), ctx.cfg.target.test_globs),
        ctx.cfg.rules,
    )
    with open(os.path.join(out, "structural-map.json"), "w", encoding="utf-8") as fh:
        fh.write(smap.to_json())
    print(
        f"map: {len(smap.pairs)} pairs, {len(smap.unmatched_source)} unmatched source, "
        f"{len(smap.unmatched_target)} unmatched target"
    )
    return EXIT_OK


def _stage_instrument(ctx: _Context) -> int:
    out = ctx.stage_dir("instrument")
    repo_dir = os.path.join(out, "repo")
    keys = instrument_repo(
        ctx.source_root, repo_dir, ctx.cfg.source.profile,
        ctx.cfg.source.test_globs, model=ctx.source_model(),
    )
    print(f"instrumented {len(keys)} functions under {repo_dir}")
    return EXIT_OK


def _stage_trace(ctx: _Context) -> int:
    out = ctx.stage_dir("trace")
    model = ctx.source_model()
    test_ids = discover_test_ids(model, ctx.cfg.source.profile, ctx.cfg.source.test_globs)
    if ctx.args.recorded_traces:
        recorded = os.path.abspath(ctx.args.recorded_traces)
        ctx.require("trace", {"recorded traces dir": recorded})
        trace_files = {
            t: os.path.join(recorded, f"{t}.trace")
            for t in test_ids
            if os.path.isfile(os.path.join(recorded, f"{t}.trace"))
        }
        cov = build_coverage(trace_files=trace_files, model=ctx.nontest_view(model, ctx.cfg.source.test_globs))
    else:
        instr_dir = os.path.join(ctx.run_dir, "instrument", "repo")
        ctx.require("trace", {"instrumented repo": instr_dir})
        tc = ctx.cfg.source.toolchain
        runs = run_traced_tests(
            instr_dir, test_ids, tc.build_cmd, tc.test_cmd,
            trace_dir=os.path.join(out, "traces"),
            timeout_s=tc.timeout_s, mode=ctx.args.trace_mode, env=tc.env,
        )
        if ctx.args.trace_mode == "marker":
            cov = build_coverage(marked_stream=runs[0].trace_path,
                                 model=ctx.nontest_view(model, ctx.cfg.source.test_globs))
        else:
            cov = build_coverage(
                trace_files={r.test_id: r.trace_path for r in runs},
                model=ctx.nontest_view(model, ctx.cfg.source.test_globs),
            )
    with open(os.path.join(out, "coverage.json"), "w", encoding="utf-8") as fh:
        fh.write(cov.to_json())
    print(f"coverage: {len(cov.entries)} tests")
    return EXIT_OK


def _load_coverage(ctx: _Context, stage: str) -> CoverageMap:
    path = ctx.coverage_path()
    ctx.require(stage, {"coverage": path})
    with open(path, encoding="utf-8") as fh:
        return CoverageMap.from_json(fh.read())


def _load_map(ctx: _Context, stage: str) -> StructuralMap:
    path = ctx.map_path()
    ctx.require(stage, {"structural map": path})
    with open(path, encoding="utf-8") as fh:
        return StructuralMap.from_json(fh.read())


def _graft_all(ctx: _Context, translation_dir: str, workdir_root: str):
    cov = _load_coverage(ctx, "graft")
    smap = _load_map(ctx, "graft")
    translated_model, parse_failures = parse_repo_tolerant(
        translation_dir, ctx.cfg.target.profile)
    for path, err in parse_failures.items():
        log.warning("translated unit %s does not parse: %s", path, err.message)
    plans = plan_grafts(cov, smap, ctx.cfg.rules, workdir_root=workdir_root)
    items = [
        (
            plan,
            graft(plan, ctx.skeleton_root, ctx.skeleton_model(), translated_model,
                  test_globs=ctx.cfg.target.test_globs),
        )
        for plan in plans
    ]
    return items, translated_model


def _stage_graft(ctx: _Context) -> int:
    translation = ctx.translation_root()
    if not translation:
        raise MissingInputError("graft", ["translation dir (config translation_root or --translation)"])
    ctx.require("graft", {"translation": translation})
    out = ctx.stage_dir("graft")
    items, _ = _graft_all(ctx, translation, workdir_root=os.path.join(out, "work"))
    with open(os.path.join(out, "outcomes.json"), "w", encoding="utf-8") as fh:
        fh.write(outcomes_to_json([o for _, o in items]))
    ok = sum(1 for _, o in items if o.ok)
    print(f"grafted {ok}/{len(items)} plans cleanly under {out}")
    return EXIT_OK


def _stage_evaluate(ctx: _Context) -> int:
    translation = ctx.translation_root()
    if not translation:
        raise MissingInputError("evaluate", ["translation dir (config translation_root or --translation)"])
    ctx.require("evaluate", {"translation": translation})
    out = ctx.stage_dir("evaluate")
    items, translated_model = _graft_all(ctx, translation, os.path.join(out, "work"))
    report = evaluate_plans(ctx.cfg.repo_id, 1, items, ctx.cfg.target.toolchain)
    with open(os.path.join(out, "repo-report.json"), "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
    print(f"build_rate={float(report.build_rate):.4f} pass_rate={float(report.pass_rate):.4f}")
    if ctx.args.whole_repo:
        whole_dir = os.path.join(out, "whole-repo")
        assemble_whole_repo(ctx.skeleton_root, ctx.skeleton_model(), translated_model,
                            whole_dir, test_globs=ctx.cfg.target.test_globs)
        verdict = evaluate_whole_repo(whole_dir, ctx.cfg.target.toolchain)
        with open(os.path.join(out, "whole-repo.json"), "w", encoding="utf-8") as fh:
            json.dump({"repo_id": ctx.cfg.repo_id, "verdict": verdict}, fh, indent=2)
            fh.write("\n")
        print(f"whole-repo verdict: {verdict}")
    return EXIT_OK


def _make_client(ctx: _Context):
    kind = ctx.cfg.client.kind
    if kind == "echo-skeleton":
        return EchoSkeletonClient()
    if kind == "scripted-dir":
        src_dir = ctx.cfg.resolve(ctx.cfg.client.translation_dir)
        responses = {}
        for fn in ctx.nontest_view(ctx.source_model(), ctx.cfg.source.test_globs).functions:
            unit_path = fn.unit_path
            if unit_path in responses:
                continue
            mapped = ctx.cfg.rules.map_path(unit_path)
            candidate = os.path.join(src_dir, mapped)
            if os.path.isfile(candidate):
                with open(candidate, encoding="utf-8") as fh:
                    responses[unit_path] = fh.read()
        return ScriptedClient(responses)
    if kind == "http":
        from skelgraft.translate import HttpLLMClient

        return HttpLLMClient(
            endpoint=ctx.cfg.client.endpoint,
            model=ctx.cfg.client.model,
            api_key_env=ctx.cfg.client.api_key_env,
            timeout_s=ctx.cfg.client.timeout_s,
        )
    raise ConfigError("translate stage needs a client (scripted-dir, echo-skeleton, or http)")


def _stage_translate(ctx: _Context) -> int:
    cov = _load_coverage(ctx, "translate")
    out = ctx.stage_dir("translate")
    task = TranslationTask(
        repo_id=ctx.cfg.repo_id,
        source_root=ctx.source_root,
        source_profile=ctx.cfg.source.profile,
        source_test_globs=ctx.cfg.source.test_globs,
        skeleton_root=ctx.skeleton_root,
        target_profile=ctx.cfg.target.profile,
        target_test_globs=ctx.cfg.target.test_globs,
        rules=ctx.cfg.rules,
        coverage=cov,
        toolchain=ctx.cfg.target.toolchain,
        run_dir=out,
        params={"temperature": ctx.cfg.client.temperature,
                "max_tokens": ctx.cfg.client.max_tokens,
                "model": ctx.cfg.client.model},
    )
    results = run_pipeline(task, _make_client(ctx), ctx.cfg.max_iterations,
                           ablation=ctx.args.no_skeleton)
    last = results[-1][1]
    print(
        f"{len(results)} iteration(s); final build_rate={float(last.build_rate):.4f} "
        f"pass_rate={float(last.pass_rate):.4f}"
    )
    return EXIT_OK


def _stage_report(ctx: _Context) -> int:
    reports = []
    candidates = []
    eval_report = os.path.join(ctx.run_dir, "evaluate", "repo-report.json")
    if os.path.isfile(eval_report):
        candidates.append(eval_report)
    translate_dir = os.path.join(ctx.run_dir, "translate")
    if os.path.isdir(translate_dir):
        for name in sorted(os.listdir(translate_dir)):
            path = os.path.join(translate_dir, name, "repo-report.json")
            if os.path.isfile(path):
                candidates.append(path)
    if not candidates:
        raise MissingInputError("report", ["any repo-report.json under evaluate/ or translate/"])
    for path in candidates:
        with open(path, encoding="utf-8") as fh:
            reports.append(RepoReport.from_json(fh.read()))
    whole = {}
    whole_path = os.path.join(ctx.run_dir, "evaluate", "whole-repo.json")
    if os.path.isfile(whole_path):
        with open(whole_path, encoding="utf-8") as fh:
            data = json.load(fh)
        whole[data["repo_id"]] = data["verdict"]
    bench = aggregate(reports, whole_repo_verdicts=whole or None)
    out = ctx.stage_dir("report")
    with open(os.path.join(out, "bench-report.json"), "w", encoding="utf-8") as fh:
        fh.write(render(bench, "json"))
    with open(os.path.join(out, "bench-report.md"), "w", encoding="utf-8") as fh:
        fh.write(render(bench, "markdown"))
    print(f"bench report: {out}/bench-report.{{json,md}} ({len(reports)} repo-reports)")
    return EXIT_OK


def _stage_run_all(ctx: _Context) -> int:
    _stage_skeletonize(ctx)
    _stage_map(ctx)
    if ctx.args.recorded_traces:
        _stage_trace(ctx)
    else:
        _stage_instrument(ctx)
        _stage_trace(ctx)
    if ctx.cfg.client.kind != "none":
        _stage_translate(ctx)
        if ctx.args.whole_repo:
            _stage_whole_from_translation(ctx)
    else:
        _stage_graft(ctx)
        _stage_evaluate(ctx)
    _stage_report(ctx)
    return EXIT_OK


def _stage_whole_from_translation(ctx: _Context) -> int:
    """Binary evaluation over the last translate iteration's output."""
    translate_dir = os.path.join(ctx.run_dir, "translate")
    iters = sorted(
        (name for name in os.listdir(translate_dir) if name.startswith("iter-")),
        key=lambda n: int(n.split("-")[1]),
    ) if os.path.isdir(translate_dir) else []
    if not iters:
        raise MissingInputError("whole-repo", ["translate/iter-*/translation"])
    translation = os.path.join(translate_dir, iters[-1], "translation")
    out = ctx.stage_dir("evaluate")
    whole_dir = os.path.join(out, "whole-repo")
    translated_model = parse_repo(translation, ctx.cfg.target.profile)
    assemble_whole_repo(ctx.skeleton_root, ctx.skeleton_model(), translated_model,
                        whole_dir, test_globs=ctx.cfg.target.test_globs)
    verdict = evaluate_whole_repo(whole_dir, ctx.cfg.target.toolchain)
    with open(os.path.join(out, "whole-repo.json"), "w", encoding="utf-8") as fh:
        json.dump({"repo_id": ctx.cfg.repo_id, "verdict": verdict}, fh, indent=2)
        fh.write("\n")
    print(f"whole-repo verdict: {verdict}")
    return EXIT_OK


_HANDLERS = {
    "skeletonize": _stage_skeletonize,
    "map": _stage_map,
    "instrument": _stage_instrument,
    "trace": _stage_trace,
    "graft": _stage_graft,
    "evaluate": _stage_evaluate,
    "translate": _stage_translate,
    "report": _stage_report,
    "run-all": _stage_run_all,
}


if __name__ == "__main__":
    sys.exit(main())
