"""Per-test grafting: copy translated bodies into the compilable skeleton.

The skeleton's signature line is authoritative; a translated function whose
signature disagrees (beyond the naming-convention case difference) is
recorded as signature_mismatch and not grafted. Unit test files and build
config always come from the skeleton unchanged.
"""

from __future__ import annotations

import json
import os
import shutil
from dataclasses import dataclass, field

from skelgraft.instrument import CoverageMap
from skelgraft.skeletonize import is_test_path
from skelgraft.structmap import RenameRules, StructuralMap, map_coverage
from skelgraft.syntax import (
    FunctionDecl,
    FunctionKey,
    StructuralModel,
    render_key,
    splice,
)
from skelgraft.syntax.model import Span

MISSING_IN_TRANSLATION = "missing_in_translation"
SIGNATURE_MISMATCH = "signature_mismatch"
PARSE_ERROR = "parse_error"


@dataclass
class GraftPlan:
    test_id: str  # source-side test id
    target_test_id: str  # test id to run in the target project
    target_keys: frozenset[FunctionKey]
    missing: frozenset[FunctionKey]  # source keys without a mapping
    workdir: str = ""


@dataclass
class GraftFailure:
    key: FunctionKey
    reason: str  # missing_in_translation | signature_mismatch | parse_error
    detail: str = ""


@dataclass
class GraftOutcome:
    test_id: str
    status: str  # grafted | graft_failed
    failures: list[GraftFailure] = field(default_factory=list)
    grafted_keys: list[FunctionKey] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == "grafted"

    def to_dict(self) -> dict:
        return {
            "test_id": self.test_id,
            "status": self.status,
            "grafted": sorted(render_key(k) for k in self.grafted_keys),
            "failures": [
                {"key": render_key(f.key), "reason": f.reason, "detail": f.detail}
                for f in sorted(self.failures, key=lambda f: render_key(f.key))
            ],
        }


def outcomes_to_json(outcomes: list[GraftOutcome]) -> str:
    return json.dumps(
        [o.to_dict() for o in sorted(outcomes, key=lambda o: o.test_id)], indent=2
    ) + "\n"


def map_test_id(test_id: str, rules: RenameRules) -> str:
    cls, sep, method = test_id.rpartition(".")
    if not sep:
        return rules.map_method_name(test_id)
    return f"{cls}.{rules.map_method_name(method)}"


def plan_grafts(
    coverage: CoverageMap,
    smap: StructuralMap,
    rules: RenameRules,
    workdir_root: str = "",
) -> list[GraftPlan]:
    """One plan per test: mapped coverage plus carried-through missing keys."""
    plans = []
    for test_id in sorted(coverage.entries):
        targets, missing = map_coverage(coverage.entries[test_id], smap)
        plans.append(
            GraftPlan(
                test_id=test_id,
                target_test_id=map_test_id(test_id, rules),
                target_keys=frozenset(targets),
                missing=frozenset(missing),
                workdir=os.path.join(workdir_root, test_id) if workdir_root else "",
            )
        )
    return plans


def _simple(type_name: str) -> str:
    base = type_name.split("<", 1)[0]
    return base.rsplit(".", 1)[-1].lower()


def _signatures_compatible(skeleton_fn: FunctionDecl, translated_fn: FunctionDecl) -> bool:
    if skeleton_fn.arity != translated_fn.arity:
        return False
    for sp, tp in zip(skeleton_fn.param_types, translated_fn.param_types):
        if _simple(sp) != _simple(tp):
            return False
    if skeleton_fn.kind != translated_fn.kind:
        return False
    if skeleton_fn.kind == "method" and _simple(skeleton_fn.return_type) != _simple(
        translated_fn.return_type
    ):
        return False
    return True


def _translated_candidates(
    translated: StructuralModel, key: FunctionKey
) -> list[FunctionDecl]:
    """Locate translated declarations for a key, tolerating name-case drift only."""
    found = [f for f in translated.functions if f.key == key]
    if found:
        return found
    if key.name and not key.name.startswith("<"):
        flipped = key.name[0].lower() + key.name[1:]
        if flipped != key.name:
            alt = FunctionKey(key.unit_path, key.owner_class, flipped, key.arity)
            return [f for f in translated.functions if f.key == alt]
    return []


def _body_replacement(
    skeleton_fn: FunctionDecl,
    translated_fn: FunctionDecl,
    translated_model: StructuralModel,
) -> bytes:
    unit = translated_model.unit(translated_fn.unit_path)
    body = translated_fn.body_span.slice(unit.text)
    if translated_fn.body_style == "expression" and skeleton_fn.body_style == "block":
        expr = body.strip()
        if skeleton_fn.return_type in ("void", "ctor", "static-init"):
            return b"\n        " + expr + b";\n    "
        return b"\n        return " + expr + b";\n    "
    return body


def graft(
    plan: GraftPlan,
    skeleton_dir: str,
    skeleton_model: StructuralModel,
    translated_model: StructuralModel,
    workdir: str | None = None,
    test_globs: tuple[str, ...] = (),
) -> GraftOutcome:
    """Materialize a per-test workdir: skeleton copy + translated bodies.

    Only per-key problems are recorded in the outcome; the workdir is
    always produced (stubbed bodies may still build) so the harness can
    distinguish "built despite missing graft" from clean grafts.
    """
    workdir = workdir or plan.workdir
    if not workdir:
        raise ValueError("graft needs a workdir")
    if os.path.isdir(workdir):
        shutil.rmtree(workdir)
    shutil.copytree(skeleton_dir, workdir)

    outcome = GraftOutcome(test_id=plan.test_id, status="grafted")
    for src_key in sorted(plan.missing, key=render_key):
        outcome.failures.append(GraftFailure(src_key, MISSING_IN_TRANSLATION, "unmapped source key"))

    edits_by_unit: dict[str, list[tuple[Span, bytes]]] = {}
    for key in sorted(plan.target_keys, key=render_key):
        if test_globs and is_test_path(key.unit_path, test_globs):
            continue  # tests are never graft targets
        skeleton_fns = [f for f in skeleton_model.functions if f.key == key]
        if not skeleton_fns:
            outcome.failures.append(GraftFailure(key, MISSING_IN_TRANSLATION, "not in skeleton"))
            continue
        candidates = _translated_candidates(translated_model, key)
        key_ok = True
        for skeleton_fn in skeleton_fns:
            if skeleton_fn.body_span is None:
                continue  # bodyless (interface) needs no graft
            matched = [
                c for c in candidates
                if c.body_span is not None and _signatures_compatible(skeleton_fn, c)
            ]
            if not matched:
                if candidates:
                    sample = candidates[0]
                    outcome.failures.append(
                        GraftFailure(
                            key,
                            SIGNATURE_MISMATCH,
                            f"skeleton({', '.join(skeleton_fn.param_types)}) vs "
                            f"translated({', '.join(sample.param_types)})",
                        )
                    )
                else:
                    outcome.failures.append(GraftFailure(key, MISSING_IN_TRANSLATION))
                key_ok = False
                continue
            translated_fn = matched[0]
            replacement = _body_replacement(skeleton_fn, translated_fn, translated_model)
            edits_by_unit.setdefault(key.unit_path, []).append(
                (skeleton_fn.body_span, replacement)
            )
        if key_ok:
            outcome.grafted_keys.append(key)

    for unit_path, edits in edits_by_unit.items():
        skeleton_unit = skeleton_model.unit(unit_path)
        new_text = splice(skeleton_unit.text, edits)
        with open(os.path.join(workdir, unit_path), "wb") as fh:
            fh.write(new_text)

    if outcome.failures:
        outcome.status = "graft_failed"
    return outcome


def assemble_whole_repo(
    skeleton_dir: str,
    skeleton_model: StructuralModel,
    translated_model: StructuralModel,
    workdir: str,
    test_globs: tuple[str, ...] = (),
) -> GraftOutcome:
    """Graft every skeleton function at once (binary whole-repo mode)."""
    all_keys = frozenset(
        fn.key
        for fn in skeleton_model.functions
        if fn.body_span is not None
        and not (test_globs and is_test_path(fn.unit_path, test_globs))
    )
    plan = GraftPlan(
        test_id="<whole-repo>",
        target_test_id="*",
        target_keys=all_keys,
        missing=frozenset(),
        workdir=workdir,
    )
    return graft(plan, skeleton_dir, skeleton_model, translated_model, workdir, test_globs)
