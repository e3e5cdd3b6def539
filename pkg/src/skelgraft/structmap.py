"""Source-to-target function correspondence with rename rules.

Builds the bijection between source-repo functions and target-skeleton
functions so coverage computed on the source side can be turned into graft
sets on the target side. Unmatched entries are reported, never dropped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from skelgraft.errors import AmbiguousMatch
from skelgraft.syntax import (
    CTOR_NAME,
    FunctionDecl,
    FunctionKey,
    StructuralModel,
    parse_key,
    render_key,
)

# RenameRule.kind values (rules are deterministic and validated injective
# over the corpus at map-build time).
METHOD_PASCAL_CASE = "method_pascal_case"
CLASS_IDENTITY = "class_identity"
PATH_EXTENSION_SWAP = "path_extension_swap"
CUSTOM_PAIR = "custom_pair"


@dataclass(frozen=True)
class RenameRule:
    kind: str
    detail: dict = field(default_factory=dict)


@dataclass(frozen=True)
class RenameRules:
    """Compiled rule set applied when deriving target keys from source keys."""

    source_ext: str = ".java"
    target_ext: str = ".cs"
    path_prefix_map: tuple[tuple[str, str], ...] = ()
    method_case: str = "pascal"  # pascal | identity
    type_name_map: tuple[tuple[str, str], ...] = ()
    custom_pairs: tuple[tuple[str, str], ...] = ()  # rendered source key -> target key

    @classmethod
    def from_rule_list(cls, rules: list[RenameRule]) -> "RenameRules":
        kwargs: dict = {}
        custom: list[tuple[str, str]] = []
        for rule in rules:
            if rule.kind == PATH_EXTENSION_SWAP:
                kwargs["source_ext"] = rule.detail.get("source_ext", ".java")
                kwargs["target_ext"] = rule.detail.get("target_ext", ".cs")
                kwargs["path_prefix_map"] = tuple(
                    sorted(rule.detail.get("prefix_map", {}).items())
                )
            elif rule.kind == METHOD_PASCAL_CASE:
                kwargs["method_case"] = "pascal"
                kwargs["type_name_map"] = tuple(
                    sorted(rule.detail.get("type_name_map", {}).items())
                )
            elif rule.kind == CLASS_IDENTITY:
                pass  # class names are identity by construction
            elif rule.kind == CUSTOM_PAIR:
                custom.append((rule.detail["source"], rule.detail["target"]))
        if custom:
            kwargs["custom_pairs"] = tuple(custom)
        return cls(**kwargs)

    def map_path(self, path: str) -> str:
        mapped = path
        for prefix, repl in sorted(self.path_prefix_map, key=lambda p: -len(p[0])):
            if mapped.startswith(prefix):
                mapped = repl + mapped[len(prefix) :]
                break
        if mapped.endswith(self.source_ext):
            mapped = mapped[: -len(self.source_ext)] + self.target_ext
        return mapped

    def unmap_path(self, path: str) -> str:
        mapped = path
        if mapped.endswith(self.target_ext):
            mapped = mapped[: -len(self.target_ext)] + self.source_ext
        for prefix, repl in sorted(self.path_prefix_map, key=lambda p: -len(p[1])):
            if mapped.startswith(repl):
                mapped = prefix + mapped[len(repl) :]
                break
        return mapped

    def map_method_name(self, name: str) -> str:
        if name == CTOR_NAME or name.startswith("<clinit:"):
            return name
        if self.method_case == "pascal" and name:
            return name[0].upper() + name[1:]
        return name

    def unmap_method_name(self, name: str) -> str:
        if name == CTOR_NAME or name.startswith("<clinit:"):
            return name
        if self.method_case == "pascal" and name:
            return name[0].lower() + name[1:]
        return name

    def map_type_name(self, type_name: str) -> str:
        for src, tgt in self.type_name_map:
            if type_name == src:
                return tgt
        return type_name

    def map_key(self, key: FunctionKey) -> FunctionKey:
        for src, tgt in self.custom_pairs:
            if render_key(key) == src:
                return parse_key(tgt)
        return FunctionKey(
            unit_path=self.map_path(key.unit_path),
            owner_class=key.owner_class,
            name=self.map_method_name(key.name),
            arity=key.arity,
        )


DEFAULT_RULES = RenameRules(
    path_prefix_map=(("src/main/java/", "src/"), ("src/test/java/", "tests/")),
    type_name_map=(("Integer", "int"), ("String", "string"), ("boolean", "bool"), ("Object", "object")),
)


@dataclass
class StructuralMap:
    """Bijection between source and target function keys plus leftovers."""

    pairs: list[tuple[FunctionKey, FunctionKey]] = field(default_factory=list)
    unmatched_source: list[FunctionKey] = field(default_factory=list)
    unmatched_target: list[FunctionKey] = field(default_factory=list)

    def target_for(self, source: FunctionKey) -> FunctionKey | None:
        for s, t in self.pairs:
            if s == source:
                return t
        return None

    def source_for(self, target: FunctionKey) -> FunctionKey | None:
        for s, t in self.pairs:
            if t == target:
                return s
        return None

    def to_json(self) -> str:
        return json.dumps(
            {
                "version": 1,
                "pairs": [
                    {"source": render_key(s), "target": render_key(t)}
                    for s, t in sorted(self.pairs, key=lambda p: render_key(p[0]))
                ],
                "unmatched_source": sorted(render_key(k) for k in self.unmatched_source),
                "unmatched_target": sorted(render_key(k) for k in self.unmatched_target),
            },
            indent=2,
        ) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "StructuralMap":
        data = json.loads(text)
        return cls(
            pairs=[(parse_key(p["source"]), parse_key(p["target"])) for p in data["pairs"]],
            unmatched_source=[parse_key(k) for k in data["unmatched_source"]],
            unmatched_target=[parse_key(k) for k in data["unmatched_target"]],
        )


def _simple_type(name: str) -> str:
    base = name.split("<", 1)[0].strip()
    return base.rsplit(".", 1)[-1] if "." in base else base


def _signature_matches(src: FunctionDecl, tgt: FunctionDecl, rules: RenameRules) -> bool:
    if src.arity != tgt.arity:
        return False
    for sp, tp in zip(src.param_types, tgt.param_types):
        mapped = rules.map_type_name(_simple_type(sp))
        if mapped.lower() != _simple_type(tp).lower():
            return False
    return True


def build_map(
    src: StructuralModel,
    tgt: StructuralModel,
    rules: RenameRules = DEFAULT_RULES,
) -> StructuralMap:
    """Match each source function to at most one target function.

    Matching key is (mapped path, class path, mapped name, arity); arity
    ties between same-key overloads are broken on positional param-type
    simple names after the configured type-name translation, and the whole
    overload set must align one-to-one. A remaining tie raises
    AmbiguousMatch, as do two distinct source keys claiming one target key
    (a non-injective rename).
    """
    result = StructuralMap()
    claimed: dict[FunctionKey, FunctionKey] = {}
    src_by_key: dict[FunctionKey, list[FunctionDecl]] = {}
    for fn in src.functions:
        src_by_key.setdefault(fn.key, []).append(fn)
    tgt_by_key: dict[FunctionKey, list[FunctionDecl]] = {}
    for fn in tgt.functions:
        tgt_by_key.setdefault(fn.key, []).append(fn)

    for key in sorted(src_by_key, key=render_key):
        src_decls = src_by_key[key]
        mapped = rules.map_key(key)
        candidates = tgt_by_key.get(mapped, [])
        if not candidates:
            result.unmatched_source.append(key)
            continue
        if len(src_decls) > 1 or len(candidates) > 1:
            taken: list[int] = []
            for fn in src_decls:
                picks = [
                    i for i, c in enumerate(candidates)
                    if i not in taken and _signature_matches(fn, c, rules)
                ]
                if len(picks) != 1:
                    raise AmbiguousMatch(fn.key, [c.key for c in candidates])
                taken.append(picks[0])
            if len(taken) != len(candidates):
                raise AmbiguousMatch(key, [c.key for c in candidates])
        if mapped in claimed and claimed[mapped] != key:
            raise AmbiguousMatch(key, [mapped])
        claimed[mapped] = key
        result.pairs.append((key, mapped))

    matched_targets = set(claimed)
    seen_unmatched: set[FunctionKey] = set()
    for fn in tgt.functions:
        if fn.key not in matched_targets and fn.key not in seen_unmatched:
            seen_unmatched.add(fn.key)
            result.unmatched_target.append(fn.key)
    return result


def map_coverage(
    cov: frozenset[FunctionKey] | set[FunctionKey],
    smap: StructuralMap,
) -> tuple[set[FunctionKey], set[FunctionKey]]:
    """Translate a covered source-key set to target keys.

    Keys without a pair come back in ``missing`` — data for the grafter,
    not an error.
    """
    lookup = dict(smap.pairs)
    mapped: set[FunctionKey] = set()
    missing: set[FunctionKey] = set()
    for key in cov:
        if key in lookup:
            mapped.add(lookup[key])
        else:
            missing.add(key)
    return mapped, missing
