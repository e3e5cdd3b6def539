"""Structural parsing: language profiles, models, spans, splicing."""

from skelgraft.syntax.model import (
    CONSTRUCTOR,
    CTOR_NAME,
    METHOD,
    STATIC_INIT,
    ClassDecl,
    FieldDecl,
    FunctionDecl,
    FunctionKey,
    SourceUnit,
    Span,
    StructuralModel,
    parse_key,
    render_key,
)
from skelgraft.syntax.parser import parse_repo, parse_repo_tolerant, parse_unit
from skelgraft.syntax.profiles import LanguageProfile, get_profile, register_profile
from skelgraft.syntax.splice import splice

__all__ = [
    "CONSTRUCTOR",
    "CTOR_NAME",
    "METHOD",
    "STATIC_INIT",
    "ClassDecl",
    "FieldDecl",
    "FunctionDecl",
    "FunctionKey",
    "LanguageProfile",
    "SourceUnit",
    "Span",
    "StructuralModel",
    "get_profile",
    "parse_key",
    "parse_repo",
    "parse_repo_tolerant",
    "parse_unit",
    "register_profile",
    "render_key",
    "splice",
]
