"""Reasoning about narratives of actions, observations and constraints.

The package splits into independent layers:

* :mod:`narralog.core`    -- vocabulary, propositions, domains, grounding
* :mod:`narralog.parser`  -- surface syntax, printing, clause-style dump
* :mod:`narralog.argprog` -- the argumentation program: background Horn
  theory, argument rules, priorities, attack
* :mod:`narralog.engine`  -- admissible-extension search answering
  sceptical and credulous queries, with explanations
* :mod:`narralog.oracle`  -- brute-force model enumeration over a finite
  horizon, used both as reference semantics in the test-suite and as a
  fallback engine
* :mod:`narralog.cli`     -- the ``narralog`` command
"""

from .core import (
    Action,
    CProp,
    DomainDescription,
    Fluent,
    FluentLiteral,
    GroundingError,
    HProp,
    RProp,
    TProp,
    ValidationReport,
    Vocabulary,
    ground_domain,
    salient_times,
    validate_domain,
)
from .parser import (
    ParseError,
    Query,
    dump_translation,
    parse_domain,
    parse_query,
    print_domain,
    resolve_query,
)
from .engine import Engine, Explanation, QueryVerdict, compile_ramifications
from . import oracle

__all__ = [
    "Action",
    "CProp",
    "DomainDescription",
    "Engine",
    "Explanation",
    "Fluent",
    "FluentLiteral",
    "GroundingError",
    "HProp",
    "ParseError",
    "Query",
    "QueryVerdict",
    "RProp",
    "TProp",
    "ValidationReport",
    "Vocabulary",
    "compile_ramifications",
    "dump_translation",
    "ground_domain",
    "oracle",
    "parse_domain",
    "parse_query",
    "print_domain",
    "resolve_query",
    "salient_times",
    "validate_domain",
]

__version__ = "0.1.0"
