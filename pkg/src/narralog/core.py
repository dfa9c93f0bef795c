"""Vocabulary, propositions, and domain descriptions for narrative reasoning.

A domain models a dynamic system over discrete time (the naturals,
starting at 0) with boolean fluents.  Four statement kinds make up a
narrative:

* action laws   -- ``A initiates F when {L1, ..., Ln}`` (or ``terminates``)
* occurrences   -- ``A happens-at T``
* observations  -- ``L holds-at T``
* constraints   -- ``L whenever {L1, ..., Ln}``, a static constraint that
                   also propagates indirect effects of occurrences

Action laws may be schematic: an identifier starting with an upper-case
letter in an *argument* position is a variable, anything else must be a
declared object constant.  ``ground_domain`` instantiates schemas over
the declared constants; the reasoning layers only ever see ground
domains.

Everything here is immutable and hashable, so domains can be shared
freely across threads and used as cache keys.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping


def is_variable(token: str) -> bool:
    """An argument token is a variable iff it starts with an upper-case letter."""
    return bool(token) and token[0].isupper()


@dataclass(frozen=True, order=True)
class Fluent:
    name: str
    args: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.name:
            raise ValueError("fluent name must be nonempty")

    @property
    def ground(self) -> bool:
        return not any(is_variable(a) for a in self.args)

    def variables(self) -> frozenset[str]:
        return frozenset(a for a in self.args if is_variable(a))

    def substitute(self, binding: Mapping[str, str]) -> "Fluent":
        return Fluent(self.name, tuple(binding.get(a, a) for a in self.args))

    def __str__(self) -> str:
        if self.args:
            return "%s(%s)" % (self.name, ",".join(self.args))
        return self.name


@dataclass(frozen=True, order=True)
class Action:
    name: str
    args: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.name:
            raise ValueError("action name must be nonempty")

    @property
    def ground(self) -> bool:
        return not any(is_variable(a) for a in self.args)

    def variables(self) -> frozenset[str]:
        return frozenset(a for a in self.args if is_variable(a))

    def substitute(self, binding: Mapping[str, str]) -> "Action":
        return Action(self.name, tuple(binding.get(a, a) for a in self.args))

    def __str__(self) -> str:
        if self.args:
            return "%s(%s)" % (self.name, ",".join(self.args))
        return self.name


@dataclass(frozen=True, order=True)
class FluentLiteral:
    """A fluent or its negation."""

    fluent: Fluent
    positive: bool = True

    def complement(self) -> "FluentLiteral":
        return FluentLiteral(self.fluent, not self.positive)

    @property
    def ground(self) -> bool:
        return self.fluent.ground

    def variables(self) -> frozenset[str]:
        return self.fluent.variables()

    def substitute(self, binding: Mapping[str, str]) -> "FluentLiteral":
        return FluentLiteral(self.fluent.substitute(binding), self.positive)

    def __str__(self) -> str:
        return str(self.fluent) if self.positive else "~" + str(self.fluent)


@dataclass(frozen=True)
class CProp:
    """Action law: occurrences of ``action`` initiate (positive effect) or
    terminate (negative effect) the effect fluent when ``conditions`` hold."""

    action: Action
    effect: FluentLiteral
    conditions: frozenset[FluentLiteral] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "conditions", frozenset(self.conditions))
        for lit in self.conditions:
            if lit.complement() in self.conditions:
                raise ValueError(
                    "action law conditions contain both %s and its complement" % lit
                )

    @property
    def initiates(self) -> bool:
        return self.effect.positive

    @property
    def ground(self) -> bool:
        return (
            self.action.ground
            and self.effect.ground
            and all(l.ground for l in self.conditions)
        )

    def variables(self) -> frozenset[str]:
        vs = self.action.variables() | self.effect.variables()
        for lit in self.conditions:
            vs |= lit.variables()
        return vs

    def substitute(self, binding: Mapping[str, str]) -> "CProp":
        return CProp(
            self.action.substitute(binding),
            self.effect.substitute(binding),
            frozenset(l.substitute(binding) for l in self.conditions),
        )

    def __str__(self) -> str:
        verb = "initiates" if self.initiates else "terminates"
        head = "%s %s %s" % (self.action, verb, self.effect.fluent)
        if self.conditions:
            conds = ", ".join(str(l) for l in sorted(self.conditions))
            return "%s when {%s}" % (head, conds)
        return head


@dataclass(frozen=True, order=True)
class HProp:
    """Occurrence statement: ``action happens-at time``."""

    action: Action
    time: int

    def __post_init__(self):
        if self.time < 0:
            raise ValueError("occurrence time must be a natural number")


@dataclass(frozen=True, order=True)
class TProp:
    """Observation: ``literal holds-at time``."""

    literal: FluentLiteral
    time: int

    def __post_init__(self):
        if self.time < 0:
            raise ValueError("observation time must be a natural number")


@dataclass(frozen=True)
class RProp:
    """Constraint ``head whenever conditions``: at every time point where the
    conditions hold the head holds, and occurrences bringing the conditions
    about also bring the head about."""

    head: FluentLiteral
    conditions: frozenset[FluentLiteral]

    def __post_init__(self):
        object.__setattr__(self, "conditions", frozenset(self.conditions))
        if not self.conditions:
            raise ValueError("constraint needs a nonempty condition set")
        if self.head in self.conditions:
            raise ValueError("constraint head occurs in its own conditions")

    @property
    def ground(self) -> bool:
        return self.head.ground and all(l.ground for l in self.conditions)

    def variables(self) -> frozenset[str]:
        vs = self.head.variables()
        for lit in self.conditions:
            vs |= lit.variables()
        return vs

    def substitute(self, binding: Mapping[str, str]) -> "RProp":
        return RProp(
            self.head.substitute(binding),
            frozenset(l.substitute(binding) for l in self.conditions),
        )

    def __str__(self) -> str:
        conds = ", ".join(str(l) for l in sorted(self.conditions))
        return "%s whenever {%s}" % (self.head, conds)


@dataclass(frozen=True)
class Vocabulary:
    """Declared symbols.  Declaration order is preserved for printing."""

    fluents: tuple[str, ...] = ()
    actions: tuple[str, ...] = ()
    constants: tuple[str, ...] = ()

    def __contains__(self, name: str) -> bool:
        return name in self.fluents or name in self.actions or name in self.constants


def _dedup(items: Iterable) -> tuple:
    seen = set()
    out = []
    for it in items:
        if it not in seen:
            seen.add(it)
            out.append(it)
    return tuple(out)


@dataclass(frozen=True)
class DomainDescription:
    """A narrative: action laws, occurrences, observations, and constraints
    over a declared vocabulary.  Duplicate statements collapse."""

    vocabulary: Vocabulary = Vocabulary()
    cprops: tuple[CProp, ...] = ()
    hprops: tuple[HProp, ...] = ()
    tprops: tuple[TProp, ...] = ()
    rprops: tuple[RProp, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "cprops", _dedup(self.cprops))
        object.__setattr__(self, "hprops", _dedup(self.hprops))
        object.__setattr__(self, "tprops", _dedup(self.tprops))
        object.__setattr__(self, "rprops", _dedup(self.rprops))

    @property
    def ground(self) -> bool:
        return all(p.ground for p in self.cprops) and all(
            p.ground for p in self.rprops
        )

    def fluent_objects(self) -> tuple[Fluent, ...]:
        """Every ground fluent mentioned anywhere in the domain."""
        seen: dict[Fluent, None] = {}
        for cp in self.cprops:
            for lit in (cp.effect, *sorted(cp.conditions)):
                if lit.fluent.ground:
                    seen.setdefault(lit.fluent)
        for rp in self.rprops:
            for lit in (rp.head, *sorted(rp.conditions)):
                if lit.fluent.ground:
                    seen.setdefault(lit.fluent)
        for tp in self.tprops:
            seen.setdefault(tp.literal.fluent)
        # zero-arity declared fluents exist even if unused in any statement
        for name in self.vocabulary.fluents:
            seen.setdefault(Fluent(name))
        return tuple(seen)

    def max_time(self) -> int:
        times = [p.time for p in self.hprops] + [p.time for p in self.tprops]
        return max(times, default=0)

    def happens_at(self, time: int) -> tuple[Action, ...]:
        return tuple(h.action for h in self.hprops if h.time == time)


class GroundingError(Exception):
    """Instantiating a domain would exceed the configured instance cap."""

    def __init__(self, count: int, cap: int):
        super().__init__(
            "grounding would create %d instances, above the cap of %d" % (count, cap)
        )
        self.count = count
        self.cap = cap


@dataclass(frozen=True)
class Violation:
    message: str
    subject: object = None

    def __str__(self) -> str:
        return self.message


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(str(v) for v in self.violations)


def _check_symbols(d: DomainDescription, report: list[Violation]) -> None:
    def check_fluent(fl: Fluent, where: object):
        if fl.name not in d.vocabulary.fluents:
            report.append(Violation("undeclared fluent %r" % fl.name, where))
        for a in fl.args:
            if not is_variable(a) and a not in d.vocabulary.constants:
                report.append(Violation("undeclared object constant %r" % a, where))

    def check_action(ac: Action, where: object):
        if ac.name not in d.vocabulary.actions:
            report.append(Violation("undeclared action %r" % ac.name, where))
        for a in ac.args:
            if not is_variable(a) and a not in d.vocabulary.constants:
                report.append(Violation("undeclared object constant %r" % a, where))

    for cp in d.cprops:
        check_action(cp.action, cp)
        check_fluent(cp.effect.fluent, cp)
        for lit in cp.conditions:
            check_fluent(lit.fluent, cp)
    for hp in d.hprops:
        check_action(hp.action, hp)
    for tp in d.tprops:
        check_fluent(tp.literal.fluent, tp)
    for rp in d.rprops:
        check_fluent(rp.head.fluent, rp)
        for lit in rp.conditions:
            check_fluent(lit.fluent, rp)


def validate_domain(d: DomainDescription) -> ValidationReport:
    """Structural validation.

    Checks that every action law is strongly range-restricted (condition
    variables appear in the action or effect arguments), occurrences and
    observations are ground, constraints are groundable (condition
    variables appear in the head), and every symbol is declared.
    Contradictory observations are *not* rejected here; they simply make
    the domain inconsistent downstream.
    """
    found: list[Violation] = []
    _check_symbols(d, found)
    for cp in d.cprops:
        scope = cp.action.variables() | cp.effect.variables()
        for lit in sorted(cp.conditions):
            loose = lit.variables() - scope
            for v in sorted(loose):
                found.append(
                    Violation(
                        "action law %r is not range-restricted: "
                        "condition variable %s is unbound" % (str(cp), v),
                        cp,
                    )
                )
    for hp in d.hprops:
        if not hp.action.ground:
            found.append(
                Violation("occurrence of %s is not ground" % hp.action, hp)
            )
    for tp in d.tprops:
        if not tp.literal.ground:
            found.append(
                Violation("observation %s is not ground" % tp.literal, tp)
            )
    for rp in d.rprops:
        loose = frozenset().union(
            *[l.variables() for l in rp.conditions]
        ) - rp.head.variables()
        for v in sorted(loose):
            found.append(
                Violation(
                    "constraint %r is not groundable: condition variable %s "
                    "does not occur in the head" % (str(rp), v),
                    rp,
                )
            )
    return ValidationReport(tuple(found))


DEFAULT_INSTANCE_CAP = 20000


def _bindings(variables: frozenset[str], constants: tuple[str, ...]) -> Iterator[dict]:
    names = sorted(variables)
    for combo in itertools.product(constants, repeat=len(names)):
        yield dict(zip(names, combo))


def ground_domain(
    d: DomainDescription, cap: int = DEFAULT_INSTANCE_CAP
) -> DomainDescription:
    """Replace each schematic action law / constraint by its instances over
    the declared object constants.  Ground input comes back structurally
    unchanged.  Raises :class:`GroundingError` above the instance cap."""
    if d.ground:
        return d
    consts = d.vocabulary.constants
    total = 0
    for p in itertools.chain(d.cprops, d.rprops):
        total += max(1, len(consts)) ** len(p.variables())
        if total > cap:
            raise GroundingError(total, cap)
    cprops = []
    for cp in d.cprops:
        if cp.ground:
            cprops.append(cp)
        else:
            cprops.extend(cp.substitute(b) for b in _bindings(cp.variables(), consts))
    rprops = []
    for rp in d.rprops:
        if rp.ground:
            rprops.append(rp)
        else:
            rprops.extend(rp.substitute(b) for b in _bindings(rp.variables(), consts))
    return DomainDescription(
        d.vocabulary, tuple(cprops), d.hprops, d.tprops, tuple(rprops)
    )


def salient_times(
    d: DomainDescription, query_times: Iterable[int] = ()
) -> tuple[int, ...]:
    """The finite frontier of time points that matter: 0, every occurrence
    time, every observation time, and every query time, ascending."""
    times = {0}
    times.update(h.time for h in d.hprops)
    times.update(t.time for t in d.tprops)
    times.update(query_times)
    return tuple(sorted(times))
