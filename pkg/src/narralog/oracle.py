"""Brute-force model enumeration over a finite horizon.

This module implements the model theory directly: a model assigns every
fluent a boolean at every time point in ``0..max_time``, fluents persist
by default, occurrences whose action-law conditions hold in the current
state change fluents immediately after the occurrence, and constraints
both filter states (as classical implications) and propagate indirect
effects through a least-fixed-point closure at each step.

It is deliberately simple and slow: it enumerates all ``2^n`` initial
valuations and simulates each trajectory.  The query engine is tested
against it, and it doubles as a fallback engine at desk scale.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .core import DomainDescription, Fluent, FluentLiteral

State = dict[Fluent, bool]

DEFAULT_FLUENT_CAP = 16


class OracleCapacityError(Exception):
    """Too many fluents to enumerate initial valuations."""

    def __init__(self, count: int, cap: int):
        super().__init__(
            "%d fluents exceed the enumeration cap of %d" % (count, cap)
        )
        self.count = count
        self.cap = cap


@dataclass(frozen=True)
class Horizon:
    max_time: int

    def __post_init__(self):
        if self.max_time < 0:
            raise ValueError("horizon must be a natural number")


def default_horizon(d: DomainDescription, query_times: tuple[int, ...] = ()) -> Horizon:
    """Smallest window that still shows persistence past the final event."""
    return Horizon(max([d.max_time(), *query_times]) + 1)


@dataclass(frozen=True)
class Model:
    """A total valuation of fluent/time pairs on 0..max_time."""

    fluents: tuple[Fluent, ...]
    max_time: int
    valuation: tuple[tuple[bool, ...], ...]  # valuation[t][i] = value of fluents[i] at t

    def holds(self, literal: FluentLiteral, time: int) -> bool:
        value = self.valuation[time][self.fluents.index(literal.fluent)]
        return value if literal.positive else not value

    def state_at(self, time: int) -> State:
        return dict(zip(self.fluents, self.valuation[time]))


@dataclass(frozen=True)
class StepResult:
    next_state: tuple[bool, ...]
    changed: frozenset[Fluent]
    conflict: bool


def _literal_holds(lit: FluentLiteral, state: State) -> bool:
    value = state[lit.fluent]
    return value if lit.positive else not value


def satisfies_constraints(d: DomainDescription, state: State) -> bool:
    """Every constraint read as a classical implication at one time point."""
    for rp in d.rprops:
        if all(_literal_holds(l, state) for l in rp.conditions):
            if not _literal_holds(rp.head, state):
                return False
    return True


def progress_state(d: DomainDescription, state: State, t: int) -> StepResult:
    """One simulation step: direct effects of occurrences at ``t`` evaluated
    on ``state``, then constraint closure on the evolving successor state.
    ``conflict`` is set when some fluent is driven both ways."""
    happening = set(d.happens_at(t))
    assigned: dict[Fluent, bool] = {}
    conflict = False
    for cp in d.cprops:
        if cp.action not in happening:
            continue
        if not all(_literal_holds(l, state) for l in cp.conditions):
            continue
        fl, value = cp.effect.fluent, cp.effect.positive
        if assigned.get(fl, value) != value:
            conflict = True
        assigned[fl] = value

    nxt = dict(state)
    nxt.update(assigned)

    # Close under constraints: any rule whose conditions hold in the evolving
    # successor state fires its head.  Bounded by construction, but keep a
    # hard cap so a bug cannot loop forever.
    for _ in range(2 * len(state) + 2):
        fired = False
        for rp in d.rprops:
            if not all(_literal_holds(l, nxt) for l in rp.conditions):
                continue
            fl, value = rp.head.fluent, rp.head.positive
            if nxt[fl] == value:
                continue
            if fl in assigned and assigned[fl] != value:
                conflict = True
            assigned[fl] = value
            nxt[fl] = value
            fired = True
        if not fired:
            break

    fluents = tuple(sorted(state))
    changed = frozenset(f for f in fluents if nxt[f] != state[f])
    return StepResult(tuple(nxt[f] for f in fluents), changed, conflict)


@lru_cache(maxsize=256)
def enumerate_models(
    d: DomainDescription, h: Horizon, fluent_cap: int = DEFAULT_FLUENT_CAP
) -> tuple[Model, ...]:
    """All models of ``d`` on the window ``0..h.max_time``.

    Each of the ``2^n`` initial valuations is simulated forward; a
    trajectory is kept only if no step conflicts, every state satisfies
    the constraints classically, and every observation inside the window
    holds.  Results come back ordered by initial valuation.
    """
    if not d.ground:
        raise ValueError("domain must be ground before enumeration")
    fluents = tuple(sorted(d.fluent_objects()))
    if len(fluents) > fluent_cap:
        raise OracleCapacityError(len(fluents), fluent_cap)

    observations = [(tp.literal, tp.time) for tp in d.tprops if tp.time <= h.max_time]
    models = []
    for initial in itertools.product((False, True), repeat=len(fluents)):
        grid = [initial]
        state = dict(zip(fluents, initial))
        ok = satisfies_constraints(d, state)
        t = 0
        while ok and t < h.max_time:
            step = progress_state(d, state, t)
            if step.conflict:
                ok = False
                break
            state = dict(zip(fluents, step.next_state))
            if not satisfies_constraints(d, state):
                ok = False
                break
            grid.append(step.next_state)
            t += 1
        if not ok:
            continue
        model = Model(fluents, h.max_time, tuple(grid))
        if all(model.holds(lit, time) for lit, time in observations):
            models.append(model)
    return tuple(models)


def consistent(d: DomainDescription, h: Horizon) -> bool:
    return bool(enumerate_models(d, h))


def holds_credulous(d: DomainDescription, h: Horizon, lit: FluentLiteral, time: int) -> bool:
    """True iff the literal holds at ``time`` in some model."""
    if time > h.max_time:
        raise ValueError("query time %d beyond horizon %d" % (time, h.max_time))
    return any(m.holds(lit, time) for m in enumerate_models(d, h))


def entails_sceptical(d: DomainDescription, h: Horizon, lit: FluentLiteral, time: int) -> bool:
    """True iff at least one model exists and the literal holds at ``time``
    in every model.  Inconsistent domains entail nothing."""
    if time > h.max_time:
        raise ValueError("query time %d beyond horizon %d" % (time, h.max_time))
    models = enumerate_models(d, h)
    return bool(models) and all(m.holds(lit, time) for m in models)


def dump_models(models: tuple[Model, ...]) -> str:
    """One line per model: ``t=<k>: {f, ~g}`` entries joined by `` | ``."""
    lines = []
    for m in models:
        steps = []
        for t in range(m.max_time + 1):
            shown = []
            for i, f in enumerate(m.fluents):
                shown.append(str(f) if m.valuation[t][i] else "~" + str(f))
            steps.append("t=%d: {%s}" % (t, ", ".join(shown)))
        lines.append(" | ".join(steps))
    return "\n".join(lines)
