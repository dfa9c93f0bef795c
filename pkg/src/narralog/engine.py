"""Admissible-extension search and sceptical/credulous query answering.

A query is answered by building supports for the queried literals
*conjoined with every observation in the domain* and trying to grow each
support into an admissible extension: a conflict-free set of base rules
(generation rules and assumptions) that counterattacks every attacking
set from the full theory.  The search manipulates only frontiers --
the current defence set and the attacks still standing against it --
and may extend the defence with further assumptions to counterattack.

Constraints enter in three ways:

* each constraint is compiled, together with the action laws that can
  fire it, into *derived* action laws whose residual conditions are read
  in the post-state of the occurrence (the following time point);
* a *forced-consequence closure* rejects any defence whose derived
  literals, together with the literals that hold in every extension,
  fire a law or constraint into a contradiction;
* the set of literals holding in every extension is itself computed by
  a fixpoint of sceptical queries, so a narrative whose unavoidable
  dynamics violate a constraint is recognised as inconsistent.

For a sceptical verdict a literal must be credulously supported while
its complement is not; inconsistent narratives support nothing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .core import (
    DomainDescription,
    FluentLiteral,
    RProp,
    ground_domain,
    salient_times,
    validate_domain,
    DEFAULT_INSTANCE_CAP,
)
from .argprog import (
    ASS,
    GEN,
    PERS,
    ArgumentationProgram,
    ArgumentRule,
    Lit,
    PhasedCProp,
    ResourceLimitError,
    assumption,
    lit,
    overall_lower,
    translate,
)
from .parser import clause_term


class DomainError(Exception):
    """The domain failed structural validation."""

    def __init__(self, report):
        super().__init__(str(report))
        self.report = report


class RamificationCycleError(Exception):
    def __init__(self, heads):
        names = ", ".join(sorted(str(h) for h in heads))
        super().__init__("constraint chain does not settle: %s" % names)
        self.heads = tuple(heads)


DEFAULT_RAM_CAP = 64


def compile_ramifications(
    d: DomainDescription, cap: int = DEFAULT_RAM_CAP
) -> tuple[tuple[PhasedCProp, ...], tuple[RProp, ...]]:
    """Close the action laws under the constraints.

    Whenever a law can bring about a literal that appears among a
    constraint's conditions, the occurrence also brings about the
    constraint's head; this yields a derived law with the same action,
    the constraint's head as effect, and the remaining conditions of the
    constraint carried over as residual conditions evaluated in the
    post-state.  Iterates to fixpoint, dropping derived laws subsumed by
    an existing law with the same action and effect and no more
    conditions.  The constraints themselves are returned unchanged; they
    are still enforced as classical implications at every time point.
    """
    laws: list[PhasedCProp] = [PhasedCProp.plain(cp) for cp in d.cprops]

    def subsumed(cand: PhasedCProp) -> bool:
        for law in laws:
            if (
                law.action == cand.action
                and law.effect == cand.effect
                and law.pre <= cand.pre
                and law.post <= cand.post
            ):
                return True
        return False

    for _ in range(cap):
        wave = []
        for law in laws:
            for rp in d.rprops:
                if law.effect not in rp.conditions:
                    continue
                cand = PhasedCProp(
                    law.action,
                    rp.head,
                    law.pre,
                    law.post | (rp.conditions - {law.effect}),
                )
                if not subsumed(cand) and not any(
                    cand == w or (
                        w.action == cand.action
                        and w.effect == cand.effect
                        and w.pre <= cand.pre
                        and w.post <= cand.post
                    )
                    for w in wave
                ):
                    wave.append(cand)
        if not wave:
            return tuple(laws), d.rprops
        laws.extend(wave)
    raise RamificationCycleError({law.effect for law in laws[len(d.cprops):]})


@dataclass(frozen=True)
class Explanation:
    """The base rules supporting the queried literals themselves (supports
    for conjoined observations are not part of the explanation)."""

    rules: frozenset

    def render(self) -> str:
        return "[%s]" % ",".join(rule_token(r) for r in sorted(self.rules, key=_rule_order))


def _rule_order(rule: ArgumentRule):
    rank = {GEN: 0, PERS: 1, ASS: 2}[rule.kind]
    return (rank, rule.fluent, rule.result, rule.source if rule.source is not None else -1)


def rule_token(rule: ArgumentRule) -> str:
    """Clause-style rendering: ``rule(gen,f,t2,t1)``, ``rule(ass,f,t)``,
    with ``neg(f)`` for negative conclusions."""
    name = clause_term(rule.fluent.name, rule.fluent.args)
    if not rule.positive:
        name = "neg(%s)" % name
    if rule.kind == ASS:
        return "rule(ass,%s,%d)" % (name, rule.result)
    return "rule(%s,%s,%d,%d)" % (rule.kind, name, rule.result, rule.source)


@dataclass(frozen=True)
class QueryVerdict:
    mode: str
    literals: tuple[tuple[FluentLiteral, int], ...]
    succeeds: bool
    explanations: tuple[Explanation, ...] = ()


class _SearchBudget:
    __slots__ = ("left",)

    def __init__(self, nodes: int):
        self.left = nodes

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise ResourceLimitError("admissibility search budget exhausted")


class _State:
    """Program, forced-literal set and dispute memos for one time frontier."""

    def __init__(self, engine: "Engine", times: tuple[int, ...]):
        self.engine = engine
        self.times = times
        self.program = translate(
            engine.domain, times, laws=engine.laws, support_cap=engine.support_cap
        )
        self.tprop_lits = tuple(
            lit(tp.literal.fluent, tp.literal.positive, tp.time)
            for tp in engine.domain.tprops
        )
        self.forced: frozenset = frozenset()
        self.inconsistent = False
        self._fail: set = set()
        self._found: dict = {}
        self._cred_memo: dict = {}
        self._ready = False

    # -- forced-consequence closure -----------------------------------------

    def closure_consistent(self, derived: frozenset) -> bool:
        """Grow the literal set with effects of laws whose conditions are all
        present and heads of constraints whose conditions are all present;
        reject on any complementary pair.  Assumes every literal in the set
        holds in some candidate extension, so anything the closure adds is
        unavoidable there."""
        level = set(derived) | set(self.forced)
        if any(l.complement() in level for l in level):
            return False
        happens = self.program.background.happens
        times = set(self.times)
        while True:
            new: list[Lit] = []
            for law in self.engine.laws:
                for action, t in happens:
                    if action != law.action or t + 1 not in times:
                        continue
                    if not all(Lit(t, c.fluent, c.positive) in level for c in law.pre):
                        continue
                    if not all(
                        Lit(t + 1, c.fluent, c.positive) in level for c in law.post
                    ):
                        continue
                    eff = Lit(t + 1, law.effect.fluent, law.effect.positive)
                    if eff not in level:
                        new.append(eff)
            for rp in self.engine.constraints:
                for t in self.times:
                    if all(Lit(t, c.fluent, c.positive) in level for c in rp.conditions):
                        head = Lit(t, rp.head.fluent, rp.head.positive)
                        if head not in level:
                            new.append(head)
            if not new:
                return True
            for l in new:
                if l.complement() in level:
                    return False
                level.add(l)

    # -- attacks --------------------------------------------------------------

    def _attack_stands(self, cand: frozenset, target: Lit, defence: frozenset) -> bool:
        for d_min in self.program.minimal_deriving_subsets(defence, target):
            if not overall_lower(cand, d_min):
                return True
        return False

    def _counters(self, defence: frozenset, attacker: frozenset) -> bool:
        d_lits, _ = self.program.closure(defence)
        a_lits, _ = self.program.closure(attacker)
        for nu in d_lits:
            comp = nu.complement()
            if comp not in a_lits:
                continue
            for d_min in self.program.minimal_deriving_subsets(defence, nu):
                for a_min in self.program.minimal_deriving_subsets(attacker, comp):
                    if not overall_lower(d_min, a_min):
                        return True
        return False

    def _next_attack(self, defence: frozenset) -> Optional[frozenset]:
        d_lits, _ = self.program.closure(defence)
        for mu in sorted(d_lits):
            for cand in self.program.theory_supports(mu.complement()):
                if len(cand) == 1 and next(iter(cand)).kind == ASS:
                    continue  # a bare assumption never outranks, and is
                    # always attacked back by whatever derives mu
                if not self._attack_stands(cand, mu, defence):
                    continue
                if not self._counters(defence, cand):
                    return cand
        return None

    # -- dispute search -------------------------------------------------------

    def dispute(self, s0: frozenset, budget: _SearchBudget) -> Optional[frozenset]:
        """Grow ``s0`` into an admissible, constraint-respecting extension by
        adding assumptions; ``None`` when every branch fails."""
        if s0 in self._fail:
            return None
        hit = self._found.get(s0)
        if hit is not None:
            return hit
        budget.spend()
        if not self.program.conflict_free(s0):
            self._fail.add(s0)
            return None
        derived, _ = self.program.closure(s0)
        if not self.closure_consistent(derived):
            self._fail.add(s0)
            return None
        attack = self._next_attack(s0)
        if attack is None:
            self._found[s0] = s0
            return s0
        a_lits, _ = self.program.closure(attack)
        for nu in sorted(a_lits):
            counter = assumption(nu.complement())
            if counter in s0:
                continue
            if counter.conclusion().complement() in derived:
                continue  # would contradict the defence outright
            grown = s0 | {counter}
            if not self._counters(grown, attack):
                continue
            result = self.dispute(grown, budget)
            if result is not None:
                self._found[s0] = result
                return result
        self._fail.add(s0)
        return None

    # -- query layer ----------------------------------------------------------

    def _support_combos(
        self, goal: Sequence[Lit]
    ) -> Iterable[tuple[frozenset, frozenset]]:
        """(goal-part, full support) pairs for goal plus observations,
        smallest first, deterministic.  A literal that is both queried and
        observed is supported once."""
        targets: list[Lit] = []
        is_goal: list[bool] = []
        for g in goal:
            if g not in targets:
                targets.append(g)
                is_goal.append(True)
        for t in self.tprop_lits:
            if t not in targets:
                targets.append(t)
                is_goal.append(False)
        lists = [self.program.minimal_supports(t) for t in targets]
        combos = []
        for parts in itertools.product(*lists):
            goal_part = frozenset().union(
                *(p for p, g in zip(parts, is_goal) if g), frozenset()
            )
            full = frozenset().union(*parts) if parts else frozenset()
            combos.append((goal_part, full))
        seen = set()
        unique = []
        for gp, full in combos:
            if full not in seen:
                seen.add(full)
                unique.append((gp, full))
        unique.sort(key=lambda pair: (len(pair[1]), tuple(sorted(pair[1]))))
        return unique

    def credulous(self, goal: tuple[Lit, ...], explain: bool = False):
        key = (goal, explain)
        hit = self._cred_memo.get(key)
        if hit is not None:
            return hit
        explanations: list[frozenset] = []
        succeeded = False
        budget = _SearchBudget(self.engine.node_cap)
        for goal_part, s0 in self._support_combos(goal):
            if not self.program.conflict_free(s0):
                continue
            if self.dispute(s0, budget) is not None:
                succeeded = True
                if not explain:
                    break
                if goal_part not in explanations:
                    explanations.append(goal_part)
        result = (succeeded, tuple(explanations))
        self._cred_memo[key] = result
        return result


class Engine:
    """Query engine over one domain.  Immutable once constructed; safe to
    share, with internal memo tables that only cache pure results."""

    def __init__(
        self,
        domain: DomainDescription,
        instance_cap: int = DEFAULT_INSTANCE_CAP,
        support_cap: int = 20000,
        node_cap: int = 400000,
        forced_rounds: int = 12,
    ):
        report = validate_domain(domain)
        if not report.ok:
            raise DomainError(report)
        self.domain = ground_domain(domain, cap=instance_cap)
        self.support_cap = support_cap
        self.node_cap = node_cap
        self.forced_rounds = forced_rounds
        self.laws, self.constraints = compile_ramifications(self.domain)
        self._needs_forced = self._forcing_possible()
        self._states: dict[tuple[int, ...], _State] = {}

    # The forced-literal fixpoint only matters when constraints exist or two
    # laws with complementary effects can fire at the same occurrence time.
    def _forcing_possible(self) -> bool:
        if self.domain.rprops:
            return True
        times_by_action: dict = {}
        for h in self.domain.hprops:
            times_by_action.setdefault(h.action, set()).add(h.time)
        for a, b in itertools.combinations(self.laws, 2):
            if a.effect.fluent != b.effect.fluent:
                continue
            if a.effect.positive == b.effect.positive:
                continue
            shared = times_by_action.get(a.action, set()) & times_by_action.get(
                b.action, set()
            )
            if shared:
                return True
        return False

    def _base_times(self, query_times: Iterable[int]) -> tuple[int, ...]:
        extra = {h.time + 1 for h in self.domain.hprops}
        return salient_times(self.domain, set(query_times) | extra)

    def _state_for(self, query_times: Iterable[int]) -> _State:
        times = self._base_times(query_times)
        state = self._states.get(times)
        if state is None:
            state = _State(self, times)
            self._states[times] = state
            self._prepare(state)
        return state

    def _prepare(self, state: _State) -> None:
        if state._ready:
            return
        state._ready = True
        if not self._needs_forced:
            return
        every = [
            Lit(t, f, sign)
            for f in state.program.fluents
            for t in state.times
            for sign in (True, False)
        ]
        forced: frozenset = frozenset()
        for _ in range(self.forced_rounds):
            state.forced = forced
            state._fail.clear()
            state._found.clear()
            state._cred_memo.clear()
            if not state.closure_consistent(frozenset()):
                state.inconsistent = True
                return
            verdicts = {l: state.credulous((l,))[0] for l in every}
            # In any extension every fluent holds one way or the other at
            # every time, so a literal with neither polarity supportable
            # means there is no extension at all.
            if any(
                not verdicts[l] and not verdicts[l.complement()]
                for l in every
                if l.positive
            ):
                state.inconsistent = True
                return
            grown = frozenset(
                l for l in every if verdicts[l] and not verdicts[l.complement()]
            )
            if grown == forced:
                break
            forced = grown
        state.forced = forced
        state._fail.clear()
        state._found.clear()
        state._cred_memo.clear()
        if not state.closure_consistent(frozenset()):
            state.inconsistent = True

    # -- public operations ----------------------------------------------------

    @staticmethod
    def _to_lits(pairs: Iterable[tuple[FluentLiteral, int]]) -> tuple[Lit, ...]:
        return tuple(lit(fl.fluent, fl.positive, t) for fl, t in pairs)

    def credulous(
        self, goal: Iterable[tuple[FluentLiteral, int]], explain: bool = False
    ) -> QueryVerdict:
        pairs = tuple(goal)
        state = self._state_for([t for _, t in pairs])
        if state.inconsistent:
            return QueryVerdict(
                "credulous", pairs, False, ()
            )
        ok, parts = state.credulous(self._to_lits(pairs), explain)
        expl = tuple(Explanation(p) for p in parts) if explain else ()
        return QueryVerdict("credulous", pairs, ok, expl)

    def sceptical(self, goal: Iterable[tuple[FluentLiteral, int]]) -> QueryVerdict:
        pairs = tuple(goal)
        state = self._state_for([t for _, t in pairs])
        if state.inconsistent:
            return QueryVerdict("sceptical", pairs, False, ())
        for l in self._to_lits(pairs):
            if not state.credulous((l,))[0]:
                return QueryVerdict("sceptical", pairs, False, ())
            if state.credulous((l.complement(),))[0]:
                return QueryVerdict("sceptical", pairs, False, ())
        return QueryVerdict("sceptical", pairs, True, ())

    def consistent(self) -> bool:
        """Whether the observations and unavoidable dynamics admit any
        admissible, constraint-respecting extension at all."""
        state = self._state_for(())
        if state.inconsistent:
            return False
        return state.credulous(())[0]

    def admissible_extension(
        self, s0: Iterable[ArgumentRule], query_times: Iterable[int] = ()
    ) -> Optional[frozenset]:
        """Grow ``s0`` into an admissible extension; ``None`` if impossible.
        Raises :class:`ResourceLimitError` when the search budget runs out,
        which is reported distinctly and never as a plain ``None``."""
        rules = frozenset(s0)
        times = set(query_times)
        for r in rules:
            times.add(r.result)
            if r.source is not None:
                times.add(r.source)
        state = self._state_for(times)
        if state.inconsistent:
            return None
        return state.dispute(rules, _SearchBudget(self.node_cap))


# ---------------------------------------------------------------------------
# module-level convenience wrappers

def credulous(
    d: DomainDescription,
    goal: Iterable[tuple[FluentLiteral, int]],
    explain: bool = False,
) -> QueryVerdict:
    return Engine(d).credulous(goal, explain)


def sceptical(d: DomainDescription, goal: Iterable[tuple[FluentLiteral, int]]) -> QueryVerdict:
    return Engine(d).sceptical(goal)


def consistent(d: DomainDescription) -> bool:
    return Engine(d).consistent()
