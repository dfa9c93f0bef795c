"""Argumentation program built from a ground domain.

A ground narrative is compiled into:

* a monotonic Horn *background*: ``happens`` facts plus one
  initiation/termination clause per action law and occurrence time of
  its action, with the law's conditions as body literals;
* a *theory* of defeasible argument rules for signed ``holds``
  literals -- generation rules (an initiation/termination point at an
  earlier time makes the fluent hold/not hold later), persistence rules
  (a value at an earlier time carries forward) and assumptions (a value
  may simply be posited);
* the *base*, the subset of the theory an extension may draw from:
  generation rules and assumptions only -- persistence belongs to
  attackers, not to extensions;
* a *priority* relation between rules with complementary conclusions:
  effects of later events beat effects of earlier ones, persistence
  loses to same-or-later generation, and assumptions lose to everything
  except other assumptions.

A set of rules *attacks* another when they derive complementary
literals and the attacker's minimal responsible subset is not overall
lower in priority than the defender's.  All sets here are finite
because rules are instantiated only at the salient time points.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .core import Action, CProp, DomainDescription, Fluent, FluentLiteral

GEN = "gen"
PERS = "pers"
ASS = "ass"


@dataclass(frozen=True, order=True)
class Lit:
    """A signed holds-literal at a time point."""

    time: int
    fluent: Fluent
    positive: bool

    def complement(self) -> "Lit":
        return Lit(self.time, self.fluent, not self.positive)

    def __str__(self) -> str:
        sign = "" if self.positive else "~"
        return "%s%s@%d" % (sign, self.fluent, self.time)


def lit(fluent: Fluent, positive: bool, time: int) -> Lit:
    return Lit(time, fluent, positive)


@dataclass(frozen=True, order=True)
class ArgumentRule:
    """A ground argument rule concluding a signed holds-literal.

    ``kind`` is ``gen``, ``pers`` or ``ass``; ``source`` is the earlier
    time a generation or persistence rule draws on (``None`` for
    assumptions).  The conclusion is ``fluent``/``positive`` at
    ``result``.
    """

    kind: str
    positive: bool
    fluent: Fluent
    result: int
    source: Optional[int] = None

    def __post_init__(self):
        if self.kind == ASS:
            if self.source is not None:
                raise ValueError("assumptions have no source time")
        elif self.source is None or self.source >= self.result:
            raise ValueError("%s rule needs source < result" % self.kind)

    def conclusion(self) -> Lit:
        return Lit(self.result, self.fluent, self.positive)

    def __str__(self) -> str:
        sign = "+" if self.positive else "-"
        if self.kind == ASS:
            return "ass %s%s@%d" % (sign, self.fluent, self.result)
        return "%s %s%s@%d from %d" % (self.kind, sign, self.fluent, self.result, self.source)


def assumption(l: Lit) -> ArgumentRule:
    return ArgumentRule(ASS, l.positive, l.fluent, l.time)


def generation(l: Lit, source: int) -> ArgumentRule:
    return ArgumentRule(GEN, l.positive, l.fluent, l.time, source)


def persistence(l: Lit, source: int) -> ArgumentRule:
    return ArgumentRule(PERS, l.positive, l.fluent, l.time, source)


@dataclass(frozen=True)
class Clause:
    """Ground initiation/termination clause: the atom ``(kind, fluent, time)``
    holds when the action happens at ``time`` and every body literal holds.
    ``order`` preserves the originating law's position for deterministic
    enumeration."""

    initiates: bool
    fluent: Fluent
    time: int
    action: Action
    body: tuple[Lit, ...]
    order: int


@dataclass(frozen=True)
class BackgroundTheory:
    happens: frozenset[tuple[Action, int]]
    clauses: tuple[Clause, ...]


@dataclass(frozen=True)
class PhasedCProp:
    """An action law whose conditions are split by evaluation phase:
    ``pre`` conditions are read at the occurrence time, ``post``
    conditions immediately after it (i.e. at the following time point).
    Plain laws have empty ``post``; the ramification compiler produces
    laws with both."""

    action: Action
    effect: FluentLiteral
    pre: frozenset[FluentLiteral] = frozenset()
    post: frozenset[FluentLiteral] = frozenset()

    @classmethod
    def plain(cls, cp: CProp) -> "PhasedCProp":
        return cls(cp.action, cp.effect, cp.conditions, frozenset())


class ResourceLimitError(Exception):
    """A configured enumeration cap was hit; the answer is unknown, not no."""


class ArgumentationProgram:
    """Immutable compiled program plus internal memo tables.

    The memo tables only cache pure functions of the program, so sharing
    an instance across threads is safe apart from redundant work.
    """

    def __init__(
        self,
        background: BackgroundTheory,
        times: tuple[int, ...],
        fluents: tuple[Fluent, ...],
        support_cap: int = 20000,
    ):
        self.background = background
        self.times = times
        self.fluents = fluents
        self.support_cap = support_cap
        self.theory = frozenset(self._build_theory())
        self.base = frozenset(r for r in self.theory if r.kind != PERS)
        self._clauses_by_goal: dict[tuple[bool, Fluent], list[Clause]] = {}
        for cl in background.clauses:
            self._clauses_by_goal.setdefault((cl.initiates, cl.fluent), []).append(cl)
        self._closure_memo: dict[frozenset, tuple[frozenset, frozenset]] = {}
        self._base_support_memo: dict[Lit, tuple[frozenset, ...]] = {}
        self._theory_support_memo: dict[Lit, tuple[frozenset, ...]] = {}
        self._min_subset_memo: dict[tuple[frozenset, Lit], tuple[frozenset, ...]] = {}

    def _build_theory(self) -> Iterator[ArgumentRule]:
        for fluent in self.fluents:
            for positive in (True, False):
                for t in self.times:
                    yield ArgumentRule(ASS, positive, fluent, t)
                for t1, t2 in itertools.combinations(self.times, 2):
                    yield ArgumentRule(GEN, positive, fluent, t2, t1)
                    yield ArgumentRule(PERS, positive, fluent, t2, t1)

    # -- derivability -------------------------------------------------------

    def closure(self, rules: frozenset) -> tuple[frozenset, frozenset]:
        """Forward-chaining closure of background plus ``rules``: returns
        (derived holds-literals, derived initiation/termination atoms)."""
        cached = self._closure_memo.get(rules)
        if cached is not None:
            return cached
        lits = {r.conclusion() for r in rules if r.kind == ASS}
        atoms: set[tuple[bool, Fluent, int]] = set()
        gens = [r for r in rules if r.kind == GEN]
        perss = [r for r in rules if r.kind == PERS]
        changed = True
        while changed:
            changed = False
            for cl in self.background.clauses:
                atom = (cl.initiates, cl.fluent, cl.time)
                if atom not in atoms and all(b in lits for b in cl.body):
                    atoms.add(atom)
                    changed = True
            for r in gens:
                c = r.conclusion()
                if c not in lits and (r.positive, r.fluent, r.source) in atoms:
                    lits.add(c)
                    changed = True
            for r in perss:
                c = r.conclusion()
                if c not in lits and Lit(r.source, r.fluent, r.positive) in lits:
                    lits.add(c)
                    changed = True
        result = (frozenset(lits), frozenset(atoms))
        self._closure_memo[rules] = result
        return result

    def conflict_free(self, rules: frozenset) -> bool:
        lits, _ = self.closure(rules)
        return not any(l.complement() in lits for l in lits)

    # -- support enumeration -------------------------------------------------

    def _clause_instances(self, goal: Lit) -> list[Clause]:
        out = []
        for cl in self._clauses_by_goal.get((goal.positive, goal.fluent), []):
            if cl.time < goal.time:
                out.append(cl)
        return out

    def _supports(self, goal: Lit, with_persistence: bool, path: frozenset) -> list[frozenset]:
        if goal in path:
            return []  # a derivation cannot require its own conclusion
        memo = self._theory_support_memo if with_persistence else self._base_support_memo
        cached = memo.get(goal)
        if cached is not None:
            return list(cached)
        path = path | {goal}
        found: list[frozenset] = [frozenset({assumption(goal)})]
        for cl in self._clause_instances(goal):
            rule = generation(goal, cl.time)
            body_supports = [
                self._supports(b, with_persistence, path) for b in sorted(cl.body)
            ]
            for combo in itertools.product(*body_supports):
                candidate = frozenset({rule}).union(*combo) if combo else frozenset({rule})
                found.append(candidate)
                if len(found) > self.support_cap:
                    raise ResourceLimitError(
                        "more than %d supports for %s" % (self.support_cap, goal)
                    )
        if with_persistence:
            for t1 in self.times:
                if t1 >= goal.time:
                    break
                step = persistence(goal, t1)
                for sub in self._supports(Lit(t1, goal.fluent, goal.positive), True, path):
                    found.append(frozenset({step}) | sub)
                    if len(found) > self.support_cap:
                        raise ResourceLimitError(
                            "more than %d supports for %s" % (self.support_cap, goal)
                        )
        pruned = _minimal_sets(found)
        kept = tuple(s for s in pruned if self.conflict_free(s))
        if not path - {goal}:  # only cache complete (non-path-restricted) results
            memo[goal] = kept
        return list(kept)

    def minimal_supports(self, goal: Lit) -> tuple[frozenset, ...]:
        """All minimal non-self-attacking base subsets deriving ``goal``."""
        return tuple(self._supports(goal, with_persistence=False, path=frozenset()))

    def theory_supports(self, goal: Lit) -> tuple[frozenset, ...]:
        """As :meth:`minimal_supports` but over the full theory, so
        persistence-mediated derivations appear too.  These are the
        candidate attacking sets."""
        return tuple(self._supports(goal, with_persistence=True, path=frozenset()))

    # -- minimal responsible subsets ----------------------------------------

    def minimal_deriving_subsets(self, rules: frozenset, goal: Lit) -> tuple[frozenset, ...]:
        key = (rules, goal)
        cached = self._min_subset_memo.get(key)
        if cached is not None:
            return cached
        if goal not in self.closure(rules)[0]:
            self._min_subset_memo[key] = ()
            return ()
        results: set[frozenset] = set()
        seen: set[frozenset] = set()
        stack = [rules]
        while stack:
            current = stack.pop()
            if current in seen:
                continue
            seen.add(current)
            shrunk = False
            for r in sorted(current):
                smaller = current - {r}
                if goal in self.closure(smaller)[0]:
                    stack.append(smaller)
                    shrunk = True
            if not shrunk:
                results.add(current)
        out = tuple(sorted(results, key=_set_key))
        self._min_subset_memo[key] = out
        return out


def _set_key(s: frozenset) -> tuple:
    return (len(s), tuple(sorted(s)))


def _minimal_sets(sets: Iterable[frozenset]) -> list[frozenset]:
    """Drop duplicates and strict supersets, keeping first-seen order."""
    unique: list[frozenset] = []
    seen = set()
    for s in sets:
        if s not in seen:
            seen.add(s)
            unique.append(s)
    keep = []
    for s in unique:
        if not any(other < s for other in unique):
            keep.append(s)
    return keep


# ---------------------------------------------------------------------------
# priorities and attack

def lower_priority(a: ArgumentRule, b: ArgumentRule) -> bool:
    """Strict priority: ``a`` loses to ``b``.

    Only rules with complementary conclusions on the same fluent at the
    same result time are comparable.  Assumptions lose to anything else;
    persistence loses to generation from the same time or later; among
    generations and among persistences the earlier source loses.
    """
    if a.fluent != b.fluent or a.result != b.result or a.positive == b.positive:
        return False
    if a.kind == ASS:
        return b.kind != ASS
    if a.kind == PERS:
        if b.kind == GEN:
            return b.source >= a.source
        if b.kind == PERS:
            return a.source < b.source
        return False
    # a is a generation rule
    return b.kind == GEN and a.source < b.source


def overall_lower(a_rules: frozenset, b_rules: frozenset) -> bool:
    """``a_rules`` is overall lower than ``b_rules`` iff it contains a rule
    lower than some rule of ``b_rules`` and no rule higher than any."""
    has_lower = False
    for ra in a_rules:
        for rb in b_rules:
            if lower_priority(ra, rb):
                has_lower = True
            if lower_priority(rb, ra):
                return False
    return has_lower


def attacks(p: ArgumentationProgram, a: frozenset, b: frozenset) -> bool:
    """Whether rule set ``a`` attacks rule set ``b`` under the program's
    priority relation: they derive complementary literals and the minimal
    subset of ``a`` responsible is not overall lower than the minimal
    subset of ``b`` responsible."""
    lits_a, _ = p.closure(frozenset(a))
    lits_b, _ = p.closure(frozenset(b))
    for lam in sorted(lits_a):
        comp = lam.complement()
        if comp not in lits_b:
            continue
        for a_min in p.minimal_deriving_subsets(frozenset(a), lam):
            for b_min in p.minimal_deriving_subsets(frozenset(b), comp):
                if not overall_lower(a_min, b_min):
                    return True
    return False


def derives(p: ArgumentationProgram, rules: Iterable[ArgumentRule], goal) -> bool:
    """Whether background plus ``rules`` derives ``goal`` (a :class:`Lit`
    or an ``(initiates, fluent, time)`` atom) by forward chaining."""
    lits, atoms = p.closure(frozenset(rules))
    if isinstance(goal, Lit):
        return goal in lits
    return tuple(goal) in atoms


# ---------------------------------------------------------------------------
# translation

def translate(
    d: DomainDescription,
    times: tuple[int, ...],
    laws: Optional[Iterable[PhasedCProp]] = None,
    support_cap: int = 20000,
) -> ArgumentationProgram:
    """Compile a ground domain into an argumentation program instantiated
    at ``times``.  ``laws`` overrides the domain's action laws (the engine
    passes the ramification-augmented set); by default the domain's own
    laws are used.  Occurrence facts mirror the domain; each law yields a
    clause at every time its action happens."""
    if not d.ground:
        raise ValueError("domain must be ground before translation")
    if laws is None:
        laws = [PhasedCProp.plain(cp) for cp in d.cprops]
    happens = frozenset((h.action, h.time) for h in d.hprops)
    clauses = []
    for order, law in enumerate(laws):
        for t in times:
            if (law.action, t) not in happens:
                continue
            body = [lit(c.fluent, c.positive, t) for c in sorted(law.pre)]
            body += [lit(c.fluent, c.positive, t + 1) for c in sorted(law.post)]
            clauses.append(
                Clause(
                    law.effect.positive,
                    law.effect.fluent,
                    t,
                    law.action,
                    tuple(body),
                    order,
                )
            )
    fluents = tuple(sorted(d.fluent_objects()))
    background = BackgroundTheory(happens, tuple(clauses))
    return ArgumentationProgram(background, tuple(times), fluents, support_cap)
