"""Bundled benchmark narratives and their expected query outcomes.

The four scenarios exercise distinct reasoning modes: unknown initial
conditions with alternative causes (vaccinations), reasoning backwards
from observations to conditions (photographs), later effects overriding
earlier ones plus indirect effects through a constraint (cars), and the
combination of alternatives with constraints (infection).  The tables
below are used both by the ``narralog corpus`` command and by the
test-suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .core import DomainDescription
from .parser import parse_domain

DOMAIN_NAMES = (
    "vaccinations",
    "photographs",
    "photographs_unobserved",
    "photographs_digital",
    "cars",
    "cars_jumpstart",
    "infection",
)


def domain_text(name: str) -> str:
    if name not in DOMAIN_NAMES:
        raise KeyError("unknown corpus domain %r" % name)
    return (resources.files(__package__) / "domains" / (name + ".e")).read_text()


def load(name: str) -> DomainDescription:
    return parse_domain(domain_text(name))


@dataclass(frozen=True)
class QueryGolden:
    domain: str
    query: str
    expected: bool


@dataclass(frozen=True)
class ExplanationGolden:
    domain: str
    query: str
    expected: frozenset[str]


@dataclass(frozen=True)
class ConsistencyGolden:
    domain: str
    expected: bool


@dataclass(frozen=True)
class TranslationGolden:
    domain: str
    expected: str


def _vaccination_goldens():
    out = [QueryGolden("vaccinations", "sceptical([holds(protected,6)])", True)]
    for t in (0, 1, 2, 3):
        out.append(QueryGolden("vaccinations", "sceptical([holds(protected,%d)])" % t, False))
        out.append(QueryGolden("vaccinations", "sceptical([neg(holds(protected,%d))])" % t, False))
        out.append(QueryGolden("vaccinations", "credulous([holds(protected,%d)])" % t, True))
        out.append(QueryGolden("vaccinations", "credulous([neg(holds(protected,%d))])" % t, True))
    for t in (4, 5, 6):
        out.append(QueryGolden("vaccinations", "sceptical([neg(holds(protected,%d))])" % t, False))
    return out


def _photograph_goldens():
    out = []
    for t in range(6):
        out.append(QueryGolden("photographs", "sceptical([holds(loaded,%d)])" % t, True))
        out.append(
            QueryGolden("photographs_unobserved", "sceptical([holds(loaded,%d)])" % t, False)
        )
        out.append(
            QueryGolden("photographs_unobserved", "credulous([holds(loaded,%d)])" % t, True)
        )
        for fluent in ("loaded", "digital"):
            out.append(
                QueryGolden(
                    "photographs_digital", "sceptical([holds(%s,%d)])" % (fluent, t), False
                )
            )
            out.append(
                QueryGolden(
                    "photographs_digital", "credulous([holds(%s,%d)])" % (fluent, t), True
                )
            )
    return out


def _car_goldens():
    succeeding = [
        "holds(running,0)",
        "neg(holds(running,3))",
        "holds(running,6)",
        "neg(holds(running,10))",
        "holds(petrol,0)",
        "holds(petrol,3)",
        "holds(petrol,6)",
        "neg(holds(petrol,10))",
    ]
    out = []
    for literal in succeeding:
        out.append(QueryGolden("cars", "sceptical([%s])" % literal, True))
        if literal.startswith("neg("):
            converse = literal[4:-1]
        else:
            converse = "neg(%s)" % literal
        out.append(QueryGolden("cars", "sceptical([%s])" % converse, False))
    return out


def _infection_goldens():
    out = []
    for t in range(5, 10):
        out.append(QueryGolden("infection", "sceptical([holds(danger,%d)])" % t, True))
    for t in range(4, 10):
        out.append(QueryGolden("infection", "sceptical([holds(allergic,%d)])" % t, True))
    return out


QUERY_GOLDENS: tuple[QueryGolden, ...] = tuple(
    _vaccination_goldens() + _photograph_goldens() + _car_goldens() + _infection_goldens()
)

EXPLANATION_GOLDENS: tuple[ExplanationGolden, ...] = (
    ExplanationGolden(
        "photographs_digital",
        "credulous([holds(picture,3)],X)",
        frozenset(
            {
                "[rule(gen,picture,3,2),rule(ass,loaded,2)]",
                "[rule(gen,picture,3,2),rule(ass,digital,2)]",
            }
        ),
    ),
)

CONSISTENCY_GOLDENS: tuple[ConsistencyGolden, ...] = (
    ConsistencyGolden("vaccinations", True),
    ConsistencyGolden("photographs", True),
    ConsistencyGolden("photographs_unobserved", True),
    ConsistencyGolden("photographs_digital", True),
    ConsistencyGolden("cars", True),
    ConsistencyGolden("cars_jumpstart", False),
    ConsistencyGolden("infection", True),
)

CARS_TRANSLATION = """\
initiation(running,T):-
  happens(turnOn,T), holds(petrol,T), true.
termination(running,T):-
  happens(turnOff,T), true.
termination(petrol,T):-
  happens(empty,T), true.
ram(neg(holds(running,T))):-
  neg(holds(petrol,T)).
tprop(holds(running,1)).
happens(turnOff,2).
happens(turnOn,5).
happens(empty,8).
"""

TRANSLATION_GOLDENS: tuple[TranslationGolden, ...] = (
    TranslationGolden("cars", CARS_TRANSLATION),
)
