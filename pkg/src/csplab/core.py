"""Canonical CSP representation and the relational algebra built on it.

A problem is a finite set of variables, a finite ordered domain per variable,
and a list of constraints.  Constraints are extensional (an explicit tuple
set) or intensional (not-equal, letter-equality); the relational operations
(projection, selection, induction) work on extensional relations, so
intensional constraints carry a materialize() path.

Values are strings or integers.  Domain order is significant: it is the
static value ordering used everywhere downstream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product


class CspError(Exception):
    """Base class for errors raised by this package."""


class ScopeError(CspError):
    """A variable set does not relate to a constraint scope as required."""


class PreconditionError(CspError):
    """An operation was called on arguments violating its contract."""


class ParameterError(CspError):
    """Infeasible or out-of-range generator/solver parameters."""


class ConfigurationError(CspError):
    """A solver configuration cannot run on the given problem."""


class MaterializationError(CspError):
    """An operation needing extensional relations met an intensional one."""


EXTENSIONAL = "extensional"
NOT_EQUAL = "not_equal"
LETTER_EQUALITY = "letter_equality"


def value_key(v):
    """Total order over mixed int/str values (ints before strings)."""
    return (0, v) if isinstance(v, int) else (1, str(v))


def tuple_key(t):
    return tuple(value_key(v) for v in t)


@dataclass(frozen=True)
class Constraint:
    """A constraint: an ordered scope plus a relation.

    kind 'extensional' stores the allowed tuples (aligned with scope order);
    'not_equal' is the binary disequality; 'letter_equality' relates two
    word-valued variables through one character position in each
    (params posA indexes into scope[0]'s word, posB into scope[1]'s).
    """

    scope: tuple
    kind: str = EXTENSIONAL
    tuples: frozenset = None
    params: dict = None

    def __post_init__(self):
        if len(set(self.scope)) != len(self.scope):
            raise ScopeError(f"duplicate variable in scope {self.scope}")
        if self.kind == EXTENSIONAL:
            if self.tuples is None:
                object.__setattr__(self, "tuples", frozenset())
            for t in self.tuples:
                if len(t) != len(self.scope):
                    raise ScopeError(
                        f"tuple {t} does not match arity {len(self.scope)}")
        elif self.kind == NOT_EQUAL:
            if len(self.scope) != 2:
                raise ScopeError("not_equal is binary")
        elif self.kind == LETTER_EQUALITY:
            if len(self.scope) != 2:
                raise ScopeError("letter_equality is binary")
            if not self.params or "posA" not in self.params or "posB" not in self.params:
                raise ParameterError("letter_equality needs posA and posB")
        else:
            raise ParameterError(f"unknown constraint kind {self.kind!r}")

    @property
    def arity(self):
        return len(self.scope)

    @property
    def is_extensional(self):
        return self.kind == EXTENSIONAL

    def allows(self, values):
        """Membership test for a value tuple aligned with the scope."""
        if self.kind == EXTENSIONAL:
            return tuple(values) in self.tuples
        if self.kind == NOT_EQUAL:
            return values[0] != values[1]
        a, b = values
        pa, pb = self.params["posA"], self.params["posB"]
        if pa >= len(a) or pb >= len(b):
            return False
        return a[pa] == b[pb]

    def sorted_tuples(self):
        if not self.is_extensional:
            raise MaterializationError("intensional constraint has no stored tuples")
        return sorted(self.tuples, key=tuple_key)

    def materialize(self, domains):
        """Extensional equivalent over the given domains."""
        if self.is_extensional:
            return self
        allowed = frozenset(
            t for t in product(*(domains[v] for v in self.scope)) if self.allows(t)
        )
        return Constraint(self.scope, EXTENSIONAL, allowed)


@dataclass(frozen=True)
class PartialSolution:
    """An ordered sequence of (variable, value) pairs in instantiation order."""

    items: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(tuple(p) for p in self.items))
        names = [v for v, _ in self.items]
        if len(set(names)) != len(names):
            raise PreconditionError("variable assigned twice")

    @classmethod
    def of(cls, *pairs):
        return cls(tuple(pairs))

    def variables(self):
        return tuple(v for v, _ in self.items)

    def mapping(self):
        return dict(self.items)

    def extend(self, var, value):
        return PartialSolution(self.items + ((var, value),))

    def restrict(self, variables):
        keep = set(variables)
        return PartialSolution(tuple(p for p in self.items if p[0] in keep))

    def minus(self, other):
        drop = set(other.variables())
        return PartialSolution(tuple(p for p in self.items if p[0] not in drop))

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


@dataclass(frozen=True)
class Problem:
    """A CSP instance: ordered variables, ordered domains, constraint list."""

    variables: tuple
    domains: dict
    constraints: tuple

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(
            self, "domains", {v: tuple(d) for v, d in self.domains.items()}
        )
        object.__setattr__(self, "constraints", tuple(self.constraints))
        known = set(self.variables)
        for v in self.variables:
            dom = self.domains.get(v)
            if dom is None:
                raise ScopeError(f"variable {v!r} has no domain")
            if len(set(dom)) != len(dom):
                raise PreconditionError(f"duplicate values in domain of {v!r}")
        for c in self.constraints:
            for v in c.scope:
                if v not in known:
                    raise ScopeError(f"constraint scope names unknown variable {v!r}")

    @property
    def n(self):
        return len(self.variables)

    @property
    def d(self):
        return max((len(d) for d in self.domains.values()), default=0)

    @property
    def m(self):
        return len(self.constraints)

    @property
    def r(self):
        return max((c.arity for c in self.constraints), default=0)

    def degree(self, var):
        """Static degree: number of constraints whose scope contains var."""
        return sum(1 for c in self.constraints if var in c.scope)

    def is_extensional(self):
        return all(c.is_extensional for c in self.constraints)

    def materialize(self):
        if self.is_extensional():
            return self
        return Problem(
            self.variables,
            self.domains,
            tuple(c.materialize(self.domains) for c in self.constraints),
        )

    def validate(self):
        """Soft invariant check; returns a list of warnings."""
        warnings = []
        for v in self.variables:
            if not self.domains[v]:
                warnings.append(f"empty domain for {v!r}")
            if self.degree(v) == 0:
                warnings.append(f"variable {v!r} is in no constraint scope")
        for c in self.constraints:
            if c.is_extensional:
                for t in c.tuples:
                    for v, a in zip(c.scope, t):
                        if a not in self.domains[v]:
                            warnings.append(
                                f"tuple value {a!r} outside domain of {v!r}")
        return warnings


def consistent_with(t: PartialSolution, c: Constraint) -> bool:
    """True unless the scope is fully assigned and the restriction is disallowed."""
    m = t.mapping()
    if any(v not in m for v in c.scope):
        return True
    return c.allows(tuple(m[v] for v in c.scope))


def is_consistent(problem: Problem, t: PartialSolution) -> bool:
    return all(consistent_with(t, c) for c in problem.constraints)


def project(c: Constraint, subset) -> Constraint:
    """Projection: restrict every tuple to the sub-scope, deduplicated.

    The sub-scope keeps the original scope order.
    """
    if not c.is_extensional:
        raise MaterializationError("project needs an extensional constraint")
    sub = set(subset)
    if not sub:
        raise ScopeError("projection onto an empty variable set")
    if not sub <= set(c.scope):
        raise ScopeError(f"{subset} is not a subset of scope {c.scope}")
    keep = tuple(i for i, v in enumerate(c.scope) if v in sub)
    new_scope = tuple(c.scope[i] for i in keep)
    rel = frozenset(tuple(t[i] for i in keep) for t in c.tuples)
    return Constraint(new_scope, EXTENSIONAL, rel)


def select(c: Constraint, t: PartialSolution) -> Constraint:
    """Selection: keep the tuples agreeing with the partial solution."""
    if not c.is_extensional:
        raise MaterializationError("select needs an extensional constraint")
    m = t.mapping()
    if not set(m) <= set(c.scope):
        raise ScopeError(f"{t.variables()} is not a subset of scope {c.scope}")
    idx = [(i, m[v]) for i, v in enumerate(c.scope) if v in m]
    rel = frozenset(s for s in c.tuples if all(s[i] == a for i, a in idx))
    return Constraint(c.scope, EXTENSIONAL, rel)


def induce(problem: Problem, t: PartialSolution) -> Problem:
    """The residual problem after fixing a consistent partial solution.

    Each constraint not fully covered by t becomes the projection (onto its
    uninstantiated variables) of its selection on t; fully covered ones are
    dropped.  One output constraint per source constraint, in source order;
    duplicates are not merged.
    """
    assigned = set(t.variables())
    for v in assigned:
        if v not in set(problem.variables):
            raise ScopeError(f"assignment names unknown variable {v!r}")
    p = problem.materialize()
    if not is_consistent(p, t):
        raise PreconditionError("partial solution is inconsistent")
    remaining = tuple(v for v in p.variables if v not in assigned)
    constraints = []
    for c in p.constraints:
        scope = set(c.scope)
        if scope <= assigned:
            continue
        inner = t.restrict(scope & assigned)
        constraints.append(project(select(c, inner), scope - assigned))
    return Problem(
        remaining, {v: p.domains[v] for v in remaining}, tuple(constraints)
    )


def problems_equal(p1: Problem, p2: Problem) -> bool:
    """Syntactic equality: same variables, domains, and constraint list
    position by position (relations compared as sets)."""
    if p1.variables != p2.variables:
        return False
    if p1.domains != p2.domains:
        return False
    if len(p1.constraints) != len(p2.constraints):
        return False
    for c1, c2 in zip(p1.constraints, p2.constraints):
        if c1.scope != c2.scope or c1.kind != c2.kind:
            return False
        if c1.kind == EXTENSIONAL:
            if c1.tuples != c2.tuples:
                return False
        elif c1.kind == LETTER_EQUALITY and c1.params != c2.params:
            return False
    return True


def enumerate_solutions(problem: Problem, limit=None):
    """Brute-force solution oracle.

    Depth-first over variables in problem order and values in domain order,
    checking each extension against the constraints it completes.  Returns
    full assignments as PartialSolutions, in deterministic order.
    """
    variables = problem.variables
    out = []
    if any(not problem.domains[v] for v in variables):
        return out
    by_last = {v: [] for v in variables}
    pos = {v: i for i, v in enumerate(variables)}
    for c in problem.constraints:
        if c.scope:
            by_last[max(c.scope, key=lambda v: pos[v])].append(c)

    assignment = {}

    def walk(i):
        if limit is not None and len(out) >= limit:
            return
        if i == len(variables):
            out.append(
                PartialSolution(tuple((v, assignment[v]) for v in variables)))
            return
        var = variables[i]
        for a in problem.domains[var]:
            assignment[var] = a
            if all(
                c.allows(tuple(assignment[v] for v in c.scope))
                for c in by_last[var]
            ):
                walk(i + 1)
            del assignment[var]
            if limit is not None and len(out) >= limit:
                return

    walk(0)
    return out


def count_solutions(problem: Problem) -> int:
    return len(enumerate_solutions(problem))


# --- JSON problem format ----------------------------------------------------
#
# {"variables": [names], "domains": {name: [values]},
#  "constraints": [{"scope": [...], "kind": ..., "tuples": [[...]],
#                   "params": {"posA": int, "posB": int}}]}


def problem_to_dict(problem: Problem) -> dict:
    cons = []
    for c in problem.constraints:
        entry = {"scope": list(c.scope), "kind": c.kind}
        if c.kind == EXTENSIONAL:
            entry["tuples"] = [list(t) for t in c.sorted_tuples()]
        elif c.kind == LETTER_EQUALITY:
            entry["params"] = {"posA": c.params["posA"], "posB": c.params["posB"]}
        cons.append(entry)
    return {
        "variables": list(problem.variables),
        "domains": {v: list(problem.domains[v]) for v in problem.variables},
        "constraints": cons,
    }


def problem_from_dict(data: dict) -> Problem:
    cons = []
    for entry in data.get("constraints", []):
        kind = entry.get("kind", EXTENSIONAL)
        scope = tuple(entry["scope"])
        if kind == EXTENSIONAL:
            cons.append(
                Constraint(scope, EXTENSIONAL,
                           frozenset(tuple(t) for t in entry["tuples"])))
        elif kind == NOT_EQUAL:
            cons.append(Constraint(scope, NOT_EQUAL))
        elif kind == LETTER_EQUALITY:
            p = entry["params"]
            cons.append(Constraint(scope, LETTER_EQUALITY,
                                   params={"posA": p["posA"], "posB": p["posB"]}))
        else:
            raise ParameterError(f"unknown constraint kind {kind!r}")
    return Problem(tuple(data["variables"]),
                   {v: tuple(d) for v, d in data["domains"].items()},
                   tuple(cons))


def save_problem(problem: Problem, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(problem_to_dict(problem), fh, indent=1)
        fh.write("\n")


def load_problem(path) -> Problem:
    with open(path, encoding="utf-8") as fh:
        return problem_from_dict(json.load(fh))
