"""Local-consistency enforcement.

Two engines live here:

* generalized arc consistency over a DomainState (AC3-style queue of
  (constraint, variable) pairs), with optional per-removal explanations so
  conflict-directed look-back can attribute wipeouts to instantiation levels;
* strong k-consistency enforcement to a global fixpoint on an (induced)
  problem, realized by a KState that removes node-inconsistent values,
  deletes unsupported tuples, and synthesizes missing constraints.

Relations are treated as restricted to current domains throughout: removing
a domain value can make a relation effectively empty, which makes the
problem empty.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, product

from .core import (
    EXTENSIONAL,
    Constraint,
    MaterializationError,
    ParameterError,
    PartialSolution,
    PreconditionError,
    Problem,
    ScopeError,
    induce,
)

EMPTY_EXPL = frozenset()


class CheckCounter:
    """Mutable consistency-check tally shared across calls."""

    __slots__ = ("count",)

    def __init__(self):
        self.count = 0

    def add(self, n=1):
        self.count += n


# ---------------------------------------------------------------------------
# Domain state + generalized arc consistency
# ---------------------------------------------------------------------------


class DomainState:
    """Current domains plus an elimination ledger with explanations.

    Explanations are frozensets of instantiation levels; the trail (mark/undo)
    restores domains exactly, which the search engine relies on when
    unwinding.
    """

    def __init__(self, problem: Problem):
        self.problem = problem
        self.order = {v: tuple(problem.domains[v]) for v in problem.variables}
        self.current = {v: set(problem.domains[v]) for v in problem.variables}
        self.removals = []  # (var, value, constraint_id, explanation)
        self.removed_expl = {}

    def current_values(self, var):
        cur = self.current[var]
        return [a for a in self.order[var] if a in cur]

    def size(self, var):
        return len(self.current[var])

    def contains(self, var, value):
        return value in self.current[var]

    def remove(self, var, value, constraint_id, explanation):
        self.current[var].discard(value)
        self.removals.append((var, value, constraint_id, explanation))
        self.removed_expl[(var, value)] = explanation

    def is_wiped(self, var):
        return not self.current[var]

    def wipe_explanation(self, var):
        out = set()
        for a in self.order[var]:
            out |= self.removed_expl.get((var, a), EMPTY_EXPL)
        return frozenset(out)

    def mark(self):
        return len(self.removals)

    def undo(self, mark):
        while len(self.removals) > mark:
            var, value, _, _ = self.removals.pop()
            self.current[var].add(value)
            del self.removed_expl[(var, value)]

    def fingerprint(self):
        return tuple(tuple(self.current_values(v)) for v in self.problem.variables)


@dataclass
class PruneResult:
    """Outcome of one propagation run."""

    wipeout: bool = False
    wiped_variable: object = None
    removals: list = field(default_factory=list)
    checks: int = 0
    explanation: frozenset = EMPTY_EXPL


def _support_explanation(c, x, a, domains, inst_levels):
    """Levels responsible for (x, a) losing every support in c.

    Union of the instantiated levels in the scope with the explanations of
    removed values that appeared in a's original supports.
    """
    expl = {inst_levels[y] for y in c.scope if y in inst_levels}
    if c.kind == EXTENSIONAL:
        xi = c.scope.index(x)
        for t in c.tuples:
            if t[xi] != a:
                continue
            for y, b in zip(c.scope, t):
                if y != x and not domains.contains(y, b):
                    expl |= domains.removed_expl.get((y, b), EMPTY_EXPL)
    else:
        y = c.scope[1] if c.scope[0] == x else c.scope[0]
        for b in domains.order[y]:
            if domains.contains(y, b):
                continue
            pair = (a, b) if c.scope[0] == x else (b, a)
            if c.allows(pair):
                expl |= domains.removed_expl.get((y, b), EMPTY_EXPL)
    return frozenset(expl)


def revise(c: Constraint, x, domains: DomainState, explain=False,
           inst_levels=None, counter=None, constraint_id=None):
    """Remove the values of x with no support in c; returns the removed list.

    Extensional supports are searched in stored sorted order, intensional
    supports in domain order; every probe counts one consistency check.
    """
    if x not in c.scope:
        raise ScopeError(f"{x!r} is not in scope {c.scope}")
    counter = counter or CheckCounter()
    inst_levels = inst_levels or {}
    removed = []
    if c.kind == EXTENSIONAL:
        xi = c.scope.index(x)
        stored = c.sorted_tuples()
        others = [(i, y) for i, y in enumerate(c.scope) if y != x]
        for a in domains.current_values(x):
            supported = False
            for t in stored:
                counter.add()
                if t[xi] == a and all(domains.contains(y, t[i]) for i, y in others):
                    supported = True
                    break
            if not supported:
                expl = (_support_explanation(c, x, a, domains, inst_levels)
                        if explain else EMPTY_EXPL)
                domains.remove(x, a, constraint_id, expl)
                removed.append(a)
    else:
        first = c.scope[0] == x
        y = c.scope[1] if first else c.scope[0]
        for a in domains.current_values(x):
            supported = False
            for b in domains.current_values(y):
                counter.add()
                if c.allows((a, b) if first else (b, a)):
                    supported = True
                    break
            if not supported:
                expl = (_support_explanation(c, x, a, domains, inst_levels)
                        if explain else EMPTY_EXPL)
                domains.remove(x, a, constraint_id, expl)
                removed.append(a)
    return removed


def enforce_gac(problem: Problem, domains: DomainState,
                instantiation: PartialSolution = PartialSolution(),
                explain=False, counter=None, seed_vars=None) -> PruneResult:
    """Propagate to the arc-consistent fixpoint over current domains.

    FIFO queue of (constraint, variable) pairs, seeded with every pair (or
    with the neighborhood of seed_vars for incremental runs); a removal
    re-enqueues the pruned variable's neighbors.  Stops at the first domain
    wipeout.
    """
    inst_levels = {}
    for level, (var, value) in enumerate(instantiation, start=1):
        if domains.current[var] != {value}:
            raise PreconditionError(
                f"instantiated variable {var!r} lacks singleton domain {value!r}")
        inst_levels[var] = level
    counter = counter or CheckCounter()
    start_checks = counter.count
    result = PruneResult()
    start_removals = len(domains.removals)

    by_var = {v: [] for v in problem.variables}
    for ci, c in enumerate(problem.constraints):
        for v in c.scope:
            by_var[v].append(ci)

    queue = deque()
    if seed_vars is None:
        for ci, c in enumerate(problem.constraints):
            for v in c.scope:
                queue.append((ci, v))
    else:
        for sv in seed_vars:
            for ci in by_var[sv]:
                for v in problem.constraints[ci].scope:
                    if v != sv:
                        queue.append((ci, v))

    while queue:
        ci, x = queue.popleft()
        c = problem.constraints[ci]
        removed = revise(c, x, domains, explain=explain,
                         inst_levels=inst_levels, counter=counter,
                         constraint_id=ci)
        if removed:
            if domains.is_wiped(x):
                result.wipeout = True
                result.wiped_variable = x
                result.explanation = domains.wipe_explanation(x)
                break
            for cj in by_var[x]:
                for y in problem.constraints[cj].scope:
                    if y != x:
                        queue.append((cj, y))
    result.removals = [(v, a, e) for v, a, _, e in domains.removals[start_removals:]]
    result.checks = counter.count - start_checks
    return result


def assert_arc_consistent(problem: Problem, domains: DomainState):
    """Exhaustive post-condition scan: every remaining value has a support
    in every constraint within current domains.  Returns offending triples."""
    bad = []
    for c in problem.constraints:
        for x in c.scope:
            others = [y for y in c.scope if y != x]
            for a in domains.current_values(x):
                found = False
                if c.kind == EXTENSIONAL:
                    xi = c.scope.index(x)
                    for t in c.tuples:
                        if t[xi] == a and all(
                            domains.contains(y, t[i])
                            for i, y in enumerate(c.scope) if y != x
                        ):
                            found = True
                            break
                else:
                    y = others[0]
                    first = c.scope[0] == x
                    for b in domains.current_values(y):
                        if c.allows((a, b) if first else (b, a)):
                            found = True
                            break
                if not found:
                    bad.append((c.scope, x, a))
    return bad


# ---------------------------------------------------------------------------
# Strong k-consistency: KState
# ---------------------------------------------------------------------------


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _Rel:
    """One live relation over variable indices, with absence explanations.

    Arity 1 and 2 use value-index bitmasks; higher arities use a tuple set.
    dead_expl records why an explicitly removed tuple is absent; tuples never
    allowed have the empty explanation.
    """

    __slots__ = ("scope", "scope_mask", "arity", "mask", "rows", "cols",
                 "tset", "dead_expl", "source")

    def __init__(self, scope, source):
        self.scope = tuple(scope)
        self.scope_mask = 0
        for v in scope:
            self.scope_mask |= 1 << v
        self.arity = len(scope)
        self.mask = 0
        self.rows = None
        self.cols = None
        self.tset = None
        self.dead_expl = {}
        self.source = source

    @classmethod
    def unary(cls, scope, mask, source, dead_expl=None):
        r = cls(scope, source)
        r.mask = mask
        r.dead_expl = dead_expl or {}
        return r

    @classmethod
    def binary(cls, scope, rows, ncols, source, dead_expl=None):
        r = cls(scope, source)
        r.rows = rows
        r.cols = [0] * ncols
        for a, row in enumerate(rows):
            for b in _bits(row):
                r.cols[b] |= 1 << a
        r.dead_expl = dead_expl or {}
        return r

    @classmethod
    def nary(cls, scope, tset, source, dead_expl=None):
        r = cls(scope, source)
        r.tset = set(tset)
        r.dead_expl = dead_expl or {}
        return r

    def copy(self):
        r = _Rel(self.scope, self.source)
        r.mask = self.mask
        r.rows = list(self.rows) if self.rows is not None else None
        if self.cols is not None:
            r.cols = list(self.cols)
        r.tset = set(self.tset) if self.tset is not None else None
        r.dead_expl = dict(self.dead_expl)
        return r

    def allows(self, vals):
        if self.arity == 1:
            return bool(self.mask >> vals[0] & 1)
        if self.arity == 2:
            return bool(self.rows[vals[0]] >> vals[1] & 1)
        return tuple(vals) in self.tset

    def absence_expl(self, vals):
        return self.dead_expl.get(tuple(vals), EMPTY_EXPL)

    def support_mask(self, from_pos, val):
        """Partners of val (at scope position from_pos) in a binary relation."""
        return self.rows[val] if from_pos == 0 else self.cols[val]

    def delete(self, vals, expl):
        vals = tuple(vals)
        if self.arity == 1:
            self.mask &= ~(1 << vals[0])
        elif self.arity == 2:
            a, b = vals
            self.rows[a] &= ~(1 << b)
            self.cols[b] &= ~(1 << a)
        else:
            self.tset.discard(vals)
        self.dead_expl[vals] = expl

    def effectively_empty(self, dom):
        """No stored tuple survives the current domain masks."""
        if self.arity == 1:
            return not (self.mask & dom[self.scope[0]])
        if self.arity == 2:
            dy = dom[self.scope[1]]
            for a in _bits(dom[self.scope[0]]):
                if self.rows[a] & dy:
                    return False
            return True
        for t in self.tset:
            if all(dom[v] >> b & 1 for v, b in zip(self.scope, t)):
                return False
        return True

    def live_tuples(self, dom):
        if self.arity == 1:
            return [(b,) for b in _bits(self.mask & dom[self.scope[0]])]
        if self.arity == 2:
            dy = dom[self.scope[1]]
            out = []
            for a in _bits(dom[self.scope[0]]):
                for b in _bits(self.rows[a] & dy):
                    out.append((a, b))
            return out
        return [t for t in self.tset
                if all(dom[v] >> b & 1 for v, b in zip(self.scope, t))]


class KState:
    """Mutable state for strong k-consistency enforcement.

    Variable and value indices refer to the root problem this state (or its
    ancestor) was built from; assignments project variables out, so the live
    set shrinks while indices stay stable.
    """

    def __init__(self):
        self.names = ()
        self.values = ()
        self.val_index = ()
        self.live = []
        self.dom = []
        self.full = []
        self.removed_expl = {}
        self.rels = []
        self.ledger = None
        self.counter = None

    @classmethod
    def from_problem(cls, problem: Problem, ledger=False, counter=None):
        if not problem.is_extensional():
            raise MaterializationError(
                "strong k-consistency needs extensional constraints; materialize first")
        st = cls()
        st.names = tuple(problem.variables)
        st.values = tuple(tuple(problem.domains[v]) for v in st.names)
        st.val_index = tuple({a: i for i, a in enumerate(vals)} for vals in st.values)
        st.live = list(range(len(st.names)))
        st.full = [(1 << len(vals)) - 1 for vals in st.values]
        st.dom = list(st.full)
        st.removed_expl = {}
        st.rels = []
        st.ledger = [] if ledger else None
        st.counter = counter or CheckCounter()
        vpos = {v: i for i, v in enumerate(st.names)}
        for ci, c in enumerate(problem.constraints):
            scope = tuple(vpos[v] for v in c.scope)
            if c.arity == 1:
                mask = 0
                for (a,) in c.tuples:
                    mask |= 1 << st.val_index[scope[0]][a]
                st.rels.append(_Rel.unary(scope, mask, ci))
            elif c.arity == 2:
                rows = [0] * len(st.values[scope[0]])
                for a, b in c.tuples:
                    rows[st.val_index[scope[0]][a]] |= 1 << st.val_index[scope[1]][b]
                st.rels.append(_Rel.binary(scope, rows, len(st.values[scope[1]]), ci))
            else:
                tset = {
                    tuple(st.val_index[v][a] for v, a in zip(scope, t))
                    for t in c.tuples
                }
                st.rels.append(_Rel.nary(scope, tset, ci))
        return st

    def copy(self):
        st = KState()
        st.names = self.names
        st.values = self.values
        st.val_index = self.val_index
        st.live = list(self.live)
        st.dom = list(self.dom)
        st.full = self.full
        st.removed_expl = dict(self.removed_expl)
        st.rels = [r.copy() for r in self.rels]
        st.ledger = None if self.ledger is None else list(self.ledger)
        st.counter = self.counter
        return st

    # -- queries ------------------------------------------------------------

    def var_of(self, name):
        return self.names.index(name)

    def dom_values(self, v):
        vals = self.values[v]
        return [vals[b] for b in _bits(self.dom[v])]

    def dom_size(self, v):
        return self.dom[v].bit_count()

    def value_live(self, v, value):
        return bool(self.dom[v] >> self.val_index[v][value] & 1)

    def value_expl(self, v, value):
        return self.removed_expl.get((v, self.val_index[v][value]), EMPTY_EXPL)

    def _rels_touching(self, v):
        bit = 1 << v
        return [r for r in self.rels if r.scope_mask & bit]

    def _tuple_consistent(self, varset_mask, varvals):
        """varvals: dict var->validx; checks every relation inside the set."""
        for r in self.rels:
            if r.scope_mask & ~varset_mask:
                continue
            self.counter.add()
            if not r.allows(tuple(varvals[v] for v in r.scope)):
                return False
        return True

    # -- removals -----------------------------------------------------------

    def _record(self, kind, scope_names, payload, witness):
        if self.ledger is not None:
            self.ledger.append((kind, scope_names, payload, witness))

    def _domain_wipe_expl(self, v):
        out = set()
        for b in range(len(self.values[v])):
            out |= self.removed_expl.get((v, b), EMPTY_EXPL)
        return frozenset(out)

    def _rel_empty_expl(self, r):
        out = set()
        for t in product(*(range(len(self.values[v])) for v in r.scope)):
            if r.allows(t):
                for v, b in zip(r.scope, t):
                    if not (self.dom[v] >> b & 1):
                        out |= self.removed_expl.get((v, b), EMPTY_EXPL)
            else:
                out |= r.dead_expl.get(t, EMPTY_EXPL)
        return frozenset(out)

    def remove_value(self, v, b, expl, witness=None):
        """Returns an EMPTY explanation if the state became empty, else None."""
        self.dom[v] &= ~(1 << b)
        self.removed_expl[(v, b)] = expl
        self._record("value", (self.names[v],), self.values[v][b],
                     None if witness is None else self.names[witness])
        if not self.dom[v]:
            return self._domain_wipe_expl(v)
        for r in self._rels_touching(v):
            if r.effectively_empty(self.dom):
                return self._rel_empty_expl(r)
        return None

    def _why_inconsistent(self, varset_mask, varvals):
        """Explanation for a currently inconsistent tuple over live values."""
        for r in self.rels:
            if r.scope_mask & ~varset_mask:
                continue
            t = tuple(varvals[v] for v in r.scope)
            if not r.allows(t):
                return r.absence_expl(t)
        return EMPTY_EXPL

    def _target_rel(self, varset):
        sset = frozenset(varset)
        for r in self.rels:
            if len(r.scope) == len(sset) and frozenset(r.scope) == sset:
                return r
        scope = tuple(sorted(sset))
        mask = 0
        for v in scope:
            mask |= 1 << v
        tuples = []
        dead = {}
        for t in product(*(range(len(self.values[v])) for v in scope)):
            alive = all(self.dom[v] >> b & 1 for v, b in zip(scope, t))
            if not alive:
                continue
            varvals = dict(zip(scope, t))
            if self._tuple_consistent(mask, varvals):
                tuples.append(t)
            else:
                dead[t] = self._why_inconsistent(mask, varvals)
        if len(scope) == 2:
            rows = [0] * len(self.values[scope[0]])
            for a, b in tuples:
                rows[a] |= 1 << b
            r = _Rel.binary(scope, rows, len(self.values[scope[1]]), None, dead)
        else:
            r = _Rel.nary(scope, set(tuples), None, dead)
        self.rels.append(r)
        return r

    def remove_tuple(self, svars, svals, expl, witness=None):
        r = self._target_rel(svars)
        order = {v: b for v, b in zip(svars, svals)}
        t = tuple(order[v] for v in r.scope)
        r.delete(t, expl)
        self._record("tuple", tuple(self.names[v] for v in r.scope),
                     tuple(self.values[v][b] for v, b in zip(r.scope, t)),
                     None if witness is None else self.names[witness])
        if r.effectively_empty(self.dom):
            return self._rel_empty_expl(r)
        return None

    # -- assignment (selection + projection) ---------------------------------

    def assign(self, v, value, level):
        """Project variable v out after selecting on v=value.

        Absent tuples of the reduced relations are explained by the selection
        level plus whatever already explained the pre-image's absence.
        """
        b = self.val_index[v][value]
        lev = frozenset((level,))
        new_rels = []
        for r in self.rels:
            if not (r.scope_mask >> v & 1):
                new_rels.append(r)
                continue
            if r.arity == 1:
                continue
            if r.arity == 2:
                pos = r.scope.index(v)
                other = r.scope[1 - pos]
                mask = r.support_mask(pos, b)
                dead = {}
                for ob in range(len(self.values[other])):
                    if not (mask >> ob & 1):
                        pre = (b, ob) if pos == 0 else (ob, b)
                        dead[(ob,)] = lev | r.dead_expl.get(pre, EMPTY_EXPL)
                new_rels.append(_Rel.unary((other,), mask, r.source, dead))
            else:
                pos = r.scope.index(v)
                scope = r.scope[:pos] + r.scope[pos + 1:]
                tset = {t[:pos] + t[pos + 1:] for t in r.tset if t[pos] == b}
                dead = {}
                for t in product(*(range(len(self.values[w])) for w in scope)):
                    if t in tset:
                        continue
                    pre = t[:pos] + (b,) + t[pos:]
                    dead[t] = lev | r.dead_expl.get(pre, EMPTY_EXPL)
                if len(scope) == 2:
                    rows = [0] * len(self.values[scope[0]])
                    for ta, tb in tset:
                        rows[ta] |= 1 << tb
                    new_rels.append(_Rel.binary(scope, rows,
                                                len(self.values[scope[1]]),
                                                r.source, dead))
                else:
                    new_rels.append(_Rel.nary(scope, tset, r.source, dead))
        self.rels = new_rels
        self.live.remove(v)

    # -- enforcement ---------------------------------------------------------

    def _unary_filter(self):
        """Node consistency: drop values violating unary relations."""
        changed = False
        for r in self.rels:
            if r.arity != 1:
                continue
            v = r.scope[0]
            bad = self.dom[v] & ~r.mask
            for b in _bits(bad):
                self.counter.add()
                expl = r.dead_expl.get((b,), EMPTY_EXPL)
                e = self.remove_value(v, b, expl, witness=None)
                changed = True
                if e is not None:
                    return changed, e
        return changed, None

    def _witness_expl(self, svals_by_var, varset_mask, z):
        """Why no value of z extends the tuple: union over z's full domain."""
        out = set()
        zmask = varset_mask | (1 << z)
        for c in range(len(self.values[z])):
            if not (self.dom[z] >> c & 1):
                out |= self.removed_expl.get((z, c), EMPTY_EXPL)
            else:
                varvals = dict(svals_by_var)
                varvals[z] = c
                out |= self._why_inconsistent(zmask, varvals)
        return frozenset(out)

    def _has_witness(self, svals_by_var, varset_mask, z):
        """Does some live value of z consistently extend the tuple?"""
        mask = self.dom[z]
        generic = []
        zbit = 1 << z
        for r in self.rels:
            if not (r.scope_mask & zbit) or (r.scope_mask & ~(varset_mask | zbit)):
                continue
            if r.arity == 2:
                pos = r.scope.index(z)
                other = r.scope[1 - pos]
                self.counter.add()
                mask &= r.support_mask(1 - pos, svals_by_var[other])
                if not mask:
                    return False
            elif r.arity == 1:
                self.counter.add()
                mask &= r.mask
                if not mask:
                    return False
            else:
                generic.append(r)
        if not generic:
            return bool(mask)
        for c in _bits(mask):
            ok = True
            for r in generic:
                self.counter.add()
                t = tuple(c if v == z else svals_by_var[v] for v in r.scope)
                if not r.allows(t):
                    ok = False
                    break
            if ok:
                return True
        return False

    def enforce(self, k):
        """Iterate to the strong-k fixpoint; returns (empty, explanation)."""
        changed = True
        while changed:
            changed = False
            ch, e = self._unary_filter()
            changed |= ch
            if e is not None:
                return True, e
            top = min(k, len(self.live))
            for j in range(2, top + 1):
                for svars in combinations(self.live, j - 1):
                    varset_mask = 0
                    for v in svars:
                        varset_mask |= 1 << v
                    for svals in product(*(list(_bits(self.dom[v])) for v in svars)):
                        svals_by_var = dict(zip(svars, svals))
                        if any(not (self.dom[v] >> b & 1)
                               for v, b in svals_by_var.items()):
                            continue
                        if not self._tuple_consistent(varset_mask, svals_by_var):
                            continue
                        for z in self.live:
                            if z in svals_by_var:
                                continue
                            if self._has_witness(svals_by_var, varset_mask, z):
                                continue
                            expl = self._witness_expl(svals_by_var, varset_mask, z)
                            if j == 2:
                                v = svars[0]
                                e = self.remove_value(v, svals[0], expl, witness=z)
                            else:
                                e = self.remove_tuple(svars, svals, expl, witness=z)
                            changed = True
                            if e is not None:
                                return True, e
                            break
        return False, None

    # -- reconstruction -------------------------------------------------------

    def to_problem(self):
        live_names = tuple(self.names[v] for v in sorted(self.live))
        order = sorted(self.live)
        doms = {self.names[v]: tuple(self.dom_values(v)) for v in order}
        cons = []
        for r in self.rels:
            scope_names = tuple(self.names[v] for v in r.scope)
            tuples = frozenset(
                tuple(self.values[v][b] for v, b in zip(r.scope, t))
                for t in r.live_tuples(self.dom)
            )
            cons.append(Constraint(scope_names, EXTENSIONAL, tuples))
        return Problem(live_names, doms, tuple(cons))


@dataclass
class KEnforcementResult:
    """Outcome of strong k-consistency enforcement."""

    empty: bool
    problem: Problem = None
    ledger: list = field(default_factory=list)
    explanation: frozenset = EMPTY_EXPL
    checks: int = 0


def enforce_strong_k(problem: Problem, k: int, counter=None) -> KEnforcementResult:
    """Enforce strong k-consistency to a global fixpoint.

    Removes node-inconsistent values, deletes tuples whose extensions all
    fail (creating the constraint over exactly the tuple's variables when
    absent), and reports EMPTY as soon as a domain or a relation (restricted
    to current domains) empties.
    """
    if k < 1:
        raise ParameterError(f"consistency level must be >= 1, got {k}")
    counter = counter or CheckCounter()
    start = counter.count
    st = KState.from_problem(problem, ledger=True, counter=counter)
    empty, expl = st.enforce(k)
    if empty:
        return KEnforcementResult(True, None, st.ledger, expl,
                                  counter.count - start)
    return KEnforcementResult(False, st.to_problem(), st.ledger, EMPTY_EXPL,
                              counter.count - start)


def is_k_consistent_node(problem: Problem, t: PartialSolution, k: int) -> bool:
    """A node is k-consistent when its induced problem survives strong-k
    enforcement without becoming empty."""
    return not enforce_strong_k(induce(problem, t), k).empty
