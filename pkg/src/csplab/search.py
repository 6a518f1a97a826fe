"""Backtracking engine with pluggable look-ahead and look-back.

Look-ahead schemes:
  * bc       - backward checking: test each new assignment against the
               constraints it completes;
  * mc:k     - maintain strong k-consistency on the problem induced by the
               current partial solution (extensional problems only);
  * gac      - maintain generalized arc consistency over pruned domains.

Look-back schemes: chronological, level-capped backjumping (bj:k), and
conflict-directed backjumping (cbj).

Stateful look-aheads follow the classical maintenance discipline: a value
whose subtree is refuted is eliminated from the current domain state and the
state is re-propagated, so a level can dead-end before its remaining values
are tried.  A node counts as visited the moment the assignment extends the
partial solution, before any checking; the root is not counted.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field

from .core import (
    ConfigurationError,
    ParameterError,
    PartialSolution,
    Problem,
)
from .consistency import EMPTY_EXPL, CheckCounter, KState, _bits
from .heuristics import HeuristicSpec, lex_spec, select_variable

COMPLETE = "complete"
NODE_LIMIT = "node_limit"
TIME_LIMIT = "time_limit"

FIRST = "first"
ALL = "all"
COUNT = "count"

JUMP = "jump"
CHRONO = "chrono"
CAPPED = "capped"


@dataclass(frozen=True)
class SolverConfig:
    """One point in the algorithm lattice."""

    lookahead: object = "bc"          # 'bc' | ('mc', k) | 'gac'
    lookback: object = "chrono"       # 'chrono' | ('bj', k) | 'cbj'
    heuristic: HeuristicSpec = None
    mode: str = FIRST
    node_limit: int = None
    time_limit: float = None

    def __post_init__(self):
        if self.heuristic is None:
            object.__setattr__(self, "heuristic", lex_spec())
        la, lb = self.lookahead, self.lookback
        if isinstance(la, tuple):
            if la[0] != "mc" or la[1] < 1:
                raise ParameterError(f"bad lookahead {la!r}")
        elif la not in ("bc", "gac"):
            raise ParameterError(f"bad lookahead {la!r}")
        if isinstance(lb, tuple):
            if lb[0] != "bj" or lb[1] < 1:
                raise ParameterError(f"bad lookback {lb!r}")
        elif lb not in ("chrono", "cbj"):
            raise ParameterError(f"bad lookback {lb!r}")
        if self.mode not in (FIRST, ALL, COUNT):
            raise ParameterError(f"bad mode {self.mode!r}")

    @property
    def needs_conflicts(self):
        return self.lookback != "chrono"

    def label(self):
        la = self.lookahead if isinstance(self.lookahead, str) \
            else f"mc:{self.lookahead[1]}"
        lb = self.lookback if isinstance(self.lookback, str) \
            else f"bj:{self.lookback[1]}"
        return f"{la}+{lb}"


@dataclass
class BackjumpEvent:
    """One performed retreat."""

    from_level: int
    destination: int
    level: int                # recursive backjump-level classification
    kind: str                 # jump | chrono | capped
    cause: str                # values-exhausted | wipeout | solutions-found


@dataclass
class _Frame:
    level: int
    var: str
    value_pos: int = -1           # index into the static value order
    current_value: object = None
    assigned: bool = False
    state_mark: object = None
    conflict: set = field(default_factory=set)
    entry_solutions: int = 0
    incoming_max: int = 0
    killed: bool = False          # parent state died; no further candidates
    cause: str = "values-exhausted"


class SearchState:
    """Frames plus global counters; one per solve call."""

    def __init__(self):
        self.frames = []
        self.solutions_found = 0

    def frame(self, level):
        return self.frames[level - 1]


@dataclass
class SearchReport:
    status: str
    mode: str
    solution_count: int = 0
    solutions: list = None
    nodes: int = 0
    checks: int = 0
    backjump_histogram: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0
    events: list = None

    @property
    def backjumps_total(self):
        return sum(self.backjump_histogram.values())

    def to_dict(self, include_trace=True):
        out = {
            "status": self.status,
            "solutions": self.solution_count,
            "nodes": self.nodes,
            "checks": self.checks,
            "backjump_histogram": {str(k): v for k, v in
                                   sorted(self.backjump_histogram.items())},
            "elapsed_ms": self.elapsed_ms,
        }
        if self.solutions is not None:
            out["solution_list"] = [list(map(list, s.items)) for s in self.solutions]
        if include_trace and self.events is not None:
            out["trace"] = [[list(p) for p in node] for node in capture_trace(self)]
            out["events"] = [list(e) for e in self.events]
            out["mode"] = self.mode
        return out


class TraceUnavailableError(ConfigurationError):
    pass


def capture_trace(report: SearchReport):
    """Ordered list of visited nodes, each as its assignment sequence."""
    if report.events is None:
        raise TraceUnavailableError("solve ran without trace capture")
    path = []
    nodes = []
    for ev in report.events:
        tag = ev[0]
        if tag == "visit":
            _, level, var, value, verdict = ev
            del path[level - 1:]
            path.append((var, value))
            nodes.append(tuple(path))
            if verdict == "reject":
                del path[level - 1:]
        elif tag == "retreat":
            dest = ev[2]
            del path[dest:]
    return nodes


def lookback_destination(state: SearchState, from_level: int,
                         config: SolverConfig) -> BackjumpEvent:
    """Where a dead-end at from_level retreats to, and the event metadata.

    Chronological look-back always steps one level.  CBJ and BJ(k) step one
    level when solutions arrived since the level was entered, otherwise jump
    to the deepest conflict-set member; BJ(k) overrides jumps whose recursive
    level exceeds the cap back to a one-level retreat.
    """
    f = state.frame(from_level)
    level = 1 if f.incoming_max == 0 else f.incoming_max + 1
    cause = f.cause
    if config.lookback == "chrono":
        return BackjumpEvent(from_level, from_level - 1, level, CHRONO, cause)
    if config.mode in (ALL, COUNT) and state.solutions_found != f.entry_solutions:
        return BackjumpEvent(from_level, from_level - 1, level, CHRONO,
                             "solutions-found")
    dest = max(f.conflict) if f.conflict else 0
    if isinstance(config.lookback, tuple) and level > config.lookback[1]:
        return BackjumpEvent(from_level, from_level - 1, level, CAPPED, cause)
    return BackjumpEvent(from_level, dest, level, JUMP, cause)


def record_incoming(state: SearchState, event: BackjumpEvent):
    """Feed a performed retreat into the destination's incoming-level
    tracker (the tracker dies with the destination's instantiation window)."""
    if event.destination >= 1:
        f = state.frame(event.destination)
        f.incoming_max = max(f.incoming_max, event.level)


# ---------------------------------------------------------------------------
# Look-ahead runtimes
# ---------------------------------------------------------------------------


class _BcRuntime:
    """Backward checking: no domain state, just assignment bookkeeping."""

    def __init__(self, problem: Problem, counter: CheckCounter):
        self.problem = problem
        self.counter = counter
        self.assigned = {}
        self.level_of = {}
        self.cons_by_var = {v: [] for v in problem.variables}
        for ci, c in enumerate(problem.constraints):
            for v in c.scope:
                self.cons_by_var[v].append(ci)

    def root(self):
        return True, EMPTY_EXPL

    def value_available(self, var, value):
        return True

    def try_assign(self, level, var, value):
        """Check the newly completed constraints, shallowest partner first;
        the first violated constraint supplies the conflict levels."""
        cands = []
        for ci in self.cons_by_var[var]:
            c = self.problem.constraints[ci]
            ok = True
            deepest = 0
            for w in c.scope:
                if w == var:
                    continue
                lw = self.level_of.get(w)
                if lw is None:
                    ok = False
                    break
                deepest = max(deepest, lw)
            if ok:
                cands.append((deepest, ci, c))
        cands.sort(key=lambda t: (t[0], t[1]))
        for _, _, c in cands:
            self.counter.add()
            vals = tuple(value if w == var else self.assigned[w] for w in c.scope)
            if not c.allows(vals):
                expl = frozenset(self.level_of[w] for w in c.scope if w != var)
                return False, expl, False, EMPTY_EXPL
        self.assigned[var] = value
        self.level_of[var] = level
        return True, None, False, EMPTY_EXPL

    def unassign(self, level, var):
        del self.assigned[var]
        del self.level_of[var]

    def eliminate(self, level, var, value, expl):
        return False, EMPTY_EXPL

    def dead_value_explanations(self, var):
        return EMPTY_EXPL

    def dom_size(self, var):
        """Values not in conflict with past instantiations."""
        count = 0
        for a in self.problem.domains[var]:
            good = True
            for ci in self.cons_by_var[var]:
                c = self.problem.constraints[ci]
                if any(w != var and w not in self.assigned for w in c.scope):
                    continue
                vals = tuple(a if w == var else self.assigned[w] for w in c.scope)
                if not c.allows(vals):
                    good = False
                    break
            if good:
                count += 1
        return count


class _GacRuntime:
    """Maintains generalized arc consistency over an indexed domain view."""

    def __init__(self, problem: Problem, counter: CheckCounter, explain: bool):
        self.problem = problem
        self.counter = counter
        self.explain = explain
        self.accept_marks = {}
        self.names = tuple(problem.variables)
        self.vpos = {v: i for i, v in enumerate(self.names)}
        self.values = tuple(tuple(problem.domains[v]) for v in self.names)
        self.val_index = tuple({a: i for i, a in enumerate(vals)}
                               for vals in self.values)
        self.full = [(1 << len(vals)) - 1 for vals in self.values]
        self.dom = list(self.full)
        self.trail = []              # (vidx, bit, expl)
        self.removed_expl = {}
        self.level_of = {}           # vidx -> level
        self.cons = []
        self.by_var = [[] for _ in self.names]
        for ci, c in enumerate(problem.constraints):
            scope = tuple(self.vpos[v] for v in c.scope)
            entry = self._index_constraint(c, scope)
            self.cons.append(entry)
            for v in scope:
                self.by_var[v].append(ci)

    def _index_constraint(self, c, scope):
        kind = c.kind
        if kind == "extensional" and len(scope) == 1:
            mask = 0
            for (a,) in c.tuples:
                mask |= 1 << self.val_index[scope[0]][a]
            return ("unary", scope, mask)
        if kind == "extensional" and len(scope) == 2:
            x, y = scope
            rows = [0] * len(self.values[x])
            cols = [0] * len(self.values[y])
            for a, b in c.tuples:
                ai, bi = self.val_index[x][a], self.val_index[y][b]
                rows[ai] |= 1 << bi
                cols[bi] |= 1 << ai
            return ("bin", scope, rows, cols)
        if kind == "not_equal":
            x, y = scope
            fwd = [self.val_index[y].get(a, -1) for a in self.values[x]]
            rev = [self.val_index[x].get(b, -1) for b in self.values[y]]
            return ("ne", scope, fwd, rev)
        if kind == "letter_equality":
            x, y = scope
            pa, pb = c.params["posA"], c.params["posB"]
            by_b = {}
            for bi, w in enumerate(self.values[y]):
                if pb < len(w):
                    by_b.setdefault(w[pb], 0)
                    by_b[w[pb]] |= 1 << bi
            by_a = {}
            for ai, w in enumerate(self.values[x]):
                if pa < len(w):
                    by_a.setdefault(w[pa], 0)
                    by_a[w[pa]] |= 1 << ai
            return ("letter", scope, (pa, pb), by_b, by_a)
        return ("gen", scope, c)

    # -- bookkeeping ---------------------------------------------------------

    def mark(self):
        return len(self.trail)

    def undo(self, mark):
        while len(self.trail) > mark:
            v, bit, _ = self.trail.pop()
            self.dom[v] |= 1 << bit
            del self.removed_expl[(v, bit)]

    def _remove(self, v, bit, expl):
        self.dom[v] &= ~(1 << bit)
        self.trail.append((v, bit, expl))
        if self.explain:
            self.removed_expl[(v, bit)] = expl
        else:
            self.removed_expl[(v, bit)] = EMPTY_EXPL

    def _wipe_expl(self, v):
        out = set()
        for b in range(len(self.values[v])):
            out |= self.removed_expl.get((v, b), EMPTY_EXPL)
        return frozenset(out)

    def _support_mask(self, entry, from_side, val_bit):
        """Mask of partner values supporting val_bit; one check counted."""
        self.counter.add()
        kind = entry[0]
        if kind == "bin":
            return entry[2][val_bit] if from_side == 0 else entry[3][val_bit]
        if kind == "ne":
            partner = entry[2][val_bit] if from_side == 0 else entry[3][val_bit]
            y = entry[1][1 - from_side]
            full = self.full[y]
            return full & ~(1 << partner) if partner >= 0 else full
        if kind == "letter":
            scope, (pa, pb) = entry[1], entry[2]
            if from_side == 0:
                w = self.values[scope[0]][val_bit]
                return entry[3].get(w[pa], 0) if pa < len(w) else 0
            w = self.values[scope[1]][val_bit]
            return entry[4].get(w[pb], 0) if pb < len(w) else 0
        raise AssertionError(kind)

    def _revise(self, ci, x):
        """Returns (removed_any, wiped)."""
        entry = self.cons[ci]
        kind, scope = entry[0], entry[1]
        removed = False
        if kind == "unary":
            bad = self.dom[x] & ~entry[2]
            for b in _bits(bad):
                self.counter.add()
                self._remove(x, b, EMPTY_EXPL)
                removed = True
        elif kind == "gen":
            c = entry[2]
            xi = scope.index(x)
            name_scope = c.scope
            for b in list(_bits(self.dom[x])):
                supported = False
                for t in c.sorted_tuples():
                    self.counter.add()
                    idx = [self.val_index[v][a] for v, a in zip(scope, t)]
                    if idx[xi] == b and all(self.dom[v] >> i & 1
                                            for v, i in zip(scope, idx)):
                        supported = True
                        break
                if not supported:
                    expl = self._gen_expl(c, scope, xi, b) if self.explain \
                        else EMPTY_EXPL
                    self._remove(x, b, expl)
                    removed = True
        else:
            side = scope.index(x)
            y = scope[1 - side]
            dy = self.dom[y]
            for b in list(_bits(self.dom[x])):
                support = self._support_mask(entry, side, b)
                if not (support & dy):
                    expl = self._pair_expl(entry, side, b, support) \
                        if self.explain else EMPTY_EXPL
                    self._remove(x, b, expl)
                    removed = True
        return removed, removed and not self.dom[x]

    def _pair_expl(self, entry, side, b, support):
        scope = entry[1]
        y = scope[1 - side]
        expl = set()
        for w in scope:
            if w in self.level_of:
                expl.add(self.level_of[w])
        for db in _bits(support & ~self.dom[y]):
            expl |= self.removed_expl.get((y, db), EMPTY_EXPL)
        return frozenset(expl)

    def _gen_expl(self, c, scope, xi, b):
        expl = set()
        for w in scope:
            if w in self.level_of:
                expl.add(self.level_of[w])
        a = self.values[scope[xi]][b]
        for t in c.tuples:
            if t[xi] != a:
                continue
            for pos, (v, tv) in enumerate(zip(scope, t)):
                if pos == xi:
                    continue
                tb = self.val_index[v][tv]
                if not (self.dom[v] >> tb & 1):
                    expl |= self.removed_expl.get((v, tb), EMPTY_EXPL)
        return frozenset(expl)

    def _propagate(self, seed_vars):
        from collections import deque

        queue = deque()
        if seed_vars is None:
            for ci, entry in enumerate(self.cons):
                for v in entry[1]:
                    queue.append((ci, v))
        else:
            for sv in seed_vars:
                for ci in self.by_var[sv]:
                    for v in self.cons[ci][1]:
                        if v != sv:
                            queue.append((ci, v))
        while queue:
            ci, x = queue.popleft()
            removed, wiped = self._revise(ci, x)
            if wiped:
                return self._wipe_expl(x)
            if removed:
                for cj in self.by_var[x]:
                    for y in self.cons[cj][1]:
                        if y != x:
                            queue.append((cj, y))
        return None

    # -- engine interface ------------------------------------------------------

    def root(self):
        wipe = self._propagate(None)
        if wipe is not None:
            return False, wipe
        return True, EMPTY_EXPL

    def value_available(self, var, value):
        v = self.vpos[var]
        return bool(self.dom[v] >> self.val_index[v][value] & 1)

    def try_assign(self, level, var, value):
        v = self.vpos[var]
        b = self.val_index[v][value]
        mark = self.mark()
        self.level_of[v] = level
        lev = frozenset((level,))
        for ob in list(_bits(self.dom[v])):
            if ob != b:
                self._remove(v, ob, lev)
        wipe = self._propagate([v])
        if wipe is None:
            self.accept_marks[(level, var)] = mark
            return True, None, False, EMPTY_EXPL
        del self.level_of[v]
        self.undo(mark)
        reject = frozenset(wipe - {level})
        dead, dead_expl = self.eliminate(level, var, value, reject)
        return False, reject, dead, dead_expl

    def unassign(self, level, var):
        v = self.vpos[var]
        del self.level_of[v]
        self.undo(self.accept_marks.pop((level, var)))

    def eliminate(self, level, var, value, expl):
        v = self.vpos[var]
        b = self.val_index[v][value]
        if self.dom[v] >> b & 1:
            self._remove(v, b, expl)
            if not self.dom[v]:
                return True, self._wipe_expl(v)
            wipe = self._propagate([v])
            if wipe is not None:
                return True, frozenset(wipe)
        return False, EMPTY_EXPL

    def dead_value_explanations(self, var):
        v = self.vpos[var]
        out = set()
        for b in range(len(self.values[v])):
            if not (self.dom[v] >> b & 1):
                out |= self.removed_expl.get((v, b), EMPTY_EXPL)
        return frozenset(out)

    def dom_size(self, var):
        return self.dom[self.vpos[var]].bit_count()


class _McRuntime:
    """Maintains strong k-consistency through a stack of induced states."""

    def __init__(self, problem: Problem, k: int, counter: CheckCounter):
        if not problem.is_extensional():
            raise ConfigurationError(
                "mc look-ahead needs an extensional problem; materialize first")
        self.problem = problem
        self.k = k
        self.counter = counter
        self.vpos = {v: i for i, v in enumerate(problem.variables)}
        self.states = []

    def root(self):
        st = KState.from_problem(self.problem, counter=self.counter)
        empty, expl = st.enforce(self.k)
        if empty:
            return False, expl
        self.states.append(st)
        return True, EMPTY_EXPL

    @property
    def top(self):
        return self.states[-1]

    def value_available(self, var, value):
        return self.top.value_live(self.vpos[var], value)

    def try_assign(self, level, var, value):
        child = self.top.copy()
        child.assign(self.vpos[var], value, level)
        empty, expl = child.enforce(self.k)
        if not empty:
            self.states.append(child)
            return True, None, False, EMPTY_EXPL
        reject = frozenset(expl - {level})
        dead, dead_expl = self.eliminate(level, var, value, reject)
        return False, reject, dead, dead_expl

    def unassign(self, level, var):
        self.states.pop()

    def eliminate(self, level, var, value, expl):
        st = self.top
        v = self.vpos[var]
        if st.value_live(v, value):
            e = st.remove_value(v, st.val_index[v][value], expl)
            if e is not None:
                return True, frozenset(e)
            empty, e2 = st.enforce(self.k)
            if empty:
                return True, frozenset(e2)
        return False, EMPTY_EXPL

    def dead_value_explanations(self, var):
        st = self.top
        v = self.vpos[var]
        out = set()
        for value in self.problem.domains[var]:
            if not st.value_live(v, value):
                out |= st.value_expl(v, value)
        return frozenset(out)

    def dom_size(self, var):
        return self.top.dom_size(self.vpos[var])


# ---------------------------------------------------------------------------
# The engine
# ---------------------------------------------------------------------------


class _HeuristicView:
    """What a variable-ordering heuristic may look at."""

    def __init__(self, engine):
        self._e = engine

    @property
    def unassigned(self):
        e = self._e
        return [v for v in e.problem.variables if v not in e.assigned_vars]

    def dom_size(self, var):
        return self._e.runtime.dom_size(var)

    def degree(self, var):
        return self._e.degrees[var]

    @property
    def path(self):
        return tuple(self._e.path)


class _Engine:
    def __init__(self, problem, config, trace):
        self.problem = problem
        self.config = config
        self.trace = trace
        self.counter = CheckCounter()
        self.state = SearchState()
        self.events = [] if trace else None
        self.histogram = Counter()
        self.nodes = 0
        self.solutions = []
        self.keep_solutions = config.mode in (FIRST, ALL)
        self.degrees = {v: problem.degree(v) for v in problem.variables}
        self.assigned_vars = set()
        self.path = []
        la = config.lookahead
        explain = config.needs_conflicts
        if la == "bc":
            self.runtime = _BcRuntime(problem, self.counter)
        elif la == "gac":
            self.runtime = _GacRuntime(problem, self.counter, explain)
            self.runtime._accept_marks = {}
        else:
            if la[1] >= 1 and not problem.is_extensional():
                raise ConfigurationError(
                    "mc look-ahead requires extensional constraints")
            self.runtime = _McRuntime(problem, la[1], self.counter)
        self.view = _HeuristicView(self)

    def log(self, *ev):
        if self.events is not None:
            self.events.append(ev)

    def run(self):
        t0 = time.perf_counter()
        status = COMPLETE
        config = self.config
        problem = self.problem
        n = problem.n
        ok, _ = self.runtime.root()
        if ok and n > 0:
            self._push_level()
            status = self._loop()
        elif ok and n == 0:
            self.state.solutions_found = 1
            if self.keep_solutions:
                self.solutions.append(PartialSolution())
        elapsed = (time.perf_counter() - t0) * 1000.0
        return SearchReport(
            status=status,
            mode=config.mode,
            solution_count=self.state.solutions_found,
            solutions=self.solutions if self.keep_solutions else None,
            nodes=self.nodes,
            checks=self.counter.count,
            backjump_histogram=dict(self.histogram),
            elapsed_ms=elapsed,
            events=self.events,
        )

    def _push_level(self):
        level = len(self.state.frames) + 1
        var = select_variable(self.view, self.config.heuristic)
        f = _Frame(level=level, var=var,
                   entry_solutions=self.state.solutions_found)
        self.state.frames.append(f)
        self.log("enter", level, var)

    def _next_value(self, f):
        dom = self.problem.domains[f.var]
        i = f.value_pos + 1
        while i < len(dom):
            if self.runtime.value_available(f.var, dom[i]):
                f.value_pos = i
                return dom[i]
            i += 1
        f.value_pos = i
        return None

    def _loop(self):
        config = self.config
        state = self.state
        frames = state.frames
        n = self.problem.n
        node_limit = config.node_limit
        time_limit = config.time_limit
        t0 = time.perf_counter()
        since_clock = 0
        while frames:
            f = frames[-1]
            val = None if f.killed else self._next_value(f)
            if val is None:
                if self._retreat(f):
                    continue
                return COMPLETE
            if node_limit is not None and self.nodes >= node_limit:
                return NODE_LIMIT
            if time_limit is not None:
                since_clock += 1
                if since_clock >= 256:
                    since_clock = 0
                    if time.perf_counter() - t0 > time_limit:
                        return TIME_LIMIT
            self.nodes += 1
            level = f.level
            ok, payload, dead, dead_expl = self.runtime.try_assign(
                level, f.var, val)
            if ok:
                f.current_value = val
                f.assigned = True
                f.state_mark = payload
                if isinstance(self.runtime, _GacRuntime):
                    self.runtime._accept_marks[(level, f.var)] = payload
                self.assigned_vars.add(f.var)
                self.path.append((f.var, val))
                if level == n:
                    self.log("visit", level, f.var, val, "solution")
                    state.solutions_found += 1
                    if self.keep_solutions:
                        self.solutions.append(PartialSolution(tuple(self.path)))
                    if config.mode == FIRST:
                        return COMPLETE
                    self._unassign_top(f)
                else:
                    self.log("visit", level, f.var, val, "accept")
                    self._push_level()
            else:
                self.log("visit", level, f.var, val, "reject")
                if config.needs_conflicts:
                    f.conflict.update(payload - {level})
                if dead:
                    f.killed = True
                    f.cause = "wipeout"
                    if config.needs_conflicts:
                        f.conflict.update(dead_expl - {level})
        return COMPLETE

    def _unassign_top(self, f):
        self.runtime.unassign(f.level, f.var)
        self.assigned_vars.discard(f.var)
        self.path.pop()
        f.assigned = False
        f.current_value = None

    def _retreat(self, f):
        """Handle a dead-end at the top frame; False ends the search."""
        config = self.config
        state = self.state
        if config.needs_conflicts:
            f.conflict.update(
                self.runtime.dead_value_explanations(f.var) - {f.level})
        ev = lookback_destination(state, f.level, config)
        self.histogram[ev.level] += 1
        self.log("retreat", ev.from_level, ev.destination, ev.level,
                 ev.kind, ev.cause)
        record_incoming(state, ev)
        merged = None
        if config.needs_conflicts and ev.kind in (JUMP, CAPPED):
            merged = ev.conflict_payload(f.conflict, ev.destination)
        state.frames.pop()
        while len(state.frames) > ev.destination:
            g = state.frames.pop()
            if g.assigned:
                self._unassign_top(g)
        if ev.destination == 0:
            return False
        d = state.frames[-1]
        revoked = d.current_value
        self._unassign_top(d)
        if merged is not None:
            d.conflict.update(merged)
        if ev.kind in (JUMP, CAPPED):
            expl = frozenset(l for l in d.conflict if l < d.level) \
                if config.needs_conflicts else EMPTY_EXPL
        else:
            expl = frozenset(range(1, d.level))
        dead, dead_expl = self.runtime.eliminate(d.level, d.var, revoked, expl)
        if dead:
            d.killed = True
            d.cause = "wipeout"
            if config.needs_conflicts:
                d.conflict.update(dead_expl - {d.level})
        return True


def solve(problem: Problem, config: SolverConfig, trace: bool = False) -> SearchReport:
    """Depth-first search over the problem under the given configuration."""
    return _Engine(problem, config, trace).run()
