"""CNF formulas, a small conflict-driven SAT solver, and DIMACS I/O.

The solver is a DPLL search with two-watched-literal unit propagation,
first-UIP conflict analysis and non-chronological backjumping. It keeps
every learned clause and restarts on a geometric schedule. That is enough
for desk-scale planning encodings; larger instances should be exported with
:func:`to_dimacs` and handed to an external solver.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import ParseError


@dataclass
class CnfFormula:
    var_count: int = 0
    clauses: list[tuple[int, ...]] = field(default_factory=list)

    def __post_init__(self):
        self.clauses = [tuple(c) for c in self.clauses]
        for c in self.clauses:
            self._check(c)

    def _check(self, clause: tuple[int, ...]) -> None:
        if not clause:
            raise ValueError("empty clause")
        for lit in clause:
            if lit == 0 or abs(lit) > self.var_count:
                raise ValueError(f"literal {lit} outside 1..{self.var_count}")

    def new_var(self) -> int:
        self.var_count += 1
        return self.var_count

    def add(self, clause: Iterable[int]) -> None:
        c = tuple(clause)
        self._check(c)
        self.clauses.append(c)

    def satisfied_by(self, assignment: dict[int, bool]) -> bool:
        return all(any(assignment.get(abs(l), False) == (l > 0) for l in c) for c in self.clauses)


class _Solver:
    def __init__(self, var_count: int, clauses: Iterable[Iterable[int]]):
        self.n = var_count
        self.value = [0] * (var_count + 1)  # 1 true, -1 false, 0 unassigned
        self.level = [0] * (var_count + 1)
        self.reason: list[Optional[int]] = [None] * (var_count + 1)
        self.activity = [0.0] * (var_count + 1)
        self.phase = [False] * (var_count + 1)
        self.bump_step = 1.0
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.clauses: list[list[int]] = []
        self.watches: dict[int, list[int]] = {}
        for v in range(1, var_count + 1):
            self.watches[v] = []
            self.watches[-v] = []
        self.heap = [(0.0, v) for v in range(1, var_count + 1)]
        self.ok = True
        for c in clauses:
            self._add_input(c)

    def _lit_val(self, lit: int) -> int:
        v = self.value[abs(lit)]
        return v if lit > 0 else -v

    def _add_input(self, clause: Iterable[int]) -> None:
        lits = []
        for lit in dict.fromkeys(clause):
            if -lit in lits:
                return  # tautology
            lits.append(lit)
        lits = [l for l in lits if self._lit_val(l) != -1]
        if any(self._lit_val(l) == 1 for l in lits):
            return
        if not lits:
            self.ok = False
        elif len(lits) == 1:
            self._enqueue(lits[0], None)
            if self._propagate() is not None:
                self.ok = False
        else:
            self._attach(lits)

    def _attach(self, lits: list[int]) -> int:
        ci = len(self.clauses)
        self.clauses.append(lits)
        self.watches[lits[0]].append(ci)
        self.watches[lits[1]].append(ci)
        return ci

    def _enqueue(self, lit: int, reason: Optional[int]) -> None:
        v = abs(lit)
        self.value[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self) -> Optional[int]:
        """Unit propagation; returns a conflicting clause index or None."""
        while self.qhead < len(self.trail):
            false_lit = -self.trail[self.qhead]
            self.qhead += 1
            ws = self.watches[false_lit]
            kept = []
            for k, ci in enumerate(ws):
                c = self.clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                if self._lit_val(c[0]) == 1:
                    kept.append(ci)
                    continue
                for t in range(2, len(c)):
                    if self._lit_val(c[t]) != -1:
                        c[1], c[t] = c[t], c[1]
                        self.watches[c[1]].append(ci)
                        break
                else:
                    kept.append(ci)
                    if self._lit_val(c[0]) == -1:
                        kept.extend(ws[k + 1:])
                        self.watches[false_lit] = kept
                        return ci
                    self._enqueue(c[0], ci)
            self.watches[false_lit] = kept
        return None

    def _bump(self, v: int) -> None:
        self.activity[v] += self.bump_step
        if self.activity[v] > 1e100:
            self.activity = [a * 1e-100 for a in self.activity]
            self.bump_step *= 1e-100
            self.heap = [(-self.activity[u], u) for u in range(1, self.n + 1) if self.value[u] == 0]
            heapq.heapify(self.heap)
        elif self.value[v] == 0:
            heapq.heappush(self.heap, (-self.activity[v], v))

    def _analyze(self, ci: int) -> tuple[list[int], int]:
        """First-UIP learned clause and the level to jump back to."""
        current = len(self.trail_lim)
        seen = set()
        learnt = [0]
        counter = 0
        idx = len(self.trail) - 1
        clause = self.clauses[ci]
        while True:
            for q in clause:
                v = abs(q)
                if v in seen or self.level[v] == 0:
                    continue
                seen.add(v)
                self._bump(v)
                if self.level[v] == current:
                    counter += 1
                else:
                    learnt.append(q)
            while abs(self.trail[idx]) not in seen:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            counter -= 1
            if counter == 0:
                break
            clause = self.clauses[self.reason[abs(p)]]
        learnt[0] = -p
        self.bump_step *= 1.05
        if len(learnt) == 1:
            return learnt, 0
        best = max(range(1, len(learnt)), key=lambda i: self.level[abs(learnt[i])])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, self.level[abs(learnt[1])]

    def _backtrack(self, level: int) -> None:
        if len(self.trail_lim) <= level:
            return
        stop = self.trail_lim[level]
        for lit in self.trail[stop:]:
            v = abs(lit)
            self.phase[v] = lit > 0
            self.value[v] = 0
            self.reason[v] = None
            heapq.heappush(self.heap, (-self.activity[v], v))
        del self.trail[stop:]
        del self.trail_lim[level:]
        self.qhead = len(self.trail)

    def _decide(self) -> Optional[int]:
        while self.heap:
            _, v = heapq.heappop(self.heap)
            if self.value[v] == 0:
                return v if self.phase[v] else -v
        return None

    def solve(self) -> Optional[dict[int, bool]]:
        if not self.ok or self._propagate() is not None:
            return None
        conflicts = 0
        restart_at = 100
        while True:
            ci = self._propagate()
            if ci is not None:
                if not self.trail_lim:
                    return None
                conflicts += 1
                learnt, back = self._analyze(ci)
                self._backtrack(back)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self._enqueue(learnt[0], self._attach(learnt))
                continue
            if conflicts >= restart_at:
                restart_at = int(restart_at * 1.5) + conflicts
                self._backtrack(0)
                continue
            lit = self._decide()
            if lit is None:
                return {v: self.value[v] > 0 for v in range(1, self.n + 1)}
            self.trail_lim.append(len(self.trail))
            self._enqueue(lit, None)


def sat_solve(f: CnfFormula) -> Optional[dict[int, bool]]:
    """Return a total satisfying assignment, or ``None`` when unsatisfiable."""
    return _Solver(f.var_count, f.clauses).solve()


def to_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.var_count} {len(f.clauses)}"]
    lines.extend(" ".join(map(str, c)) + " 0" for c in f.clauses)
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    """Read a DIMACS CNF file; clauses may span lines."""
    header = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(lineno, f"bad problem line {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError(lineno, f"bad problem line {line!r}") from None
            continue
        if header is None:
            raise ParseError(lineno, "clause before problem line")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(lineno, f"bad literal {tok!r}") from None
            if abs(lit) > header[0]:
                raise ParseError(lineno, f"literal {lit} exceeds declared {header[0]} variables")
            if lit == 0:
                if not current:
                    raise ParseError(lineno, "empty clause")
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if header is None:
        raise ParseError(0, "missing problem line")
    if current:
        clauses.append(tuple(current))
    return CnfFormula(header[0], clauses)


def from_dimacs_result(text: str, var_count: Optional[int] = None) -> Optional[dict[int, bool]]:
    """Parse solver output in the SAT-competition format.

    Returns the model for ``s SATISFIABLE`` (variables not mentioned are
    false) and ``None`` for ``s UNSATISFIABLE``.
    """
    status = None
    model: dict[int, bool] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("s "):
            word = line[2:].strip()
            if word not in ("SATISFIABLE", "UNSATISFIABLE"):
                raise ParseError(lineno, f"unsupported status {word!r}")
            status = word
        elif line.startswith("v"):
            for tok in line[1:].split():
                try:
                    lit = int(tok)
                except ValueError:
                    raise ParseError(lineno, f"bad value literal {tok!r}") from None
                if lit:
                    model[abs(lit)] = lit > 0
        else:
            raise ParseError(lineno, f"unexpected line {line!r}")
    if status is None:
        raise ParseError(0, "no status line")
    if status == "UNSATISFIABLE":
        return None
    if var_count is not None:
        for v in range(1, var_count + 1):
            model.setdefault(v, False)
    return model
