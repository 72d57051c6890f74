"""Integer difference logic with a disjunctive Boolean skeleton.

A problem is a conjunction of clauses; each clause is a disjunction of
*cubes*, each cube a conjunction of difference atoms ``x - y <= c``. Unit
facts are single-cube clauses. Variable 0 is the distinguished zero
variable, so ``x <= c`` is written ``x - Z <= c``.

The decision procedure is a model-guided depth-first search: keep a
feasible potential function for the asserted atoms, pick a clause the
current potentials violate, and branch over its cubes. Asserting a cube
adds graph edges and repairs the potentials incrementally; a negative
cycle (the repair reaches the tail of the new edge) closes the branch.
"""
from __future__ import annotations

from dataclasses import dataclass, field

ZERO = 0


@dataclass(frozen=True)
class DiffAtom:
    """``x - y <= c`` over variable ids."""

    x: int
    y: int
    c: int

    def holds(self, values) -> bool:
        return values[self.x] - values[self.y] <= self.c

    def negate(self) -> "DiffAtom":
        return DiffAtom(self.y, self.x, -self.c - 1)


Cube = tuple  # of DiffAtom
Clause = tuple  # of Cube


@dataclass
class ConstraintProblem:
    names: list = field(default_factory=lambda: ["Z"])
    clauses: list = field(default_factory=list)

    @property
    def num_vars(self) -> int:
        return len(self.names)

    def new_var(self, name: str | None = None) -> int:
        self.names.append(name or f"v{len(self.names)}")
        return len(self.names) - 1

    def add_clause(self, cubes) -> None:
        cubes = tuple(tuple(c) for c in cubes)
        self.clauses.append(cubes)

    def add(self, *atoms: DiffAtom) -> None:
        """Assert a conjunction of atoms as unit facts."""
        for a in atoms:
            self.clauses.append(((a,),))

    def add_bounds(self, v: int, lo: int, hi: int) -> None:
        self.add(DiffAtom(v, ZERO, hi), DiffAtom(ZERO, v, -lo))

    def atoms(self):
        for clause in self.clauses:
            for cube in clause:
                yield from cube


@dataclass
class SolveStats:
    decisions: int = 0
    conflicts: int = 0


def cube_holds(cube, values) -> bool:
    return all(a.holds(values) for a in cube)


def verify(p: ConstraintProblem, values) -> bool:
    """Independent check that every clause has a satisfied cube."""
    if len(values) != p.num_vars:
        return False
    return all(any(cube_holds(cube, values) for cube in clause) for clause in p.clauses)


class _Graph:
    """Difference constraints as edges y -> x of weight c with feasible potentials."""

    def __init__(self, n):
        self.out = [[] for _ in range(n)]
        self.pi = [0] * n
        self.trail = []

    def add(self, a: DiffAtom) -> bool:
        """Add ``a``; False (and graph unchanged) if it closes a negative cycle."""
        if a.x == a.y:
            return a.c >= 0
        pi = self.pi
        self.out[a.y].append((a.x, a.c))
        self.trail.append(a.y)
        if pi[a.x] <= pi[a.y] + a.c:
            return True
        saved = {}
        queue = [a.x]
        saved[a.x] = pi[a.x]
        pi[a.x] = pi[a.y] + a.c
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            du = pi[u]
            for v, w in self.out[u]:
                if du + w < pi[v]:
                    if v == a.y:
                        for k, old in saved.items():
                            pi[k] = old
                        self.out[a.y].pop()
                        self.trail.pop()
                        return False
                    if v not in saved:
                        saved[v] = pi[v]
                    pi[v] = du + w
                    queue.append(v)
        return True

    def mark(self):
        return len(self.trail), list(self.pi)

    def undo(self, mark):
        size, pi = mark
        while len(self.trail) > size:
            self.out[self.trail.pop()].pop()
        self.pi = pi


def solve(p: ConstraintProblem, stats: SolveStats | None = None):
    """A verified model (list of ints with Z = 0) or None when UNSAT."""
    stats = stats or SolveStats()
    g = _Graph(p.num_vars)
    clauses = []
    for clause in p.clauses:
        if len(clause) == 0:
            return None
        if len(clause) == 1:
            for a in clause[0]:
                if not g.add(a):
                    stats.conflicts += 1
                    return None
        else:
            clauses.append(clause)

    def violated():
        best = None
        for clause in clauses:
            if not any(cube_holds(cube, g.pi) for cube in clause):
                if best is None or len(clause) < len(best):
                    best = clause
                    if len(best) == 2:
                        break
        return best

    # explicit stack of (clause, next cube index, graph mark)
    stack = []
    clause = violated()
    while True:
        if clause is None:
            z = g.pi[ZERO]
            values = [v - z for v in g.pi]
            if not verify(p, values):
                raise AssertionError("difference-logic model failed verification")
            return values
        mark = g.mark()
        stack.append([clause, 0, mark])
        clause = None
        while stack:
            frame = stack[-1]
            cl, idx, mark = frame
            if idx >= len(cl):
                stack.pop()
                continue
            frame[1] = idx + 1
            g.undo(mark)
            stats.decisions += 1
            if all(g.add(a) for a in cl[idx]):
                clause = violated()
                break
            stats.conflicts += 1
            g.undo(mark)
        else:
            return None


def bellman_ford(n: int, atoms) -> list | None:
    """Feasible values for a conjunction of atoms over ``n`` variables, or None
    if the constraint graph has a negative cycle."""
    dist = [0] * n
    edges = [(a.y, a.x, a.c) for a in atoms]
    for _ in range(n):
        changed = False
        for u, v, w in edges:
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                changed = True
        if not changed:
            return dist
    for u, v, w in edges:
        if dist[u] + w < dist[v]:
            return None
    return dist
