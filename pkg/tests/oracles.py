"""Reference procedures written independently of the package internals."""
import itertools

BOX = 32


def box_feasible(n, atoms, box=BOX):
    """Integer solution of ``x - y <= c`` atoms with variable 0 fixed to 0 and
    the others in [-box, box], by bounds propagation to a fixpoint.

    At the fixpoint every variable can take its lower bound: for each atom
    ``lo[y] >= lo[x] - c`` holds, so the lower bounds satisfy all atoms.
    """
    lo = [0] + [-box] * (n - 1)
    hi = [0] + [box] * (n - 1)
    changed = True
    while changed:
        changed = False
        for x, y, c in atoms:
            if hi[x] > hi[y] + c:
                hi[x] = hi[y] + c
                changed = True
            if lo[y] < lo[x] - c:
                lo[y] = lo[x] - c
                changed = True
            if lo[x] > hi[x] or lo[y] > hi[y]:
                return None
    assert all(lo[x] - lo[y] <= c for x, y, c in atoms)
    return lo


def enumerate_feasible(n, atoms, box=BOX):
    """Plain enumeration of the box; only usable for a handful of variables."""
    for rest in itertools.product(range(-box, box + 1), repeat=n - 1):
        vals = (0,) + rest
        if all(vals[x] - vals[y] <= c for x, y, c in atoms):
            return list(vals)
    return None


def clause_choices(problem):
    """Every way of picking one cube per clause, as flat atom lists."""
    for pick in itertools.product(*problem.clauses):
        yield [(a.x, a.y, a.c) for cube in pick for a in cube]


def box_sat(problem, box=BOX, feasible=box_feasible):
    for atoms in clause_choices(problem):
        if feasible(problem.num_vars, atoms, box) is not None:
            return True
    return False


def model_ok(problem, values):
    if len(values) != problem.num_vars or values[0] != 0:
        return False
    for clause in problem.clauses:
        if not any(all(values[a.x] - values[a.y] <= a.c for a in cube) for cube in clause):
            return False
    return True
