"""SMT-LIB 2 (QF_IDL) export of a constraint problem."""
from __future__ import annotations

import re

from .idl import ZERO, ConstraintProblem, DiffAtom

_SIMPLE = re.compile(r"^[A-Za-z~!@$%^&*_+=<>.?/-][A-Za-z0-9~!@$%^&*_+=<>.?/-]*$")
_RESERVED = {"assert", "check-sat", "declare-fun", "let", "forall", "exists", "par", "_", "!", "as"}


def _num(c: int) -> str:
    return f"(- {-c})" if c < 0 else str(c)


def symbol(name: str) -> str:
    if _SIMPLE.match(name) and name not in _RESERVED:
        return name
    return "|" + name.replace("|", "_").replace("\\", "_") + "|"


def _names(p: ConstraintProblem) -> list[str]:
    """Unique SMT symbols for the non-zero variables."""
    out, used = [None], set()
    for i, name in enumerate(p.names[1:], 1):
        base = symbol(name)
        s = base if base not in used else symbol(f"{name}#{i}")
        used.add(s)
        out.append(s)
    return out


def _atom(a: DiffAtom, names) -> str:
    if a.x == ZERO and a.y == ZERO:
        return "true" if a.c >= 0 else "false"
    if a.y == ZERO:
        return f"(<= {names[a.x]} {_num(a.c)})"
    if a.x == ZERO:
        # Z - y <= c  <=>  y >= -c
        return f"(>= {names[a.y]} {_num(-a.c)})"
    return f"(<= (- {names[a.x]} {names[a.y]}) {_num(a.c)})"


def _cube(cube, names) -> str:
    parts = [_atom(a, names) for a in cube]
    if len(parts) == 1:
        return parts[0]
    return "(and " + " ".join(parts) + ")"


def export_smtlib(p: ConstraintProblem) -> str:
    names = _names(p)
    lines = ["(set-logic QF_IDL)"]
    for s in names[1:]:
        lines.append(f"(declare-fun {s} () Int)")
    for clause in p.clauses:
        if not clause:
            lines.append("(assert false)")
            continue
        for_clause = [_cube(c, names) for c in clause]
        if len(clause) == 1 and len(clause[0]) > 1:
            # a unit conjunction is asserted atom by atom
            for a in clause[0]:
                lines.append(f"(assert {_atom(a, names)})")
        elif len(for_clause) == 1:
            lines.append(f"(assert {for_clause[0]})")
        else:
            lines.append("(assert (or " + " ".join(for_clause) + "))")
    lines.append("(check-sat)")
    if len(names) > 1:
        lines.append("(get-model)")
    return "\n".join(lines) + "\n"


def write_smtlib(p: ConstraintProblem, path) -> None:
    with open(path, "w") as fh:
        fh.write(export_smtlib(p))
