"""Textual incidence format and report serialization.

Input grammar (one equation per line, ``#`` starts a comment line)::

    eq F1: x1', x2@-1
    eq F2: x3^(2)@1

A term is ``x<base>`` with an optional derivative mark (``'`` repeated, or
``^(<order>)``) and an optional shift mark ``@<level>`` with level >= -1.
An equation may declare no terms at all (``eq F2:``), which is how a
structurally empty row is written.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Optional

from .model import ClassKey, EqRef, RelationKind, System, VarOcc

_EQ_RE = re.compile(r"^\s*eq\s+([A-Za-z_][A-Za-z0-9_]*)\s*:(.*)$")
_TERM_RE = re.compile(r"^x(\d+)(?:('+)|\^\((\d+)\))?(?:@(-?\d+))?$")


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{span.line}:{span.column}: {message}")
        self.span = span


def _parse_term(term: str, line_no: int, column: int) -> VarOcc:
    m = _TERM_RE.match(term)
    if not m:
        raise ParseError(f"bad term {term!r}", SourceSpan(line_no, column))
    base = int(m.group(1))
    if base == 0:
        raise ParseError("variable index must be >= 1", SourceSpan(line_no, column))
    if m.group(2):
        deriv = len(m.group(2))
    elif m.group(3):
        deriv = int(m.group(3))
    else:
        deriv = 0
    shift = int(m.group(4)) if m.group(4) else 0
    if shift < -1:
        raise ParseError(f"shift {shift} below -1", SourceSpan(line_no, column))
    return VarOcc(base, deriv, shift)


def parse(text: str) -> System:
    """Parse the incidence format into a ``System``.

    Equation order follows file order, duplicate terms are deduplicated, and
    the number of variables is the largest base index that occurs.
    """
    equations: list[tuple[EqRef, frozenset[VarOcc]]] = []
    names: dict[str, int] = {}
    n_vars = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = _EQ_RE.match(line)
        if not m:
            raise ParseError(f"expected equation declaration, got {stripped!r}",
                             SourceSpan(line_no, len(line) - len(line.lstrip()) + 1))
        name = m.group(1)
        if name in names:
            raise ParseError(f"duplicate equation name {name!r}",
                             SourceSpan(line_no, line.index(name) + 1))
        names[name] = line_no
        rest = m.group(2)
        occs = set()
        offset = len(line) - len(rest)
        if rest.strip():
            cursor = 0
            for chunk in rest.split(","):
                term = chunk.strip()
                column = offset + cursor + chunk.index(term) + 1 if term else offset + cursor + 1
                if not term:
                    raise ParseError("empty term", SourceSpan(line_no, column))
                vo = _parse_term(term, line_no, column)
                occs.add(vo)
                n_vars = max(n_vars, vo.base)
                cursor += len(chunk) + 1
        index = len(equations) + 1
        equations.append((EqRef(name, index, original_index=index), frozenset(occs)))
    if not equations:
        raise ParseError("empty system", SourceSpan(1, 1))
    return System(tuple(equations), n_vars)


def render_term(vo: VarOcc) -> str:
    out = f"x{vo.base}"
    if vo.deriv == 1:
        out += "'"
    elif vo.deriv > 1:
        out += f"^({vo.deriv})"
    if vo.shift != 0:
        out += f"@{vo.shift}"
    return out


def render_class(key: ClassKey) -> str:
    """Stable textual label for a class key.

    Shift-grouped classes read ``x1@2`` (the shift is always written),
    derivative-grouped classes reuse the term syntax, base-grouped classes are
    just the variable name.
    """
    if key.relation is RelationKind.SHIFT_SIMILAR:
        return f"x{key.base}@{key.shift}"
    if key.relation is RelationKind.TRIVIAL:
        return render_term(VarOcc(key.base, key.deriv, key.shift))
    if key.relation is RelationKind.DIFF_SIMILAR:
        return render_term(VarOcc(key.base, key.deriv, 0))
    return f"x{key.base}"


def render_system(sys: System) -> str:
    """Canonical printer; ``parse(render_system(parse(t)))`` equals ``parse(t)``."""
    lines = []
    for ref, occs in sys.equations:
        terms = ", ".join(render_term(vo) for vo in sorted(occs))
        lines.append(f"eq {ref.name}: {terms}".rstrip())
    return "\n".join(lines) + "\n"


def _report_payload(res) -> dict:
    diff_by_name = {name: diff for name, _, diff in res.per_equation}
    payload = {
        "status": res.status,
        "equations": [
            {"name": name, "shift": shift, "diff": diff}
            for name, shift, diff in res.per_equation
        ],
        "linearization": [
            {
                "newVar": f"x{add.new_var}",
                "couples": render_term(VarOcc(add.couples_base, 1, 0)),
                "shift": add.shift,
                "diff": diff_by_name.get(add.eq_name, 0),
            }
            for add in res.linearization
        ],
        "assignmentShift": [
            {"class": render_class(key), "eq": name}
            for key, name in res.assignment_shift
        ],
        "assignmentDiff": [
            {"class": render_class(key), "eq": name}
            for key, name in res.assignment_diff
        ],
    }
    if res.witness is not None:
        payload["witness"] = list(res.witness)
    return payload


def render_report(res, format: str = "text") -> str:
    """Serialize an analysis result; identical inputs give identical bytes."""
    if format == "json":
        return json.dumps(_report_payload(res), indent=2) + "\n"
    if format != "text":
        raise ValueError(f"unknown report format {format!r}")

    payload = _report_payload(res)
    lines = [f"status\t{payload['status']}"]
    lines.append("equation\tshift\tdiff")
    for entry in payload["equations"]:
        lines.append(f"{entry['name']}\t{entry['shift']}\t{entry['diff']}")
    for entry, add in zip(payload["linearization"], res.linearization):
        lines.append(
            f"linearization\t{add.eq_name}\t{entry['newVar']}"
            f"\t{entry['couples']}\t{entry['shift']}\t{entry['diff']}"
        )
    for entry in payload["assignmentShift"]:
        lines.append(f"assignment_shift\t{entry['class']}\t{entry['eq']}")
    for entry in payload["assignmentDiff"]:
        lines.append(f"assignment_diff\t{entry['class']}\t{entry['eq']}")
    if res.witness is not None:
        for name in res.witness:
            lines.append(f"witness\t{name}")
    return "\n".join(lines) + "\n"
