"""Text serialization of automata (JSON document) and Graphviz DOT export.

Document schema::

    {
      "semifield": "rational",
      "alphabet": ["a", "b"],
      "states": 2,
      "initial": {"state": 0, "weight": "1"},
      "finals": [{"state": 0, "weight": "1/2"}, ...],
      "arcs": [{"from": 0, "symbol": "a", "weight": "1/4", "to": 0}, ...]
    }

The canonical empty automaton is written with ``"initial": null``.
"""

from __future__ import annotations

import json

from . import semifield
from .automaton import Wdfsa, Wfsa
from .errors import NonDeterministicTarget, ParseError


def to_dict(a):
    sf = a.sf
    initials = a.initial_states()
    if len(initials) > 1:
        raise NonDeterministicTarget("the file format holds a single initial state")
    initial = None
    if initials:
        q = initials[0]
        initial = {"state": q, "weight": sf.format(a.lam[q])}
    return {
        "semifield": sf.name,
        "alphabet": list(a.alphabet),
        "states": a.n_states,
        "initial": initial,
        "finals": [
            {"state": q, "weight": sf.format(a.rho[q])}
            for q in a.states
            if not sf.is_zero(a.rho[q])
        ],
        "arcs": [
            {"from": p, "symbol": s, "weight": sf.format(w), "to": q}
            for p, s, w, q in a.arcs
        ],
    }


def dumps(a):
    return json.dumps(to_dict(a), indent=2, ensure_ascii=False) + "\n"


def _field(doc, key, kind, where):
    if key not in doc:
        raise ParseError(f"{where}: missing field {key!r}")
    value = doc[key]
    if kind is int and isinstance(value, bool):
        raise ParseError(f"{where}.{key}: expected integer, got {value!r}")
    if not isinstance(value, kind):
        raise ParseError(f"{where}.{key}: expected {kind.__name__}, got {value!r}")
    return value


def _weight(sf, text, where):
    if not isinstance(text, str):
        raise ParseError(f"{where}: weight must be a string, got {text!r}")
    try:
        return sf.parse(text)
    except ParseError as exc:
        raise ParseError(f"{where}: {exc}") from None


def from_dict(doc, tolerance=None, semifield_override=None):
    """Build a :class:`Wdfsa` from a parsed document.

    ``semifield_override`` replaces the document's semifield name (the weight
    strings must then parse under the override).
    """
    if not isinstance(doc, dict):
        raise ParseError("$: automaton document must be an object")
    name = semifield_override or _field(doc, "semifield", str, "$")
    sf = semifield.get(name, tolerance)
    alphabet = _field(doc, "alphabet", list, "$")
    for i, s in enumerate(alphabet):
        if not isinstance(s, str) or not s or any(c.isspace() for c in s):
            raise ParseError(f"$.alphabet[{i}]: symbols must be non-empty tokens, got {s!r}")
    if len(set(alphabet)) != len(alphabet):
        raise ParseError("$.alphabet: duplicate symbols")
    n = _field(doc, "states", int, "$")
    if n < 1:
        raise ParseError("$.states: need at least one state")

    def state(value, where):
        if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value < n:
            raise ParseError(f"{where}: state {value!r} out of range 0..{n - 1}")
        return value

    lam = [sf.zero] * n
    rho = [sf.zero] * n
    init = doc.get("initial")
    if init is not None:
        if not isinstance(init, dict):
            raise ParseError("$.initial: expected object or null")
        q = state(_field(init, "state", int, "$.initial"), "$.initial.state")
        lam[q] = _weight(sf, init.get("weight"), "$.initial.weight")
    for i, fin in enumerate(_field(doc, "finals", list, "$")):
        where = f"$.finals[{i}]"
        if not isinstance(fin, dict):
            raise ParseError(f"{where}: expected object")
        q = state(_field(fin, "state", int, where), where + ".state")
        rho[q] = _weight(sf, fin.get("weight"), where + ".weight")
    arcs = []
    symbols = set(alphabet)
    for i, arc in enumerate(_field(doc, "arcs", list, "$")):
        where = f"$.arcs[{i}]"
        if not isinstance(arc, dict):
            raise ParseError(f"{where}: expected object")
        p = state(_field(arc, "from", int, where), where + ".from")
        q = state(_field(arc, "to", int, where), where + ".to")
        s = _field(arc, "symbol", str, where)
        if s not in symbols:
            raise ParseError(f"{where}.symbol: {s!r} is not in the alphabet")
        arcs.append((p, s, _weight(sf, arc.get("weight"), where + ".weight"), q))
    try:
        return Wdfsa(sf, alphabet, n, arcs, lam, rho)
    except NonDeterministicTarget as exc:
        raise ParseError(f"$: {exc}") from None


def loads(text, tolerance=None, semifield_override=None):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_dict(doc, tolerance, semifield_override)


def load(path, tolerance=None, semifield_override=None):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return loads(text, tolerance, semifield_override)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def dump(a, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(a))


def _dot_escape(text):
    return text.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(a: Wfsa, name="A"):
    """Graphviz source; states ascending, arcs ordered by source then symbol."""
    sf = a.sf
    lines = [f'digraph "{_dot_escape(name)}" {{', "  rankdir=LR;"]
    for q in a.states:
        final = not sf.is_zero(a.rho[q])
        shape = "doublecircle" if final else "circle"
        label = f"{q}\\n{_dot_escape(sf.format(a.rho[q]))}" if final else str(q)
        lines.append(f'  {q} [shape={shape}, label="{label}"];')
    for q in a.initial_states():
        lines.append(f'  start{q} [shape=point];')
        lines.append(f'  start{q} -> {q} [label="{_dot_escape(sf.format(a.lam[q]))}"];')
    for p, s, w, q in a.arcs:
        lines.append(f'  {p} -> {q} [label="{_dot_escape(s)}/{_dot_escape(sf.format(w))}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
