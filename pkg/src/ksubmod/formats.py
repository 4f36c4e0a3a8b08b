"""Text formats for functions, dual vectors and certificates.

Dense table (``ksub 1``)::

    ksub 1
    k=3 n=1
    0 0
    1 -1
    2 1
    3 2

Each payload line holds ``n`` label tokens (0 is the root) and a value.
Values are integers or ``p/q``.  Sum of local terms (``ksum 1``)::

    ksum 1
    k=2 n=2
    term 1 0
    0 0
    1 1
    2 0
    term 1 1
    ...

``term <arity> <i1> .. <ia>`` names the scope by 0-based coordinate and is
followed by ``(k+1)**arity`` lines in the same "labels then value" form.
Blank lines and ``#`` comments are ignored everywhere.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .domain import Labeling, enumerate_labelings, format_labeling
from .dual import SignedVector
from .functions import Term, ValuedFunction
from .minmax import Certificate
from .polyhedron import FullVector, full_vector

TABLE_TAG = "ksub 1"
SUM_TAG = "ksum 1"
CERT_TAG = "kcert 1"

_DIMS = re.compile(r"^k=(\d+)\s+n=(\d+)$")


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


def _lines(text: str) -> List[Tuple[int, str]]:
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if s:
            out.append((no, s))
    return out


def parse_value(token: str, line: Optional[int] = None) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad value {token!r}", line) from None


def _parse_int(token: str, line: Optional[int], what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"bad {what} {token!r}", line) from None


def _header(lines, tag: str) -> Tuple[int, int]:
    if not lines:
        raise ParseError(f"empty input, expected header {tag!r}")
    no, first = lines[0]
    if " ".join(first.split()) != tag:
        raise ParseError(f"expected header {tag!r}, got {first!r}", no)
    if len(lines) < 2:
        raise ParseError("missing 'k=<k> n=<n>' line")
    no, dims = lines[1]
    m = _DIMS.match(" ".join(dims.split()))
    if not m:
        raise ParseError(f"expected 'k=<k> n=<n>', got {dims!r}", no)
    k, n = int(m.group(1)), int(m.group(2))
    if k < 1 or n < 1:
        raise ParseError("k and n must be positive", no)
    return k, n


def _labelled_value(s: str, no: int, k: int, width: int) -> Tuple[Labeling, Fraction]:
    tokens = s.split()
    if len(tokens) != width + 1:
        raise ParseError(f"expected {width} labels and a value, got {len(tokens)} tokens", no)
    T = tuple(_parse_int(t, no, "label") for t in tokens[:width])
    for t in T:
        if not 0 <= t <= k:
            raise ParseError(f"label {t} out of range 0..{k}", no)
    return T, parse_value(tokens[-1], no)


def _collect(rows, k: int, width: int, where: str) -> List[Fraction]:
    seen: Dict[Labeling, Tuple[int, Fraction]] = {}
    for no, s in rows:
        T, v = _labelled_value(s, no, k, width)
        if T in seen:
            raise ParseError(f"duplicate labeling {format_labeling(T)} (first on line {seen[T][0]})", no)
        seen[T] = (no, v)
    values = []
    for T in enumerate_labelings(k, width) if width else [()]:
        if T not in seen:
            raise ParseError(f"missing labeling {format_labeling(T)}{where}")
        values.append(seen[T][1])
    return values


def parse_table(text: str) -> ValuedFunction:
    lines = _lines(text)
    k, n = _header(lines, TABLE_TAG)
    return ValuedFunction(k, n, table=_collect(lines[2:], k, n, ""))


def parse_sum(text: str) -> ValuedFunction:
    lines = _lines(text)
    k, n = _header(lines, SUM_TAG)
    terms = []
    pos = 2
    while pos < len(lines):
        no, s = lines[pos]
        tokens = s.split()
        if tokens[0] != "term":
            raise ParseError(f"expected 'term <arity> <indices>', got {s!r}", no)
        if len(tokens) < 2:
            raise ParseError("term line needs an arity", no)
        arity = _parse_int(tokens[1], no, "arity")
        if arity < 0 or arity > n:
            raise ParseError(f"arity {arity} out of range 0..{n}", no)
        scope = tuple(_parse_int(t, no, "scope index") for t in tokens[2:])
        if len(scope) != arity:
            raise ParseError(f"term of arity {arity} lists {len(scope)} indices", no)
        for i in scope:
            if not 0 <= i < n:
                raise ParseError(f"scope index {i} out of range 0..{n - 1}", no)
        if len(set(scope)) != arity:
            raise ParseError(f"scope {scope} repeats a coordinate", no)
        size = (k + 1) ** arity
        body = lines[pos + 1:pos + 1 + size]
        if any(b[1].split()[0] == "term" for b in body):
            body = body[:next(j for j, b in enumerate(body) if b[1].split()[0] == "term")]
        table = _collect(body, k, arity, f" in term on line {no}")
        terms.append(Term(scope, tuple(table)))
        pos += 1 + size
    return ValuedFunction(k, n, terms=terms)


def parse_function(text: str) -> ValuedFunction:
    """Dispatch on the header tag."""
    lines = _lines(text)
    tag = " ".join(lines[0][1].split()) if lines else ""
    if tag == TABLE_TAG:
        return parse_table(text)
    if tag == SUM_TAG:
        return parse_sum(text)
    raise ParseError(f"unknown header {tag!r}, expected {TABLE_TAG!r} or {SUM_TAG!r}", lines[0][0] if lines else None)


def format_value(v) -> str:
    return str(Fraction(v))


def _rows(k: int, width: int, table) -> List[str]:
    labelings = enumerate_labelings(k, width) if width else [()]
    return [" ".join([format_labeling(T), format_value(v)]).strip() for T, v in zip(labelings, table)]


def format_table(f: ValuedFunction) -> str:
    lines = [TABLE_TAG, f"k={f.k} n={f.n}"] + _rows(f.k, f.n, f.values())
    return "\n".join(lines) + "\n"


def format_sum(f: ValuedFunction) -> str:
    if f.is_dense:
        raise ValueError("a dense function has no term structure; use format_table")
    lines = [SUM_TAG, f"k={f.k} n={f.n}"]
    for scope, table in f.terms:
        lines.append(" ".join(["term", str(len(scope))] + [str(i) for i in scope]))
        lines.extend(_rows(f.k, len(scope), table))
    return "\n".join(lines) + "\n"


def format_function(f: ValuedFunction) -> str:
    return format_table(f) if f.is_dense else format_sum(f)


def format_signed(v: SignedVector) -> str:
    return "x " + " ".join(format_value(a) for a in v.x) + "\nL " + format_labeling(v.L) + "\n"


def _keyed(lines, key: str, index: int) -> Tuple[int, List[str]]:
    if index >= len(lines):
        raise ParseError(f"missing '{key}' line")
    no, s = lines[index]
    tokens = s.split()
    if tokens[0] != key:
        raise ParseError(f"expected '{key} ...', got {s!r}", no)
    return no, tokens[1:]


def parse_signed(text: str) -> SignedVector:
    lines = _lines(text)
    _, xs = _keyed(lines, "x", 0)
    no, Ls = _keyed(lines, "L", 1)
    try:
        return SignedVector(tuple(parse_value(t) for t in xs), tuple(_parse_int(t, no, "leaf") for t in Ls))
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc), no) from None


def format_full(x: FullVector) -> str:
    return "".join(" ".join(format_value(a) for a in row) + "\n" for row in x)


def parse_full(text: str) -> FullVector:
    rows = [[parse_value(t, no) for t in s.split()] for no, s in _lines(text)]
    try:
        return full_vector(rows)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_certificate(cert: Certificate, k: int) -> str:
    lines = [
        CERT_TAG,
        f"k={k} n={len(cert.primal)}",
        f"value {format_value(cert.value)}",
        f"primal {format_labeling(cert.primal)}",
    ]
    lines.extend(format_signed(cert.dual).splitlines())
    if cert.extracted is not None:
        lines.append(f"extracted {format_labeling(cert.extracted)}")
    lines.append(f"tight {len(cert.tight)}")
    lines.extend(format_labeling(T) for T in cert.tight)
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> Tuple[int, Certificate]:
    """Inverse of `format_certificate`; returns ``(k, certificate)``."""
    lines = _lines(text)
    k, n = _header(lines, CERT_TAG)
    no, val = _keyed(lines, "value", 2)
    if len(val) != 1:
        raise ParseError("value line needs one value", no)
    value = parse_value(val[0], no)
    no, primal = _keyed(lines, "primal", 3)
    primal = tuple(_parse_int(t, no, "label") for t in primal)
    if len(primal) != n:
        raise ParseError(f"primal has {len(primal)} labels, expected {n}", no)
    dual = parse_signed("\n".join(s for _, s in lines[4:6]))
    pos = 6
    extracted = None
    if pos < len(lines) and lines[pos][1].split()[0] == "extracted":
        no, toks = _keyed(lines, "extracted", pos)
        extracted = tuple(_parse_int(t, no, "label") for t in toks)
        pos += 1
    no, cnt = _keyed(lines, "tight", pos)
    count = _parse_int(cnt[0] if cnt else "", no, "count")
    body = lines[pos + 1:]
    if len(body) != count:
        raise ParseError(f"expected {count} tight labelings, found {len(body)}", no)
    tight = tuple(tuple(_parse_int(t, b, "label") for t in s.split()) for b, s in body)
    return k, Certificate(primal, dual, value, extracted, tight)
