"""Line-oriented text documents for fans, complexes, polynomials and boundary data.

Example::

    tropcomp 1
    kind fan
    rank 2
    # comments and blank lines are ignored
    cone rays [1,0] [0,1]
    cone rays [-1,-1]

Vectors are bracketed, comma-separated, without spaces; entries are integers
or exact rationals "p/q". Documents render deterministically, and rendering
a parsed document reproduces its canonical text byte for byte.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .fan import Fan, PolyhedralComplex
from .geomtrop import BoundaryData, Divisor
from .lattice import LatticeContext
from .polyhedral import Cone, Polyhedron
from .toric_dvr import AdmissibleFan
from .tropical import ValuedCoefficient, ValuedLaurentPolynomial

FORMAT_VERSION = 1
KINDS = ("fan", "complex", "polynomial", "boundary_data", "admissible_fan")

_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?")


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class ConeEntry:
    rays: tuple[tuple[Fraction, ...], ...]
    lineality: tuple[tuple[Fraction, ...], ...] = ()


@dataclass(frozen=True)
class CellEntry:
    vertices: tuple[tuple[Fraction, ...], ...]
    rays: tuple[tuple[Fraction, ...], ...] = ()
    lineality: tuple[tuple[Fraction, ...], ...] = ()


@dataclass(frozen=True)
class TermEntry:
    exponent: tuple[int, ...]
    valuation: Fraction
    residue: str = "1"


@dataclass(frozen=True)
class Document:
    kind: str
    rank: int
    entries: tuple = ()
    strata: tuple[tuple[str, ...], ...] = ()
    scale: int = 1
    format_version: int = FORMAT_VERSION

    # -- conversion to domain objects ------------------------------------------

    def to_fan(self) -> Fan:
        if self.kind not in ("fan", "admissible_fan"):
            raise ValueError(f"expected a fan document, got {self.kind}")
        return Fan([Cone(e.rays, e.lineality, self.rank) for e in self.entries], self.rank)

    def cones(self) -> list[Cone]:
        return [Cone(e.rays, e.lineality, self.rank) for e in self.entries]

    def to_admissible_fan(self) -> AdmissibleFan:
        return AdmissibleFan(self.to_fan(), LatticeContext(self.rank, self.scale))

    def to_complex(self) -> PolyhedralComplex:
        if self.kind != "complex":
            raise ValueError(f"expected a complex document, got {self.kind}")
        return PolyhedralComplex([Polyhedron(e.vertices, e.rays, e.lineality, self.rank) for e in self.entries], self.rank)

    def to_polynomial(self) -> ValuedLaurentPolynomial:
        if self.kind != "polynomial":
            raise ValueError(f"expected a polynomial document, got {self.kind}")
        return ValuedLaurentPolynomial.from_list(
            (e.exponent, ValuedCoefficient(e.valuation, e.residue)) for e in self.entries
        )

    def to_boundary_data(self) -> BoundaryData:
        if self.kind != "boundary_data":
            raise ValueError(f"expected a boundary_data document, got {self.kind}")
        divs = [Divisor(i, tuple(int(x) for x in v)) for i, v in self.entries]
        return BoundaryData(divs, self.strata, self.rank)

    def build(self):
        return {
            "fan": self.to_fan,
            "admissible_fan": self.to_admissible_fan,
            "complex": self.to_complex,
            "polynomial": self.to_polynomial,
            "boundary_data": self.to_boundary_data,
        }[self.kind]()


# -- constructors from domain objects ----------------------------------------------


def _fr(v) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def fan_document(fan: Fan, kind: str = "fan", scale: int = 1) -> Document:
    entries = tuple(ConeEntry(tuple(map(_fr, c.rays)), tuple(map(_fr, c.lineality))) for c in fan.maximal_cones)
    return Document(kind, fan.rank, entries, scale=scale)


def admissible_fan_document(af: AdmissibleFan) -> Document:
    return fan_document(af.fan, "admissible_fan", af.scale)


def complex_document(C: PolyhedralComplex) -> Document:
    entries = tuple(
        CellEntry(P.vertices, tuple(map(_fr, P.rays)), tuple(map(_fr, P.lineality))) for P in C.maximal_cells
    )
    return Document("complex", C.rank, entries)


def polynomial_document(f: ValuedLaurentPolynomial) -> Document:
    entries = tuple(TermEntry(m, c.valuation, c.residue) for m, c in f.terms.items())
    return Document("polynomial", f.rank, entries)


def boundary_data_document(data: BoundaryData) -> Document:
    entries = tuple((d.id, _fr(d.val)) for d in data.divisors)
    strata = tuple(tuple(data.ordered(s)) for s in data.strata if s)
    return Document("boundary_data", data.rank, entries, strata)


# -- rendering ----------------------------------------------------------------------


def _vec(v: Iterable) -> str:
    return "[" + ",".join(str(Fraction(x)) for x in v) + "]"


def _vecs(label: str, vs: Sequence) -> list[str]:
    return [label] + [_vec(v) for v in vs]


def render_document(doc: Document) -> str:
    lines = [f"tropcomp {doc.format_version}", f"kind {doc.kind}", f"rank {doc.rank}"]
    if doc.kind == "admissible_fan":
        lines.append(f"scale {doc.scale}")
    for e in doc.entries:
        if isinstance(e, ConeEntry):
            parts = ["cone"] + _vecs("rays", e.rays)
            if e.lineality:
                parts += _vecs("lineality", e.lineality)
        elif isinstance(e, CellEntry):
            parts = ["cell"] + _vecs("vertices", e.vertices)
            if e.rays:
                parts += _vecs("rays", e.rays)
            if e.lineality:
                parts += _vecs("lineality", e.lineality)
        elif isinstance(e, TermEntry):
            parts = ["term", _vec(e.exponent), str(e.valuation), e.residue]
        else:
            parts = ["divisor", e[0], _vec(e[1])]
        lines.append(" ".join(parts))
    for s in doc.strata:
        lines.append(" ".join(["stratum", *s]))
    return "\n".join(lines) + "\n"


# -- parsing --------------------------------------------------------------------------


def _tokens(line: str) -> list[tuple[int, str]]:
    return [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", line)]


def _rational(tok: str, lineno: int, col: int) -> Fraction:
    if not _RATIONAL.fullmatch(tok):
        raise ParseError(f"bad rational {tok!r}", lineno, col)
    if "/" in tok and int(tok.split("/")[1]) == 0:
        raise ParseError("zero denominator", lineno, col)
    return Fraction(tok)


def _vector(tok: str, lineno: int, col: int, rank: int | None) -> tuple[Fraction, ...]:
    if not (tok.startswith("[") and tok.endswith("]")):
        raise ParseError(f"expected a vector like [1,0], got {tok!r}", lineno, col)
    body = tok[1:-1]
    if not body:
        raise ParseError("empty vector", lineno, col)
    out = []
    offset = col + 1
    for part in body.split(","):
        out.append(_rational(part, lineno, offset))
        offset += len(part) + 1
    if rank is not None and len(out) != rank:
        raise ParseError(f"vector has {len(out)} entries, rank is {rank}", lineno, col)
    return tuple(out)


def _labelled_vectors(toks, labels, lineno, rank, first_required):
    """Parse 'label v v ... label v ...' into a dict label -> vectors."""
    out = {lab: [] for lab in labels}
    current = None
    for col, tok in toks:
        if tok in labels:
            if out[tok] or tok == current:
                raise ParseError(f"repeated {tok!r}", lineno, col)
            current = tok
            continue
        if current is None:
            raise ParseError(f"expected one of {', '.join(labels)}", lineno, col)
        out[current].append(_vector(tok, lineno, col, rank))
    if first_required and not out[labels[0]]:
        raise ParseError(f"at least one {labels[0][:-1] if labels[0].endswith('s') else labels[0]} vector required", lineno, 1)
    return out


def parse_document(text: str) -> Document:
    """Parse and validate a document; errors carry line and column."""
    entries = []
    strata = []
    kind = rank = scale = version = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        col, word = toks[0]
        args = toks[1:]
        if version is None:
            if word != "tropcomp" or len(args) != 1:
                raise ParseError("document must start with 'tropcomp <version>'", lineno, col)
            if args[0][1] != str(FORMAT_VERSION):
                raise ParseError(f"unsupported format version {args[0][1]!r}", lineno, args[0][0])
            version = FORMAT_VERSION
            continue
        if word in ("kind", "rank", "scale"):
            if len(args) != 1:
                raise ParseError(f"'{word}' takes one value", lineno, col)
            acol, val = args[0]
            if word == "kind":
                if kind is not None:
                    raise ParseError("repeated 'kind'", lineno, col)
                if val not in KINDS:
                    raise ParseError(f"unknown kind {val!r}", lineno, acol)
                kind = val
            else:
                if not re.fullmatch(r"\d+", val) or int(val) < 1:
                    raise ParseError(f"'{word}' must be a positive integer", lineno, acol)
                if word == "rank":
                    if rank is not None:
                        raise ParseError("repeated 'rank'", lineno, col)
                    rank = int(val)
                else:
                    if scale is not None:
                        raise ParseError("repeated 'scale'", lineno, col)
                    scale = int(val)
            continue
        if kind is None or rank is None:
            raise ParseError("'kind' and 'rank' must precede the body", lineno, col)
        expected = {
            "fan": "cone", "admissible_fan": "cone", "complex": "cell",
            "polynomial": "term", "boundary_data": ("divisor", "stratum"),
        }[kind]
        if word not in (expected if isinstance(expected, tuple) else (expected,)):
            raise ParseError(f"unexpected {word!r} in a {kind} document", lineno, col)
        if word == "cone":
            got = _labelled_vectors(args, ("rays", "lineality"), lineno, rank, False)
            if not args or args[0][1] != "rays":
                raise ParseError("a cone line starts with 'rays'", lineno, col)
            entries.append(ConeEntry(tuple(got["rays"]), tuple(got["lineality"])))
        elif word == "cell":
            if not args or args[0][1] != "vertices":
                raise ParseError("a cell line starts with 'vertices'", lineno, col)
            got = _labelled_vectors(args, ("vertices", "rays", "lineality"), lineno, rank, True)
            entries.append(CellEntry(tuple(got["vertices"]), tuple(got["rays"]), tuple(got["lineality"])))
        elif word == "term":
            if len(args) not in (2, 3):
                raise ParseError("a term is 'term [exponent] valuation [residue]'", lineno, col)
            exp = _vector(args[0][1], lineno, args[0][0], rank)
            if any(x.denominator != 1 for x in exp):
                raise ParseError("exponents must be integers", lineno, args[0][0])
            val = _rational(args[1][1], lineno, args[1][0])
            residue = args[2][1] if len(args) == 3 else "1"
            entries.append(TermEntry(tuple(int(x) for x in exp), val, residue))
        elif word == "divisor":
            if len(args) != 2:
                raise ParseError("a divisor is 'divisor ID [valuation]'", lineno, col)
            v = _vector(args[1][1], lineno, args[1][0], rank)
            if any(x.denominator != 1 for x in v):
                raise ParseError("divisor valuations must be integer vectors", lineno, args[1][0])
            entries.append((args[0][1], v))
        else:
            strata.append(tuple(t for _, t in args))
    if version is None:
        raise ParseError("empty document")
    if kind is None or rank is None:
        raise ParseError("missing 'kind' or 'rank'")
    if scale is not None and kind != "admissible_fan":
        raise ParseError("'scale' is only allowed in admissible_fan documents")
    if kind in ("fan", "admissible_fan", "complex", "polynomial") and not entries:
        raise ParseError(f"a {kind} document needs at least one entry")
    doc = Document(kind, rank, tuple(entries), tuple(strata), scale or 1)
    try:
        doc.build()
    except ValueError as exc:
        raise ParseError(f"invariant violation: {exc}") from exc
    return doc
