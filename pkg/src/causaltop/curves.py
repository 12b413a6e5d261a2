"""Parametric curves and exact curve/neighbourhood intersection tests.

Each coordinate of a curve piece is a *form* ``P(s) + R(s) * sqrt(s^2 + a2)``
with polynomial ``P`` and ``R``.  Lines have ``R = 0``; the timelike hyperbolae
``x = sqrt(t^2 + a^2)`` use the square-root term.  Forms are closed under sums
and products, so the Minkowski form, the squared Euclidean distance and the
partition projection relative to any centre are forms too.  Between
consecutive real roots of all these forms every membership predicate has a
constant truth value, which turns "does the curve meet the set?" into a
finite check at roots and midpoints.
"""

from __future__ import annotations

import itertools
import math
import operator
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .bases import BALL_CLASSES, BasicNbhd, TopologyKind, member, member_array
from .geometry import DEFAULT_TOL, CausalClass, Event, TolerancePolicy, classify
from .relations import subbasic_complement_contains

__all__ = [
    "Form",
    "Line",
    "Hyperbola",
    "Polyline",
    "Piece",
    "Certificate",
    "curve_meets",
    "curve_meets_nbhd",
    "verify_certificate",
    "real_roots",
]

# ---------------------------------------------------------------- polynomials
# Coefficient tuples, lowest degree first.


def _padd(p: tuple, q: tuple) -> tuple:
    if not q:
        return p
    if not p:
        return q
    return tuple(map(operator.add, p, q)) if len(p) == len(q) else tuple(
        a + b for a, b in itertools.zip_longest(p, q, fillvalue=0.0))


def _pscale(p: tuple, c: float) -> tuple:
    return tuple(c * a for a in p)


def _pmul(p: tuple, q: tuple) -> tuple:
    if not p or not q:
        return ()
    out = [0.0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0.0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return tuple(out)


def _ptrim(p: tuple) -> tuple:
    p = list(p)
    while p and p[-1] == 0.0:
        p.pop()
    return tuple(p)


def _peval(p: tuple, s: float) -> float:
    acc = 0.0
    for a in reversed(p):
        acc = acc * s + a
    return acc


def real_roots(p: tuple, imag_tol: float = 1e-9) -> list:
    """Real roots of a polynomial; near-real complex pairs count as real."""
    p = _ptrim(p)
    deg = len(p) - 1
    if deg < 1:
        return []
    if deg == 1:
        return [-p[0] / p[1]]
    if deg == 2:
        c, b, a = p
        disc = b * b - 4 * a * c
        scale = max(b * b, abs(4 * a * c))
        if disc < 0:
            if disc < -1e-12 * scale:
                return []
            disc = 0.0
        sq = math.sqrt(disc)
        q = -0.5 * (b + math.copysign(sq, b))
        if q == 0.0:
            return [0.0]
        return [q / a, c / q]
    roots = np.roots(p[::-1])
    return [float(r.real) for r in roots if abs(r.imag) <= imag_tol * (1.0 + abs(r.real))]


class Form(NamedTuple):
    """``p(s) + r(s) * sqrt(s^2 + a2)``; ``a2`` is carried by the piece."""

    p: tuple
    r: tuple = ()

    def __add__(self, other):
        return Form(_padd(self.p, other.p), _padd(self.r, other.r))

    def scale(self, c: float) -> "Form":
        return Form(_pscale(self.p, c), _pscale(self.r, c))

    def shift(self, c: float) -> "Form":
        return Form(_padd(self.p, (c,)), self.r)

    def mul(self, other: "Form", a2: float) -> "Form":
        rr = _pmul(self.r, other.r)
        p = _padd(_pmul(self.p, other.p), _pmul(rr, (a2, 0.0, 1.0)))
        r = _padd(_pmul(self.p, other.r), _pmul(self.r, other.p))
        return Form(p, r)

    def value(self, s: float, a2: float) -> float:
        v = _peval(self.p, s)
        if self.r:
            v += _peval(self.r, s) * math.sqrt(s * s + a2)
        return v

    def roots(self, a2: float) -> list:
        """Real roots (a superset when the square-root term is present).

        Squaring turns simple roots into near-double ones, which ``np.roots``
        returns as complex pairs with imaginary parts near sqrt(machine eps);
        the loose tolerance keeps them.  Roots of ``p`` are added for the case
        where ``r`` is so small that ``r*r`` underflows.  Extra breakpoints only
        refine the piecewise probe.
        """
        r = _ptrim(self.r)
        if not r:
            return real_roots(self.p)
        squared = _padd(_pmul(self.p, self.p), _pscale(_pmul(_pmul(r, r), (a2, 0.0, 1.0)), -1.0))
        return real_roots(squared, imag_tol=1e-6) + real_roots(self.p)

    def text(self) -> str:
        terms = []
        for i, a in enumerate(self.p):
            if i == 0:
                terms.append(f"{a:.6g}")
            elif i == 1:
                terms.append(f"{a:.6g}*s")
            else:
                terms.append(f"{a:.6g}*s^{i}")
        body = " + ".join(reversed(terms)) if terms else "0"
        if _ptrim(self.r):
            body += " + (" + Form(self.r).text() + ")*sqrt(s^2+a^2)"
        return body


class Piece(NamedTuple):
    lo: float
    hi: float
    a2: float
    coords: tuple  # one Form per coordinate


# ---------------------------------------------------------------- curves


@dataclass(frozen=True)
class Line:
    """``origin + s * direction`` for ``s`` in ``[s_min, s_max]``."""

    origin: tuple
    direction: tuple
    s_min: float = 0.0
    s_max: float = 2.0
    special: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "origin", tuple(float(c) for c in self.origin))
        object.__setattr__(self, "direction", tuple(float(c) for c in self.direction))
        if len(self.origin) != len(self.direction):
            raise ValueError("origin and direction differ in dimension")
        if not any(self.direction):
            raise ValueError("degenerate line direction")
        if not self.s_min < self.s_max:
            raise ValueError("empty parameter range")

    @property
    def s_range(self) -> tuple:
        return (self.s_min, self.s_max)

    def point(self, s: float) -> Event:
        return Event._trusted(tuple(o + s * d for o, d in zip(self.origin, self.direction)))

    def points(self, s: np.ndarray) -> np.ndarray:
        return np.asarray(self.origin)[None, :] + np.asarray(s)[:, None] * np.asarray(self.direction)[None, :]

    def pieces(self) -> list:
        forms = tuple(Form((o, d)) for o, d in zip(self.origin, self.direction))
        return [Piece(self.s_min, self.s_max, 0.0, forms)]


@dataclass(frozen=True)
class Hyperbola:
    """``(s, sqrt(s^2 + a^2), 0, ...)``: a timelike hyperbola with asymptotes ``x = |t|``."""

    a: float
    n: int = 2
    s_min: float = -2.0
    s_max: float = 2.0
    special: tuple = ()

    @property
    def s_range(self) -> tuple:
        return (self.s_min, self.s_max)

    def point(self, s: float) -> Event:
        return Event._trusted((s, math.sqrt(s * s + self.a * self.a)) + (0.0,) * (self.n - 1))

    def points(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        out = np.zeros((len(s), self.n + 1))
        out[:, 0] = s
        out[:, 1] = np.sqrt(s * s + self.a * self.a)
        return out

    def pieces(self) -> list:
        forms = (Form((0.0, 1.0)), Form((), (1.0,))) + (Form(()),) * (self.n - 1)
        return [Piece(self.s_min, self.s_max, self.a * self.a, forms)]


@dataclass(frozen=True)
class Polyline:
    """Piecewise-linear curve; ``s`` in ``[0, len(vertices) - 1]`` with vertex ``i`` at ``s = i``."""

    vertices: tuple
    special: tuple = field(default=None)

    def __post_init__(self):
        verts = tuple(tuple(float(c) for c in v) for v in self.vertices)
        if len(verts) < 2:
            raise ValueError("a polyline needs at least two vertices")
        object.__setattr__(self, "vertices", verts)
        if self.special is None:
            object.__setattr__(self, "special", tuple(float(i) for i in range(1, len(verts) - 1)))

    @property
    def s_range(self) -> tuple:
        return (0.0, float(len(self.vertices) - 1))

    def _segment(self, s: float) -> int:
        return min(max(int(math.floor(s)), 0), len(self.vertices) - 2)

    def point(self, s: float) -> Event:
        i = self._segment(s)
        if s == i:
            return Event(self.vertices[i])
        if s == i + 1:
            return Event(self.vertices[i + 1])
        u = s - i
        a, b = self.vertices[i], self.vertices[i + 1]
        return Event._trusted(tuple(x + u * (y - x) for x, y in zip(a, b)))

    def points(self, s: np.ndarray) -> np.ndarray:
        return np.array([self.point(float(v)).coords for v in s])

    def pieces(self) -> list:
        out = []
        for i in range(len(self.vertices) - 1):
            a, b = self.vertices[i], self.vertices[i + 1]
            forms = tuple(Form((x - i * (y - x), y - x)) for x, y in zip(a, b))
            out.append(Piece(float(i), float(i + 1), 0.0, forms))
        return out


# ---------------------------------------------------------------- intersection


@dataclass(frozen=True)
class Certificate:
    """Outcome of :func:`curve_meets_nbhd`.

    For a hit, ``witness_s`` is a parameter whose point is a member.  For a
    miss, ``pieces`` covers the whole parameter range with closed points and
    open intervals, each carrying the reason its points are excluded.
    """

    empty: bool
    witness_s: Optional[float]
    q_forms: tuple  # (lo, hi, Form) per piece: Minkowski form relative to the centre
    pieces: tuple  # (lo, hi, reason)
    text: str


def _relative(coords: tuple, c: Sequence[float]) -> tuple:
    return tuple(f.shift(-x) for f, x in zip(coords, c))


def _quadratics(w: tuple, a2: float) -> tuple:
    """Minkowski form and squared Euclidean norm of the relative position."""
    sq = [f.mul(f, a2) for f in w]
    n2 = sq[0]
    q = sq[0]
    for f in sq[1:]:
        n2 = n2 + f
        q = q + f.scale(-1.0)
    return q, n2


def _cone_forms(w: tuple, a2: float, tau: float, partition=None, quads=None) -> tuple:
    """Minkowski form, squared norm, and every form whose sign drives classification."""
    q, n2 = quads if quads is not None else _quadratics(w, a2)
    forms = [q, q.shift(-tau), q.shift(tau), q + n2.scale(-tau), q + n2.scale(tau), n2.shift(-1.0)]
    forms.extend(w)
    if partition is not None:
        proj = Form(())
        for e, f in zip(partition.axis, w[1:]):
            proj = proj + f.scale(e)
        forms += [proj, proj.shift(-tau), proj.shift(tau), proj + n2.scale(-tau), proj + n2.scale(tau)]
    return q, n2, forms


def _ball_intervals(n2: Form, radius: float, lo: float, hi: float, a2: float) -> list:
    """Closed parameter intervals covering where the squared distance is below ``radius**2``."""
    f = n2.shift(-radius * radius)
    cuts = sorted({lo, hi, *(r for r in f.roots(a2) if lo < r < hi)})
    spans = []
    for u, v in zip(cuts, cuts[1:]):
        probe = (u, 0.5 * (u + v), v)
        if any(f.value(s, a2) < 0 for s in probe):
            if spans and spans[-1][1] == u:
                spans[-1] = (spans[-1][0], v)
            else:
                spans.append((u, v))
    if len(cuts) == 1 and f.value(lo, a2) < 0:
        spans.append((lo, hi))
    return spans


def _reason(b: BasicNbhd, q: Event, tol: TolerancePolicy) -> str:
    kind = b.kind
    if kind in BALL_CLASSES:
        d2 = sum((u - v) ** 2 for u, v in zip(q, b.center))
        if d2 >= b.radius * b.radius:
            return "outside ball"
        return str(classify(b.center, q, tol))
    if kind is TopologyKind.ALEXANDROV:
        a, tip = b.tips
        if classify(a, q, tol) is not CausalClass.CHRONO_FUTURE:
            return "not in I+(a)"
        return "not in I-(b)"
    rel = b.relation
    for r, z, side in ((rel, b.center, "upper"), (rel, b.center, "lower")) + tuple(b.witnesses):
        if not subbasic_complement_contains(r, z, side, q, tol):
            return f"in {side} set ({classify(z, q, tol)})"
    return "member"


def _fmt(s: float) -> str:
    return f"{s:.6g}"


_QUICK_PROBES = (0.5, 0.25, 0.75, 0.125, 0.375, 0.625, 0.875)


def curve_meets(curve, b: BasicNbhd, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """Fast yes/no form of :func:`curve_meets_nbhd` (no certificate text)."""
    return not curve_meets_nbhd(curve, b, tol, explain=False).empty


def curve_meets_nbhd(curve, b: BasicNbhd, tol: TolerancePolicy = DEFAULT_TOL, explain: bool = True) -> Certificate:
    """Decide whether ``curve`` meets the basic set ``b``; return a certificate either way.

    With ``explain=False`` the per-piece exclusion reasons and the text are
    skipped, which is what the bulk limit-curve scans use.
    """
    tau = tol.tau_rel
    evaluated = []
    q_forms = []
    for piece in curve.pieces():
        a2 = piece.a2
        w = _relative(piece.coords, b.center)
        q, n2 = _quadratics(w, a2)
        q_forms.append((piece.lo, piece.hi, q))

        if b.kind in BALL_CLASSES:
            spans = _ball_intervals(n2, b.radius, piece.lo, piece.hi, a2)
            if not spans:
                evaluated.append((piece.lo, piece.hi, "outside ball", False))
                continue
        else:
            spans = [(piece.lo, piece.hi)]

        # Any member point settles the question, so try a few cheap samples
        # before the exact breakpoint analysis that an EMPTY answer needs.
        for lo, hi in spans:
            for j in _QUICK_PROBES:
                s = lo + (hi - lo) * j
                pt = curve.point(s)
                if member(b, pt, tol):
                    text = f"MEETS: s*={_fmt(s)} point=({','.join(_fmt(c) for c in pt)}) in {b.describe()}"
                    return Certificate(False, s, tuple(q_forms), (), text)

        own_part = b.partition if b.kind.interval else None
        _, _, own_forms = _cone_forms(w, a2, tau, own_part, (q, n2))
        centers = []
        if b.kind is TopologyKind.MANIFOLD:
            pass
        elif b.kind is TopologyKind.ALEXANDROV:
            centers = [(t, None) for t in b.tips]
        elif b.kind in BALL_CLASSES:
            centers = [(b.center, None)]
        else:
            part = b.partition
            centers = [(b.center, part)] + [(z, r.partition) for r, z, _side in b.witnesses]

        breaks = set()
        for c, part in centers:
            if c is b.center and part is own_part:
                forms = own_forms
            else:
                _, _, forms = _cone_forms(_relative(piece.coords, c), a2, tau, part)
            for f in forms:
                breaks.update(f.roots(a2))
        if b.kind in BALL_CLASSES:
            breaks.update(n2.shift(-b.radius * b.radius).roots(a2))

        for lo, hi in spans:
            cuts = sorted({lo, hi, *(s for s in breaks if lo < s < hi)})
            probes = [(s, s) for s in cuts] + [(u, v) for u, v in zip(cuts, cuts[1:])]
            # open intervals first: they are where generic hits live
            probes.sort(key=lambda uv: uv[0] == uv[1])
            for u, v in probes:
                s = u if u == v else 0.5 * (u + v)
                pt = curve.point(s)
                if member(b, pt, tol):
                    text = f"MEETS: s*={_fmt(s)} point=({','.join(_fmt(c) for c in pt)}) in {b.describe()}"
                    return Certificate(False, s, tuple(q_forms), (), text)
                evaluated.append((u, v, _reason(b, pt, tol) if explain else "", u == v))
        covered = spans
        gaps = [(u, v) for (u, v) in zip([piece.lo] + [h for _, h in covered], [l for l, _ in covered] + [piece.hi]) if u < v]
        for u, v in gaps:
            evaluated.append((u, v, "outside ball", False))

    if not explain:
        return Certificate(True, None, tuple(q_forms), (), "EMPTY")
    evaluated.sort(key=lambda e: (e[0], e[1]))
    pieces = tuple((u, v, why) for u, v, why, _ in evaluated)
    q_text = "; ".join(f"Q(s) = {f.text()} on [{_fmt(lo)}, {_fmt(hi)}]" for lo, hi, f in q_forms)
    detail = ", ".join(
        (f"s={_fmt(u)}: {why}" if u == v else f"({_fmt(u)},{_fmt(v)}): {why}") for u, v, why in _merge(pieces)
    )
    text = f"EMPTY: {q_text}; {b.describe()}; {detail}"
    return Certificate(True, None, tuple(q_forms), pieces, text)


def _merge(pieces: tuple) -> list:
    """Collapse consecutive pieces with the same reason for the certificate text."""
    out = []
    for u, v, why in pieces:
        if out and out[-1][2] == why and out[-1][1] >= u:
            out[-1] = (out[-1][0], max(out[-1][1], v), why)
        else:
            out.append((u, v, why))
    return out


def verify_certificate(
    curve,
    b: BasicNbhd,
    cert: Certificate,
    density: int = 10,
    base: int = 256,
    tol: TolerancePolicy = DEFAULT_TOL,
) -> bool:
    """Re-check a certificate by dense sampling (``density * base`` parameters)."""
    if not cert.empty:
        return member(b, curve.point(cert.witness_s), tol)
    lo, hi = curve.s_range
    s = np.linspace(lo, hi, density * base + 1)
    pts = curve.points(s)
    if b.witnesses:
        inside = np.array([member(b, p, tol) for p in pts])
    else:
        inside = member_array(b, pts, tol)
    return not bool(inside.any())
