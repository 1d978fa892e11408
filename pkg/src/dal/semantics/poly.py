"""Univariate polynomials over the rationals and exact sign decisions.

Root isolation uses Sturm chains of the square-free part.  Isolating
intervals are always refined until their endpoints are not roots, so every
verdict is obtained from evaluations at rational points.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

__all__ = ["Poly", "poly_derivative", "sturm_chain", "isolate_roots", "sturm_nonneg", "count_roots"]

_Z = Fraction(0)


def _trim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


class Poly:
    """Dense polynomial, coefficients from the constant term upwards."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        self.c = _trim(x if type(x) is Fraction else Fraction(x) for x in coeffs)

    @classmethod
    def const(cls, v) -> "Poly":
        return cls([v])

    @classmethod
    def t(cls) -> "Poly":
        return cls([0, 1])

    # -- basic protocol
    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"Poly({[str(x) for x in self.c]})"

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for k, a in enumerate(self.c):
            if a == 0:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if mono and a == 1:
                parts.append(mono)
            elif mono and a == -1:
                parts.append("-" + mono)
            else:
                coef = str(a) if a.denominator == 1 else f"({a})"
                parts.append(coef + ("*" + mono if mono else ""))
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def lead(self) -> Fraction:
        return self.c[-1] if self.c else _Z

    # -- arithmetic
    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        n = max(len(self.c), len(other.c))
        a = self.c + (_Z,) * (n - len(self.c))
        b = other.c + (_Z,) * (n - len(other.c))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-x for x in self.c)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Poly) else Poly.const(-Fraction(other)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = Fraction(other)
            return Poly(x * other for x in self.c)
        if not self.c or not other.c:
            return Poly()
        out = [_Z] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __call__(self, x) -> Fraction:
        acc = _Z
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def derivative(self) -> "Poly":
        return Poly(k * a for k, a in enumerate(self.c) if k > 0)

    def divmod(self, d: "Poly") -> Tuple["Poly", "Poly"]:
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        q = [_Z] * max(len(r) - len(d.c) + 1, 0)
        lead = d.c[-1]
        while len(r) >= len(d.c) and r:
            k = len(r) - len(d.c)
            f = r[-1] / lead
            q[k] = f
            for i, b in enumerate(d.c):
                r[i + k] -= f * b
            r = list(_trim(r))
        return Poly(q), Poly(r)

    def monic(self) -> "Poly":
        return self * (1 / self.lead()) if self.c else self

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def squarefree(self) -> "Poly":
        if self.degree < 1:
            return self
        g = self.gcd(self.derivative())
        return self.divmod(g)[0].monic()

    def coefficients(self) -> Tuple[Fraction, ...]:
        return self.c


def poly_derivative(p: Poly) -> Poly:
    return p.derivative()


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sturm_chain(p: Poly) -> List[Poly]:
    chain = [p, p.derivative()]
    while not chain[-1].is_zero():
        r = chain[-2].divmod(chain[-1])[1]
        chain.append(-r)
    chain.pop()
    return chain


def _variations(chain: Sequence[Poly], x) -> int:
    signs = [s for s in (_sign(q(x)) for q in chain) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(chain: Sequence[Poly], lo, hi) -> int:
    """Distinct roots in the open interval (lo, hi); lo and hi must not be roots."""
    return _variations(chain, lo) - _variations(chain, hi)


def _nonroot_between(q: Poly, lo, hi):
    m = (lo + hi) / 2
    k = 2
    while q(m) == 0:  # finitely many rational roots, so this terminates
        k += 1
        m = lo + (hi - lo) / k
    return m


def isolate_roots(p: Poly, a, b) -> Tuple[List[Fraction], List[Tuple[Fraction, Fraction]]]:
    """Roots of ``p`` (not identically zero) on ``[a, b]``.

    Returns the roots at the endpoints exactly, plus disjoint isolating
    intervals ``(l, r)`` inside ``(a, b)`` with non-root endpoints, each
    containing exactly one root, sorted left to right.
    """
    a, b = Fraction(a), Fraction(b)
    q = p.squarefree()
    if q.degree < 1:
        return [], []
    exact = []
    lin = Poly([-a, 1])
    if q(a) == 0:
        exact.append(a)
        q = q.divmod(lin)[0]
    if b != a and q(b) == 0:
        exact.append(b)
        q = q.divmod(Poly([-b, 1]))[0]
    if q.degree < 1 or a == b:
        return exact, []
    chain = sturm_chain(q)
    out = []
    stack = [(a, b)]
    while stack:
        lo, hi = stack.pop()
        n = count_roots(chain, lo, hi)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        m = _nonroot_between(q, lo, hi)
        stack.append((m, hi))
        stack.append((lo, m))
    out.sort()
    # keep endpoint roots out of the isolating intervals so that every gap
    # between consecutive roots contains an interval endpoint
    if out and a in exact and out[0][0] == a:
        lo, hi = out[0]
        while lo == a:
            m = _nonroot_between(q, lo, hi)
            if count_roots(chain, lo, m) == 0:
                lo = m
            else:
                hi = m
        out[0] = (lo, hi)
    if out and b in exact and out[-1][1] == b:
        lo, hi = out[-1]
        while hi == b:
            m = _nonroot_between(q, lo, hi)
            if count_roots(chain, m, hi) == 0:
                hi = m
            else:
                lo = m
        out[-1] = (lo, hi)
    return exact, out


def refine(p: Poly, lo, hi, width) -> Tuple[Fraction, Fraction]:
    """Shrink an isolating interval of the square-free ``p`` below ``width``."""
    q = p.squarefree()
    chain = sturm_chain(q)
    while hi - lo > width:
        m = _nonroot_between(q, lo, hi)
        if count_roots(chain, lo, m) == 1:
            hi = m
        else:
            lo = m
    return lo, hi


def sturm_nonneg(p: Poly, a, b, strict: bool = False) -> bool:
    """Decide ``p(t) >= 0`` (``> 0`` when strict) for every t in [a, b]."""
    a, b = Fraction(a), Fraction(b)
    if a > b:
        raise ValueError("empty interval")
    if p.is_zero():
        return not strict
    exact, intervals = isolate_roots(p, a, b)
    if strict and (exact or intervals):
        return False
    points = {a, b}
    for lo, hi in intervals:
        points.update((lo, hi))
    return all(p(x) >= 0 for x in with_midpoints(points))


def with_midpoints(points) -> List[Fraction]:
    """Sorted points plus one point inside every gap between neighbours.

    With the roots and isolating-interval endpoints as ``points``, the sign
    of the polynomial is constant on each root-free gap, so one midpoint per
    gap settles it (two adjacent roots leave no endpoint in between).
    """
    pts = sorted(set(points))
    out = pts[:1]
    for lo, hi in zip(pts, pts[1:]):
        out.extend(((lo + hi) / 2, hi))
    return out
