"""Rank-2 extension classes and semistability certificates.

An extension datum fixes a curve, a quotient class N (deg N = n, even)
and a divisor M with 2M ~ N + K; L = K - M is derived.  Extension
classes of N by the trivial bundle live in H^1(C, N^{-1}), which is
handled exclusively through Serre duality as the dual of H^0(C, N+K):
a class is a linear functional on the normalized basis of L(N+K).

The boundary map of a class e, for a twist pair (L', M'), is the matrix
e(s_i * t_j * u') over bases of L(M') and L(K-L'), where u' is the
principality witness identifying L(K-L'+M') with L(N+K).  Semistability
certificates never assert instability from a failed sufficient test;
only an explicit destabilizing witness does that.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from itertools import product as _iproduct

from .curves import (Divisor, HyperellipticCurve, curve_from_json,
                     divisor_from_json, divisor_to_json,
                     enumerate_effective_divisors)
from .errors import ExhaustionError, InputError
from .fields import FieldElement
from .linalg import Matrix, det, rank
from .riemann_roch import (LinearFunctional, RationalFunction, coordinates,
                           is_principal, rr_basis)


class ExtensionDatum:
    """Validated (curve, N, M) with cached bases and the witness u.

    u satisfies div(u) = 2M - N - K, so multiplication by u maps L(2M)
    isomorphically onto L(N+K); all pairings are routed through it.
    """

    __slots__ = ("curve", "N", "M", "L", "n", "m", "u",
                 "basis_M", "basis_NK", "_tensor")

    def __init__(self, curve, N, M, L, u, basis_M, basis_NK):
        self.curve = curve
        self.N = N
        self.M = M
        self.L = L
        self.n = N.degree
        self.m = basis_M.dim
        self.u = u
        self.basis_M = basis_M
        self.basis_NK = basis_NK
        self._tensor = None

    @property
    def class_dim(self) -> int:
        """dim H^1(C, N^{-1}) = h0(N+K) = n + g - 1 for valid data."""
        return self.basis_NK.dim

    def pair_tensor(self):
        """T[i][j] = coordinates of s_i * s_j * u in the L(N+K) basis,
        for the balanced boundary map; symmetric in (i, j)."""
        if self._tensor is None:
            m = self.m
            su = [s * self.u for s in self.basis_M.basis]
            T = [[None] * m for _ in range(m)]
            for i in range(m):
                for j in range(i, m):
                    vec = tuple(v.payload for v in
                                coordinates(self.basis_M.basis[i] * su[j],
                                            self.basis_NK))
                    T[i][j] = vec
                    T[j][i] = vec
            self._tensor = tuple(tuple(row) for row in T)
        return self._tensor

    def boundary_payload_rows(self, coords):
        """Balanced boundary matrix of the class with the given payload
        coordinates, as raw payload rows (hot path for exhaustive runs)."""
        F = self.curve.field
        T = self.pair_tensor()
        rows = []
        for Ti in T:
            row = []
            for vec in Ti:
                acc = F.pzero
                for ek, tk in zip(coords, vec):
                    acc = F.add(acc, F.mul(ek, tk))
                row.append(acc)
            rows.append(row)
        return rows

    def det_payload(self, coords):
        """det of the balanced boundary matrix, as a payload."""
        return _det_small(self.curve.field, self.boundary_payload_rows(coords))

    def __repr__(self):
        return (f"ExtensionDatum(n={self.n}, m={self.m}, "
                f"g={self.curve.genus} on {self.curve!r})")


def _det_small(F, rows):
    m = len(rows)
    if m == 0:
        return F.pone
    if m == 1:
        return rows[0][0]
    if m == 2:
        return F.sub(F.mul(rows[0][0], rows[1][1]),
                     F.mul(rows[0][1], rows[1][0]))
    if m == 3:
        a, b, c = rows[0]
        d, e, f = rows[1]
        g, h, i = rows[2]
        t1 = F.mul(a, F.sub(F.mul(e, i), F.mul(f, h)))
        t2 = F.mul(b, F.sub(F.mul(d, i), F.mul(f, g)))
        t3 = F.mul(c, F.sub(F.mul(d, h), F.mul(e, g)))
        return F.add(F.sub(t1, t2), t3)
    return det(Matrix(F, rows)).payload


def make_datum(curve: HyperellipticCurve, N: Divisor, M: Divisor) -> ExtensionDatum:
    """Validate and assemble an extension datum.

    Checks: n = deg N is even and nonnegative; deg M = n/2 + g - 1;
    2M ~ N + K with an explicit witness; N nonprincipal when n = 0.
    """
    g = curve.genus
    n = N.degree
    if n < 0 or n % 2:
        raise InputError(f"deg N = {n}; need an even nonnegative degree")
    if M.degree != n // 2 + g - 1:
        raise InputError(
            f"deg M = {M.degree}; need n/2 + g - 1 = {n // 2 + g - 1}")
    K = curve.canonical_divisor()
    if n == 0 and is_principal(curve, N):
        raise InputError("N must not be principal when n = 0")
    pr = is_principal(curve, N + K - 2 * M)
    if not pr:
        raise InputError("2M is not linearly equivalent to N + K")
    basis_M = rr_basis(curve, M)
    basis_NK = rr_basis(curve, N + K)
    datum = ExtensionDatum(curve, N, M, K - M, pr.witness, basis_M, basis_NK)
    if datum.class_dim != n + g - 1:
        raise InputError(
            f"h0(N+K) = {datum.class_dim}, expected n+g-1 = {n + g - 1}")
    return datum


def half_class_helper(curve: HyperellipticCurve, B: Divisor):
    """(N, M) = (2B, B + (g-1)*infinity); the resulting datum always
    validates since 2M - N - K = 0 as a divisor."""
    N = 2 * B
    M = B + curve.infinity_divisor(curve.genus - 1)
    return N, M


class ExtensionClass:
    """An element of Ext(N, O) = H^1(C, N^{-1}), stored dually."""

    __slots__ = ("datum", "functional")

    def __init__(self, datum: ExtensionDatum, values):
        self.datum = datum
        self.functional = LinearFunctional(datum.basis_NK, values)

    @classmethod
    def zero(cls, datum):
        return cls(datum, [datum.curve.field.pzero] * datum.class_dim)

    @property
    def coords(self):
        return self.functional.coords

    def evaluate(self, fn: RationalFunction) -> FieldElement:
        return self.functional.evaluate(fn)

    def is_zero(self) -> bool:
        return self.functional.is_zero()

    def __eq__(self, other):
        return (isinstance(other, ExtensionClass) and other.datum is self.datum
                and other.coords == self.coords)

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"ExtensionClass{self.coords!r}"


@dataclass(frozen=True)
class BoundaryMatrix:
    matrix: Matrix
    row_basis: object            # RRBasis of L(M')
    col_basis: object            # RRBasis of L(K-L')
    witness: RationalFunction    # u' identifying L(K-L'+M') with L(N+K)


def _twist_witness(datum: ExtensionDatum, Lp: Divisor, Mp: Divisor):
    Dp = datum.N + Lp - Mp
    if Dp.degree != 0:
        raise InputError(
            f"deg(M') - deg(L') = {Mp.degree - Lp.degree} != n = {datum.n}")
    pr = is_principal(datum.curve, Dp)
    if not pr:
        raise InputError("M' - L' is not linearly equivalent to N")
    return pr.witness


def boundary_matrix(e: ExtensionClass, Lp: Divisor | None = None,
                    Mp: Divisor | None = None) -> BoundaryMatrix:
    """Matrix of the connecting map H^0(M') -> H^1(L') of the twisted
    extension, entries e(s_i t_j u').  Defaults to the datum's (L, M)."""
    datum = e.datum
    if Lp is None:
        Lp = datum.L
    if Mp is None:
        Mp = datum.M
    up = _twist_witness(datum, Lp, Mp)
    curve = datum.curve
    S = rr_basis(curve, Mp)
    T = rr_basis(curve, curve.canonical_divisor() - Lp)
    F = curve.field
    rows = []
    for s in S.basis:
        su = s * up
        row = [e.evaluate(su * t).payload for t in T.basis]
        rows.append(row)
    return BoundaryMatrix(Matrix(F, rows, ncols=T.dim), S, T, up)


@dataclass(frozen=True)
class Prop1Certificate:
    status: str                  # "certified-semistable" | "inconclusive"
    rank: int
    case_a: bool                 # deg L' + deg M' >= 2g-2, need injectivity
    case_b: bool                 # deg L' + deg M' <= 2g-2, need surjectivity
    rows: int                    # h0(M')
    cols: int                    # h1(L') = h0(K-L')

    @property
    def certified(self) -> bool:
        return self.status == "certified-semistable"


def prop1_certificate(e: ExtensionClass, Lp: Divisor | None = None,
                      Mp: Divisor | None = None) -> Prop1Certificate:
    """Sufficient semistability test via the boundary map.

    Case a (deg L' + deg M' >= 2g-2): certified when the map is
    injective.  Case b (<= 2g-2): certified when surjective.  A failed
    test is Inconclusive, never "unstable": semi-stable extensions with
    degenerate boundary maps exist.
    """
    datum = e.datum
    if Lp is None:
        Lp = datum.L
    if Mp is None:
        Mp = datum.M
    if Lp.degree > Mp.degree:
        raise InputError("need deg L' <= deg M'")
    B = boundary_matrix(e, Lp, Mp)
    r = rank(B.matrix)
    s = Lp.degree + Mp.degree
    edge = 2 * datum.curve.genus - 2
    case_a = s >= edge
    case_b = s <= edge
    ok = (case_a and r == B.matrix.nrows) or (case_b and r == B.matrix.ncols)
    return Prop1Certificate(
        "certified-semistable" if ok else "inconclusive",
        r, case_a, case_b, B.matrix.nrows, B.matrix.ncols)


def det_test(e: ExtensionClass) -> bool:
    """Nonvanishing of det of the balanced boundary matrix.

    True implies the extension is semi-stable over the algebraic
    closure.  False implies nothing.  The test depends on the chosen M
    only through its class; inequivalent choices of M for the same N are
    genuinely different sufficient tests.
    """
    F = e.datum.curve.field
    return not F.is_zero(e.datum.det_payload(e.coords))


@dataclass(frozen=True)
class DestabilizerResult:
    witness: Divisor | None
    examined: int
    complete: bool
    max_degree: int

    @property
    def found(self) -> bool:
        return self.witness is not None


def brute_force_destabilizer(e: ExtensionClass, Lp: Divisor | None = None,
                             Mp: Divisor | None = None,
                             max_degree: int | None = None,
                             points=None) -> DestabilizerResult:
    """Search for a destabilizing sub-line bundle of the twisted extension.

    A witness is an effective D with deg D < (deg M' - deg L')/2 such
    that e annihilates L(K - L' + M' - D); slope equality never counts
    as destabilizing.  Exhaustive (complete) over a finite field without
    a degree cap; over infinite fields an explicit candidate point set
    is required and the verdict "none" only covers that domain.
    """
    datum = e.datum
    curve = datum.curve
    if Lp is None:
        Lp = datum.L
    if Mp is None:
        Mp = datum.M
    if Lp.degree > Mp.degree:
        raise InputError("need deg L' <= deg M'")
    if curve.field.order() is None and points is None:
        raise InputError("infinite base field: supply candidate points")
    delta = Mp.degree - Lp.degree
    full_bound = (delta - 1) // 2     # deg D < delta/2, strict slope
    bound = full_bound if max_degree is None else min(full_bound, max_degree)
    complete = points is None and bound == full_bound
    up = _twist_witness(datum, Lp, Mp)
    base = curve.canonical_divisor() - Lp + Mp
    examined = 0
    if bound >= 0:
        for D in enumerate_effective_divisors(curve, bound, points=points):
            examined += 1
            if _annihilates(e, rr_basis(curve, base - D), up):
                _reverify_annihilation(e, rr_basis(curve, base - D), up)
                return DestabilizerResult(D, examined, complete, bound)
    return DestabilizerResult(None, examined, complete, bound)


def _annihilates(e: ExtensionClass, B, up) -> bool:
    F = e.datum.curve.field
    for w in B.basis:
        if not F.is_zero(e.evaluate(w * up).payload):
            return False
    return True


def _reverify_annihilation(e: ExtensionClass, B, up):
    # witnesses are cheap to double-check and expensive to trust
    for w in B.basis:
        val = e.functional.evaluate_coords(
            coordinates(w * up, e.datum.basis_NK))
        if not e.datum.curve.field.is_zero(val.payload):
            raise AssertionError("destabilizer witness failed re-verification")


@dataclass(frozen=True)
class SearchResult:
    witness: ExtensionClass
    coefficients: tuple
    box: int
    examined: int


def search_semistable(V, box: int | None = None) -> SearchResult:
    """First class in the integer box with a nonzero boundary determinant.

    V is a list of linearly independent ExtensionClass over one datum.
    Candidates e = sum n_i V_i are scanned with increasing max-norm of
    (n_1..n_k), lexicographically within each shell; the default box
    bound is m.  Exhausting the box raises; over characteristic 0 with
    dim V >= n - m + g that indicates a bug, not bad luck.
    """
    if not V:
        raise InputError("empty subspace")
    datum = V[0].datum
    for e in V:
        if e.datum is not datum:
            raise InputError("classes from different data")
    F = datum.curve.field
    k = len(V)
    vecs = [e.coords for e in V]
    if rank(Matrix(F, vecs, ncols=datum.class_dim)) != k:
        raise InputError("classes are not linearly independent")
    if box is None:
        box = datum.m
    examined = 0
    for r in range(box + 1):
        for tup in _iproduct(range(-r, r + 1), repeat=k):
            if max(abs(t) for t in tup) != r:
                continue
            examined += 1
            coords = [F.pzero] * datum.class_dim
            for ni, vec in zip(tup, vecs):
                if ni == 0:
                    continue
                c = F.coerce(ni)
                coords = [F.add(x, F.mul(c, v)) for x, v in zip(coords, vec)]
            if not F.is_zero(datum.det_payload(coords)):
                e = ExtensionClass(datum, coords)
                return SearchResult(e, tup, box, examined)
    raise ExhaustionError(
        f"no semistable class in the box max|n_i| <= {box} "
        f"({examined} candidates over a {k}-dimensional subspace)")


# ---------------------------------------------------------------------------
# JSON forms
# ---------------------------------------------------------------------------

def datum_from_json(obj, base_dir: str = ".") -> ExtensionDatum:
    if not isinstance(obj, dict) or not {"curve", "N", "M"} <= set(obj):
        raise InputError("datum JSON needs 'curve', 'N', 'M'")
    cv = obj["curve"]
    if isinstance(cv, str):
        path = cv if os.path.isabs(cv) else os.path.join(base_dir, cv)
        with open(path, "r", encoding="utf-8") as fh:
            cv = json.load(fh)
    curve = curve_from_json(cv)
    N = divisor_from_json(curve, obj["N"])
    M = divisor_from_json(curve, obj["M"])
    return make_datum(curve, N, M)


def class_from_json(obj, base_dir: str = ".") -> ExtensionClass:
    if not isinstance(obj, dict) or "datum" not in obj or "e" not in obj:
        raise InputError("class JSON needs 'datum' and 'e'")
    datum = datum_from_json(obj["datum"], base_dir)
    vals = obj["e"]
    if not isinstance(vals, list):
        raise InputError("'e' must be a coordinate list")
    F = datum.curve.field
    return ExtensionClass(datum, [F.payload_from_json(v) for v in vals])


def subspace_from_json(obj, base_dir: str = "."):
    if not isinstance(obj, dict) or "datum" not in obj or "V" not in obj:
        raise InputError("subspace JSON needs 'datum' and 'V'")
    datum = datum_from_json(obj["datum"], base_dir)
    F = datum.curve.field
    out = []
    for row in obj["V"]:
        out.append(ExtensionClass(datum, [F.payload_from_json(v) for v in row]))
    return datum, out


def datum_to_json(datum: ExtensionDatum):
    from .curves import curve_to_json
    return {"curve": curve_to_json(datum.curve),
            "N": divisor_to_json(datum.N),
            "M": divisor_to_json(datum.M)}


def class_to_json(e: ExtensionClass):
    F = e.datum.curve.field
    return {"datum": datum_to_json(e.datum),
            "e": [F.payload_to_json(v) for v in e.coords]}
