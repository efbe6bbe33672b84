"""Riemann-Roch spaces L(D) on odd-model hyperelliptic curves.

Every function on the curve is written as (a(x) + b(x)*y) / c(x).  L(D)
is computed by a pole-constrained ansatz: the denominator c is the
product of xminpoly(P)^{m_P} over the affine positive support of D,
degree caps on a and b come from the allowed pole order at infinity, and
vanishing requirements at affine places become exact linear congruence
constraints (Hensel-lifted branch matching at split places, parity
splitting at Weierstrass places, componentwise divisibility at nonsplit
places).  The kernel of the constraint system is the space; the ansatz
is complete because any member of L(D), written in lowest terms, has
denominator dividing c.

Basis normalization: the pole orders at infinity of the basis elements
are strictly increasing and each element has coefficient 1 at its
highest-pole monomial.  This makes bases, coordinates, and everything
built on them reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .curves import Divisor, HyperellipticCurve, _ord_at
from .errors import InputError, MembershipError
from .fields import FieldElement
from .linalg import Matrix, from_columns, kernel_basis, rref, solve
from .polys import Poly, hensel_sqrt


class RationalFunction:
    """(a + b*y)/c in normal form: c monic, gcd(gcd(a, b), c) = 1."""

    __slots__ = ("curve", "a", "b", "c")

    def __init__(self, curve: HyperellipticCurve, a: Poly, b: Poly,
                 c: Poly | None = None):
        F = curve.field
        if c is None:
            c = Poly.one(F)
        if c.is_zero():
            raise InputError("zero denominator")
        if a.field != F or b.field != F or c.field != F:
            raise InputError("component over the wrong field")
        if a.is_zero() and b.is_zero():
            c = Poly.one(F)
        else:
            g = a.gcd(b).gcd(c)
            if g.degree > 0:
                a = a // g
                b = b // g
                c = c // g
            if not c.is_monic():
                inv = F.inv(c.lc())
                a = a.scale(inv)
                b = b.scale(inv)
                c = c.monic()
        self.curve = curve
        self.a = a
        self.b = b
        self.c = c

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, curve):
        F = curve.field
        return cls(curve, Poly.zero(F), Poly.zero(F))

    @classmethod
    def one(cls, curve):
        F = curve.field
        return cls(curve, Poly.one(F), Poly.zero(F))

    @classmethod
    def constant(cls, curve, value):
        F = curve.field
        return cls(curve, Poly.constant(F, value), Poly.zero(F))

    @classmethod
    def x(cls, curve):
        F = curve.field
        return cls(curve, Poly.x(F), Poly.zero(F))

    @classmethod
    def y(cls, curve):
        F = curve.field
        return cls(curve, Poly.zero(F), Poly.one(F))

    @classmethod
    def from_parts(cls, curve, a, b, c=None):
        """Build from coefficient lists (or Polys) without further ado."""
        F = curve.field
        mk = lambda v: v if isinstance(v, Poly) else Poly.from_values(F, v)
        return cls(curve, mk(a), mk(b), mk(c) if c is not None else None)

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def __eq__(self, other):
        return (isinstance(other, RationalFunction) and other.curve == self.curve
                and other.a == self.a and other.b == self.b and other.c == self.c)

    def __hash__(self):
        return hash((self.curve, self.a, self.b, self.c))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        a = self.a * other.c + other.a * self.c
        b = self.b * other.c + other.b * self.c
        return RationalFunction(self.curve, a, b, self.c * other.c)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(self.curve, -self.a, -self.b, self.c)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        if not isinstance(other, RationalFunction):
            v = other.payload if isinstance(other, FieldElement) \
                else self.curve.field.coerce(other)
            return RationalFunction(self.curve, self.a.scale(v),
                                    self.b.scale(v), self.c)
        if other.curve != self.curve:
            raise InputError("functions on different curves")
        a = self.a * other.a + self.b * other.b * self.curve.f
        b = self.a * other.b + self.b * other.a
        return RationalFunction(self.curve, a, b, self.c * other.c)

    __rmul__ = __mul__

    def conjugate(self):
        """y -> -y."""
        return RationalFunction(self.curve, self.a, -self.b, self.c)

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.curve != self.curve:
                raise InputError("functions on different curves")
            return other
        return RationalFunction.constant(self.curve, other)

    def __repr__(self):
        num = f"{self.a!r}"
        if not self.b.is_zero():
            num = f"({self.a!r}) + ({self.b!r})*y"
        if self.c.is_one():
            return num
        return f"({num})/({self.c!r})"


@dataclass(frozen=True)
class RRBasis:
    """Normalized basis of L(D); immutable and safe to share."""

    curve: HyperellipticCurve
    divisor: Divisor
    basis: tuple
    dim: int
    denominator: Poly          # shared ansatz denominator of the raw pairs
    raw_pairs: tuple           # (a, b) with basis[i] = (a + b*y)/denominator
    pole_orders: tuple         # -v_infinity per element, strictly increasing

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return self.dim


def _ansatz_denominator(D: Divisor) -> Poly:
    c = Poly.one(D.curve.field)
    for pt, m in D.items:
        if m > 0 and pt.kind != "infinity":
            c = c * pt.xminpoly ** m
    return c


def _constraint_points(D: Divisor, c: Poly):
    """Map point -> required numerator valuation r = v_P(c) - m_P, for
    every affine place where r >= 1 (includes conjugates of split
    support, which c covers but D need not)."""
    def vc(pt):
        if c.degree < 1:
            return 0
        return pt.ramification * _ord_at(c, pt.xminpoly)

    req = {}
    for pt, m in D.items:
        if pt.kind != "infinity":
            req[pt] = vc(pt) - m
    for pt, m in D.items:
        if m > 0 and pt.kind == "split":
            conj = pt.conjugate()
            if conj not in req:
                req[conj] = vc(conj)
    return {pt: r for pt, r in req.items() if r >= 1}


def _constraint_rows(curve, pt, r, n_a, n_b):
    """Linear conditions on the ansatz coefficients enforcing
    v_pt(a + b*y) >= r.  Returns payload rows of width n_a + n_b."""
    F = curve.field
    p = pt.xminpoly
    X = Poly.x(F)

    def residue_block(count, modulus, mult=None):
        # column residues for coefficients of x^j (times mult if given)
        width = modulus.degree
        cols = []
        for j in range(count):
            q = X ** j if j else Poly.one(F)
            if mult is not None:
                q = q * mult
            q = q % modulus
            cols.append([q.coeff(i) for i in range(width)])
        return cols, width

    rows = []
    if pt.kind == "split":
        pr = p ** r
        Y = hensel_sqrt(curve.f, p, pt.ybranch, r)
        acols, w = residue_block(n_a, pr)
        bcols, _ = residue_block(n_b, pr, mult=Y)
        for i in range(w):
            rows.append([col[i] for col in acols] + [col[i] for col in bcols])
        return rows
    if pt.kind == "ramified":
        ka = (r + 1) // 2
        kb = r // 2
        if ka and n_a:
            acols, w = residue_block(n_a, p ** ka)
            zb = [F.pzero] * n_b
            for i in range(w):
                rows.append([col[i] for col in acols] + zb)
        if kb and n_b:
            bcols, w = residue_block(n_b, p ** kb)
            za = [F.pzero] * n_a
            for i in range(w):
                rows.append(za + [col[i] for col in bcols])
        return rows
    # nonsplit: 1 and yhat are independent over the local ring
    pr = p ** r
    if n_a:
        acols, w = residue_block(n_a, pr)
        zb = [F.pzero] * n_b
        for i in range(w):
            rows.append([col[i] for col in acols] + zb)
    if n_b:
        bcols, w = residue_block(n_b, pr)
        za = [F.pzero] * n_a
        for i in range(w):
            rows.append(za + [col[i] for col in bcols])
    return rows


def rr_basis(curve: HyperellipticCurve, D: Divisor) -> RRBasis:
    """Basis of L(D) = {f : div(f) + D >= 0}, canonically normalized.

    Results are cached on the curve by divisor key; bases are immutable,
    so the cache is transparent.
    """
    if D.curve != curve:
        raise InputError("divisor on a different curve")
    key = D.key()
    hit = curve._rr_cache.get(key)
    if hit is not None:
        return hit

    F = curve.field
    g = curve.genus
    empty = RRBasis(curve, D, (), 0, Poly.one(F), (), ())
    if D.degree < 0:
        curve._rr_cache[key] = empty
        return empty

    c = _ansatz_denominator(D)
    degc = c.degree
    m_inf = D.multiplicity(curve.infinity())
    a_max = degc + (m_inf // 2)
    b_max = degc + ((m_inf - (2 * g + 1)) // 2)
    n_a = max(a_max + 1, 0)
    n_b = max(b_max + 1, 0)
    width = n_a + n_b
    if width == 0:
        curve._rr_cache[key] = empty
        return empty

    rows = []
    req = _constraint_points(D, c)
    for pt in sorted(req, key=lambda q: q.key()):
        rows.extend(_constraint_rows(curve, pt, req[pt], n_a, n_b))
    kern = kernel_basis(Matrix(F, rows, ncols=width))
    if not kern:
        curve._rr_cache[key] = empty
        return empty

    # order monomials by pole order at infinity, highest first
    poles = [2 * j - 2 * degc for j in range(n_a)] \
        + [2 * j + 2 * g + 1 - 2 * degc for j in range(n_b)]
    perm = sorted(range(width), key=lambda t: -poles[t])
    mat = Matrix(F, [[vec[perm[t]].payload for t in range(width)]
                     for vec in kern], ncols=width)
    red = rref(mat)

    basis = []
    raw = []
    pole_orders = []
    for row in reversed(red.rows):
        vec = [F.pzero] * width
        lead = None
        for t, v in enumerate(row):
            vec[perm[t]] = v
            if lead is None and not F.is_zero(v):
                lead = poles[perm[t]]
        a = Poly(F, vec[:n_a])
        b = Poly(F, vec[n_a:])
        basis.append(RationalFunction(curve, a, b, c))
        raw.append((a, b))
        pole_orders.append(lead)
    out = RRBasis(curve, D, tuple(basis), len(basis), c, tuple(raw),
                  tuple(pole_orders))
    curve._rr_cache[key] = out
    return out


def h0(curve: HyperellipticCurve, D: Divisor) -> int:
    return rr_basis(curve, D).dim


def h1(curve: HyperellipticCurve, D: Divisor) -> int:
    """Computed through Serre duality as h0(K - D); no cocycles anywhere."""
    return rr_basis(curve, curve.canonical_divisor() - D).dim


def coordinates(fn: RationalFunction, B: RRBasis):
    """Exact coordinates of fn in B.  Membership failures raise; nothing
    is ever projected."""
    if fn.curve != B.curve:
        raise InputError("function on a different curve")
    F = fn.curve.field
    if fn.is_zero():
        return [FieldElement(F, F.pzero)] * B.dim
    if B.dim == 0:
        raise MembershipError("nonzero function against an empty basis")
    # sum_i t_i (a_i + b_i y)/den = (A + B y)/C  <=>  componentwise poly
    # identities after clearing denominators
    A, Bb, C = fn.a, fn.b, fn.c
    den = B.denominator
    cols = []
    deg_a = max(max((a.degree for a, _ in B.raw_pairs), default=-1) + C.degree,
                A.degree + den.degree) + 1
    deg_b = max(max((b.degree for _, b in B.raw_pairs), default=-1) + C.degree,
                Bb.degree + den.degree) + 1
    for a, b in B.raw_pairs:
        pa = a * C
        pb = b * C
        cols.append([pa.coeff(i) for i in range(deg_a)]
                    + [pb.coeff(i) for i in range(deg_b)])
    ra = A * den
    rb = Bb * den
    rhs = [ra.coeff(i) for i in range(deg_a)] + [rb.coeff(i) for i in range(deg_b)]
    sol = solve(from_columns(F, cols), rhs)
    if sol is None:
        raise MembershipError(f"{fn!r} is not in the span of the basis")
    return sol


def product_coordinates(s: RationalFunction, t: RationalFunction,
                        target: RRBasis):
    """Coordinates of s*t in the target basis (cup-product plumbing)."""
    return coordinates(s * t, target)


def basis_transition(src: RRBasis, dst: RRBasis,
                     mul: RationalFunction | None = None) -> Matrix:
    """Matrix whose column i gives mul*src[i] in dst coordinates; with
    mul = None the identity function is used.  Exposed so tests can
    verify that divisor-representative choices only change results by
    canonical isomorphisms."""
    cols = []
    for fn in src.basis:
        fn2 = fn if mul is None else fn * mul
        cols.append(coordinates(fn2, dst))
    return from_columns(src.curve.field, cols)


class LinearFunctional:
    """Element of the dual of an RRBasis span, stored by coordinates."""

    __slots__ = ("basis", "coords")

    def __init__(self, basis: RRBasis, values):
        F = basis.curve.field
        coords = tuple(v.payload if isinstance(v, FieldElement) else F.coerce(v)
                       for v in values)
        if len(coords) != basis.dim:
            raise InputError(f"need {basis.dim} coordinates, got {len(coords)}")
        self.basis = basis
        self.coords = coords

    def evaluate_coords(self, vec) -> FieldElement:
        F = self.basis.curve.field
        acc = F.pzero
        for c, v in zip(self.coords, vec):
            p = v.payload if isinstance(v, FieldElement) else v
            acc = F.add(acc, F.mul(c, p))
        return FieldElement(F, acc)

    def evaluate(self, fn: RationalFunction) -> FieldElement:
        return self.evaluate_coords(coordinates(fn, self.basis))

    def is_zero(self) -> bool:
        F = self.basis.curve.field
        return all(F.is_zero(c) for c in self.coords)

    def __eq__(self, other):
        return (isinstance(other, LinearFunctional)
                and other.basis.divisor == self.basis.divisor
                and other.basis.curve == self.basis.curve
                and other.coords == self.coords)

    def __hash__(self):
        return hash((self.basis.curve, self.basis.divisor, self.coords))

    def __repr__(self):
        return f"LinearFunctional{self.coords!r}"


@dataclass
class PrincipalityResult:
    principal: bool
    witness: RationalFunction | None

    def __bool__(self):
        return self.principal


def is_principal(curve: HyperellipticCurve, D: Divisor) -> PrincipalityResult:
    """Decide D ~ 0 for a degree-0 divisor; the witness w has div(w) = -D.

    For degree 0 this is exact: h0(D) = 1 forces div(w) + D = 0 on the
    nose, not just >= 0.
    """
    if D.degree != 0:
        raise InputError(f"principality is only defined in degree 0, got {D.degree}")
    B = rr_basis(curve, D)
    if B.dim == 0:
        return PrincipalityResult(False, None)
    return PrincipalityResult(True, B.basis[0])


def function_to_json(fn: RationalFunction):
    """Coefficient-list form {a, b, c} of (a + b*y)/c, constant first."""
    F = fn.curve.field
    return {"a": [F.payload_to_json(v) for v in fn.a.coeffs],
            "b": [F.payload_to_json(v) for v in fn.b.coeffs],
            "c": [F.payload_to_json(v) for v in fn.c.coeffs]}
