"""Dense univariate polynomials over any field descriptor.

Coefficients are stored low degree first as payloads, with no trailing
zeros (the zero polynomial has an empty tuple).  Everything here is exact;
irreducibility testing and enumeration are only offered over finite fields,
with a narrow rational-root fallback over Q used by the curve layer.
"""

from __future__ import annotations

from itertools import product

from .errors import InputError
from .fields import FieldDescriptor, FieldElement, _prime_factors


class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldDescriptor, coeffs):
        cs = list(coeffs)
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_values(cls, field, values):
        """Build from ints / Fractions / FieldElements, low degree first."""
        return cls(field, [field.coerce(v) for v in values])

    @classmethod
    def zero(cls, field):
        return cls(field, [])

    @classmethod
    def one(cls, field):
        return cls(field, [field.pone])

    @classmethod
    def constant(cls, field, value):
        return cls(field, [field.coerce(value)])

    @classmethod
    def x(cls, field):
        return cls(field, [field.pzero, field.pone])

    # -- basic structure -----------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with deg 0 = -1 by convention."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == self.field.pone

    def lc(self):
        if not self.coeffs:
            raise InputError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.pone

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.pzero

    def __eq__(self, other):
        return (isinstance(other, Poly) and other.field == self.field
                and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    # -- arithmetic ----------------------------------------------------------

    def _check_field(self, other: "Poly"):
        # payloads carry no field tag, so silent cross-field arithmetic
        # would produce garbage instead of an error
        if other.field != self.field:
            raise InputError("polynomials over different fields")

    def __add__(self, other):
        self._check_field(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        out = [F.pzero] * n
        for i, c in enumerate(a):
            out[i] = c
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return Poly(F, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        F = self.field
        return Poly(F, [F.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        F = self.field
        if isinstance(other, Poly):
            self._check_field(other)
            a, b = self.coeffs, other.coeffs
            if not a or not b:
                return Poly(F, [])
            out = [F.pzero] * (len(a) + len(b) - 1)
            for i, ca in enumerate(a):
                if not F.is_zero(ca):
                    for j, cb in enumerate(b):
                        out[i + j] = F.add(out[i + j], F.mul(ca, cb))
            return Poly(F, out)
        return self.scale(other)

    def scale(self, value):
        F = self.field
        c = F.coerce(value)
        return Poly(F, [F.mul(x, c) for x in self.coeffs])

    def __pow__(self, e: int):
        if e < 0:
            raise InputError("negative polynomial power")
        out = Poly.one(self.field)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def shift(self, k: int):
        """Multiply by x**k."""
        if self.is_zero():
            return self
        return Poly(self.field, [self.field.pzero] * k + list(self.coeffs))

    def divmod(self, other: "Poly"):
        self._check_field(other)
        F = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        inv_lead = F.inv(other.lc())
        q = [F.pzero] * max(len(rem) - db, 0)
        while len(rem) - 1 >= db and rem:
            c = F.mul(rem[-1], inv_lead)
            k = len(rem) - 1 - db
            q[k] = c
            for i, cb in enumerate(other.coeffs):
                rem[k + i] = F.sub(rem[k + i], F.mul(c, cb))
            while rem and F.is_zero(rem[-1]):
                rem.pop()
        return Poly(F, q), Poly(F, rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def divides(self, other: "Poly") -> bool:
        return (other % self).is_zero()

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.lc()))

    def derivative(self) -> "Poly":
        F = self.field
        out = []
        for i in range(1, len(self.coeffs)):
            out.append(F.mul(self.coeffs[i], F.coerce(i)))
        return Poly(F, out)

    def evaluate(self, value):
        """Horner evaluation; accepts a payload or FieldElement, returns a payload."""
        F = self.field
        v = value.payload if isinstance(value, FieldElement) else F.coerce(value)
        acc = F.pzero
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, v), c)
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly.zero(self.field)
        for c in reversed(self.coeffs):
            acc = acc * inner + Poly(self.field, [c])
        return acc

    # -- gcd family ----------------------------------------------------------

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def xgcd(self, other: "Poly"):
        """Monic g plus s, t with s*self + t*other = g."""
        F = self.field
        r0, r1 = self, other
        s0, s1 = Poly.one(F), Poly.zero(F)
        t0, t1 = Poly.zero(F), Poly.one(F)
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero():
            return r0, s0, t0
        c = F.inv(r0.lc())
        return r0.scale(c), s0.scale(c), t0.scale(c)

    def is_squarefree(self) -> bool:
        """gcd with the derivative is constant; valid over Q and perfect F_q."""
        if self.is_zero():
            return False
        if self.degree == 0:
            return True
        return self.gcd(self.derivative()).degree == 0

    def powmod(self, e: int, modulus: "Poly") -> "Poly":
        out = Poly.one(self.field)
        base = self % modulus
        while e:
            if e & 1:
                out = (out * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return out

    def is_irreducible(self) -> bool:
        """Rabin test; finite coefficient fields only."""
        q = self.field.order()
        if q is None:
            raise InputError("irreducibility testing is only provided over finite fields")
        d = self.degree
        if d <= 0:
            return False
        if d == 1:
            return True
        f = self.monic()
        x = Poly.x(self.field)
        if not (f.divides(x.powmod(q ** d, f) - x)):
            return False
        for ell in _prime_factors(d):
            g = f.gcd(x.powmod(q ** (d // ell), f) - x)
            if g.degree != 0:
                return False
        return True

    def rational_roots(self):
        """All roots in Q, via the rational root theorem. Q coefficients only."""
        from fractions import Fraction
        if self.field.order() is not None:
            raise InputError("rational_roots is a Q-only helper")
        if self.is_zero():
            raise InputError("zero polynomial")
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // _gcd_int(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        k = 0
        while ints[k] == 0:
            k += 1
        lead, const = ints[-1], ints[k]
        roots = set()
        if k > 0:
            roots.add(Fraction(0))
        for pn in _divisors(abs(const)):
            for qd in _divisors(abs(lead)):
                for cand in (Fraction(pn, qd), Fraction(-pn, qd)):
                    if self.field.is_zero(self.evaluate(cand)):
                        roots.add(cand)
        return sorted(roots)

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if self.field.is_zero(c):
                continue
            if i == 0:
                parts.append(f"{c}")
            elif i == 1:
                parts.append(f"{c}*x" if c != self.field.pone else "x")
            else:
                parts.append(f"{c}*x^{i}" if c != self.field.pone else f"x^{i}")
        return " + ".join(reversed(parts))


def _gcd_int(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n):
    if n == 0:
        return [1]
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


# ---------------------------------------------------------------------------
# enumeration and residue arithmetic over finite fields
# ---------------------------------------------------------------------------

def iter_monic(field: FieldDescriptor, degree: int):
    """Monic degree-d polynomials, lexicographic in the payload tuple of
    (c_0, ..., c_{d-1})."""
    if field.order() is None:
        raise InputError("enumeration requires a finite field")
    if degree < 0:
        return
    payloads = list(field.iter_payloads())
    payloads.sort(key=field.payload_key)
    for tail in product(payloads, repeat=degree):
        yield Poly(field, list(tail) + [field.pone])


def iter_monic_irreducible(field: FieldDescriptor, max_degree: int):
    """Monic irreducibles of degree 1..max_degree, by degree then lex."""
    for d in range(1, max_degree + 1):
        for f in iter_monic(field, d):
            if d == 1 or f.is_irreducible():
                yield f


def count_monic_irreducible(q: int, d: int) -> int:
    """Necklace count (1/d) * sum_{e | d} mu(e) q^(d/e)."""
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += _moebius(e) * q ** (d // e)
    return total // d


def _moebius(n):
    out = 1
    for p in _prime_factors(n):
        if n % (p * p) == 0:
            return 0
        out = -out
    return out


def residue_pow(a: Poly, e: int, modulus: Poly) -> Poly:
    return a.powmod(e, modulus)


def residue_inverse(a: Poly, modulus: Poly) -> Poly:
    g, s, _ = a.xgcd(modulus)
    if g.degree != 0:
        raise ZeroDivisionError(f"{a!r} is not invertible mod {modulus!r}")
    return s % modulus


def residue_is_square(a: Poly, modulus: Poly) -> bool:
    """Euler criterion in F_q[x]/(modulus) for irreducible modulus, odd q."""
    F = a.field
    q = F.order()
    if q is None:
        raise InputError("residue_is_square requires a finite field")
    r = a % modulus
    if r.is_zero():
        return True
    qk = q ** modulus.degree
    return r.powmod((qk - 1) // 2, modulus).is_one()


_SQRT_BRUTE_CAP = 1 << 16


def residue_sqrt(a: Poly, modulus: Poly):
    """Smallest b (by payload key) with b**2 = a in F_q[x]/(modulus), or None.

    Brute force over the residue field, adequate for desk-scale orders;
    refuses fields larger than the cap rather than degrading silently.
    """
    F = a.field
    q = F.order()
    if q is None:
        raise InputError("residue_sqrt requires a finite field")
    size = q ** modulus.degree
    if size > _SQRT_BRUTE_CAP:
        raise InputError(f"residue field of order {size} exceeds the sqrt search cap")
    r = a % modulus
    if r.is_zero():
        return Poly.zero(F)
    payloads = sorted(F.iter_payloads(), key=F.payload_key)
    for tup in product(payloads, repeat=modulus.degree):
        b = Poly(F, list(tup))
        if ((b * b - r) % modulus).is_zero():
            return b
    return None


def hensel_sqrt(f: Poly, p: Poly, branch: Poly, precision: int) -> Poly:
    """Lift branch to Y with Y**2 = f mod p**precision, Y = branch mod p.

    Requires branch**2 = f mod p and branch invertible mod p (split place,
    odd characteristic).  Newton doubling on Y <- (Y + f/Y) / 2.
    """
    F = f.field
    if F.characteristic() == 2:
        raise InputError("no Hensel square root in characteristic 2")
    y = branch % p
    if not ((y * y - f) % p).is_zero():
        raise InputError("branch is not a square root of f at this place")
    half = Poly.constant(F, F.inv(F.coerce(2)))
    k = 1
    while k < precision:
        k = min(2 * k, precision)
        pk = p ** k
        inv_y = residue_inverse(y, pk)
        y = ((y + (f % pk) * inv_y) * half) % pk
    return y
