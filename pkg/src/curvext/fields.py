"""Exact coefficient fields: rationals, prime fields and their extensions.

Elements are immutable and canonically represented, so equality of
representations is equality in the field:

* rationals are reduced fractions with positive denominator
  (``fractions.Fraction`` guarantees this),
* prime-field residues are integers in ``[0, p)``,
* extension-field elements are fixed-length coefficient tuples of the
  residue polynomial, reduced modulo the defining polynomial.

A descriptor owns the payload-level arithmetic (``add``, ``mul``, ...),
which the polynomial and linear-algebra kernels call directly to avoid
wrapper overhead.  ``FieldElement`` wraps one payload with operator
overloading for everything else.

No floating point anywhere; all tests for zero are exact.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .errors import InputError

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; the base set is exact for n < 3.3e24."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# dense F_p[x] helpers on plain int lists (low degree first, trimmed)
# ---------------------------------------------------------------------------

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _padd(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _ptrim(out)


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
    return _ptrim(out)


def _pdivmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        k = len(a) - len(b)
        q[k] = c
        for i, cb in enumerate(b):
            a[k + i] = (a[k + i] - c * cb) % p
        _ptrim(a)
        if not a:
            break
    return _ptrim(q), a


def _pmod(a, b, p):
    return _pdivmod(a, b, p)[1]


def _pgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _ppowmod(base, e, mod, p):
    result = [1]
    base = _pmod(base, mod, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), mod, p)
        base = _pmod(_pmul(base, base, p), mod, p)
        e >>= 1
    return result


def _pxgcd(a, b, p):
    """Extended gcd on int-list polynomials mod p: g, s, t with s*a + t*b = g."""
    r0, r1 = list(a), list(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _padd(s0, [(-c) % p for c in _pmul(q, s1, p)], p)
        t0, t1 = t1, _padd(t0, [(-c) % p for c in _pmul(q, t1, p)], p)
    return r0, s0, t0


def _irreducible_mod_p(poly, p):
    """Rabin test for a monic int-list polynomial over F_p."""
    d = len(poly) - 1
    if d <= 0:
        return False
    x = [0, 1]
    xq = _ppowmod(x, p ** d, poly, p)
    if _ptrim(_padd(xq, [(-c) % p for c in x], p)):
        return False
    for ell in _prime_factors(d):
        e = d // ell
        xe = _ppowmod(x, p ** e, poly, p)
        g = _pgcd(_padd(xe, [(-c) % p for c in x], p), poly, p)
        if len(g) != 1:
            return False
    return True


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------

class FieldDescriptor:
    """Base class for field descriptors.

    Subclasses provide exact payload arithmetic.  Payloads are plain
    hashable Python values (Fraction, int, tuple of int).
    """

    def element(self, value) -> "FieldElement":
        return FieldElement(self, self.coerce(value))

    def zero(self) -> "FieldElement":
        return FieldElement(self, self.pzero)

    def one(self) -> "FieldElement":
        return FieldElement(self, self.pone)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == self.pzero

    def is_finite(self) -> bool:
        return self.order() is not None

    def iter_payloads(self):
        raise InputError(f"{self!r} is not a finite field")

    # subclasses: coerce, add, sub, mul, neg, inv, characteristic, order,
    # payload_key, payload_to_json, payload_from_json


class Rationals(FieldDescriptor):
    """The field of rational numbers; payloads are reduced Fractions."""

    pzero = Fraction(0)
    pone = Fraction(1)

    def coerce(self, value):
        if isinstance(value, float):
            raise InputError("floating-point values are not exact; pass int, Fraction or 'a/b'")
        if isinstance(value, bool):
            raise InputError("booleans are not field values")
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
        if isinstance(value, FieldElement) and value.field == self:
            return value.payload
        raise InputError(f"cannot coerce {value!r} into Q")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return 1 / a

    def characteristic(self):
        return 0

    def order(self):
        return None

    def payload_key(self, a):
        return (a.numerator, a.denominator)

    def payload_to_json(self, a):
        if a.denominator == 1:
            return int(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def payload_from_json(self, v):
        if isinstance(v, (int, str)):
            return self.coerce(v)
        raise InputError(f"bad rational value in JSON: {v!r}")

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class PrimeField(FieldDescriptor):
    """F_p for a prime p < 2**64; payloads are ints in [0, p)."""

    def __init__(self, p: int):
        if not isinstance(p, int) or isinstance(p, bool):
            raise InputError("prime modulus must be an integer")
        if p >= 1 << 64:
            raise InputError("prime moduli are restricted to < 2**64")
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
        self.p = p
        self.pzero = 0
        self.pone = 1 % p

    def coerce(self, value):
        if isinstance(value, bool):
            raise InputError("booleans are not field values")
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, FieldElement) and value.field == self:
            return value.payload
        if isinstance(value, str):
            return int(value) % self.p
        raise InputError(f"cannot coerce {value!r} into F_{self.p}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f"inverse of 0 in F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def characteristic(self):
        return self.p

    def order(self):
        return self.p

    def iter_payloads(self):
        return iter(range(self.p))

    def payload_key(self, a):
        return (a,)

    def payload_to_json(self, a):
        return a

    def payload_from_json(self, v):
        if isinstance(v, int) and not isinstance(v, bool):
            return v % self.p
        raise InputError(f"bad F_{self.p} value in JSON: {v!r}")

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"F_{self.p}"


class ExtensionField(FieldDescriptor):
    """F_{p^k} presented as F_p[t]/(minpoly); payloads are k-tuples of ints.

    ``minpoly`` is given low degree first, must be monic of degree k >= 2,
    and is checked for irreducibility at construction.
    """

    def __init__(self, p: int, minpoly):
        if not is_prime(p) or p >= 1 << 64:
            raise InputError(f"{p} is not a prime < 2**64")
        mp = [int(c) % p for c in minpoly]
        while mp and mp[-1] == 0:
            mp.pop()
        if len(mp) < 3:
            raise InputError("extension minpoly must have degree >= 2")
        if mp[-1] != 1:
            raise InputError("extension minpoly must be monic")
        if not _irreducible_mod_p(mp, p):
            raise InputError(f"minpoly {mp} is reducible over F_{p}")
        self.p = p
        self.k = len(mp) - 1
        self.minpoly = tuple(mp)
        self.pzero = (0,) * self.k
        self.pone = tuple([1 % p] + [0] * (self.k - 1))

    def _wrap(self, lst):
        return tuple(lst) + (0,) * (self.k - len(lst))

    def coerce(self, value):
        if isinstance(value, bool):
            raise InputError("booleans are not field values")
        if isinstance(value, int):
            return self._wrap([value % self.p])
        if isinstance(value, FieldElement) and value.field == self:
            return value.payload
        if isinstance(value, (list, tuple)):
            lst = [int(c) % self.p for c in value]
            if len(lst) > self.k:
                lst = _pmod(_ptrim(lst), list(self.minpoly), self.p)
            return self._wrap(lst)
        raise InputError(f"cannot coerce {value!r} into F_{self.p}^{self.k}")

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a, b):
        prod = _pmul(_ptrim(list(a)), _ptrim(list(b)), self.p)
        return self._wrap(_pmod(prod, list(self.minpoly), self.p))

    def inv(self, a):
        lst = _ptrim(list(a))
        if not lst:
            raise ZeroDivisionError(f"inverse of 0 in {self!r}")
        g, s, _ = _pxgcd(lst, list(self.minpoly), self.p)
        # irreducible modulus: g is a nonzero constant
        c = pow(g[0], self.p - 2, self.p)
        return self._wrap([x * c % self.p for x in s])

    def characteristic(self):
        return self.p

    def order(self):
        return self.p ** self.k

    def iter_payloads(self):
        # lexicographic in the coefficient tuple, constant coordinate slowest
        for tup in product(range(self.p), repeat=self.k):
            yield tup

    def payload_key(self, a):
        return a

    def payload_to_json(self, a):
        return list(a)

    def payload_from_json(self, v):
        if isinstance(v, int) and not isinstance(v, bool):
            return self.coerce(v)
        if isinstance(v, list):
            if len(v) > self.k:
                raise InputError("extension element has too many coordinates")
            return self.coerce(v)
        raise InputError(f"bad {self!r} value in JSON: {v!r}")

    def __eq__(self, other):
        return (isinstance(other, ExtensionField) and other.p == self.p
                and other.minpoly == self.minpoly)

    def __hash__(self):
        return hash(("Fpk", self.p, self.minpoly))

    def __repr__(self):
        return f"F_{self.p}^{self.k}"


class FieldElement:
    """One field value: a descriptor plus a canonical payload."""

    __slots__ = ("field", "payload")

    def __init__(self, field: FieldDescriptor, payload):
        self.field = field
        self.payload = payload

    def _p(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise InputError(f"mixed fields: {self.field!r} vs {other.field!r}")
            return other.payload
        return self.field.coerce(other)

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.payload, self._p(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.payload, self._p(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._p(other), self.payload))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.payload, self._p(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.payload, self._p(other)))

    def __rtruediv__(self, other):
        return FieldElement(self.field, self.field.div(self._p(other), self.payload))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.payload))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.payload == other.payload
        try:
            return self.payload == self.field.coerce(other)
        except (InputError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.payload))

    def __bool__(self):
        return not self.field.is_zero(self.payload)

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.payload))

    def is_zero(self):
        return self.field.is_zero(self.payload)

    def __repr__(self):
        return f"{self.payload!r} in {self.field!r}"


def field_from_json(obj) -> FieldDescriptor:
    """Parse a field descriptor from its JSON form.

    ``"Q"`` | ``{"Fp": p}`` | ``{"Fpk": {"p": p, "minpoly": [c0, ..., 1]}}``
    """
    if obj == "Q":
        return Rationals()
    if isinstance(obj, dict):
        if set(obj) == {"Fp"}:
            return PrimeField(obj["Fp"])
        if set(obj) == {"Fpk"}:
            inner = obj["Fpk"]
            if not isinstance(inner, dict) or set(inner) != {"p", "minpoly"}:
                raise InputError("Fpk descriptor needs exactly {p, minpoly}")
            return ExtensionField(inner["p"], inner["minpoly"])
    raise InputError(f"unrecognized field descriptor: {obj!r}")


def field_to_json(field: FieldDescriptor):
    if isinstance(field, Rationals):
        return "Q"
    if isinstance(field, PrimeField):
        return {"Fp": field.p}
    if isinstance(field, ExtensionField):
        return {"Fpk": {"p": field.p, "minpoly": list(field.minpoly)}}
    raise InputError(f"unknown field descriptor {field!r}")
