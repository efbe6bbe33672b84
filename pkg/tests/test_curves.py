import itertools

import pytest

from curvext import (Divisor, InputError, Poly, PrimeField, RationalFunction,
                     Rationals, curve_from_json, curve_to_json, divisor_from_json,
                     divisor_to_json, enumerate_closed_points,
                     enumerate_effective_divisors, make_curve, point_expansions,
                     point_from_json, point_to_json, valuation,
                     verify_expansion)
from helpers import (brute_point_count, curve_g1_f5, curve_g1_q, curve_g1w_f3,
                     curve_g2_f3, curve_g2_f7, curve_g3_f5)

Q = Rationals()


# ---------------------------------------------------------------------------
# point counts against brute force over F_q and F_{q^2} (and F_{q^3} for p=3)
# ---------------------------------------------------------------------------

# N_k = #C(F_{p^k}) counts each closed point of degree d | k exactly d times
COUNT_CASES = [
    (curve_g1_f5, 5, [1, 0, 0, 1], [2, 0, 1], None),
    (curve_g1w_f3, 3, [0, 1, 0, 1], [1, 0, 1], [1, 2, 0, 1]),
    (curve_g2_f3, 3, [1, 2, 0, 0, 0, 1], [1, 0, 1], [1, 2, 0, 1]),
    (curve_g2_f7, 7, [1, 2, 0, 0, 0, 1], [1, 0, 1], None),
    (curve_g3_f5, 5, [1, 1, 0, 0, 0, 0, 0, 1], [2, 0, 1], None),
]


@pytest.mark.parametrize("make,p,fc,quad,cubic",
                         COUNT_CASES, ids=lambda v: getattr(v, "__name__", ""))
def test_closed_points_match_brute_counts(make, p, fc, quad, cubic):
    curve = make()
    assert [int(c) for c in curve.f.coeffs] == [c % p for c in fc]
    pts = enumerate_closed_points(curve, 3)
    by_degree = {d: sum(1 for pt in pts if pt.degree == d) for d in (1, 2, 3)}
    assert by_degree[1] == brute_point_count(p, fc)
    assert by_degree[1] + 2 * by_degree[2] == brute_point_count(p, fc, quad)
    if cubic is not None:
        assert by_degree[1] + 3 * by_degree[3] == brute_point_count(p, fc, cubic)


def test_point_list_is_sorted_and_cached():
    curve = curve_g1_f5()
    pts = enumerate_closed_points(curve, 2)
    assert [pt.key() for pt in pts] == sorted(pt.key() for pt in pts)
    assert enumerate_closed_points(curve, 2) is pts
    assert all(pt.degree <= 2 for pt in pts)
    # split places come in conjugate pairs, everything else is self-conjugate
    for pt in pts:
        if pt.kind == "split":
            assert pt.conjugate() in pts and pt.conjugate() != pt
        else:
            assert pt.conjugate() == pt


# ---------------------------------------------------------------------------
# valuations
# ---------------------------------------------------------------------------

def test_coordinate_valuations_at_infinity():
    for make in (curve_g1_f5, curve_g1w_f3, curve_g2_f3, curve_g3_f5, curve_g1_q):
        curve = make()
        inf = curve.infinity()
        assert valuation(RationalFunction.x(curve), inf) == -2
        assert valuation(RationalFunction.y(curve), inf) == -(2 * curve.genus + 1)


def test_valuations_at_affine_places():
    curve = curve_g1_f5()                       # y^2 = x^3 + 1
    P = curve.point(0, 1)
    x = RationalFunction.x(curve)
    y = RationalFunction.y(curve)
    one = RationalFunction.one(curve)
    assert valuation(x, P) == 1
    # x^3 = (y-1)(y+1) and y+1 is a unit at P, so y-1 vanishes to order 3
    assert valuation(y - one, P) == 3
    assert valuation(y + one, P) == 0

    w = curve_g1w_f3()                          # y^2 = x^3 + x, W = (0,0)
    W = w.point(0, 0)
    assert W.kind == "ramified" and W.ramification == 2
    assert valuation(RationalFunction.y(w), W) == 1
    assert valuation(RationalFunction.x(w), W) == 2

    # f(1) = 2 is a nonsquare mod 5: nonsplit place of degree 2 over x - 1
    ns = curve.point(1, None)
    assert ns.kind == "nonsplit" and ns.degree == 2
    assert valuation(x - one, ns) == 1


@pytest.mark.parametrize("make", [curve_g1_f5, curve_g1w_f3, curve_g2_f3])
def test_principal_divisors_have_degree_zero(make):
    """deg div(fn) = 0 once every possible support degree is enumerated.

    Norms of the sample functions have x-degree <= 2g+1 and nonsplit
    places over their quadratic factors reach degree 4, so points up to
    max(4, 2g+1) cover the full support.
    """
    curve = make()
    x = RationalFunction.x(curve)
    y = RationalFunction.y(curve)
    one = RationalFunction.one(curve)
    pts = enumerate_closed_points(curve, max(4, 2 * curve.genus + 1))
    for fn in (x, y, x - one, y - x, x * x - y):
        total = sum(valuation(fn, pt) * pt.degree for pt in pts)
        assert total == 0
        # support really is covered: the pole order at infinity matches
        # the sum of the affine zero orders
        neg = sum(valuation(fn, pt) * pt.degree for pt in pts
                  if valuation(fn, pt) < 0)
        pos = sum(valuation(fn, pt) * pt.degree for pt in pts
                  if valuation(fn, pt) > 0)
        assert pos == -neg > 0


# ---------------------------------------------------------------------------
# local expansions: library residual plus an independent series check
# ---------------------------------------------------------------------------

def _series(offset, coeffs, valid_to):
    return (offset, list(coeffs), valid_to)


def _series_mul(a, b, reduce):
    ao, ac, av = a
    bo, bc, bv = b
    valid = min(av + bo, bv + ao)
    out = [0] * max(valid - ao - bo, 0)
    for i, x in enumerate(ac):
        if x == 0:
            continue
        for j, y in enumerate(bc):
            if i + j < len(out):
                out[i + j] = reduce(out[i + j] + x * y)
    return (ao + bo, out, valid)


def _series_add(a, b, reduce):
    ao, ac, av = a
    bo, bc, bv = b
    off = min(ao, bo)
    valid = min(av, bv)
    out = [0] * max(valid - off, 0)
    for src_off, src in ((ao, ac), (bo, bc)):
        for i, v in enumerate(src):
            k = src_off + i - off
            if 0 <= k < len(out):
                out[k] = reduce(out[k] + v)
    return (off, out, valid)


def _expansion_to_series(exp):
    assert exp.residue_dim == 1
    coeffs = [cs[0].payload for cs in exp.coefficients]
    return _series(exp.offset, coeffs, exp.offset + len(coeffs))


def test_expansions_satisfy_curve_equation_independently():
    """y(t)^2 - f(x(t)) = O(t^N) checked with plain truncated series."""
    for make in (curve_g1_f5, curve_g2_f3, curve_g1_q):
        curve = make()
        p = curve.field.characteristic()
        reduce = (lambda v: v % p) if p else (lambda v: v)
        targets = [curve.infinity()]
        if p:
            targets += enumerate_closed_points(curve, 1)[:6]
        else:
            targets.append(curve.point(0, 1))
        for pt in targets:
            xe, ye = point_expansions(pt, 12)
            xs = _expansion_to_series(xe)
            ys = _expansion_to_series(ye)
            lhs = _series_mul(ys, ys, reduce)
            # Horner evaluation of f at the x series
            acc = _series(0, [], 10 ** 9)
            for c in reversed(curve.f.coeffs):
                acc = _series_mul(acc, xs, reduce)
                acc = _series_add(acc, _series(0, [reduce(c)], acc[2]), reduce)
            diff = _series_add(lhs, _series_mul(acc, _series(0, [-1], 10 ** 9),
                                                reduce), reduce)
            window = diff[2] - diff[0]
            assert window >= 6
            assert all(reduce(v) == 0 for v in diff[1])


def test_expansion_offsets_and_library_residual():
    for make in (curve_g1_f5, curve_g1w_f3, curve_g2_f3, curve_g3_f5):
        curve = make()
        xe, ye = point_expansions(curve.infinity(), 8)
        assert xe.offset == -2
        assert ye.offset == -(2 * curve.genus + 1)
        for pt in enumerate_closed_points(curve, 2):
            assert verify_expansion(pt, 10)
            xe, ye = point_expansions(pt, 6)
            assert xe.residue_dim == ye.residue_dim
            assert xe.residue_dim == (pt.degree if pt.kind != "infinity" else 1)


# ---------------------------------------------------------------------------
# divisor arithmetic
# ---------------------------------------------------------------------------

def test_divisor_laws():
    curve = curve_g1_f5()
    inf = curve.infinity()
    P = curve.point(0, 1)
    Pc = P.conjugate()
    D = Divisor(curve, [(P, 2), (inf, -1)])
    E = Divisor(curve, [(Pc, 1), (P, -2)])
    assert (D + E).degree == D.degree + E.degree
    assert D + E == E + D
    assert (D - D).is_zero()
    assert D.multiplicity(P) == 2 and D.multiplicity(Pc) == 0
    assert (3 * D).degree == 3 * D.degree
    assert (D + E).multiplicity(P) == 0     # 2 - 2 coalesces away
    assert P not in (D + E).support()
    assert not D.is_effective()
    assert D.positive_part() == Divisor(curve, [(P, 2)])
    # duplicate pairs merge in the constructor
    assert Divisor(curve, [(P, 1), (P, 2)]) == Divisor(curve, [(P, 3)])
    assert curve.canonical_divisor().degree == 2 * curve.genus - 2
    with pytest.raises(InputError):
        Divisor(curve, [(P, "2")])
    with pytest.raises(InputError):
        Divisor(curve_g1w_f3(), [(P, 1)])


def test_effective_divisor_enumeration_counts_and_order():
    """#effective divisors of degree n from the Euler product over places."""
    curve = curve_g1w_f3()
    bound = 3
    pts = enumerate_closed_points(curve, bound)
    # truncated product of 1/(1 - t^deg) per closed point
    series = [1] + [0] * bound
    for pt in pts:
        geo = [1 if i % pt.degree == 0 else 0 for i in range(bound + 1)]
        series = [sum(series[j] * geo[i - j] for j in range(i + 1))
                  for i in range(bound + 1)]
    divisors = list(enumerate_effective_divisors(curve, bound))
    assert len(divisors) == len(set(d.key() for d in divisors))
    degrees = [D.degree for D in divisors]
    assert degrees == sorted(degrees)
    assert divisors[0].is_zero()
    for n in range(bound + 1):
        assert degrees.count(n) == series[n]
    assert all(D.is_effective() or D.is_zero() for D in divisors)
    # restricted-support mode agrees with filtering
    sub = [pt for pt in pts if pt.degree == 1][:3]
    got = list(enumerate_effective_divisors(curve, 2, points=sub))
    want = [D for D in divisors
            if D.degree <= 2 and all(pt in sub for pt in D.support())]
    assert {D.key() for D in got} == {D.key() for D in want}


# ---------------------------------------------------------------------------
# construction guards
# ---------------------------------------------------------------------------

def test_make_curve_rejections():
    F7 = PrimeField(7)
    with pytest.raises(InputError):
        make_curve(PrimeField(2), [1, 1, 0, 1])
    with pytest.raises(InputError):
        make_curve(Q, [1, 0, 0, 0, 1])          # even degree
    with pytest.raises(InputError):
        make_curve(Q, [0, 1])                   # degree too small
    with pytest.raises(InputError):
        make_curve(Q, [0, 0, 0, 1])             # x^3 is not squarefree
    # x^5 + x + 1 picks up a square factor mod 7
    with pytest.raises(InputError):
        make_curve(F7, [1, 1, 0, 0, 0, 1])
    make_curve(Q, [1, 1, 0, 0, 0, 1])           # fine in characteristic 0


def test_closed_point_guards():
    curve = curve_g1_f5()
    F = curve.field
    with pytest.raises(InputError):
        curve.point(2, 1)                       # 1^2 != f(2) = 4
    with pytest.raises(InputError):
        curve.point(2, None)                    # f(2) = 4 is a square: splits
    with pytest.raises(InputError):
        curve.point(4, 1)                       # f(4) = 0 forces ybranch 0
    W = curve.point(4, 0)                       # x = -1 is the root of x^3+1
    assert W.kind == "ramified" and W.is_weierstrass()
    assert W == curve.closed_point(Poly(F, [1, 1]), Poly(F, [0]))
    with pytest.raises(InputError):
        curve.closed_point(Poly(F, [4, 0, 1]), None)    # (x-1)(x+1) reducible
    with pytest.raises(InputError):
        curve.closed_point(Poly(F, [1, 2]), Poly(F, [1]))  # not monic
    # nonsplit request where f is a square in the residue field
    with pytest.raises(InputError):
        curve.point(0, None)                    # f(0) = 1 splits
    assert curve.infinity().is_weierstrass()
    assert curve.infinity().degree == 1


def test_json_round_trips():
    for make in (curve_g1_f5, curve_g2_f3, curve_g1_q):
        curve = make()
        assert curve_from_json(curve_to_json(curve)) == curve
        pts = (enumerate_closed_points(curve, 2)
               if curve.field.order() else [curve.infinity(),
                                            curve.point(0, 1),
                                            curve.point(0, -1)])
        for pt in pts:
            assert point_from_json(curve, point_to_json(pt)) == pt
        D = Divisor(curve, [(pts[0], 2), (pts[-1], -3)])
        assert divisor_from_json(curve, divisor_to_json(D)) == D
    curve = curve_g1_f5()
    # the short x/y spelling and explicit minpoly spelling agree
    assert (point_from_json(curve, {"x": 0, "y": 1})
            == point_from_json(curve, {"xminpoly": [0, 1], "ybranch": [1]}))
    with pytest.raises(InputError):
        point_from_json(curve, {"y": 1})
    with pytest.raises(InputError):
        divisor_from_json(curve, [{"point": "infinity", "mult": 1.5}])
    with pytest.raises(InputError):
        curve_from_json({"f": [1, 0, 1]})
