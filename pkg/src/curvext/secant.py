"""Secant-variety membership and the off-secant sampling experiment.

A class e, viewed projectively in P(H^1(C, N^{-1})), lies on the secant
variety Sigma_d of the curve embedded by |N+K| exactly when e lies in
the span of some effective divisor of degree <= d; dually, when e
annihilates H^0(C, N+K-D) for such a D.  Membership at index
d = n/2 - 1 is the obstruction to semi-stability of the extension.

The experiment samples random subspaces V of class space and records
whether V escapes Sigma_d, cross-checking the determinant test against
membership on every class it touches.  Per-trial seeds are split from
the master seed by hashing "seed:trial", so results do not depend on
scheduling or thread count.
"""

from __future__ import annotations

import hashlib
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product as _iproduct

from .curves import Divisor, enumerate_effective_divisors
from .errors import InputError
from .extensions import ExtensionClass, ExtensionDatum
from .linalg import Matrix, kernel_basis, rank
from .riemann_roch import coordinates, rr_basis


@dataclass(frozen=True)
class SecantQuery:
    e: ExtensionClass
    d: int
    domain: str                  # "exhaustive-finite-field" | "explicit-point-set"
    points: tuple | None = None

    def __post_init__(self):
        if self.d < 0:
            raise InputError("secant index must be nonnegative")


@dataclass(frozen=True)
class SecantResult:
    witness: Divisor | None
    d: int
    examined: int
    complete: bool

    @property
    def member(self) -> bool:
        return self.witness is not None


def _annihilator_rows(datum: ExtensionDatum, D: Divisor):
    """Constraint rows on class coordinates: one per basis element of
    L(N+K-D), as payload vectors in the L(N+K) coordinates."""
    B = rr_basis(datum.curve, datum.N + datum.curve.canonical_divisor() - D)
    return [tuple(v.payload for v in coordinates(w, datum.basis_NK))
            for w in B.basis]


def _annihilates_rows(F, rows, coords) -> bool:
    for row in rows:
        acc = F.pzero
        for c, v in zip(coords, row):
            acc = F.add(acc, F.mul(c, v))
        if not F.is_zero(acc):
            return False
    return True


def secant_member(e: ExtensionClass, d: int | None = None,
                  points=None) -> SecantResult:
    """Decide e in Sigma_d, returning the smallest witness divisor.

    d defaults to the datum's own index n/2 - 1 when n >= 2.  Witnesses
    are scanned in divisor enumeration order (degree, then point order)
    and a hit is re-verified against a fresh coordinate computation
    before being returned.
    """
    datum = e.datum
    if d is None:
        if datum.n < 2:
            raise InputError("n = 0 datum has no default secant index")
        d = datum.n // 2 - 1
    q = SecantQuery(e, d,
                    "explicit-point-set" if points is not None
                    else "exhaustive-finite-field",
                    None if points is None else tuple(points))
    if q.domain == "exhaustive-finite-field" and datum.curve.field.order() is None:
        raise InputError("infinite base field: supply candidate points")
    F = datum.curve.field
    coords = e.coords
    examined = 0
    for D in enumerate_effective_divisors(datum.curve, q.d, points=points):
        examined += 1
        if _annihilates_rows(F, _annihilator_rows(datum, D), coords):
            _reverify_member(e, D)
            return SecantResult(D, q.d, examined, points is None)
    return SecantResult(None, q.d, examined, points is None)


def _reverify_member(e: ExtensionClass, D: Divisor):
    datum = e.datum
    B = rr_basis(datum.curve, datum.N + datum.curve.canonical_divisor() - D)
    for w in B.basis:
        if not datum.curve.field.is_zero(e.evaluate(w).payload):
            raise AssertionError("secant witness failed re-verification")


def secant_table(datum: ExtensionDatum, d: int, points=None) -> frozenset:
    """All member coordinate tuples of Sigma_d, as a frozenset.

    Enumerates, for each effective divisor D of degree <= d, the
    annihilator subspace of L(N+K-D) in class space (its dimension is
    deg D) and takes the union.  Exhaustive sweeps and the experiment
    use this instead of per-class divisor scans.
    """
    F = datum.curve.field
    if F.order() is None and points is None:
        raise InputError("infinite base field: supply candidate points")
    payloads = list(F.iter_payloads())
    members = set()
    for D in enumerate_effective_divisors(datum.curve, d, points=points):
        rows = _annihilator_rows(datum, D)
        ker = kernel_basis(Matrix(F, rows, ncols=datum.class_dim))
        kvecs = [tuple(v.payload for v in vec) for vec in ker]
        for cs in _iproduct(payloads, repeat=len(kvecs)):
            acc = [F.pzero] * datum.class_dim
            for c, vec in zip(cs, kvecs):
                acc = [F.add(a, F.mul(c, v)) for a, v in zip(acc, vec)]
            members.add(tuple(acc))
    return frozenset(members)


# ---------------------------------------------------------------------------
# Off-secant experiment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrialOutcome:
    trial: int
    success: bool
    examined: int
    witness: tuple | None        # payload coordinates of an off-secant class


@dataclass(frozen=True)
class OffsecantReport:
    q: int
    n: int
    g: int
    m: int
    s: int
    d: int
    trials: int
    seed: int
    hypothesis_met: bool         # s >= n - m + g
    successes: int
    failures: int
    examined_total: int
    violations: int              # det_test true yet secant member; expect 0
    outcomes: tuple

    def to_json(self, field):
        return {
            "q": self.q, "n": self.n, "g": self.g, "m": self.m,
            "s": self.s, "d": self.d, "trials": self.trials,
            "seed": self.seed, "hypothesis_met": self.hypothesis_met,
            "successes": self.successes, "failures": self.failures,
            "examined_total": self.examined_total,
            "violations": self.violations,
            "outcomes": [
                {"trial": t.trial, "success": t.success,
                 "examined": t.examined,
                 "witness": None if t.witness is None else
                 [field.payload_to_json(v) for v in t.witness]}
                for t in self.outcomes],
        }


def _trial_seed(seed: int, trial: int) -> int:
    digest = hashlib.sha256(f"{seed}:{trial}".encode("ascii")).digest()
    return int.from_bytes(digest, "big")


def _random_payload(F, rng):
    p = F.characteristic()
    q = F.order()
    k = 1
    while p ** k < q:
        k += 1
    digits = [rng.randrange(p) for _ in range(k)]
    return F.coerce(digits if k > 1 else digits[0])


def _sample_subspace(F, rng, s: int, width: int):
    # rejection sampling keeps the distribution uniform over full-rank frames
    while True:
        rows = [[_random_payload(F, rng) for _ in range(width)]
                for _ in range(s)]
        if rank(Matrix(F, rows, ncols=width)) == s:
            return rows


def sample_subspace(datum: ExtensionDatum, s: int, seed: int,
                    height: int = 9):
    """Seeded full-rank s-frame in class space, as ExtensionClass list.

    Finite fields draw entries uniformly; over the rationals entries
    come from the integer box [-height, height].  Rank-deficient draws
    are rejected and redrawn, so the frame is always independent.
    """
    F = datum.curve.field
    if s < 1 or s > datum.class_dim:
        raise InputError(
            f"subspace dimension {s} outside 1..{datum.class_dim}")
    rng = random.Random(_trial_seed(seed, 0))
    width = datum.class_dim
    if F.order() is None:
        while True:
            rows = [[F.coerce(rng.randint(-height, height))
                     for _ in range(width)] for _ in range(s)]
            if rank(Matrix(F, rows, ncols=width)) == s:
                break
    else:
        rows = _sample_subspace(F, rng, s, width)
    return [ExtensionClass(datum, row) for row in rows]


def offsecant_experiment(datum: ExtensionDatum, s: int, trials: int,
                         seed: int = 0, threads: int = 1) -> OffsecantReport:
    """Sample s-dimensional subspaces V and look for off-secant classes.

    Each trial draws a uniform full-rank s-frame over the field, then
    scans V in coefficient-lexicographic order for a class outside
    Sigma_d, d = n/2 - 1.  Every scanned class is also determinant
    tested; a certified class found on the secant variety would be a
    soundness violation and is counted (the count must stay 0).

    With s below n - m + g the existence hypothesis is not met and
    failed trials are legitimate; the report records the gate rather
    than refusing to run.
    """
    curve = datum.curve
    F = curve.field
    if F.order() is None:
        raise InputError("experiment needs a finite base field")
    if datum.n < 2:
        raise InputError("n = 0 datum has no secant index")
    if s < 1 or s > datum.class_dim:
        raise InputError(
            f"subspace dimension {s} outside 1..{datum.class_dim}")
    if trials < 1:
        raise InputError("need at least one trial")
    if threads < 1:
        raise InputError("need at least one thread")
    d = datum.n // 2 - 1
    table = secant_table(datum, d)
    datum.pair_tensor()          # build once, share read-only across threads
    payloads = list(F.iter_payloads())
    width = datum.class_dim

    def run_trial(trial: int) -> tuple:
        rng = random.Random(_trial_seed(seed, trial))
        frame = _sample_subspace(F, rng, s, width)
        examined = 0
        violations = 0
        witness = None
        for cs in _iproduct(payloads, repeat=s):
            acc = [F.pzero] * width
            for c, vec in zip(cs, frame):
                acc = [F.add(a, F.mul(c, v)) for a, v in zip(acc, vec)]
            coords = tuple(acc)
            examined += 1
            member = coords in table
            if not F.is_zero(datum.det_payload(coords)) and member:
                violations += 1
            if not member:
                witness = coords
                break
        return TrialOutcome(trial, witness is not None, examined, witness), violations

    if threads == 1:
        raw = [run_trial(t) for t in range(trials)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            raw = list(pool.map(run_trial, range(trials)))
    outcomes = tuple(out for out, _ in raw)
    violations = sum(v for _, v in raw)
    successes = sum(1 for out in outcomes if out.success)
    return OffsecantReport(
        q=F.order(), n=datum.n, g=curve.genus, m=datum.m, s=s, d=d,
        trials=trials, seed=seed,
        hypothesis_met=s >= datum.n - datum.m + curve.genus,
        successes=successes, failures=trials - successes,
        examined_total=sum(out.examined for out in outcomes),
        violations=violations, outcomes=outcomes)
