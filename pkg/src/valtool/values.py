"""Exact arithmetic in ordered value groups of rational rank at most two.

A value is written with coordinates over the basis (1, tau) where tau is an
irrational constant known only through a table of nested rational intervals.
Comparison of distinct values is decided by interval refinement: the quantity
q0 + q1*tau is nonzero whenever (q0, q1) != (0, 0), so its sign is eventually
determined by a sufficiently tight enclosure of tau.

Group indices of finitely generated subgroups are computed by integer linear
algebra on coordinate vectors after clearing denominators.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class UndecidedComparison(Exception):
    """The interval table was exhausted before a sign could be certified.

    For coordinatewise-distinct values this signals a dishonest descriptor
    (an interval table that does not actually isolate the constant), never a
    legitimate outcome.
    """


class ContainmentError(Exception):
    """A lattice-index request where the alleged sublattice is not contained."""


class _Infinite:
    """Sentinel for infinite group indices."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Infinite"


INFINITE = _Infinite()


# Decimal digits of pi; enough for interval tables far beyond desk scale.
_PI_DIGITS = "31415926535897932384626433832795028841971693993751058209749445923078164062862089986280348253421170679"


class IrrationalDescriptor:
    """An irrational constant given by a table of nested, shrinking intervals.

    INPUT:

    - ``name`` -- label used in reports and error messages
    - ``intervals`` -- list of (lo, hi) pairs of Fractions with
      lo_k <= lo_{k+1} < hi_{k+1} <= hi_k and strictly shrinking width

    The constant is never claimed equal to any rational; equality tests on
    values therefore reduce to coordinate equality.
    """

    __slots__ = ("name", "intervals")

    def __init__(self, name, intervals):
        if not intervals:
            raise ValueError("descriptor needs at least one interval")
        cleaned = []
        prev = None
        for lo, hi in intervals:
            lo, hi = Fraction(lo), Fraction(hi)
            if not lo < hi:
                raise ValueError("empty interval in descriptor %r" % name)
            if prev is not None:
                plo, phi = prev
                if lo < plo or hi > phi or (hi - lo) >= (phi - plo):
                    raise ValueError(
                        "intervals of %r must be nested and strictly shrink" % name
                    )
            cleaned.append((lo, hi))
            prev = (lo, hi)
        self.name = name
        self.intervals = tuple(cleaned)

    @property
    def depth(self):
        return len(self.intervals)

    def enclosure(self, k):
        """k-th interval (clamped to the deepest available)."""
        return self.intervals[min(k, len(self.intervals) - 1)]

    def __repr__(self):
        lo, hi = self.intervals[-1]
        return "IrrationalDescriptor(%s in [%s, %s])" % (self.name, lo, hi)


def pi_descriptor(depth=40):
    """Default descriptor for pi-like constants, from a digit table."""
    intervals = []
    for k in range(1, min(depth, len(_PI_DIGITS) - 1) + 1):
        scale = 10 ** k
        lo = Fraction(int(_PI_DIGITS[: k + 1]), scale)
        intervals.append((lo, lo + Fraction(1, scale)))
    return IrrationalDescriptor("pi", intervals)


def _merge_tau(a, b):
    if a is None:
        return b
    if b is None:
        return a
    if a is not b:
        raise ValueError("values from different group contexts: %r vs %r" % (a, b))
    return a


class Value:
    """Element q0 + q1*tau of an ordered group of rational rank <= 2.

    Rational values carry q1 == 0 and need no descriptor; rank-2 values share
    a single :class:`IrrationalDescriptor`.  Addition and negation are
    coordinatewise and the order is translation invariant.
    """

    __slots__ = ("q0", "q1", "tau")

    def __init__(self, q0, q1=0, tau=None):
        self.q0 = Fraction(q0)
        self.q1 = Fraction(q1)
        if self.q1 != 0 and tau is None:
            raise ValueError("irrational coordinate without a descriptor")
        self.tau = tau if self.q1 != 0 or tau is not None else None

    def is_rational(self):
        return self.q1 == 0

    def __add__(self, other):
        if not isinstance(other, Value):
            other = Value(other)
        return Value(self.q0 + other.q0, self.q1 + other.q1,
                     _merge_tau(self.tau, other.tau))

    def __sub__(self, other):
        if not isinstance(other, Value):
            other = Value(other)
        return Value(self.q0 - other.q0, self.q1 - other.q1,
                     _merge_tau(self.tau, other.tau))

    def __neg__(self):
        return Value(-self.q0, -self.q1, self.tau)

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        return Value(self.q0 * scalar, self.q1 * scalar, self.tau)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        scalar = Fraction(scalar)
        return Value(self.q0 / scalar, self.q1 / scalar, self.tau)

    def sign(self):
        """Sign of q0 + q1*tau: -1, 0 or +1, decided exactly."""
        if self.q1 == 0:
            return -1 if self.q0 < 0 else (1 if self.q0 > 0 else 0)
        tau = self.tau
        for k in range(tau.depth):
            lo, hi = tau.enclosure(k)
            if self.q1 > 0:
                lo_v, hi_v = self.q0 + self.q1 * lo, self.q0 + self.q1 * hi
            else:
                lo_v, hi_v = self.q0 + self.q1 * hi, self.q0 + self.q1 * lo
            if lo_v > 0:
                return 1
            if hi_v < 0:
                return -1
        raise UndecidedComparison(
            "cannot separate %r from 0 with descriptor %r (depth %d); "
            "the interval table is too shallow" % (self, tau, tau.depth)
        )

    def __eq__(self, other):
        if isinstance(other, Value):
            return self.q0 == other.q0 and self.q1 == other.q1
        if self.q1 != 0:
            return False
        return self.q0 == other

    def __ne__(self, other):
        return not self.__eq__(other)

    def __lt__(self, other):
        if not isinstance(other, Value):
            other = Value(other)
        return (self - other).sign() < 0

    def __le__(self, other):
        if not isinstance(other, Value):
            other = Value(other)
        d = (self - other).sign()
        return d <= 0

    def __gt__(self, other):
        return not self.__le__(other)

    def __ge__(self, other):
        return not self.__lt__(other)

    def __hash__(self):
        return hash((self.q0, self.q1))

    def __repr__(self):
        if self.q1 == 0:
            return str(self.q0)
        return "(%s, %s)" % (self.q0, self.q1)


def value_cmp(a, b):
    """Total-order comparison of two values: "LT", "EQ" or "GT".

    EQ holds iff the coordinates agree; otherwise the sign of the difference
    is certified by interval refinement.
    """
    if a == b:
        return "EQ"
    return "LT" if a < b else "GT"


def _int_vectors(values):
    """Clear denominators across all coordinates; return integer vectors."""
    denoms = [1]
    for v in values:
        denoms.append(v.q0.denominator)
        denoms.append(v.q1.denominator)
    lcm = 1
    for d in denoms:
        lcm = lcm * d // gcd(lcm, d)
    return [(int(v.q0 * lcm), int(v.q1 * lcm)) for v in values], lcm


def _xgcd(a, b):
    x, nx, y, ny, g, ng = 1, 0, 0, 1, a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    return g, x, y


def _hnf(rows):
    """Row-style Hermite form of an integer matrix; returns the pivot rows.

    Small ambient dimension only; gcd row operations, no normalization of
    off-pivot entries is needed for our uses (membership and determinants).
    """
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    basis = []
    for vec in rows:
        vec = list(vec)
        for row in basis:
            j = next(i for i, e in enumerate(row) if e)
            if vec[j] == 0:
                continue
            a, b = row[j], vec[j]
            if b % a == 0:
                q = b // a
                for i in range(ncols):
                    vec[i] -= q * row[i]
            else:
                g, x, y = _xgcd(a, b)
                new_row = [x * row[i] + y * vec[i] for i in range(ncols)]
                new_vec = [(-b // g) * row[i] + (a // g) * vec[i] for i in range(ncols)]
                row[:] = new_row
                vec = new_vec
        if any(vec):
            basis.append(vec)
            basis.sort(key=lambda r: next(i for i, e in enumerate(r) if e))
    for row in basis:
        j = next(i for i, e in enumerate(row) if e)
        if row[j] < 0:
            for i in range(ncols):
                row[i] = -row[i]
    return basis


def _in_lattice(vec, basis):
    """Integer membership of ``vec`` in the lattice spanned by HNF ``basis``.

    Returns the coordinate list on success, None on failure.
    """
    vec = list(vec)
    coords = []
    for row in basis:
        j = next(i for i, e in enumerate(row) if e)
        if vec[j] % row[j] != 0:
            return None
        q = vec[j] // row[j]
        coords.append(q)
        for i in range(len(vec)):
            vec[i] -= q * row[i]
    if any(vec):
        return None
    return coords


def group_index(big, small):
    """Index [G(big) : G(small)] of finitely generated subgroups.

    INPUT:

    - ``big``, ``small`` -- lists of :class:`Value` with every element of
      ``small`` lying in the group generated by ``big`` (checked)

    OUTPUT:

    A positive integer, or INFINITE when ``small`` generates a lattice of
    strictly lower rank.  Raises :class:`ContainmentError` if containment
    fails.
    """
    vecs, _ = _int_vectors(list(big) + list(small))
    big_vecs, small_vecs = vecs[: len(big)], vecs[len(big):]
    big_basis = _hnf(big_vecs)
    coords = []
    for v in small_vecs:
        c = _in_lattice(v, big_basis)
        if c is None:
            raise ContainmentError(
                "value %r is not in the group generated by %r" % (v, big)
            )
        coords.append(c)
    rank = len(big_basis)
    if rank == 0:
        return 1
    coord_basis = _hnf(coords)
    if len(coord_basis) < rank:
        return INFINITE
    det = 1
    for row in coord_basis:
        j = next(i for i, e in enumerate(row) if e)
        det *= row[j]
    return abs(det)


def smallest_multiple_in_group(v, gens):
    """Least positive n with n*v in the group generated by ``gens``.

    Raises :class:`ContainmentError` when no multiple lies in the group
    (the rational span does not contain v).
    """
    vecs, _ = _int_vectors(list(gens) + [v])
    basis = _hnf(vecs[:-1])
    target = vecs[-1]
    if not any(target):
        return 1
    # Solve over the rationals, then clear coordinate denominators.
    coords = []
    rem = [Fraction(t) for t in target]
    for row in basis:
        j = next(i for i, e in enumerate(row) if e)
        q = rem[j] / row[j]
        coords.append(q)
        for i in range(len(rem)):
            rem[i] -= q * row[i]
    if any(rem):
        raise ContainmentError("%r has no multiple in the group of %r" % (v, gens))
    n = 1
    for q in coords:
        n = n * q.denominator // gcd(n, q.denominator)
    return n
