"""Ramification invariants of finite extensions: e, f and the defect.

Two independent routes compute the defect: the classical index formula
[K*:K] = e * f * p^delta (valid when the upstairs valuation is the unique
extension), and the local-degree formula a * d * [S1/m : R1/m] = e * f *
p^delta read off a monomial form of the extension.  Reports cross-check
whichever routes apply.
"""

from __future__ import annotations

from fractions import Fraction

from .genseq import InsufficientGeneratingData, evaluate
from .ring import INSUFFICIENT_PRECISION, SeriesEmbedding, substitute
from .towers import SubfieldSpec, relative_dimension
from .values import Value


class InconsistentRamification(Exception):
    """Declared ramification data contradicts the index formula."""


class _Undetermined:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Undetermined"


UNDETERMINED = _Undetermined()


class ExtensionMap:
    """A finite extension R -> S given by the images of R's parameters."""

    __slots__ = ("source_ctx", "u_image", "v_image", "field_degree",
                 "residue_char", "unique")

    def __init__(self, source_ctx, u_image, v_image, field_degree,
                 residue_char=0, unique=None):
        if u_image.ctx is not v_image.ctx:
            raise ValueError("images live in different target contexts")
        if u_image.is_unit() or v_image.is_unit():
            raise ValueError("images must be non-units (domination)")
        if field_degree < 1:
            raise ValueError("field degree must be at least 1")
        self.source_ctx = source_ctx
        self.u_image = u_image
        self.v_image = v_image
        self.field_degree = int(field_degree)
        self.residue_char = int(residue_char)
        self.unique = unique

    @property
    def target_ctx(self):
        return self.u_image.ctx

    def apply(self, f):
        """Image in S of an element of R."""
        if f.ctx is not self.source_ctx:
            raise ValueError("element is not from the source ring")
        return substitute(f, {self.source_ctx.param_names[0]: self.u_image,
                              self.source_ctx.param_names[1]: self.v_image})

    def __repr__(self):
        return "ExtensionMap(%s -> %r, %s -> %r; degree %d)" % (
            self.source_ctx.param_names[0], self.u_image,
            self.source_ctx.param_names[1], self.v_image, self.field_degree)


def _p_power_exponent(quotient, p):
    """delta with quotient = p^delta, or None."""
    if quotient < 1:
        return None
    delta = 0
    while quotient % p == 0:
        quotient //= p
        delta += 1
    return delta if quotient == 1 else None


def defect_ostrowski(field_degree, e, f, p, unique):
    """Defect from [K*:K] = e*f*p^delta; needs the unique-extension flag.

    Returns UNDETERMINED when uniqueness is not declared; raises
    :class:`InconsistentRamification` when the formula cannot hold.
    """
    if e < 1 or f < 1:
        raise ValueError("e and f must be positive")
    if not unique:
        return UNDETERMINED
    if field_degree % (e * f) != 0:
        raise InconsistentRamification(
            "[K*:K] = %d is not divisible by e*f = %d" % (field_degree, e * f))
    quotient = field_degree // (e * f)
    if p == 0:
        if quotient != 1:
            raise InconsistentRamification(
                "characteristic zero forces [K*:K] = e*f, got quotient %d"
                % quotient)
        return 0
    delta = _p_power_exponent(quotient, p)
    if delta is None:
        raise InconsistentRamification(
            "[K*:K]/(e*f) = %d is not a power of p = %d" % (quotient, p))
    return delta


def defect_local_degree(mf, res_deg, e, f, p):
    """Defect from the monomial form: a*d*resDeg = e*f*p^delta."""
    if e < 1 or f < 1 or res_deg < 1:
        raise ValueError("e, f, resDeg must be positive")
    from .values import INFINITE
    if mf.d is INFINITE:
        raise InconsistentRamification("d is infinite (x divides f)")
    local = mf.a * mf.d * res_deg
    if local % (e * f) != 0:
        raise InconsistentRamification(
            "local degree %d is not divisible by e*f = %d" % (local, e * f))
    quotient = local // (e * f)
    if p == 0:
        if quotient != 1:
            raise InconsistentRamification(
                "characteristic zero requires a*d*resDeg = e*f, got %d vs %d"
                % (local, e * f))
        return 0
    delta = _p_power_exponent(quotient, p)
    if delta is None:
        raise InconsistentRamification(
            "local degree quotient %d is not a power of p = %d" % (quotient, p))
    return delta


class RamificationReport:
    """e, f, delta with the routes that produced and cross-checked them."""

    def __init__(self, e, f, delta, routes, consistent, caveats):
        self.e = e
        self.f = f
        self.delta = delta
        self.routes = routes          # route name -> delta or UNDETERMINED/error str
        self.consistent = consistent
        self.caveats = list(caveats)

    def csv_rows(self):
        rows = []
        for route in sorted(self.routes):
            delta = self.routes[route]
            rows.append((route, self.e, self.f, delta,
                         1 if self.consistent else 0))
        return rows

    def lines(self):
        out = ["e = %d, f = %d, delta = %r" % (self.e, self.f, self.delta)]
        for route in sorted(self.routes):
            out.append("  route %-12s -> %r" % (route, self.routes[route]))
        out.append("  routes consistent: %s" % self.consistent)
        for c in self.caveats:
            out.append("  caveat: %s" % c)
        return out

    def __repr__(self):
        return "\n".join(self.lines())


def ramification_report(g_r, g_s, ext, depth=4, monomial_ext=None):
    """Full report: e, f from the alignment detector, delta from both routes.

    ``monomial_ext`` optionally supplies a blown-up parameter pair whose
    images have the monomial shape; by design the formula is applied at the
    user-selected level, never searched for.
    """
    from .graded import fingen_detect
    from .ring import monomialize_check, MonomialForm

    state = fingen_detect(g_r, g_s, ext, depth)
    e, f = state.e, state.f
    if e is None or f is None:
        raise InconsistentRamification(
            "alignment did not stabilize; cannot read e and f at depth %d"
            % depth)
    p = ext.residue_char
    routes = {}
    caveats = list(state.caveats)
    delta_values = []

    try:
        d0 = defect_ostrowski(ext.field_degree, e, f, p, ext.unique)
    except InconsistentRamification as err:
        routes["ostrowski"] = "inconsistent: %s" % err
    else:
        routes["ostrowski"] = d0
        if d0 is not UNDETERMINED:
            delta_values.append(d0)

    mf_source = monomial_ext if monomial_ext is not None else ext
    mf = monomialize_check(mf_source.u_image, mf_source.v_image)
    if isinstance(mf, MonomialForm):
        res_deg = relative_dimension(
            mf_source.target_ctx.tower,
            SubfieldSpec(mf_source.target_ctx.ring_levels),
            SubfieldSpec(mf_source.source_ctx.ring_levels))
        try:
            d1 = defect_local_degree(mf, res_deg, e, f, p)
        except InconsistentRamification as err:
            routes["local-degree"] = "inconsistent: %s" % err
        else:
            routes["local-degree"] = d1
            delta_values.append(d1)
        caveats.append("local-degree formula applied at the user-selected "
                       "ring pair, not at a stabilized level")
        caveats.append("the upstairs residue field is assumed algebraic "
                       "over the ring's (scenario assumption)")
    else:
        routes["local-degree"] = "not applicable: %s" % mf.reason

    routes["alignment"] = ("lambda*chi = %d agrees with e*f" % (e * f))

    consistent = len(set(delta_values)) <= 1 and not any(
        isinstance(v, str) and v.startswith("inconsistent")
        for v in routes.values())
    delta = delta_values[0] if delta_values else UNDETERMINED
    return RamificationReport(e, f, delta, routes, consistent, caveats)


# ---------------------------------------------------------------------------
# splitting
# ---------------------------------------------------------------------------

class CandidateReport:
    __slots__ = ("name", "dominates", "restricts", "scale", "tested",
                 "skipped", "diagnosis")

    def __init__(self, name):
        self.name = name
        self.dominates = None
        self.restricts = None
        self.scale = None
        self.tested = 0
        self.skipped = 0
        self.diagnosis = ""


class SplittingReport:
    def __init__(self, candidates, distinct_pairs, witnessed):
        self.candidates = candidates
        self.distinct_pairs = distinct_pairs
        self.witnessed = witnessed

    def lines(self):
        out = []
        for c in self.candidates:
            out.append(
                "candidate %-8s dominates=%s restricts=%s scale=%r "
                "tested=%d skipped=%d %s"
                % (c.name, c.dominates, c.restricts, c.scale,
                   c.tested, c.skipped, c.diagnosis))
        out.append("distinct restricting pairs: %r" % (self.distinct_pairs,))
        out.append("splitting witnessed: %s" % self.witnessed)
        return out

    def __repr__(self):
        return "\n".join(self.lines())


def _candidate_value(cand, f):
    """Value of an S-element under a candidate valuation, or undecided."""
    if isinstance(cand, SeriesEmbedding):
        from .ring import series_value
        return series_value(f, cand)
    try:
        return evaluate(f, cand)
    except InsufficientGeneratingData:
        return INSUFFICIENT_PRECISION


def _candidate_ctx(cand):
    return cand.ctx if isinstance(cand, SeriesEmbedding) else cand.ctx


def splitting_report(candidates, ext, g_r, probes=(), value_bound=None,
                     samples=24, seed=0):
    """Compare candidate upstairs valuations against the downstairs one.

    Each candidate (a generating sequence or a series oracle over S) is
    checked to dominate S and to restrict, up to the forced value-group
    scaling, to the declared downstairs valuation on the key images and on
    random samples.  Two distinct restricting candidates witness splitting.
    """
    import random
    rng = random.Random(seed)
    sctx = ext.target_ctx
    if value_bound is None:
        value_bound = Value(Fraction(10 ** 6))

    test_elems = [ext.apply(k) for k in g_r.keys]
    test_values = list(g_r.values)
    rand_elems = []
    for _ in range(samples):
        f = sctx.zero()
        for _ in range(3):
            f = f + sctx.monomial(rng.randint(0, 3), rng.randint(0, 3),
                                  rng.randint(-2, 2))
        if not f.is_zero():
            rand_elems.append(f)

    reports = []
    named = list(enumerate(candidates, start=1))
    for idx, cand in named:
        rep = CandidateReport("nu%d" % idx)
        ctx = _candidate_ctx(cand)
        xs = [ctx.x(), ctx.y()]
        doms = [_candidate_value(cand, el) for el in xs]
        rep.dominates = all(v is not INSUFFICIENT_PRECISION and v.sign() > 0
                            for v in doms)
        if not rep.dominates:
            rep.restricts = False
            rep.diagnosis = "candidate does not dominate the upstairs ring"
            reports.append(rep)
            continue
        scale = None
        ok = True
        for el, want in zip(test_elems, test_values):
            got = _candidate_value(cand, el)
            if got is INSUFFICIENT_PRECISION:
                rep.skipped += 1
                continue
            if got > value_bound:
                rep.skipped += 1
                continue
            rep.tested += 1
            if scale is None:
                ratio = _value_ratio(got, want)
                if ratio is None:
                    ok = False
                    rep.diagnosis = ("image value %r is not a rational "
                                     "multiple of %r" % (got, want))
                    break
                scale = ratio
            if got != want * scale:
                ok = False
                rep.diagnosis = ("restriction mismatch on a key image: "
                                 "%r vs %r (scale %r)" % (got, want * scale,
                                                          scale))
                break
        rep.scale = scale
        rep.restricts = ok and scale is not None
        reports.append(rep)

    # pairwise distinctness on probes, each candidate's own viewpoint
    probe_elems = list(probes)
    for cand in candidates:
        if not isinstance(cand, SeriesEmbedding):
            probe_elems.extend(cand.keys[2:])
    probe_elems.extend(rand_elems)
    restricting = [(r, c) for r, c in zip(reports, candidates) if r.restricts]
    distinct_pairs = []
    for a in range(len(restricting)):
        for b in range(a + 1, len(restricting)):
            ra, ca = restricting[a]
            rb, cb = restricting[b]
            if _distinct_on(ca, cb, probe_elems):
                distinct_pairs.append((ra.name, rb.name))
    witnessed = bool(distinct_pairs)
    return SplittingReport(reports, distinct_pairs, witnessed)


def _value_ratio(a, b):
    """a / b as a positive rational when the values are proportional."""
    if b.q1 == 0:
        if a.q1 != 0 or b.q0 == 0:
            return None
        r = a.q0 / b.q0
    else:
        r = a.q1 / b.q1
        if a.q0 != b.q0 * r:
            return None
    return r if r > 0 else None


def _distinct_on(cand_a, cand_b, elems):
    """Distinctness as valuations, normalized on the first parameter."""
    ctx_a, ctx_b = _candidate_ctx(cand_a), _candidate_ctx(cand_b)
    if ctx_a is not ctx_b:
        return False  # incomparable representations; no witness
    va0 = _candidate_value(cand_a, ctx_a.x())
    vb0 = _candidate_value(cand_b, ctx_a.x())
    if INSUFFICIENT_PRECISION in (va0, vb0):
        return False
    scale = _value_ratio(vb0, va0)
    if scale is None:
        return True
    for el in elems:
        if el.is_zero() or el.ctx is not ctx_a:
            continue
        va = _candidate_value(cand_a, el)
        vb = _candidate_value(cand_b, el)
        if INSUFFICIENT_PRECISION in (va, vb):
            continue
        if vb != va * scale:
            return True
    return False
