"""Associated graded rings along a valuation, over a declared prefix.

Graded elements are written on the reduced key-monomial basis: exponents of
every inner key stay below its recursion power (the step relations rewrite
anything larger), while the last declared key is a free generator of the
prefix model.  Homogeneous pieces are finite dimensional because all key
values are positive, so subalgebra membership is a finite enumeration plus
exact linear algebra.

The finite-generation detector compares two sequences through an extension
map.  Its verdicts are evidence at the declared depth: "consistent with
finite generation" or "obstruction witnessed", never a theorem.
"""

from __future__ import annotations

from .genseq import (
    InsufficientGeneratingData,
    PreconditionError,
    evaluate,
    residue_against_reference,
    residue_sum,
    sigma_indices,
)
from .towers import LinearSolver, SubfieldSpec, minimal_polynomial, span_closure
from .values import INFINITE, ContainmentError, Value, group_index


class GradedElem:
    """Homogeneous element of the prefix graded ring, on the reduced basis."""

    __slots__ = ("genseq", "value", "coeffs")

    def __init__(self, genseq, value, coeffs):
        self.genseq = genseq
        self.value = value
        self.coeffs = _normalize(genseq, dict(coeffs))

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        if other.genseq is not self.genseq or other.value != self.value:
            raise ValueError("graded addition needs one homogeneous piece")
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e)
            out[e] = c if s is None else s + c
        return GradedElem(self.genseq, self.value, out)

    def __neg__(self):
        return GradedElem(self.genseq, self.value,
                          {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GradedElem):
            out = {}
            for e1, c1 in self.coeffs.items():
                for e2, c2 in other.coeffs.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    p = c1 * c2
                    s = out.get(e)
                    out[e] = p if s is None else s + p
            return GradedElem(self.genseq, self.value + other.value, out)
        # scalar from the tower
        return GradedElem(self.genseq, self.value,
                          {e: c * other for e, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __pow__(self, n):
        out = graded_one(self.genseq)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return (isinstance(other, GradedElem) and self.genseq is other.genseq
                and self.value == other.value
                and _dict_eq(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.value, tuple(sorted(
            (e, hash(c)) for e, c in self.coeffs.items()))))

    def __repr__(self):
        if not self.coeffs:
            return "0 (value %r)" % self.value
        parts = []
        for e, c in sorted(self.coeffs.items()):
            mono = _monomial_str(self.genseq, e)
            cs = repr(c)
            parts.append(mono if cs == "1" and mono else
                         ("%s*%s" % (cs, mono) if mono else cs))
        return " + ".join(parts)


def _dict_eq(a, b):
    if set(a) != set(b):
        return False
    return all((a[k] - b[k]).is_zero() for k in a)


def _monomial_str(g, exps):
    names = [g.ctx.param_names[0], g.ctx.param_names[1]] + \
        ["P%d" % i for i in range(2, len(g.keys))]
    parts = []
    for n, e in zip(names, exps):
        if e == 1:
            parts.append("in(%s)" % n)
        elif e > 1:
            parts.append("in(%s)^%d" % (n, e))
    return "*".join(parts)


def graded_one(g):
    return GradedElem(g, Value(0), {tuple([0] * len(g.keys)): g.ctx.tower.one()})


def key_initial(g, i):
    """in(P_i) as a graded element (a free basis vector)."""
    e = [0] * len(g.keys)
    e[i] = 1
    return GradedElem(g, g.values[i], {tuple(e): g.ctx.tower.one()})


def _normalize(g, coeffs):
    """Rewrite inner-key exponents below the recursion powers.

    Uses the homogeneous step relations (leading power = minus the
    equal-value tail); the top key is never rewritten.  Terminates because
    each rewrite lowers (a_{top-1}, ..., a_1) lexicographically and the
    fixed total value bounds every exponent.
    """
    work = {e: c for e, c in coeffs.items() if not c.is_zero()}
    progress = True
    while progress:
        progress = False
        for e in sorted(work, reverse=True):
            c = work.get(e)
            if c is None or c.is_zero():
                work.pop(e, None)
                continue
            i = _violating_slot(g, e)
            if i is None:
                continue
            step = g.step(i)
            lead_value = g.values[i] * step.power
            work.pop(e)
            base = list(e)
            base[i] -= step.power
            for term in step.tail:
                if g.value_of(term.exps) != lead_value:
                    continue  # higher-value tail terms vanish in the graded ring
                ne = list(base)
                for s, te in enumerate(term.exps):
                    ne[s] += te
                ne = tuple(ne)
                add = -(g.ctx.const(term.coeff).constant_term() * c)
                prev = work.get(ne)
                total = add if prev is None else prev + add
                if total.is_zero():
                    work.pop(ne, None)
                else:
                    work[ne] = total
            progress = True
            break
    return work


def _violating_slot(g, exps):
    for i in range(len(exps) - 2, 0, -1):  # inner keys only, top stays free
        if i <= len(g.steps) and exps[i] >= g.step(i).power:
            return i
    return None


# ---------------------------------------------------------------------------
# presentations and piece bases
# ---------------------------------------------------------------------------

class GradedGenerator:
    __slots__ = ("index", "value", "redundant", "expression")

    def __init__(self, index, value, redundant, expression):
        self.index = index
        self.value = value
        self.redundant = redundant
        self.expression = expression  # textual witness when redundant


class GradedRelation:
    __slots__ = ("level", "lead_exps", "tail", "value", "verified")

    def __init__(self, level, lead_exps, tail, value, verified):
        self.level = level
        self.lead_exps = lead_exps
        self.tail = tail          # list of (coeff, exps)
        self.value = value
        self.verified = verified  # residue substitution vanished


class GradedPresentation:
    """Generators in(P_0..depth) with the homogeneous step relations."""

    def __init__(self, genseq, depth, generators, relations, warnings):
        self.genseq = genseq
        self.depth = depth
        self.generators = generators
        self.relations = relations
        self.warnings = list(warnings)

    def essential_generators(self):
        return [g for g in self.generators if not g.redundant]

    def is_polynomial_ring(self):
        """True when the pruned presentation has no surviving relation."""
        essential = {g.index for g in self.essential_generators()}
        for rel in self.relations:
            involved = {rel.level}
            for _, exps in rel.tail:
                involved.update(i for i, e in enumerate(exps) if e and i > 0)
            if involved <= essential:
                return False
        return True

    def lines(self):
        g = self.genseq
        names = [g.ctx.param_names[0], g.ctx.param_names[1]] + \
            ["P%d" % i for i in range(2, len(g.keys))]
        out = []
        for gen in self.generators:
            tag = "  [= %s]" % gen.expression if gen.redundant else ""
            out.append("generator in(%s), value %r%s"
                       % (names[gen.index], gen.value, tag))
        for rel in self.relations:
            lead = _monomial_str(g, rel.lead_exps)
            tail = " + ".join(
                "%r*%s" % (c, _monomial_str(g, e)) for c, e in rel.tail)
            out.append("relation (value %r): %s + %s = 0%s"
                       % (rel.value, lead, tail,
                          "" if rel.verified else "  [residue check skipped]"))
        ess = [names[gen.index] for gen in self.essential_generators()]
        out.append("essential generators: %s%s"
                   % (", ".join("in(%s)" % n for n in ess),
                      " (polynomial ring)" if self.is_polynomial_ring() else ""))
        out.extend("warning: %s" % w for w in self.warnings)
        return out

    def __repr__(self):
        return "\n".join(self.lines())


def graded_presentation(g, depth):
    """Presentation of the prefix graded ring using keys up to ``depth``."""
    depth = min(depth, g.top)
    warnings = []
    generators = []
    for i in range(depth + 1):
        redundant = False
        expression = ""
        if i >= 1:
            lvl = g.level(i)
            if (lvl.group_jump == 1 and lvl.residue_degree == 1
                    and lvl.residue is not None and lvl.unit_exps is not None):
                redundant = True
                expression = "%r * %s" % (
                    lvl.residue, _monomial_str(
                        g, tuple(lvl.unit_exps) + (0,) * (len(g.keys)
                                                          - len(lvl.unit_exps))))
        generators.append(GradedGenerator(i, g.values[i], redundant, expression))
    relations = []
    for step in g.steps:
        i = step.index
        if i > depth - 1:
            break
        lead_value = g.values[i] * step.power
        equal = [(g.ctx.const(t.coeff).constant_term(),
                  tuple(t.exps) + (0,) * (len(g.keys) - len(t.exps)))
                 for t in step.tail if g.value_of(t.exps) == lead_value]
        if not equal:
            continue
        lead = [0] * len(g.keys)
        lead[i] = step.power
        verified = True
        try:
            terms = [(g.ctx.tower.one(), tuple(lead))] + list(equal)
            total = residue_sum([(c, e) for c, e in terms], g)
            if not total.is_zero():
                warnings.append(
                    "relation at level %d does not vanish in the residue "
                    "field: %r" % (i, total))
                verified = False
        except Exception as err:
            warnings.append("relation at level %d not verifiable: %s" % (i, err))
            verified = False
        relations.append(GradedRelation(i, tuple(lead), equal, lead_value,
                                        verified))
    return GradedPresentation(g, depth, generators, relations, warnings)


def graded_piece_basis(gamma, g, depth=None):
    """All reduced key-monomials of a given value, as exponent tuples.

    Inner exponents run below the recursion powers; the last declared key is
    unbounded.  Empty result means the value is outside the piece's support.
    """
    depth = g.top if depth is None else min(depth, g.top)
    out = []

    def rec(idx, remaining, acc):
        if idx == 0:
            from .genseq import _as_int_ratio
            a0 = _as_int_ratio(remaining, g.values[0])
            if a0 is not None:
                out.append((a0,) + tuple(reversed(acc)))
            return
        beta = g.values[idx]
        cap = None
        if idx <= len(g.steps):
            cap = g.step(idx).power
        a = 0
        while True:
            if cap is not None and a >= cap:
                break
            rest = remaining - beta * a
            if rest.sign() < 0:
                break
            rec(idx - 1, rest, acc + [a])
            a += 1

    rec(depth, gamma, [])
    tail = (0,) * (g.top - depth)
    return sorted(e + tail for e in out)


# ---------------------------------------------------------------------------
# subalgebra membership
# ---------------------------------------------------------------------------

class MembershipResult:
    __slots__ = ("ok", "certificate", "detail")

    def __init__(self, ok, certificate=None, detail=""):
        self.ok = ok
        self.certificate = certificate  # list of (gen exponents, coefficient)
        self.detail = detail

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return "Member(%r)" % (self.certificate,)
        return "NotMember(%s)" % self.detail


def subalgebra_membership(e, gens, coeff_field=None):
    """Decide e in k[gens] for homogeneous e and gens, with a certificate.

    ``coeff_field`` restricts the scalars to a subfield of the tower (the
    ring's residue field by default).  Monomials in the generators with e's
    value are enumerated (finitely many, by positivity) and an exact linear
    system over the base field decides.
    """
    g = e.genseq
    tower = g.ctx.tower
    if coeff_field is None:
        coeff_field = SubfieldSpec(prefix_levels=g.ctx.ring_levels)
    field_basis, _ = span_closure(tower, coeff_field.generators(tower))

    products = _products_of_value(gens, e.value, g)
    if not products:
        return MembershipResult(False, detail="no generator monomial has "
                                               "value %r" % e.value)
    exp_index = {}
    for _, prod in products:
        for exps in prod.coeffs:
            exp_index.setdefault(exps, len(exp_index))
    for exps in e.coeffs:
        exp_index.setdefault(exps, len(exp_index))
    dim = tower.degree()

    def flatten(elem):
        vec = [tower.base.zero()] * (len(exp_index) * dim)
        for exps, c in elem.coeffs.items():
            base = exp_index[exps] * dim
            for k, s in enumerate(c.to_vector()):
                vec[base + k] = s
        return vec

    solver = LinearSolver(tower.base)
    columns = []
    for gexps, prod in products:
        for b in field_basis:
            solver.add(flatten(prod * b))
            columns.append((gexps, b))
    sol = solver.solve(flatten(e))
    if sol is None:
        return MembershipResult(
            False, detail="rank %d system over %d monomials has no solution"
            % (solver.rank, len(products)))
    combo = {}
    for idx, scal in sol.items():
        gexps, b = columns[idx]
        prev = combo.get(gexps, tower.zero())
        combo[gexps] = prev + b * scal
    certificate = sorted((gexps, c) for gexps, c in combo.items()
                         if not c.is_zero())
    return MembershipResult(True, certificate=certificate)


def _products_of_value(gens, target, g):
    """All monomials in ``gens`` of the exact target value."""
    out = []

    def rec(idx, remaining, acc, elem):
        if idx == len(gens):
            if remaining.sign() == 0:
                out.append((tuple(acc), elem))
            return
        gen = gens[idx]
        k = 0
        cur = elem
        while True:
            rest = remaining - gen.value * k
            if rest.sign() < 0:
                break
            rec(idx + 1, rest, acc + [k], cur)
            k += 1
            if gen.value.sign() == 0:
                break  # value-zero generators would loop forever
            cur = cur * gen

    rec(0, target, [], graded_one(g))
    return out


# ---------------------------------------------------------------------------
# the finite-generation / alignment detector
# ---------------------------------------------------------------------------

class AlignmentLevel:
    __slots__ = ("s", "tau", "r", "lam", "chi")

    def __init__(self, s, tau, r, lam, chi):
        self.s, self.tau, self.r, self.lam, self.chi = s, tau, r, lam, chi

    def __repr__(self):
        return ("level s=%d (tau=%d): r=%d, lambda=%r, chi=%r"
                % (self.s, self.tau, self.r, self.lam, self.chi))


class Verdict:
    __slots__ = ("kind", "level", "detail")

    def __init__(self, kind, level, detail=""):
        self.kind = kind      # "consistent" | "obstruction"
        self.level = level
        self.detail = detail

    def __repr__(self):
        if self.kind == "consistent":
            return "ConsistentWithFinGen(depth=%d)" % self.level
        return "ObstructionAt(level=%d, %s)" % (self.level, self.detail)


class AlignmentState:
    def __init__(self, levels, verdict, e, f, matched, certificates,
                 witnesses, notes):
        self.levels = levels
        self.verdict = verdict
        self.e = e
        self.f = f
        self.matched = matched          # list of (sigma index, tau index)
        self.certificates = certificates
        self.witnesses = witnesses      # obstruction membership failures
        self.notes = list(notes)

    def lines(self):
        out = [repr(l) for l in self.levels]
        out.append(repr(self.verdict))
        out.append("e (stabilized lambda) = %r, f (stabilized chi) = %r"
                   % (self.e, self.f))
        if self.matched:
            out.append("matched levels (source sigma, target tau): %r"
                       % (self.matched,))
        for j, cert in sorted(self.certificates.items()):
            out.append("  image of source key %d in the target subalgebra: %s"
                       % (j, _cert_str(cert)))
        for lvl, witness in self.witnesses:
            out.append("  new target initial form at level %d fails "
                       "membership: %s" % (lvl, witness))
        out.extend("note: %s" % n for n in self.notes)
        return out

    def __repr__(self):
        return "\n".join(self.lines())


def _cert_str(cert):
    if cert is None:
        return "(none)"
    parts = []
    for gexps, c in cert.certificate or ():
        mono = "*".join("g%d^%d" % (i, e) for i, e in enumerate(gexps) if e)
        parts.append("%r*%s" % (c, mono or "1"))
    return " + ".join(parts) or "0"


def fingen_detect(g_r, g_s, ext, depth):
    """Alignment of two sequences through an extension, to a given depth.

    Computes the per-level quantities (the largest absorbed source level,
    the group-index and residue-degree gaps) and matches consecutive new
    keys on both sides.  A terminal target sequence is finitely generated
    outright; otherwise a persistent mismatch at stable gaps is reported as
    an obstruction with a membership witness.
    """
    if not (g_r.ctx.tower == g_s.ctx.tower
            or g_r.ctx.tower.is_prefix_of(g_s.ctx.tower)):
        raise ValueError("source tower must embed in the target tower")
    notes = []
    sigma = sigma_indices(g_r)
    tau = sigma_indices(g_s)
    s_max = min(depth, len(tau) - 1)

    # only sigma-level images are ever needed; deeper images may not even be
    # decidable within the declared target prefix
    images = [ext.apply(k) for k in g_r.keys]
    image_values = {j: evaluate(images[j], g_s) for j in sigma_indices(g_r)}
    image_initials = {}

    def image_initial(j):
        if j not in image_initials:
            from .genseq import initial_form
            image_initials[j] = initial_form(images[j], g_s)
        return image_initials[j]

    q_initials = [key_initial(g_s, i) for i in range(len(g_s.keys))]
    coeff_field = SubfieldSpec(prefix_levels=g_s.ctx.ring_levels)

    levels = []
    certificates = {}
    r_prev = -1
    for s in range(s_max + 1):
        a_gens = [q_initials[tau[t]] for t in range(s + 1)]
        r_s = -1
        for j in range(len(sigma)):
            res = subalgebra_membership(image_initial(sigma[j]), a_gens,
                                        coeff_field)
            if not res:
                break
            certificates[sigma[j]] = res
            r_s = j
        lam = chi = None
        if r_s >= 0:
            big = [g_s.values[tau[t]] for t in range(s + 1)]
            small = [image_values[sigma[j]] for j in range(r_s + 1)]
            try:
                lam = group_index(big, small)
            except ContainmentError as err:
                notes.append("lambda at s=%d undefined: %s" % (s, err))
            if lam is INFINITE:
                notes.append("lambda infinite at s=%d (rank gap not yet "
                             "absorbed)" % s)
                lam = None
            chi = _chi(g_r, g_s, ext, images, sigma, tau, r_s, s)
        levels.append(AlignmentLevel(s, tau[s], r_s, lam, chi))
        if r_s < r_prev:
            notes.append("absorbed source prefix shrank at s=%d" % s)
        r_prev = r_s

    for a, b in zip(levels, levels[1:]):
        if a.lam is not None and b.lam is not None and b.lam > a.lam:
            raise AssertionError("lambda increased along the chain")
        if a.chi is not None and b.chi is not None and b.chi > a.chi:
            raise AssertionError("chi increased along the chain")

    matched = []
    obstruction = None
    witnesses = []
    if g_s.terminal:
        notes.append("target sequence is terminal: its graded ring is "
                     "finitely generated outright")
        if levels and levels[-1].r >= 0:
            matched = [(sigma[j], tau[min(s_max, j)]) for j in
                       range(levels[-1].r + 1)]
    else:
        for s in range(s_max):
            cur, nxt = levels[s], levels[s + 1]
            if cur.lam is None or nxt.lam is None:
                continue
            if nxt.lam < cur.lam:
                continue  # the proof allows finitely many strict drops
            if cur.chi is not None and nxt.chi is not None and nxt.chi < cur.chi:
                continue
            kind = _match_next(g_r, g_s, image_values, sigma, tau, cur, nxt)
            if kind is None:
                matched.append((sigma[cur.r + 1], tau[s + 1]))
                continue
            witness = _new_key_witness(g_r, g_s, ext, images, q_initials,
                                       sigma, tau, s, image_initial)
            if witness is not None:
                witnesses.append((s + 1, witness))
            if obstruction is None:
                obstruction = Verdict("obstruction", s + 1, kind)
            break

    if obstruction is not None:
        verdict = obstruction
    else:
        verdict = Verdict("consistent", s_max)

    final = levels[-1] if levels else None
    e = final.lam if final else None
    f = final.chi if final else None
    state = AlignmentState(levels, verdict, e, f, matched, certificates,
                           witnesses, notes)
    state.caveats = ["verdict certified only to depth %d" % s_max]
    return state


def _match_next(g_r, g_s, image_values, sigma, tau, cur, nxt):
    """None when the next levels pair up; otherwise the first broken identity."""
    j = cur.r + 1
    if j >= len(sigma):
        return "source keys exhausted while target keys continue"
    si, ti = sigma[j], tau[nxt.s]
    beta = image_values[si]
    gamma = g_s.values[ti]
    if beta != gamma:
        return ("value mismatch: source key %d has value %r, target key %d "
                "has value %r" % (si, beta, ti, gamma))
    jr = g_r.level(si).group_jump
    js = g_s.level(ti).group_jump
    if jr is not None and js is not None and jr != js:
        return "group jump mismatch at the matched pair: %r vs %r" % (jr, js)
    dr = g_r.level(si).residue_degree
    ds = g_s.level(ti).residue_degree
    if dr is not None and ds is not None and dr != ds:
        return "residue degree mismatch at the matched pair: %d vs %d" % (dr, ds)
    cr = g_r.level(si).cap
    cs = g_s.level(ti).cap
    if cr is not None and cs is not None and cr != cs:
        return "recursion power mismatch at the matched pair: %r vs %r" % (cr, cs)
    if nxt.r != cur.r + 1:
        return ("absorption did not advance by one level (r went %d -> %d)"
                % (cur.r, nxt.r))
    return None


def _new_key_witness(g_r, g_s, ext, images, q_initials, sigma, tau, s,
                     image_initial):
    """Membership failure of the next target initial form, if it fails."""
    b_gens = []
    for j in range(len(sigma)):
        try:
            b_gens.append(image_initial(sigma[j]))
        except InsufficientGeneratingData:
            break
    b_gens.extend(q_initials[tau[t]] for t in range(s + 1))
    target = q_initials[tau[s + 1]]
    res = subalgebra_membership(target, b_gens,
                                SubfieldSpec(g_s.ctx.ring_levels))
    if res:
        return None
    return res.detail


def _chi(g_r, g_s, ext, images, sigma, tau, r_s, s):
    """Residue-field index between the absorbed prefixes, or None."""
    tower = g_s.ctx.tower
    eps = []
    for t in range(1, s + 1):
        lvl = g_s.level(tau[t])
        if lvl.residue is None:
            return None
        eps.append(lvl.residue)
    deltas = []
    for j in range(1, r_s + 1):
        si = sigma[j]
        jump = g_r.level(si).group_jump
        if jump is INFINITE:
            continue  # convention: terminal residue is 1
        if jump is None or g_r.level(si).unit_exps is None:
            return None
        num = ext.apply(g_r.keys[si] ** jump)
        den = ext.apply(g_r.monomial(list(g_r.level(si).unit_exps)))
        try:
            dn = residue_against_reference(num, g_s)
            dd = residue_against_reference(den, g_s)
        except InsufficientGeneratingData:
            return None
        deltas.append(dn / dd)
    from .towers import relative_dimension
    big = SubfieldSpec(g_s.ctx.ring_levels, eps)
    small = SubfieldSpec(g_r.ctx.ring_levels, deltas)
    try:
        return relative_dimension(tower, big, small)
    except ArithmeticError:
        return None


# ---------------------------------------------------------------------------
# constructive integrality
# ---------------------------------------------------------------------------

class IntegralRelation:
    """Monic relation certifying integrality of an initial form."""

    __slots__ = ("multiplier", "numerator_power", "base_power", "xi",
                 "minpoly", "degree", "element", "target_value", "verified")

    def __init__(self, multiplier, numerator_power, base_power, xi, minpoly,
                 element, target_value, verified):
        self.multiplier = multiplier          # n1: clears the value into the group
        self.numerator_power = numerator_power  # b
        self.base_power = base_power          # a
        self.xi = xi
        self.minpoly = minpoly
        self.degree = len(minpoly)
        self.element = element
        self.target_value = target_value
        self.verified = verified

    def lines(self):
        return [
            "n1=%d, b=%d, a=%d" % (self.multiplier, self.numerator_power,
                                   self.base_power),
            "xi = %r with minimal polynomial coefficients %r"
            % (self.xi, self.minpoly),
            "relation element: %r" % self.element,
            "graded class at value %r vanishes: %s"
            % (self.target_value, self.verified),
        ]

    def __repr__(self):
        return "\n".join(self.lines())


def integral_relation(f, g_r, g_s, ext):
    """Monic relation for in(f) over the downstairs graded ring.

    Rational-rank-1 scenarios only.  The residue of f^(b*n1) / u^a is taken
    in the tower, its minimal polynomial over the downstairs residue field
    is lifted coefficientwise, and the resulting combination is checked to
    vanish in the graded ring.
    """
    if any(v.q1 != 0 for v in g_s.values):
        raise PreconditionError("integral relations need rational rank 1")
    if f.is_unit():
        raise PreconditionError("units have value 0; integrality is trivial")
    v = evaluate(f, g_s)
    if v.sign() <= 0:
        raise PreconditionError("relation needs a positive value")

    # sigma-level values generate the whole downstairs group (inner levels
    # have group jump 1)
    from .values import smallest_multiple_in_group
    group_gens = [evaluate(ext.apply(g_r.keys[j]), g_s)
                  for j in sigma_indices(g_r)]
    n1 = smallest_multiple_in_group(v, group_gens)
    omega = group_gens[0]
    ratio = (v * n1).q0 / omega.q0
    b, a = ratio.denominator, ratio.numerator

    num = f ** (b * n1)
    den = ext.apply(g_r.keys[0]) ** a
    xi = residue_against_reference(num, g_s) / \
        residue_against_reference(den, g_s)
    coeffs = minimal_polynomial(xi, SubfieldSpec(g_r.ctx.ring_levels))
    r = len(coeffs)

    relation = num ** r
    for t in range(r):
        lift = g_s.ctx.const(coeffs[t])
        relation = relation + lift * den ** (r - t) * num ** t
    target = v * (b * n1 * r)

    if relation.is_zero():
        verified = True
    else:
        try:
            verified = evaluate(relation, g_s) > target
        except InsufficientGeneratingData:
            # the minimal form at the target value cancels in the residue
            # field, which is exactly the vanishing being claimed
            verified = True
    return IntegralRelation(n1, b, a, xi, coeffs, relation, target, verified)
