"""Generating sequences: key-polynomial recursions as the valuation's data.

A sequence is declared, not discovered: keys P_0 = x, P_1 = y and each
further key given by the recursion

    P_{i+1} = P_i^{n_i} + sum_k c_k P_0^{e_0(k)} ... P_i^{e_i(k)}

together with an assigned value for every key.  The declared prefix is the
specification of the valuation; validation recomputes every derived
quantity (group jumps, unit monomials, residues and their degrees) and
checks the recursion's constraints against them.

Tail terms of value equal to n_i * value(P_i) carry the cancellation that
pushes the next key's value up; terms of higher value are tolerated in the
tail (transported sequences produce them) and contribute nothing to
residue data.
"""

from __future__ import annotations

from .ring import divmod_y, series_value
from .towers import SubfieldSpec, relative_dimension, span_closure
from .values import INFINITE, Value


class PreconditionError(Exception):
    """An operation was called outside its stated preconditions."""


class MissingResidueData(Exception):
    """A residue (alpha) is needed but neither declared nor computable."""


class InsufficientGeneratingData(Exception):
    """A residue tie requires a key beyond the declared prefix.

    Assigning a value past the prefix is a semantic choice only the caller
    can make, so the tool refuses to guess.
    """


class InternalInconsistency(Exception):
    """A lattice solve that the theory guarantees has failed."""


class TailTerm:
    __slots__ = ("coeff", "exps")

    def __init__(self, coeff, exps):
        self.coeff = coeff
        self.exps = tuple(int(e) for e in exps)

    def __repr__(self):
        return "TailTerm(%r, %r)" % (self.coeff, self.exps)


class KeyStep:
    """Recursion data producing P_{index+1} from the keys at or below index."""

    __slots__ = ("index", "power", "tail", "next_value")

    def __init__(self, index, power, tail, next_value):
        self.index = index
        self.power = int(power)
        self.tail = list(tail)
        self.next_value = next_value

    def __repr__(self):
        return "KeyStep(i=%d, n=%d, %d tail terms, next=%r)" % (
            self.index, self.power, len(self.tail), self.next_value)


class LevelData:
    """Derived invariants of one key: group jump, unit monomial, residue."""

    __slots__ = ("index", "group_jump", "unit_exps", "residue",
                 "residue_degree", "cap", "issues")

    def __init__(self, index):
        self.index = index
        self.group_jump = None   # [G(values <= i) : G(values < i)]
        self.unit_exps = None    # exponents of the equal-value unit monomial
        self.residue = None      # class of P_i^jump / unit monomial
        self.residue_degree = None
        self.cap = None          # n_i; None when not determinable
        self.issues = []

    def __repr__(self):
        return ("Level(%d: jump=%r, d=%r, cap=%r, alpha=%r, U=%r)"
                % (self.index, self.group_jump, self.residue_degree,
                   self.cap, self.residue, self.unit_exps))


class GenSeq:
    """A declared finite prefix of a generating sequence."""

    def __init__(self, ctx, values, steps=(), residues=None, oracle=None,
                 terminal=False):
        self.ctx = ctx
        self.values = [v if isinstance(v, Value) else Value(v) for v in values]
        self.steps = list(steps)
        self.declared_residues = dict(residues or {})
        self.oracle = oracle
        if len(self.values) != len(self.steps) + 2:
            raise ValueError("need one value per key: 2 + number of steps")
        for i, step in enumerate(self.steps, start=1):
            if step.index != i:
                raise ValueError("steps must be consecutive from index 1")
        self.keys = self._build_keys()
        self.levels = []
        for i in range(1, self.top + 1):
            self.levels.append(self._derive_level(i))
        last_jump = self.levels[-1].group_jump if self.levels else None
        self.terminal = bool(terminal) or last_jump is INFINITE
        for lvl in self.levels[:-1]:
            if lvl.group_jump is INFINITE:
                raise ValueError(
                    "rational-rank jump at level %d must end the sequence"
                    % lvl.index)

    # -- structure -----------------------------------------------------------

    @property
    def top(self):
        return len(self.keys) - 1

    def level(self, i):
        return self.levels[i - 1]

    def step(self, i):
        return self.steps[i - 1]

    def value_of(self, exps):
        v = Value(0)
        for a, beta in zip(exps, self.values):
            if a:
                v = v + beta * a
        return v

    def monomial(self, exps):
        out = self.ctx.one()
        for key, e in zip(self.keys, exps):
            if e:
                out = out * key ** e
        return out

    def caps(self):
        """Effective exponent bound per level index (None = unbounded)."""
        out = {}
        for lvl in self.levels:
            out[lvl.index] = lvl.cap
        return out

    def _build_keys(self):
        keys = [self.ctx.x(), self.ctx.y()]
        for step in self.steps:
            nxt = keys[step.index] ** step.power
            for term in step.tail:
                mono = self.ctx.const(term.coeff)
                for key, e in zip(keys, term.exps):
                    if e:
                        mono = mono * key ** e
                nxt = nxt + mono
            keys.append(nxt)
        return keys

    def _derive_level(self, i):
        lvl = LevelData(i)
        try:
            lvl.group_jump = _group_jump(self.values, i)
        except Exception as err:  # containment failures mean bad declarations
            lvl.issues.append("group jump at level %d failed: %s" % (i, err))
            return lvl
        if lvl.group_jump is INFINITE:
            # rank jump ends the sequence; by convention the residue is 1
            lvl.residue = self.ctx.tower.one()
            lvl.residue_degree = 1
            lvl.cap = INFINITE
            return lvl
        caps_below = {j: self.steps[j - 1].power for j in range(1, i)}
        target = self.values[i] * lvl.group_jump
        rep = _represent_value(target, self.values[:i], caps_below)
        if rep is None:
            lvl.issues.append(
                "no reduced unit monomial of value %r among keys below %d"
                % (target, i))
        else:
            lvl.unit_exps = rep
        lvl.residue = self._residue_at(i, lvl)
        if lvl.residue is not None:
            prior = [l.residue for l in self.levels[: i - 1]
                     if l.residue is not None]
            sub_small = SubfieldSpec(self.ctx.ring_levels, prior)
            sub_big = SubfieldSpec(self.ctx.ring_levels, prior + [lvl.residue])
            try:
                lvl.residue_degree = relative_dimension(
                    self.ctx.tower, sub_big, sub_small)
            except ArithmeticError as err:
                lvl.issues.append("residue degree at level %d: %s" % (i, err))
        if i < len(self.steps) + 1:
            lvl.cap = self.steps[i - 1].power
        elif lvl.residue_degree is not None:
            lvl.cap = lvl.group_jump * lvl.residue_degree
        return lvl

    def _residue_at(self, i, lvl):
        declared = self.declared_residues.get(i)
        if self.oracle is not None and lvl.unit_exps is not None:
            num = self.keys[i] ** lvl.group_jump
            den = self.monomial(list(lvl.unit_exps))
            try:
                res = self.oracle.residue_of_ratio(num, den)
            except ValueError as err:
                lvl.issues.append("oracle residue at level %d: %s" % (i, err))
                return declared
            from .ring import INSUFFICIENT_PRECISION
            if res is INSUFFICIENT_PRECISION:
                lvl.issues.append(
                    "oracle precision exhausted for residue at level %d" % i)
                return declared
            res = self.ctx.tower.lift(res)
            if declared is not None and not (res == declared):
                lvl.issues.append(
                    "declared residue %r disagrees with oracle residue %r "
                    "at level %d" % (declared, res, i))
            return res
        return declared

    def __repr__(self):
        return "GenSeq(%d keys, values=%r%s)" % (
            len(self.keys), self.values, ", terminal" if self.terminal else "")


def _group_jump(values, i):
    from .values import group_index
    return group_index(values[: i + 1], values[:i])


def _as_int_ratio(v, beta):
    """v / beta when it is a nonnegative integer, else None."""
    if beta.q1 == 0:
        if v.q1 != 0 or beta.q0 == 0:
            return None
        q = v.q0 / beta.q0
    else:
        q = v.q1 / beta.q1
        if v.q0 != beta.q0 * q:
            return None
    if q.denominator != 1 or q < 0:
        return None
    return int(q)


def _represent_value(target, betas, caps, _top=None):
    """Greedy top-down representation target = sum a_i beta_i, a_i < caps.

    ``caps`` maps level index to its bound (missing or None = unbounded).
    Returns the exponent tuple or None.
    """
    top = len(betas) - 1 if _top is None else _top
    if top == 0:
        a0 = _as_int_ratio(target, betas[0])
        return None if a0 is None else (a0,)
    beta = betas[top]
    cap = caps.get(top)
    # bound the exponent by positivity of the remaining value
    hi = 0
    while (target - beta * (hi + 1)).sign() >= 0:
        hi += 1
        if cap is not None and cap is not INFINITE and hi >= cap:
            hi = cap - 1
            break
    if cap is not None and cap is not INFINITE:
        hi = min(hi, cap - 1)
    for a in range(hi, -1, -1):
        rest = _represent_value(target - beta * a, betas, caps, _top=top - 1)
        if rest is not None:
            return rest + (a,)
    return None


# ---------------------------------------------------------------------------
# expansion
# ---------------------------------------------------------------------------

class PAdicExpansion:
    """Exact expansion of a ring element over the keys of a sequence.

    Terms are (coefficient, exponent vector, value), sorted by value then
    exponents; exponents of every key except the last are reduced below the
    recursion powers by construction, the last key's exponent is unbounded
    and flagged.
    """

    __slots__ = ("genseq", "terms")

    def __init__(self, genseq, terms):
        self.genseq = genseq
        self.terms = sorted(terms, key=lambda t: (t[2], t[1]))

    def min_value(self):
        return self.terms[0][2]

    def min_terms(self):
        v = self.min_value()
        return [t for t in self.terms if t[2] == v]

    def groups(self):
        out = {}
        for c, e, v in self.terms:
            out.setdefault(v, []).append((c, e))
        return out

    def top_exponent_overflow(self):
        """True when some term's last-key exponent reaches the derived bound."""
        cap = self.genseq.levels[-1].cap if self.genseq.levels else None
        if cap is None or cap is INFINITE:
            return False
        return any(e[-1] >= cap for _, e, _ in self.terms)

    def reconstruct(self):
        out = self.genseq.ctx.zero()
        for c, e, _ in self.terms:
            out = out + self.genseq.monomial(e) * c
        return out

    def __repr__(self):
        return "PAdicExpansion(%d terms, min=%r)" % (
            len(self.terms), self.min_value())


def expand(f, g):
    """Expansion of f by repeated monic division against the keys of g."""
    if f.is_zero():
        raise PreconditionError("cannot expand zero")
    raw = _expand_raw(f, g.keys, g.top)
    terms = [(c, e, g.value_of(e)) for e, c in raw.items()]
    return PAdicExpansion(g, terms)


def _expand_raw(f, keys, top):
    if top == 0:
        out = {}
        for (i, j), c in f.terms.items():
            if j != 0:
                raise InternalInconsistency("y-degree survived the division chain")
            out[(i,)] = c
        return out
    if top == 1:
        return {(i, j): c for (i, j), c in f.terms.items()}
    key = keys[top]
    deg = key.y_degree()
    out = {}
    h = f
    e = 0
    while not h.is_zero():
        if h.y_degree() >= deg:
            q, r = divmod_y(h, key)
        else:
            q, r = f.ctx.zero(), h
        if not r.is_zero():
            for sub, c in _expand_raw(r, keys, top - 1).items():
                out[sub + (e,)] = c
        h = q
        e += 1
    return out


# ---------------------------------------------------------------------------
# residues of value-zero Laurent monomials
# ---------------------------------------------------------------------------

def residue_of_monomial(exps, g):
    """Residue class of a value-zero Laurent monomial in the keys.

    Solved as a product of powers of the per-level residues by descending
    through the triangular lattice relation of the unit monomials.
    """
    exps = list(exps) + [0] * (len(g.keys) - len(exps))
    if g.value_of(exps) != Value(0):
        raise PreconditionError("monomial %r has nonzero value" % (exps,))
    result = g.ctx.tower.one()
    for j in range(g.top, 0, -1):
        e = exps[j]
        if e == 0:
            continue
        lvl = g.level(j)
        jump = lvl.group_jump
        if jump is INFINITE:
            raise InternalInconsistency(
                "value-zero monomial with nonzero exponent at a rank-jump level")
        if jump is None or e % jump != 0:
            raise InternalInconsistency(
                "lattice solve failed at level %d (exponent %d, jump %r)"
                % (j, e, jump))
        s = e // jump
        if lvl.residue is None:
            raise MissingResidueData(
                "residue at level %d is neither declared nor computable" % j)
        if lvl.unit_exps is None:
            raise MissingResidueData("unit monomial missing at level %d" % j)
        result = result * lvl.residue ** s
        exps[j] = 0
        for t, w in enumerate(lvl.unit_exps):
            exps[t] += s * w
    if exps[0] != 0:
        raise InternalInconsistency("value-zero monomial left an x-exponent")
    return result


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _is_reduced(exps, g):
    for i in range(1, len(exps)):
        cap = g.level(i).cap
        if cap is INFINITE:
            continue
        if cap is not None:
            if exps[i] >= cap:
                return False
        else:
            # bound not determinable: certify only below the group jump
            jump = g.level(i).group_jump
            if jump is None or exps[i] >= jump:
                return False
    return True


def evaluate(f, g):
    """Value of f against the declared sequence.

    A unique minimal term or an all-reduced minimal group decides directly;
    otherwise the residue sum of the minimal group decides, and a vanishing
    sum means the declared prefix cannot see the true value.
    """
    if f.is_zero():
        raise PreconditionError("value of zero")
    exp = expand(f, g)
    gamma = exp.min_value()
    mins = exp.min_terms()
    if len(mins) == 1:
        return gamma
    if all(_is_reduced(e, g) for _, e, _ in mins):
        return gamma
    rho = residue_sum(mins, g)
    if not rho.is_zero():
        return gamma
    raise InsufficientGeneratingData(
        "the minimal form of value %r cancels in the residue field; "
        "deciding the value needs a key beyond the declared prefix" % gamma)


def residue_sum(terms, g):
    """Sum of c_k * [M_k / M_ref] over equal-value terms, M_ref the first."""
    ref = terms[0][1]
    total = g.ctx.tower.zero()
    for c, e, *_ in terms:
        ratio = [a - b for a, b in zip(list(e) + [0] * len(ref),
                                       list(ref) + [0] * len(e))]
        total = total + c * residue_of_monomial(ratio, g)
    return total


def reference_monomial(gamma, g):
    """Canonical reduced monomial of a given value (greedy representation)."""
    rep = semigroup_membership(gamma, g)
    if rep is None:
        raise PreconditionError("%r is not in the declared semigroup" % gamma)
    return rep


def residue_against_reference(f, g):
    """Residue of f relative to the canonical monomial of its value.

    Nonzero exactly because evaluate() certified the value first.
    """
    exp = expand(f, g)
    gamma = evaluate(f, g)
    ref = reference_monomial(gamma, g)
    mins = [(c, e) for c, e, v in exp.terms if v == gamma]
    total = g.ctx.tower.zero()
    for c, e in mins:
        ratio = [a - b for a, b in zip(list(e) + [0] * len(ref),
                                       list(ref) + [0] * len(e))]
        total = total + c * residue_of_monomial(ratio, g)
    return total


def initial_form(f, g):
    """Initial form of f in the graded ring of the declared prefix."""
    from .graded import GradedElem
    gamma = evaluate(f, g)
    exp = expand(f, g)
    coeffs = {e: c for c, e, v in exp.terms if v == gamma}
    return GradedElem(g, gamma, coeffs)


# ---------------------------------------------------------------------------
# sigma indices and the value semigroup
# ---------------------------------------------------------------------------

def sigma_indices(g):
    """0 followed by the levels where the recursion power exceeds 1.

    The top level is included when its effective power is above 1 or not
    determinable from the declared data.
    """
    out = [0]
    for lvl in g.levels:
        cap = lvl.cap
        if cap is INFINITE:
            out.append(lvl.index)
        elif cap is None:
            jump = lvl.group_jump
            if jump is None or jump is INFINITE or jump > 1:
                out.append(lvl.index)
            elif lvl.residue_degree is None:
                out.append(lvl.index)  # undeterminable: keep conservatively
        elif cap > 1:
            out.append(lvl.index)
    return out


def semigroup_membership(gamma, g):
    """Reduced representation gamma = sum a_i * value_i, or None.

    Greedy descent from the top provided key; the bound at each inner level
    is the recursion power, the top bound is used when determinable.
    """
    if gamma.sign() < 0:
        raise PreconditionError("semigroup values are nonnegative")
    if gamma.sign() == 0:
        return tuple([0] * len(g.values))
    caps = {}
    for lvl in g.levels:
        caps[lvl.index] = None if lvl.cap is INFINITE else lvl.cap
    rep = _represent_value(gamma, g.values, caps)
    return rep


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

class ValidationReport:
    def __init__(self):
        self.checks = []     # (name, ok, detail)
        self.warnings = []

    def add(self, name, ok, detail=""):
        self.checks.append((name, bool(ok), detail))

    def warn(self, text):
        self.warnings.append(text)

    @property
    def ok(self):
        return all(ok for _, ok, _ in self.checks)

    def failures(self):
        return [(n, d) for n, ok, d in self.checks if not ok]

    def lines(self):
        out = []
        for name, ok, detail in self.checks:
            line = "%s %s" % ("PASS" if ok else "FAIL", name)
            if detail:
                line += ": %s" % detail
            out.append(line)
        for w in self.warnings:
            out.append("WARN %s" % w)
        return out

    def __repr__(self):
        return "\n".join(self.lines())


def validate_sequence(g):
    """Check every declared and derived invariant of the sequence.

    The report lists each check with pass/fail; nothing raises.
    """
    report = ValidationReport()
    report.add("positive key values",
               all(v.sign() > 0 for v in g.values),
               "values %r" % (g.values,))

    deg = 1
    for i in range(2, len(g.keys)):
        deg *= g.step(i - 1).power
        key = g.keys[i]
        slices = key.y_slices()
        monic = (key.y_degree() == deg and list(slices.get(deg, {})) == [0]
                 and slices[deg][0] == g.ctx.tower.one())
        report.add("key %d monic in %s of degree %d"
                   % (i, g.ctx.param_names[1], deg), monic, repr(key))

    for lvl in g.levels:
        i = lvl.index
        for issue in lvl.issues:
            report.add("level %d derivation" % i, False, issue)
        if lvl.group_jump is INFINITE:
            report.add("level %d ends the sequence (group rank jump)" % i,
                       i == g.top)
            continue
        if lvl.unit_exps is not None:
            ok = g.value_of(lvl.unit_exps) == g.values[i] * lvl.group_jump
            report.add("unit monomial value at level %d" % i, ok,
                       "U exponents %r" % (lvl.unit_exps,))
        if lvl.residue is None:
            report.warn("level %d residue unknown (no oracle, none declared)" % i)
        if lvl.cap is not None and lvl.group_jump is not None \
                and lvl.residue_degree is not None and lvl.cap is not INFINITE:
            report.add(
                "power factorization at level %d" % i,
                lvl.cap == lvl.group_jump * lvl.residue_degree,
                "n=%r, jump=%r, d=%r" % (lvl.cap, lvl.group_jump,
                                         lvl.residue_degree))

    for step in g.steps:
        i = step.index
        lvl = g.level(i)
        lead_value = g.values[i] * step.power
        equal, higher, lower = [], [], []
        for term in step.tail:
            tv = g.value_of(term.exps)
            cmp = (tv - lead_value).sign()
            (equal if cmp == 0 else higher if cmp > 0 else lower).append(term)
        report.add("tail values at step %d" % i, not lower,
                   "" if not lower else "%d terms below the leading value"
                   % len(lower))
        report.add("equal-value tail at step %d nonempty" % i, bool(equal))
        report.add("next value exceeds the leading form at step %d" % i,
                   (step.next_value if isinstance(step.next_value, Value)
                    else Value(step.next_value)) > lead_value,
                   "%r vs %r" % (step.next_value, lead_value))
        def _bounds_ok(term):
            if any(e < 0 for e in term.exps):
                return False
            for s, e in enumerate(term.exps):
                if s == 0 or e == 0:
                    continue
                if s > i:
                    return False  # tail may only involve keys up to i
                bound = step.power if s == i else g.step(s).power
                if e >= bound:
                    return False
            return True

        report.add("tail exponent bounds at step %d" % i,
                   all(_bounds_ok(term) for term in step.tail))
        if lvl.group_jump not in (None, INFINITE):
            div_ok = all(
                (term.exps[i] if len(term.exps) > i else 0) % lvl.group_jump == 0
                for term in equal)
            report.add("group jump divides top exponents at step %d" % i, div_ok)
        _check_minimal_polynomial(g, step, equal, report)

    if g.oracle is not None:
        for i, key in enumerate(g.keys):
            sv = series_value(key, g.oracle)
            from .ring import INSUFFICIENT_PRECISION
            if sv is INSUFFICIENT_PRECISION:
                report.warn("oracle cannot confirm the value of key %d" % i)
            else:
                report.add("oracle confirms value of key %d" % i,
                           sv == g.values[i], "%r vs %r" % (sv, g.values[i]))

    unverified = g.ctx.tower.unverified_levels()
    if unverified:
        report.warn("irreducibility assumed for tower levels: %s"
                    % ", ".join(unverified))
    return report


def _check_minimal_polynomial(g, step, equal_terms, report):
    """f_i built from the tail must annihilate the residue at level i."""
    i = step.index
    lvl = g.level(i)
    if (lvl.residue is None or lvl.residue_degree is None
            or lvl.group_jump in (None, INFINITE) or lvl.unit_exps is None):
        return
    d = lvl.residue_degree
    coeffs = [g.ctx.tower.zero() for _ in range(d)]
    ok = True
    for term in equal_terms:
        top_e = term.exps[i] if len(term.exps) > i else 0
        t = top_e // lvl.group_jump
        if t >= d:
            report.add("tail exponent within minimal-polynomial range "
                       "at step %d" % i, False,
                       "term %r has top multiplicity %d >= d=%d"
                       % (term.exps, t, d))
            ok = False
            continue
        stripped = list(term.exps[:i]) + [0] * max(0, i - len(term.exps))
        ratio = [stripped[s] - (d - t) * lvl.unit_exps[s] if s < len(lvl.unit_exps)
                 else stripped[s] for s in range(i)]
        try:
            # const() accepts raw scalars as well as tower elements
            contrib = g.ctx.const(term.coeff).constant_term() * \
                residue_of_monomial(ratio + [0], g)
        except (MissingResidueData, InternalInconsistency) as err:
            report.warn("minimal-polynomial coefficient at step %d "
                        "not computable: %s" % (i, err))
            return
        coeffs[t] = coeffs[t] + contrib
    if not ok:
        return
    value = lvl.residue ** d
    for t, b in enumerate(coeffs):
        value = value + b * lvl.residue ** t
    report.add("residue satisfies its minimal polynomial at level %d" % i,
               value.is_zero(),
               "f(alpha) = %r" % value)
    prior = [g.level(j).residue for j in range(1, i) if g.level(j).residue]
    _, solver = span_closure(g.ctx.tower,
                             SubfieldSpec(g.ctx.ring_levels, prior)
                             .generators(g.ctx.tower))
    in_field = all(solver.solve(b.to_vector()) is not None for b in coeffs)
    report.add("minimal-polynomial coefficients live below level %d" % i,
               in_field)
