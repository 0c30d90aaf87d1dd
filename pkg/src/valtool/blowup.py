"""Quadratic transforms along a valuation and transported sequences.

The atomic operation is the composite transform determined by the first
level of the sequence: with jump n and unit exponent w (coprime), pick
a, b with n*b - w*a = 1 and pass to the chart

    x = X^n * Y^a,   y = X^w * Y^b,

where Y has value zero and residue alpha^eps.  Recentering Z = Y - alpha
gives regular parameters (X, Z) of the target ring.  Keys transport by
clearing the exceptional power of X and a unit factor; the recursion data
re-seeds one level down, and every shifted invariant is recomputed on the
target and compared against the source as a consistency table.
"""

from __future__ import annotations

from fractions import Fraction

from .extension import ExtensionMap
from .genseq import GenSeq, KeyStep, TailTerm, _expand_raw
from .ring import (
    LocalRingCtx,
    SeriesEmbedding,
    TruncSeries,
    divmod_y,
    substitute,
)
from .towers import SubfieldSpec, in_subfield
from .values import INFINITE


class TransformError(Exception):
    """The transform cannot be built from the declared data."""


class TransformMap:
    """One composite transform: chart data, recentering, and images."""

    __slots__ = ("source_ctx", "target_ctx", "nbar", "w", "a", "b", "eps",
                 "alpha_lift", "x_image", "y_image", "exceptional_value")

    def __init__(self, source_ctx, target_ctx, nbar, w, a, b, eps, alpha_lift,
                 exceptional_value):
        self.source_ctx = source_ctx
        self.target_ctx = target_ctx
        self.nbar = nbar
        self.w = w
        self.a = a
        self.b = b
        self.eps = eps
        self.alpha_lift = alpha_lift
        self.exceptional_value = exceptional_value  # value of X
        X, Z = target_ctx.x(), target_ctx.y()
        unit = Z + target_ctx.const(alpha_lift)
        self.x_image = X ** nbar * unit ** a
        self.y_image = X ** w * unit ** b

    def to_target(self, f):
        """Image of a source element in the target chart (exact)."""
        if f.ctx is not self.source_ctx:
            raise ValueError("element does not live in the source ring")
        return substitute(f, {self.source_ctx.param_names[0]: self.x_image,
                              self.source_ctx.param_names[1]: self.y_image})

    def extension(self):
        """The transform as an extension map (trivial field extension)."""
        return ExtensionMap(self.source_ctx, self.x_image, self.y_image,
                            field_degree=1,
                            residue_char=self.source_ctx.tower.base.p,
                            unique=True)

    def describe(self):
        xn, yn = self.source_ctx.param_names
        Xn, Zn = self.target_ctx.param_names
        return ("%s = %s^%d*(%s+%r)^%d, %s = %s^%d*(%s+%r)^%d (eps=%+d)"
                % (xn, Xn, self.nbar, Zn, self.alpha_lift, self.a,
                   yn, Xn, self.w, Zn, self.alpha_lift, self.b, self.eps))

    def __repr__(self):
        return "TransformMap(%s)" % self.describe()


def _chart_exponents(nbar, w):
    """Minimal a >= 0 and b with nbar*b - w*a = 1."""
    from math import gcd
    if gcd(nbar, w) != 1:
        raise TransformError("jump %d and unit exponent %d are not coprime"
                             % (nbar, w))
    if nbar == 1:
        return 0, 1, 1
    a = (-pow(w, -1, nbar)) % nbar
    b = (1 + w * a) // nbar
    return a, b, 1


def free_transform(g):
    """Composite transform of a sequence; returns (map, transported sequence).

    Needs the second key's recursion (the target re-seeds from it) and the
    first level's residue for recentering.
    """
    if len(g.steps) < 1:
        raise TransformError("insufficient keys: the transform re-seeds from "
                             "the key after the first level")
    lvl1 = g.level(1)
    if lvl1.group_jump is INFINITE or lvl1.group_jump is None:
        raise TransformError("first level has no finite group jump")
    if lvl1.unit_exps is None:
        raise TransformError("first level has no unit monomial")
    if lvl1.residue is None:
        raise TransformError("recentering needs the first-level residue")
    nbar, w = lvl1.group_jump, lvl1.unit_exps[0]
    a, b, eps = _chart_exponents(nbar, w)
    alpha_lift = lvl1.residue ** eps

    tower = g.ctx.tower
    ring_levels = g.ctx.ring_levels
    while ring_levels < tower.height and not in_subfield(
            alpha_lift, SubfieldSpec(ring_levels)):
        ring_levels += 1
    if not in_subfield(alpha_lift, SubfieldSpec(ring_levels)):
        raise TransformError("recentering residue lies outside the tower")

    xn, yn = g.ctx.param_names
    target_ctx = LocalRingCtx(
        tower, (xn + "1", yn + "1"), ring_levels=ring_levels,
        provenance=g.ctx.provenance + ("transform at jump %d, w %d" % (nbar, w),))
    exceptional_value = g.values[0] / nbar
    tmap = TransformMap(g.ctx, target_ctx, nbar, w, a, b, eps, alpha_lift,
                        exceptional_value)

    # transported keys: clear the exceptional power, strip the unit factor
    target_keys = [target_ctx.x(), None]
    target_values = [exceptional_value]
    unit = target_ctx.y() + target_ctx.const(alpha_lift)
    n_product = 1
    for i in range(1, len(g.keys) - 1):
        n_product *= g.step(i).power
        expected_drop = w * n_product
        img = tmap.to_target(g.keys[i + 1])
        drop = img.x_order()
        if drop != expected_drop:
            raise TransformError(
                "exceptional power of key %d is %d, expected %d"
                % (i + 1, drop, expected_drop))
        stripped = img.shift(-drop, 0)
        stripped = _strip_unit(stripped, unit)
        deg = 1
        for s in range(2, i + 1):
            deg *= g.step(s).power
        slices = stripped.y_slices()
        if stripped.y_degree() != deg or list(slices.get(deg, {})) != [0] \
                or not (slices[deg][0] == g.ctx.tower.one()):
            raise TransformError(
                "strict transform of key %d does not normalize to a monic "
                "key of degree %d: %r" % (i + 1, deg, stripped))
        if i == 1:
            # the recentered parameter must BE the transported key; a
            # leftover unit factor cannot be absorbed polynomially
            if stripped != target_ctx.y():
                raise TransformError(
                    "strict transform of key 2 is %r, not the recentered "
                    "parameter; the chart change is not polynomial" % stripped)
            target_keys[1] = stripped
        else:
            target_keys.append(stripped)
        target_values.append(
            g.values[i + 1] - exceptional_value * drop)

    # re-seed the recursion: the step at target level i comes from source i+1
    target_steps = []
    for i in range(2, len(target_keys)):
        power = g.step(i).power
        diff = target_keys[i] - target_keys[i - 1] ** power
        tail = []
        if not diff.is_zero():
            for exps, c in sorted(_expand_raw(diff, target_keys[:i], i - 1).items()):
                tail.append(TailTerm(c, exps))
        target_steps.append(KeyStep(i - 1, power, tail, target_values[i]))

    # Declared residues transport safely only when every source residue is 1
    # (the unit-strip corrections are powers of source residues, hence
    # trivial); otherwise the transported oracle recomputes them exactly.
    residues = {}
    one = g.ctx.tower.one()
    if all(l.residue is None or l.residue == one for l in g.levels):
        for i in range(1, len(target_keys)):
            src = g.level(i + 1).residue if i + 1 <= g.top else None
            if src is not None:
                residues[i] = src

    oracle = _transport_oracle(g, tmap)
    target = GenSeq(target_ctx, target_values, target_steps,
                    residues=residues, oracle=oracle, terminal=g.terminal)
    return tmap, target


def _strip_unit(f, unit):
    """Divide out the largest exact power of (Z + alpha)."""
    while True:
        q, r = divmod_y(f, unit)
        if r.is_zero() and not q.is_zero():
            f = q
        else:
            return f


def _transport_oracle(g, tmap):
    if g.oracle is None:
        return None
    xn, yn = g.ctx.param_names
    gx, gy = g.oracle.images[xn], g.oracle.images[yn]
    x1 = _series_monomial(gx, tmap.b, gy, -tmap.a, tmap.eps)
    y1 = _series_monomial(gx, -tmap.w, gy, tmap.nbar, tmap.eps)
    tower = x1.tower
    alpha_const = TruncSeries(tower, {Fraction(0): tower.lift(tmap.alpha_lift)},
                              y1.trunc)
    z1 = y1 - alpha_const
    Xn, Zn = tmap.target_ctx.param_names
    try:
        return SeriesEmbedding(tmap.target_ctx, {Xn: x1, Zn: z1},
                               normalization=(Xn, tmap.exceptional_value))
    except ValueError:
        return None  # truncation too shallow to normalize; drop the oracle


def _series_monomial(gx, ex, gy, ey, eps):
    def power(s, e):
        return s ** e if e >= 0 else s.inverse() ** (-e)

    out = power(gx, ex) * power(gy, ey)
    return out if eps == 1 else out.inverse()


def strict_transform(f, tmap, normalize=True):
    """Strict transform of f: image with the exceptional factor removed.

    Strict transforms are defined only up to a unit; with ``normalize`` the
    unit factor (Z + alpha)^k is stripped and the lex-lowest coefficient is
    scaled to 1 for determinism.
    """
    if f.is_zero():
        raise ValueError("strict transform of zero")
    img = tmap.to_target(f)
    img = img.shift(-img.x_order(), 0)
    if normalize:
        unit = tmap.target_ctx.y() + tmap.target_ctx.const(tmap.alpha_lift)
        img = _strip_unit(img, unit)
        img = img.leading_unit_normalized()
    return img


# ---------------------------------------------------------------------------
# chains and their invariant tables
# ---------------------------------------------------------------------------

class ShiftRow:
    __slots__ = ("target_level", "source_level", "jump", "degree", "power",
                 "value", "ok")

    def __init__(self, target_level, source_level, jump, degree, power,
                 value, ok):
        self.target_level = target_level
        self.source_level = source_level
        self.jump = jump          # (target, source) pair
        self.degree = degree
        self.power = power
        self.value = value
        self.ok = ok

    def __repr__(self):
        return ("level %d <- %d: jump %r, degree %r, power %r, value %r%s"
                % (self.target_level, self.source_level, self.jump,
                   self.degree, self.power, self.value,
                   "" if self.ok else "  MISMATCH"))


class ChainStep:
    __slots__ = ("map", "source", "target", "table", "residue_extension")

    def __init__(self, map_, source, target, table, residue_extension):
        self.map = map_
        self.source = source
        self.target = target
        self.table = table
        self.residue_extension = residue_extension

    def ok(self):
        return all(row.ok for row in self.table)


class TransformChainRecord:
    def __init__(self, steps, requested, truncated_reason=None):
        self.steps = steps
        self.requested = requested
        self.truncated_reason = truncated_reason

    def __len__(self):
        return len(self.steps)

    def lines(self):
        out = []
        for k, step in enumerate(self.steps, start=1):
            out.append("step %d: %s" % (k, step.map.describe()))
            out.append("  residue-field degree over the source: %d"
                       % step.residue_extension)
            out.extend("  " + repr(row) for row in step.table)
        if self.truncated_reason:
            out.append("chain truncated after %d of %d steps: %s"
                       % (len(self.steps), self.requested,
                          self.truncated_reason))
        return out

    def dot(self):
        """Chain as a DOT digraph over the ring contexts."""
        out = ["digraph transforms {"]
        prev = "R0"
        label = lambda ctx: "(%s, %s)" % ctx.param_names
        if self.steps:
            out.append('  %s [label="%s"];' % (prev,
                                               label(self.steps[0].source.ctx)))
        for k, step in enumerate(self.steps, start=1):
            node = "R%d" % k
            out.append('  %s [label="%s"];' % (node, label(step.target.ctx)))
            out.append('  %s -> %s [label="jump %d, w %d"];'
                       % (prev, node, step.map.nbar, step.map.w))
            prev = node
        out.append("}")
        return out

    def __repr__(self):
        return "\n".join(self.lines())


def shift_table(source, target):
    """Recomputed target invariants against the source's shifted ones."""
    rows = []
    for i in range(1, target.top + 1):
        si = i + 1
        t_lvl = target.level(i)
        s_lvl = source.level(si) if si <= source.top else None
        if s_lvl is None:
            continue
        jump = (t_lvl.group_jump, s_lvl.group_jump)
        degree = (t_lvl.residue_degree, s_lvl.residue_degree)
        power = (t_lvl.cap, s_lvl.cap)
        value = (target.values[i],
                 source.values[si] - target.values[0] * _drop(source, si))
        ok = all(x == y for x, y in (jump, degree, power, value)
                 if x is not None and y is not None)
        rows.append(ShiftRow(i, si, jump, degree, power, value, ok))
    return rows


def _drop(source, si):
    w = source.level(1).unit_exps[0]
    n = 1
    for s in range(1, si):
        n *= source.step(s).power
    return w * n


def iterate_transforms(g, count):
    """Chain of composite transforms; truncates with a reason when keys run out."""
    steps = []
    current = g
    reason = None
    for _ in range(count):
        try:
            tmap, target = free_transform(current)
        except TransformError as err:
            reason = str(err)
            break
        table = shift_table(current, target)
        res_ext = (current.level(1).residue_degree or 1)
        steps.append(ChainStep(tmap, current, target, table, res_ext))
        current = target
    return TransformChainRecord(steps, count, reason)


# ---------------------------------------------------------------------------
# value bookkeeping of transformed monomials
# ---------------------------------------------------------------------------

def transform_value_table(g, tmap, f, level):
    """Per-term exceptional exponents of f's expansion against a key level.

    For each expansion term with value above the level's key value (or equal
    with top index below the level), the transformed exceptional exponent t
    must exceed the key's own drop, except in the one stated degenerate case
    (level 1, the term x alone, jump = w = 1), where they agree.
    """
    from .genseq import expand
    if level == 0:
        lam = g.level(1).group_jump
    elif level == 1:
        lam = g.level(1).unit_exps[0]
    else:
        lam = _drop(g, level)
    rows = []
    key_value = g.values[level]
    for c, exps, value in expand(f, g).terms:
        sign = (value - key_value).sign()
        top_idx = max((i for i, e in enumerate(exps) if e), default=0)
        if sign < 0 or (sign == 0 and top_idx >= level):
            continue
        img = tmap.to_target(g.monomial(exps))
        t = img.x_order()
        exceptional = (level == 1 and tmap.nbar == 1 and tmap.w == 1
                       and list(exps[1:]) == [0] * (len(exps) - 1)
                       and exps[0] == 1)
        ok = t > lam or (exceptional and t == lam)
        rows.append((tuple(exps), t, lam, ok))
    return rows
