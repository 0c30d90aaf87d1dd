"""Elements of two-dimensional regular local rings as bivariate polynomials.

The model is deliberately polynomial, not power-series: expansions against
key polynomials are exact, units are polynomials with nonzero constant term,
and the only series in sight is the truncated evaluation oracle used to
recompute values and residues independently.
"""

from __future__ import annotations

from fractions import Fraction

from .towers import SubfieldSpec, TowerElem
from .values import Value


class NotRegularAfterSubstitution(Exception):
    """A Laurent substitution left a negative exponent behind."""


class _InsufficientPrecision:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "InsufficientPrecision"

    def __bool__(self):
        return False


INSUFFICIENT_PRECISION = _InsufficientPrecision()


class LocalRingCtx:
    """Context for a two-dimensional regular local ring.

    ``tower`` carries the residue data of the whole scenario; the ring's own
    residue field is the prefix of the first ``ring_levels`` levels.
    ``provenance`` is the chain of transform labels that produced this ring
    from a root ring.
    """

    __slots__ = ("tower", "ring_levels", "param_names", "provenance")

    def __init__(self, tower, param_names=("x", "y"), ring_levels=None,
                 provenance=()):
        if param_names[0] == param_names[1]:
            raise ValueError("parameter names must be distinct")
        self.tower = tower
        self.param_names = tuple(param_names)
        self.ring_levels = tower.height if ring_levels is None else ring_levels
        self.provenance = tuple(provenance)

    def residue_field(self):
        return SubfieldSpec(prefix_levels=self.ring_levels)

    def zero(self):
        return RingElem(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        if not isinstance(c, TowerElem):
            c = self.tower.scalar(c)
        else:
            c = self.tower.lift(c)
        if c.is_zero():
            return RingElem(self, {})
        return RingElem(self, {(0, 0): c})

    def monomial(self, i, j, c=1):
        out = self.const(c)
        if not out.terms:
            return out
        return RingElem(self, {(i, j): out.terms[(0, 0)]})

    def x(self):
        return self.monomial(1, 0)

    def y(self):
        return self.monomial(0, 1)

    def __repr__(self):
        return "LocalRingCtx(%s, %s; levels<=%d)" % (
            self.param_names[0], self.param_names[1], self.ring_levels)


class RingElem:
    """Bivariate polynomial over the tower; no zero coefficients stored."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        self.ctx = ctx
        self.terms = {e: c for e, c in terms.items() if not c.is_zero()}
        for c in self.terms.values():
            if c.levels_used() > ctx.ring_levels:
                raise ValueError(
                    "coefficient %r uses tower levels beyond the ring's "
                    "residue field" % c)

    # -- ring structure ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RingElem):
            if other.ctx is not self.ctx:
                raise ValueError("ring elements from different contexts")
            return other
        return self.ctx.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            out[e] = c if s is None else s + c
        return RingElem(self.ctx, out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RingElem(self.ctx, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, TowerElem)):
            c0 = self.ctx.const(other)
            if not c0.terms:
                return self.ctx.zero()
            scal = c0.terms[(0, 0)]
            return RingElem(self.ctx, {e: c * scal for e, c in self.terms.items()})
        other = self._coerce(other)
        out = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                e = (i1 + i2, j1 + j2)
                p = c1 * c2
                s = out.get(e)
                out[e] = p if s is None else s + p
        return RingElem(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers are not ring elements")
        out = self.ctx.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, RingElem):
            other = self.ctx.const(other)
        return self.ctx is other.ctx and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def _key(self):
        return tuple(sorted((e, hash(c)) for e, c in self.terms.items()))

    # -- predicates ----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_unit(self):
        return (0, 0) in self.terms

    def constant_term(self):
        return self.terms.get((0, 0), self.ctx.tower.zero())

    def in_maximal_ideal(self):
        return (0, 0) not in self.terms

    # -- shape helpers -------------------------------------------------------

    def y_degree(self):
        return max((j for _, j in self.terms), default=-1)

    def x_order(self):
        """Largest power of x dividing the element (0 for zero-free use)."""
        return min((i for i, _ in self.terms), default=0)

    def y_slices(self):
        """Map j -> {i: coeff}: the element grouped by y-exponent."""
        out = {}
        for (i, j), c in self.terms.items():
            out.setdefault(j, {})[i] = c
        return out

    def shift(self, di, dj):
        if any(i + di < 0 or j + dj < 0 for i, j in self.terms):
            raise NotRegularAfterSubstitution(
                "negative exponent after monomial shift")
        return RingElem(self.ctx, {(i + di, j + dj): c
                                   for (i, j), c in self.terms.items()})

    def leading_unit_normalized(self):
        """Divide by the coefficient of the lex-smallest exponent pair."""
        if not self.terms:
            return self
        e0 = min(self.terms)
        inv = self.terms[e0].inverse()
        return RingElem(self.ctx, {e: c * inv for e, c in self.terms.items()})

    def map_coefficients(self, fn, new_ctx=None):
        ctx = new_ctx or self.ctx
        out = {}
        for e, c in self.terms.items():
            v = fn(c)
            if not v.is_zero():
                out[e] = v
        return RingElem(ctx, out)

    def __repr__(self):
        if not self.terms:
            return "0"
        xn, yn = self.ctx.param_names
        parts = []
        for (i, j), c in sorted(self.terms.items()):
            mono = "*".join(s for s in (
                _pow_str(xn, i), _pow_str(yn, j)) if s)
            cs = repr(c)
            if mono and cs == "1":
                parts.append(mono)
            elif mono and cs == "-1":
                parts.append("-" + mono)
            elif mono:
                cs = "(%s)" % cs if ("+" in cs or " " in cs) else cs
                parts.append("%s*%s" % (cs, mono))
            else:
                parts.append("(%s)" % cs if "+" in cs else cs)
        return " + ".join(parts).replace("+ -", "- ")


def _pow_str(name, e):
    if e == 0:
        return ""
    return name if e == 1 else "%s^%d" % (name, e)


def divmod_y(f, g):
    """Division f = q*g + r by a polynomial monic in y; deg_y r < deg_y g.

    ``g`` must have y-leading coefficient equal to a unit constant (keys
    always do); exactness is literal.
    """
    d = g.y_degree()
    lead_slice = g.y_slices().get(d, {})
    if list(lead_slice) != [0]:
        raise ValueError("divisor is not monic in y (leading coeff not constant)")
    lead_inv = lead_slice[0].inverse()
    q = f.ctx.zero()
    r = f
    while not r.is_zero() and r.y_degree() >= d:
        top = r.y_slices()[r.y_degree()]
        part = RingElem(f.ctx, {(i, r.y_degree() - d): c * lead_inv
                                for i, c in top.items()})
        q = q + part
        r = r - part * g
    return q, r


def substitute(f, images):
    """Exact substitution of ring elements (or monomial data) for parameters.

    INPUT:

    - ``f`` -- a :class:`RingElem`
    - ``images`` -- dict mapping each parameter name of f's context either to
      a RingElem in a common target context, or to a pair (exps, ctx) with
      ``exps = (a, b)`` meaning the Laurent monomial X^a Y^b of the target

    Monomial images may carry negative exponents; the result must come out
    polynomial or :class:`NotRegularAfterSubstitution` is raised.
    """
    xn, yn = f.ctx.param_names
    if xn not in images or yn not in images:
        raise ValueError("images must cover both parameters")
    gx, gy = images[xn], images[yn]
    if isinstance(gx, tuple) or isinstance(gy, tuple):
        return _substitute_monomial(f, gx, gy)
    ctx = gx.ctx
    if gy.ctx is not ctx:
        raise ValueError("images live in different contexts")
    out = ctx.zero()
    for (i, j), c in sorted(f.terms.items()):
        term = (gx ** i) * (gy ** j) * ctx.tower.lift(c)
        out = out + term
    return out


def _substitute_monomial(f, gx, gy):
    (ax, bx), ctx = gx
    (ay, by), ctx2 = gy
    if ctx is not ctx2:
        raise ValueError("monomial images in different contexts")
    out = {}
    for (i, j), c in f.terms.items():
        e = (ax * i + ay * j, bx * i + by * j)
        if e[0] < 0 or e[1] < 0:
            raise NotRegularAfterSubstitution(
                "term x^%d y^%d maps to exponent %r" % (i, j, e))
        c = ctx.tower.lift(c)
        s = out.get(e)
        out[e] = c if s is None else s + c
    return RingElem(ctx, out)


def order_mod_x(f):
    """Least j with a nonzero (0, j) coefficient; INFINITE iff x divides f.

    This is the order of f mod x in the discrete valuation ring R/xR.
    """
    from .values import INFINITE
    if f.is_zero():
        raise ValueError("order of zero")
    js = [j for (i, j) in f.terms if i == 0]
    return min(js) if js else INFINITE


# ---------------------------------------------------------------------------
# truncated series oracle
# ---------------------------------------------------------------------------

class TruncSeries:
    """Series in t with rational exponents, known exactly below ``trunc``."""

    __slots__ = ("tower", "coeffs", "trunc")

    def __init__(self, tower, coeffs, trunc):
        self.tower = tower
        self.trunc = Fraction(trunc)
        self.coeffs = {Fraction(e): c for e, c in coeffs.items()
                       if not c.is_zero() and Fraction(e) < self.trunc}

    def order(self):
        """Leading exponent, or INSUFFICIENT_PRECISION for (apparent) zero."""
        if not self.coeffs:
            return INSUFFICIENT_PRECISION
        return min(self.coeffs)

    def leading_coeff(self):
        return self.coeffs[min(self.coeffs)]

    def __add__(self, other):
        trunc = min(self.trunc, other.trunc)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e)
            out[e] = c if s is None else s + c
        return TruncSeries(self.tower, out, trunc)

    def __neg__(self):
        return TruncSeries(self.tower, {e: -c for e, c in self.coeffs.items()},
                           self.trunc)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TowerElem):
            return TruncSeries(self.tower,
                               {e: c * other for e, c in self.coeffs.items()},
                               self.trunc)
        ord_a = min(self.coeffs) if self.coeffs else self.trunc
        ord_b = min(other.coeffs) if other.coeffs else other.trunc
        trunc = min(self.trunc + ord_b, other.trunc + ord_a)
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e >= trunc:
                    continue
                p = c1 * c2
                s = out.get(e)
                out[e] = p if s is None else s + p
        return TruncSeries(self.tower, out, trunc)

    def __pow__(self, n):
        # exact-constant start; __mul__ tracks the honest truncation
        out = TruncSeries(self.tower, {Fraction(0): self.tower.one()},
                          Fraction(10 ** 9))
        base = self
        m = n
        while m:
            if m & 1:
                out = out * base
            m >>= 1
            if m:
                base = base * base
        return out

    def inverse(self):
        """Inverse of a series with invertible leading coefficient."""
        if not self.coeffs:
            raise ZeroDivisionError("inverse of (apparently) zero series")
        e0 = min(self.coeffs)
        c0 = self.coeffs[e0]
        # write self = c0 t^e0 (1 + u), invert by geometric series
        u = TruncSeries(self.tower,
                        {e - e0: c * c0.inverse()
                         for e, c in self.coeffs.items() if e != e0},
                        self.trunc - e0)
        acc = TruncSeries(self.tower, {Fraction(0): self.tower.one()},
                          self.trunc - e0)
        term = acc
        u_ord = min(u.coeffs) if u.coeffs else None
        if u_ord is not None and u_ord <= 0:
            raise ZeroDivisionError("series not in normal form")
        k = 0
        while u.coeffs and k * u_ord < acc.trunc:
            term = term * (-u)
            acc = acc + term
            k += 1
        return TruncSeries(self.tower,
                           {e - e0: c * c0.inverse()
                            for e, c in acc.coeffs.items()},
                           acc.trunc - e0)

    def __repr__(self):
        parts = ["%r*t^%s" % (c, e) for e, c in sorted(self.coeffs.items())]
        return (" + ".join(parts) or "0") + " + O(t^%s)" % self.trunc


class SeriesEmbedding:
    """Truncated-series images of a ring's parameters: the valuation oracle.

    The value of t is normalized so that the declared parameter value holds
    (by default the first parameter gets value 1).
    """

    def __init__(self, ctx, images, normalization=None):
        self.ctx = ctx
        self.images = dict(images)
        for name in ctx.param_names:
            if name not in self.images:
                raise ValueError("embedding misses parameter %r" % name)
        if normalization is None:
            normalization = (ctx.param_names[0], Value(1))
        pname, pval = normalization
        base_ord = self.images[pname].order()
        if base_ord is INSUFFICIENT_PRECISION or base_ord <= 0:
            raise ValueError("parameter image must have positive order")
        if not pval.is_rational():
            raise ValueError("normalization value must be rational")
        self.t_value = Fraction(pval.q0) / base_ord

    def evaluate(self, f):
        gx = self.images[f.ctx.param_names[0]]
        gy = self.images[f.ctx.param_names[1]]
        tower = gx.tower
        out = TruncSeries(tower, {}, Fraction(10 ** 9))
        for (i, j), c in sorted(f.terms.items()):
            term = (gx ** i) * (gy ** j) * tower.lift(c)
            out = out + term
        return out

    def residue_of_ratio(self, num, den):
        """Residue [num/den] for equal-order images, or INSUFFICIENT_PRECISION."""
        sn, sd = self.evaluate(num), self.evaluate(den)
        on, od = sn.order(), sd.order()
        if on is INSUFFICIENT_PRECISION or od is INSUFFICIENT_PRECISION:
            return INSUFFICIENT_PRECISION
        if on != od:
            raise ValueError("ratio has nonzero order %s" % (on - od))
        return sn.leading_coeff() / sd.leading_coeff()


def series_value(f, emb):
    """Value of f through the truncated oracle, or INSUFFICIENT_PRECISION.

    The leading t-exponent of the image is scaled so the embedding's declared
    normalization holds; cancellation past the truncation order surfaces as
    INSUFFICIENT_PRECISION, a value-level outcome rather than a fault.
    """
    if f.is_zero():
        raise ValueError("value of zero")
    s = emb.evaluate(f)
    o = s.order()
    if o is INSUFFICIENT_PRECISION:
        return INSUFFICIENT_PRECISION
    return Value(o * emb.t_value)


# ---------------------------------------------------------------------------
# monomial forms (local-degree route input)
# ---------------------------------------------------------------------------

class MonomialForm:
    """Data of u = gamma x^a, v = x^b f with x not dividing f, f a non-unit."""

    __slots__ = ("a", "b", "gamma", "f", "d")

    def __init__(self, a, b, gamma, f, d):
        self.a, self.b, self.gamma, self.f, self.d = a, b, gamma, f, d

    def __repr__(self):
        return "MonomialForm(a=%d, b=%d, d=%s)" % (self.a, self.b, self.d)


class NotMonomial:
    """Expected outcome when images do not have the monomial shape."""

    __slots__ = ("reason",)

    def __init__(self, reason):
        self.reason = reason

    def __repr__(self):
        return "NotMonomial(%s)" % self.reason

    def __bool__(self):
        return False


def monomialize_check(u_img, v_img):
    """Check u = gamma*x^a, v = x^b*f with x∤f and f non-unit; compute d.

    Returns a :class:`MonomialForm` or :class:`NotMonomial` (the latter tells
    the caller to blow up further, it is not a fault).
    """
    if u_img.is_zero() or v_img.is_zero():
        return NotMonomial("zero image")
    a = u_img.x_order()
    gamma = u_img.shift(-a, 0)
    if not gamma.is_unit():
        return NotMonomial("u is not a unit times a power of x")
    if a <= 0:
        return NotMonomial("u has no x factor (a must be positive)")
    b = v_img.x_order()
    f = v_img.shift(-b, 0)
    if f.is_unit():
        return NotMonomial("f is a unit (v is monomial in x)")
    d = order_mod_x(f)
    return MonomialForm(a, b, gamma, f, d)


# ---------------------------------------------------------------------------
# small polynomial / series parsers (shared by scenarios and tests)
# ---------------------------------------------------------------------------

class PolyParseError(Exception):
    def __init__(self, message, pos):
        super().__init__("%s (at column %d)" % (message, pos + 1))
        self.pos = pos


class _Tok:
    def __init__(self, kind, text, pos):
        self.kind, self.text, self.pos = kind, text, pos


def _tokenize(text):
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and (text[j].isdigit() or text[j] == "/"):
                j += 1
            out.append(_Tok("num", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(_Tok("name", text[i:j], i))
            i = j
        elif ch in "+-*^()":
            out.append(_Tok(ch, ch, i))
            i += 1
        else:
            raise PolyParseError("unexpected character %r" % ch, i)
    out.append(_Tok("end", "", len(text)))
    return out


class _PolyParser:
    """Infix polynomials over named variables with exact rational constants."""

    def __init__(self, text, var_lookup, const_lookup=None):
        self.toks = _tokenize(text)
        self.i = 0
        self.var_lookup = var_lookup
        self.const_lookup = const_lookup or {}

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind and tok.kind != kind:
            raise PolyParseError("expected %s, found %r" % (kind, tok.text or "end"),
                                 tok.pos)
        self.i += 1
        return tok

    def parse(self):
        e = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise PolyParseError("trailing input %r" % tok.text, tok.pos)
        return e

    def expr(self):
        tok = self.peek()
        neg = False
        if tok.kind in "+-":
            self.take()
            neg = tok.kind == "-"
        acc = self.term()
        if neg:
            acc = -acc
        while self.peek().kind in "+-":
            op = self.take().kind
            t = self.term()
            acc = acc - t if op == "-" else acc + t
        return acc

    def term(self):
        acc = self.factor()
        while self.peek().kind in ("*",):
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self):
        base = self.atom()
        if self.peek().kind == "^":
            self.take()
            neg = False
            if self.peek().kind == "-":
                self.take()
                neg = True
            tok = self.take("num")
            if "/" in tok.text:
                raise PolyParseError("exponent must be an integer", tok.pos)
            n = int(tok.text)
            if neg:
                raise PolyParseError("negative exponents are not ring elements",
                                     tok.pos)
            return base ** n
        return base

    def atom(self):
        tok = self.peek()
        if tok.kind == "num":
            self.take()
            return self.num_to_elem(Fraction(tok.text))
        if tok.kind == "name":
            self.take()
            if tok.text in self.var_lookup:
                return self.var_lookup[tok.text]
            if tok.text in self.const_lookup:
                return self.const_lookup[tok.text]
            raise PolyParseError("unknown name %r" % tok.text, tok.pos)
        if tok.kind == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        raise PolyParseError("expected a term, found %r" % (tok.text or "end"),
                             tok.pos)

    def num_to_elem(self, q):
        raise NotImplementedError


def parse_poly(text, ctx, extra_vars=None, consts=None):
    """Parse an infix polynomial in the context's parameters.

    ``extra_vars`` maps additional names to RingElems (e.g. key polynomials);
    ``consts`` maps names to tower constants.
    """
    variables = {ctx.param_names[0]: ctx.x(), ctx.param_names[1]: ctx.y()}
    if extra_vars:
        variables.update(extra_vars)
    const_elems = {}
    if consts:
        const_elems = {n: ctx.const(c) for n, c in consts.items()}

    parser = _PolyParser(text, variables, const_elems)
    parser.num_to_elem = lambda q: ctx.const(q)
    out = parser.parse()
    if not isinstance(out, RingElem):
        out = ctx.const(out)
    return out
