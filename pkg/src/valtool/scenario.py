"""Scenario files: a line-oriented declaration format plus a command list.

Sections are headed by [field], [ring NAME], [embedding NAME],
[valuation NAME], [extension NAME] and [run].  All constants are exact:
rationals as p/q, rank-2 values as (q0,q1) pairs over the declared
irrational.  Reports are deterministic: re-running a file reproduces the
bytes.
"""

from __future__ import annotations

import re
from fractions import Fraction

from . import blowup as blowup_mod
from . import graded as graded_mod
from .extension import ExtensionMap, ramification_report, splitting_report
from .genseq import (
    GenSeq,
    InsufficientGeneratingData,
    KeyStep,
    TailTerm,
    _expand_raw,
    evaluate,
    expand,
    validate_sequence,
)
from .ring import (
    LocalRingCtx,
    PolyParseError,
    SeriesEmbedding,
    TruncSeries,
    parse_poly,
    series_value,
)
from .towers import QQ, BaseField, NotAFieldExtension, ResidueTower
from .values import IrrationalDescriptor, Value, pi_descriptor


class ScenarioError(Exception):
    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class Scenario:
    def __init__(self):
        self.tower = ResidueTower(QQ)
        self.irrationals = {}
        self.rings = {}
        self.embeddings = {}
        self.valuations = {}
        self.extensions = {}
        self.commands = []   # (line, verb, args)


def _parse_fraction(text, line):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ScenarioError("expected an exact rational, found %r" % text, line)


def _parse_value(text, scenario, line):
    text = text.strip()
    m = re.fullmatch(r"\(([^,]+),([^)]+)\)", text)
    if m:
        q0 = _parse_fraction(m.group(1).strip(), line)
        q1 = _parse_fraction(m.group(2).strip(), line)
        if not scenario.irrationals:
            raise ScenarioError("rank-2 value %r needs an irrational "
                                "declaration" % text, line)
        tau = next(iter(scenario.irrationals.values()))
        return Value(q0, q1, tau)
    return Value(_parse_fraction(text, line))


def _parse_const(text, scenario, line):
    """A tower constant: rational arithmetic over the declared generators."""
    ctx = LocalRingCtx(scenario.tower, ("_c0", "_c1"))
    consts = {name: scenario.tower.gen(name)
              for name in scenario.tower.level_names()}
    try:
        elem = parse_poly(text, ctx, consts=consts)
    except PolyParseError as err:
        raise ScenarioError("bad constant %r: %s" % (text, err), line)
    if elem.y_degree() > 0 or any(i for i, _ in elem.terms):
        raise ScenarioError("%r is not a constant" % text, line)
    return elem.constant_term()


_SERIES_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?P<coeff>\d+(?:/\d+)?)?\s*"
    r"(?:(?P<star>\*)?\s*t(?:\^(?P<exp>\(?-?\d+(?:/\d+)?\)?))?)?\s*")


def _parse_series(text, tower, trunc, line):
    coeffs = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _SERIES_TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ScenarioError("bad series term at %r" % text[pos:], line)
        sign, coeff, exp = m.group("sign"), m.group("coeff"), m.group("exp")
        has_t = "t" in text[m.start():m.end()]
        if coeff is None and not has_t:
            raise ScenarioError("empty series term in %r" % text, line)
        if sign is None and not first:
            raise ScenarioError("missing +/- between series terms", line)
        q = Fraction(coeff) if coeff else Fraction(1)
        if sign == "-":
            q = -q
        e = Fraction(exp.strip("()")) if exp else (Fraction(1) if has_t
                                                   else Fraction(0))
        c = tower.scalar(q)
        if e in coeffs:
            coeffs[e] = coeffs[e] + c
        else:
            coeffs[e] = c
        pos = m.end()
        first = False
    return TruncSeries(tower, coeffs, trunc)


def parse_scenario(text):
    """Parse scenario text; errors carry the offending line number."""
    scenario = Scenario()
    section = None
    name = None
    # accumulated per-section state
    state = {}

    def flush(line):
        if section is None:
            return
        try:
            if section == "ring":
                if "params" not in state:
                    raise ScenarioError("ring %r missing params" % name, line)
                scenario.rings[name] = LocalRingCtx(
                    scenario.tower, tuple(state["params"]),
                    ring_levels=state.get("levels"))
            elif section == "embedding":
                ring = state.get("ring")
                if ring not in scenario.rings:
                    raise ScenarioError("embedding %r references undeclared "
                                        "ring %r" % (name, ring), line)
                ctx = scenario.rings[ring]
                trunc = state.get("truncate", Fraction(32))
                images = {}
                for pname, stext, sline in state.get("series", []):
                    if pname not in ctx.param_names:
                        raise ScenarioError(
                            "series for unknown parameter %r" % pname, sline)
                    images[pname] = _parse_series(stext, scenario.tower,
                                                  trunc, sline)
                norm = state.get("normalize")
                try:
                    scenario.embeddings[name] = SeriesEmbedding(
                        ctx, images, normalization=norm)
                except ValueError as err:
                    raise ScenarioError("embedding %r: %s" % (name, err), line)
            elif section == "valuation":
                scenario.valuations[name] = _build_valuation(
                    scenario, name, state, line)
            elif section == "extension":
                scenario.extensions[name] = _build_extension(
                    scenario, name, state, line)
        finally:
            state.clear()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        m = re.fullmatch(r"\[(\w+)(?:\s+(\w+))?\]", stripped)
        if m:
            flush(lineno)
            section, name = m.group(1), m.group(2)
            if section not in ("field", "ring", "embedding", "valuation",
                               "extension", "run"):
                raise ScenarioError("unknown section %r" % section, lineno)
            if section != "field" and section != "run" and name is None:
                raise ScenarioError("section [%s] needs a name" % section,
                                    lineno)
            if name is not None and (
                    name in scenario.rings or name in scenario.embeddings
                    or name in scenario.valuations
                    or name in scenario.extensions):
                raise ScenarioError("duplicate name %r" % name, lineno)
            continue
        if section is None:
            raise ScenarioError("content before the first section", lineno)
        if section == "field":
            _field_line(scenario, stripped, lineno)
        elif section == "run":
            parts = stripped.split()
            scenario.commands.append((lineno, parts[0], parts[1:]))
        else:
            _section_line(scenario, section, state, stripped, lineno)
    flush(len(text.splitlines()))
    return scenario


def _field_line(scenario, line_text, lineno):
    parts = line_text.split()
    if parts[0] == "base":
        if parts[1] == "Q":
            scenario.tower = ResidueTower(QQ)
        elif parts[1] == "F":
            scenario.tower = ResidueTower(BaseField(int(parts[2])))
        else:
            raise ScenarioError("base must be Q or F p", lineno)
    elif parts[0] == "irrational":
        nm = parts[1]
        if parts[2] == "default":
            scenario.irrationals[nm] = pi_descriptor()
        elif parts[2] == "interval":
            vals = [_parse_fraction(p, lineno) for p in parts[3:]]
            if len(vals) < 2 or len(vals) % 2:
                raise ScenarioError("interval table needs lo/hi pairs", lineno)
            pairs = list(zip(vals[::2], vals[1::2]))
            try:
                scenario.irrationals[nm] = IrrationalDescriptor(nm, pairs)
            except ValueError as err:
                raise ScenarioError(str(err), lineno)
        else:
            raise ScenarioError("irrational needs 'default' or 'interval'",
                                lineno)
    elif parts[0] == "extend":
        coeffs = [_parse_const(p, scenario, lineno) for p in parts[3:]]
        if parts[2] != "minpoly":
            raise ScenarioError("extend NAME minpoly c0 c1 ...", lineno)
        try:
            scenario.tower = scenario.tower.extend(parts[1], coeffs)
        except NotAFieldExtension as err:
            raise ScenarioError(str(err), lineno)
    else:
        raise ScenarioError("unknown field directive %r" % parts[0], lineno)


def _section_line(scenario, section, state, line_text, lineno):
    parts = line_text.split()
    key = parts[0]
    if section == "ring":
        if key == "params":
            if len(parts) != 3:
                raise ScenarioError("params needs two names", lineno)
            state["params"] = parts[1:]
        elif key == "levels":
            state["levels"] = int(parts[1])
        else:
            raise ScenarioError("unknown ring directive %r" % key, lineno)
        return
    if section == "embedding":
        if key == "ring":
            state["ring"] = parts[1]
        elif key == "truncate":
            state["truncate"] = _parse_fraction(parts[1], lineno)
        elif key == "normalize":
            state["normalize"] = (parts[1],
                                  _parse_value(parts[2], scenario, lineno))
        elif "=" in line_text:
            pname, stext = line_text.split("=", 1)
            state.setdefault("series", []).append(
                (pname.strip(), stext.strip(), lineno))
        else:
            raise ScenarioError("unknown embedding directive %r" % key, lineno)
        return
    if section == "valuation":
        if key == "ring":
            state["ring"] = parts[1]
        elif key == "values":
            state["values"] = [_parse_value(p, scenario, lineno)
                               for p in parts[1:]]
        elif key == "key":
            m = re.fullmatch(r"key\s+n=(\S+)\s+value=(\S+)\s+tail=(.+)",
                             line_text)
            if not m:
                raise ScenarioError("key n=<int> value=<value> tail=<poly>",
                                    lineno)
            state.setdefault("keys", []).append(
                (int(m.group(1)), m.group(2), m.group(3).strip(), lineno))
        elif key == "alpha":
            state.setdefault("alphas", {})[int(parts[1])] = \
                _parse_const(" ".join(parts[2:]), scenario, lineno)
        elif key == "oracle":
            state["oracle"] = (parts[1], lineno)
        elif key == "terminal":
            state["terminal"] = True
        else:
            raise ScenarioError("unknown valuation directive %r" % key, lineno)
        return
    if section == "extension":
        if key == "from":
            if len(parts) != 4 or parts[2] != "to":
                raise ScenarioError("from R to S", lineno)
            state["from"], state["to"] = parts[1], parts[3]
        elif key == "degree":
            state["degree"] = int(parts[1])
        elif key == "char":
            state["char"] = int(parts[1])
        elif key == "unique":
            state["unique"] = parts[1] == "true"
        elif "=" in line_text:
            pname, ptext = line_text.split("=", 1)
            state.setdefault("images", []).append(
                (pname.strip(), ptext.strip(), lineno))
        else:
            raise ScenarioError("unknown extension directive %r" % key, lineno)
        return


def _build_valuation(scenario, name, state, line):
    ring = state.get("ring")
    if ring not in scenario.rings:
        raise ScenarioError("valuation %r references undeclared ring %r"
                            % (name, ring), line)
    ctx = scenario.rings[ring]
    if "values" not in state or len(state["values"]) != 2:
        raise ScenarioError("valuation %r needs 'values b0 b1'" % name, line)
    values = list(state["values"])
    steps = []
    keys = [ctx.x(), ctx.y()]
    for idx, (power, vtext, ttext, kline) in enumerate(state.get("keys", ()),
                                                       start=1):
        next_value = _parse_value(vtext, scenario, kline)
        extra = {"P%d" % i: keys[i] for i in range(2, len(keys))}
        try:
            tail_poly = parse_poly(ttext, ctx, extra_vars=extra)
        except PolyParseError as err:
            raise ScenarioError("key %d tail: %s" % (idx, err), kline)
        tail = []
        if not tail_poly.is_zero():
            for exps, c in sorted(_expand_raw(tail_poly, keys,
                                              len(keys) - 1).items()):
                tail.append(TailTerm(c, exps))
        steps.append(KeyStep(idx, power, tail, next_value))
        nxt = keys[idx] ** power
        for term in tail:
            mono = ctx.const(term.coeff)
            for k, e in zip(keys, term.exps):
                if e:
                    mono = mono * k ** e
            nxt = nxt + mono
        keys.append(nxt)
        values.append(next_value)
    oracle = None
    if "oracle" in state:
        oname, oline = state["oracle"]
        if oname not in scenario.embeddings:
            raise ScenarioError("valuation %r references undeclared "
                                "embedding %r" % (name, oname), oline)
        oracle = scenario.embeddings[oname]
        if oracle.ctx is not ctx:
            raise ScenarioError("oracle %r lives on a different ring" % oname,
                                oline)
    try:
        return GenSeq(ctx, values, steps, residues=state.get("alphas"),
                      oracle=oracle, terminal=state.get("terminal", False))
    except ValueError as err:
        raise ScenarioError("valuation %r: %s" % (name, err), line)


def _build_extension(scenario, name, state, line):
    src, dst = state.get("from"), state.get("to")
    if src not in scenario.rings or dst not in scenario.rings:
        raise ScenarioError("extension %r references undeclared rings" % name,
                            line)
    sctx, dctx = scenario.rings[src], scenario.rings[dst]
    images = {}
    for pname, ptext, pline in state.get("images", ()):
        if pname not in sctx.param_names:
            raise ScenarioError("image for unknown parameter %r" % pname,
                                pline)
        try:
            images[pname] = parse_poly(ptext, dctx)
        except PolyParseError as err:
            raise ScenarioError("image of %r: %s" % (pname, err), pline)
    missing = [p for p in sctx.param_names if p not in images]
    if missing:
        raise ScenarioError("extension %r misses images for %s"
                            % (name, ", ".join(missing)), line)
    try:
        return ExtensionMap(sctx, images[sctx.param_names[0]],
                            images[sctx.param_names[1]],
                            field_degree=state.get("degree", 1),
                            residue_char=state.get("char",
                                                   scenario.tower.base.p),
                            unique=state.get("unique"))
    except ValueError as err:
        raise ScenarioError("extension %r: %s" % (name, err), line)


# ---------------------------------------------------------------------------
# command execution
# ---------------------------------------------------------------------------

class Section:
    def __init__(self, title):
        self.title = title
        self.lines = []
        self.csv = []        # (header, rows)
        self.dot = []
        self.fault = None

    def add(self, *lines):
        self.lines.extend(lines)


class Report:
    def __init__(self):
        self.sections = []

    @property
    def ok(self):
        return all(s.fault is None for s in self.sections)

    def render(self, fmt="text"):
        out = []
        for s in self.sections:
            out.append("== %s ==" % s.title)
            if fmt == "csv" and s.csv:
                for header, rows in s.csv:
                    out.append(header)
                    out.extend(",".join(str(c) for c in row) for row in rows)
            elif fmt == "dot" and s.dot:
                out.extend(s.dot)
            else:
                out.extend(s.lines)
            if s.fault:
                out.append("FAULT: %s" % s.fault)
            out.append("")
        return "\n".join(out)


class RunFlags:
    def __init__(self, depth=4, value_bound=None, seed=0, fmt="text"):
        self.depth = depth
        self.value_bound = value_bound
        self.seed = seed
        self.fmt = fmt


def _resolve(scenario, kind, name, line):
    table = {"valuation": scenario.valuations, "extension": scenario.extensions,
             "ring": scenario.rings, "embedding": scenario.embeddings}[kind]
    if name not in table:
        raise ScenarioError("undeclared %s %r" % (kind, name), line)
    return table[name]


def _candidate(scenario, name, line):
    if name in scenario.valuations:
        return scenario.valuations[name]
    if name in scenario.embeddings:
        return scenario.embeddings[name]
    raise ScenarioError("undeclared candidate %r" % name, line)


def run_scenario(scenario, flags=None):
    """Execute the command list in order; faults do not stop later commands."""
    flags = flags or RunFlags()
    report = Report()
    for line, verb, args in scenario.commands:
        section = Section("%s %s" % (verb, " ".join(args)))
        report.sections.append(section)
        try:
            _dispatch(scenario, flags, section, line, verb, args)
        except ScenarioError:
            raise
        except InsufficientGeneratingData as err:
            section.fault = "insufficient generating-sequence data: %s" % err
        except Exception as err:  # module faults become section failures
            section.fault = "%s: %s" % (type(err).__name__, err)
    return report


def _dispatch(scenario, flags, section, line, verb, args):
    if verb == "validate":
        g = _resolve(scenario, "valuation", args[0], line)
        rep = validate_sequence(g)
        section.add(*rep.lines())
        if not rep.ok:
            section.fault = "validation failed"
    elif verb == "eval":
        g = _resolve(scenario, "valuation", args[0], line)
        f = _parse_elem(scenario, g, " ".join(args[1:]), line)
        v = evaluate(f, g)
        section.add("value %r" % v)
        if g.oracle is not None:
            sv = series_value(f, g.oracle)
            section.add("oracle %r" % (sv,))
    elif verb == "expand":
        g = _resolve(scenario, "valuation", args[0], line)
        f = _parse_elem(scenario, g, " ".join(args[1:]), line)
        exp = expand(f, g)
        for c, e, v in exp.terms:
            section.add("term %r * P^%r  value %r" % (c, list(e), v))
        section.add("exact reconstruction: %s" % (exp.reconstruct() == f))
        if exp.top_exponent_overflow():
            section.add("note: last-key exponent reaches its derived bound")
    elif verb == "blowup":
        g = _resolve(scenario, "valuation", args[0], line)
        count = int(args[1]) if len(args) > 1 else 1
        rec = blowup_mod.iterate_transforms(g, count)
        section.add(*rec.lines())
        section.dot = rec.dot()
    elif verb == "graded":
        g = _resolve(scenario, "valuation", args[0], line)
        depth = int(args[1]) if len(args) > 1 else flags.depth
        pres = graded_mod.graded_presentation(g, depth)
        section.add(*pres.lines())
        rows = [(gen.index, gen.value, int(gen.redundant))
                for gen in pres.generators]
        section.csv.append(("generator,value,redundant", rows))
    elif verb == "fingen":
        ext = _resolve(scenario, "extension", args[0], line)
        g_r = _resolve(scenario, "valuation", args[1], line)
        g_s = _resolve(scenario, "valuation", args[2], line)
        depth = int(args[3]) if len(args) > 3 else flags.depth
        st = graded_mod.fingen_detect(g_r, g_s, ext, depth)
        section.add(*st.lines())
        rows = [(l.s, l.tau, l.r, l.lam, l.chi) for l in st.levels]
        section.csv.append(("s,tau,r,lambda,chi", rows))
    elif verb == "ramify":
        ext = _resolve(scenario, "extension", args[0], line)
        g_r = _resolve(scenario, "valuation", args[1], line)
        g_s = _resolve(scenario, "valuation", args[2], line)
        monomial_ext = None
        rest = args[3:]
        if rest and rest[0] == "using":
            monomial_ext = _resolve(scenario, "extension", rest[1], line)
        rep = ramification_report(g_r, g_s, ext, depth=flags.depth,
                                  monomial_ext=monomial_ext)
        section.add(*rep.lines())
        section.csv.append(("route,e,f,delta,consistent", rep.csv_rows()))
    elif verb == "split":
        ext = _resolve(scenario, "extension", args[0], line)
        g_r = _resolve(scenario, "valuation", args[1], line)
        if not args[2:] or args[2] != "candidates":
            raise ScenarioError("split EXT NU candidates NAMES... "
                                "[probe POLY]", line)
        rest = args[3:]
        probes = []
        if "probe" in rest:
            k = rest.index("probe")
            probe_texts, rest = rest[k + 1:], rest[:k]
            tctx = ext.target_ctx
            probes = [parse_poly(t, tctx) for t in probe_texts]
        cands = [_candidate(scenario, n, line) for n in rest]
        rep = splitting_report(cands, ext, g_r, probes=probes,
                               value_bound=flags.value_bound, seed=flags.seed)
        section.add(*rep.lines())
    else:
        raise ScenarioError("unknown command %r" % verb, line)


def _parse_elem(scenario, g, text, line):
    extra = {"P%d" % i: g.keys[i] for i in range(2, len(g.keys))}
    try:
        return parse_poly(text, g.ctx, extra_vars=extra)
    except PolyParseError as err:
        raise ScenarioError("bad element %r: %s" % (text, err), line)
