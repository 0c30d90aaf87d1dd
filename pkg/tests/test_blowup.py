import random
from fractions import Fraction

import pytest

from valtool import fixtures
from valtool.blowup import (
    TransformError,
    free_transform,
    iterate_transforms,
    shift_table,
    strict_transform,
    transform_value_table,
)
from valtool.genseq import GenSeq, InsufficientGeneratingData, KeyStep, TailTerm, evaluate, validate_sequence
from valtool.ring import LocalRingCtx, parse_poly
from valtool.towers import QQ, ResidueTower
from valtool.values import Value


@pytest.fixture
def v1():
    return fixtures.v1()


def test_v1_chart(v1):
    tmap, tgt = free_transform(v1)
    assert (tmap.a, tmap.b, tmap.eps) == (1, 2, 1)
    assert (tmap.nbar, tmap.w) == (2, 3)
    # x = x1^2 y1, y = x1^3 y1^2 (in recentered coordinates y1 = z + 1)
    z = tgt.ctx.y()
    unit = z + tgt.ctx.one()
    assert tmap.x_image == tgt.ctx.x() ** 2 * unit
    assert tmap.y_image == tgt.ctx.x() ** 3 * unit ** 2
    assert tmap.exceptional_value == Value(Fraction(1, 2))


def test_v1_strict_transforms(v1):
    tmap, tgt = free_transform(v1)
    st = strict_transform(parse_poly("y^2 - x^3", v1.ctx), tmap)
    assert st == tgt.ctx.y()
    # exceptional directions collapse to units
    assert strict_transform(parse_poly("x", v1.ctx), tmap).is_unit()
    assert strict_transform(parse_poly("y", v1.ctx), tmap).is_unit()


def test_v1_target_sequence(v1):
    tmap, tgt = free_transform(v1)
    assert tgt.values == [Value(Fraction(1, 2)), Value(Fraction(1, 2))]
    assert validate_sequence(tgt).ok
    # transported residue: alpha_1(target) = alpha_2(source) = 2
    assert tgt.level(1).residue == tgt.ctx.tower.scalar(2)
    assert tgt.level(1).group_jump == 1


def test_shift_identities_v1(v1):
    _, tgt = free_transform(v1)
    rows = shift_table(v1, tgt)
    assert rows and all(r.ok for r in rows)
    assert rows[0].jump == (1, 1)  # jump(target 1) = jump(source 2)


def test_shift_identities_corn():
    corn = fixtures.corn()
    tmap, tgt = free_transform(corn)
    assert [k for k in tgt.keys[2:]] == [parse_poly("y1^2 - x1*y1 - x1", tgt.ctx)]
    assert tgt.values == [Value(Fraction(1, 2)), Value(Fraction(1, 4)),
                          Value(Fraction(7, 8))]
    rows = shift_table(corn, tgt)
    assert all(r.ok for r in rows)
    assert [r.jump for r in rows] == [(2, 2), (2, 2)]
    assert [r.power for r in rows] == [(2, 2), (2, 2)]
    assert validate_sequence(tgt).ok


def test_degenerate_quadratic_transform():
    # jump 1, w 1 gives the ordinary quadratic transform x1 = x, y1 = y/x
    g_r, g_s, _ = fixtures.def2()
    tmap, tgt = free_transform(g_s)
    assert (tmap.nbar, tmap.w, tmap.a, tmap.b) == (1, 1, 0, 1)
    assert tmap.x_image == tgt.ctx.x()
    assert validate_sequence(tgt).ok
    # target keys are the shifted partial sums
    assert tgt.values == [Value(1), Value(1), Value(3), Value(7), Value(15)]


def test_value_preservation_under_transform(v1):
    tmap, tgt = free_transform(v1)
    rng = random.Random(41)
    checked = 0
    for _ in range(40):
        f = v1.ctx.zero()
        for _ in range(4):
            f = f + v1.ctx.monomial(rng.randint(0, 5), rng.randint(0, 3),
                                    rng.randint(-2, 2))
        if f.is_zero():
            continue
        try:
            before = evaluate(f, v1)
        except InsufficientGeneratingData:
            continue
        img = tmap.to_target(f)
        drop = img.x_order()
        rest = img.shift(-drop, 0)
        try:
            after = evaluate(rest, tgt)
        except InsufficientGeneratingData:
            continue
        assert before == after + tmap.exceptional_value * drop
        checked += 1
    assert checked > 15


def test_transform_value_bookkeeping(v1):
    tmap, _ = free_transform(v1)
    # terms of y^2 + x^3 relative to key level 2 (value 7/2): both lie below,
    # so the table is empty; against level 1 the x^3 term transforms deeper
    rows = transform_value_table(v1, tmap, parse_poly("x^3 + x^2*y", v1.ctx), 1)
    assert rows and all(ok for _, _, _, ok in rows)
    for exps, t, lam, ok in rows:
        assert t > lam


def test_transform_exceptional_case():
    # jump = w = 1: the monomial x against level 1 transforms with t == lam
    g_r, _, _ = fixtures.def2()
    tower = ResidueTower(QQ)
    ctx = LocalRingCtx(tower, ("x", "y"))
    g = GenSeq(ctx, [Value(1), Value(1), Value(2)],
               steps=[KeyStep(1, 1, [TailTerm(tower.scalar(-1), (1, 0))],
                              Value(2))],
               residues={1: tower.one(), 2: tower.one()})
    tmap, _ = free_transform(g)
    rows = transform_value_table(g, tmap, parse_poly("x", ctx), 1)
    assert len(rows) == 1
    exps, t, lam, ok = rows[0]
    assert ok and t == lam


def test_iterate_truncates_with_reason(v1):
    rec = iterate_transforms(v1, 3)
    assert len(rec) == 1
    assert "insufficient keys" in rec.truncated_reason
    rec0 = iterate_transforms(v1, 0)
    assert len(rec0) == 0 and rec0.truncated_reason is None


def test_iterate_multi_step_chain():
    # all-power-1 sequences chain indefinitely; each step re-validates
    _, g_s, _ = fixtures.def2()
    rec = iterate_transforms(g_s, 3)
    assert len(rec) == 3 and rec.truncated_reason is None
    assert all(step.ok() for step in rec.steps)
    assert rec.steps[-1].target.values == [Value(1), Value(4), Value(12)]
    assert validate_sequence(rec.steps[-1].target).ok
    dot = rec.dot()
    assert dot[0].startswith("digraph")


def test_iterate_corn_truncates_at_nonpolynomial_chart():
    # the second transported key picks up a unit factor (1 - x) that no
    # polynomial coordinate change absorbs; the chain stops honestly
    rec = iterate_transforms(fixtures.corn(), 2)
    assert len(rec) == 1
    assert "does not normalize" in rec.truncated_reason
    assert rec.steps[0].ok()


def test_transform_requires_keys():
    tower = ResidueTower(QQ)
    ctx = LocalRingCtx(tower, ("x", "y"))
    bare = GenSeq(ctx, [Value(1), Value(Fraction(3, 2))])
    with pytest.raises(TransformError):
        free_transform(bare)


def test_residue_field_degree_row(v1):
    rec = iterate_transforms(v1, 1)
    assert rec.steps[0].residue_extension == 1


def test_strict_transform_rejects_zero(v1):
    tmap, _ = free_transform(v1)
    with pytest.raises(ValueError):
        strict_transform(v1.ctx.zero(), tmap)
