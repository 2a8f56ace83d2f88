import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crdiam.errors import NonHomogeneous, NotArtinian, NotInIdeal, NotRegularSequence, ParseError
from crdiam.ffield import Field
from crdiam.polyring import PolyRing, QuotientRing, degrevlex_key


F2 = Field(2)
F3 = Field(3)


def ctx2():
    return PolyRing(F2, 2)


def test_degrevlex_basics():
    # x > y and x^2 > x*y > y^2
    assert degrevlex_key((1, 0)) > degrevlex_key((0, 1))
    assert degrevlex_key((2, 0)) > degrevlex_key((1, 1)) > degrevlex_key((0, 2))


def test_parse_and_format_roundtrip():
    ctx = PolyRing(F3, 2)
    f = ctx.parse("x^2*y + 2*y^3 - x")
    assert f == {(2, 1): 1, (0, 3): 2, (1, 0): 2}
    assert ctx.parse(ctx.format(f)) == f
    ctx4 = PolyRing(F3, 4)
    g = ctx4.parse("x1^2*x2 + 3*x2^3")
    assert g == {(2, 1, 0, 0): 1}  # 3 = 0 mod 3 kills the second term
    with pytest.raises(ParseError):
        ctx.parse("w^2")
    with pytest.raises(ParseError):
        ctx.parse("")


def test_poly_arithmetic():
    ctx = ctx2()
    x, y = ctx.parse("x"), ctx.parse("y")
    assert ctx.add(x, x) == {}
    sq = ctx.mul(ctx.add(x, y), ctx.add(x, y))
    assert sq == ctx.parse("x^2 + y^2")  # char 2


def build_r2():
    ctx = ctx2()
    return QuotientRing(F2, 2, [ctx.parse("x^2"), ctx.parse("y^2")])


def test_build_ring_staircase():
    ring = build_r2()
    assert ring.dim_k == 4
    # ascending degrevlex with x > y: 1, y, x, xy
    assert ring.staircase == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_build_ring_hypersurface():
    ctx = PolyRing(F3, 1)
    ring = QuotientRing(F3, 1, [ctx.parse("x^2")])
    assert ring.dim_k == 2
    assert ring.staircase == [(0,), (1,)]


def test_build_ring_rejections():
    ctx = ctx2()
    with pytest.raises(NotRegularSequence):
        QuotientRing(F2, 2, [ctx.parse("x^2"), ctx.parse("x^2")])
    with pytest.raises(NotArtinian):
        QuotientRing(F2, 2, [ctx.parse("x^2")])
    with pytest.raises(NonHomogeneous):
        QuotientRing(F2, 2, [ctx.parse("x^2 + x"), ctx.parse("y^2")])
    with pytest.raises(NonHomogeneous):
        QuotientRing(F2, 2, [ctx.parse("1"), ctx.parse("y^2")])


def test_normal_forms():
    ring = build_r2()
    ctx = ring.ctx
    assert ring.nf(ctx.parse("x^2")) == ring.zero_elem
    assert ring.nf(ctx.parse("x*y")) == (0, 0, 0, 1)
    sq = ctx.mul(ctx.parse("x + y"), ctx.parse("x + y"))
    assert ring.nf(sq) == ring.zero_elem


def test_express_in_ideal():
    ring = build_r2()
    ctx = ring.ctx
    h = ring.express_in_ideal(ctx.parse("x^2"))
    assert h == [ctx.one(), ctx.zero()]
    g = ctx.parse("x^2*y^2")
    h = ring.express_in_ideal(g)
    acc = ctx.zero()
    for hj, fj in zip(h, ring.f):
        acc = ctx.add(acc, ctx.mul(hj, fj))
    assert acc == g
    with pytest.raises(NotInIdeal):
        ring.express_in_ideal(ctx.parse("x"))


def test_element_arithmetic():
    ring = build_r2()
    x = ring.var_elems[0]
    y = ring.var_elems[1]
    assert ring.mul_elem(x, y) == ring.nf(ring.ctx.parse("x*y"))
    assert ring.mul_elem(x, x) == ring.zero_elem
    assert ring.is_unit(ring.one_elem)
    assert not ring.is_unit(x)
    u = ring.add(ring.one_elem, x)  # 1 + x is a unit
    assert ring.mul_elem(u, ring.inv_elem(u)) == ring.one_elem


def test_mixed_degree_ring():
    ctx = PolyRing(F3, 2)
    ring = QuotientRing(F3, 2, [ctx.parse("x^2"), ctx.parse("y^3")])
    assert ring.dim_k == 6
    assert ring.nf(ctx.parse("y^3")) == ring.zero_elem
    assert ring.nf(ctx.parse("x*y^2")) != ring.zero_elem


_CTX3 = PolyRing(F3, 2)
_RING3 = QuotientRing(F3, 2, [_CTX3.parse("x^2"), _CTX3.parse("y^3")])


@st.composite
def random_poly(draw):
    ctx = _RING3.ctx
    nterms = draw(st.integers(0, 4))
    f = ctx.zero()
    for _ in range(nterms):
        e = (draw(st.integers(0, 3)), draw(st.integers(0, 3)))
        c = draw(st.integers(0, 2))
        f = ctx.add(f, {e: c} if c else {})
    return f


@settings(max_examples=40, deadline=None)
@given(random_poly(), random_poly())
def test_nf_is_ring_homomorphism(a, b):
    ring, ctx = _RING3, _RING3.ctx
    lhs = ring.nf(ctx.mul(a, b))
    rhs = ring.mul_elem(ring.nf(a), ring.nf(b))
    assert lhs == rhs
    assert ring.nf(ctx.add(a, b)) == ring.add(ring.nf(a), ring.nf(b))


@settings(max_examples=40, deadline=None)
@given(random_poly())
def test_express_in_ideal_reexpands(a):
    ring, ctx = _RING3, _RING3.ctx
    rem = ring.nf_poly(a)
    member = ctx.sub(a, rem)  # a - nf(a) is in the ideal
    h = ring.express_in_ideal(member)
    acc = ctx.zero()
    for hj, fj in zip(h, ring.f):
        acc = ctx.add(acc, ctx.mul(hj, fj))
    assert acc == member
