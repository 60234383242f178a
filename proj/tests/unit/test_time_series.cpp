#include <doctest.h>

#include "eth/time_series.hpp"
#include "helpers.hpp"

using namespace testing_eth;

namespace {

using TS = TimeSeries<XPoly>;

Monomial mono(std::initializer_list<std::pair<int, int>> entries)
{
    Monomial m{};
    for (auto [i, e] : entries) m[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(e);
    return m;
}

} // namespace

TEST_CASE("time variables exclude q00")
{
    const auto v = TimeVars::single(2, 2);
    CHECK(v->size() == 5);
    CHECK(v->index(0, 0) == -1);
    CHECK(v->var(v->index(0, 1)).name() == "q_{0,1}");
    CHECK(v->all_monomials().size() == 21);
}

TEST_CASE("truncated products and sums")
{
    const auto v = TimeVars::single(2, 2);
    const int q01 = v->index(0, 1), q10 = v->index(1, 0);
    const TS a = TS::variable(v, q01), b = TS::variable(v, q10);
    CHECK((a * b).coeff(mono({{q01, 1}, {q10, 1}})) == XPoly(1L));
    CHECK((a * a * a).is_zero());
    CHECK(((TS(v, XPoly(1L)) + a) + (TS(v, XPoly(1L)) - a)) == TS(v, XPoly(2L)));
}

TEST_CASE("exp and log")
{
    const auto v = TimeVars::single(2, 2);
    const int q01 = v->index(0, 1), q11 = v->index(1, 1);
    const TS a = TS::variable(v, q01);
    const TS e = ts_exp(a);
    CHECK(e.coeff(Monomial{}) == XPoly(1L));
    CHECK(e.coeff(mono({{q01, 1}})) == XPoly(1L));
    CHECK(e.coeff(mono({{q01, 2}})) == XPoly(Scalar(Rational(1, 2))));
    const TS l = ts_log(TS(v, XPoly(1L)) + TS::variable(v, q11));
    CHECK(l.coeff(mono({{q11, 1}})) == XPoly(1L));
    CHECK(l.coeff(mono({{q11, 2}})) == XPoly(Scalar(Rational(-1, 2))));
    std::mt19937 rng(43);
    for (int i = 0; i < 10; ++i) {
        TS f(v);
        for (const auto &m : v->all_monomials())
            if (total_degree(m) > 0) f.set(m, random_xpoly(rng, 1));
        CHECK(ts_log(ts_exp(f)) == f);
        const TS g = TS(v, XPoly(1L)) + f;
        CHECK((g * ts_inverse(g)) == TS(v, XPoly(1L)));
    }
}

TEST_CASE("derivatives shrink the known range")
{
    const auto v = TimeVars::single(1, 2);
    const int q01 = v->index(0, 1);
    const TS a = TS::variable(v, q01) * TS::variable(v, q01);
    const TS d = a.derivative(q01);
    CHECK(d.coeff(mono({{q01, 1}})) == XPoly(2L));
    CHECK_FALSE(d.known(mono({{q01, 2}})));
    // mixing caps works on the common range
    const TS s = d + a;
    CHECK_FALSE(s.known(mono({{q01, 2}})));
}

TEST_CASE("Miwa shifts")
{
    const auto v = TimeVars::single(2, 2);
    const int q01 = v->index(0, 1), q20 = v->index(2, 0), q11 = v->index(1, 1);
    const Scalar e1 = Scalar::eps(1);

    const auto s1 = miwa_shift(TS::variable(v, q01), -1, true);
    CHECK(s1.coeff(mono({{q01, 1}})) == LambdaSeries<XPoly>(XPoly(1L)));
    CHECK(s1.coeff(Monomial{}) == LambdaSeries<XPoly>::generator(-1, XPoly(-e1)));

    const auto s2 = miwa_shift(TS::variable(v, q20), +1, true);
    CHECK(s2.coeff(mono({{q20, 1}})) == LambdaSeries<XPoly>(XPoly(1L)));
    CHECK(s2.coeff(Monomial{}).is_zero());

    const TS sq = TS::variable(v, q11) * TS::variable(v, q11);
    const auto s3 = miwa_shift(sq, +1, true);
    CHECK(s3.coeff(mono({{q11, 2}})) == LambdaSeries<XPoly>(XPoly(1L)));
    CHECK(s3.coeff(mono({{q11, 1}})) == LambdaSeries<XPoly>::generator(-2, XPoly(Scalar(2L) * e1)));
    CHECK(s3.coeff(Monomial{}) == LambdaSeries<XPoly>::generator(-4, XPoly(e1 * e1)));

    // truncated input: the missing cubic terms make low lambda-orders unknown
    const auto s4 = miwa_shift(sq, +1);
    CHECK(s4.coeff(Monomial{}).window().lo == -2);
}

TEST_CASE("Miwa shift inverse law")
{
    const auto v = TimeVars::single(2, 3);
    std::mt19937 rng(47);
    TimeSeries<Scalar> f(v);
    for (const auto &m : v->all_monomials()) f.set(m, random_scalar(rng));
    const auto there = miwa_shift(f, +1, true);
    const auto back = miwa_shift_same(there, -1, 0, true);
    CHECK(back.agrees_with(f.map_coeffs([](const Scalar &c) { return LambdaSeries<Scalar>(c); })));
}

TEST_CASE("bilinear split")
{
    const auto v = TimeVars::single(1, 2);
    const auto bv = TimeVars::bilinear(*v, 2);
    const int q01 = v->index(0, 1);
    const int xb = bv->index(0, 1, 1), y = bv->index(0, 1, 2);
    const TS one(v, XPoly(1L)), q = TS::variable(v, q01);
    CHECK(bilinear_split(one, one, bv) == TS(bv, XPoly(1L)));
    CHECK(bilinear_split(q, one, bv) == TS::variable(bv, xb) + TS::variable(bv, y));
    const TS p = bilinear_split(q, q, bv);
    CHECK(p == TS::variable(bv, xb) * TS::variable(bv, xb) - TS::variable(bv, y) * TS::variable(bv, y));
    std::mt19937 rng(53);
    for (int i = 0; i < 5; ++i) {
        TS f1(v), f2(v), g1(v), g2(v);
        for (const auto &m : v->all_monomials()) {
            f1.set(m, random_xpoly(rng, 1));
            f2.set(m, random_xpoly(rng, 1));
            g1.set(m, random_xpoly(rng, 1));
            g2.set(m, random_xpoly(rng, 1));
        }
        CHECK(bilinear_split(f1 * f2, g1 * g2, bv) == bilinear_split(f1, g1, bv) * bilinear_split(f2, g2, bv));
    }
}
