#include <doctest.h>

#include "helpers.hpp"

using namespace testing_eth;

TEST_CASE("scalar arithmetic on monomials")
{
    CHECK(Scalar::eps(-1) * Scalar::eps(1) == Scalar(1L));
    const Scalar half_log = sc(1, 2, 0, 0, 1);
    CHECK(half_log + half_log == Scalar::logQ());
    CHECK(Scalar::Q(1) * Scalar::Q(1) == Scalar::Q(2));
    CHECK((sc(2, 1, 1) + sc(-2, 1, 1)).is_zero());
    CHECK((Scalar(1L) + sc(0, 1, 0, 2)) == Scalar(1L));
    CHECK(Scalar::Q(3).str() == "Q^{3/2}");
    CHECK(normalize(Scalar::Q(3)) == Scalar::Q(3));
}

TEST_CASE("scalar rendering is canonical")
{
    const Scalar s = sc(-1, 2, -1, 3, 1);
    CHECK(s.str() == "-1/2·Q^{3/2}·logQ^1·eps^{-1}");
    CHECK(Scalar().str() == "0");
}

TEST_CASE("scalar ring axioms on random elements")
{
    std::mt19937 rng(7);
    for (int i = 0; i < 200; ++i) {
        const Scalar a = random_scalar(rng), b = random_scalar(rng), c = random_scalar(rng);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK(a + b == b + a);
    }
}

TEST_CASE("eps window drops high orders and records precision")
{
    Truncation t;
    t.eps_max = 2;
    TruncationScope scope(t);
    const Scalar a = Scalar(1L) + Scalar::eps(2);
    const Scalar sq = a * a;  // 1 + 2 eps^2 + eps^4
    CHECK(sq.prec() == 2);
    CHECK(sq.same_terms(Scalar(1L) + sc(2, 1, 2)));
    CHECK_FALSE(sq.exact());
}

TEST_CASE("eps window soundness: wide product re-truncated equals narrow product")
{
    std::mt19937 rng(11);
    for (int i = 0; i < 100; ++i) {
        Scalar a_w, b_w, p_w;
        {
            Truncation t;
            t.eps_max = 6;
            TruncationScope scope(t);
            a_w = random_scalar(rng) + random_scalar(rng) * Scalar::eps(1);
            b_w = random_scalar(rng) + Scalar::eps(2);
            p_w = a_w * b_w;
        }
        Truncation t;
        t.eps_max = 1;
        TruncationScope scope(t);
        const Scalar a = a_w.truncated(1), b = b_w.truncated(1);
        const Scalar p = a * b;
        CHECK(p == p_w.truncated(p.prec()));
    }
}

TEST_CASE("scalar inverse")
{
    const Scalar a = Scalar::Q(1) * (Scalar(1L) + Scalar::eps(1));
    Truncation t;
    t.eps_max = 5;
    TruncationScope scope(t);
    const Scalar inv = a.inverse();
    const Scalar one = a * inv;
    CHECK(one.same_terms(Scalar(1L)));
    CHECK(Scalar::Q(2).inverse() == Scalar::Q(-2));
    CHECK_THROWS_AS(Scalar().inverse(), PreconditionError);
}

TEST_CASE("eps underflow is reported")
{
    Truncation t;
    t.eps_min = -2;
    TruncationScope scope(t);
    CHECK_THROWS_AS(Scalar::eps(-2) * Scalar::eps(-1), TruncationExhausted);
}
