#pragma once

#include <random>

#include "eth/shift_algebra.hpp"

namespace testing_eth {

using namespace eth;

inline Scalar sc(long num, long den = 1, int eps = 0, int q2 = 0, int logq = 0)
{
    return Scalar::monomial(Rational(num, den), ScalarKey{eps, q2, logq});
}

inline XPoly X() { return XPoly::x(); }

/// Small random scalar: a few monomials with small exponents.
inline Scalar random_scalar(std::mt19937 &rng)
{
    std::uniform_int_distribution<int> num(-3, 3), e(0, 1), q(0, 2), l(0, 1), count(1, 2);
    Scalar s;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) s += Scalar::monomial(Rational(num(rng)), ScalarKey{e(rng), q(rng) - 1, l(rng)});
    return s;
}

inline XPoly random_xpoly(std::mt19937 &rng, int max_degree)
{
    std::uniform_int_distribution<int> deg(0, max_degree);
    std::vector<Scalar> c;
    const int d = deg(rng);
    for (int k = 0; k <= d; ++k) c.push_back(random_scalar(rng));
    return XPoly::from_coeffs(c);
}

inline DiffOp random_diffop(std::mt19937 &rng, int max_order, int max_degree)
{
    std::uniform_int_distribution<int> ord(0, max_order);
    std::vector<XPoly> t;
    const int o = ord(rng);
    for (int k = 0; k <= o; ++k) t.push_back(random_xpoly(rng, max_degree));
    return DiffOp::from_terms(t);
}

inline ShiftSeries random_shift_poly(std::mt19937 &rng, int lo, int hi, int max_order, int max_degree)
{
    ShiftSeries s;
    for (int k = lo; k <= hi; ++k) s.set(k, random_diffop(rng, max_order, max_degree));
    return s;
}

} // namespace testing_eth
