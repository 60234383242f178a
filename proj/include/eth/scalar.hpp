#pragma once

#include <algorithm>
#include <compare>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "eth/settings.hpp"

namespace eth {

using Rational = mpq_class;

/// Exponents of one ground monomial Q^{q2/2} (log Q)^{logq} eps^{eps}.
struct ScalarKey
{
    int eps = 0;
    int q2 = 0;
    int logq = 0;

    auto operator<=>(const ScalarKey &) const = default;
};

/// Exact ground coefficient: a finite Q-linear combination of
/// Q^{h} (log Q)^b eps^e with h half-integral. Terms with eps-exponent
/// above prec() are unknown (dropped by truncation); prec() == kInf
/// means the value is exact.
class Scalar
{
public:
    using Term = std::pair<ScalarKey, Rational>;

    Scalar() = default;
    Scalar(long v);
    Scalar(const Rational &v);

    static Scalar monomial(const Rational &c, ScalarKey key);
    static Scalar eps(int e = 1);
    /// Q^{q2/2}; the unit in Q = 1 mode.
    static Scalar Q(int q2 = 2);
    static Scalar logQ();

    const std::vector<Term> &terms() const { return terms_; }
    int prec() const { return prec_; }
    /// Lowest eps-exponent that may be nonzero, counting the unknown tail.
    int low_eps() const;

    bool is_zero() const { return terms_.empty(); }
    bool droppable() const { return terms_.empty() && prec_ >= kInf; }
    bool exact() const { return prec_ >= kInf; }
    /// True if this is a nonzero rational constant.
    bool is_rational() const;
    Rational rational_part() const;

    Scalar &operator+=(const Scalar &o);
    Scalar &operator-=(const Scalar &o);
    Scalar &operator*=(const Scalar &o) { return *this = *this * o; }
    Scalar &operator*=(const Rational &r);

    friend Scalar operator+(Scalar a, const Scalar &b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar &b) { return a -= b; }
    friend Scalar operator*(const Scalar &a, const Scalar &b);
    friend Scalar operator*(Scalar a, const Rational &r) { return a *= r; }
    friend Scalar operator*(const Rational &r, Scalar a) { return a *= r; }
    Scalar operator-() const;

    /// Sets the precision to min(prec(), p) and drops terms above it.
    Scalar truncated(int p) const;

    /// Inverse; requires a single lowest-eps term that is a unit.
    Scalar inverse() const;

    friend bool operator==(const Scalar &a, const Scalar &b)
    {
        return a.prec_ == b.prec_ && a.terms_ == b.terms_;
    }
    /// Equality of the content known on both sides (up to the smaller
    /// precision).
    bool same_terms(const Scalar &o) const
    {
        const int p = std::min(prec_, o.prec_);
        if (p >= kInf) return terms_ == o.terms_;
        return truncated(p).terms_ == o.truncated(p).terms_;
    }

    std::string str() const;

private:
    void normalize();

    std::vector<Term> terms_;
    int prec_ = kInf;
};

Scalar normalize(const Scalar &s);
std::string render_rational(const Rational &r);

} // namespace eth
