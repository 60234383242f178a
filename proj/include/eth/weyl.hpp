#pragma once

#include <string>
#include <vector>

#include "eth/scalar.hpp"

namespace eth {

/// Polynomial in x over Scalar, dense by degree. Degree is bounded by
/// truncation().x_degree_cap; exceeding it is an error, never a silent cut.
class XPoly
{
public:
    XPoly() = default;
    XPoly(const Scalar &c);
    XPoly(long c) : XPoly(Scalar(c)) {}

    static XPoly x();
    static XPoly monomial(const Scalar &c, int degree);
    static XPoly from_coeffs(std::vector<Scalar> coeffs);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Scalar> &coeffs() const { return coeffs_; }
    Scalar coeff(int k) const;

    bool is_zero() const;
    bool droppable() const { return coeffs_.empty(); }
    bool is_constant() const { return coeffs_.size() <= 1; }

    XPoly &operator+=(const XPoly &o);
    XPoly &operator-=(const XPoly &o);
    friend XPoly operator+(XPoly a, const XPoly &b) { return a += b; }
    friend XPoly operator-(XPoly a, const XPoly &b) { return a -= b; }
    friend XPoly operator*(const XPoly &a, const XPoly &b);
    friend XPoly operator*(const Scalar &s, const XPoly &p);
    friend XPoly operator*(const XPoly &p, const Scalar &s) { return s * p; }
    XPoly operator-() const;

    /// d/dx.
    XPoly derivative() const;
    /// p(x + k eps) for rational k.
    XPoly shifted(const Rational &k) const;
    /// Multiplicative inverse as an eps-series; needs a unit constant term
    /// and a remainder of positive eps-order.
    XPoly inverse() const;

    friend bool operator==(const XPoly &a, const XPoly &b) { return a.coeffs_ == b.coeffs_; }
    bool same_terms(const XPoly &o) const;

    std::string str() const;

private:
    void trim();
    std::vector<Scalar> coeffs_;
};

XPoly shift_x(const XPoly &p, const Rational &k);

/// f with f(x) - f(x + eps) = g and zero constant term.
XPoly discrete_antiderivative(const XPoly &g);

/// eps d/dx / (e^{eps d/dx} - 1) applied to g.
XPoly bernoulli_apply(const XPoly &g);

/// (e^{eps d/dx} - 1) / (eps d/dx) applied to g; inverse of bernoulli_apply.
XPoly bernoulli_inverse_apply(const XPoly &g);

/// Bernoulli number B_k with B_1 = -1/2.
Rational bernoulli_number(int k);

/// Differential operator sum_k a_k(x) D^k with D = eps d/dx and
/// [D, x] = eps.
class DiffOp
{
public:
    DiffOp() = default;
    DiffOp(const XPoly &a);
    DiffOp(const Scalar &s) : DiffOp(XPoly(s)) {}
    DiffOp(long c) : DiffOp(XPoly(c)) {}

    /// The generator D = eps d/dx.
    static DiffOp D();
    static DiffOp from_terms(std::vector<XPoly> terms);

    int order() const { return static_cast<int>(terms_.size()) - 1; }
    const std::vector<XPoly> &terms() const { return terms_; }
    XPoly term(int k) const;

    bool is_zero() const;
    bool droppable() const { return terms_.empty(); }
    bool is_function() const { return terms_.size() <= 1; }

    DiffOp &operator+=(const DiffOp &o);
    DiffOp &operator-=(const DiffOp &o);
    friend DiffOp operator+(DiffOp a, const DiffOp &b) { return a += b; }
    friend DiffOp operator-(DiffOp a, const DiffOp &b) { return a -= b; }
    friend DiffOp operator*(const DiffOp &a, const DiffOp &b);
    friend DiffOp operator*(const Scalar &s, const DiffOp &a);
    friend DiffOp operator*(const DiffOp &a, const Scalar &s) { return s * a; }
    DiffOp operator-() const;

    /// Coefficient-wise x-shift x -> x + k eps (commutes with D).
    DiffOp shifted(const Rational &k) const;
    /// Coefficient-wise d/dx (not the commutator with d/dx's action).
    DiffOp coeff_derivative() const;
    DiffOp inverse() const;

    friend bool operator==(const DiffOp &a, const DiffOp &b) { return a.terms_ == b.terms_; }
    bool same_terms(const DiffOp &o) const;

    std::string str() const;

private:
    void trim();
    std::vector<XPoly> terms_;
};

/// Antiinvolution: D -> -D + log Q, x -> x, order reversing.
DiffOp sharp(const DiffOp &a);

// Uniform ring interface used by the series templates.
inline DiffOp shift_x(const DiffOp &a, const Rational &k) { return a.shifted(k); }
inline DiffOp coeff_dx(const DiffOp &a) { return a.coeff_derivative(); }
inline XPoly coeff_dx(const XPoly &a) { return a.derivative(); }
inline DiffOp inverse(const DiffOp &a) { return a.inverse(); }
inline XPoly inverse(const XPoly &a) { return a.inverse(); }
inline Scalar inverse(const Scalar &a) { return a.inverse(); }
inline Scalar shift_x(const Scalar &a, const Rational &) { return a; }
inline Scalar sharp(const Scalar &a) { return a; }
inline XPoly sharp(const XPoly &a) { return a; }
inline Scalar coeff_dx(const Scalar &) { return Scalar(); }

} // namespace eth
