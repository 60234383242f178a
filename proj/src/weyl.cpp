#include "eth/weyl.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

#include "eth/errors.hpp"

namespace eth {

namespace {

Rational binomial(int n, int k)
{
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rational(r);
}

Rational rational_pow(const Rational &base, int e)
{
    Rational r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

} // namespace

// ---------------------------------------------------------------- XPoly

XPoly::XPoly(const Scalar &c)
{
    coeffs_.push_back(c);
    trim();
}

XPoly XPoly::x() { return monomial(Scalar(1L), 1); }

XPoly XPoly::monomial(const Scalar &c, int degree)
{
    XPoly p;
    p.coeffs_.assign(static_cast<std::size_t>(degree) + 1, Scalar());
    p.coeffs_.back() = c;
    p.trim();
    return p;
}

XPoly XPoly::from_coeffs(std::vector<Scalar> coeffs)
{
    XPoly p;
    p.coeffs_ = std::move(coeffs);
    p.trim();
    return p;
}

Scalar XPoly::coeff(int k) const
{
    if (k < 0 || k >= static_cast<int>(coeffs_.size())) return Scalar();
    return coeffs_[static_cast<std::size_t>(k)];
}

void XPoly::trim()
{
    while (!coeffs_.empty() && coeffs_.back().droppable()) coeffs_.pop_back();
    const int cap = truncation().x_degree_cap;
    while (static_cast<int>(coeffs_.size()) - 1 > cap) {
        if (!coeffs_.back().is_zero())
            throw TruncationExhausted("x_degree_cap", "x-degree " + std::to_string(coeffs_.size() - 1) +
                                                          " exceeds cap " + std::to_string(cap));
        coeffs_.pop_back();
    }
}

bool XPoly::is_zero() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Scalar &s) { return s.is_zero(); });
}

bool XPoly::same_terms(const XPoly &o) const
{
    const std::size_t n = std::max(coeffs_.size(), o.coeffs_.size());
    for (std::size_t i = 0; i < n; ++i)
        if (!coeff(static_cast<int>(i)).same_terms(o.coeff(static_cast<int>(i)))) return false;
    return true;
}

XPoly &XPoly::operator+=(const XPoly &o)
{
    if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    trim();
    return *this;
}

XPoly &XPoly::operator-=(const XPoly &o)
{
    if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    trim();
    return *this;
}

XPoly operator*(const XPoly &a, const XPoly &b)
{
    XPoly out;
    if (a.coeffs_.empty() || b.coeffs_.empty()) return out;
    out.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, Scalar());
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i].droppable()) continue;
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
            if (b.coeffs_[j].droppable()) continue;
            out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
    }
    out.trim();
    return out;
}

XPoly operator*(const Scalar &s, const XPoly &p)
{
    XPoly out;
    if (s.droppable()) return out;
    out.coeffs_.reserve(p.coeffs_.size());
    for (const auto &c : p.coeffs_) out.coeffs_.push_back(s * c);
    out.trim();
    return out;
}

XPoly XPoly::operator-() const
{
    XPoly out = *this;
    for (auto &c : out.coeffs_) c = -c;
    return out;
}

XPoly XPoly::derivative() const
{
    XPoly out;
    for (std::size_t i = 1; i < coeffs_.size(); ++i) out.coeffs_.push_back(coeffs_[i] * Rational(static_cast<long>(i)));
    out.trim();
    return out;
}

XPoly XPoly::shifted(const Rational &k) const
{
    if (k == 0 || coeffs_.empty()) return *this;
    XPoly out;
    out.coeffs_.assign(coeffs_.size(), Scalar());
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        if (coeffs_[j].droppable()) continue;
        for (std::size_t i = 0; i <= j; ++i) {
            const int d = static_cast<int>(j - i);
            Rational c = binomial(static_cast<int>(j), static_cast<int>(i)) * rational_pow(k, d);
            if (c == 0) continue;
            out.coeffs_[i] += coeffs_[j] * Scalar::eps(d) * c;
        }
    }
    out.trim();
    return out;
}

XPoly shift_x(const XPoly &p, const Rational &k) { return p.shifted(k); }

XPoly XPoly::inverse() const
{
    const Scalar s = coeff(0);
    if (s.is_zero()) throw PreconditionError("XPoly inverse: vanishing constant term");
    const Scalar s_inv = s.inverse();
    XPoly r = *this - XPoly(s);
    r = r * s_inv;
    XPoly sum(Scalar(1L)), term(Scalar(1L));
    const auto &t = truncation();
    const int max_iter = t.eps_max - t.eps_min + t.x_degree_cap + 4;
    for (int n = 1;; ++n) {
        if (n > max_iter) throw PreconditionError("XPoly inverse: remainder is not eps-nilpotent");
        term = -(term * r);
        sum += term;
        if (term.is_zero()) break;
    }
    return sum * s_inv;
}

std::string XPoly::str() const
{
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i].droppable()) continue;
        if (!first) os << " + ";
        first = false;
        const bool compound = coeffs_[i].terms().size() > 1;
        if (i == 0) {
            os << coeffs_[i].str();
            continue;
        }
        if (compound) os << "(" << coeffs_[i].str() << ")";
        else if (coeffs_[i].str() != "1") os << coeffs_[i].str();
        if (!(coeffs_[i].str() == "1" && !compound)) os << "·";
        os << "x";
        if (i > 1) os << "^" << i;
    }
    return first ? "0" : os.str();
}

XPoly discrete_antiderivative(const XPoly &g)
{
    XPoly f;
    XPoly r = g;
    const Scalar inv_eps = Scalar::eps(-1);
    while (!r.droppable()) {
        const int k = r.degree();
        const Scalar a = r.coeff(k);
        XPoly t = XPoly::monomial(a * inv_eps * Rational(-1, k + 1), k + 1);
        f += t;
        XPoly diff = t - t.shifted(1);
        std::vector<Scalar> rc = r.coeffs();
        for (int i = 0; i < k; ++i) rc[static_cast<std::size_t>(i)] -= diff.coeff(i);
        // the top coefficient cancels by construction
        rc.pop_back();
        r = XPoly::from_coeffs(std::move(rc));
    }
    return f;
}

Rational bernoulli_number(int k)
{
    static std::mutex mu;
    static std::vector<Rational> cache{Rational(1)};
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(cache.size()) <= k) {
        const int m = static_cast<int>(cache.size());
        // sum_{j<=m} C(m+1, j) B_j = 0
        Rational s = 0;
        for (int j = 0; j < m; ++j) s += binomial(m + 1, j) * cache[static_cast<std::size_t>(j)];
        cache.push_back(-s / Rational(m + 1));
    }
    return cache[static_cast<std::size_t>(k)];
}

XPoly bernoulli_apply(const XPoly &g)
{
    XPoly out;
    XPoly deriv = g;
    Rational fact = 1;
    for (int k = 0; !deriv.droppable(); ++k) {
        if (k > 0) fact *= k;
        const Rational b = bernoulli_number(k);
        if (b != 0) out += Scalar::eps(k) * (b / fact) * deriv;
        deriv = deriv.derivative();
    }
    return out;
}

XPoly bernoulli_inverse_apply(const XPoly &g)
{
    XPoly out;
    XPoly deriv = g;
    Rational fact = 1;
    for (int k = 0; !deriv.droppable(); ++k) {
        fact *= (k + 1);
        out += Scalar::eps(k) * (Rational(1) / fact) * deriv;
        deriv = deriv.derivative();
    }
    return out;
}

// ---------------------------------------------------------------- DiffOp

DiffOp::DiffOp(const XPoly &a)
{
    terms_.push_back(a);
    trim();
}

DiffOp DiffOp::D()
{
    DiffOp d;
    d.terms_ = {XPoly(), XPoly(1L)};
    return d;
}

DiffOp DiffOp::from_terms(std::vector<XPoly> terms)
{
    DiffOp d;
    d.terms_ = std::move(terms);
    d.trim();
    return d;
}

XPoly DiffOp::term(int k) const
{
    if (k < 0 || k >= static_cast<int>(terms_.size())) return XPoly();
    return terms_[static_cast<std::size_t>(k)];
}

void DiffOp::trim()
{
    while (!terms_.empty() && terms_.back().droppable()) terms_.pop_back();
}

bool DiffOp::is_zero() const
{
    return std::all_of(terms_.begin(), terms_.end(), [](const XPoly &p) { return p.is_zero(); });
}

bool DiffOp::same_terms(const DiffOp &o) const
{
    const std::size_t n = std::max(terms_.size(), o.terms_.size());
    for (std::size_t i = 0; i < n; ++i)
        if (!term(static_cast<int>(i)).same_terms(o.term(static_cast<int>(i)))) return false;
    return true;
}

DiffOp &DiffOp::operator+=(const DiffOp &o)
{
    if (terms_.size() < o.terms_.size()) terms_.resize(o.terms_.size());
    for (std::size_t i = 0; i < o.terms_.size(); ++i) terms_[i] += o.terms_[i];
    trim();
    return *this;
}

DiffOp &DiffOp::operator-=(const DiffOp &o)
{
    if (terms_.size() < o.terms_.size()) terms_.resize(o.terms_.size());
    for (std::size_t i = 0; i < o.terms_.size(); ++i) terms_[i] -= o.terms_[i];
    trim();
    return *this;
}

DiffOp operator*(const DiffOp &a, const DiffOp &b)
{
    DiffOp out;
    if (a.terms_.empty() || b.terms_.empty()) return out;
    if (a.terms_.size() == 1) {
        // a(x) * sum b_j D^j
        for (const auto &bj : b.terms_) out.terms_.push_back(a.terms_[0] * bj);
        out.trim();
        return out;
    }
    const std::size_t na = a.terms_.size(), nb = b.terms_.size();
    out.terms_.assign(na + nb - 1, XPoly());
    // D^i b = sum_l C(i,l) eps^l b^{(l)} D^{i-l}
    std::vector<std::vector<XPoly>> derivs(nb);
    for (std::size_t j = 0; j < nb; ++j) {
        derivs[j].push_back(b.terms_[j]);
        for (std::size_t l = 1; l < na; ++l) derivs[j].push_back(derivs[j].back().derivative());
    }
    for (std::size_t i = 0; i < na; ++i) {
        if (a.terms_[i].droppable()) continue;
        for (std::size_t j = 0; j < nb; ++j) {
            for (std::size_t l = 0; l <= i; ++l) {
                const XPoly &bl = derivs[j][l];
                if (bl.droppable()) break;
                XPoly prod = a.terms_[i] * bl;
                if (l > 0) prod = Scalar::eps(static_cast<int>(l)) * binomial(static_cast<int>(i), static_cast<int>(l)) * prod;
                out.terms_[i - l + j] += prod;
            }
        }
    }
    out.trim();
    return out;
}

DiffOp operator*(const Scalar &s, const DiffOp &a)
{
    DiffOp out;
    if (s.droppable()) return out;
    for (const auto &t : a.terms_) out.terms_.push_back(s * t);
    out.trim();
    return out;
}

DiffOp DiffOp::operator-() const
{
    DiffOp out = *this;
    for (auto &t : out.terms_) t = -t;
    return out;
}

DiffOp DiffOp::shifted(const Rational &k) const
{
    DiffOp out;
    for (const auto &t : terms_) out.terms_.push_back(t.shifted(k));
    out.trim();
    return out;
}

DiffOp DiffOp::coeff_derivative() const
{
    DiffOp out;
    for (const auto &t : terms_) out.terms_.push_back(t.derivative());
    out.trim();
    return out;
}

DiffOp DiffOp::inverse() const
{
    if (terms_.size() > 1 && !terms_[1].is_zero()) throw PreconditionError("DiffOp inverse: operator has positive order");
    return DiffOp(term(0).inverse());
}

std::string DiffOp::str() const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        if (terms_[k].droppable()) continue;
        if (!first) os << " + ";
        first = false;
        if (k == 0) {
            os << terms_[k].str();
            continue;
        }
        os << "(" << terms_[k].str() << ")·D";
        if (k > 1) os << "^" << k;
    }
    return first ? "0" : os.str();
}

DiffOp sharp(const DiffOp &a)
{
    const DiffOp dsharp = -DiffOp::D() + DiffOp(Scalar::logQ());
    DiffOp out;
    DiffOp power(1L);
    for (int k = 0; k <= a.order(); ++k) {
        if (k > 0) power = power * dsharp;
        const XPoly &ak = a.terms()[static_cast<std::size_t>(k)];
        if (ak.droppable()) continue;
        out += power * DiffOp(ak);
    }
    return out;
}

} // namespace eth
