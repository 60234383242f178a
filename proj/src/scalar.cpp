#include "eth/scalar.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "eth/errors.hpp"

namespace eth {

Scalar::Scalar(long v) : Scalar(Rational(v)) {}

Scalar::Scalar(const Rational &v)
{
    if (v != 0) terms_.emplace_back(ScalarKey{}, v);
    normalize();
}

Scalar Scalar::monomial(const Rational &c, ScalarKey key)
{
    Scalar s;
    if (c != 0) s.terms_.emplace_back(key, c);
    s.normalize();
    return s;
}

Scalar Scalar::eps(int e) { return monomial(1, ScalarKey{e, 0, 0}); }

Scalar Scalar::Q(int q2)
{
    if (truncation().unit_q) return Scalar(1L);
    return monomial(1, ScalarKey{0, q2, 0});
}

Scalar Scalar::logQ()
{
    if (truncation().unit_q) return Scalar();
    return monomial(1, ScalarKey{0, 0, 1});
}

int Scalar::low_eps() const
{
    int low = prec_ >= kInf ? kInf : prec_ + 1;
    if (!terms_.empty()) low = std::min(low, terms_.front().first.eps);
    return low;
}

bool Scalar::is_rational() const
{
    return terms_.size() == 1 && terms_.front().first == ScalarKey{} && exact();
}

Rational Scalar::rational_part() const
{
    for (const auto &[k, c] : terms_)
        if (k == ScalarKey{}) return c;
    return 0;
}

void Scalar::normalize()
{
    const auto &t = truncation();
    std::sort(terms_.begin(), terms_.end(), [](const Term &a, const Term &b) { return a.first < b.first; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto &term : terms_) {
        if (!out.empty() && out.back().first == term.first)
            out.back().second += term.second;
        else
            out.push_back(std::move(term));
    }
    // drop zeros, unknown terms, and terms beyond the global eps window
    std::vector<Term> kept;
    kept.reserve(out.size());
    for (auto &term : out) {
        if (term.second == 0 || term.first.eps > prec_) continue;
        if (term.first.eps > t.eps_max) {
            prec_ = std::min(prec_, t.eps_max);
            continue;
        }
        kept.push_back(std::move(term));
    }
    terms_ = std::move(kept);
    if (!terms_.empty() && terms_.front().first.eps < t.eps_min)
        throw TruncationExhausted("eps_window", "eps-exponent " + std::to_string(terms_.front().first.eps) +
                                                    " below eps_min " + std::to_string(t.eps_min));
    if (prec_ < t.eps_min)
        throw TruncationExhausted("eps_window", "eps precision collapsed to " + std::to_string(prec_));
}

Scalar &Scalar::operator+=(const Scalar &o)
{
    prec_ = std::min(prec_, o.prec_);
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    normalize();
    return *this;
}

Scalar &Scalar::operator-=(const Scalar &o)
{
    prec_ = std::min(prec_, o.prec_);
    for (const auto &[k, c] : o.terms_) terms_.emplace_back(k, -c);
    normalize();
    return *this;
}

Scalar &Scalar::operator*=(const Rational &r)
{
    if (r == 0) {
        terms_.clear();
        return *this;
    }
    for (auto &term : terms_) term.second *= r;
    return *this;
}

Scalar operator*(const Scalar &a, const Scalar &b)
{
    Scalar out;
    auto side = [](int prec, int low) { return prec >= kInf ? kInf : sat_add(prec, low); };
    out.prec_ = std::min(side(a.prec_, b.low_eps()), side(b.prec_, a.low_eps()));
    if (a.terms_.size() == 1 && b.terms_.size() == 1) {
        const auto &[ka, ca] = a.terms_.front();
        const auto &[kb, cb] = b.terms_.front();
        ScalarKey k{ka.eps + kb.eps, ka.q2 + kb.q2, ka.logq + kb.logq};
        if (k.eps <= out.prec_) out.terms_.emplace_back(k, ca * cb);
        out.normalize();
        return out;
    }
    std::map<ScalarKey, Rational> acc;
    for (const auto &[ka, ca] : a.terms_)
        for (const auto &[kb, cb] : b.terms_) {
            ScalarKey k{ka.eps + kb.eps, ka.q2 + kb.q2, ka.logq + kb.logq};
            if (k.eps > out.prec_) continue;
            acc[k] += ca * cb;
        }
    for (auto &[k, c] : acc)
        if (c != 0) out.terms_.emplace_back(k, std::move(c));
    out.normalize();
    return out;
}

Scalar Scalar::operator-() const
{
    Scalar s = *this;
    for (auto &term : s.terms_) term.second = -term.second;
    return s;
}

Scalar Scalar::truncated(int p) const
{
    Scalar s = *this;
    s.prec_ = std::min(s.prec_, p);
    s.normalize();
    return s;
}

Scalar Scalar::inverse() const
{
    if (terms_.empty()) throw PreconditionError("inverse of a zero scalar");
    const auto &[k0, c0] = terms_.front();
    if (k0.logq != 0) throw PreconditionError("inverse: leading term contains log Q");
    Scalar lead_inv = monomial(1 / c0, ScalarKey{-k0.eps, -k0.q2, 0});
    if (terms_.size() == 1 && exact()) return lead_inv;
    for (std::size_t i = 1; i < terms_.size(); ++i)
        if (terms_[i].first.eps == k0.eps)
            throw PreconditionError("inverse: leading eps-order is not a monomial unit");
    // this = lead * (1 + rest), rest of strictly positive eps-order
    Scalar rest = *this * lead_inv - Scalar(1L);
    Scalar sum(1L), power(1L);
    const int max_iter = truncation().eps_max - truncation().eps_min + 2;
    for (int i = 1; i <= max_iter; ++i) {
        power = power * rest;
        power = -power;
        if (power.is_zero()) {
            sum += power;
            break;
        }
        sum += power;
    }
    return sum * lead_inv;
}

Scalar normalize(const Scalar &s) { return s.truncated(kInf); }

std::string render_rational(const Rational &r)
{
    return r.get_str();
}

namespace {
std::string exponent(int v)
{
    return "{" + std::to_string(v) + "}";
}
} // namespace

std::string Scalar::str() const
{
    if (terms_.empty()) return exact() ? "0" : "O(eps^" + exponent(prec_ + 1) + ")";
    std::ostringstream os;
    bool first = true;
    for (const auto &[k, c] : terms_) {
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        Rational a = abs(c);
        bool have = false;
        auto sep = [&] {
            if (have) os << "·";
            have = true;
        };
        if (a != 1 || (k.q2 == 0 && k.logq == 0 && k.eps == 0)) {
            sep();
            os << render_rational(a);
        }
        if (k.q2 != 0) {
            sep();
            os << "Q^";
            if (k.q2 % 2 == 0) os << exponent(k.q2 / 2);
            else os << "{" << k.q2 << "/2}";
        }
        if (k.logq != 0) {
            sep();
            os << "logQ^" << k.logq;
        }
        if (k.eps != 0) {
            sep();
            os << "eps^" << exponent(k.eps);
        }
    }
    if (!exact()) os << " + O(eps^" << exponent(prec_ + 1) << ")";
    return os.str();
}

} // namespace eth
