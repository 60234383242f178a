#include "eth/time_series.hpp"

#include <algorithm>
#include <functional>

namespace eth {

std::string TimeVar::name() const
{
    const char *prefix = role == 1 ? "xb" : role == 2 ? "y" : "q";
    if (alpha < 0) return std::string(prefix) + "_" + std::to_string(n);
    return std::string(prefix) + "_{" + std::to_string(n) + "," + std::to_string(alpha) + "}";
}

std::shared_ptr<const TimeVars> TimeVars::single(int n_max, int degree, DegreeWeighting weighting)
{
    if (n_max < 0) throw PreconditionError("TimeVars: negative n_max");
    auto v = std::make_shared<TimeVars>();
    v->n_max_ = n_max;
    for (int n = 0; n <= n_max; ++n) {
        for (int alpha = 0; alpha <= 1; ++alpha) {
            if (n == 0 && alpha == 0) continue;
            TimeVar t{n, alpha, 0, 0, 0};
            if (alpha == 1) {
                t.miwa = n + 1;
                t.miwa_coeff = detail::factorial(n);
            }
            v->vars_.push_back(t);
        }
    }
    if (v->size() > kMaxVars) throw PreconditionError("TimeVars: too many times");
    DegreeBound b;
    b.cap = degree;
    for (const auto &t : v->vars_)
        b.weights.push_back(weighting == DegreeWeighting::Total ? 1 : (t.alpha == 1 ? t.n + 1 : t.n));
    v->bounds_.push_back(b);
    return v;
}

std::shared_ptr<const TimeVars> TimeVars::kdv(int n_max, int degree, DegreeWeighting weighting)
{
    if (n_max < 0) throw PreconditionError("TimeVars: negative n_max");
    auto v = std::make_shared<TimeVars>();
    v->n_max_ = n_max;
    for (int n = 0; n <= n_max; ++n) {
        // displacement (2n-1)!! (2 lambda)^{-1/2-n} eps = (2n-1)!! mu^{-2n-1} eps
        Rational df = 1;
        for (int k = 2 * n - 1; k > 1; k -= 2) df *= k;
        v->vars_.push_back(TimeVar{n, -1, 0, 2 * n + 1, df});
    }
    if (v->size() > kMaxVars) throw PreconditionError("TimeVars: too many times");
    DegreeBound b;
    b.cap = degree;
    for (const auto &t : v->vars_) b.weights.push_back(weighting == DegreeWeighting::Total ? 1 : 2 * t.n + 1);
    v->bounds_.push_back(b);
    return v;
}

std::shared_ptr<const TimeVars> TimeVars::bilinear(const TimeVars &single, int y_degree)
{
    if (single.bilinear_) throw PreconditionError("TimeVars: already bilinear");
    auto v = std::make_shared<TimeVars>();
    v->n_max_ = single.n_max_;
    v->bilinear_ = true;
    const int nv = single.size();
    if (2 * nv > kMaxVars) throw PreconditionError("TimeVars: too many times");
    for (auto t : single.vars_) {
        t.role = 1;
        v->vars_.push_back(t);
    }
    for (auto t : single.vars_) {
        t.role = 2;
        v->vars_.push_back(t);
    }
    for (const auto &b : single.bounds_) {
        DegreeBound d;
        d.cap = b.cap;
        d.weights = b.weights;
        d.weights.insert(d.weights.end(), b.weights.begin(), b.weights.end());
        v->bounds_.push_back(d);
    }
    DegreeBound y;
    y.cap = y_degree;
    y.weights.assign(static_cast<std::size_t>(nv), 0);
    y.weights.insert(y.weights.end(), static_cast<std::size_t>(nv), 1);
    v->bounds_.push_back(y);
    return v;
}

std::shared_ptr<const TimeVars> TimeVars::with_caps(const std::vector<int> &caps) const
{
    if (caps.size() != bounds_.size()) throw PreconditionError("TimeVars::with_caps: bound count mismatch");
    auto v = std::make_shared<TimeVars>(*this);
    for (std::size_t i = 0; i < caps.size(); ++i) v->bounds_[i].cap = std::min(v->bounds_[i].cap, caps[i]);
    return v;
}

std::shared_ptr<const TimeVars> TimeVars::after_derivative(int index) const
{
    auto v = std::make_shared<TimeVars>(*this);
    for (auto &b : v->bounds_) b.cap -= b.weights[static_cast<std::size_t>(index)];
    return v;
}

std::vector<int> TimeVars::caps() const
{
    std::vector<int> c;
    for (const auto &b : bounds_) c.push_back(b.cap);
    return c;
}

bool TimeVars::same_shape(const TimeVars &o) const
{
    if (!(vars_ == o.vars_) || bounds_.size() != o.bounds_.size()) return false;
    for (std::size_t i = 0; i < bounds_.size(); ++i)
        if (bounds_[i].weights != o.bounds_[i].weights) return false;
    return true;
}

std::shared_ptr<const TimeVars> TimeVars::meet(const std::shared_ptr<const TimeVars> &a,
                                               const std::shared_ptr<const TimeVars> &b)
{
    if (a == b || *a == *b) return a;
    if (!a->same_shape(*b)) throw PreconditionError("time series over incompatible variable sets");
    bool a_finer = true, b_finer = true;
    for (std::size_t i = 0; i < a->bounds_.size(); ++i) {
        if (a->bounds_[i].cap > b->bounds_[i].cap) a_finer = false;
        if (b->bounds_[i].cap > a->bounds_[i].cap) b_finer = false;
    }
    if (a_finer) return a;
    if (b_finer) return b;
    return a->with_caps(b->caps());
}

int TimeVars::index(int n, int alpha, int role) const
{
    for (int i = 0; i < size(); ++i) {
        const auto &t = vars_[static_cast<std::size_t>(i)];
        if (t.n == n && t.alpha == alpha && t.role == role) return i;
    }
    return -1;
}

bool TimeVars::admissible(const Monomial &m) const
{
    for (int i = size(); i < kMaxVars; ++i)
        if (m[static_cast<std::size_t>(i)] != 0) return false;
    for (const auto &b : bounds_) {
        int w = 0;
        for (std::size_t i = 0; i < b.weights.size(); ++i) w += b.weights[i] * m[i];
        if (w > b.cap) return false;
    }
    return true;
}

std::vector<Monomial> TimeVars::all_monomials() const
{
    std::vector<Monomial> out;
    Monomial m{};
    std::function<void(int)> rec = [&](int i) {
        if (i == size()) {
            out.push_back(m);
            return;
        }
        auto &e = m[static_cast<std::size_t>(i)];
        for (e = 0;; ++e) {
            if (!admissible(m)) break;
            rec(i + 1);
        }
        e = 0;
    };
    rec(0);
    return out;
}

int TimeVars::miwa_slack(const Monomial &m) const
{
    // Any gamma with m + gamma inadmissible violates some bound b, so
    // w_b . gamma >= need_b and its lambda-weight is at least need_b * r_b.
    // Times beyond n_max are not tracked; a displacement reaching the first
    // untracked time's weight is unknown as well.
    int best = kInf;
    int top = 0;
    bool kdv_times = false;
    for (const auto &t : vars_) {
        top = std::max(top, t.miwa);
        if (t.alpha < 0) kdv_times = true;
    }
    if (top > 0) best = top + (kdv_times ? 2 : 1);
    for (const auto &b : bounds_) {
        int used = 0;
        for (std::size_t i = 0; i < b.weights.size(); ++i) used += b.weights[i] * m[i];
        const int need = b.cap - used + 1;
        Rational ratio;
        bool any = false;
        for (int i = 0; i < size(); ++i) {
            const auto &t = vars_[static_cast<std::size_t>(i)];
            const int w = b.weights[static_cast<std::size_t>(i)];
            if (t.miwa <= 0 || w <= 0) continue;
            const Rational r(t.miwa, w);
            if (!any || r < ratio) ratio = r;
            any = true;
        }
        if (!any) continue;
        Rational lower = ratio * need;
        mpz_class c;
        mpz_cdiv_q(c.get_mpz_t(), lower.get_num_mpz_t(), lower.get_den_mpz_t());
        best = std::min(best, static_cast<int>(c.get_si()));
    }
    return best;
}

std::string TimeVars::monomial_str(const Monomial &m) const
{
    std::string s;
    for (int i = 0; i < size(); ++i) {
        const int e = m[static_cast<std::size_t>(i)];
        if (e == 0) continue;
        if (!s.empty()) s += " ";
        s += vars_[static_cast<std::size_t>(i)].name();
        if (e > 1) s += "^" + std::to_string(e);
    }
    return s.empty() ? "1" : s;
}

Rational multinomial_factorial(const Monomial &m)
{
    Rational r = 1;
    for (auto e : m) r *= detail::factorial(e);
    return r;
}

} // namespace eth
