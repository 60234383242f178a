#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "eth/errors.hpp"
#include "eth/shift_algebra.hpp"

namespace eth {

inline constexpr int kMaxVars = 24;
using Monomial = std::array<std::uint8_t, kMaxVars>;

/// One time variable. role 0: q; 1: xbar; 2: y. KdV times have alpha = -1.
/// The Miwa displacement of the variable is sign * miwa_coeff * eps *
/// g^{-miwa} for the spectral generator g (lambda, or mu for KdV).
struct TimeVar
{
    int n = 0;
    int alpha = 0;
    int role = 0;
    int miwa = 0;
    Rational miwa_coeff = 0;

    std::string name() const;
    friend bool operator==(const TimeVar &a, const TimeVar &b)
    {
        return a.n == b.n && a.alpha == b.alpha && a.role == b.role;
    }
};

/// Monomials must satisfy sum_i weights[i] * alpha_i <= cap.
struct DegreeBound
{
    std::vector<int> weights;
    int cap = 0;
    friend bool operator==(const DegreeBound &, const DegreeBound &) = default;
};

enum class DegreeWeighting {
    Total,   // every time has weight 1
    Lambda,  // weight = lambda-degree: q_{n,0} -> n, q_{n,1} -> n + 1 (KdV q_n -> 2n + 1)
};

/// Variable set {q_{n,i}} without q_{0,0}: everything depends on q_{0,0}
/// only through x + q_{0,0}, so d/dq_{0,0} is d/dx.
class TimeVars
{
public:
    static std::shared_ptr<const TimeVars> single(int n_max, int degree,
                                                  DegreeWeighting weighting = DegreeWeighting::Total);
    /// KdV times q_0 .. q_{n_max}.
    static std::shared_ptr<const TimeVars> kdv(int n_max, int degree,
                                               DegreeWeighting weighting = DegreeWeighting::Total);
    /// (xbar, y) = ((q' + q'')/2, (q' - q'')/2), y-degree capped by y_degree.
    static std::shared_ptr<const TimeVars> bilinear(const TimeVars &single, int y_degree);
    /// Same variables, cap i replaced by min(cap_i, caps[i]).
    std::shared_ptr<const TimeVars> with_caps(const std::vector<int> &caps) const;
    /// Caps after one d/d(var index): each cap drops by that variable's weight.
    std::shared_ptr<const TimeVars> after_derivative(int index) const;
    /// Common refinement of two variable sets differing only in caps.
    static std::shared_ptr<const TimeVars> meet(const std::shared_ptr<const TimeVars> &a,
                                                const std::shared_ptr<const TimeVars> &b);

    int size() const { return static_cast<int>(vars_.size()); }
    const TimeVar &var(int i) const { return vars_[static_cast<std::size_t>(i)]; }
    const std::vector<TimeVar> &vars() const { return vars_; }
    const std::vector<DegreeBound> &bounds() const { return bounds_; }
    std::vector<int> caps() const;
    int n_max() const { return n_max_; }
    bool is_bilinear() const { return bilinear_; }
    /// Index of q_{n,alpha} (role 0/1/2), -1 if absent. KdV: alpha = -1.
    int index(int n, int alpha, int role = 0) const;

    bool admissible(const Monomial &m) const;
    std::vector<Monomial> all_monomials() const;
    /// Smallest spectral weight of a Miwa displacement that pushes m out of
    /// range or involves an untracked time; kInf if none can.
    int miwa_slack(const Monomial &m) const;

    bool same_shape(const TimeVars &o) const;
    friend bool operator==(const TimeVars &a, const TimeVars &b)
    {
        return a.vars_ == b.vars_ && a.bounds_ == b.bounds_;
    }

    std::string monomial_str(const Monomial &m) const;

private:
    std::vector<TimeVar> vars_;
    std::vector<DegreeBound> bounds_;
    int n_max_ = 0;
    bool bilinear_ = false;
};

using VarsPtr = std::shared_ptr<const TimeVars>;

inline int total_degree(const Monomial &m)
{
    int d = 0;
    for (auto e : m) d += e;
    return d;
}

Rational multinomial_factorial(const Monomial &m);

/// Truncated power series in the times with coefficients in C.
/// Missing admissible monomials are exactly zero; inadmissible monomials
/// are unknown. Mixing series whose caps differ works on the common
/// (smaller) admissible set.
template <class C>
class TimeSeries
{
public:
    using Coeff = C;

    TimeSeries() = default;
    explicit TimeSeries(VarsPtr vars) : vars_(std::move(vars)) {}
    TimeSeries(VarsPtr vars, const C &constant) : vars_(std::move(vars)) { set(Monomial{}, constant); }

    static TimeSeries variable(VarsPtr vars, int index, const C &coeff = C(1L))
    {
        TimeSeries s(std::move(vars));
        Monomial m{};
        m[static_cast<std::size_t>(index)] = 1;
        s.set(m, coeff);
        return s;
    }

    const VarsPtr &vars() const { return vars_; }
    const std::map<Monomial, C> &terms() const { return terms_; }
    C coeff(const Monomial &m) const
    {
        auto it = terms_.find(m);
        return it == terms_.end() ? C() : it->second;
    }
    C constant() const { return coeff(Monomial{}); }
    bool known(const Monomial &m) const { return vars_->admissible(m); }

    void set(const Monomial &m, C c)
    {
        if (!vars_->admissible(m)) return;
        if (c.droppable()) terms_.erase(m);
        else terms_[m] = std::move(c);
    }
    void add_to(const Monomial &m, const C &c)
    {
        if (c.droppable() || !vars_->admissible(m)) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) terms_.emplace(m, c);
        else {
            it->second += c;
            if (it->second.droppable()) terms_.erase(it);
        }
    }

    bool is_zero() const
    {
        for (const auto &[m, c] : terms_)
            if (!c.is_zero()) return false;
        return true;
    }

    TimeSeries &operator+=(const TimeSeries &o)
    {
        adopt_meet(o);
        for (const auto &[m, c] : o.terms_) add_to(m, c);
        return *this;
    }
    TimeSeries &operator-=(const TimeSeries &o)
    {
        adopt_meet(o);
        for (const auto &[m, c] : o.terms_) add_to(m, -c);
        return *this;
    }
    friend TimeSeries operator+(TimeSeries a, const TimeSeries &b) { return a += b; }
    friend TimeSeries operator-(TimeSeries a, const TimeSeries &b) { return a -= b; }
    TimeSeries operator-() const
    {
        TimeSeries s = *this;
        for (auto &[m, c] : s.terms_) c = -c;
        return s;
    }

    friend TimeSeries operator*(const TimeSeries &a, const TimeSeries &b)
    {
        TimeSeries out(TimeVars::meet(a.vars_, b.vars_));
        std::map<Monomial, C> acc;
        for (const auto &[ma, ca] : a.terms_) {
            for (const auto &[mb, cb] : b.terms_) {
                Monomial m;
                for (std::size_t i = 0; i < static_cast<std::size_t>(kMaxVars); ++i)
                    m[i] = static_cast<std::uint8_t>(ma[i] + mb[i]);
                if (!out.vars_->admissible(m)) continue;
                C prod = ca * cb;
                auto it = acc.find(m);
                if (it == acc.end()) acc.emplace(m, std::move(prod));
                else it->second += prod;
            }
        }
        for (auto &[m, c] : acc)
            if (!c.droppable()) out.terms_.emplace(m, std::move(c));
        return out;
    }

    friend TimeSeries operator*(const Scalar &s, const TimeSeries &a)
    {
        TimeSeries out(a.vars_);
        for (const auto &[m, c] : a.terms_) out.set(m, s * c);
        return out;
    }
    /// Right and left multiplication by a time-independent coefficient.
    TimeSeries mul_right(const C &c) const
    {
        TimeSeries out(vars_);
        for (const auto &[m, a] : terms_) out.set(m, a * c);
        return out;
    }
    TimeSeries mul_left(const C &c) const
    {
        TimeSeries out(vars_);
        for (const auto &[m, a] : terms_) out.set(m, c * a);
        return out;
    }

    template <class F>
    auto map_coeffs(F &&f) const
    {
        using R = std::decay_t<decltype(f(std::declval<const C &>()))>;
        TimeSeries<R> out(vars_);
        for (const auto &[m, c] : terms_) out.set(m, f(c));
        return out;
    }

    /// d/d(var index); the result is known on correspondingly smaller caps.
    TimeSeries derivative(int index) const
    {
        TimeSeries out(vars_->after_derivative(index));
        const auto i = static_cast<std::size_t>(index);
        for (const auto &[m, c] : terms_) {
            if (m[i] == 0) continue;
            Monomial r = m;
            --r[i];
            out.add_to(r, Scalar(static_cast<long>(m[i])) * c);
        }
        return out;
    }

    /// Re-express on a variable set with the same variables but other caps.
    /// Monomials newly admitted by larger caps stay zero, so use only to
    /// tighten or to embed exact (polynomial) data.
    TimeSeries with_vars(VarsPtr vars) const
    {
        TimeSeries out(std::move(vars));
        for (const auto &[m, c] : terms_) out.set(m, c);
        return out;
    }

    /// Homogeneous part of total degree d.
    TimeSeries degree_part(int d) const
    {
        TimeSeries out(vars_);
        for (const auto &[m, c] : terms_)
            if (total_degree(m) == d) out.terms_.emplace(m, c);
        return out;
    }

    bool agrees_with(const TimeSeries &o) const
    {
        const VarsPtr common = TimeVars::meet(vars_, o.vars_);
        for (const auto &[m, c] : terms_)
            if (common->admissible(m) && !c.same_terms(o.coeff(m))) return false;
        for (const auto &[m, c] : o.terms_)
            if (common->admissible(m) && !c.same_terms(coeff(m))) return false;
        return true;
    }
    bool same_terms(const TimeSeries &o) const { return agrees_with(o); }

    friend bool operator==(const TimeSeries &a, const TimeSeries &b)
    {
        return *a.vars_ == *b.vars_ && a.terms_ == b.terms_;
    }

    std::string str() const
    {
        std::ostringstream os;
        bool first = true;
        for (const auto &[m, c] : terms_) {
            if (c.is_zero()) continue;
            if (!first) os << "\n";
            first = false;
            os << "[" << vars_->monomial_str(m) << "] " << c.str();
        }
        if (first) os << "0";
        return os.str();
    }

private:
    void adopt_meet(const TimeSeries &o)
    {
        if (vars_ == o.vars_) return;
        VarsPtr m = TimeVars::meet(vars_, o.vars_);
        if (!(*m == *vars_)) {
            for (auto it = terms_.begin(); it != terms_.end();) {
                if (!m->admissible(it->first)) it = terms_.erase(it);
                else ++it;
            }
        }
        vars_ = std::move(m);
    }

    VarsPtr vars_;
    std::map<Monomial, C> terms_;
};

template <class C>
std::size_t loop_bound_for_exp()
{
    const auto &t = truncation();
    return static_cast<std::size_t>(t.eps_max - t.eps_min + 2 * t.lambda_window + 2 * t.Lambda_window + t.x_degree_cap + 64);
}

/// exp(f) = sum f^k / k!; f must be topologically nilpotent.
template <class C>
TimeSeries<C> ts_exp(const TimeSeries<C> &f)
{
    TimeSeries<C> sum(f.vars(), C(1L));
    TimeSeries<C> term(f.vars(), C(1L));
    const std::size_t bound = loop_bound_for_exp<C>();
    for (std::size_t k = 1;; ++k) {
        if (k > bound) throw PreconditionError("ts_exp: argument is not nilpotent in the truncation");
        term = Scalar(Rational(1, static_cast<long>(k))) * (term * f);
        sum += term;
        if (term.is_zero()) break;
    }
    return sum;
}

/// log(f); the constant coefficient of f must be 1.
template <class C>
TimeSeries<C> ts_log(const TimeSeries<C> &f)
{
    const TimeSeries<C> g = f - TimeSeries<C>(f.vars(), C(1L));
    TimeSeries<C> sum(f.vars());
    TimeSeries<C> power(f.vars(), C(1L));
    const std::size_t bound = loop_bound_for_exp<C>();
    for (std::size_t k = 1;; ++k) {
        if (k > bound) throw PreconditionError("ts_log: argument is not 1 + nilpotent");
        power = power * g;
        const Rational c(k % 2 == 1 ? 1 : -1, static_cast<long>(k));
        sum += Scalar(c) * power;
        if (power.is_zero()) break;
    }
    return sum;
}

/// f^{-1} = c^{-1} sum (-g c^{-1})^k with f = c + g, c the constant term.
template <class C>
TimeSeries<C> ts_inverse(const TimeSeries<C> &f)
{
    const C c = f.constant();
    const C c_inv = inverse(c);
    TimeSeries<C> g = f;
    g.set(Monomial{}, C());
    const TimeSeries<C> step = -(g.mul_right(c_inv));
    TimeSeries<C> sum(f.vars(), C(1L));
    TimeSeries<C> power(f.vars(), C(1L));
    for (int k = 1; k <= kMaxVars * 64; ++k) {
        power = power * step;
        sum += power;
        if (power.is_zero()) break;
    }
    return sum.mul_left(c_inv);
}

/// f(q +- [g^{-1}]) for a new spectral generator g: each variable moves by
/// sign * miwa_coeff * eps * g^{-miwa}. Each coefficient carries the
/// g-window on which truncation in q leaves it exact (full when f is known
/// to be a polynomial).
template <class C>
TimeSeries<LambdaSeries<C>> miwa_shift(const TimeSeries<C> &f, int sign, bool polynomial = false);
/// Same with the result in a chosen series kind (Mu for KdV times).
template <SeriesKind K, class C>
TimeSeries<Laurent<C, K>> miwa_shift_as(const TimeSeries<C> &f, int sign, bool polynomial = false);

/// Same displacement, but in the generator the coefficients of f already
/// use; top bounds the generator degrees of the (possibly unknown)
/// coefficients of f.
template <class X>
TimeSeries<LambdaSeries<X>> miwa_shift_same(const TimeSeries<LambdaSeries<X>> &f, int sign, int top,
                                            bool polynomial = false);

/// f(xbar + y) (sign = +1) or f(xbar - y) (sign = -1) on bilinear variables.
template <class C>
TimeSeries<C> bilinear_substitute(const TimeSeries<C> &f, VarsPtr bilinear, int sign);

/// f(xbar + y) g(xbar - y).
template <class C>
TimeSeries<C> bilinear_split(const TimeSeries<C> &f, const TimeSeries<C> &g, VarsPtr bilinear)
{
    return bilinear_substitute(f, bilinear, +1) * bilinear_substitute(g, bilinear, -1);
}

template <class C, class F>
auto ts_map(const TimeSeries<C> &f, F &&fn)
{
    return f.map_coeffs(std::forward<F>(fn));
}

template <class C>
TimeSeries<C> shift_x(const TimeSeries<C> &f, const Rational &k)
{
    return f.map_coeffs([&](const C &c) { return shift_x(c, k); });
}

template <class C>
TimeSeries<C> sharp(const TimeSeries<C> &f)
{
    return f.map_coeffs([](const C &c) { return sharp(c); });
}

template <class C>
TimeSeries<C> coeff_dx(const TimeSeries<C> &f)
{
    return f.map_coeffs([](const C &c) { return coeff_dx(c); });
}

// ------------------------------------------------------------ implementation

namespace detail {

inline Rational binom(int n, int k)
{
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rational(r);
}

inline Rational factorial(int n)
{
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return Rational(r);
}

} // namespace detail

namespace detail {

/// Calls fn(beta, coef, eps_power, weight) for every expansion term of the
/// Miwa displacement of monomial alpha.
template <class F>
void for_each_miwa_term(const TimeVars &vars, const Monomial &alpha, int sign, F &&fn)
{
    std::vector<int> shiftable;
    for (int i = 0; i < vars.size(); ++i)
        if (vars.var(i).miwa > 0 && alpha[static_cast<std::size_t>(i)] > 0) shiftable.push_back(i);
    std::vector<int> gamma(shiftable.size(), 0);
    while (true) {
        Monomial beta = alpha;
        Rational coef = 1;
        int eps_pow = 0, weight = 0;
        for (std::size_t s = 0; s < shiftable.size(); ++s) {
            const auto i = static_cast<std::size_t>(shiftable[s]);
            const int g = gamma[s];
            if (g == 0) continue;
            const TimeVar &v = vars.var(shiftable[s]);
            beta[i] = static_cast<std::uint8_t>(beta[i] - g);
            Rational p = 1;
            for (int r = 0; r < g; ++r) p *= v.miwa_coeff * sign;
            coef *= binom(alpha[i], g) * p;
            eps_pow += g;
            weight += g * v.miwa;
        }
        fn(beta, coef, eps_pow, weight);
        std::size_t s = 0;
        for (; s < shiftable.size(); ++s) {
            const auto i = static_cast<std::size_t>(shiftable[s]);
            if (gamma[s] < alpha[i]) {
                ++gamma[s];
                break;
            }
            gamma[s] = 0;
        }
        if (s == shiftable.size()) break;
    }
}

} // namespace detail

template <SeriesKind K, class C>
TimeSeries<Laurent<C, K>> miwa_shift_as(const TimeSeries<C> &f, int sign, bool polynomial)
{
    using L = Laurent<C, K>;
    const VarsPtr &vars = f.vars();
    if (vars->is_bilinear()) throw PreconditionError("miwa_shift needs single-mode times");
    std::map<Monomial, L> acc;
    for (const Monomial &beta : vars->all_monomials()) {
        const int slack = polynomial ? kInf : vars->miwa_slack(beta);
        acc.emplace(beta, L::with_window({slack >= kInf ? kNegInf : 1 - slack, kInf}));
    }
    for (const auto &[alpha, c] : f.terms()) {
        detail::for_each_miwa_term(*vars, alpha, sign, [&](const Monomial &beta, const Rational &coef, int e, int w) {
            auto it = acc.find(beta);
            if (it != acc.end()) it->second.add_to(-w, Scalar::monomial(coef, ScalarKey{e, 0, 0}) * c);
        });
    }
    TimeSeries<L> out(vars);
    for (auto &[m, l] : acc) out.set(m, std::move(l));
    return out;
}

template <class C>
TimeSeries<LambdaSeries<C>> miwa_shift(const TimeSeries<C> &f, int sign, bool polynomial)
{
    return miwa_shift_as<SeriesKind::Symbol>(f, sign, polynomial);
}

template <class X>
TimeSeries<LambdaSeries<X>> miwa_shift_same(const TimeSeries<LambdaSeries<X>> &f, int sign, int top,
                                            bool polynomial)
{
    using L = LambdaSeries<X>;
    const VarsPtr &vars = f.vars();
    if (vars->is_bilinear()) throw PreconditionError("miwa_shift needs single-mode times");
    std::map<Monomial, L> acc;
    for (const Monomial &beta : vars->all_monomials()) {
        const int slack = polynomial ? kInf : vars->miwa_slack(beta);
        acc.emplace(beta, L::with_window({slack >= kInf ? kNegInf : sat_add(top, 1 - slack), kInf}));
    }
    for (const auto &[alpha, c] : f.terms()) {
        detail::for_each_miwa_term(*vars, alpha, sign, [&](const Monomial &beta, const Rational &coef, int e, int w) {
            auto it = acc.find(beta);
            if (it == acc.end()) return;
            it->second += L::generator(-w, X(Scalar::monomial(coef, ScalarKey{e, 0, 0}))) * c;
        });
    }
    TimeSeries<L> out(vars);
    for (auto &[m, l] : acc) out.set(m, std::move(l));
    return out;
}

template <class C>
TimeSeries<C> bilinear_substitute(const TimeSeries<C> &f, VarsPtr bilinear, int sign)
{
    const int nv = f.vars()->size();
    if (bilinear->size() != 2 * nv) throw PreconditionError("bilinear_substitute: variable mismatch");
    TimeSeries<C> out(bilinear);
    for (const auto &[alpha, c] : f.terms()) {
        // prod_i (xbar_i + sign y_i)^{alpha_i}
        std::vector<int> split(static_cast<std::size_t>(nv), 0);
        while (true) {
            Monomial m{};
            Rational coef = 1;
            for (int i = 0; i < nv; ++i) {
                const int a = alpha[static_cast<std::size_t>(i)];
                const int k = split[static_cast<std::size_t>(i)];  // y-power
                m[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(a - k);
                m[static_cast<std::size_t>(nv + i)] = static_cast<std::uint8_t>(k);
                coef *= detail::binom(a, k);
                if (sign < 0 && k % 2 == 1) coef = -coef;
            }
            out.add_to(m, Scalar(coef) * c);
            int i = 0;
            for (; i < nv; ++i) {
                auto &k = split[static_cast<std::size_t>(i)];
                if (k < alpha[static_cast<std::size_t>(i)]) {
                    ++k;
                    break;
                }
                k = 0;
            }
            if (i == nv) break;
        }
    }
    return out;
}

} // namespace eth

namespace eth {

// Coefficient-wise projections and ring helpers used by code that is
// generic over "operator" and "operator-valued time series".

template <class C>
TimeSeries<C> plus_part(const TimeSeries<C> &f)
{
    return f.map_coeffs([](const C &c) { return c.plus_part(); });
}

template <class C>
TimeSeries<C> minus_part(const TimeSeries<C> &f)
{
    return f.map_coeffs([](const C &c) { return c.minus_part(); });
}

template <class C>
TimeSeries<C> inverse(const TimeSeries<C> &f)
{
    return ts_inverse(f);
}

template <class C>
TimeSeries<C> unit_like(const TimeSeries<C> &f, const C &c = C(1L))
{
    return TimeSeries<C>(f.vars(), c);
}

template <class C, SeriesKind Kind>
Laurent<C, Kind> unit_like(const Laurent<C, Kind> &, const Laurent<C, Kind> &c = Laurent<C, Kind>(1L))
{
    return c;
}

} // namespace eth
