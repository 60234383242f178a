#include "eth/tau.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace eth {

namespace {

template <class R, class C, class F>
LambdaSeries<R> convert(const LambdaSeries<C> &s, F &&f)
{
    LambdaSeries<R> out = LambdaSeries<R>::with_window(s.window());
    for (const auto &[k, c] : s.terms()) out.set(k, f(c));
    return out;
}

FuncSymbolSeries embed(const FuncSeries &f)
{
    return f.map_coeffs([](const XPoly &c) { return FuncSymbol(c); });
}

// lambda^k coefficient; the caps shrink below the first monomial where it
// is not certified.
FuncSeries coefficient(const FuncSymbolSeries &f, int k, const char *what)
{
    const VarsPtr &vars = f.vars();
    const DegreeBound &bound = vars->bounds().front();
    int cap = bound.cap;
    std::string where;
    for (const auto &[m, s] : f.terms()) {
        if (s.window().contains(k)) continue;
        int w = 0;
        for (std::size_t i = 0; i < bound.weights.size(); ++i) w += bound.weights[i] * m[i];
        if (w - 1 < cap) {
            cap = w - 1;
            where = vars->monomial_str(m);
        }
    }
    if (cap < 0)
        throw TruncationExhausted("lambda_window",
                                  std::string(what) + ": lambda^" + std::to_string(k) + " not certified at " + where);
    std::vector<int> caps = vars->caps();
    caps.front() = cap;
    FuncSeries out(cap == bound.cap ? vars : vars->with_caps(caps));
    for (const auto &[m, s] : f.terms()) out.set(m, s.coeff(k));
    return out;
}

XPoly function_part(const DiffOp &d)
{
    if (!d.is_function()) throw ConsistencyError("wave symbol coefficient is not a function of x: " + d.str());
    return d.term(0);
}

XPoly integrate_x(const XPoly &p)
{
    std::vector<Scalar> c(p.coeffs().size() + 1);
    for (std::size_t k = 0; k < p.coeffs().size(); ++k)
        c[k + 1] = Scalar(Rational(1, static_cast<long>(k + 1))) * p.coeffs()[k];
    return XPoly::from_coeffs(std::move(c));
}

Scalar eps_pow(const Rational &c, int e) { return Scalar::monomial(c, ScalarKey{e, 0, 0}); }

bool lambda_weighted(const TimeVars &vars)
{
    for (const auto &b : vars.bounds()) {
        for (int i = 0; i < vars.size(); ++i) {
            const TimeVar &v = vars.var(i);
            const int want = v.alpha == 1 ? v.n + 1 : v.n;
            if (b.weights[static_cast<std::size_t>(i)] != want) return false;
        }
    }
    return true;
}

void enumerate_partitions(int N, int n, std::vector<int> &gamma, int rest, const std::function<void()> &fn)
{
    if (n < 0) {
        if (rest == 0) fn();
        return;
    }
    for (int g = 0; g * (n + 1) <= rest; ++g) {
        gamma[static_cast<std::size_t>(n)] = g;
        enumerate_partitions(N, n - 1, gamma, rest - g * (n + 1), fn);
    }
    gamma[static_cast<std::size_t>(n)] = 0;
}

// F(a, b) against F(b, a) for a nested series, outer exponent first.
using Nested = TimeSeries<LambdaSeries<FuncSymbol>>;

void tally_swap(CheckResult &r, const Nested &F)
{
    const Window g = FuncSymbol::global_window();
    for (const Monomial &m : F.vars()->all_monomials()) {
        const LambdaSeries<FuncSymbol> f = F.coeff(m);
        auto known = [&](int a, int b) { return f.window().contains(a) && f.coeff(a).window().contains(b); };
        for (int a = g.lo; a <= 0; ++a) {
            for (int b = a + 1; b <= 0; ++b) {
                const XPoly d = f.coeff(a).coeff(b) - f.coeff(b).coeff(a);
                std::ostringstream where;
                where << "[" << F.vars()->monomial_str(m) << "] lam1^" << a << " lam2^" << b;
                r.cell(where.str(), known(a, b) && known(b, a), d.is_zero(), d.str());
            }
        }
    }
}

// Outer series in a new generator whose coefficients are constant inner series.
LambdaSeries<FuncSymbol> as_outer(const FuncSymbol &s)
{
    LambdaSeries<FuncSymbol> out = LambdaSeries<FuncSymbol>::with_window(s.window());
    for (const auto &[k, c] : s.terms()) out.set(k, FuncSymbol(c));
    return out;
}

} // namespace

int SchurOp::weight(const std::vector<int> &gamma)
{
    int w = 0;
    for (std::size_t n = 0; n < gamma.size(); ++n) w += static_cast<int>(n + 1) * gamma[n];
    return w;
}

std::string SchurOp::str() const
{
    std::ostringstream os;
    bool first = true;
    for (const auto &[gamma, c] : terms) {
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        os << Rational(abs(c)).get_str();
        for (std::size_t n = 0; n < gamma.size(); ++n)
            if (gamma[n] > 0) os << "·(eps d" << n << "1)" << (gamma[n] > 1 ? "^" + std::to_string(gamma[n]) : "");
    }
    return first ? "0" : os.str();
}

SchurOp schur_a(int N)
{
    if (N < 1) throw PreconditionError("schur_a: N must be >= 1");
    // exp of a sum of commuting terms: product of the single exponentials,
    // so the coefficient of gamma is prod_n (-n!)^{gamma_n} / gamma_n!.
    SchurOp a;
    a.N = N;
    std::vector<int> gamma(static_cast<std::size_t>(N), 0);
    enumerate_partitions(N, N - 1, gamma, N, [&] {
        Rational c = 1;
        for (std::size_t n = 0; n < gamma.size(); ++n) {
            for (int r = 0; r < gamma[n]; ++r) c *= -detail::factorial(static_cast<int>(n));
            c /= detail::factorial(gamma[n]);
        }
        a.terms[gamma] = c;
    });
    return a;
}

FuncSeries apply_schur(const SchurOp &a, const FuncSeries &f, int sign)
{
    const VarsPtr &vars = f.vars();
    FuncSeries out(vars);
    bool first = true;
    for (const auto &[gamma, c] : a.terms) {
        FuncSeries t = f;
        bool present = true;
        int order = 0;
        for (std::size_t n = 0; n < gamma.size() && present; ++n) {
            if (gamma[n] == 0) continue;
            const int i = vars->index(static_cast<int>(n), 1);
            if (i < 0) present = false;
            for (int r = 0; r < gamma[n] && present; ++r) t = t.derivative(i);
            order += gamma[n];
        }
        if (!present) continue;
        Rational coef = c;
        if (sign < 0 && order % 2 == 1) coef = -coef;
        const FuncSeries term = eps_pow(coef, order) * t;
        if (first) out = term;
        else out += term;
        first = false;
    }
    return out;
}

FuncSymbolSeries left_symbols(const WaveSeries &P)
{
    return P.map_coeffs([](const ShiftSeries &s) { return convert<XPoly>(left_symbol(s), function_part); });
}

FuncSymbolSeries right_symbols(const WaveSeries &P)
{
    return P.map_coeffs([](const ShiftSeries &s) { return convert<XPoly>(right_symbol(s), function_part); });
}

WaveSeries from_left_symbols(const FuncSymbolSeries &s)
{
    return s.map_coeffs(
        [](const FuncSymbol &f) { return from_left_symbol(convert<DiffOp>(f, [](const XPoly &p) { return DiffOp(p); })); });
}

WaveSeries from_right_symbols(const FuncSymbolSeries &s)
{
    return s.map_coeffs(
        [](const FuncSymbol &f) { return from_right_symbol(convert<DiffOp>(f, [](const XPoly &p) { return DiffOp(p); })); });
}

FuncSymbolSeries log_unipotent(const FuncSymbolSeries &f)
{
    const FuncSymbolSeries g = f - FuncSymbolSeries(f.vars(), FuncSymbol(1L));
    for (const auto &[m, s] : g.terms()) {
        if (s.window().hi < kInf) throw PreconditionError("log: leading part of the symbol is not certified");
        for (const auto &[k, c] : s.terms())
            if (k >= 0 && !c.is_zero())
                throw PreconditionError("log: symbol is not 1 + lower terms at " + f.vars()->monomial_str(m));
    }
    FuncSymbolSeries sum(f.vars());
    FuncSymbolSeries power(f.vars(), FuncSymbol(1L));
    const int bound = 2 * FuncSymbol::global_window().hi + 4;
    for (int k = 1; k <= bound; ++k) {
        power = power * g;
        if (power.is_zero()) break;
        sum += Scalar(Rational(k % 2 == 1 ? 1 : -1, k)) * power;
    }
    // the window information of the last (vanishing) power still matters
    sum += Scalar(0L) * power;
    return sum;
}

FuncSeries log_near_one(const FuncSeries &f, const char *what)
{
    const XPoly rest = f.constant() - XPoly(1L);
    for (const Scalar &c : rest.coeffs())
        if (!c.is_zero() && c.low_eps() < 1)
            throw PreconditionError(std::string(what) + ": constant term " + f.constant().str() +
                                    " is not 1 + (positive eps-order); its logarithm is not in the ring");
    return ts_log(f);
}

FuncSeries WaveLogs::b(int N) const { return coefficient(log_PL, -N, "b_N"); }
FuncSeries WaveLogs::bt(int N) const { return coefficient(log_PR, -N, "b~_N"); }

WaveLogs wave_log_coeffs(const WavePair &W)
{
    WaveLogs out;
    out.PL = left_symbols(W.P_L);
    out.PR = right_symbols(W.P_R);
    out.w0 = coefficient(out.PR, 0, "w~_0");
    out.log_PL = log_unipotent(out.PL);
    const FuncSeries bt0 = log_near_one(out.w0, "log w~_0");
    const FuncSymbolSeries ratio = out.PR * embed(ts_inverse(out.w0));
    out.log_PR = embed(bt0) + log_unipotent(ratio);
    return out;
}

FuncSeries TauSeries::beta(int n) const
{
    const int i = vars()->index(n, 1);
    if (i < 0) throw PreconditionError("beta: q_{" + std::to_string(n) + ",1} not in the variable set");
    return logtau.derivative(i);
}

TauSeries build_tau(const WavePair &W, const std::map<Monomial, Scalar> &gauge_seed)
{
    const VarsPtr vars = W.P_L.vars();
    if (vars->is_bilinear()) throw PreconditionError("build_tau needs single-mode times");
    if (!lambda_weighted(*vars))
        throw PreconditionError("build_tau needs lambda-weighted degree caps; with total degree the equations "
                                "a_N log tau = b_N reach beyond the caps");
    TauSeries T;
    T.logs = wave_log_coeffs(W);
    const int nmax = vars->n_max();
    std::vector<FuncSeries> b(static_cast<std::size_t>(nmax + 2));
    std::vector<SchurOp> a(static_cast<std::size_t>(nmax + 2));
    for (int N = 1; N <= nmax + 1; ++N) {
        if (vars->index(N - 1, 1) < 0) continue;
        b[static_cast<std::size_t>(N)] = T.logs.b(N);
        a[static_cast<std::size_t>(N)] = schur_a(N);
    }
    const FuncSeries dx_logtau =
        T.logs.bt(0).map_coeffs([](const XPoly &c) { return eps_pow(1, -1) * bernoulli_apply(c); });
    // log tau is determined where every b_N and b~_0 it draws on is certified
    int cap = dx_logtau.vars()->caps().front();
    for (int N = 1; N <= nmax + 1; ++N)
        if (vars->index(N - 1, 1) >= 0) cap = std::min(cap, b[static_cast<std::size_t>(N)].vars()->caps().front() + N);
    std::vector<int> caps = vars->caps();
    caps.front() = cap;
    const VarsPtr tau_vars = vars->with_caps(caps);

    std::map<Monomial, XPoly> c;
    std::function<XPoly(const Monomial &)> solve = [&](const Monomial &alpha) -> XPoly {
        if (auto it = c.find(alpha); it != c.end()) return it->second;
        int n = -1, i = -1;
        for (int j = 0; j < vars->size(); ++j) {
            const TimeVar &v = vars->var(j);
            if (v.alpha == 1 && alpha[static_cast<std::size_t>(j)] > 0 && v.n > n) {
                n = v.n;
                i = j;
            }
        }
        XPoly value;
        if (n < 0) {
            value = integrate_x(dx_logtau.coeff(alpha));
            if (auto s = gauge_seed.find(alpha); s != gauge_seed.end()) value += XPoly(s->second);
        } else {
            // a_{n+1} log tau = b_{n+1} at beta = alpha - e_{n,1}; the linear
            // term -n! eps d_{n,1} isolates c_alpha, the others have lower n.
            Monomial beta = alpha;
            --beta[static_cast<std::size_t>(i)];
            XPoly sum = b[static_cast<std::size_t>(n + 1)].coeff(beta);
            for (const auto &[gamma, coef] : a[static_cast<std::size_t>(n + 1)].terms) {
                if (gamma[static_cast<std::size_t>(n)] > 0) continue;
                Monomial up = beta;
                Rational fac = 1;
                int order = 0;
                for (std::size_t m = 0; m < gamma.size(); ++m) {
                    if (gamma[m] == 0) continue;
                    const auto j = static_cast<std::size_t>(vars->index(static_cast<int>(m), 1));
                    for (int r = 0; r < gamma[m]; ++r) fac *= up[j] + 1 + r;
                    up[j] = static_cast<std::uint8_t>(up[j] + gamma[m]);
                    order += gamma[m];
                }
                sum -= eps_pow(coef * fac, order) * solve(up);
            }
            value = eps_pow(Rational(-1) / (detail::factorial(n) * static_cast<long>(alpha[static_cast<std::size_t>(i)])), -1) * sum;
        }
        c.emplace(alpha, value);
        return value;
    };

    T.logtau = FuncSeries(tau_vars);
    for (const Monomial &m : tau_vars->all_monomials()) {
        T.logtau.set(m, solve(m));
        bool pure = true;
        for (int j = 0; j < vars->size(); ++j)
            if (m[static_cast<std::size_t>(j)] > 0 && vars->var(j).alpha != 0) pure = false;
        if (pure) T.gauge.push_back(m);
    }

    const CheckResult r = tau_compatibility(T);
    if (r.failed > 0) {
        std::string msg = "log tau system is not compatible";
        if (!r.nonzero.empty()) msg += ": residual " + r.nonzero.front().value + " at " + r.nonzero.front().where;
        throw IntegrabilityError(msg);
    }
    return T;
}

CheckResult tau_compatibility(const TauSeries &T)
{
    CheckResult r;
    r.id = "tau-compatibility";
    const VarsPtr &vars = T.vars();
    for (int N = 1; N <= vars->n_max() + 1; ++N) {
        if (vars->index(N - 1, 1) < 0) continue;
        tally(r, apply_schur(schur_a(N), T.logtau) - T.logs.b(N));
    }
    const FuncSeries x_line =
        coeff_dx(T.logtau).map_coeffs([](const XPoly &p) { return eps_pow(1, 1) * p; }) -
        T.logs.bt(0).map_coeffs([](const XPoly &p) { return bernoulli_apply(p); });
    tally(r, x_line);
    return r;
}

CheckResult tau_de1_check(const TauSeries &T)
{
    CheckResult r;
    r.id = "tau-de1";
    FuncSymbolSeries rhs = shift_x(T.logs.log_PR - embed(T.logs.bt(0)), Rational(-1));
    const FuncSymbolSeries res = miwa_shift(T.logtau, +1) - embed(T.logtau) - rhs;
    tally(r, res, Window{kNegInf, -1});
    return r;
}

const char *fay_name(FayIdentity which)
{
    switch (which) {
    case FayIdentity::Id1: return "id1";
    case FayIdentity::Id2: return "id2";
    case FayIdentity::Id4: return "id4";
    case FayIdentity::IdentityA: return "identity-a";
    default: return "identity-b";
    }
}

FayIdentity fay_from_name(const std::string &name)
{
    for (FayIdentity f : {FayIdentity::Id1, FayIdentity::Id2, FayIdentity::Id4, FayIdentity::IdentityA,
                          FayIdentity::IdentityB})
        if (name == fay_name(f)) return f;
    throw PreconditionError("unknown identity '" + name + "'");
}

CheckResult fay_residual(FayIdentity which, const WavePair &W)
{
    CheckResult r;
    r.id = fay_name(which);
    const FuncSymbolSeries S = left_symbols(W.P_L);
    const FuncSymbolSeries R = right_symbols(W.P_R);
    const FuncSeries w0 = coefficient(R, 0, "w~_0");
    const Rational one(1), minus_one(-1);
    switch (which) {
    case FayIdentity::Id1: {
        const FuncSymbolSeries lhs = S * shift_x(miwa_shift_same(R, -1, 0), minus_one);
        tally(r, lhs - shift_x(miwa_shift(w0, -1), minus_one));
        break;
    }
    case FayIdentity::Id4: {
        tally(r, S * miwa_shift_same(R, -1, 0) - embed(w0));
        break;
    }
    case FayIdentity::IdentityB: {
        tally(r, miwa_shift(w0, -1) * S - embed(w0) * shift_x(S, one));
        break;
    }
    case FayIdentity::IdentityA: {
        // outer generator lambda_1, inner lambda_2
        const Nested F = S.map_coeffs(as_outer) * miwa_shift(S, -1);
        tally_swap(r, F);
        break;
    }
    case FayIdentity::Id2: {
        // outer generator lambda_2, inner lambda_1
        const Nested shifted = shift_x(miwa_shift(miwa_shift_same(R, -1, 0), -1), minus_one);
        const Nested F = S.map_coeffs([](const FuncSymbol &s) { return LambdaSeries<FuncSymbol>(s); }) * shifted;
        tally_swap(r, F);
        break;
    }
    }
    return r;
}

WavePair tau_to_waves(const TauSeries &T)
{
    const FuncSeries &lt = T.logtau;
    const FuncSymbolSeries left = ts_exp(miwa_shift(lt, -1) - embed(lt));
    const FuncSymbolSeries right = ts_exp(shift_x(miwa_shift(lt, +1), Rational(1)) - embed(lt));
    WavePair W;
    W.P_L = from_left_symbols(left);
    W.P_R = from_right_symbols(right);
    const auto caps = lt.vars()->caps();
    W.degree = caps.empty() ? 0 : caps.front();
    return W;
}

} // namespace eth
