#include "eth/eth_core.hpp"

namespace eth {

namespace {

Scalar inv_eps() { return Scalar::eps(-1); }

Rational factorial(int n) { return detail::factorial(n); }

int level(const TimeVars &vars, const Monomial &m)
{
    const auto &w = vars.bounds().front().weights;
    int d = 0;
    for (std::size_t i = 0; i < w.size(); ++i) d += w[i] * m[i];
    return d;
}

template <class S>
S power(const S &a, int n, const S &one)
{
    S p = one;
    for (int k = 0; k < n; ++k) p = p * a;
    return p;
}

template <class S>
S flow_full_impl(FlowIndex idx, const S &L, const S &logL)
{
    const S one = unit_like(L);
    if (idx.alpha == 1) {
        const Scalar c = Scalar(Rational(1) / factorial(idx.n + 1)) * inv_eps();
        return c * power(L, idx.n + 1, one);
    }
    const Scalar c = Scalar(Rational(2) / factorial(idx.n)) * inv_eps();
    return c * (power(L, idx.n, one) * (logL - harmonic(idx.n) * one));
}

template <class S>
S log_lax_impl(const S &P_L, const S &P_R)
{
    const S one = unit_like(P_L);
    const Scalar eps = Scalar::eps(1);
    const S right = sharp(inverse(P_R) * coeff_dx(P_R));
    const S left = coeff_dx(P_L) * inverse(P_L);
    return Scalar(Rational(1, 2)) * (Scalar::logQ() * one + eps * right - eps * left);
}

// Keeps the Lambda^{-1,0,1} part of a would-be Lax operator. Strict mode
// first checks that nothing else survives; otherwise the rest is dropped
// (diagnostics on data that is not a dressing pair).
ShiftSeries clean_lax(const ShiftSeries &L, bool strict, const std::string &where)
{
    if (!L.window().contains(-1) || !L.window().contains(1))
        throw TruncationExhausted("Lambda_window", where + ": Lax operator not certified on [-1, 1], window " +
                                                       L.window().str());
    ShiftSeries out;
    for (const auto &[k, c] : L.terms()) {
        if (k >= -1 && k <= 1) {
            out.set(k, c);
        } else if (!c.is_zero()) {
            if (strict)
                throw ConsistencyError(where + ": Lambda^" + std::to_string(k) + " coefficient " + c.str() +
                                       " outside the Lax support");
        }
    }
    return out;
}

} // namespace

ShiftSeries LaxOp::series() const
{
    return Lambda(1) + ShiftSeries(DiffOp(u)) + ShiftSeries::generator(-1, DiffOp(Scalar::Q() * exp_eps(v)));
}

std::string FlowIndex::str() const { return "(" + std::to_string(n) + "," + std::to_string(alpha) + ")"; }

Scalar harmonic(int n)
{
    if (n < 0) throw PreconditionError("harmonic: n < 0");
    Rational h = 0;
    for (int k = 1; k <= n; ++k) h += Rational(1, k);
    return Scalar(Rational(1, 2)) * Scalar::logQ() + Scalar(h);
}

XPoly exp_eps(const XPoly &v)
{
    for (const Scalar &c : v.coeffs())
        if (!c.is_zero() && c.low_eps() < 1)
            throw PreconditionError("exp_eps: exponent " + v.str() + " has a part of eps-order <= 0");
    XPoly sum(1L), term(1L);
    const int bound = truncation().eps_max - truncation().eps_min + 4;
    for (int k = 1; k <= bound; ++k) {
        term = Scalar(Rational(1, k)) * (term * v);
        if (term.is_zero()) break;
        sum += term;
    }
    return sum;
}

ShiftSeries dress_left(const LaxOp &L)
{
    const int W = truncation().Lambda_window;
    const XPoly qev = Scalar::Q() * exp_eps(L.v);
    std::vector<XPoly> w(static_cast<std::size_t>(W) + 1);
    w[0] = XPoly(1L);
    for (int i = 1; i <= W; ++i) {
        XPoly g = L.u * w[static_cast<std::size_t>(i - 1)];
        if (i >= 2) g += qev * shift_x(w[static_cast<std::size_t>(i - 2)], Rational(-1));
        w[static_cast<std::size_t>(i)] = discrete_antiderivative(g);
    }
    ShiftSeries P = ShiftSeries::with_window({-W, kInf});
    for (int i = 0; i <= W; ++i) P.set(-i, DiffOp(w[static_cast<std::size_t>(i)]));
    return P;
}

XPoly right_gauge_factor(const LaxOp &L)
{
    // w~_0 = exp(s), s(x) - s(x - eps) = v
    const XPoly s = discrete_antiderivative(-shift_x(L.v, Rational(1)));
    try {
        return exp_eps(s);
    } catch (const PreconditionError &) {
        throw PreconditionError("right gauge factor needs v of eps-order >= 2 (got v = " + L.v.str() + ")");
    }
}

ShiftSeries dress_right_paired(const LaxOp &L)
{
    return ss_invert(dress_left(L)) * ShiftSeries(DiffOp(right_gauge_factor(L)));
}

ShiftSeries dress_right(const LaxOp &L)
{
    const int W = std::min(truncation().Lambda_window, truncation().lambda_window);
    const XPoly w0 = right_gauge_factor(L);
    const XPoly w0_inv = w0.inverse();
    std::vector<XPoly> w(static_cast<std::size_t>(W) + 1);
    w[0] = w0;
    for (int i = 1; i <= W; ++i) {
        XPoly g = L.u * w[static_cast<std::size_t>(i - 1)];
        if (i >= 2) g += Scalar::Q() * shift_x(w[static_cast<std::size_t>(i - 2)], Rational(1));
        // w~_i = w~_0 h, h(x) - h(x - eps) = g / w~_0
        const XPoly h = discrete_antiderivative(-shift_x(g * w0_inv, Rational(1)));
        w[static_cast<std::size_t>(i)] = w0 * h;
    }
    Symbol sym = Symbol::with_window({-W, kInf});
    for (int i = 0; i <= W; ++i) sym.set(-i, DiffOp(w[static_cast<std::size_t>(i)]));
    return from_right_symbol(sym);
}

ShiftSeries lax_sharp(const LaxOp &L) { return ss_sharp(L.series()); }

ShiftSeries lax_from_left(const ShiftSeries &P_L, bool strict)
{
    return clean_lax(P_L * Lambda(1) * ss_invert(P_L), strict, "lax_from_left");
}

WaveSeries lax_from_waves(const WavePair &W, bool strict)
{
    const WaveSeries raw = W.P_L * unit_like(W.P_L, Lambda(1)) * inverse(W.P_L);
    return raw.map_coeffs([&](const ShiftSeries &c) { return clean_lax(c, strict, "lax_from_waves"); });
}

ShiftSeries log_lax(const ShiftSeries &P_L, const ShiftSeries &P_R) { return log_lax_impl(P_L, P_R); }
WaveSeries log_lax(const WavePair &W) { return log_lax_impl(W.P_L, W.P_R); }

ShiftSeries flow_full(FlowIndex idx, const ShiftSeries &L, const ShiftSeries &logL)
{
    return flow_full_impl(idx, L, logL);
}
WaveSeries flow_full(FlowIndex idx, const WaveSeries &L, const WaveSeries &logL)
{
    return flow_full_impl(idx, L, logL);
}

ShiftSeries flow_gen(FlowIndex idx, const ShiftSeries &L, const ShiftSeries &logL)
{
    return plus_part(flow_full(idx, L, logL));
}
WaveSeries flow_gen(FlowIndex idx, const WaveSeries &L, const WaveSeries &logL)
{
    return plus_part(flow_full(idx, L, logL));
}

ShiftSeries lax_rhs(FlowIndex idx, const ShiftSeries &L, const ShiftSeries &logL)
{
    const ShiftSeries A = flow_gen(idx, L, logL);
    const ShiftSeries r = A * L - L * A;
    if (!r.window().contains(-1) || !r.window().contains(1))
        throw TruncationExhausted("Lambda_window", "lax_rhs " + idx.str() + ": window " + r.window().str());
    for (const auto &[k, c] : r.terms())
        if ((k < -1 || k > 0) && !c.is_zero())
            throw ConsistencyError("lax_rhs " + idx.str() + ": Lambda^" + std::to_string(k) + " coefficient " +
                                   c.str());
    return r;
}

std::vector<FlowIndex> flow_indices(const TimeVars &vars)
{
    std::vector<FlowIndex> out{{0, 0}};
    for (const TimeVar &v : vars.vars())
        if (v.role == 0 && v.alpha >= 0) out.push_back({v.n, v.alpha});
    return out;
}

WaveSeries zs_residual(FlowIndex i, FlowIndex j, const WavePair &W, bool strict)
{
    const WaveSeries L = lax_from_waves(W, strict);
    const WaveSeries logL = log_lax(W);
    const WaveSeries Ai = flow_gen(i, L, logL);
    const WaveSeries Aj = flow_gen(j, L, logL);
    return time_derivative(Aj, i) - time_derivative(Ai, j) - (Ai * Aj - Aj * Ai);
}

WavePair evolve_waves(const ShiftSeries &P_L0, const ShiftSeries &P_R0, const VarsPtr &vars)
{
    if (vars->is_bilinear()) throw PreconditionError("evolve_waves: needs single-mode times");
    {
        // the initial pair must dress one and the same Lax operator
        const ShiftSeries L0 = lax_from_left(P_L0);
        const ShiftSeries rhs = ss_sharp(ss_invert(P_R0) * Lambda(1) * P_R0);
        if (!(L0 - rhs).restricted({-1, 1}).is_zero())
            throw PreconditionError("evolve_waves: P_L0 and P_R0 do not dress the same Lax operator");
    }
    WaveSeries P_L(vars, P_L0);
    WaveSeries S(vars, ss_sharp(P_R0));
    const int top = vars->bounds().front().cap;
    std::vector<Monomial> monomials = vars->all_monomials();
    std::vector<FlowIndex> flows;
    std::vector<int> flow_var;
    for (int i = 0; i < vars->size(); ++i) {
        flows.push_back({vars->var(i).n, vars->var(i).alpha});
        flow_var.push_back(i);
    }
    for (int d = 1; d <= top; ++d) {
        const VarsPtr lower = vars->with_caps(std::vector<int>(vars->bounds().size(), d - 1));
        WavePair cur{P_L.with_vars(lower), sharp(S.with_vars(lower)), d - 1};
        const WaveSeries L = lax_from_waves(cur);
        const WaveSeries logL = log_lax(cur);
        const WaveSeries S_cur = S.with_vars(lower);
        std::vector<WaveSeries> rhs_L, rhs_S;
        for (const FlowIndex &f : flows) {
            const WaveSeries M = flow_full(f, L, logL);
            rhs_L.push_back(-(minus_part(M) * cur.P_L));
            rhs_S.push_back(plus_part(M) * S_cur);
        }
        for (const Monomial &m : monomials) {
            if (level(*vars, m) != d) continue;
            int v = 0;
            while (m[static_cast<std::size_t>(v)] == 0) ++v;
            Monomial b = m;
            --b[static_cast<std::size_t>(v)];
            const Scalar inv(Rational(1, m[static_cast<std::size_t>(v)]));
            const auto vi = static_cast<std::size_t>(v);
            if (!rhs_L[vi].known(b) || !rhs_S[vi].known(b))
                throw ConsistencyError("evolve_waves: right-hand side unknown at " + vars->monomial_str(b));
            P_L.set(m, inv * rhs_L[vi].coeff(b));
            S.set(m, inv * rhs_S[vi].coeff(b));
        }
    }
    return WavePair{P_L, sharp(S), top};
}

ShiftSeries dressing_residual_left(const ShiftSeries &L, const ShiftSeries &P_L)
{
    return L * P_L - P_L * Lambda(1);
}

ShiftSeries dressing_residual_right(const ShiftSeries &L, const ShiftSeries &P_R)
{
    return P_R * ss_sharp(L) - Lambda(1) * P_R;
}

namespace {

// Exponent of the vertex factor with generator g^k supplied by make(k, coeff).
template <class C, class Make>
TimeSeries<C> vertex_exponent(const VarsPtr &bv, int sign, Make make)
{
    TimeSeries<C> X(bv);
    const Scalar s(static_cast<long>(sign));
    for (int i = 0; i < bv->size(); ++i) {
        const TimeVar &v = bv->var(i);
        if (v.role != 2) continue;
        if (v.alpha == 1) {
            const Scalar c = s * Scalar(Rational(1) / factorial(v.n + 1)) * inv_eps();
            X += TimeSeries<C>::variable(bv, i, make(v.n + 1, DiffOp(c)));
        } else if (v.n > 0) {
            const Scalar c = s * Scalar(Rational(2) / factorial(v.n)) * inv_eps();
            X += TimeSeries<C>::variable(bv, i, make(v.n, c * (DiffOp::D() - DiffOp(harmonic(v.n)))));
        }
    }
    return X;
}

} // namespace

WaveSeries vertex_exponential_op(const VarsPtr &bilinear, int sign)
{
    return ts_exp(vertex_exponent<ShiftSeries>(bilinear, sign,
                                               [](int k, const DiffOp &c) { return ShiftSeries::generator(k, c); }));
}

SymbolSeries vertex_exponential_sym(const VarsPtr &bilinear, int sign)
{
    return ts_exp(
        vertex_exponent<Symbol>(bilinear, sign, [](int k, const DiffOp &c) { return Symbol::generator(k, c); }));
}

WaveSeries prop2_operator_residual(int r, const WavePair &W, const VarsPtr &bv)
{
    const WaveSeries PLp = bilinear_substitute(W.P_L, bv, +1);
    const WaveSeries PLm = bilinear_substitute(W.P_L, bv, -1);
    const WaveSeries PRp = bilinear_substitute(W.P_R, bv, +1);
    const WaveSeries PRm = bilinear_substitute(W.P_R, bv, -1);
    const WaveSeries Lr(bv, Lambda(r));
    const WaveSeries lhs = PLp * Lr * vertex_exponential_op(bv, +1) * PRm;
    const WaveSeries rhs = sharp(PLm * Lr * vertex_exponential_op(bv, -1) * PRp);
    return lhs - rhs;
}

WaveSeries prop2_lax_residual(const WavePair &W)
{
    const WaveSeries Lam = unit_like(W.P_L, Lambda(1));
    return W.P_L * Lam * inverse(W.P_L) - sharp(inverse(W.P_R) * Lam * W.P_R);
}

SymbolSeries prop2_integrand(int m, const WavePair &W, const VarsPtr &bv)
{
    auto left = [](const ShiftSeries &a) { return left_symbol(a); };
    auto right = [](const ShiftSeries &a) { return right_symbol(a); };
    const Rational shift(-m);
    const SymbolSeries PLp = bilinear_substitute(W.P_L, bv, +1).map_coeffs(left);
    const SymbolSeries PLm = shift_x(bilinear_substitute(W.P_L, bv, -1).map_coeffs(left), shift);
    const SymbolSeries PRp = bilinear_substitute(W.P_R, bv, +1).map_coeffs(right);
    const SymbolSeries PRm = shift_x(bilinear_substitute(W.P_R, bv, -1).map_coeffs(right), shift);
    const Symbol up = Symbol::generator(m, DiffOp(Scalar::Q(-m)));
    const Symbol down = Symbol::generator(-m, DiffOp(Scalar::Q(m)));
    const SymbolSeries lhs = (PLp * vertex_exponential_sym(bv, +1) * PRm).mul_left(up);
    const SymbolSeries rhs = (sharp(PRp) * sharp(vertex_exponential_sym(bv, -1)) * sharp(PLm)).mul_left(down);
    return lhs - rhs;
}

ResidueResult residue_at(const SymbolSeries &integrand, int r)
{
    ResidueResult out{TimeSeries<DiffOp>(integrand.vars()), {}};
    for (const Monomial &m : integrand.vars()->all_monomials()) {
        const Symbol c = integrand.coeff(m);
        if (!c.window().contains(-r)) {
            out.unknown.push_back(m);
            continue;
        }
        out.value.set(m, c.coeff(-r));
    }
    return out;
}

ResidueResult prop2_residue_residual(int m, int r, const WavePair &W, const VarsPtr &bv)
{
    if (r < 0) throw PreconditionError("prop2_residue_residual: r < 0");
    return residue_at(prop2_integrand(m, W, bv), r);
}

WavePair constant_waves(const ShiftSeries &P_L, const ShiftSeries &P_R, const VarsPtr &vars)
{
    return WavePair{WaveSeries(vars, P_L), WaveSeries(vars, P_R), 0};
}

} // namespace eth
