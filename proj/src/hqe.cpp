#include "eth/hqe.hpp"

namespace eth {

namespace {

Scalar eps_pow(const Rational &c, int e) { return Scalar::monomial(c, ScalarKey{e, 0, 0}); }

SymbolSeries as_symbols(const FuncSeries &f)
{
    return f.map_coeffs([](const XPoly &p) { return Symbol(DiffOp(p)); });
}

SymbolSeries symbols_of(const WaveSeries &P, bool left)
{
    return P.map_coeffs([left](const ShiftSeries &s) { return left ? left_symbol(s) : right_symbol(s); });
}

// (lambda / sqrt Q)^{+-m} as a lambda-monomial
template <class C>
LambdaSeries<C> spectral_power(int m)
{
    return LambdaSeries<C>::generator(m, C(Scalar::Q(-m)));
}

template <class C>
void tally_lambda(CheckResult &r, const TimeSeries<LambdaSeries<C>> &f, int k, const std::string &label)
{
    for (const Monomial &m : f.vars()->all_monomials()) {
        const LambdaSeries<C> s = f.coeff(m);
        const C c = s.coeff(k);
        r.cell("[" + f.vars()->monomial_str(m) + "] " + label, s.window().contains(k), c.is_zero(), c.str());
    }
}

int inner_window() { return truncation().lambda_inner; }

} // namespace

SymbolSeries kernel_exponential(const VarsPtr &vars, int sign)
{
    if (vars->is_bilinear()) throw PreconditionError("kernel_exponential needs single-mode times");
    SymbolSeries X(vars);
    for (int i = 0; i < vars->size(); ++i) {
        const TimeVar &v = vars->var(i);
        if (v.alpha == 1) {
            const Scalar c = eps_pow(Rational(sign) / (2 * detail::factorial(v.n + 1)), -1);
            X += SymbolSeries::variable(vars, i, Symbol::generator(v.n + 1, DiffOp(c)));
        } else if (v.alpha == 0 && v.n > 0) {
            const Scalar c = eps_pow(Rational(sign) / detail::factorial(v.n), -1);
            X += SymbolSeries::variable(vars, i,
                                        Symbol::generator(v.n, c * (DiffOp::D() - DiffOp(harmonic(v.n)))));
        }
    }
    return ts_exp(X);
}

WaveKernel wave_kernel(const WavePair &W, KernelSide side, const std::string &provenance)
{
    WaveKernel k;
    k.side = side;
    k.provenance = provenance;
    if (side == KernelSide::L) k.symbol = symbols_of(W.P_L, true) * kernel_exponential(W.P_L.vars(), +1);
    else k.symbol = kernel_exponential(W.P_R.vars(), -1) * symbols_of(W.P_R, false);
    return k;
}

FuncSeries tau_values(const TauSeries &T)
{
    FuncSeries lt = T.logtau;
    const XPoly c0 = lt.constant();
    Scalar kappa;
    if (!c0.coeffs().empty())
        for (const auto &[key, c] : c0.coeffs().front().terms())
            if (key.eps <= 0) kappa += Scalar::monomial(c, key);
    lt -= FuncSeries(lt.vars(), XPoly(kappa));
    const XPoly rest = lt.constant();
    for (const Scalar &c : rest.coeffs())
        if (!c.is_zero() && c.low_eps() < 1)
            throw PreconditionError("tau: log tau at q = 0 has an x-dependent part of eps-order <= 0 (" + rest.str() +
                                    "); exp is not expandable");
    return ts_exp(lt);
}

VertexOutput vertex_apply(const WavePair &W, const FuncSeries &tau_fn, VertexCombo which)
{
    const SymbolSeries tau = as_symbols(tau_fn);
    switch (which) {
    case VertexCombo::DeltaSharpPlus: return {tau * wave_kernel(W, KernelSide::L, "tau").symbol, +1};
    case VertexCombo::DeltaSharpMinus: return {tau * sharp(wave_kernel(W, KernelSide::R, "tau").symbol), -1};
    case VertexCombo::DeltaMinus: return {wave_kernel(W, KernelSide::R, "tau").symbol * tau, -1};
    default: return {sharp(wave_kernel(W, KernelSide::L, "tau").symbol) * tau, +1};
    }
}

VertexOutput vertex_apply(const TauSeries &T, VertexCombo which)
{
    return vertex_apply(tau_to_waves(T), tau_values(T), which);
}

HqePairing hqe_pairing(const TauSeries &T, int y_degree)
{
    const VarsPtr bv = TimeVars::bilinear(*T.vars(), y_degree);
    const WavePair W = tau_to_waves(T);
    const FuncSeries tau = tau_values(T);
    const VertexOutput f1 = vertex_apply(W, tau, VertexCombo::DeltaSharpPlus);
    const VertexOutput f3 = vertex_apply(W, tau, VertexCombo::DeltaMinus);
    // (lambda/sqrt Q)^{p (q00 + x)/eps} from both slots combines to an
    // integer power only if the x-parts cancel
    if (f1.power + f3.power != 0) throw ConsistencyError("hqe: spectral powers do not pair to an integer");
    HqePairing P;
    P.f1p = bilinear_substitute(f1.body, bv, +1);
    P.f3m = bilinear_substitute(f3.body, bv, -1);
    // the other two reductions are the #-images of these
    P.f2p = bilinear_substitute(sharp(f3.body), bv, +1);
    P.f4m = bilinear_substitute(sharp(f1.body), bv, -1);
    P.power1 = f1.power;
    P.power2 = f3.power;
    return P;
}

SymbolSeries hqe_expression(const HqePairing &P, int m)
{
    const Rational shift(-m);
    const SymbolSeries A = P.f1p * shift_x(P.f3m, shift);
    const SymbolSeries B = P.f2p * shift_x(P.f4m, shift);
    return A.mul_left(spectral_power<DiffOp>(P.power1 * m)) - B.mul_left(spectral_power<DiffOp>(P.power2 * m));
}

SymbolSeries hqe_expression(const TauSeries &T, int m, int y_degree)
{
    return hqe_expression(hqe_pairing(T, y_degree), m);
}

namespace {

CheckResult residue_cells(const SymbolSeries &e, int m, int r)
{
    CheckResult out;
    out.id = "hqe-residue";
    out.params = "m=" + std::to_string(m) + " r=" + std::to_string(r);
    tally_lambda(out, e, -r, "res lam^" + std::to_string(r));
    return out;
}

} // namespace

CheckResult hqe_residual(const HqePairing &P, int m, int r)
{
    if (r < 0) throw PreconditionError("hqe_residual: r < 0");
    return residue_cells(hqe_expression(P, m), m, r);
}

CheckResult hqe_residual(const TauSeries &T, int m, int r, int y_degree)
{
    return hqe_residual(hqe_pairing(T, y_degree), m, r);
}

CheckResult hqe_regularity(const HqePairing &P, int m)
{
    CheckResult out;
    out.id = "hqe-regularity";
    out.params = "m=" + std::to_string(m);
    const SymbolSeries e = hqe_expression(P, m);
    for (int k = 1; k <= inner_window(); ++k) tally_lambda(out, e, 1 - k, "lam^-" + std::to_string(k));
    out.notes.push_back("regularity read on lambda^{-1..-" + std::to_string(inner_window()) + "}");
    return out;
}

CheckResult hqe_regularity(const TauSeries &T, int m, int y_degree)
{
    return hqe_regularity(hqe_pairing(T, y_degree), m);
}

CheckResult hqe_residual_sweep(const HqePairing &P, int m)
{
    CheckResult out;
    out.id = "hqe-residue-sweep";
    out.params = "m=" + std::to_string(m);
    const SymbolSeries e = hqe_expression(P, m);
    for (int r = 0; r < inner_window(); ++r) out.merge(residue_cells(e, m, r));
    return out;
}

CheckResult hqe_residual_sweep(const TauSeries &T, int m, int y_degree)
{
    return hqe_residual_sweep(hqe_pairing(T, y_degree), m);
}

TauSeries toda_slice(const TauSeries &T)
{
    TauSeries S = T;
    FuncSeries lt(T.vars());
    for (const auto &[m, c] : T.logtau.terms()) {
        bool extended = false;
        for (int i = 0; i < T.vars()->size(); ++i)
            if (m[static_cast<std::size_t>(i)] > 0 && T.vars()->var(i).alpha == 0) extended = true;
        if (!extended) lt.set(m, c);
    }
    S.logtau = lt;
    return S;
}

FuncSymbolSeries toda_expression(const TauSeries &T, int m, int y_degree)
{
    const VarsPtr &vars = T.vars();
    for (const auto &[mono, c] : T.logtau.terms())
        for (int i = 0; i < vars->size(); ++i)
            if (mono[static_cast<std::size_t>(i)] > 0 && vars->var(i).alpha == 0 && !c.is_zero())
                throw PreconditionError("toda_regularity: log tau depends on " + vars->var(i).name());
    FuncSymbolSeries xi(vars);
    for (int i = 0; i < vars->size(); ++i) {
        const TimeVar &v = vars->var(i);
        if (v.alpha != 1) continue;
        const Scalar c = eps_pow(Rational(1) / (2 * detail::factorial(v.n + 1)), -1);
        xi += FuncSymbolSeries::variable(vars, i, FuncSymbol::generator(v.n + 1, XPoly(c)));
    }
    const FuncSeries tau = tau_values(T);
    const FuncSymbolSeries Gp = ts_exp(xi) * miwa_shift(tau, -1);
    const FuncSymbolSeries Gm = ts_exp(-xi) * shift_x(miwa_shift(tau, +1), Rational(1));
    const VarsPtr bv = TimeVars::bilinear(*vars, y_degree);
    const Rational shift(-m);
    const FuncSymbolSeries A = bilinear_substitute(Gp, bv, +1) * shift_x(bilinear_substitute(Gm, bv, -1), shift);
    const FuncSymbolSeries B = bilinear_substitute(Gm, bv, +1) * shift_x(bilinear_substitute(Gp, bv, -1), shift);
    return A.mul_left(spectral_power<XPoly>(m)) - B.mul_left(spectral_power<XPoly>(-m));
}

CheckResult toda_regularity(const TauSeries &T, int m, int y_degree)
{
    CheckResult out;
    out.id = "toda-regularity";
    out.params = "m=" + std::to_string(m);
    const FuncSymbolSeries e = toda_expression(T, m, y_degree);
    for (int k = 1; k <= inner_window(); ++k) tally_lambda(out, e, 1 - k, "lam^-" + std::to_string(k));
    out.notes.push_back("regularity read on lambda^{-1..-" + std::to_string(inner_window()) + "}");
    return out;
}

} // namespace eth
