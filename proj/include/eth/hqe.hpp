#pragma once

#include <string>

#include "eth/check.hpp"
#include "eth/tau.hpp"

namespace eth {

enum class KernelSide { L, R };

/// W_L = symbol(P_L) exp(E(q)), W_R = exp(-E(q)) symbol(P_R) with
/// E(q) = sum_n lambda^{n+1} q_{n,1} / (2 eps (n+1)!)
///      + sum_{n>0} lambda^n (D - C_n) q_{n,0} / (eps n!).
struct WaveKernel
{
    SymbolSeries symbol;
    KernelSide side = KernelSide::L;
    std::string provenance;
};

/// exp(sign E(q)) on single-mode times.
SymbolSeries kernel_exponential(const VarsPtr &vars, int sign);

WaveKernel wave_kernel(const WavePair &W, KernelSide side, const std::string &provenance = "waves");

/// The four reductions of the vertex operators applied to tau. With the
/// stored log tau normalised so that P_L = tau(q - [lambda^{-1}]) / tau,
/// the factor written tau(x - eps/2, q) in the reductions is the stored tau
/// at x itself.
enum class VertexCombo {
    DeltaSharpPlus,   // tau W_L,    power +(q00 + x)/eps
    DeltaSharpMinus,  // tau W_R^#,  power -(q00 + x)/eps
    DeltaMinus,       // W_R tau,    power -(q00 + x)/eps
    DeltaPlus,        // W_L^# tau,  power +(q00 + x)/eps
};

/// body times (lambda / sqrt Q)^{power (q00 + x)/eps}; the power is kept as
/// integer data and resolved when two outputs are paired.
struct VertexOutput
{
    SymbolSeries body;
    int power = 0;
};

/// tau = exp(log tau) with the x-independent eps^{<=0} constant removed
/// (a constant factor; tau is defined up to such factors).
FuncSeries tau_values(const TauSeries &T);

VertexOutput vertex_apply(const TauSeries &T, VertexCombo which);
/// Same, reusing waves and tau values computed from T.
VertexOutput vertex_apply(const WavePair &W, const FuncSeries &tau, VertexCombo which);

/// The four vertex outputs substituted into the two tensor slots
/// (q' = xbar + y, q'' = xbar - y); independent of m.
struct HqePairing
{
    SymbolSeries f1p, f2p, f3m, f4m;
    int power1 = 0, power2 = 0;
};
HqePairing hqe_pairing(const TauSeries &T, int y_degree);

/// Paired HQE expression at q'_{00} - q''_{00} = m eps on bilinear times
/// (xbar, y) with y-degree at most y_degree:
///   (lambda/sqrt Q)^m f1(q') f3(q'') - (lambda/sqrt Q)^{-m} f2(q') f4(q'').
/// The q''-factors carry x -> x - m eps.
SymbolSeries hqe_expression(const HqePairing &P, int m);
SymbolSeries hqe_expression(const TauSeries &T, int m, int y_degree);

/// Coefficient of lambda^{-r} of the HQE expression (the residue of
/// lambda^r (...) d lambda / lambda).
CheckResult hqe_residual(const HqePairing &P, int m, int r);
CheckResult hqe_residual(const TauSeries &T, int m, int r, int y_degree);

/// Coefficients of lambda^{-k}, 1 <= k <= W_in, of the expression times
/// d lambda / lambda, i.e. of lambda^{1-k} in hqe_expression.
CheckResult hqe_regularity(const HqePairing &P, int m);
CheckResult hqe_regularity(const TauSeries &T, int m, int y_degree);

/// Same cells as hqe_regularity, read as residues r = 0..W_in - 1.
CheckResult hqe_residual_sweep(const HqePairing &P, int m);
CheckResult hqe_residual_sweep(const TauSeries &T, int m, int y_degree);

/// log tau restricted to q_{n,0} = 0 for n > 0 (a Toda tau-function).
TauSeries toda_slice(const TauSeries &T);

/// (lambda/sqrt Q)^m G+(q') G-(q'') - (lambda/sqrt Q)^{-m} G-(q') G+(q'') with
/// G+ tau = e^{xi} tau(x, q - [lambda^{-1}]), G- tau = e^{-xi} tau(x + eps, q + [lambda^{-1}]),
/// xi = sum lambda^{n+1} q_{n,1} / (2 (n+1)! eps). Throws PreconditionError
/// if log tau depends on some q_{n,0}, n > 0.
FuncSymbolSeries toda_expression(const TauSeries &T, int m, int y_degree);
CheckResult toda_regularity(const TauSeries &T, int m, int y_degree);

} // namespace eth
