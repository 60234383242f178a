#pragma once

#include <map>
#include <string>
#include <vector>

#include "eth/check.hpp"
#include "eth/eth_core.hpp"

namespace eth {

using FuncSeries = TimeSeries<XPoly>;
using FuncSymbol = LambdaSeries<XPoly>;
using FuncSymbolSeries = TimeSeries<FuncSymbol>;

/// a_N as a polynomial in the commuting symbols eps d_{n,1}:
/// terms[gamma] is the coefficient of prod_n (eps d_{n,1})^{gamma[n]}.
struct SchurOp
{
    int N = 0;
    std::map<std::vector<int>, Rational> terms;

    /// lambda-weight sum_n (n + 1) gamma[n] of a monomial.
    static int weight(const std::vector<int> &gamma);
    std::string str() const;
};

/// Coefficient of lambda^{-N} in exp(-sum_n n! lambda^{-n-1} eps d_{n,1}) - 1.
SchurOp schur_a(int N);

/// Applies a_N (sign = +1) or a_N(-d) (sign = -1) to f. Derivatives in
/// times absent from the variable set give zero.
FuncSeries apply_schur(const SchurOp &a, const FuncSeries &f, int sign = 1);

/// Symbol data of a wave pair with function coefficients.
struct WaveLogs
{
    FuncSymbolSeries PL;       // left symbol of P_L
    FuncSymbolSeries PR;       // right symbol of P_R
    FuncSeries w0;             // lambda^0 coefficient of PR
    FuncSymbolSeries log_PL;   // sum_{N>=1} b_N lambda^{-N}
    FuncSymbolSeries log_PR;   // sum_{N>=0} b~_N lambda^{-N}

    FuncSeries b(int N) const;
    FuncSeries bt(int N) const;
};

FuncSymbolSeries left_symbols(const WaveSeries &P);
FuncSymbolSeries right_symbols(const WaveSeries &P);
WaveSeries from_left_symbols(const FuncSymbolSeries &s);
WaveSeries from_right_symbols(const FuncSymbolSeries &s);

/// log of a symbol series 1 + (negative powers of lambda).
FuncSymbolSeries log_unipotent(const FuncSymbolSeries &f);
/// log of a q-series whose constant term is 1 + (positive eps-order).
FuncSeries log_near_one(const FuncSeries &f, const char *what);

WaveLogs wave_log_coeffs(const WavePair &W);

struct TauSeries
{
    FuncSeries logtau;
    /// Monomials built only from q_{n,0}, n >= 1, including 1: their
    /// x-independent parts are fixed by the gauge seed (zero by default).
    std::vector<Monomial> gauge;
    WaveLogs logs;

    const VarsPtr &vars() const { return logtau.vars(); }
    /// d log tau / d q_{n,1}.
    FuncSeries beta(int n) const;
};

/// Integrates (tau-de2), (tau-de3) for log tau. Requires lambda-weighted
/// times: only then does every equation a_N log tau = b_N close within the
/// caps. gauge_seed adds x-independent constants to the gauge monomials.
/// Throws IntegrabilityError if the remaining equations fail.
TauSeries build_tau(const WavePair &W, const std::map<Monomial, Scalar> &gauge_seed = {});

/// Residual of the equations a_N log tau = b_N and
/// eps d_x log tau = B(b~_0) that were not used to construct log tau.
CheckResult tau_compatibility(const TauSeries &T);

/// log tau(x, q + [lambda^{-1}]) - log tau(x, q) - sum_{N>=1} b~_N(x - eps, q) lambda^{-N}.
CheckResult tau_de1_check(const TauSeries &T);

enum class FayIdentity { Id1, Id2, Id4, IdentityA, IdentityB };
const char *fay_name(FayIdentity which);
FayIdentity fay_from_name(const std::string &name);

/// LHS - RHS of the identity evaluated cell by cell; cells outside the
/// Miwa truncation slack are uncertified.
CheckResult fay_residual(FayIdentity which, const WavePair &W);

/// P_L = tau(x, q - [lambda^{-1}]) / tau, P_R = tau(x + eps, q + [lambda^{-1}]) / tau.
WavePair tau_to_waves(const TauSeries &T);

} // namespace eth
