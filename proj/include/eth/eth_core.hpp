#pragma once

#include <string>
#include <vector>

#include "eth/time_series.hpp"

namespace eth {

using WaveSeries = TimeSeries<ShiftSeries>;
using SymbolSeries = TimeSeries<Symbol>;

/// L = Lambda + u + Q e^v Lambda^{-1} at q = 0. v must have no eps^0 part.
struct LaxOp
{
    XPoly u;
    XPoly v;

    ShiftSeries series() const;
};

struct FlowIndex
{
    int n = 0;
    int alpha = 0;

    std::string str() const;
    friend bool operator==(const FlowIndex &, const FlowIndex &) = default;
};

/// P_L = 1 + w_1 Lambda^{-1} + ..., P_R = w~_0 + Lambda^{-1} w~_1 + ...
struct WavePair
{
    WaveSeries P_L;
    WaveSeries P_R;
    int degree = 0;
};

/// C_0 = log(Q)/2, C_n = C_{n-1} + 1/n.
Scalar harmonic(int n);

/// e^v as an eps-series; v needs positive eps-order.
XPoly exp_eps(const XPoly &v);

/// Solves L P_L = P_L Lambda with zero integration constants.
ShiftSeries dress_left(const LaxOp &L);
/// Solves P_R L^# = Lambda P_R with zero integration constants.
ShiftSeries dress_right(const LaxOp &L);

/// w~_0 with w~_0(x) / w~_0(x - eps) = e^v, w~_0 = 1 at v = 0.
XPoly right_gauge_factor(const LaxOp &L);
/// Right dressing operator in the gauge P_L P_R = w~_0, P_L = dress_left(L).
/// Differs from dress_right by a left factor with x-independent
/// coefficients; only this gauge makes P_L P_R = (P_L P_R)^# hold as an
/// identity of series.
ShiftSeries dress_right_paired(const LaxOp &L);

/// L^# = Lambda e^v + u + Q Lambda^{-1}.
ShiftSeries lax_sharp(const LaxOp &L);

/// P_L Lambda P_L^{-1}, checked to be a Lax operator (support {-1,0,1})
/// and returned as an exact polynomial in Lambda. With strict = false the
/// support is projected instead of checked.
ShiftSeries lax_from_left(const ShiftSeries &P_L, bool strict = true);
WaveSeries lax_from_waves(const WavePair &W, bool strict = true);

/// log L = (log Q + eps (P_R^{-1} dP_R)^# - eps (dP_L) P_L^{-1}) / 2.
ShiftSeries log_lax(const ShiftSeries &P_L, const ShiftSeries &P_R);
WaveSeries log_lax(const WavePair &W);

/// A_{n,0} = (2 L^n (log L - C_n) / (n! eps))_+, A_{n,1} = (L^{n+1} / ((n+1)! eps))_+.
ShiftSeries flow_gen(FlowIndex idx, const ShiftSeries &L, const ShiftSeries &logL);
WaveSeries flow_gen(FlowIndex idx, const WaveSeries &L, const WaveSeries &logL);

/// The generator before projection (L^{n+1}/((n+1)! eps), etc.).
ShiftSeries flow_full(FlowIndex idx, const ShiftSeries &L, const ShiftSeries &logL);
WaveSeries flow_full(FlowIndex idx, const WaveSeries &L, const WaveSeries &logL);

/// eps^{-1} [A, L] with the support check; throws ConsistencyError if the
/// result leaves {-1, 0} (the Lambda^1 coefficient must vanish).
ShiftSeries lax_rhs(FlowIndex idx, const ShiftSeries &L, const ShiftSeries &logL);

/// Flows available on a variable set (q_{0,0} included: it acts as d/dx).
std::vector<FlowIndex> flow_indices(const TimeVars &vars);
/// d/dq_{n,alpha} of a series on single-mode times (q_{0,0} -> d/dx).
template <class C>
TimeSeries<C> time_derivative(const TimeSeries<C> &f, FlowIndex idx)
{
    if (idx.n == 0 && idx.alpha == 0) return coeff_dx(f);
    const int i = f.vars()->index(idx.n, idx.alpha);
    if (i < 0) throw PreconditionError("time_derivative: flow " + idx.str() + " not in the variable set");
    return f.derivative(i);
}

/// d_i A_j - d_j A_i - [A_i, A_j].
WaveSeries zs_residual(FlowIndex i, FlowIndex j, const WavePair &W, bool strict = true);

/// Degree-by-degree solution of the wave equations in q to the caps of vars.
WavePair evolve_waves(const ShiftSeries &P_L0, const ShiftSeries &P_R0, const VarsPtr &vars);

/// Residual of L P_L - P_L Lambda and P_R L^# - Lambda P_R.
ShiftSeries dressing_residual_left(const ShiftSeries &L, const ShiftSeries &P_L);
ShiftSeries dressing_residual_right(const ShiftSeries &L, const ShiftSeries &P_R);

/// exp of the y-dependent exponent shared by both wave series,
/// sum_n g^{n+1} y_{n,1}/(eps (n+1)!) + sum_{n>0} 2 g^n (D - C_n) y_{n,0}/(eps n!),
/// for g = Lambda (operator) or lambda (symbol). sign flips y.
WaveSeries vertex_exponential_op(const VarsPtr &bilinear, int sign);
SymbolSeries vertex_exponential_sym(const VarsPtr &bilinear, int sign);

/// Condition (c) at exponent r on bilinear times.
WaveSeries prop2_operator_residual(int r, const WavePair &W, const VarsPtr &bilinear);
/// P_L Lambda P_L^{-1} - (P_R^{-1} Lambda P_R)^# on single-mode times.
WaveSeries prop2_lax_residual(const WavePair &W);

/// Integrand E(lambda) = (lambda/sqrt Q)^m W_L(q') W_R(x - m eps, q'')
///   - (lambda/sqrt Q)^{-m} W_R(q')^# W_L(x - m eps, q'')^#
/// whose lambda^{-r} coefficient is the condition (d) residual.
SymbolSeries prop2_integrand(int m, const WavePair &W, const VarsPtr &bilinear);

/// Coefficient of lambda^{-r} of every coefficient of the integrand.
/// Monomials whose window misses -r are reported through unknown.
struct ResidueResult
{
    TimeSeries<DiffOp> value;
    std::vector<Monomial> unknown;

    bool vanishes() const { return value.is_zero() && unknown.empty(); }
};
ResidueResult residue_at(const SymbolSeries &integrand, int r);
ResidueResult prop2_residue_residual(int m, int r, const WavePair &W, const VarsPtr &bilinear);

/// Constant-in-q wave pair (D = 0).
WavePair constant_waves(const ShiftSeries &P_L, const ShiftSeries &P_R, const VarsPtr &vars);

} // namespace eth
