#pragma once

#include "eth/check.hpp"
#include "eth/time_series.hpp"

namespace eth {

/// Laurent series in mu = (2 lambda)^{1/2}. Integer lambda-powers are the
/// even mu-degrees.
using MuSeries = Laurent<Scalar, SeriesKind::Mu>;
using MuTimeSeries = TimeSeries<MuSeries>;

/// A KdV tau-function as a truncated series in q_0 .. q_N (TimeVars::kdv).
/// q_0 also carries x: tau(q_0 + x, q_1, ...).
struct KdvTau
{
    TimeSeries<Scalar> tau;

    const VarsPtr &vars() const { return tau.vars(); }
    /// tau = exp(log tau); throws if the constant of log tau is not exp-able
    /// in the ground ring (it must vanish up to positive eps-order).
    static KdvTau from_log(const TimeSeries<Scalar> &logtau);
};

/// tau(q - [mu]) / tau(q) with [mu]_n = (2n-1)!! mu^{-2n-1} eps, i.e.
/// 1 + w_1/mu + w_2/mu^2 + ... Throws PreconditionError if tau(0) = 0.
MuTimeSeries kdv_wave_from_tau(const KdvTau &T);

/// Gamma^{+-} tau = exp(+-eta(q, mu)) tau(q -+ [mu]),
/// eta = sum_n mu^{2n+1} q_n / ((2n+1)!! eps).
MuTimeSeries kdv_vertex(const KdvTau &T, int sign);

/// (Gamma+ x Gamma- - Gamma- x Gamma+)(tau x tau) on (xbar, y) times with
/// y-degree at most y_degree, times d lambda / sqrt(lambda) written as
/// mu^{-1} d lambda (a constant sqrt 2 dropped). The result is the
/// coefficient of d lambda.
MuTimeSeries kdv_hirota_expression(const KdvTau &T, int y_degree);

/// Odd mu-powers |j| <= 2 W_in + 1 of the expression (single-valuedness in lambda).
CheckResult kdv_parity(const MuTimeSeries &e);
/// lambda^{-k}, 1 <= k <= W_in, read off mu^{-2k} = (2 lambda)^{-k}.
CheckResult kdv_regularity(const MuTimeSeries &e);

/// Parity and regularity together; parity cells come first.
CheckResult kdv_hirota_residual(const KdvTau &T, int y_degree);

} // namespace eth
