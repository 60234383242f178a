#include "eth/kdv.hpp"

namespace eth {

namespace {

MuSeries mu_const(const Scalar &c) { return MuSeries(c); }

MuTimeSeries as_mu(const TimeSeries<Scalar> &f)
{
    return f.map_coeffs([](const Scalar &c) { return mu_const(c); });
}

Rational odd_double_factorial(int n)  // (2n+1)!!
{
    Rational r = 1;
    for (int k = 2 * n + 1; k > 1; k -= 2) r *= k;
    return r;
}

// sign * eta over the times with the given role
MuTimeSeries eta(const VarsPtr &vars, int role, Rational sign)
{
    MuTimeSeries e(vars);
    for (int i = 0; i < vars->size(); ++i) {
        const TimeVar &v = vars->var(i);
        if (v.role != role) continue;
        const Scalar c = Scalar::monomial(sign / odd_double_factorial(v.n), ScalarKey{-1, 0, 0});
        e += MuTimeSeries::variable(vars, i, MuSeries::generator(2 * v.n + 1, c));
    }
    return e;
}

void require_kdv(const VarsPtr &vars)
{
    for (int i = 0; i < vars->size(); ++i)
        if (vars->var(i).alpha >= 0) throw PreconditionError("kdv: tau must live on KdV times");
}

void tally_mu(CheckResult &r, const MuTimeSeries &f, int j, const std::string &label)
{
    for (const Monomial &m : f.vars()->all_monomials()) {
        const MuSeries s = f.coeff(m);
        const Scalar c = s.coeff(j);
        r.cell("[" + f.vars()->monomial_str(m) + "] " + label, s.window().contains(j), c.is_zero(), c.str());
    }
}

} // namespace

KdvTau KdvTau::from_log(const TimeSeries<Scalar> &logtau)
{
    require_kdv(logtau.vars());
    const Scalar c0 = logtau.constant();
    if (!c0.is_zero() && c0.low_eps() < 1)
        throw PreconditionError("kdv: log tau(0) = " + c0.str() + " has no exponential in the ground ring");
    return KdvTau{ts_exp(logtau)};
}

MuTimeSeries kdv_wave_from_tau(const KdvTau &T)
{
    require_kdv(T.vars());
    if (T.tau.constant().is_zero()) throw PreconditionError("kdv: tau vanishes at q = 0");
    return miwa_shift_as<SeriesKind::Mu>(T.tau, -1) * as_mu(ts_inverse(T.tau));
}

MuTimeSeries kdv_vertex(const KdvTau &T, int sign)
{
    require_kdv(T.vars());
    return ts_exp(eta(T.vars(), 0, sign)) * miwa_shift_as<SeriesKind::Mu>(T.tau, -sign);
}

MuTimeSeries kdv_hirota_expression(const KdvTau &T, int y_degree)
{
    require_kdv(T.vars());
    const VarsPtr bv = TimeVars::bilinear(*T.vars(), y_degree);
    const MuTimeSeries down = miwa_shift_as<SeriesKind::Mu>(T.tau, -1);
    const MuTimeSeries up = miwa_shift_as<SeriesKind::Mu>(T.tau, +1);
    // eta(q') - eta(q'') = 2 eta(y); applied exactly rather than as a product
    // of two truncated exponentials in xbar
    const MuTimeSeries A = bilinear_substitute(down, bv, +1) * bilinear_substitute(up, bv, -1);
    const MuTimeSeries B = bilinear_substitute(up, bv, +1) * bilinear_substitute(down, bv, -1);
    const MuTimeSeries E = ts_exp(eta(bv, 2, 2)) * A - ts_exp(eta(bv, 2, -2)) * B;
    return E.mul_left(MuSeries::generator(-1, Scalar(1L)));
}

CheckResult kdv_parity(const MuTimeSeries &e)
{
    CheckResult out;
    out.id = "kdv-parity";
    const int w = 2 * truncation().lambda_inner + 1;
    for (int j = -w; j <= w; j += 2) tally_mu(out, e, j, "mu^" + std::to_string(j));
    return out;
}

CheckResult kdv_regularity(const MuTimeSeries &e)
{
    CheckResult out;
    out.id = "kdv-regularity";
    for (int k = 1; k <= truncation().lambda_inner; ++k) tally_mu(out, e, -2 * k, "lam^-" + std::to_string(k));
    return out;
}

CheckResult kdv_hirota_residual(const KdvTau &T, int y_degree)
{
    const MuTimeSeries e = kdv_hirota_expression(T, y_degree);
    CheckResult out = kdv_parity(e);
    out.merge(kdv_regularity(e));
    out.id = "kdv-hirota";
    out.params = "y_degree=" + std::to_string(y_degree);
    out.notes.push_back("lambda-regularity read on lambda^{-1..-" + std::to_string(truncation().lambda_inner) +
                        "}, parity on odd mu-degrees up to " + std::to_string(2 * truncation().lambda_inner + 1));
    return out;
}

} // namespace eth
