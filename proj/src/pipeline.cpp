#include "eth/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <optional>
#include <sstream>
#include <thread>

#include "eth/hqe.hpp"
#include "eth/kdv.hpp"
#include "eth/tau.hpp"

namespace eth {

Truncation RunConfig::default_run_truncation()
{
    // identity (a) on constant data reaches eps^-13
    Truncation t;
    t.eps_min = -16;
    t.eps_max = 16;
    return t;
}

void RunConfig::validate() const
{
    auto need = [](bool ok, const char *what) {
        if (!ok) throw PreconditionError(std::string("config: ") + what);
    };
    need(trunc.eps_min <= 0 && trunc.eps_max >= 0, "eps window must contain 0");
    need(trunc.Lambda_window >= 1 && trunc.lambda_window >= 1, "windows must be >= 1");
    need(trunc.lambda_inner >= 1 && trunc.lambda_inner <= trunc.lambda_window,
         "lambda_inner_window must lie inside lambda_window");
    need(trunc.x_degree_cap >= 1, "x_degree_cap must be >= 1");
    need(n_max >= 0, "N_max must be >= 0");
    need(degree >= 1 && y_degree >= 1, "D and D_y must be >= 1");
    need(m_max >= 0 && r_max >= 0, "M_max and R must be >= 0");
    need(jobs >= 1, "jobs must be >= 1");
    need(std::find(pipelines().begin(), pipelines().end(), pipeline) != pipelines().end(), "unknown pipeline");
    if (!fixture.empty()) {
        const auto &fx = fixtures();
        need(std::any_of(fx.begin(), fx.end(), [&](const FixtureInfo &f) { return f.name == fixture; }),
             "unknown fixture");
    }
    if (!data.v.is_zero())
        for (const Scalar &c : data.v.coeffs())
            need(c.is_zero() || c.low_eps() >= 1, "v must have no eps^{<=0} part");
}

const std::vector<FixtureInfo> &fixtures()
{
    static const std::vector<FixtureInfo> list = {
        {"vacuum", "u = 0, v = 0", false},
        {"constant-u", "u = 1, v = 0", false},
        {"perturbed-negative", "vacuum tau with log tau + q_{0,1} x / eps (negative control)", false},
        {"kdv-trivial", "KdV tau = 1", true},
        {"kdv-exponential", "KdV tau = exp(q_0 / eps)", true},
        {"kdv-linear", "KdV tau = 1 + q_0", true},
        {"kdv-quadratic", "KdV tau = 1 + q_0^2 (negative control)", true},
    };
    return list;
}

RunConfig with_fixture(RunConfig cfg, const std::string &name)
{
    cfg.fixture = name;
    cfg.data = LaxOp{};
    if (name == "constant-u") cfg.data.u = XPoly(Scalar(1L));
    cfg.validate();
    return cfg;
}

const std::vector<std::string> &pipelines()
{
    static const std::vector<std::string> list = {"dress", "evolve", "tau", "prop2", "fay",
                                                  "hqe",   "toda",   "kdv", "all"};
    return list;
}

Verdict combine(const std::vector<CheckRecord> &checks)
{
    bool inconclusive = checks.empty();
    for (const auto &c : checks) {
        if (c.verdict() == Verdict::Fail) return Verdict::Fail;
        if (c.verdict() == Verdict::Inconclusive) inconclusive = true;
    }
    return inconclusive ? Verdict::Inconclusive : Verdict::Pass;
}

int exit_code(Verdict v)
{
    switch (v) {
    case Verdict::Pass: return 0;
    case Verdict::Fail: return 1;
    default: return 2;
    }
}

namespace {

using Task = std::function<std::vector<CheckRecord>()>;

template <class F>
void add(std::vector<Task> &tasks, F f)
{
    tasks.push_back([f] { return std::vector<CheckRecord>{f()}; });
}

bool is_kdv_fixture(const std::string &name)
{
    for (const auto &f : fixtures())
        if (f.name == name) return f.kdv;
    return false;
}

std::string window_str(const RunConfig &c)
{
    std::ostringstream os;
    os << "D=" << c.degree << " D_y=" << c.y_degree << " N_max=" << c.n_max << " Lambda=[-" << c.trunc.Lambda_window
       << "," << c.trunc.Lambda_window << "] lambda=[-" << c.trunc.lambda_window << "," << c.trunc.lambda_window
       << "] inner=" << c.trunc.lambda_inner << " eps=[" << c.trunc.eps_min << "," << c.trunc.eps_max
       << "] x<=" << c.trunc.x_degree_cap;
    return os.str();
}

template <class L>
void tally_series(CheckResult &r, const std::string &where, const L &s)
{
    detail::tally_coeff(r, where, s, true, Window{}, Window{});
}

CheckResult make(const std::string &id, const std::string &params)
{
    CheckResult r;
    r.id = id;
    r.params = params;
    return r;
}

// Runs f; exhausted windows and rejected inputs become INCONCLUSIVE,
// failed integrability becomes a failing cell.
CheckRecord guarded(const std::string &id, const std::string &params, const std::string &window,
                    const std::function<CheckResult()> &f)
{
    CheckRecord rec;
    rec.window = window;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        rec.result = f();
        if (rec.result.id.empty()) rec.result.id = id;
        if (rec.result.params.empty()) rec.result.params = params;
    } catch (const TruncationExhausted &e) {
        rec.result = make(id, params);
        rec.result.notes.push_back("truncation exhausted (" + e.window() + "): " + e.what());
    } catch (const PreconditionError &e) {
        rec.result = make(id, params);
        rec.result.notes.push_back(std::string("precondition: ") + e.what());
    } catch (const std::exception &e) {
        rec.result = make(id, params);
        rec.result.cell("error", true, false, e.what());
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

template <class C>
CheckResult tally_result(const std::string &id, const std::string &params, const TimeSeries<C> &f)
{
    CheckResult r = make(id, params);
    tally(r, f);
    return r;
}

std::string mr(int m, int r) { return "m=" + std::to_string(m) + " r=" + std::to_string(r); }

void add_kdv(std::vector<Task> &tasks, const RunConfig &cfg, const std::string &win)
{
    const int cap = 2 * cfg.degree - 1;
    const int yd = 2 * cfg.y_degree + 1;
    const VarsPtr vars = TimeVars::kdv(cfg.n_max, cap, DegreeWeighting::Lambda);
    const int i0 = vars->index(0, -1);
    TimeSeries<Scalar> tau(vars, Scalar(1L));
    const TimeSeries<Scalar> q0 = TimeSeries<Scalar>::variable(vars, i0);
    std::optional<KdvTau> T;
    if (cfg.fixture == "kdv-exponential")
        T = KdvTau::from_log(TimeSeries<Scalar>::variable(vars, i0, Scalar::monomial(1, ScalarKey{-1, 0, 0})));
    else if (cfg.fixture == "kdv-linear") T = KdvTau{tau + q0};
    else if (cfg.fixture == "kdv-quadratic") T = KdvTau{tau + q0 * q0};
    else T = KdvTau{tau};
    const std::string kwin = win + " kdv-cap=" + std::to_string(cap) + " kdv-y=" + std::to_string(yd);

    add(tasks, [T, kwin] {
        return guarded("kdv-wave", "", kwin, [&] {
            // leading coefficient of the wave series is 1
            CheckResult r = make("kdv-wave", "mu^0");
            const MuTimeSeries w = kdv_wave_from_tau(*T);
            for (const Monomial &m : w.vars()->all_monomials()) {
                const Scalar c = w.coeff(m).coeff(0) - (m == Monomial{} ? Scalar(1L) : Scalar());
                r.cell("[" + w.vars()->monomial_str(m) + "] mu^0", w.coeff(m).window().contains(0), c.is_zero(),
                       c.str());
            }
            return r;
        });
    });
    add(tasks, [T, kwin, yd] {
        return guarded("kdv-hirota", "y_degree=" + std::to_string(yd), kwin,
                       [&] { return kdv_hirota_residual(*T, yd); });
    });
}

} // namespace

RunReport run(const RunConfig &cfg_in)
{
    RunConfig cfg = cfg_in;
    if (!cfg.fixture.empty()) {
        const int jobs = cfg.jobs;
        const std::string pipe = cfg.pipeline;
        cfg = with_fixture(cfg, cfg.fixture);
        cfg.jobs = jobs;
        cfg.pipeline = pipe;
    }
    cfg.validate();
    const bool kdv = is_kdv_fixture(cfg.fixture);
    if (kdv && cfg.pipeline != "kdv" && cfg.pipeline != "all")
        throw PreconditionError("config: fixture " + cfg.fixture + " only supports the kdv pipeline");
    if (!kdv && cfg.pipeline == "kdv") throw PreconditionError("config: the kdv pipeline needs a kdv-* fixture");

    const auto t0 = std::chrono::steady_clock::now();
    TruncationScope scope(cfg.trunc);
    const std::string win = window_str(cfg);
    std::vector<Task> tasks;
    auto want = [&](const char *p) { return cfg.pipeline == p || cfg.pipeline == "all"; };

    if (kdv) {
        add_kdv(tasks, cfg, win);
    } else {
        const LaxOp L = cfg.data;
        const VarsPtr vars = TimeVars::single(cfg.n_max, cfg.degree, DegreeWeighting::Lambda);
        const VarsPtr bv = TimeVars::bilinear(*vars, cfg.y_degree);

        if (want("dress")) {
            add(tasks, [L, win] {
                return guarded("dress-left", "", win, [&] {
                    CheckResult r = make("dress-left", "L P_L - P_L Lambda");
                    tally_series(r, "[1]", dressing_residual_left(L.series(), dress_left(L)));
                    return r;
                });
            });
            add(tasks, [L, win] {
                return guarded("dress-right", "", win, [&] {
                    CheckResult r = make("dress-right", "P_R L^# - Lambda P_R");
                    tally_series(r, "[1]", dressing_residual_right(L.series(), dress_right_paired(L)));
                    return r;
                });
            });
        }

        const bool need_waves = want("evolve") || want("prop2") || want("fay") || want("tau") || want("hqe") ||
                                want("toda");
        std::vector<CheckRecord> setup;
        std::shared_ptr<WavePair> W;
        if (need_waves) {
            CheckRecord rec = guarded("evolve", "", win, [&] {
                W = std::make_shared<WavePair>(evolve_waves(dress_left(L), dress_right_paired(L), vars));
                CheckResult r = make("evolve", "D=" + std::to_string(cfg.degree));
                r.certified = 1;
                return r;
            });
            if (!W) setup.push_back(rec);
        }

        if (W && want("evolve")) {
            const auto flows = flow_indices(*vars);
            for (std::size_t a = 0; a < flows.size(); ++a)
                for (std::size_t b = a + 1; b < flows.size(); ++b) {
                    const FlowIndex i = flows[a], j = flows[b];
                    add(tasks, [W, i, j, win] {
                        const std::string p = i.str() + " " + j.str();
                        return guarded("zs", p, win, [&] { return tally_result("zs", p, zs_residual(i, j, *W)); });
                    });
                }
        }

        if (W && want("prop2")) {
            add(tasks, [W, win] {
                return guarded("prop2-lax", "", win,
                               [&] { return tally_result("prop2-lax", "", prop2_lax_residual(*W)); });
            });
            for (int r = 0; r <= cfg.r_max; ++r)
                add(tasks, [W, bv, r, win] {
                    const std::string p = "r=" + std::to_string(r);
                    return guarded("prop2-operator", p, win,
                                   [&] { return tally_result("prop2-operator", p, prop2_operator_residual(r, *W, bv)); });
                });
            // the integrand is shared by every r of one m
            for (int m = -cfg.m_max; m <= cfg.m_max; ++m)
                tasks.push_back([W, bv, m, rmax = cfg.r_max, win] {
                    std::optional<SymbolSeries> integrand;
                    std::exception_ptr err;
                    try {
                        integrand = prop2_integrand(m, *W, bv);
                    } catch (...) {
                        err = std::current_exception();
                    }
                    std::vector<CheckRecord> recs;
                    for (int r = 0; r <= rmax; ++r)
                        recs.push_back(guarded("prop2-residue", mr(m, r), win, [&] {
                            if (err) std::rethrow_exception(err);
                            const ResidueResult res = residue_at(*integrand, r);
                            CheckResult out = make("prop2-residue", mr(m, r));
                            for (const Monomial &mono : bv->all_monomials()) {
                                const bool known =
                                    std::find(res.unknown.begin(), res.unknown.end(), mono) == res.unknown.end();
                                const DiffOp c = res.value.coeff(mono);
                                out.cell("[" + bv->monomial_str(mono) + "] lam^-" + std::to_string(r), known,
                                         c.is_zero(), c.str());
                            }
                            return out;
                        }));
                    return recs;
                });
        }

        if (W && want("fay")) {
            for (FayIdentity f : {FayIdentity::Id1, FayIdentity::Id2, FayIdentity::Id4, FayIdentity::IdentityA,
                                  FayIdentity::IdentityB}) {
                const std::string id = std::string("fay-") + fay_name(f);
                add(tasks, [W, f, id, win] {
                    return guarded(id, "", win, [&] {
                        CheckResult r = fay_residual(f, *W);
                        r.id = id;
                        return r;
                    });
                });
            }
        }

        std::shared_ptr<TauSeries> T;
        if (W && (want("tau") || want("hqe") || want("toda"))) {
            CheckRecord rec = guarded("tau-build", "", win, [&] {
                T = std::make_shared<TauSeries>(build_tau(*W));
                CheckResult r = make("tau-build", "");
                r.certified = 1;
                return r;
            });
            if (!T) setup.push_back(rec);
        }
        if (T && cfg.fixture == "perturbed-negative")
            T->logtau += FuncSeries::variable(vars, vars->index(0, 1),
                                              Scalar::monomial(1, ScalarKey{-1, 0, 0}) * XPoly::x());

        if (T && want("tau")) {
            add(tasks, [T, win] { return guarded("tau-compat", "", win, [&] { return tau_compatibility(*T); }); });
            add(tasks, [T, win] { return guarded("tau-de1", "", win, [&] { return tau_de1_check(*T); }); });
            add(tasks, [T, W, win] {
                return guarded("tau-roundtrip", "", win, [&] {
                    const WavePair back = tau_to_waves(*T);
                    CheckResult r = make("tau-roundtrip", "P_L, P_R");
                    tally(r, back.P_L - W->P_L);
                    tally(r, back.P_R - W->P_R);
                    return r;
                });
            });
        }

        if (T && want("hqe")) {
            std::shared_ptr<HqePairing> P;
            CheckRecord rec = guarded("hqe", "", win, [&] {
                P = std::make_shared<HqePairing>(hqe_pairing(*T, cfg.y_degree));
                CheckResult r = make("hqe", "");
                r.certified = 1;
                return r;
            });
            if (!P) setup.push_back(rec);
            for (int m = -cfg.m_max; P && m <= cfg.m_max; ++m) {
                add(tasks, [P, m, win] {
                    return guarded("hqe-regularity", "m=" + std::to_string(m), win,
                                   [&] { return hqe_regularity(*P, m); });
                });
                // one record per m over 0 <= r <= R; the notes name the r with certified cells
                const int rmax = cfg.r_max;
                add(tasks, [P, m, rmax, win] {
                    const std::string p = "m=" + std::to_string(m) + " r=0.." + std::to_string(rmax);
                    return guarded("hqe-residue", p, win, [&] {
                        CheckResult out = make("hqe-residue", p);
                        std::string rs;
                        for (int r = 0; r <= rmax; ++r) {
                            const CheckResult one = hqe_residual(*P, m, r);
                            if (one.certified > 0) rs += (rs.empty() ? "" : ",") + std::to_string(r);
                            out.certified += one.certified;
                            out.uncertified += one.uncertified;
                            out.failed += one.failed;
                            for (const auto &w : one.nonzero)
                                if (out.nonzero.size() < 16) out.nonzero.push_back(w);
                        }
                        out.notes.push_back("certified r: " + (rs.empty() ? std::string("none") : rs));
                        return out;
                    });
                });
            }
        }

        if (T && want("toda")) {
            const int yd = cfg.y_degree;
            for (int m = -cfg.m_max; m <= cfg.m_max; ++m)
                add(tasks, [T, m, yd, win] {
                    return guarded("toda-regularity", "m=" + std::to_string(m), win,
                                   [&] { return toda_regularity(toda_slice(*T), m, yd); });
                });
        }

        // setup failures are reported first
        std::vector<Task> all;
        for (const auto &s : setup) add(all, [s] { return s; });
        for (auto &t : tasks) all.push_back(std::move(t));
        tasks = std::move(all);
    }

    RunReport rep;
    std::vector<std::vector<CheckRecord>> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) results[i] = tasks[i]();
    };
    const int n = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(tasks.size())));
    std::vector<std::thread> pool;
    for (int k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
    for (auto &t : pool) t.join();
    for (auto &r : results)
        for (auto &c : r) rep.checks.push_back(std::move(c));

    rep.global = combine(rep.checks);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

namespace {

struct Explanation
{
    const char *id;
    const char *text;
};

const Explanation kExplain[] = {
    {"dress-left", "L P_L = P_L Lambda for the left dressing operator P_L = 1 + w_1 Lambda^{-1} + ... built from the "
                   "initial Lax operator L = Lambda + u + Q e^v Lambda^{-1}. Cells: Lambda-coefficients in the Lambda window."},
    {"dress-right", "P_R L^# = Lambda P_R for the right dressing operator P_R = w~_0 + w~_1 Lambda^{-1} + ... in the "
                    "paired gauge. Cells: Lambda-coefficients in the Lambda window."},
    {"evolve", "Degree-by-degree solution of the wave equations d P_L/dq = -(A)_- P_L, d P_R/dq = (A)_+ P_R up to "
               "q-degree D."},
    {"zs", "Zero curvature d_i A_j - d_j A_i = [A_i, A_j] for every pair of flows, on the evolved wave pair. Cells: "
           "monomials of degree < D, Lambda window."},
    {"prop2-lax", "P_L Lambda P_L^{-1} = (P_R^{-1} Lambda P_R)^#: both wave operators dress the same Lax operator."},
    {"prop2-operator", "Operator form of the bilinear identity at exponent r on the (xbar, y) times: "
                       "W_L(q') Lambda^r W_L(q'')^{-1} against its right counterpart. Cells: monomials in xbar, y "
                       "with y-degree <= D_y."},
    {"prop2-residue", "Residue form: the lambda^{-r} coefficient of (lambda/sqrt Q)^m W_L(q') W_R(x - m eps, q'') - "
                      "(lambda/sqrt Q)^{-m} W_R(q')^# W_L(x - m eps, q'')^# vanishes. For P_L = P_R = 1 the cell "
                      "(m = -1, r = 1) is sqrt Q."},
    {"fay-id1", "S(q; lambda) R(x - eps, q - [lambda^{-1}]; lambda) = w~_0(x - eps, q - [lambda^{-1}]) with S, R the "
                "left and right symbols of P_L, P_R."},
    {"fay-id2", "S(q; lambda_2) R(x - eps, q - [lambda_1^{-1}] - [lambda_2^{-1}]; lambda_1) is symmetric under "
                "lambda_1 <-> lambda_2 (two independent spectral slots)."},
    {"fay-id4", "S(q; lambda) R(q - [lambda^{-1}]; lambda) = w~_0(q)."},
    {"fay-identity-a", "S(q; lambda_1) S(q - [lambda_1^{-1}]; lambda_2) is symmetric under lambda_1 <-> lambda_2."},
    {"fay-identity-b", "w~_0(q - [lambda^{-1}]) S(q; lambda) = w~_0(q) S(x + eps, q; lambda)."},
    {"tau-build", "Integrates log tau from the wave pair: a_N(eps d) log tau = b_N with Schur operators a_N, and "
                  "eps d_x log tau = B(b~_0) with the Bernoulli operator B."},
    {"tau-compat", "All equations a_N log tau = b_N and the x-line equation, including those not used by the solver."},
    {"tau-de1", "log tau(q + [lambda^{-1}]) - log tau(q) = log P_R - log w~_0 shifted by x - eps; the equation the "
                "solver never uses."},
    {"tau-roundtrip", "P_L = tau(q - [lambda^{-1}])/tau and P_R = tau(x + eps, q + [lambda^{-1}])/tau reproduce the "
                      "wave pair."},
    {"hqe", "Bilinear identity for tau: the vertex-operator expression at q'_{00} - q''_{00} = m eps is regular in "
            "lambda. Both the regularity and residue readings are reported."},
    {"hqe-regularity", "Coefficients of lambda^{-k}, 1 <= k <= W_in, of the HQE expression times d lambda/lambda "
                       "vanish for every (xbar, y) monomial."},
    {"hqe-residue", "lambda^{-r} coefficient of the HQE expression (residue of lambda^r (...) d lambda/lambda); "
                    "tau = 1 fails at (m = -1, r = 1) with sqrt Q."},
    {"toda-regularity", "Toda reduction: for tau independent of q_{n,0}, n > 0, the vertex expression with "
                        "xi = sum lambda^{n+1} q_{n,1}/(2 (n+1)! eps) is regular in lambda."},
    {"kdv-wave", "1 + w_1/mu + ... = tau(q - [mu])/tau(q), [mu]_n = (2n-1)!! mu^{-2n-1} eps, mu = (2 lambda)^{1/2}; "
                 "the leading coefficient is 1."},
    {"kdv-hirota", "d lambda/sqrt(lambda) (G+ x G- - G- x G+)(tau x tau) is single-valued and regular in lambda. "
                   "Parity cells: odd mu-degrees. Regularity cells: lambda^{-k}, 1 <= k <= W_in."},
};

} // namespace

const std::vector<std::string> &check_ids()
{
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto &e : kExplain) v.push_back(e.id);
        return v;
    }();
    return ids;
}

std::string explain(const std::string &check_id)
{
    for (const auto &e : kExplain)
        if (check_id == e.id) {
            std::ostringstream os;
            os << e.id << ": " << e.text << "\n"
               << "Truncation: verdicts hold to the configured order only (q-degree D, y-degree D_y, lambda inner "
                  "window W_in, Lambda window, eps window). Cells outside the certified windows are counted as "
                  "uncertified, never as zero. Miwa shifts are certified down to lambda^{-(N_max+1)}.";
            return os.str();
        }
    throw PreconditionError("explain: unknown check id '" + check_id + "'");
}

} // namespace eth
