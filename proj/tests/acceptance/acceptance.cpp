// Acceptance battery: one PASS/FAIL line per criterion.
//
//   eth_acceptance [--expect-red N,...]
//
// Exit status is 0 when every criterion passes, or when exactly the listed
// criteria fail (known-red criteria are still run and still printed as FAIL).

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "../unit/helpers.hpp"
#include "eth/hqe.hpp"
#include "eth/kdv.hpp"
#include "eth/pipeline.hpp"
#include "eth/tau.hpp"

using namespace testing_eth;

namespace {

struct Outcome
{
    bool pass = true;
    std::vector<std::string> why;
    std::map<std::string, std::string> cells;  // certified cell -> value

    void require(bool ok, const std::string &what)
    {
        if (ok) return;
        pass = false;
        if (why.size() < 6) why.push_back(what);
    }
    void absorb(const std::string &tag, const CheckResult &r)
    {
        for (const auto &c : r.cells) cells[tag + " " + c.where] = c.value;
    }
    void value(const std::string &key, const std::string &v) { cells[key] = v; }
};

Truncation grown(Truncation t, int g)
{
    t.eps_min -= g;
    t.eps_max += g;
    t.Lambda_window += g;
    t.lambda_window += g;
    t.lambda_inner += g;
    t.x_degree_cap += g;
    return t;
}

Truncation narrow(int lambda, int inner)
{
    Truncation t = RunConfig::default_run_truncation();
    t.Lambda_window = lambda;
    t.lambda_window = lambda;
    t.lambda_inner = inner;
    return t;
}

std::string first(const CheckResult &r)
{
    return r.nonzero.empty() ? std::string("-") : r.nonzero.front().where + " = " + r.nonzero.front().value;
}

std::string verdict_of(const CheckResult &r) { return verdict_str(r.verdict()); }

CheckResult cells_of(const std::string &id, const ShiftSeries &s)
{
    CheckResult r;
    r.id = id;
    detail::tally_coeff(r, "[1]", s, true, Window{}, Window{});
    return r;
}

template <class C>
CheckResult cells_of(const std::string &id, const TimeSeries<C> &f)
{
    CheckResult r;
    r.id = id;
    tally(r, f);
    return r;
}

// a check that must pass; its cells enter the fingerprint
void expect_pass(Outcome &o, const std::string &tag, const CheckResult &r)
{
    o.absorb(tag, r);
    o.require(r.pass(), tag + ": " + verdict_of(r) + " " + first(r));
}

void expect_fail(Outcome &o, const std::string &tag, const CheckResult &r)
{
    o.absorb(tag, r);
    o.require(r.verdict() == Verdict::Fail, tag + ": expected FAIL, got " + verdict_of(r));
}

struct Fixture
{
    std::string name;
    LaxOp L;
};

std::vector<Fixture> eth_fixtures()
{
    return {{"vacuum", LaxOp{XPoly(), XPoly()}}, {"constant-u", LaxOp{XPoly(sc(1)), XPoly()}}};
}

VarsPtr lam_vars(int nmax, int cap) { return TimeVars::single(nmax, cap, DegreeWeighting::Lambda); }

WavePair evolved(const LaxOp &L, const VarsPtr &vars)
{
    return evolve_waves(dress_left(L), dress_right_paired(L), vars);
}

TauSeries trivial_tau(const VarsPtr &vars)
{
    TauSeries T;
    T.logtau = FuncSeries(vars);
    return T;
}

// ---------------------------------------------------------------- criteria

Outcome algebra_laws(int g)
{
    TruncationScope scope(grown(RunConfig::default_run_truncation(), g));
    Outcome o;
    CheckResult r;
    std::mt19937 rng(5);
    for (int i = 0; i < 100; ++i) {
        const DiffOp A = random_diffop(rng, 3, 3), B = random_diffop(rng, 3, 3);
        const DiffOp lhs = sharp(A * B), d = lhs - sharp(B) * sharp(A), e = sharp(sharp(A)) - A;
        const std::string k = "diffop " + std::to_string(i);
        r.cell(k + " anti", true, d.is_zero(), d.str());
        r.cell(k + " invol", true, e.is_zero(), e.str());
        o.value(k + " sharp(AB)", lhs.str());
    }
    std::mt19937 rng2(29);
    for (int i = 0; i < 100; ++i) {
        const ShiftSeries A = random_shift_poly(rng2, -1, 1, 2, 2), B = random_shift_poly(rng2, -1, 1, 2, 2);
        const ShiftSeries lhs = ss_sharp(A * B);
        const std::string k = "shift " + std::to_string(i);
        r.cell(k + " anti", true, lhs == ss_sharp(B) * ss_sharp(A), lhs.str());
        r.cell(k + " invol", true, ss_sharp(ss_sharp(A)) == A, A.str());
        o.value(k + " ss_sharp(AB)", lhs.str());
    }
    expect_pass(o, "laws", r);
    o.require(r.certified >= 400, "fewer than 400 law cells");
    return o;
}

Outcome dressing(int g)
{
    TruncationScope scope(grown(RunConfig::default_run_truncation(), g));
    Outcome o;
    for (const Fixture &f : eth_fixtures()) {
        const ShiftSeries PL = dress_left(f.L), PR = dress_right(f.L);
        expect_pass(o, f.name + " left", cells_of("left", dressing_residual_left(f.L.series(), PL)));
        expect_pass(o, f.name + " right", cells_of("right", dressing_residual_right(f.L.series(), PR)));
        expect_pass(o, f.name + " right paired",
                    cells_of("right", dressing_residual_right(f.L.series(), dress_right_paired(f.L))));
        o.value(f.name + " w2", PL.coeff(-2).str());
        o.value(f.name + " w~2", right_symbol(PR).coeff(-2).str());
    }
    const LaxOp vac = eth_fixtures().front().L;
    const DiffOp w2 = dress_left(vac).coeff(-2), wt2 = right_symbol(dress_right(vac)).coeff(-2);
    o.require(w2 == DiffOp(sc(-1, 1, -1, 2) * X()), "vacuum w2 = " + w2.str());
    o.require(wt2 == DiffOp(sc(1, 1, -1, 2) * X()), "vacuum w~2 = " + wt2.str());
    return o;
}

Outcome zakharov_shabat(int g)
{
    TruncationScope scope(grown(RunConfig::default_run_truncation(), g));
    Outcome o;
    const VarsPtr vars = lam_vars(2, 3);
    const auto flows = flow_indices(*vars);
    for (const Fixture &f : eth_fixtures()) {
        const WavePair W = evolved(f.L, vars);
        for (std::size_t a = 0; a < flows.size(); ++a)
            for (std::size_t b = a + 1; b < flows.size(); ++b)
                expect_pass(o, f.name + " " + flows[a].str() + "," + flows[b].str(),
                            cells_of("zs", zs_residual(flows[a], flows[b], W)));
        if (f.name != "vacuum") continue;
        // corrupt w_1 at q = 0 (shifting w_2 by x only moves Q)
        WavePair bad = W;
        ShiftSeries c = bad.P_L.constant();
        c.set(-1, c.coeff(-1) + DiffOp(X()));
        bad.P_L.set(Monomial{}, c);
        expect_fail(o, "corrupted", cells_of("zs", zs_residual({0, 1}, {1, 0}, bad, false)));
    }
    return o;
}

CheckResult residue_cells(const ResidueResult &res, const VarsPtr &bv)
{
    CheckResult out;
    for (const Monomial &mono : bv->all_monomials()) {
        const bool known = std::find(res.unknown.begin(), res.unknown.end(), mono) == res.unknown.end();
        const DiffOp c = res.value.coeff(mono);
        out.cell("[" + bv->monomial_str(mono) + "]", known, c.is_zero(), c.str());
    }
    return out;
}

Outcome wave_equivalence(int g)
{
    TruncationScope scope(grown(narrow(5, 4), g));
    Outcome o;
    const VarsPtr single = lam_vars(1, 1);
    const VarsPtr bv = TimeVars::bilinear(*single, 1);
    for (const Fixture &f : eth_fixtures()) {
        const WavePair W = evolved(f.L, single);
        expect_pass(o, f.name + " lax", cells_of("lax", prop2_lax_residual(W)));
        for (int r = 0; r <= 3; ++r) {
            const WaveSeries op = prop2_operator_residual(r, W, bv);
            expect_pass(o, f.name + " operator r=" + std::to_string(r), cells_of("op", op));
        }
        for (int m = -2; m <= 2; ++m) {
            const SymbolSeries integrand = prop2_integrand(m, W, bv);
            for (int r = 0; r <= 3; ++r)
                expect_pass(o, f.name + " residue m=" + std::to_string(m) + " r=" + std::to_string(r),
                            residue_cells(residue_at(integrand, r), bv));
        }
    }
    // the Lambda^{-m} coefficient of the operator form is Q^{m/2} times the
    // residue, checked on data that is not a dressing pair
    {
        std::mt19937 rng(7);
        const VarsPtr s0 = lam_vars(1, 0);
        const VarsPtr b0 = TimeVars::bilinear(*s0, 0);
        CheckResult corr;
        for (int trial = 0; trial < 4; ++trial) {
            ShiftSeries PL = ShiftSeries::with_window({-6, kInf}), PR = ShiftSeries::with_window({-6, kInf});
            PL.set(0, DiffOp(1L));
            PR.set(0, DiffOp(1L));
            for (int k = -1; k >= -3; --k) PL.set(k, DiffOp(random_xpoly(rng, 1)));
            for (int k = -1; k >= -3; --k) PR.set(k, DiffOp(random_xpoly(rng, 1)));
            const WavePair W = constant_waves(PL, PR, s0);
            for (int r = 0; r <= 2; ++r) {
                const ShiftSeries op = prop2_operator_residual(r, W, b0).constant();
                for (int m = -2; m <= 2; ++m) {
                    const ResidueResult s = prop2_residue_residual(m, r, W, b0);
                    const DiffOp lhs = op.coeff(-m), rhs = DiffOp(Scalar::Q(m)) * s.value.constant();
                    const std::string k = "trial " + std::to_string(trial) + " m=" + std::to_string(m) +
                                          " r=" + std::to_string(r);
                    corr.cell(k, s.unknown.empty() && op.window().contains(-m), lhs == rhs, (lhs - rhs).str());
                    o.value("corr " + k, lhs.str());
                }
            }
        }
        expect_pass(o, "correspondence", corr);
    }
    {
        const WavePair one = constant_waves(ShiftSeries(1L), ShiftSeries(1L), single);
        const ResidueResult res = prop2_residue_residual(-1, 1, one, bv);
        const DiffOp c = res.value.constant();
        o.value("control m=-1 r=1", c.str());
        o.require(res.unknown.empty() && c == DiffOp(Scalar::Q(1)), "control cell (m=-1, r=1) = " + c.str());
    }
    return o;
}

Outcome fay(int g)
{
    TruncationScope scope(grown(RunConfig::default_run_truncation(), g));
    Outcome o;
    const VarsPtr vars = lam_vars(2, 3);
    for (const Fixture &f : eth_fixtures()) {
        const WavePair W = evolved(f.L, vars);
        for (FayIdentity id : {FayIdentity::Id1, FayIdentity::Id2, FayIdentity::Id4, FayIdentity::IdentityA,
                               FayIdentity::IdentityB})
            expect_pass(o, f.name + " " + fay_name(id), fay_residual(id, W));
    }
    return o;
}

Monomial mono(const VarsPtr &vars, std::initializer_list<std::tuple<int, int, int>> parts)
{
    Monomial m{};
    for (auto [n, alpha, p] : parts) m[static_cast<std::size_t>(vars->index(n, alpha))] = static_cast<std::uint8_t>(p);
    return m;
}

Outcome tau_construction(int g)
{
    TruncationScope scope(grown(RunConfig::default_run_truncation(), g));
    Outcome o;
    const VarsPtr vars = lam_vars(2, 3);
    for (const Fixture &f : eth_fixtures()) {
        const WavePair W = evolved(f.L, vars);
        const TauSeries A = build_tau(W);
        expect_pass(o, f.name + " compat", tau_compatibility(A));
        expect_pass(o, f.name + " de1", tau_de1_check(A));
        const WavePair back = tau_to_waves(A);
        expect_pass(o, f.name + " roundtrip P_L", cells_of("rt", back.P_L - W.P_L));
        expect_pass(o, f.name + " roundtrip P_R", cells_of("rt", back.P_R - W.P_R));
        o.absorb(f.name + " logtau", cells_of("logtau", A.logtau));

        // a second seed moves log tau by a function of the q_{n,0} only
        const TauSeries B = build_tau(W, {{mono(vars, {{1, 0, 1}}), sc(5)}, {mono(vars, {{2, 0, 1}}), sc(-1, 3, 2)},
                                          {Monomial{}, sc(7)}});
        const FuncSeries d = B.logtau - A.logtau;
        o.require(!d.is_zero(), f.name + ": seeds give the same log tau");
        expect_pass(o, f.name + " gauge d_x", cells_of("gx", coeff_dx(d)));
        for (int n = 0; n <= 2; ++n)
            expect_pass(o, f.name + " gauge d_q" + std::to_string(n) + "1",
                        cells_of("gq", d.derivative(vars->index(n, 1))));
        const WavePair backB = tau_to_waves(B);
        expect_pass(o, f.name + " seeded roundtrip", cells_of("rt", backB.P_L - W.P_L));
    }
    return o;
}

// "[m] lam^-k" -> "[m] res lam^{k-1}"
std::string residue_name(const std::string &reg)
{
    const std::string key = "lam^-";
    const auto p = reg.rfind(key);
    if (p == std::string::npos) return "";
    const int k = std::stoi(reg.substr(p + key.size()));
    return reg.substr(0, p) + "res lam^" + std::to_string(k - 1);
}

Outcome hqe_positive(int g)
{
    TruncationScope scope(grown(narrow(6, 4), g));
    Outcome o;
    const VarsPtr vars = lam_vars(1, 3);
    const TauSeries T = build_tau(evolved(eth_fixtures().front().L, vars));
    const HqePairing P = hqe_pairing(T, 1);
    for (int m = -2; m <= 2; ++m) {
        const std::string tag = "m=" + std::to_string(m);
        const CheckResult reg = hqe_regularity(P, m), sweep = hqe_residual_sweep(P, m);
        expect_pass(o, "regularity " + tag, reg);
        expect_pass(o, "residue " + tag, sweep);
        std::map<std::string, std::string> s;
        for (const auto &c : sweep.cells) s[c.where] = c.value;
        bool agree = reg.cells.size() == sweep.cells.size();
        for (const auto &c : reg.cells) {
            const auto it = s.find(residue_name(c.where));
            agree = agree && it != s.end() && it->second == c.value;
        }
        o.require(agree, "regularity and residue cells differ at " + tag);
    }
    return o;
}

Outcome hqe_negative(int g)
{
    TruncationScope scope(grown(narrow(6, 4), g));
    Outcome o;
    {
        const TauSeries T = trivial_tau(lam_vars(1, 2));
        const CheckResult r = hqe_residual(T, -1, 1, 1);
        expect_fail(o, "tau=1 m=-1 r=1", r);
        bool sqrtq = false;
        for (const auto &w : r.nonzero) sqrtq = sqrtq || w.value == Scalar::Q(1).str();
        o.require(sqrtq, "tau=1: no witness equal to Q^{1/2}, first " + first(r));
    }
    {
        const VarsPtr vars = lam_vars(1, 3);
        TauSeries T = build_tau(evolved(eth_fixtures().front().L, vars));
        T.logtau += FuncSeries::variable(vars, vars->index(0, 1), sc(1, 1, -1) * X());
        CheckResult all;
        for (int m = -1; m <= 1; ++m) {
            const CheckResult r = hqe_regularity(T, m, 1);
            o.absorb("perturbed m=" + std::to_string(m), r);
            all.merge(r);
        }
        o.require(all.failed > 0, "perturbed tau: no nonzero cell");
    }
    return o;
}

Outcome toda(int g)
{
    TruncationScope scope(grown(narrow(6, 4), g));
    Outcome o;
    const VarsPtr vars = lam_vars(1, 3);
    const TauSeries T = toda_slice(build_tau(evolved(eth_fixtures().front().L, vars)));
    for (int m = -2; m <= 2; ++m) expect_pass(o, "vacuum m=" + std::to_string(m), toda_regularity(T, m, 1));
    const TauSeries one = trivial_tau(lam_vars(1, 2));
    expect_pass(o, "tau=1 m=0", toda_regularity(one, 0, 2));
    const CheckResult r1 = toda_regularity(one, 1, 2);
    expect_fail(o, "tau=1 m=1", r1);
    bool branch = false;
    for (const auto &w : r1.nonzero) branch = branch || (w.where == "[1] lam^-2" && w.value == "-Q^{1/2}");
    o.require(branch, "tau=1 m=1: witness " + first(r1));
    return o;
}

Outcome kdv(int g)
{
    TruncationScope scope(grown(RunConfig::default_run_truncation(), g));
    Outcome o;
    const VarsPtr vars = TimeVars::kdv(1, 5, DegreeWeighting::Lambda);
    const TimeSeries<Scalar> q0 = TimeSeries<Scalar>::variable(vars, vars->index(0, -1));
    const TimeSeries<Scalar> one(vars, Scalar(1L));
    const std::vector<std::pair<std::string, KdvTau>> good = {
        {"tau=1", KdvTau{one}},
        {"tau=exp(q0/eps)", KdvTau::from_log(Scalar::eps(-1) * q0)},
        {"tau=exp(2q0/eps)", KdvTau::from_log(sc(2, 1, -1) * q0)}};
    std::vector<std::pair<std::string, KdvTau>> all = good;
    all.push_back({"tau=1+q0", KdvTau{one + q0}});
    all.push_back({"tau=1+q0^2", KdvTau{one + q0 * q0}});

    std::map<std::string, CheckResult> res;
    for (const auto &[name, T] : all) res[name] = kdv_hirota_residual(T, 3);
    for (const auto &[name, T] : good) expect_pass(o, name, res[name]);
    expect_fail(o, "tau=1+q0", res["tau=1+q0"]);
    for (const auto &[name, T] : all) {
        const CheckResult five = kdv_hirota_residual(KdvTau{Scalar(5L) * T.tau}, 3);
        const CheckResult &base = res[name];
        o.require(five.verdict() == base.verdict() && five.certified == base.certified && five.failed == base.failed,
                  name + ": verdict changes under tau -> 5 tau");
    }
    return o;
}

// ---------------------------------------------------------------- driver

struct Criterion
{
    int number;
    const char *title;
    std::function<Outcome(int)> run;
};

Outcome guarded(const Criterion &c, int g)
{
    try {
        return c.run(g);
    } catch (const std::exception &e) {
        Outcome o;
        o.require(false, std::string("exception: ") + e.what());
        return o;
    }
}

std::string joined(const std::vector<std::string> &v)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "; " : "") << v[i];
    return os.str();
}

std::set<int> parse_list(const std::string &s)
{
    std::set<int> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.insert(std::stoi(item));
    return out;
}

} // namespace

int main(int argc, char **argv)
{
    std::set<int> expect_red;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--expect-red" && i + 1 < argc) expect_red = parse_list(argv[++i]);
        else {
            std::cerr << "usage: eth_acceptance [--expect-red N,...]\n";
            return 3;
        }
    }
    g_log_cells = true;

    const std::vector<Criterion> criteria = {
        {1, "algebra laws", algebra_laws},
        {2, "dressing", dressing},
        {3, "Zakharov-Shabat", zakharov_shabat},
        {4, "Lambda/residue equivalence battery", wave_equivalence},
        {5, "Fay identities", fay},
        {6, "tau construction", tau_construction},
        {7, "HQE positive", hqe_positive},
        {8, "HQE negative controls", hqe_negative},
        {9, "Toda regularity", toda},
        {10, "KdV calibration", kdv},
    };

    std::set<int> red;
    std::map<int, Outcome> base;
    for (const Criterion &c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o = guarded(c, 0);
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << "criterion " << c.number << " (" << c.title << "): " << (o.pass ? "PASS" : "FAIL") << "  cells="
                  << o.cells.size() << " " << static_cast<int>(s * 10) / 10.0 << "s";
        if (!o.pass) std::cout << "  " << joined(o.why);
        std::cout << std::endl;
        if (!o.pass) red.insert(c.number);
        base[c.number] = std::move(o);
    }

    // truncation soundness: enlarge every window by 2 and compare the shared cells
    {
        Outcome o;
        long compared = 0;
        std::vector<int> rerun;
        for (const Criterion &c : criteria) {
            if (!base[c.number].pass) continue;
            rerun.push_back(c.number);
            const Outcome big = guarded(c, 2);
            o.require(big.pass, "criterion " + std::to_string(c.number) + " enlarged: " + joined(big.why));
            for (const auto &[k, v] : base[c.number].cells) {
                const auto it = big.cells.find(k);
                ++compared;
                if (it == big.cells.end())
                    o.require(false, "criterion " + std::to_string(c.number) + " lost cell " + k);
                else
                    o.require(it->second == v, "criterion " + std::to_string(c.number) + " cell " + k + ": " + v +
                                                   " vs " + it->second);
            }
        }
        std::ostringstream ids;
        for (std::size_t i = 0; i < rerun.size(); ++i) ids << (i ? "," : "") << rerun[i];
        std::cout << "criterion 11 (truncation soundness): " << (o.pass ? "PASS" : "FAIL") << "  rerun=" << ids.str()
                  << " compared=" << compared;
        if (!o.pass) std::cout << "  " << joined(o.why);
        std::cout << std::endl;
        if (!o.pass) red.insert(11);
    }

    if (red.empty()) return 0;
    if (red == expect_red) {
        std::cout << "only the expected criteria are red\n";
        return 0;
    }
    return 1;
}
