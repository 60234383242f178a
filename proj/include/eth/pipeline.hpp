#pragma once

#include <functional>
#include <string>
#include <vector>

#include "eth/check.hpp"
#include "eth/eth_core.hpp"
#include "eth/settings.hpp"

namespace eth {

/// Everything a run needs. Defaults are the desk-scale truncation.
struct RunConfig
{
    Truncation trunc = default_run_truncation();
    int n_max = 2;     // flows q_{n,*}, n <= n_max
    int degree = 3;    // q-degree D, lambda-weighted: q_{n,0} -> n, q_{n,1} -> n + 1
    int y_degree = 2;  // D_y
    int m_max = 2;     // |m| <= M_max
    int r_max = 3;     // 0 <= r <= R
    LaxOp data;
    std::string fixture;   // empty: ETH data from `data`
    std::string pipeline = "all";
    int jobs = 1;

    static Truncation default_run_truncation();
    /// Throws PreconditionError on an inconsistent configuration.
    void validate() const;
};

struct FixtureInfo
{
    std::string name;
    std::string description;
    bool kdv = false;
};

const std::vector<FixtureInfo> &fixtures();
/// Sets the fixture's data on top of cfg (truncation is kept).
RunConfig with_fixture(RunConfig cfg, const std::string &name);

const std::vector<std::string> &pipelines();

/// One check of a run. `window` names the verified ranges.
struct CheckRecord
{
    CheckResult result;
    std::string window;
    double seconds = 0;
    Verdict verdict() const { return result.verdict(); }
};

struct RunReport
{
    std::vector<CheckRecord> checks;
    Verdict global = Verdict::Inconclusive;
    double seconds = 0;
};

/// FAIL if any check failed, else INCONCLUSIVE if any was, else PASS.
Verdict combine(const std::vector<CheckRecord> &checks);

RunReport run(const RunConfig &cfg);

/// Exit status for a verdict: 0 pass, 1 fail, 2 inconclusive.
int exit_code(Verdict v);

/// Description of a check id (or pipeline name); throws PreconditionError
/// for unknown ids.
std::string explain(const std::string &check_id);
const std::vector<std::string> &check_ids();

} // namespace eth
