#pragma once

#include <climits>

namespace eth {

// Sentinels for unbounded validity windows.
inline constexpr int kInf = INT_MAX / 4;
inline constexpr int kNegInf = -kInf;

inline int sat_add(int a, int b)
{
    long long s = static_cast<long long>(a) + b;
    if (s >= kInf) return kInf;
    if (s <= kNegInf) return kNegInf;
    return static_cast<int>(s);
}

/// Process-wide truncation parameters. Set once per run (see
/// TruncationScope); read concurrently by worker threads.
struct Truncation
{
    int eps_min = -12;
    int eps_max = 12;
    int Lambda_window = 8;  // shift-operator series live in [-W, W]
    int lambda_window = 8;  // symbol series live in [-W, W]
    int lambda_inner = 6;   // regularity verdicts read [-W_in, W_in]
    int x_degree_cap = 12;
    bool unit_q = false;    // substitute Q = 1, log Q = 0
};

const Truncation &truncation();

/// Installs a truncation for the lifetime of the object and restores the
/// previous one afterwards. Not meant to be nested across threads.
class TruncationScope
{
public:
    explicit TruncationScope(const Truncation &t);
    ~TruncationScope();
    TruncationScope(const TruncationScope &) = delete;
    TruncationScope &operator=(const TruncationScope &) = delete;

private:
    Truncation saved_;
};

} // namespace eth
