#pragma once

#include <atomic>
#include <string>
#include <vector>

#include "eth/time_series.hpp"

namespace eth {

/// When set, every certified cell is kept in CheckResult::cells (used to
/// compare runs at different truncations).
inline std::atomic<bool> g_log_cells{false};

enum class Verdict { Pass, Fail, Inconclusive };

inline const char *verdict_str(Verdict v)
{
    switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    default: return "INCONCLUSIVE";
    }
}

/// A nonzero certified coefficient.
struct Witness
{
    std::string where;
    std::string value;
};

/// Outcome of a residual check over individual coefficients ("cells").
/// A check passes when every certified cell vanishes and at least one cell
/// was certified.
struct CheckResult
{
    std::string id;
    std::string params;
    long certified = 0;
    long uncertified = 0;
    long failed = 0;
    std::vector<Witness> nonzero;  // first few failing cells
    std::vector<std::string> notes;
    std::vector<Witness> cells;    // certified cells, only with g_log_cells

    Verdict verdict() const
    {
        if (failed > 0) return Verdict::Fail;
        return certified > 0 ? Verdict::Pass : Verdict::Inconclusive;
    }
    bool pass() const { return verdict() == Verdict::Pass; }

    void cell(const std::string &where, bool known, bool zero, const std::string &value)
    {
        if (!known) {
            ++uncertified;
            return;
        }
        ++certified;
        if (g_log_cells) cells.push_back({where, zero ? std::string("0") : value});
        if (zero) return;
        ++failed;
        if (nonzero.size() < 16) nonzero.push_back({where, value});
    }
    void merge(const CheckResult &o)
    {
        certified += o.certified;
        uncertified += o.uncertified;
        failed += o.failed;
        for (const auto &w : o.nonzero) nonzero.push_back(w);
        for (const auto &n : o.notes) notes.push_back(n);
        for (const auto &c : o.cells) cells.push_back(c);
    }
};

namespace detail {

template <class C>
struct is_laurent : std::false_type
{
};
template <class C, SeriesKind K>
struct is_laurent<Laurent<C, K>> : std::true_type
{
};

/// Cells of one coefficient; Laurent coefficients are split per exponent
/// inside `range`, nested series recursively.
template <class C>
void tally_coeff(CheckResult &r, const std::string &where, const C &c, bool known, Window range,
                 Window inner)
{
    if constexpr (is_laurent<C>::value) {
        const Window gw = C::global_window().intersect(range);
        for (int k = gw.lo; k <= gw.hi; ++k) {
            const std::string w = where + " g^" + std::to_string(k);
            tally_coeff(r, w, c.coeff(k), known && c.window().contains(k), inner, inner);
        }
    } else {
        r.cell(where, known, c.is_zero(), c.str());
    }
}

} // namespace detail

/// Adds every admissible monomial of f as cells. `range` restricts the
/// outer generator exponents, `inner` those of nested series.
template <class C>
void tally(CheckResult &r, const TimeSeries<C> &f, Window range = {}, Window inner = {})
{
    for (const Monomial &m : f.vars()->all_monomials())
        detail::tally_coeff(r, "[" + f.vars()->monomial_str(m) + "]", f.coeff(m), true, range, inner);
}

} // namespace eth
