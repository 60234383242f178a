#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "eth/errors.hpp"
#include "eth/settings.hpp"
#include "eth/weyl.hpp"

namespace eth {

/// Shift: coefficients do not commute with the generator; the product uses
/// Lambda^k a(x) = a(x + k eps) Lambda^k. Symbol: a commuting indeterminate.
// Mu: series in mu = (2 lambda)^{1/2}; its window is counted in mu-degrees.
enum class SeriesKind { Shift, Symbol, Mu };

/// Closed interval of generator exponents on which a truncated series is
/// certified exact. kNegInf / kInf mark unbounded sides; lo > hi is empty.
struct Window
{
    int lo = kNegInf;
    int hi = kInf;

    bool full() const { return lo <= kNegInf && hi >= kInf; }
    bool empty() const { return lo > hi; }
    bool contains(int k) const { return lo <= k && k <= hi; }
    Window intersect(const Window &o) const { return {std::max(lo, o.lo), std::min(hi, o.hi)}; }
    friend bool operator==(const Window &, const Window &) = default;

    std::string str() const
    {
        auto side = [](int v) {
            if (v >= kInf) return std::string("+inf");
            if (v <= kNegInf) return std::string("-inf");
            return std::to_string(v);
        };
        return "[" + side(lo) + ", " + side(hi) + "]";
    }
};

/// Truncated Laurent series sum_k c_k g^k (left normal form for Shift).
/// Only exponents inside window() are stored; coefficients outside are
/// unknown. The global generator window (Lambda_window or lambda_window)
/// is always intersected in.
template <class C, SeriesKind Kind>
class Laurent
{
public:
    using Coeff = C;

    Laurent() = default;
    Laurent(const C &c) { set(0, c); }
    Laurent(long c) : Laurent(C(c)) {}

    static Laurent generator(int power = 1, const C &c = C(1L))
    {
        Laurent s;
        s.set(power, c);
        return s;
    }
    static Laurent with_window(Window w)
    {
        Laurent s;
        s.window_ = w;
        s.clip();
        return s;
    }

    const std::map<int, C> &terms() const { return terms_; }
    const Window &window() const { return window_; }
    C coeff(int k) const
    {
        auto it = terms_.find(k);
        return it == terms_.end() ? C() : it->second;
    }
    /// Exponent range that may carry nonzero coefficients (unknown tails
    /// included); see product window rule.
    int top() const
    {
        if (window_.hi < kInf) return kInf;
        int t = terms_.empty() ? kNegInf : terms_.rbegin()->first;
        if (window_.lo > kNegInf) t = std::max(t, window_.lo - 1);
        return t;
    }
    int bottom() const
    {
        if (window_.lo > kNegInf) return kNegInf;
        int b = terms_.empty() ? kInf : terms_.begin()->first;
        if (window_.hi < kInf) b = std::min(b, window_.hi + 1);
        return b;
    }

    bool is_zero() const
    {
        return std::all_of(terms_.begin(), terms_.end(), [](const auto &kv) { return kv.second.is_zero(); });
    }
    bool droppable() const { return terms_.empty() && window_.full(); }

    void set(int k, C c)
    {
        if (!window_.contains(k)) return;
        if (c.droppable()) {
            terms_.erase(k);
            return;
        }
        if (!inside_global(k)) return;
        terms_[k] = std::move(c);
    }
    void add_to(int k, const C &c)
    {
        if (!window_.contains(k) || c.droppable()) return;
        if (!inside_global(k)) return;
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            if (!c.droppable()) terms_.emplace(k, c);
            return;
        }
        it->second += c;
        if (it->second.droppable()) terms_.erase(it);
    }

    /// Narrows the window; terms outside are discarded.
    Laurent restricted(Window w) const
    {
        Laurent s = *this;
        s.window_ = s.window_.intersect(w);
        s.clip();
        return s;
    }

    Laurent &operator+=(const Laurent &o)
    {
        window_ = window_.intersect(o.window_);
        clip();
        for (const auto &[k, c] : o.terms_) add_to(k, c);
        return *this;
    }
    Laurent &operator-=(const Laurent &o)
    {
        window_ = window_.intersect(o.window_);
        clip();
        for (const auto &[k, c] : o.terms_) add_to(k, -c);
        return *this;
    }
    friend Laurent operator+(Laurent a, const Laurent &b) { return a += b; }
    friend Laurent operator-(Laurent a, const Laurent &b) { return a -= b; }
    Laurent operator-() const
    {
        Laurent s = *this;
        for (auto &[k, c] : s.terms_) c = -c;
        return s;
    }

    static Window product_window(const Laurent &a, const Laurent &b)
    {
        Window w;
        if (a.window_.lo > kNegInf) w.lo = std::max(w.lo, sat_add(b.top(), a.window_.lo));
        if (a.window_.hi < kInf) w.hi = std::min(w.hi, sat_add(b.bottom(), a.window_.hi));
        if (b.window_.lo > kNegInf) w.lo = std::max(w.lo, sat_add(a.top(), b.window_.lo));
        if (b.window_.hi < kInf) w.hi = std::min(w.hi, sat_add(a.bottom(), b.window_.hi));
        return w;
    }

    friend Laurent operator*(const Laurent &a, const Laurent &b)
    {
        Laurent out;
        out.window_ = product_window(a, b);
        out.clip();
        if (out.window_.empty()) return out;
        const Window g = out.window_;
        std::map<int, C> acc;
        for (const auto &[i, ai] : a.terms_) {
            for (const auto &[j, bj] : b.terms_) {
                const int k = i + j;
                if (!g.contains(k)) continue;
                C prod;
                if constexpr (Kind == SeriesKind::Shift) prod = i != 0 ? ai * shift_x(bj, Rational(i)) : ai * bj;
                else prod = ai * bj;
                auto it = acc.find(k);
                if (it == acc.end()) acc.emplace(k, std::move(prod));
                else it->second += prod;
            }
        }
        for (auto &[k, c] : acc)
            if (!c.droppable()) out.terms_.emplace(k, std::move(c));
        out.clip();
        return out;
    }

    friend Laurent operator*(const Scalar &s, const Laurent &a)
    {
        Laurent out;
        out.window_ = a.window_;
        for (const auto &[k, c] : a.terms_) out.set(k, s * c);
        return out;
    }

    /// Coefficient-wise action (x-shift, d/dx, ...); window unchanged.
    template <class F>
    Laurent map_coeffs(F &&f) const
    {
        Laurent out;
        out.window_ = window_;
        for (const auto &[k, c] : terms_) out.set(k, f(c));
        return out;
    }

    /// Nonnegative part (k >= 0).
    Laurent plus_part() const
    {
        Laurent out;
        out.window_ = window_;
        if (out.window_.lo <= 0) out.window_.lo = kNegInf;
        if (window_.hi < 0) out.window_ = Window{kNegInf, -1};
        for (const auto &[k, c] : terms_)
            if (k >= 0) out.set(k, c);
        out.clip();
        return out;
    }
    /// Negative part (k < 0).
    Laurent minus_part() const
    {
        Laurent out;
        out.window_ = window_;
        if (out.window_.hi >= -1) out.window_.hi = kInf;
        if (window_.lo > -1) out.window_ = Window{0, kInf};
        for (const auto &[k, c] : terms_)
            if (k < 0) out.set(k, c);
        out.clip();
        return out;
    }

    friend bool operator==(const Laurent &a, const Laurent &b)
    {
        return a.window_ == b.window_ && a.terms_ == b.terms_;
    }

    /// Known content agrees on the common window.
    bool agrees_with(const Laurent &o) const
    {
        const Window w = window_.intersect(o.window_);
        for (const auto &[k, c] : terms_)
            if (w.contains(k) && !c.same_terms(o.coeff(k))) return false;
        for (const auto &[k, c] : o.terms_)
            if (w.contains(k) && !c.same_terms(coeff(k))) return false;
        return true;
    }
    bool same_terms(const Laurent &o) const { return agrees_with(o); }

    std::string str(const char *gen = Kind == SeriesKind::Shift ? "L" : Kind == SeriesKind::Mu ? "mu" : "lam") const
    {
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            if (it->second.is_zero()) continue;
            if (!first) os << " + ";
            first = false;
            os << "(" << it->second.str() << ")";
            if (it->first != 0) os << "·" << gen << "^{" << it->first << "}";
        }
        if (first) os << "0";
        if (!window_.full()) os << "  valid " << window_.str();
        return os.str();
    }

    static Window global_window()
    {
        if (Kind == SeriesKind::Mu) return {-(2 * truncation().lambda_window + 1), 2 * truncation().lambda_window + 1};
        const int w = Kind == SeriesKind::Shift ? truncation().Lambda_window : truncation().lambda_window;
        return {-w, w};
    }

private:
    // A nonzero entry beyond the global window is discarded and the window
    // narrowed to the global bound on that side.
    bool inside_global(int k)
    {
        const Window g = global_window();
        if (k < g.lo) {
            window_.lo = std::max(window_.lo, g.lo);
            return false;
        }
        if (k > g.hi) {
            window_.hi = std::min(window_.hi, g.hi);
            return false;
        }
        return true;
    }

    void clip()
    {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (it->second.droppable()) {
                it = terms_.erase(it);
                continue;
            }
            inside_global(it->first);
            ++it;
        }
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (!window_.contains(it->first)) it = terms_.erase(it);
            else ++it;
        }
    }

    std::map<int, C> terms_;
    Window window_;
};

} // namespace eth
