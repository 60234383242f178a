#pragma once

#include "eth/laurent.hpp"

namespace eth {

/// Laurent series in Lambda = e^{eps d/dx} with DiffOp coefficients,
/// stored in left normal form sum_k a_k(x, D) Lambda^k.
using ShiftSeries = Laurent<DiffOp, SeriesKind::Shift>;

/// Series in a commuting indeterminate lambda.
template <class C>
using LambdaSeries = Laurent<C, SeriesKind::Symbol>;

/// Left/right symbols of shift series.
using Symbol = LambdaSeries<DiffOp>;

/// Lambda^k.
ShiftSeries Lambda(int k = 1);

/// Antiinvolution extending D^# = -D + log Q, x^# = x with
/// Lambda^# = Q Lambda^{-1}.
ShiftSeries ss_sharp(const ShiftSeries &a);

/// Inverse of c Lambda^j (1 + lower terms); c an invertible order-0
/// coefficient. Requires the upper side of the window to be unbounded.
template <class C, SeriesKind Kind>
Laurent<C, Kind> series_inverse(const Laurent<C, Kind> &a);

inline ShiftSeries ss_invert(const ShiftSeries &a) { return series_inverse(a); }

Symbol left_symbol(const ShiftSeries &a);
Symbol right_symbol(const ShiftSeries &a);
ShiftSeries from_left_symbol(const Symbol &s);
ShiftSeries from_right_symbol(const Symbol &s);

inline ShiftSeries plus_part(const ShiftSeries &a) { return a.plus_part(); }
inline ShiftSeries minus_part(const ShiftSeries &a) { return a.minus_part(); }

/// Coefficient-wise x -> x + k eps.
template <class C, SeriesKind Kind>
Laurent<C, Kind> shift_x(const Laurent<C, Kind> &a, const Rational &k)
{
    return a.map_coeffs([&](const C &c) { return shift_x(c, k); });
}

/// Coefficient-wise d/dx.
template <class C, SeriesKind Kind>
Laurent<C, Kind> coeff_dx(const Laurent<C, Kind> &a)
{
    return a.map_coeffs([](const C &c) { return coeff_dx(c); });
}

/// For symbols # acts on coefficients only.
template <class C>
LambdaSeries<C> sharp(const LambdaSeries<C> &a)
{
    return a.map_coeffs([](const C &c) { return sharp(c); });
}

inline ShiftSeries sharp(const ShiftSeries &a) { return ss_sharp(a); }

template <class C, SeriesKind Kind>
Laurent<C, Kind> inverse(const Laurent<C, Kind> &a)
{
    return series_inverse(a);
}

template <class C, SeriesKind Kind>
Laurent<C, Kind> series_inverse(const Laurent<C, Kind> &a)
{
    using S = Laurent<C, Kind>;
    if (a.window().hi < kInf) throw PreconditionError("series inverse: leading coefficient is not certified");
    if (a.terms().empty()) throw PreconditionError("series inverse: zero series");
    const int j = a.terms().rbegin()->first;
    const C lead = a.terms().rbegin()->second;
    C lead_inv = inverse(lead);
    // (c g^j)^{-1} = g^{-j} c^{-1}, brought to left normal form
    if constexpr (Kind == SeriesKind::Shift) lead_inv = shift_x(lead_inv, Rational(-j));
    const S lead_inv_s = S::generator(-j, lead_inv);
    const S t = lead_inv_s * a - S(1L);
    S sum(1L), power(1L);
    const int bound = 2 * S::global_window().hi + 2;
    for (int n = 1; n <= bound + 1; ++n) {
        power = -(power * t);
        sum += power;
        if (power.is_zero()) break;
    }
    return sum * lead_inv_s;
}

} // namespace eth
