#include "eth/shift_algebra.hpp"

namespace eth {

ShiftSeries Lambda(int k) { return ShiftSeries::generator(k); }

ShiftSeries ss_sharp(const ShiftSeries &a)
{
    // (a Lambda^k)^# = Q^k Lambda^{-k} a^# = Q^k a^#(x - k eps) Lambda^{-k}
    auto neg = [](int v) { return v >= kInf ? kNegInf : (v <= kNegInf ? kInf : -v); };
    ShiftSeries out = ShiftSeries::with_window({neg(a.window().hi), neg(a.window().lo)});
    for (const auto &[k, c] : a.terms()) out.set(-k, Scalar::Q(2 * k) * shift_x(sharp(c), Rational(-k)));
    return out;
}

Symbol left_symbol(const ShiftSeries &a)
{
    Symbol s = Symbol::with_window(a.window());
    for (const auto &[k, c] : a.terms()) s.set(k, c);
    return s;
}

Symbol right_symbol(const ShiftSeries &a)
{
    // a_k Lambda^k = Lambda^k a_k(x - k eps)
    Symbol s = Symbol::with_window(a.window());
    for (const auto &[k, c] : a.terms()) s.set(k, c.shifted(Rational(-k)));
    return s;
}

ShiftSeries from_left_symbol(const Symbol &s)
{
    ShiftSeries a = ShiftSeries::with_window(s.window());
    for (const auto &[k, c] : s.terms()) a.set(k, c);
    return a;
}

ShiftSeries from_right_symbol(const Symbol &s)
{
    ShiftSeries a = ShiftSeries::with_window(s.window());
    for (const auto &[k, c] : s.terms()) a.set(k, c.shifted(Rational(k)));
    return a;
}

} // namespace eth
