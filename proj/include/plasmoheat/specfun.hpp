#pragma once

#include "plasmoheat/types.hpp"

namespace plasmoheat {

// Bessel/Hankel functions for complex argument, principal branch.
// Ascending series for |z| <= 12, Hankel asymptotic expansion beyond.
// Accurate to ~1e-10 over the arguments used here (|z| up to a few hundred,
// arg z in (-pi, pi], in practice the closed upper half plane).
Complex bessel_J0(Complex z);
Complex bessel_J1(Complex z);
Complex hankel1_0(Complex z);  // H0^(1)(z) = J0 + i Y0
Complex hankel1_1(Complex z);  // H1^(1)(z) = J1 + i Y1

// Exponential integral E1(x), x > 0.  Series for x <= 1, continued fraction
// beyond; relative accuracy ~1e-14.
double expint_E1(double x);

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

}  // namespace plasmoheat
