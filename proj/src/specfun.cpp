#include "plasmoheat/specfun.hpp"

#include <cmath>

namespace plasmoheat {
namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Ascending series: J0, J1 and the companion log-free sums that build Y0, Y1.
// All are entire, so one code path covers every argument; cancellation limits
// use to moderate |z| (callers switch to the asymptotic form past |z| = 12).

Complex series_J0(Complex z) {
  const Complex q = -0.25 * z * z;  // (-1)^m (z^2/4)^m accumulates via q
  Complex term(1.0, 0.0), sum(1.0, 0.0);
  for (int m = 1; m <= 80; ++m) {
    term *= q / double(m * m);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

Complex series_J1(Complex z) {
  const Complex q = -0.25 * z * z;
  Complex term(1.0, 0.0), sum(1.0, 0.0);
  for (int m = 1; m <= 80; ++m) {
    term *= q / double(m * (m + 1));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return 0.5 * z * sum;
}

// sum_{m>=1} (-1)^{m+1} H_m (z^2/4)^m / (m!)^2   (Y0 companion)
Complex series_Y0_sum(Complex z) {
  const Complex q = 0.25 * z * z;
  Complex pow(1.0, 0.0), sum(0.0, 0.0);
  double H = 0.0, sign = 1.0, fact2 = 1.0;
  for (int m = 1; m <= 80; ++m) {
    pow *= q;
    H += 1.0 / m;
    fact2 *= double(m) * double(m);
    const Complex term = sign * H * pow / fact2;
    sum += term;
    sign = -sign;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
  }
  return sum;
}

// sum_{m>=0} (-1)^m (H_m + H_{m+1}) (z^2/4)^m / (m! (m+1)!)   (Y1 companion)
Complex series_Y1_sum(Complex z) {
  const Complex q = 0.25 * z * z;
  Complex pow(1.0, 0.0), sum(0.0, 0.0);
  double Hm = 0.0, Hm1 = 1.0, sign = 1.0, facts = 1.0;  // m!(m+1)! at m=0 is 1
  for (int m = 0; m <= 80; ++m) {
    if (m > 0) {
      pow *= q;
      Hm += 1.0 / m;
      Hm1 += 1.0 / (m + 1);
      facts *= double(m) * double(m + 1);
    }
    const Complex term = sign * (Hm + Hm1) * pow / facts;
    sum += term;
    sign = -sign;
    if (m > 2 && std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
  }
  return sum;
}

Complex series_Y0(Complex z) {
  return (2.0 / kPi) * ((std::log(0.5 * z) + kEulerGamma) * series_J0(z) +
                        series_Y0_sum(z));
}

Complex series_Y1(Complex z) {
  return (2.0 / kPi) * ((std::log(0.5 * z) + kEulerGamma) * series_J1(z) -
                        1.0 / z - 0.25 * z * series_Y1_sum(z));
}

// Hankel asymptotic expansion: H_nu^(1)(z) ~ sqrt(2/(pi z)) e^{i(z - nu pi/2
// - pi/4)} sum_k i^k a_k(nu) / z^k, truncated at the smallest term.
Complex asymptotic_H1(int nu, Complex z) {
  const double mu = 4.0 * nu * nu;
  Complex sum(1.0, 0.0), term(1.0, 0.0);
  double prev = 1e300;
  for (int k = 1; k <= 24; ++k) {
    const double num = mu - double(2 * k - 1) * double(2 * k - 1);
    term *= Complex(0.0, 1.0) * num / (8.0 * k * z);
    const double mag = std::abs(term);
    if (mag > prev) break;  // divergent tail reached
    sum += term;
    prev = mag;
    if (mag < 1e-16 * std::abs(sum)) break;
  }
  const Complex phase = z - (0.5 * nu + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * z)) * std::exp(Complex(0.0, 1.0) * phase) * sum;
}

constexpr double kSeriesLimit = 12.0;

}  // namespace

Complex bessel_J0(Complex z) {
  if (std::abs(z) <= kSeriesLimit) return series_J0(z);
  // J0 = (H0^(1) + H0^(2))/2; for large |z| with Im z >= 0 the H^(2) part can
  // be obtained from the reflection H0^(2)(z) = conj(H0^(1)(conj z)) only for
  // real z, so evaluate via the asymptotic forms of both Hankel functions.
  const Complex h1 = asymptotic_H1(0, z);
  // H0^(2)(z) asymptotic: conjugate phase
  Complex sum(1.0, 0.0), term(1.0, 0.0);
  double prev = 1e300;
  for (int k = 1; k <= 24; ++k) {
    const double num = -double(2 * k - 1) * double(2 * k - 1);
    term *= Complex(0.0, -1.0) * num / (8.0 * k * z);
    const double mag = std::abs(term);
    if (mag > prev) break;
    sum += term;
    prev = mag;
    if (mag < 1e-16 * std::abs(sum)) break;
  }
  const Complex h2 = std::sqrt(2.0 / (kPi * z)) *
                     std::exp(Complex(0.0, -1.0) * (z - 0.25 * kPi)) * sum;
  return 0.5 * (h1 + h2);
}

Complex bessel_J1(Complex z) {
  if (std::abs(z) <= kSeriesLimit) return series_J1(z);
  const Complex h1 = asymptotic_H1(1, z);
  Complex sum(1.0, 0.0), term(1.0, 0.0);
  double prev = 1e300;
  for (int k = 1; k <= 24; ++k) {
    const double num = 4.0 - double(2 * k - 1) * double(2 * k - 1);
    term *= Complex(0.0, -1.0) * num / (8.0 * k * z);
    const double mag = std::abs(term);
    if (mag > prev) break;
    sum += term;
    prev = mag;
    if (mag < 1e-16 * std::abs(sum)) break;
  }
  const Complex h2 = std::sqrt(2.0 / (kPi * z)) *
                     std::exp(Complex(0.0, -1.0) * (z - 0.75 * kPi)) * sum;
  return 0.5 * (h1 + h2);
}

Complex hankel1_0(Complex z) {
  if (std::abs(z) <= kSeriesLimit)
    return series_J0(z) + Complex(0.0, 1.0) * series_Y0(z);
  return asymptotic_H1(0, z);
}

Complex hankel1_1(Complex z) {
  if (std::abs(z) <= kSeriesLimit)
    return series_J1(z) + Complex(0.0, 1.0) * series_Y1(z);
  return asymptotic_H1(1, z);
}

double expint_E1(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("expint_E1: requires x > 0");
  if (x <= 1.0) {
    // E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!)
    double sum = 0.0, term = 1.0;
    for (int k = 1; k <= 40; ++k) {
      term *= -x / k;
      const double add = -term / k;
      sum += add;
      if (std::abs(add) < 1e-17 * (std::abs(sum) + 1.0)) break;
    }
    return -kEulerGamma - std::log(x) + sum;
  }
  if (x > 700.0) return 0.0;  // below double underflow after exp(-x)
  // Modified Lentz continued fraction: E1 = e^{-x}/(x+1/(1+1/(x+2/(1+...))))
  const double tiny = 1e-300;
  double b = x + 1.0, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i <= 200; ++i) {
    const double a = -double(i) * double(i);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x);
}

}  // namespace plasmoheat
