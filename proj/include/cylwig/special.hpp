// Special functions needed by the closed-form state coefficients: the error
// function of a complex argument and the theta3 lattice sum. Both are written
// here because no dependency in the build provides erf off the real axis.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "cylwig/common.hpp"

namespace cylwig {

namespace detail {

// Maclaurin series, reliable for moderate |z| (cancellation grows as
// e^{|z|^2}, still leaving ~1e-12 absolute accuracy at |z| <= 3).
inline cd erf_series(cd z) {
  cd z2 = z * z;
  cd term = z;  // (-1)^k z^{2k+1} / k!
  cd sum = z;
  for (int k = 1; k < 300; ++k) {
    term *= -z2 / double(k);
    cd add = term / double(2 * k + 1);
    sum += add;
    if (std::abs(add) < 1e-18 * std::abs(sum) + 1e-300) {
      return sum * (2.0 / std::sqrt(kPi));
    }
  }
  throw numeric_error("erf_complex: series did not converge");
}

// Continued fraction for erfc(z), Re z > 0:
// erfc(z) = e^{-z^2}/sqrt(pi) * 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))),
// evaluated with the modified Lentz algorithm.
inline cd erfc_continued_fraction(cd z) {
  const double tiny = 1e-300;
  cd b = z;
  cd f = (std::abs(b) < tiny) ? cd(tiny) : b;
  cd C = f;
  cd D = cd(0.0);
  for (int k = 1; k < 500; ++k) {
    cd a(0.5 * k, 0.0);
    D = b + a * D;
    if (std::abs(D) < tiny) D = cd(tiny);
    C = b + a / C;
    if (std::abs(C) < tiny) C = cd(tiny);
    D = cd(1.0) / D;
    cd delta = C * D;
    f *= delta;
    if (std::abs(delta - cd(1.0)) < 1e-16) {
      return std::exp(-z * z) / std::sqrt(kPi) / f;
    }
  }
  throw numeric_error("erf_complex: continued fraction did not converge");
}

}  // namespace detail

// erf for complex argument. Uses the Maclaurin series near the origin (and
// along the imaginary axis, where the continued fraction degrades) and the
// erfc continued fraction elsewhere; erf(-z) = -erf(z) handles Re z < 0.
inline cd erf_complex(cd z) {
  if (z.imag() == 0.0) return cd(std::erf(z.real()), 0.0);
  if (z.real() < 0.0) return -erf_complex(-z);
  double r = std::abs(z);
  if (r <= 3.0 || (z.real() < 0.7 && r <= 6.0)) return detail::erf_series(z);
  return cd(1.0) - detail::erfc_continued_fraction(z);
}

// theta3(z, q) = sum_n q^{n^2} e^{2inz} for real nome 0 < q < 1, truncated
// once the terms fall below 1e-17 of the running sum.
inline cd theta3(cd z, double q) {
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("theta3: nome must satisfy 0 < q < 1");
  cd sum(1.0);
  double logq = std::log(q);
  double grow = 2.0 * std::abs(z.imag());
  for (int n = 1; n < 4000; ++n) {
    double mag = std::exp(double(n) * n * logq + n * grow);
    cd w = std::exp(cd(0.0, 2.0 * n) * z);
    double qn = std::exp(double(n) * n * logq);
    sum += qn * (w + cd(1.0) / w);
    if (mag < 1e-17 * std::max(1.0, std::abs(sum))) return sum;
  }
  throw numeric_error("theta3: series did not converge");
}

}  // namespace cylwig
