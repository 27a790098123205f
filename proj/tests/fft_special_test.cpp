#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "cylwig/fft.hpp"
#include "cylwig/special.hpp"

using namespace cylwig;

namespace {

// O(N^2) reference transform, written independently of the library kernel.
std::vector<cd> dft_reference(const std::vector<cd>& in, int sign) {
  std::size_t n = in.size();
  std::vector<cd> out(n, cd(0));
  for (std::size_t k = 0; k < n; ++k) {
    cd acc(0);
    for (std::size_t j = 0; j < n; ++j) {
      double ang = sign * 2.0 * kPi * static_cast<double>(j * k % n) / n;
      acc += in[j] * cd(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

std::vector<cd> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cd> v(n);
  for (auto& z : v) z = cd(u(rng), u(rng));
  return v;
}

double max_abs_diff(const std::vector<cd>& a, const std::vector<cd>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST(Fft, MatchesDirectTransformPow2) {
  for (std::size_t n : {8u, 64u, 256u}) {
    auto v = random_vector(n, 100 + n);
    auto ref = dft_reference(v, -1);
    auto out = v;
    fft_inplace(out, -1);
    EXPECT_LT(max_abs_diff(out, ref), 1e-11) << "size " << n;

    ref = dft_reference(v, +1);
    out = v;
    fft_inplace(out, +1);
    EXPECT_LT(max_abs_diff(out, ref), 1e-11) << "size " << n;
  }
}

TEST(Fft, RoundTripIsIdentity) {
  auto v = random_vector(512, 7);
  auto w = v;
  fft_inplace(w, -1);
  fft_inplace(w, +1);
  for (auto& z : w) z /= 512.0;
  EXPECT_LT(max_abs_diff(w, v), 1e-13);
}

TEST(Fft, DispatcherHandlesNonPowerOfTwo) {
  auto v = random_vector(12, 8);
  auto ref = dft_reference(v, -1);
  auto out = transform(v, -1);
  EXPECT_LT(max_abs_diff(out, ref), 1e-12);

  auto v2 = random_vector(30, 9);
  auto ref2 = dft_reference(v2, +1);
  auto out2 = transform(v2, +1);
  EXPECT_LT(max_abs_diff(out2, ref2), 1e-12);
}

TEST(Fft, TwoDimensionalMatchesDoubleSum) {
  const int rows = 6, cols = 8;
  auto v = random_vector(rows * cols, 10);
  auto out = v;
  fft_2d(out, rows, cols, -1);
  for (int a = 0; a < rows; ++a) {
    for (int b = 0; b < cols; ++b) {
      cd acc(0);
      for (int j = 0; j < rows; ++j)
        for (int k = 0; k < cols; ++k) {
          double ang = -2.0 * kPi * (double(a * j) / rows + double(b * k) / cols);
          acc += v[j * cols + k] * cd(std::cos(ang), std::sin(ang));
        }
      EXPECT_LT(std::abs(out[a * cols + b] - acc), 1e-11);
    }
  }
}

TEST(Fft, Pow2Check) {
  EXPECT_TRUE(is_pow2(1));
  EXPECT_TRUE(is_pow2(1024));
  EXPECT_FALSE(is_pow2(0));
  EXPECT_FALSE(is_pow2(12));
}

// Complex error function. Reference values computed with 40-digit arithmetic.
TEST(ErfComplex, FrozenReferencePoints) {
  struct Row {
    double re, im, vre, vim;
  };
  const Row rows[] = {
      {0.5, 0.3, 0.56156518852421316338, 0.26760586495760359277},
      {2.0, 1.5, 0.96361758085729282746, 0.011003373852137950202},
      {-1.2, 2.2, 5.9542963932805845151, -0.071549670389781514584},
      {3.5, -2.5, 0.9997652701412751041, 0.00022028413113879491483},
      {0.05, 0.02, 0.056394493527206728302, 0.022514221695625040734},
      {6.0, 1.0, 0.99999999999999994692, -2.2776350333692489857e-17},
      {1.6, 3.3, -393.99796762704519808, -518.41050254492816211},
      {0.1, 2.9, 477.38028948330943414, 798.26592917935898571},
  };
  for (const auto& r : rows) {
    cd v = erf_complex(cd(r.re, r.im));
    double scale = std::max(1.0, std::abs(cd(r.vre, r.vim)));
    EXPECT_LT(std::abs(v - cd(r.vre, r.vim)) / scale, 1e-13)
        << "z = " << r.re << " + " << r.im << "i";
  }
}

TEST(ErfComplex, LargeMagnitudeNearImaginaryAxis) {
  // Arguments of this shape appear in the closed-form lattice coefficients;
  // the value is huge but must stay accurate in a relative sense.
  cd v = erf_complex(cd(1.49, 8.4));
  cd ref(-8.7591302759024816803e+27, 3.0606053360311699877e+28);
  EXPECT_LT(std::abs(v - ref) / std::abs(ref), 1e-12);

  cd v2 = erf_complex(cd(9.4, 4.0));
  EXPECT_LT(std::abs(v2 - cd(1.0, 4.1190496025198686841e-34)), 1e-14);
  cd v3 = erf_complex(cd(12.5, 2.0));
  EXPECT_LT(std::abs(v3 - cd(1.0, 0.0)), 1e-14);
}

TEST(ErfComplex, AgreesWithStdErfOnRealAxis) {
  for (double x : {-3.0, -1.0, -0.2, 0.0, 0.4, 1.3, 2.9, 5.5}) {
    cd v = erf_complex(cd(x, 0.0));
    EXPECT_NEAR(v.real(), std::erf(x), 1e-14);
    EXPECT_NEAR(v.imag(), 0.0, 1e-16);
  }
}

TEST(ErfComplex, QuadratureOracleOnParameterDomain) {
  // Independent check: integrate (2/sqrt(pi)) e^{-t^2} along the real axis to
  // Re z, then up the vertical segment, with composite Simpson.
  auto oracle = [](cd z) {
    double u = z.real(), v = z.imag();
    const int n = 4000;  // even
    cd acc(0);
    // horizontal leg: t in [0, u]
    double h = u / n;
    for (int i = 0; i <= n; ++i) {
      double t = i * h;
      double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      acc += w * std::exp(-t * t);
    }
    cd total = acc * (h / 3.0);
    // vertical leg: t = u + i s, s in [0, v], dt = i ds
    acc = cd(0);
    double hv = v / n;
    for (int i = 0; i <= n; ++i) {
      double s = i * hv;
      double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      cd t(u, s);
      acc += w * std::exp(-t * t);
    }
    total += acc * cd(0.0, hv / 3.0);
    return total * (2.0 / std::sqrt(kPi));
  };
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ure(1.0, 10.0), uim(0.0, 4.0);
  for (int i = 0; i < 40; ++i) {
    cd z(ure(rng), uim(rng));
    cd ref = oracle(z);
    cd v = erf_complex(z);
    double scale = std::max(1.0, std::abs(ref));
    EXPECT_LT(std::abs(v - ref) / scale, 1e-9) << "z = " << z;
  }
}

TEST(ErfComplex, OddSymmetryAndConjugation) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    cd z(u(rng), u(rng));
    cd a = erf_complex(z);
    EXPECT_LT(std::abs(a + erf_complex(-z)), 1e-12 * std::max(1.0, std::abs(a)));
    EXPECT_LT(std::abs(std::conj(a) - erf_complex(std::conj(z))),
              1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST(Theta3, FrozenReferencePoints) {
  struct Row {
    double zre, zim, q, vre, vim;
  };
  const Row rows[] = {
      {0.7, 0.2, 0.3, 1.089798532067900477, -0.24763323859910183442},
      {-1.1, 0.05, 0.85, 0.0020333049286304340186, 0.001633669407537995653},
      {0.0, 0.0, 0.5, 2.1289368272118771587, 0.0},
      {1.3, -0.6, 0.6, -0.18529285014973017899, 0.022157084622494709198},
  };
  for (const auto& r : rows) {
    cd v = theta3(cd(r.zre, r.zim), r.q);
    EXPECT_LT(std::abs(v - cd(r.vre, r.vim)), 1e-13)
        << "z = " << r.zre << " + " << r.zim << "i, q = " << r.q;
  }
}

TEST(Theta3, MatchesDirectSeries) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uz(-2.0, 2.0), uq(0.05, 0.9);
  for (int i = 0; i < 50; ++i) {
    cd z(uz(rng), 0.4 * uz(rng));
    double q = uq(rng);
    cd ref(0);
    for (int n = -60; n <= 60; ++n)
      ref += std::pow(q, double(n) * n) * std::exp(cd(0, 2.0 * n) * z);
    cd v = theta3(z, q);
    EXPECT_LT(std::abs(v - ref), 1e-12 * std::max(1.0, std::abs(ref)));
  }
  EXPECT_THROW(theta3(cd(0.0, 0.0), 1.0), std::invalid_argument);
  EXPECT_THROW(theta3(cd(0.0, 0.0), -0.1), std::invalid_argument);
}
