// State constructors: physical GKP states and their closed-form integer
// coefficients, shift errors, wrapped-Gaussian coherent states, cats, and
// the two-coefficient rotated superposition.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cylwig/common.hpp"
#include "cylwig/fft.hpp"
#include "cylwig/lattice.hpp"
#include "cylwig/special.hpp"
#include "cylwig/wavefunctions.hpp"

namespace cylwig {

enum class Logical { kZero, kOne, kPlus, kMinus };

struct GkpParams {
  LatticeSpec lattice;
  double delta;
  double kappa;
  Logical logical;

  GkpParams(const LatticeSpec& lat, double delta_, double kappa_,
            Logical logical_)
      : lattice(lat), delta(delta_), kappa(kappa_), logical(logical_) {
    if (!(std::isfinite(delta) && delta > 0.0))
      throw std::invalid_argument("peak width delta must be positive");
    if (!(std::isfinite(kappa) && kappa > 0.0))
      throw std::invalid_argument("envelope width kappa must be positive");
  }

  // Narrow-peak regime both cell axes rely on: l >= 10 delta, 2pi/l >= 10 kappa.
  bool sharp_regime() const {
    return lattice.l >= 10.0 * delta && lattice.p_period() >= 10.0 * kappa;
  }
};

struct ShiftError {
  double u = 0.0;
  double v = 0.0;

  bool in_cell(const LatticeSpec& lattice) const {
    return std::fabs(u) < 0.5 * lattice.l &&
           std::fabs(v) < 0.5 * lattice.p_period();
  }
};

namespace detail {

// Logical weights on the two bump centers -l/4 (zero) and +l/4 (one).
inline void logical_weights(Logical logical, double* wz, double* wo) {
  switch (logical) {
    case Logical::kZero: *wz = 1.0; *wo = 0.0; break;
    case Logical::kOne: *wz = 0.0; *wo = 1.0; break;
    case Logical::kPlus: *wz = 1.0; *wo = 1.0; break;
    case Logical::kMinus: *wz = 1.0; *wo = -1.0; break;
  }
}

}  // namespace detail

// Cell-clipped two-Gaussian product state. Seam nodes hold the mean of the
// two one-sided limits of the clipped profile. Normalized by quadrature.
inline ModularWavefunction make_physical_gkp(
    const GkpParams& params, const ModularGrid& grid,
    std::vector<std::string>* warnings = nullptr) {
  const double l = params.lattice.l;
  if (grid.lattice.l != l)
    throw std::invalid_argument("grid lattice does not match the parameters");
  if (warnings) {
    double ax = l / (4.0 * params.delta);
    if (ax < 0.1)
      warnings->push_back("x normalization degenerates: erf argument " +
                          std::to_string(ax) + " < 0.1");
    double ap = kPi / (l * params.kappa);
    if (ap < 0.1)
      warnings->push_back("p normalization degenerates: erf argument " +
                          std::to_string(ap) + " < 0.1");
  }
  double wz, wo;
  detail::logical_weights(params.logical, &wz, &wo);
  const double d2 = 2.0 * params.delta * params.delta;
  const double k2 = 2.0 * params.kappa * params.kappa;
  auto fval = [&](double x) {
    double tz = x + 0.25 * l, to = x - 0.25 * l;
    return wz * std::exp(-tz * tz / d2) + wo * std::exp(-to * to / d2);
  };
  auto gval = [&](double p) { return std::exp(-p * p / k2); };

  std::vector<double> f(grid.Nx), g(grid.Np);
  for (int j = 0; j < grid.Nx; ++j) f[j] = fval(grid.xbar(j));
  f[0] = 0.5 * (fval(-0.5 * l) + fval(0.5 * l));
  for (int k = 0; k < grid.Np; ++k) g[k] = gval(grid.pbar(k));
  g[0] = 0.5 * (gval(-kPi / l) + gval(kPi / l));

  ModularWavefunction psi(grid);
  for (int j = 0; j < grid.Nx; ++j)
    for (int k = 0; k < grid.Np; ++k) psi.at(j, k) = f[j] * g[k];
  psi.normalize();
  return psi;
}

// Scalar product of the two normalized logical states. Depends only on the
// position-side profile; the shared envelope cancels.
inline double gkp_overlap(const GkpParams& params) {
  const double l = params.lattice.l, d = params.delta;
  double r = l / (4.0 * d);
  double num = 2.0 * std::exp(-r * r) * std::erf(l / (2.0 * d));
  double den = std::erf(r) + std::erf(3.0 * r);
  return num / den;
}

namespace detail {

// integral over [a, b] of e^{-(x-c)^2/(2 d^2)} e^{-i w x} dx
inline cd clipped_gauss_fourier(double a, double b, double c, double d,
                                double w) {
  double s2 = std::sqrt(2.0);
  cd shift(0.0, w * d / s2);
  cd hi = erf_complex(cd((b - c) / (s2 * d), 0.0) + shift);
  cd lo = erf_complex(cd((a - c) / (s2 * d), 0.0) + shift);
  cd pref = std::exp(cd(0.0, -w * c)) * std::exp(-0.5 * w * w * d * d) * d *
            std::sqrt(kPi / 2.0);
  return pref * (hi - lo);
}

}  // namespace detail

// Closed-form integer-label coefficients of the physical GKP state, with the
// exact normalization constant.
inline IntegerWavefunction gkp_integer_coeffs(const GkpParams& params,
                                              int Nmax, int Mmax) {
  const double l = params.lattice.l;
  const double k0 = params.lattice.p_period();
  const double d = params.delta, kp = params.kappa;
  double wz, wo;
  detail::logical_weights(params.logical, &wz, &wo);

  // exact norm: x-side cell integral of the squared profile, p-side envelope
  double ix = d * std::sqrt(kPi) / 2.0 *
              (std::erf(3.0 * l / (4.0 * d)) + std::erf(l / (4.0 * d)));
  double cross = std::exp(-std::pow(l / (4.0 * d), 2)) * d * std::sqrt(kPi) *
                 std::erf(l / (2.0 * d));
  double x2;
  if (params.logical == Logical::kZero || params.logical == Logical::kOne)
    x2 = ix;
  else if (params.logical == Logical::kPlus)
    x2 = 2.0 * (ix + cross);
  else
    x2 = 2.0 * (ix - cross);
  double ip = kp * std::sqrt(kPi) * std::erf(kPi / (l * kp));
  double norm = std::sqrt(x2 * ip);

  IntegerWavefunction iw(params.lattice, Nmax, Mmax);
  std::vector<cd> fn(2 * Nmax + 1);
  for (int n = -Nmax; n <= Nmax; ++n) {
    cd f0 = detail::clipped_gauss_fourier(-0.5 * l, 0.5 * l, -0.25 * l, d,
                                          k0 * n);
    fn[std::size_t(n + Nmax)] = wz * f0 + wo * std::conj(f0);
  }
  std::vector<cd> gm(2 * Mmax + 1);
  for (int m = -Mmax; m <= Mmax; ++m)
    gm[std::size_t(m + Mmax)] = detail::clipped_gauss_fourier(
        -kPi / l, kPi / l, 0.0, kp, -double(m) * l);

  const double pref = 1.0 / (norm * std::sqrt(2.0 * kPi));
  for (int n = -Nmax; n <= Nmax; ++n)
    for (int m = -Mmax; m <= Mmax; ++m)
      iw.at(n, m) = pref * fn[std::size_t(n + Nmax)] * gm[std::size_t(m + Mmax)];
  return iw;
}

// psi'(x) = e^{i v x} psi(x - u), carried out spectrally on the cell. The
// x-translation works on e^{-i (pbar - v) xbar} psi, which is plainly
// periodic, so the quasi-periodic wrap phase comes out automatically.
inline ModularWavefunction apply_shift(const ModularWavefunction& state,
                                       const ShiftError& err) {
  const int Nx = state.grid.Nx, Np = state.grid.Np;
  const double l = state.grid.lattice.l;
  const double k0 = state.grid.lattice.p_period();
  ModularWavefunction out = state;

  if (err.v != 0.0) {
    std::vector<cd> row(Np);
    for (int j = 0; j < Nx; ++j) {
      for (int k = 0; k < Np; ++k) row[k] = out.at(j, k);
      auto spec = transform(row, +1);
      std::vector<cd> twisted(Np);
      for (int r = 0; r < Np; ++r) {
        long m = (r <= Np / 2 - 1) ? r : r - Np;  // centered label in [-Np/2, Np/2)
        double ang = double(m) * l * err.v;
        twisted[std::size_t(r)] =
            spec[std::size_t(r)] * cd(std::cos(ang), std::sin(ang));
      }
      auto back = transform(twisted, -1);
      for (int k = 0; k < Np; ++k) out.at(j, k) = back[k] / double(Np);
    }
  }

  if (err.u != 0.0) {
    std::vector<cd> col(Nx);
    for (int k = 0; k < Np; ++k) {
      double q = state.grid.pbar(k) - err.v;
      for (int j = 0; j < Nx; ++j) {
        double ang = -q * state.grid.xbar(j);
        col[j] = out.at(j, k) * cd(std::cos(ang), std::sin(ang));
      }
      auto spec = transform(col, -1);
      std::vector<cd> moved(Nx);
      for (int r = 0; r < Nx; ++r) {
        long n = (r <= Nx / 2 - 1) ? r : r - Nx;
        double ang = -k0 * double(n) * err.u;
        moved[std::size_t(r)] =
            spec[std::size_t(r)] * cd(std::cos(ang), std::sin(ang));
      }
      auto back = transform(moved, +1);
      for (int j = 0; j < Nx; ++j) {
        double ang = q * (state.grid.xbar(j) - err.u);
        out.at(j, k) = back[j] / double(Nx) * cd(std::cos(ang), std::sin(ang));
      }
    }
  }

  if (err.v != 0.0) {
    for (int j = 0; j < Nx; ++j) {
      double ang = err.v * state.grid.xbar(j);
      cd ph(std::cos(ang), std::sin(ang));
      for (int k = 0; k < Np; ++k) out.at(j, k) *= ph;
    }
  }
  return out;
}

// Wrapped Gaussian with mean (x0, p0) and width sigma, built from the comb
// series (the theta-function sum with the square completed term by term, so
// every term is bounded by 1). Terms below 1e-16 of the peak are dropped.
inline ModularWavefunction make_coherent_modular(double x0, double p0,
                                                 double sigma,
                                                 const ModularGrid& grid) {
  if (!(std::isfinite(sigma) && sigma > 0.0))
    throw std::invalid_argument("sigma must be positive");
  const double l = grid.lattice.l;
  auto w = wrap_position(x0, grid.lattice);
  const double x0w = w.rem;
  // teeth beyond this index are below 1e-16 in relative weight
  int nspan = int(std::ceil(0.5 + 8.6 * sigma / l)) + 1;

  ModularWavefunction psi(grid);
  for (int j = 0; j < grid.Nx; ++j) {
    double dxc = grid.xbar(j) - x0w;
    for (int k = 0; k < grid.Np; ++k) {
      double pb = grid.pbar(k);
      cd acc(0);
      for (int n = -nspan; n <= nspan; ++n) {
        double t = dxc + n * l;
        double mag = std::exp(-t * t / (2.0 * sigma * sigma));
        double ang = p0 * t - double(n) * pb * l;
        acc += mag * cd(std::cos(ang), std::sin(ang));
      }
      // refold phase for a center outside the fundamental cell
      double ang = -double(w.n) * l * pb;
      psi.at(j, k) = acc * cd(std::cos(ang), std::sin(ang));
    }
  }
  psi.normalize();
  return psi;
}

// Two wrapped Gaussians at +-separation/2 with a relative sign.
inline ModularWavefunction make_cat_modular(double separation, double sigma,
                                            int parity,
                                            const ModularGrid& grid) {
  if (parity != 1 && parity != -1)
    throw std::invalid_argument("parity must be +1 or -1");
  auto right = make_coherent_modular(0.5 * separation, 0.0, sigma, grid);
  auto left = make_coherent_modular(-0.5 * separation, 0.0, sigma, grid);
  ModularWavefunction psi(grid);
  for (std::size_t i = 0; i < psi.amp.size(); ++i)
    psi.amp[i] = right.amp[i] + double(parity) * left.amp[i];
  if (psi.norm2() < 1e-12)
    throw numeric_error("degenerate cat: the two branches cancel");
  psi.normalize();
  return psi;
}

// (|n0,m0> + sign |-n0,m0>)/norm with the stated even-n0 condition.
inline IntegerWavefunction make_pi2_rotated(const LatticeSpec& lattice, int n0,
                                            int m0, int sign, int Nmax = -1,
                                            int Mmax = -1) {
  if (n0 % 2 != 0)
    throw std::invalid_argument("n0 must be even for the rotated state");
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("sign must be +1 or -1");
  if (Nmax < 0) Nmax = std::max(std::abs(n0), 1);
  if (Mmax < 0) Mmax = std::max(std::abs(m0), 1);
  IntegerWavefunction iw(lattice, Nmax, Mmax);
  const double r = 1.0 / std::sqrt(2.0);
  iw.at(n0, m0) += r;
  iw.at(-n0, m0) += double(sign) * r;
  if (iw.norm2() < 1e-12)
    throw numeric_error("null superposition: the two terms cancel");
  iw.normalize();
  return iw;
}

}  // namespace cylwig
