// Lattice geometry: the (l, 2*pi/l) period pair, modular wrapping into the
// fundamental cell [-l/2, l/2) x [-pi/l, pi/l), and the uniform grid with
// rectangle-rule quadrature that all transforms share. hbar = 1 throughout.
#pragma once

#include <cmath>
#include <stdexcept>

#include "cylwig/common.hpp"

namespace cylwig {

struct LatticeSpec {
  double l;

  LatticeSpec() : l(std::sqrt(kPi)) {}
  explicit LatticeSpec(double length) : l(length) {
    if (!std::isfinite(length) || length <= 0.0)
      throw std::invalid_argument("LatticeSpec: l must be finite and > 0");
  }
  // Recomputed, never stored, so l * p_period() == 2*pi holds by definition.
  double p_period() const { return 2.0 * kPi / l; }
};

struct ModularPoint {
  long n;
  double xbar;
  long m;
  double pbar;
};

struct WrapResult {
  long n;
  double rem;  // in [-period/2, period/2), lower edge included
};

// Decomposes x = n*period + rem with rem in [-period/2, period/2).
inline WrapResult wrap_value(double x, double period) {
  if (!std::isfinite(x)) throw std::domain_error("wrap: non-finite input");
  double nf = std::floor(x / period + 0.5);
  double rem = x - nf * period;
  long n = static_cast<long>(nf);
  // Rounding can leave rem just outside the half-open interval.
  if (rem >= 0.5 * period) {
    rem -= period;
    ++n;
  } else if (rem < -0.5 * period) {
    rem += period;
    --n;
  }
  return {n, rem};
}

inline WrapResult wrap_position(double x, const LatticeSpec& lattice) {
  return wrap_value(x, lattice.l);
}

inline WrapResult wrap_momentum(double p, const LatticeSpec& lattice) {
  return wrap_value(p, lattice.p_period());
}

struct WrappedSum {
  double wrapped;  // in [-period/2, period/2)
  int winding;     // -1, 0 or +1; a + b = wrapped + winding*period
};

// Sum of two in-cell values, folded back into the cell. The winding is the
// step correction: +1 iff a+b >= period/2, -1 iff a+b < -period/2.
inline WrappedSum wrapped_sum(double a, double b, double period) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw std::domain_error("wrapped_sum: non-finite input");
  double s = a + b;
  if (s >= 0.5 * period) return {s - period, 1};
  if (s < -0.5 * period) return {s + period, -1};
  return {s, 0};
}

// Uniform sampling of the fundamental cell. Nodes start at the included
// lower edges: xbar_j = -l/2 + j*l/Nx, pbar_k = -pi/l + k*(2*pi/l)/Np.
struct ModularGrid {
  LatticeSpec lattice;
  int Nx;
  int Np;

  ModularGrid(const LatticeSpec& spec, int nx, int np)
      : lattice(spec), Nx(nx), Np(np) {
    if (nx < 2 || np < 2 || nx % 2 != 0 || np % 2 != 0)
      throw std::invalid_argument(
          "ModularGrid: Nx and Np must be even and >= 2");
  }

  double dx() const { return lattice.l / Nx; }
  double dp() const { return lattice.p_period() / Np; }
  double xbar(int j) const { return -0.5 * lattice.l + j * dx(); }
  double pbar(int k) const { return -kPi / lattice.l + k * dp(); }
  double cell_weight() const { return dx() * dp(); }
  std::size_t size() const {
    return static_cast<std::size_t>(Nx) * static_cast<std::size_t>(Np);
  }
  std::size_t index(int j, int k) const {
    return static_cast<std::size_t>(j) * Np + k;
  }

  int wrap_index_x(long j) const {
    long r = j % Nx;
    return static_cast<int>(r < 0 ? r + Nx : r);
  }
  int wrap_index_p(long k) const {
    long r = k % Np;
    return static_cast<int>(r < 0 ? r + Np : r);
  }
};

inline bool in_fundamental_cell(const ModularPoint& pt,
                                const LatticeSpec& lattice) {
  double hx = 0.5 * lattice.l;
  double hp = 0.5 * lattice.p_period();
  return pt.xbar >= -hx && pt.xbar < hx && pt.pbar >= -hp && pt.pbar < hp;
}

}  // namespace cylwig
