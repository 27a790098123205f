// Containers for the three representations of a pure state: position
// samples, the modular (cell) amplitude, and integer-label coefficients.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "cylwig/common.hpp"
#include "cylwig/lattice.hpp"

namespace cylwig {

// Samples of psi(x) on a uniform grid spanning [-cells*l/2, cells*l/2).
struct PositionWavefunction {
  LatticeSpec lattice;
  int cells = 0;
  int per_cell = 0;
  std::vector<cd> amp;

  PositionWavefunction(const LatticeSpec& lat, int cells_, int per_cell_)
      : lattice(lat), cells(cells_), per_cell(per_cell_) {
    if (cells < 1) throw std::invalid_argument("need at least one cell");
    if (per_cell < 2 || per_cell % 2 != 0)
      throw std::invalid_argument("samples per cell must be even and >= 2");
    amp.assign(std::size_t(cells) * per_cell, cd(0));
  }

  double dx() const { return lattice.l / per_cell; }
  double x(std::size_t i) const {
    return (-0.5 * cells + double(i) / per_cell) * lattice.l;
  }
  std::size_t size() const { return amp.size(); }

  double norm2() const {
    double s = 0.0;
    for (const auto& z : amp) s += std::norm(z);
    return s * dx();
  }

  void normalize() {
    double n2 = norm2();
    if (n2 < 1e-300) throw numeric_error("cannot normalize a null state");
    double inv = 1.0 / std::sqrt(n2);
    for (auto& z : amp) z *= inv;
  }
};

// Amplitude on the fundamental cell, row-major over (xbar index, pbar index).
struct ModularWavefunction {
  ModularGrid grid;
  std::vector<cd> amp;

  explicit ModularWavefunction(const ModularGrid& g)
      : grid(g), amp(g.size(), cd(0)) {}

  cd& at(int j, int k) { return amp[grid.index(j, k)]; }
  const cd& at(int j, int k) const { return amp[grid.index(j, k)]; }

  // Quasi-periodic extension at unwrapped indices: one x-period up multiplies
  // by e^{+i l pbar}; the pbar direction is plainly periodic.
  cd extended_at(long jj, long kk) const {
    long wx = floor_div(jj, grid.Nx);
    int j = int(jj - wx * grid.Nx);
    int k = grid.wrap_index_p(kk);
    cd v = at(j, k);
    if (wx == 0) return v;
    double ang = double(wx) * grid.lattice.l * grid.pbar(k);
    return v * cd(std::cos(ang), std::sin(ang));
  }

  double norm2() const {
    double s = 0.0;
    for (const auto& z : amp) s += std::norm(z);
    return s * grid.cell_weight();
  }

  void normalize() {
    double n2 = norm2();
    if (n2 < 1e-300) throw numeric_error("cannot normalize a null state");
    double inv = 1.0 / std::sqrt(n2);
    for (auto& z : amp) z *= inv;
  }
};

// Coefficients c_{n,m} on the integer-label block |n| <= Nmax, |m| <= Mmax.
struct IntegerWavefunction {
  LatticeSpec lattice;
  int Nmax = 0;
  int Mmax = 0;
  std::vector<cd> c;
  // Squared norm living outside the stored block at the time of conversion.
  double truncation_loss = 0.0;

  IntegerWavefunction(const LatticeSpec& lat, int nmax, int mmax)
      : lattice(lat), Nmax(nmax), Mmax(mmax) {
    if (Nmax < 0 || Mmax < 0)
      throw std::invalid_argument("truncation bounds must be non-negative");
    c.assign(std::size_t(2 * Nmax + 1) * (2 * Mmax + 1), cd(0));
  }

  std::size_t index(int n, int m) const {
    if (n < -Nmax || n > Nmax || m < -Mmax || m > Mmax)
      throw std::out_of_range("integer label outside the stored block");
    return std::size_t(n + Nmax) * (2 * Mmax + 1) + std::size_t(m + Mmax);
  }
  cd& at(int n, int m) { return c[index(n, m)]; }
  const cd& at(int n, int m) const { return c[index(n, m)]; }

  // Read that treats labels outside the stored block as zero.
  cd coeff(long n, long m) const {
    if (n < -Nmax || n > Nmax || m < -Mmax || m > Mmax) return cd(0);
    return c[std::size_t(n + Nmax) * (2 * Mmax + 1) + std::size_t(m + Mmax)];
  }

  double norm2() const {
    double s = 0.0;
    for (const auto& z : c) s += std::norm(z);
    return s;
  }

  void normalize() {
    double n2 = norm2();
    if (n2 < 1e-300) throw numeric_error("cannot normalize a null state");
    double inv = 1.0 / std::sqrt(n2);
    for (auto& z : c) z *= inv;
  }
};

}  // namespace cylwig
