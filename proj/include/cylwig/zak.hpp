// Maps between position samples, the modular cell amplitude, and the
// integer-label coefficients, plus the two hybrid (mixed-basis) amplitudes.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cylwig/common.hpp"
#include "cylwig/fft.hpp"
#include "cylwig/lattice.hpp"
#include "cylwig/wavefunctions.hpp"

namespace cylwig {

// <xbar,pbar|n,m> overlap between the two conjugate modular bases. Its
// modulus is the constant 1/sqrt(2 pi) for every argument.
inline cd basis_overlap(long n, long m, double xbar, double pbar,
                        const LatticeSpec& lattice) {
  double ang =
      lattice.p_period() * double(n) * xbar - double(m) * lattice.l * pbar;
  return cd(std::cos(ang), std::sin(ang)) / std::sqrt(2.0 * kPi);
}

namespace detail {

// Position sample index of cell n at modular column j, together with the
// lowest cell index the window holds for that column. Column j covers the
// cells n = first_cell(j) .. first_cell(j) + cells - 1.
inline long column_base(int j, int cells, int per_cell) {
  return long(j) + long(cells - 1) * per_cell / 2;
}
inline long first_cell(int j, int cells, int per_cell) {
  return -(column_base(j, cells, per_cell) / per_cell);
}

inline void transform_rows(std::vector<cd>& a, int rows, int cols, int sign) {
  std::vector<cd> row(cols);
  for (int r = 0; r < rows; ++r) {
    std::copy_n(a.begin() + std::size_t(r) * cols, cols, row.begin());
    auto t = transform(row, sign);
    std::copy_n(t.begin(), cols, a.begin() + std::size_t(r) * cols);
  }
}

inline void transform_cols(std::vector<cd>& a, int rows, int cols, int sign) {
  std::vector<cd> col(rows);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) col[r] = a[std::size_t(r) * cols + c];
    auto t = transform(col, sign);
    for (int r = 0; r < rows; ++r) a[std::size_t(r) * cols + c] = t[r];
  }
}

}  // namespace detail

// Folds a position wavefunction onto the fundamental cell. The window must
// sample every cell on the grid's xbar nodes, hold no more cells than there
// are pbar nodes, and actually cover the state.
inline ModularWavefunction zak_forward(const PositionWavefunction& psi,
                                       const ModularGrid& grid) {
  if (psi.per_cell != grid.Nx)
    throw std::invalid_argument("position sampling must match the xbar grid");
  if (psi.lattice.l != grid.lattice.l)
    throw std::invalid_argument("lattice mismatch");
  const int Nx = grid.Nx, Np = grid.Np, K = psi.cells;
  if (K > Np)
    throw std::invalid_argument(
        "window holds more cells than pbar nodes can resolve");
  if (K > 2) {
    double total = psi.norm2();
    double edge = 0.0;
    std::size_t last = std::size_t(K - 1) * Nx;
    for (int i = 0; i < Nx; ++i)
      edge += std::norm(psi.amp[i]) + std::norm(psi.amp[last + i]);
    edge *= psi.dx();
    if (total > 0.0 && edge > 1e-8 * total)
      throw numeric_error(
          "window does not cover the state: outermost cells hold relative "
          "mass " +
          std::to_string(edge / total));
  }
  ModularWavefunction mod(grid);
  const double pref = std::sqrt(grid.lattice.l / (2.0 * kPi));
  std::vector<cd> b(Np);
  for (int j = 0; j < Nx; ++j) {
    std::fill(b.begin(), b.end(), cd(0));
    long base = detail::column_base(j, K, Nx);
    long n0 = detail::first_cell(j, K, Nx);
    for (int t = 0; t < K; ++t) {
      long n = n0 + t;
      cd v = psi.amp[std::size_t(base + n * Nx)];
      if (n & 1) v = -v;  // e^{-i n pbar l} = (-1)^n e^{-2 pi i k n / Np}
      b[std::size_t(((n % Np) + Np) % Np)] += v;
    }
    auto spec = transform(b, -1);
    for (int k = 0; k < Np; ++k) mod.at(j, k) = pref * spec[k];
  }
  return mod;
}

// Unfolds the cell amplitude into a window of `cells` cells. Exact inverse
// of zak_forward whenever cells <= Np.
inline PositionWavefunction zak_inverse(const ModularWavefunction& mod,
                                        int cells) {
  const int Nx = mod.grid.Nx, Np = mod.grid.Np;
  if (cells < 1 || cells > Np)
    throw std::invalid_argument("cell count must lie in [1, Np]");
  PositionWavefunction psi(mod.grid.lattice, cells, Nx);
  const double pref =
      std::sqrt(mod.grid.lattice.l / (2.0 * kPi)) * mod.grid.dp();
  std::vector<cd> row(Np);
  for (int j = 0; j < Nx; ++j) {
    for (int k = 0; k < Np; ++k) row[k] = mod.at(j, k);
    auto spec = transform(row, +1);
    long base = detail::column_base(j, cells, Nx);
    long m0 = detail::first_cell(j, cells, Nx);
    for (int t = 0; t < cells; ++t) {
      long m = m0 + t;
      cd v = pref * spec[std::size_t(((m % Np) + Np) % Np)];
      if (m & 1) v = -v;
      psi.amp[std::size_t(base + m * Nx)] = v;
    }
  }
  return psi;
}

// Projects the cell amplitude onto the integer-label block. The grid must
// resolve the block: Nx >= 2*Nmax+1 and Np >= 2*Mmax+1.
inline IntegerWavefunction modular_to_integer(const ModularWavefunction& mod,
                                              int Nmax, int Mmax) {
  const int Nx = mod.grid.Nx, Np = mod.grid.Np;
  if (Nx < 2 * Nmax + 1 || Np < 2 * Mmax + 1)
    throw numeric_error("grid cannot resolve the requested block: need Nx >= " +
                        std::to_string(2 * Nmax + 1) + " and Np >= " +
                        std::to_string(2 * Mmax + 1));
  std::vector<cd> work(mod.amp);
  detail::transform_rows(work, Nx, Np, +1);   // pbar -> m
  detail::transform_cols(work, Nx, Np, -1);   // xbar -> n
  IntegerWavefunction iw(mod.grid.lattice, Nmax, Mmax);
  const double pref = mod.grid.cell_weight() / std::sqrt(2.0 * kPi);
  for (int n = -Nmax; n <= Nmax; ++n) {
    int jn = mod.grid.wrap_index_x(n);
    for (int m = -Mmax; m <= Mmax; ++m) {
      int km = mod.grid.wrap_index_p(m);
      cd v = pref * work[mod.grid.index(jn, km)];
      if ((n + m) & 1) v = -v;
      iw.at(n, m) = v;
    }
  }
  iw.truncation_loss = mod.norm2() - iw.norm2();
  return iw;
}

// Synthesizes the cell amplitude from integer-label coefficients.
inline ModularWavefunction integer_to_modular(const IntegerWavefunction& iw,
                                              const ModularGrid& grid) {
  const int Nx = grid.Nx, Np = grid.Np;
  if (Nx < 2 * iw.Nmax + 1 || Np < 2 * iw.Mmax + 1)
    throw numeric_error("grid cannot hold the block without aliasing");
  std::vector<cd> work(std::size_t(Nx) * Np, cd(0));
  for (int n = -iw.Nmax; n <= iw.Nmax; ++n) {
    int jn = grid.wrap_index_x(n);
    for (int m = -iw.Mmax; m <= iw.Mmax; ++m) {
      cd v = iw.at(n, m);
      if ((n + m) & 1) v = -v;
      work[grid.index(jn, grid.wrap_index_p(m))] = v;
    }
  }
  detail::transform_rows(work, Nx, Np, -1);   // m -> pbar
  detail::transform_cols(work, Nx, Np, +1);   // n -> xbar
  ModularWavefunction mod(grid);
  const double pref = 1.0 / std::sqrt(2.0 * kPi);
  for (std::size_t i = 0; i < mod.amp.size(); ++i) mod.amp[i] = pref * work[i];
  return mod;
}

// Mixed-basis amplitudes: kXbarM resolves (xbar, integer m), kNPbar resolves
// (integer n, pbar). Rows run over the integer label, columns over the
// continuous one.
enum class HybridKind { kXbarM, kNPbar };

struct HybridAmplitude {
  HybridKind kind;
  ModularGrid grid;
  int rows = 0;
  int cols = 0;
  std::vector<long> labels;
  std::vector<cd> a;

  HybridAmplitude(HybridKind kind_, const ModularGrid& g, int rows_, int cols_)
      : kind(kind_), grid(g), rows(rows_), cols(cols_),
        labels(rows_, 0), a(std::size_t(rows_) * cols_, cd(0)) {}

  long row_label(int r) const { return labels[std::size_t(r)]; }
  cd value(int r, int c) const { return a[std::size_t(r) * cols + c]; }
};

inline HybridAmplitude hybrid_amplitude(const ModularWavefunction& mod,
                                        HybridKind kind) {
  const int Nx = mod.grid.Nx, Np = mod.grid.Np;
  if (kind == HybridKind::kXbarM) {
    // h(m, xbar) = sqrt(l/2pi) * dp * sum_k psi(xbar, pbar_k) e^{+i m l pbar_k}
    HybridAmplitude h(kind, mod.grid, Np, Nx);
    const double pref =
        std::sqrt(mod.grid.lattice.l / (2.0 * kPi)) * mod.grid.dp();
    std::vector<cd> row(Np);
    for (int r = 0; r < Np; ++r) h.labels[r] = r - Np / 2;
    for (int j = 0; j < Nx; ++j) {
      for (int k = 0; k < Np; ++k) row[k] = mod.at(j, k);
      auto spec = transform(row, +1);
      for (int r = 0; r < Np; ++r) {
        long m = h.labels[r];
        cd v = pref * spec[std::size_t(((m % Np) + Np) % Np)];
        if (m & 1) v = -v;
        h.a[std::size_t(r) * Nx + j] = v;
      }
    }
    return h;
  }
  // h(n, pbar) = 1/sqrt(l) * dx * sum_j psi(xbar_j, pbar) e^{-i n k0 xbar_j}
  HybridAmplitude h(kind, mod.grid, Nx, Np);
  const double pref = mod.grid.dx() / std::sqrt(mod.grid.lattice.l);
  std::vector<cd> col(Nx);
  for (int r = 0; r < Nx; ++r) h.labels[r] = r - Nx / 2;
  for (int k = 0; k < Np; ++k) {
    for (int j = 0; j < Nx; ++j) col[j] = mod.at(j, k);
    auto spec = transform(col, -1);
    for (int r = 0; r < Nx; ++r) {
      long n = h.labels[r];
      cd v = pref * spec[std::size_t(((n % Nx) + Nx) % Nx)];
      if (n & 1) v = -v;
      h.a[std::size_t(r) * Np + k] = v;
    }
  }
  return h;
}

}  // namespace cylwig
