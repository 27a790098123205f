// Displacement operators on the integer-label block, the parity and point
// operators built from them, the logical gate realizations, and the
// half-cell readout observables.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cylwig/common.hpp"
#include "cylwig/lattice.hpp"
#include "cylwig/wavefunctions.hpp"

namespace cylwig {

// Label of a phase-space displacement: integer steps (n, m) between cells
// plus modular arguments (xbar, pbar) inside the fundamental cell.
struct DisplacementLabel {
  long n = 0;
  double xbar = 0.0;
  long m = 0;
  double pbar = 0.0;

  DisplacementLabel inverse() const { return {-n, -xbar, -m, -pbar}; }
  bool in_cell(const LatticeSpec& lattice) const {
    return in_fundamental_cell(ModularPoint{n, xbar, m, pbar}, lattice);
  }
};

// Dense operator on the integer-label block |n| <= Nmax, |m| <= Mmax.
// edge_n/edge_m say how many outermost label rings the construction could
// not fill faithfully (images fell past the truncation); identities hold on
// the complementary interior.
struct OperatorMatrix {
  LatticeSpec lattice;
  int Nmax = 0;
  int Mmax = 0;
  int edge_n = 0;
  int edge_m = 0;
  std::string label;
  std::vector<cd> a;

  OperatorMatrix(const LatticeSpec& lat, int nmax, int mmax)
      : lattice(lat), Nmax(nmax), Mmax(mmax) {
    if (Nmax < 0 || Mmax < 0)
      throw std::invalid_argument("truncation bounds must be non-negative");
    a.assign(std::size_t(dim()) * dim(), cd(0));
  }

  long dim() const { return long(2 * Nmax + 1) * (2 * Mmax + 1); }

  long basis_index(long n, long m) const {
    if (n < -Nmax || n > Nmax || m < -Mmax || m > Mmax)
      throw std::out_of_range("integer label outside the stored block");
    return (n + Nmax) * (2 * Mmax + 1) + (m + Mmax);
  }

  cd& at(long n1, long m1, long n2, long m2) {
    return a[std::size_t(basis_index(n1, m1)) * dim() + basis_index(n2, m2)];
  }
  const cd& at(long n1, long m1, long n2, long m2) const {
    return a[std::size_t(basis_index(n1, m1)) * dim() + basis_index(n2, m2)];
  }

  IntegerWavefunction apply(const IntegerWavefunction& psi) const {
    if (psi.Nmax != Nmax || psi.Mmax != Mmax)
      throw std::invalid_argument("state and operator blocks differ");
    IntegerWavefunction out(lattice, Nmax, Mmax);
    long d = dim();
    for (long i = 0; i < d; ++i) {
      cd s(0);
      for (long j = 0; j < d; ++j) s += a[std::size_t(i) * d + j] * psi.c[j];
      out.c[i] = s;
    }
    out.truncation_loss = psi.truncation_loss;
    return out;
  }
};

inline OperatorMatrix identity_matrix(const LatticeSpec& lat, int Nmax,
                                      int Mmax) {
  OperatorMatrix out(lat, Nmax, Mmax);
  out.label = "identity";
  long d = out.dim();
  for (long i = 0; i < d; ++i) out.a[std::size_t(i) * d + i] = 1.0;
  return out;
}

inline OperatorMatrix adjoint(const OperatorMatrix& op) {
  OperatorMatrix out(op.lattice, op.Nmax, op.Mmax);
  out.label = op.label.empty() ? "adjoint" : "adjoint(" + op.label + ")";
  out.edge_n = op.edge_n;
  out.edge_m = op.edge_m;
  long d = op.dim();
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j)
      out.a[std::size_t(i) * d + j] = std::conj(op.a[std::size_t(j) * d + i]);
  return out;
}

inline OperatorMatrix matmul(const OperatorMatrix& lhs,
                             const OperatorMatrix& rhs) {
  if (lhs.Nmax != rhs.Nmax || lhs.Mmax != rhs.Mmax)
    throw std::invalid_argument("operator blocks differ");
  OperatorMatrix out(lhs.lattice, lhs.Nmax, lhs.Mmax);
  out.label = "product";
  out.edge_n = std::min(lhs.Nmax, lhs.edge_n + rhs.edge_n);
  out.edge_m = std::min(lhs.Mmax, lhs.edge_m + rhs.edge_m);
  long d = lhs.dim();
  for (long i = 0; i < d; ++i)
    for (long k = 0; k < d; ++k) {
      cd v = lhs.a[std::size_t(i) * d + k];
      if (v == cd(0)) continue;
      for (long j = 0; j < d; ++j)
        out.a[std::size_t(i) * d + j] += v * rhs.a[std::size_t(k) * d + j];
    }
  return out;
}

inline cd trace_product(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  if (lhs.Nmax != rhs.Nmax || lhs.Mmax != rhs.Mmax)
    throw std::invalid_argument("operator blocks differ");
  long d = lhs.dim();
  cd s(0);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j)
      s += lhs.a[std::size_t(i) * d + j] * rhs.a[std::size_t(j) * d + i];
  return s;
}

// Largest deviation of op^dag op from the identity over entry pairs whose
// column labels both lie inside the operator's faithful interior.
inline double interior_unitarity_defect(const OperatorMatrix& op) {
  auto gram = matmul(adjoint(op), op);
  int rn = op.Nmax - op.edge_n, rm = op.Mmax - op.edge_m;
  double worst = 0.0;
  for (long n1 = -rn; n1 <= rn; ++n1)
    for (long m1 = -rm; m1 <= rm; ++m1)
      for (long n2 = -rn; n2 <= rn; ++n2)
        for (long m2 = -rm; m2 <= rm; ++m2) {
          cd want = (n1 == n2 && m1 == m2) ? cd(1) : cd(0);
          worst = std::max(worst, std::abs(gram.at(n1, m1, n2, m2) - want));
        }
  return worst;
}

inline double hermiticity_defect(const OperatorMatrix& op) {
  long d = op.dim();
  double worst = 0.0;
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j)
      worst = std::max(worst,
                       std::abs(op.a[std::size_t(i) * d + j] -
                                std::conj(op.a[std::size_t(j) * d + i])));
  return worst;
}

namespace detail {

// Phase attached to the shifted basis vector: the modular arguments act at
// the midpoint label, which keeps the adjoint equal to the negated label.
inline cd displacement_phase(const DisplacementLabel& d,
                             const LatticeSpec& lat, long r, long s) {
  double ang = lat.p_period() * d.xbar * (double(r) + 0.5 * double(d.n)) -
               d.pbar * lat.l * (double(s) + 0.5 * double(d.m));
  return cd(std::cos(ang), std::sin(ang));
}

}  // namespace detail

inline OperatorMatrix displacement_matrix(const DisplacementLabel& d,
                                          const LatticeSpec& lat, int Nmax,
                                          int Mmax) {
  if (Nmax < std::labs(d.n) + 2 || Mmax < std::labs(d.m) + 2)
    throw std::invalid_argument(
        "truncation leaves no interior for the displacement");
  OperatorMatrix out(lat, Nmax, Mmax);
  out.label = "displacement";
  out.edge_n = int(std::labs(d.n));
  out.edge_m = int(std::labs(d.m));
  for (long r = -Nmax; r <= Nmax; ++r) {
    long rr = r + d.n;
    if (rr < -Nmax || rr > Nmax) continue;
    for (long s = -Mmax; s <= Mmax; ++s) {
      long ss = s + d.m;
      if (ss < -Mmax || ss > Mmax) continue;
      out.at(rr, ss, r, s) = detail::displacement_phase(d, lat, r, s);
    }
  }
  return out;
}

// Matrix-free displacement action; avoids the dense dim^2 storage so large
// truncations stay cheap. Mass shifted past the block edge is added to the
// state's truncation_loss.
inline IntegerWavefunction apply_displacement(const IntegerWavefunction& psi,
                                              const DisplacementLabel& d) {
  IntegerWavefunction out(psi.lattice, psi.Nmax, psi.Mmax);
  double lost = 0.0;
  for (long r = -psi.Nmax; r <= psi.Nmax; ++r)
    for (long s = -psi.Mmax; s <= psi.Mmax; ++s) {
      cd v = psi.at(int(r), int(s));
      if (v == cd(0)) continue;
      long rr = r + d.n, ss = s + d.m;
      if (rr < -psi.Nmax || rr > psi.Nmax || ss < -psi.Mmax ||
          ss > psi.Mmax) {
        lost += std::norm(v);
        continue;
      }
      out.at(int(rr), int(ss)) =
          detail::displacement_phase(d, psi.lattice, r, s) * v;
    }
  out.truncation_loss = psi.truncation_loss + lost;
  return out;
}

struct ComposedDisplacement {
  DisplacementLabel label;
  cd phase;
};

// Product of two displacements: one displacement with wrapped modular
// arguments times a scalar cocycle phase.
inline ComposedDisplacement compose_displacements(const DisplacementLabel& d1,
                                                  const DisplacementLabel& d2,
                                                  const LatticeSpec& lat) {
  WrappedSum wx = wrapped_sum(d1.xbar, d2.xbar, lat.l);
  WrappedSum wp = wrapped_sum(d1.pbar, d2.pbar, lat.p_period());
  DisplacementLabel sum{d1.n + d2.n, wx.wrapped, d1.m + d2.m, wp.wrapped};
  double ang = kPi / lat.l * (d1.xbar * double(d2.n) - d2.xbar * double(d1.n)) +
               kPi * wx.winding * double(sum.n) -
               0.5 * lat.l * (d1.pbar * double(d2.m) - d2.pbar * double(d1.m)) -
               kPi * wp.winding * double(sum.m);
  return {sum, cd(std::cos(ang), std::sin(ang))};
}

inline OperatorMatrix parity_matrix(const LatticeSpec& lat, int Nmax,
                                    int Mmax) {
  OperatorMatrix out(lat, Nmax, Mmax);
  out.label = "parity";
  for (long n = -Nmax; n <= Nmax; ++n)
    for (long m = -Mmax; m <= Mmax; ++m) out.at(-n, -m, n, m) = 1.0;
  return out;
}

// Reflection about the phase-space point (n, xbar, m, pbar): the displaced
// parity. Rows pair label (n2, m2) with (2n - n2, 2m - m2).
inline OperatorMatrix point_operator_matrix(const DisplacementLabel& d,
                                            const LatticeSpec& lat, int Nmax,
                                            int Mmax) {
  if (Nmax < 2 * std::labs(d.n) + 2 || Mmax < 2 * std::labs(d.m) + 2)
    throw std::invalid_argument(
        "truncation leaves no interior for the point operator");
  OperatorMatrix out(lat, Nmax, Mmax);
  out.label = "point";
  out.edge_n = int(2 * std::labs(d.n));
  out.edge_m = int(2 * std::labs(d.m));
  double k0 = lat.p_period();
  for (long n2 = -Nmax; n2 <= Nmax; ++n2) {
    long n1 = 2 * d.n - n2;
    if (n1 < -Nmax || n1 > Nmax) continue;
    for (long m2 = -Mmax; m2 <= Mmax; ++m2) {
      long m1 = 2 * d.m - m2;
      if (m1 < -Mmax || m1 > Mmax) continue;
      double ang = -2.0 * k0 * d.xbar * double(d.n - n2) +
                   2.0 * lat.l * d.pbar * double(d.m - m2);
      out.at(n1, m1, n2, m2) = cd(std::cos(ang), std::sin(ang));
    }
  }
  return out;
}

// Logical gate labels: both are single-cell position steps, the bit flip
// with a half-cell modular argument and the phase flip with none, so the
// phase flip acts as the pure phase e^{i (2 pi / l) x} on wavefunctions.
inline DisplacementLabel pauli_x_label(const LatticeSpec& lat) {
  return {1, -0.5 * lat.l, 0, 0.0};
}

inline DisplacementLabel pauli_z_label(const LatticeSpec&) {
  return {1, 0.0, 0, 0.0};
}

struct PauliOperators {
  DisplacementLabel x_label, z_label;
  OperatorMatrix x, z;
};

inline PauliOperators pauli_matrices(const LatticeSpec& lat, int Nmax,
                                     int Mmax) {
  DisplacementLabel xl = pauli_x_label(lat), zl = pauli_z_label(lat);
  return {xl, zl, displacement_matrix(xl, lat, Nmax, Mmax),
          displacement_matrix(zl, lat, Nmax, Mmax)};
}

enum class PauliAxis { kX, kY, kZ };

// Readout observables over the half cell xbar in [-l/2, 0), pairing each
// column with its half-period partner. The z axis compares the two halves'
// densities, the equatorial axes read the half-shift coherence weighted by
// e^{-i pbar l / 2}.
inline double gamma_expectation(const ModularWavefunction& psi,
                                PauliAxis axis) {
  const ModularGrid& grid = psi.grid;
  int half = grid.Nx / 2;
  double sum = 0.0;
  for (int j = 0; j < half; ++j)
    for (int k = 0; k < grid.Np; ++k) {
      cd a = psi.at(j, k), b = psi.at(j + half, k);
      switch (axis) {
        case PauliAxis::kZ:
          sum += std::norm(a) - std::norm(b);
          break;
        case PauliAxis::kX: {
          double ang = -0.5 * grid.pbar(k) * grid.lattice.l;
          sum += 2.0 * (cd(std::cos(ang), std::sin(ang)) * std::conj(a) * b)
                           .real();
          break;
        }
        case PauliAxis::kY: {
          double ang = -0.5 * grid.pbar(k) * grid.lattice.l;
          sum += 2.0 * (cd(std::cos(ang), std::sin(ang)) * std::conj(a) * b)
                           .imag();
          break;
        }
      }
    }
  return sum * grid.cell_weight() / psi.norm2();
}

inline OperatorMatrix density_from_state(const IntegerWavefunction& psi) {
  OperatorMatrix rho(psi.lattice, psi.Nmax, psi.Mmax);
  rho.label = "density";
  long d = rho.dim();
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j)
      rho.a[std::size_t(i) * d + j] = psi.c[i] * std::conj(psi.c[j]);
  return rho;
}

// chi(lambda) = Tr(rho D^dag(lambda)); evaluated without forming the
// displacement matrix.
inline cd characteristic_value(const OperatorMatrix& rho,
                               const DisplacementLabel& d) {
  cd s(0);
  for (long r = -rho.Nmax; r <= rho.Nmax; ++r) {
    long rr = r + d.n;
    if (rr < -rho.Nmax || rr > rho.Nmax) continue;
    for (long q = -rho.Mmax; q <= rho.Mmax; ++q) {
      long qq = q + d.m;
      if (qq < -rho.Mmax || qq > rho.Mmax) continue;
      s += std::conj(detail::displacement_phase(d, rho.lattice, r, q)) *
           rho.at(rr, qq, r, q);
    }
  }
  return s;
}

using ChiFunction = std::function<cd(const DisplacementLabel&)>;

// Rebuilds the density matrix from its characteristic function by cell
// quadrature over the modular arguments and summation over the integer
// ones. Exact once the grid kills every alias: Nx >= 4 Nmax + 1 and
// Np >= 4 Mmax + 1.
inline OperatorMatrix synthesize_density(const LatticeSpec& lat, int Nmax,
                                         int Mmax, int Nx, int Np,
                                         const ChiFunction& chi) {
  if (Nx < 4 * Nmax + 1 || Np < 4 * Mmax + 1)
    throw numeric_error("quadrature grid cannot resolve the block");
  ModularGrid grid(lat, Nx, Np);
  OperatorMatrix rho(lat, Nmax, Mmax);
  rho.label = "synthesized";
  double k0 = lat.p_period();
  std::vector<cd> samples(std::size_t(Nx) * Np);
  for (long n = -2 * Nmax; n <= 2 * Nmax; ++n)
    for (long m = -2 * Mmax; m <= 2 * Mmax; ++m) {
      for (int j = 0; j < Nx; ++j)
        for (int k = 0; k < Np; ++k)
          samples[std::size_t(j) * Np + k] =
              chi(DisplacementLabel{n, grid.xbar(j), m, grid.pbar(k)});
      for (long r2 = -Nmax; r2 <= Nmax; ++r2) {
        long r1 = r2 + n;
        if (r1 < -Nmax || r1 > Nmax) continue;
        for (long s2 = -Mmax; s2 <= Mmax; ++s2) {
          long s1 = s2 + m;
          if (s1 < -Mmax || s1 > Mmax) continue;
          cd acc(0);
          for (int j = 0; j < Nx; ++j)
            for (int k = 0; k < Np; ++k) {
              double ang =
                  k0 * grid.xbar(j) * (double(r2) + 0.5 * double(n)) -
                  grid.pbar(k) * lat.l * (double(s2) + 0.5 * double(m));
              acc += samples[std::size_t(j) * Np + k] *
                     cd(std::cos(ang), std::sin(ang));
            }
          rho.at(r1, s1, r2, s2) = acc / double(Nx) / double(Np);
        }
      }
    }
  return rho;
}

}  // namespace cylwig
