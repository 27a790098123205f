#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cylwig/common.hpp"
#include "cylwig/fft.hpp"
#include "cylwig/lattice.hpp"
#include "cylwig/operators.hpp"
#include "cylwig/states.hpp"
#include "cylwig/wavefunctions.hpp"
#include "cylwig/zak.hpp"

namespace cylwig {

// One mixture member: a cell wavefunction with its probability weight.
struct EnsembleTerm {
  double weight;
  ModularWavefunction state;
};

struct EnsembleState {
  std::vector<EnsembleTerm> terms;
};

enum class AnalyticKind { kGkpPlus, kGkpLogical, kCoherent, kCat };

struct AnalyticParams {
  double delta = 0.1;
  double kappa = 0.1;
  Logical logical = Logical::kZero;
  double x0 = 0.0;
  double p0 = 0.0;
  double sigma = 0.1;
  int parity = +1;
};

struct FringeReport {
  int count = 0;
  bool unbounded = false;
  int column = -1;        // cell column the section was read from
  double column_xbar = 0.0;
  double reference = 0.0; // peak |section| the threshold is relative to
};

// Distribution over the double cylinder. The stored block holds the integer
// channels |n| <= Nmax, |m| <= Mmax sampled on one modular cell; extrema and
// the imaginary residue are tracked over the full half-step channel set,
// where the interference negativity of superposition states lives.
struct CylinderWigner {
  LatticeSpec lattice;
  int Nmax = 0;
  int Mmax = 0;
  ModularGrid grid;
  // [(n+Nmax)*(2Mmax+1) + (m+Mmax)] * Nx*Np + j*Np + k
  std::vector<double> values;
  std::vector<std::pair<double, IntegerWavefunction>> terms;
  double total = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;
  double imag_residue = 0.0;
  double truncation_loss = 0.0;
  std::string warning;
  bool analytic = false;
  bool separable = false;
  std::vector<double> panel_x;  // separable only: [(n+Nmax)*Nx + j]
  std::vector<double> panel_p;  // separable only: [(m+Mmax)*Np + k]

  CylinderWigner(const LatticeSpec& lat, int nmax, int mmax,
                 const ModularGrid& g)
      : lattice(lat), Nmax(nmax), Mmax(mmax), grid(g) {
    if (Nmax < 0 || Mmax < 0)
      throw std::invalid_argument("truncation bounds must be non-negative");
    values.assign(channels() * grid.size(), 0.0);
  }

  std::size_t channels() const {
    return std::size_t(2 * Nmax + 1) * (2 * Mmax + 1);
  }

  std::size_t channel_index(int n, int m) const {
    if (n < -Nmax || n > Nmax || m < -Mmax || m > Mmax)
      throw std::out_of_range("integer label outside the stored block");
    return std::size_t(n + Nmax) * (2 * Mmax + 1) + std::size_t(m + Mmax);
  }

  double at(int n, int m, int j, int k) const {
    return values[channel_index(n, m) * grid.size() + grid.index(j, k)];
  }
};

namespace detail {

inline cd phase(double ang) { return cd(std::cos(ang), std::sin(ang)); }

inline void require_channel_resolution(const ModularGrid& grid, int Nmax,
                                       int Mmax) {
  if (grid.Nx < 4 * Nmax + 1 || grid.Np < 4 * Mmax + 1)
    throw numeric_error(
        "cell grid aliases the doubled channels: need Nx >= 4*Nmax+1 and "
        "Np >= 4*Mmax+1");
}

// Fourier bins of one doubled channel (a, b). Every coefficient pair whose
// label sums are (a, b) lands in the bin of its label differences (t, u);
// the (-1)^{t+u} carries the half-cell offset of the grid origin.
inline void fill_channel_bins(
    const std::vector<std::pair<double, IntegerWavefunction>>& terms, int a,
    int b, int Nmax, int Mmax, int Nx, int Np, std::vector<cd>& bins) {
  std::fill(bins.begin(), bins.end(), cd(0.0, 0.0));
  const int tmax = 2 * Nmax - std::abs(a);
  const int umax = 2 * Mmax - std::abs(b);
  for (const auto& [weight, c] : terms) {
    for (int t = -tmax; t <= tmax; ++t) {
      if ((t + a) & 1) continue;
      const int n1 = (a + t) / 2, n2 = (a - t) / 2;
      const std::size_t row = std::size_t((t % Nx + Nx) % Nx) * Np;
      for (int u = -umax; u <= umax; ++u) {
        if ((u + b) & 1) continue;
        const int m1 = (b + u) / 2, m2 = (b - u) / 2;
        const cd prod = c.at(n1, m1) * std::conj(c.at(n2, m2));
        if (prod == cd(0.0, 0.0)) continue;
        const std::size_t col = std::size_t(((-u) % Np + Np) % Np);
        bins[row + col] += (((t + u) & 1) ? -weight : weight) * prod;
      }
    }
  }
}

// Visits every doubled channel with fn(job, a, b, field), where field is the
// complex cell surface whose real part is 2 pi times the distribution value.
// Channels are independent, so a threaded run stays deterministic as long as
// the caller reduces per-job slots in index order.
template <typename Fn>
void stream_channels(
    const std::vector<std::pair<double, IntegerWavefunction>>& terms,
    const ModularGrid& grid, int Nmax, int Mmax, bool threaded, Fn&& fn) {
  const int Nb = 4 * Mmax + 1;
  const std::size_t jobs = std::size_t(4 * Nmax + 1) * std::size_t(Nb);
  auto visit = [&](std::size_t job) {
    const int a = int(job) / Nb - 2 * Nmax;
    const int b = int(job) % Nb - 2 * Mmax;
    std::vector<cd> field(grid.size());
    fill_channel_bins(terms, a, b, Nmax, Mmax, grid.Nx, grid.Np, field);
    fft_2d(field, grid.Nx, grid.Np, +1);
    fn(job, a, b, field);
  };
  if (threaded && thread_count() > 1) {
    parallel_for(jobs, visit);
  } else {
    for (std::size_t job = 0; job < jobs; ++job) visit(job);
  }
}

inline CylinderWigner build_surface(
    std::vector<std::pair<double, IntegerWavefunction>> terms,
    const ModularGrid& grid, int Nmax, int Mmax, double loss) {
  require_channel_resolution(grid, Nmax, Mmax);
  CylinderWigner w(grid.lattice, Nmax, Mmax, grid);
  w.terms = std::move(terms);
  w.truncation_loss = loss;

  const std::size_t cell = grid.size();
  const double scale = 1.0 / (2.0 * kPi);
  const std::size_t jobs =
      std::size_t(4 * Nmax + 1) * std::size_t(4 * Mmax + 1);
  std::vector<double> lo(jobs, 0.0), hi(jobs, 0.0), im(jobs, 0.0),
      sums(jobs, 0.0);

  stream_channels(
      w.terms, grid, Nmax, Mmax, true,
      [&](std::size_t job, int a, int b, const std::vector<cd>& field) {
        const bool stored = !(a & 1) && !(b & 1);
        double* out =
            stored ? w.values.data() + w.channel_index(a / 2, b / 2) * cell
                   : nullptr;
        double l0 = 0.0, h0 = 0.0, i0 = 0.0, s0 = 0.0;
        for (std::size_t p = 0; p < cell; ++p) {
          const double v = field[p].real() * scale;
          i0 = std::max(i0, std::fabs(field[p].imag()) * scale);
          l0 = std::min(l0, v);
          h0 = std::max(h0, v);
          s0 += v;
          if (out) out[p] = v;
        }
        lo[job] = l0;
        hi[job] = h0;
        im[job] = i0;
        if (stored) sums[job] = s0;
      });

  double tot = 0.0;
  for (std::size_t job = 0; job < jobs; ++job) {
    w.min_value = std::min(w.min_value, lo[job]);
    w.max_value = std::max(w.max_value, hi[job]);
    w.imag_residue = std::max(w.imag_residue, im[job]);
    tot += sums[job];
  }
  w.total = tot * grid.cell_weight();
  if (w.truncation_loss > 1e-6)
    w.warning = "integer truncation leaves " +
                std::to_string(w.truncation_loss) +
                " of the state outside the stored block";
  return w;
}

inline double theta_sum(double decay, bool alternate = false,
                        double shift = 0.0) {
  double s = 0.0;
  for (int n = -400; n <= 400; ++n) {
    const double d = double(n) - shift;
    double term = std::exp(-decay * d * d);
    if (alternate && (n & 1)) term = -term;
    s += term;
  }
  return s;
}

// Sum of unit-height gaussians at center + w*step for |w| <= 9 with w of the
// given parity (0 even, 1 odd).
inline double site_sum(double x, double center, double step, int parity,
                       double width) {
  double s = 0.0;
  for (int w = -9; w <= 9; ++w) {
    if ((w & 1) != parity) continue;
    const double d = x - (center + double(w) * step);
    s += std::exp(-d * d / (width * width));
  }
  return s;
}

// Assembles a product surface from doubled-channel factor profiles
// wf[(a+2Nmax)*Nx + j] and wg[(b+2Mmax)*Np + k]. Extrema of a product over
// two attained value sets are reached at combinations of factor extrema.
inline CylinderWigner assemble_product(const ModularGrid& grid, int Nmax,
                                       int Mmax, const std::vector<double>& wf,
                                       const std::vector<double>& wg,
                                       std::string warning) {
  CylinderWigner w(grid.lattice, Nmax, Mmax, grid);
  w.analytic = true;
  w.warning = std::move(warning);

  double fmin = 0.0, fmax = 0.0, gmin = 0.0, gmax = 0.0;
  for (double v : wf) {
    fmin = std::min(fmin, v);
    fmax = std::max(fmax, v);
  }
  for (double v : wg) {
    gmin = std::min(gmin, v);
    gmax = std::max(gmax, v);
  }
  w.min_value =
      std::min({fmin * gmin, fmin * gmax, fmax * gmin, fmax * gmax});
  w.max_value =
      std::max({fmin * gmin, fmin * gmax, fmax * gmin, fmax * gmax});

  double fsum = 0.0, gsum = 0.0;
  for (int n = -Nmax; n <= Nmax; ++n)
    for (int j = 0; j < grid.Nx; ++j)
      fsum += wf[std::size_t(2 * (n + Nmax)) * grid.Nx + j];
  for (int m = -Mmax; m <= Mmax; ++m)
    for (int k = 0; k < grid.Np; ++k)
      gsum += wg[std::size_t(2 * (m + Mmax)) * grid.Np + k];
  w.total = fsum * grid.dx() * gsum * grid.dp();

  const std::size_t cell = grid.size();
  for (int n = -Nmax; n <= Nmax; ++n)
    for (int m = -Mmax; m <= Mmax; ++m) {
      double* out = w.values.data() + w.channel_index(n, m) * cell;
      const double* fr = wf.data() + std::size_t(2 * (n + Nmax)) * grid.Nx;
      const double* gr = wg.data() + std::size_t(2 * (m + Mmax)) * grid.Np;
      for (int j = 0; j < grid.Nx; ++j)
        for (int k = 0; k < grid.Np; ++k)
          out[grid.index(j, k)] = fr[j] * gr[k];
    }
  return w;
}

}  // namespace detail

inline CylinderWigner wigner_full(const IntegerWavefunction& state,
                                  const ModularGrid& grid) {
  if (state.lattice.l != grid.lattice.l)
    throw std::invalid_argument("state and grid lattice lengths differ");
  std::vector<std::pair<double, IntegerWavefunction>> terms;
  terms.emplace_back(1.0, state);
  return detail::build_surface(std::move(terms), grid, state.Nmax, state.Mmax,
                               state.truncation_loss);
}

inline CylinderWigner wigner_full(const ModularWavefunction& psi, int Nmax,
                                  int Mmax) {
  return wigner_full(modular_to_integer(psi, Nmax, Mmax), psi.grid);
}

inline CylinderWigner wigner_full(const EnsembleState& mixture, int Nmax,
                                  int Mmax) {
  if (mixture.terms.empty())
    throw std::invalid_argument("mixture has no members");
  double sum = 0.0;
  for (const auto& term : mixture.terms) {
    if (!(term.weight > 0.0))
      throw std::invalid_argument("mixture weights must be positive");
    sum += term.weight;
  }
  if (std::fabs(sum - 1.0) > 1e-8)
    throw std::invalid_argument("mixture weights must sum to one");
  const ModularGrid& grid = mixture.terms.front().state.grid;
  std::vector<std::pair<double, IntegerWavefunction>> terms;
  double loss = 0.0;
  for (const auto& term : mixture.terms) {
    const ModularGrid& g = term.state.grid;
    if (g.Nx != grid.Nx || g.Np != grid.Np || g.lattice.l != grid.lattice.l)
      throw std::invalid_argument("mixture members live on different grids");
    auto c = modular_to_integer(term.state, Nmax, Mmax);
    loss += term.weight * c.truncation_loss;
    terms.emplace_back(term.weight, std::move(c));
  }
  return detail::build_surface(std::move(terms), grid, Nmax, Mmax, loss);
}

// Product state f(xbar) g(pbar): the surface factorizes channel by channel
// into the two panels, and the coefficient block is the outer product of the
// factor spectra.
inline CylinderWigner wigner_separable(const ModularGrid& grid,
                                       const std::vector<cd>& f,
                                       const std::vector<cd>& g, int Nmax,
                                       int Mmax) {
  if (int(f.size()) != grid.Nx || int(g.size()) != grid.Np)
    throw std::invalid_argument("factor samples must match the grid");
  double nf = 0.0, ng = 0.0;
  for (const cd& z : f) nf += std::norm(z);
  for (const cd& z : g) ng += std::norm(z);
  nf *= grid.dx();
  ng *= grid.dp();
  if (std::fabs(nf - 1.0) > 1e-8 || std::fabs(ng - 1.0) > 1e-8)
    throw std::invalid_argument("factors must be unit-normalized on the cell");

  const double l = grid.lattice.l, k0 = grid.lattice.p_period();
  std::vector<cd> fhat(2 * Nmax + 1), ghat(2 * Mmax + 1);
  for (int n = -Nmax; n <= Nmax; ++n) {
    cd acc(0.0, 0.0);
    for (int j = 0; j < grid.Nx; ++j)
      acc += f[j] * detail::phase(-k0 * n * grid.xbar(j));
    fhat[n + Nmax] = acc * grid.dx() / std::sqrt(l);
  }
  for (int m = -Mmax; m <= Mmax; ++m) {
    cd acc(0.0, 0.0);
    for (int k = 0; k < grid.Np; ++k)
      acc += g[k] * detail::phase(m * l * grid.pbar(k));
    ghat[m + Mmax] = acc * grid.dp() / std::sqrt(k0);
  }

  IntegerWavefunction c(grid.lattice, Nmax, Mmax);
  for (int n = -Nmax; n <= Nmax; ++n)
    for (int m = -Mmax; m <= Mmax; ++m)
      c.at(n, m) = fhat[n + Nmax] * ghat[m + Mmax];
  c.truncation_loss = std::max(0.0, 1.0 - c.norm2());

  auto w = wigner_full(c, grid);
  w.separable = true;
  w.panel_x.assign(std::size_t(2 * Nmax + 1) * grid.Nx, 0.0);
  w.panel_p.assign(std::size_t(2 * Mmax + 1) * grid.Np, 0.0);
  for (int n = -Nmax; n <= Nmax; ++n)
    for (int j = 0; j < grid.Nx; ++j) {
      cd acc(0.0, 0.0);
      for (int n1 = -Nmax; n1 <= Nmax; ++n1) {
        const int n2 = 2 * n - n1;
        if (n2 < -Nmax || n2 > Nmax) continue;
        acc += fhat[n1 + Nmax] * std::conj(fhat[n2 + Nmax]) *
               detail::phase(k0 * grid.xbar(j) * (n1 - n2));
      }
      w.panel_x[std::size_t(n + Nmax) * grid.Nx + j] = acc.real() / l;
    }
  for (int m = -Mmax; m <= Mmax; ++m)
    for (int k = 0; k < grid.Np; ++k) {
      cd acc(0.0, 0.0);
      for (int m1 = -Mmax; m1 <= Mmax; ++m1) {
        const int m2 = 2 * m - m1;
        if (m2 < -Mmax || m2 > Mmax) continue;
        acc += ghat[m1 + Mmax] * std::conj(ghat[m2 + Mmax]) *
               detail::phase(-l * grid.pbar(k) * (m1 - m2));
      }
      w.panel_p[std::size_t(m + Mmax) * grid.Np + k] =
          acc.real() * l / (2.0 * kPi);
    }
  return w;
}

// Closed forms for the sharp-peak families. Each factorizes into a position
// profile over (nu, xbar) and a momentum profile over (mu, pbar); the
// surfaces carry no coefficient terms and cannot be contracted or inverted.
inline CylinderWigner analytic_wigner(AnalyticKind kind,
                                      const AnalyticParams& params,
                                      const ModularGrid& grid, int Nmax,
                                      int Mmax) {
  detail::require_channel_resolution(grid, Nmax, Mmax);
  const double l = grid.lattice.l, k0 = grid.lattice.p_period();
  const int Nx = grid.Nx, Np = grid.Np;
  std::vector<double> wf(std::size_t(4 * Nmax + 1) * Nx, 0.0);
  std::vector<double> wg(std::size_t(4 * Mmax + 1) * Np, 0.0);
  std::string warning;

  auto flat_g = [&]() {
    for (int k = 0; k < Np; ++k)
      wg[std::size_t(2 * Mmax) * Np + k] = l / (2.0 * kPi);
  };
  auto comb_g = [&](double kappa) {
    const double beta = l * l * kappa * kappa;
    const double norm =
        1.0 / (2.0 * std::sqrt(kPi) * kappa * detail::theta_sum(beta));
    std::vector<double> even(Np), odd(Np);
    for (int k = 0; k < Np; ++k) {
      even[k] = detail::site_sum(grid.pbar(k), 0.0, kPi / l, 0, kappa);
      odd[k] = detail::site_sum(grid.pbar(k), 0.0, kPi / l, 1, kappa);
    }
    for (int b = -2 * Mmax; b <= 2 * Mmax; ++b) {
      const double mu = 0.5 * b;
      const double env = norm * std::exp(-beta * mu * mu);
      const double sign = (b & 1) ? -1.0 : 1.0;
      for (int k = 0; k < Np; ++k)
        wg[std::size_t(b + 2 * Mmax) * Np + k] =
            env * (even[k] + sign * odd[k]);
    }
  };

  switch (kind) {
    case AnalyticKind::kGkpPlus: {
      const double delta = params.delta, kappa = params.kappa;
      if (!(delta > 0.0 && kappa > 0.0))
        throw std::invalid_argument("delta and kappa must be positive");
      if (!GkpParams{grid.lattice, delta, kappa, Logical::kPlus}
               .sharp_regime())
        warning =
            "peak widths outside the sharp regime, the closed form is only a "
            "leading-order envelope";
      const double alpha = k0 * k0 * delta * delta;
      const double norm =
          1.0 / (4.0 * std::sqrt(kPi) * delta *
                 (detail::theta_sum(alpha) + detail::theta_sum(alpha, true)));
      std::vector<double> sodd(Nx), seven(Nx);
      for (int j = 0; j < Nx; ++j) {
        sodd[j] = detail::site_sum(grid.xbar(j), 0.0, 0.25 * l, 1, delta);
        seven[j] = detail::site_sum(grid.xbar(j), 0.0, 0.25 * l, 0, delta);
      }
      for (int a = -2 * Nmax; a <= 2 * Nmax; ++a) {
        const double nu = 0.5 * a;
        const double env = norm * std::exp(-alpha * nu * nu);
        const double wodd = (a & 1) ? 0.0 : 2.0;
        const double weven =
            (a & 1) ? 0.0 : (((a / 2) & 1) ? -2.0 : 2.0);
        for (int j = 0; j < Nx; ++j)
          wf[std::size_t(a + 2 * Nmax) * Nx + j] =
              env * (wodd * sodd[j] + weven * seven[j]);
      }
      comb_g(kappa);
      break;
    }
    case AnalyticKind::kGkpLogical: {
      const double delta = params.delta, kappa = params.kappa;
      if (!(delta > 0.0 && kappa > 0.0))
        throw std::invalid_argument("delta and kappa must be positive");
      double c0;
      if (params.logical == Logical::kZero)
        c0 = -0.25 * l;
      else if (params.logical == Logical::kOne)
        c0 = 0.25 * l;
      else
        throw std::invalid_argument(
            "closed form covers the two position-word states only");
      if (!GkpParams{grid.lattice, delta, kappa, params.logical}
               .sharp_regime())
        warning =
            "peak widths outside the sharp regime, the closed form is only a "
            "leading-order envelope";
      const double alpha = k0 * k0 * delta * delta;
      const double norm =
          1.0 / (2.0 * std::sqrt(kPi) * delta * detail::theta_sum(alpha));
      std::vector<double> smain(Nx), sghost(Nx);
      for (int j = 0; j < Nx; ++j) {
        smain[j] = detail::site_sum(grid.xbar(j), c0, 0.5 * l, 0, delta);
        sghost[j] = detail::site_sum(grid.xbar(j), c0, 0.5 * l, 1, delta);
      }
      for (int a = -2 * Nmax; a <= 2 * Nmax; ++a) {
        const double nu = 0.5 * a;
        const double env = norm * std::exp(-alpha * nu * nu);
        const double sign = (a & 1) ? -1.0 : 1.0;
        for (int j = 0; j < Nx; ++j)
          wf[std::size_t(a + 2 * Nmax) * Nx + j] =
              env * (smain[j] + sign * sghost[j]);
      }
      comb_g(kappa);
      break;
    }
    case AnalyticKind::kCoherent: {
      const double sigma = params.sigma;
      if (!(sigma > 0.0))
        throw std::invalid_argument("sigma must be positive");
      if (sigma > 0.1 * l)
        warning =
            "bump width above a tenth of the cell, wrap corrections are not "
            "negligible";
      const double norm =
          1.0 / (2.0 * sigma * std::sqrt(kPi) *
                 detail::theta_sum(sigma * sigma * k0 * k0, false,
                                   params.p0 / k0));
      std::vector<double> smain(Nx), sghost(Nx);
      for (int j = 0; j < Nx; ++j) {
        smain[j] =
            detail::site_sum(grid.xbar(j), params.x0, 0.5 * l, 0, sigma);
        sghost[j] =
            detail::site_sum(grid.xbar(j), params.x0, 0.5 * l, 1, sigma);
      }
      for (int a = -2 * Nmax; a <= 2 * Nmax; ++a) {
        const double arg = sigma * (k0 * 0.5 * a - params.p0);
        const double env = norm * std::exp(-arg * arg);
        const double sign = (a & 1) ? -1.0 : 1.0;
        for (int j = 0; j < Nx; ++j)
          wf[std::size_t(a + 2 * Nmax) * Nx + j] =
              env * (smain[j] + sign * sghost[j]);
      }
      flat_g();
      break;
    }
    case AnalyticKind::kCat: {
      const double sigma = params.sigma;
      if (!(sigma > 0.0))
        throw std::invalid_argument("sigma must be positive");
      if (params.parity != 1 && params.parity != -1)
        throw std::invalid_argument("parity must be +1 or -1");
      if (sigma > 0.1 * l)
        warning =
            "bump width above a tenth of the cell, wrap corrections are not "
            "negligible";
      const double alpha = k0 * k0 * sigma * sigma;
      const double norm =
          1.0 / (4.0 * std::sqrt(kPi) * sigma *
                 (detail::theta_sum(alpha) +
                  params.parity * detail::theta_sum(alpha, true)));
      std::vector<double> sodd(Nx), seven(Nx);
      for (int j = 0; j < Nx; ++j) {
        sodd[j] = detail::site_sum(grid.xbar(j), 0.0, 0.25 * l, 1, sigma);
        seven[j] = detail::site_sum(grid.xbar(j), 0.0, 0.25 * l, 0, sigma);
      }
      for (int a = -2 * Nmax; a <= 2 * Nmax; ++a) {
        const double nu = 0.5 * a;
        const double env = norm * std::exp(-alpha * nu * nu);
        const double wodd = (a & 1) ? 0.0 : 2.0;
        const double weven =
            (a & 1) ? 0.0
                    : double(params.parity) * (((a / 2) & 1) ? -2.0 : 2.0);
        for (int j = 0; j < Nx; ++j)
          wf[std::size_t(a + 2 * Nmax) * Nx + j] =
              env * (wodd * sodd[j] + weven * seven[j]);
      }
      flat_g();
      break;
    }
  }
  return detail::assemble_product(grid, Nmax, Mmax, wf, wg,
                                  std::move(warning));
}

struct WignerMarginals {
  std::vector<double> modular_density;  // [j*Np + k]
  std::vector<double> integer_density;  // [(n+Nmax)*(2Mmax+1) + m+Mmax]
  std::vector<double> crossed_1;        // [(n+Nmax)*Np + k]
  std::vector<double> crossed_2;        // [(m+Mmax)*Nx + j]
  std::vector<double> partial_trace_f;  // [(m+Mmax)*Np + k]
};

// Every marginal except the joint sector weights needs the half-step
// channels (coefficient pairs of mixed parity land there), so they are
// re-streamed from the coefficient terms; only the sector weights reduce
// to a quadrature over the stored block.
inline WignerMarginals marginals(const CylinderWigner& w) {
  if (w.analytic)
    throw std::invalid_argument(
        "closed-form surface carries no coefficient terms to contract");
  if (w.terms.empty())
    throw std::invalid_argument("surface carries no coefficient terms");
  const ModularGrid& grid = w.grid;
  const int Nx = grid.Nx, Np = grid.Np, Nmax = w.Nmax, Mmax = w.Mmax;
  const double scale = 1.0 / (2.0 * kPi);

  WignerMarginals out;
  out.modular_density.assign(grid.size(), 0.0);
  out.integer_density.assign(w.channels(), 0.0);
  out.crossed_1.assign(std::size_t(2 * Nmax + 1) * Np, 0.0);
  out.crossed_2.assign(std::size_t(2 * Mmax + 1) * Nx, 0.0);
  out.partial_trace_f.assign(std::size_t(2 * Mmax + 1) * Np, 0.0);

  detail::stream_channels(
      w.terms, grid, Nmax, Mmax, false,
      [&](std::size_t, int a, int b, const std::vector<cd>& field) {
        for (std::size_t p = 0; p < grid.size(); ++p)
          out.modular_density[p] += field[p].real() * scale;
        if (!(a & 1)) {
          double* row = out.crossed_1.data() + std::size_t(a / 2 + Nmax) * Np;
          for (int j = 0; j < Nx; ++j)
            for (int k = 0; k < Np; ++k)
              row[k] += field[grid.index(j, k)].real() * scale * grid.dx();
        }
        if (!(b & 1)) {
          double* rowp =
              out.partial_trace_f.data() + std::size_t(b / 2 + Mmax) * Np;
          double* rowx = out.crossed_2.data() + std::size_t(b / 2 + Mmax) * Nx;
          for (int j = 0; j < Nx; ++j)
            for (int k = 0; k < Np; ++k) {
              const double v = field[grid.index(j, k)].real() * scale;
              rowp[k] += v * grid.dx();
              rowx[j] += v * grid.dp();
            }
        }
      });

  for (int n = -Nmax; n <= Nmax; ++n)
    for (int m = -Mmax; m <= Mmax; ++m) {
      const double* chan =
          w.values.data() + w.channel_index(n, m) * grid.size();
      double s = 0.0;
      for (int j = 0; j < Nx; ++j)
        for (int k = 0; k < Np; ++k) s += chan[grid.index(j, k)];
      out.integer_density[w.channel_index(n, m)] = s * grid.cell_weight();
    }
  return out;
}

// Inverts the surface back to the density operator on the stored block: each
// doubled channel is one disjoint anti-diagonal of the matrix, read off by
// undoing the bin transform.
inline OperatorMatrix reconstruct_density(const CylinderWigner& w) {
  if (w.analytic)
    throw std::invalid_argument(
        "closed-form surface carries no coefficient terms to invert");
  if (w.terms.empty())
    throw std::invalid_argument("surface carries no coefficient terms");
  detail::require_channel_resolution(w.grid, w.Nmax, w.Mmax);
  const ModularGrid& grid = w.grid;
  const int Nx = grid.Nx, Np = grid.Np, Nmax = w.Nmax, Mmax = w.Mmax;
  OperatorMatrix rho(grid.lattice, Nmax, Mmax);
  const double inv = 1.0 / double(grid.size());

  detail::stream_channels(
      w.terms, grid, Nmax, Mmax, true,
      [&](std::size_t, int a, int b, const std::vector<cd>& field) {
        std::vector<cd> bins(grid.size());
        for (std::size_t p = 0; p < grid.size(); ++p)
          bins[p] = cd(field[p].real() * inv, 0.0);
        fft_2d(bins, Nx, Np, -1);
        const int tmax = 2 * Nmax - std::abs(a);
        const int umax = 2 * Mmax - std::abs(b);
        for (int t = -tmax; t <= tmax; ++t) {
          if ((t + a) & 1) continue;
          const int n1 = (a + t) / 2, n2 = (a - t) / 2;
          const std::size_t row = std::size_t((t % Nx + Nx) % Nx) * Np;
          for (int u = -umax; u <= umax; ++u) {
            if ((u + b) & 1) continue;
            const int m1 = (b + u) / 2, m2 = (b - u) / 2;
            cd val = bins[row + std::size_t(((-u) % Np + Np) % Np)];
            if ((t + u) & 1) val = -val;
            rho.at(n1, m1, n2, m2) = val;
          }
        }
      });
  return rho;
}

// Displacement-average at the cell origin: 2 pi W(0, 0, xbar=0, pbar=0).
inline double parity_expectation(const CylinderWigner& w) {
  return 2.0 * kPi * w.at(0, 0, w.grid.Nx / 2, w.grid.Np / 2);
}

// Counts signed interference fringes along the channel axis. The section is
// read midway between the two strongest columns of the cell density; an
// entry counts when it clears threshold * peak and is a strict alternation
// extremum, with sign-qualified boundary hits marking a saturated block.
inline FringeReport fringe_count_detailed(const CylinderWigner& w,
                                          double threshold = 0.2) {
  const ModularGrid& grid = w.grid;
  const int Nx = grid.Nx, Nn = 2 * w.Nmax + 1;
  FringeReport rep;
  if (Nn < 2) return rep;

  std::vector<double> dist(std::size_t(Nn) * Nx, 0.0);
  for (int n = -w.Nmax; n <= w.Nmax; ++n)
    for (int m = -w.Mmax; m <= w.Mmax; ++m) {
      const double* chan =
          w.values.data() + w.channel_index(n, m) * grid.size();
      for (int j = 0; j < Nx; ++j) {
        double s = 0.0;
        for (int k = 0; k < grid.Np; ++k) s += chan[grid.index(j, k)];
        dist[std::size_t(n + w.Nmax) * Nx + j] += s * grid.dp();
      }
    }

  std::vector<double> density(Nx, 0.0);
  double dist_peak = 0.0;
  for (int i = 0; i < Nn; ++i)
    for (int j = 0; j < Nx; ++j) {
      density[j] += dist[std::size_t(i) * Nx + j];
      dist_peak = std::max(dist_peak, std::fabs(dist[std::size_t(i) * Nx + j]));
    }
  const double dmax = *std::max_element(density.begin(), density.end());

  std::vector<int> peaks;
  for (int j = 0; j < Nx; ++j)
    if (density[j] > density[(j + Nx - 1) % Nx] &&
        density[j] > density[(j + 1) % Nx] && density[j] >= 0.1 * dmax)
      peaks.push_back(j);
  if (peaks.size() < 2) return rep;
  std::sort(peaks.begin(), peaks.end(), [&](int ja, int jb) {
    if (density[ja] != density[jb]) return density[ja] > density[jb];
    return ja < jb;
  });
  const int j1 = std::min(peaks[0], peaks[1]);
  const int j2 = std::max(peaks[0], peaks[1]);
  rep.column = (j1 + j2) / 2;
  rep.column_xbar = grid.xbar(rep.column);

  std::vector<double> s(Nn);
  for (int i = 0; i < Nn; ++i) s[i] = dist[std::size_t(i) * Nx + rep.column];
  for (int i = 0; i < Nn; ++i)
    rep.reference = std::max(rep.reference, std::fabs(s[i]));
  if (rep.reference < 0.05 * dist_peak) return rep;

  for (int i = 0; i < Nn; ++i) {
    if (std::fabs(s[i]) < threshold * rep.reference) continue;
    bool extremum;
    if (i == 0)
      extremum = (s[0] > s[1] && s[0] > 0.0) || (s[0] < s[1] && s[0] < 0.0);
    else if (i == Nn - 1)
      extremum = (s[i] > s[i - 1] && s[i] > 0.0) ||
                 (s[i] < s[i - 1] && s[i] < 0.0);
    else
      extremum = (s[i] > s[i - 1] && s[i] > s[i + 1]) ||
                 (s[i] < s[i - 1] && s[i] < s[i + 1]);
    if (extremum) {
      ++rep.count;
      if (i == 0 || i == Nn - 1) rep.unbounded = true;
    }
  }
  return rep;
}

inline int fringe_count(const CylinderWigner& w, double threshold = 0.2) {
  return fringe_count_detailed(w, threshold).count;
}

}  // namespace cylwig
