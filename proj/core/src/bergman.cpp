#include <fftw3.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "detail/parallel.hpp"
#include "hso/operators.hpp"

// K_2t and K_2t^+ evaluated at every grid node. With z = r e(u), w = rho e(v)
// the kernel depends on the angular difference u - v only, so for each pair
// of rings the angular sum is a circular convolution of length n_theta; the
// convolutions run through FFTW. The result is bit-for-bit the plain
// quadrature sum sum_w f(w) kern(z,w) weight(w), up to FFT roundoff.

namespace hso {

namespace {

using cplx = std::complex<double>;

struct FftPlans {
  int n;
  fftw_plan forward;
  fftw_plan backward;
  fftw_complex* buf_in;
  fftw_complex* buf_out;

  explicit FftPlans(int n_theta) : n(n_theta) {
    buf_in = fftw_alloc_complex(static_cast<std::size_t>(n));
    buf_out = fftw_alloc_complex(static_cast<std::size_t>(n));
    forward = fftw_plan_dft_1d(n, buf_in, buf_out, FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_dft_1d(n, buf_in, buf_out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftPlans() {
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(buf_in);
    fftw_free(buf_out);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;
};

// Per-thread scratch; plans may be executed concurrently on distinct arrays.
struct FftScratch {
  const FftPlans& plans;
  fftw_complex* in;
  fftw_complex* out;

  explicit FftScratch(const FftPlans& p) : plans(p) {
    in = fftw_alloc_complex(static_cast<std::size_t>(p.n));
    out = fftw_alloc_complex(static_cast<std::size_t>(p.n));
  }
  ~FftScratch() {
    fftw_free(in);
    fftw_free(out);
  }
  FftScratch(const FftScratch&) = delete;
  FftScratch& operator=(const FftScratch&) = delete;

  void forward(const cplx* src, cplx* dst) {
    auto* i = reinterpret_cast<cplx*>(in);
    auto* o = reinterpret_cast<cplx*>(out);
    std::copy(src, src + plans.n, i);
    fftw_execute_dft(plans.forward, in, out);
    std::copy(o, o + plans.n, dst);
  }
  void backward(const cplx* src, cplx* dst) {
    auto* i = reinterpret_cast<cplx*>(in);
    auto* o = reinterpret_cast<cplx*>(out);
    std::copy(src, src + plans.n, i);
    fftw_execute_dft(plans.backward, in, out);
    std::copy(o, o + plans.n, dst);
  }
};

// Angular ring of the positive kernel |1 - r rho e(phi)|^-2t.
void positive_kernel_ring(double t, double r, double rho, int n, cplx* out) {
  double c = r * rho;
  for (int d = 0; d < n; ++d) {
    double phi = 2.0 * std::numbers::pi * d / n;
    double nrm = 1.0 - 2.0 * c * std::cos(phi) + c * c;
    out[d] = cplx(std::pow(nrm, -t), 0.0);
  }
}

// Angular ring of (1 - r rho e(phi))^-2t, principal branch (Re(1-zw~) > 0 on
// the disc, so the branch is unambiguous).
void analytic_kernel_ring(double t, double r, double rho, int n, cplx* out) {
  double c = r * rho;
  for (int d = 0; d < n; ++d) {
    double phi = 2.0 * std::numbers::pi * d / n;
    cplx base(1.0 - c * std::cos(phi), -c * std::sin(phi));
    out[d] = std::exp(-2.0 * t * std::log(base));
  }
}

// Shared driver: for each output ring accumulate, over input rings, the
// convolution of the kernel ring with the function ring in Fourier space.
template <class KernelRing>
std::vector<std::vector<cplx>> convolve_all(const PolarGrid& grid,
                                            std::span<const GridFunction> fs,
                                            double t, KernelRing kernel_ring) {
  const int n_theta = grid.n_theta;
  const int n_r = grid.n_r();
  const std::size_t n_f = fs.size();

  FftPlans plans(n_theta);

  // Fourier transforms of every function's rings.
  std::vector<std::vector<cplx>> fhat(
      n_f * static_cast<std::size_t>(n_r),
      std::vector<cplx>(static_cast<std::size_t>(n_theta)));
  {
    FftScratch scratch(plans);
    std::vector<cplx> row(static_cast<std::size_t>(n_theta));
    for (std::size_t q = 0; q < n_f; ++q)
      for (int i = 0; i < n_r; ++i) {
        for (int j = 0; j < n_theta; ++j)
          row[static_cast<std::size_t>(j)] = fs[q].values[grid.node(i, j)];
        scratch.forward(row.data(), fhat[q * static_cast<std::size_t>(n_r) +
                                         static_cast<std::size_t>(i)].data());
      }
  }

  std::vector<std::vector<cplx>> result(
      n_f * static_cast<std::size_t>(n_r),
      std::vector<cplx>(static_cast<std::size_t>(n_theta)));

  detail::parallel_for(static_cast<std::size_t>(n_r), [&](std::size_t lo, std::size_t hi) {
    FftScratch scratch(plans);
    std::vector<cplx> ring(static_cast<std::size_t>(n_theta));
    std::vector<cplx> ghat(static_cast<std::size_t>(n_theta));
    std::vector<std::vector<cplx>> acc(n_f, std::vector<cplx>(static_cast<std::size_t>(n_theta)));
    for (std::size_t i = lo; i < hi; ++i) {
      for (auto& a : acc) std::fill(a.begin(), a.end(), cplx(0.0));
      double r = grid.r_nodes[i];
      for (int ip = 0; ip < n_r; ++ip) {
        kernel_ring(t, r, grid.r_nodes[static_cast<std::size_t>(ip)], n_theta,
                    ring.data());
        scratch.forward(ring.data(), ghat.data());
        double scale = grid.ring_weight[static_cast<std::size_t>(ip)] / n_theta;
        for (std::size_t q = 0; q < n_f; ++q) {
          const auto& fh = fhat[q * static_cast<std::size_t>(n_r) + static_cast<std::size_t>(ip)];
          auto& a = acc[q];
          for (int j = 0; j < n_theta; ++j)
            a[static_cast<std::size_t>(j)] += scale * ghat[static_cast<std::size_t>(j)] *
                                              fh[static_cast<std::size_t>(j)];
        }
      }
      for (std::size_t q = 0; q < n_f; ++q) {
        auto& dst = result[q * static_cast<std::size_t>(n_r) + i];
        scratch.backward(acc[q].data(), dst.data());
        for (cplx& v : dst) v /= static_cast<double>(n_theta);
      }
    }
  });
  return result;
}

}  // namespace

std::vector<GridFunction> apply_bergman_positive_batch(
    double t, std::span<const GridFunction> fs) {
  ensure_admissible_disc_t(t);
  if (fs.empty()) return {};
  const PolarGrid& grid = *fs.front().grid;
  for (const GridFunction& f : fs)
    if (f.grid.get() != &grid)
      throw std::invalid_argument("apply_bergman_positive_batch: one grid only");

  auto rows = convolve_all(grid, fs, t, positive_kernel_ring);
  std::vector<GridFunction> out(fs.size());
  for (std::size_t q = 0; q < fs.size(); ++q) {
    out[q].grid = fs[q].grid;
    out[q].values.resize(grid.size());
    for (int i = 0; i < grid.n_r(); ++i) {
      const auto& row = rows[q * static_cast<std::size_t>(grid.n_r()) + static_cast<std::size_t>(i)];
      for (int j = 0; j < grid.n_theta; ++j)
        out[q].values[grid.node(i, j)] = row[static_cast<std::size_t>(j)].real();
    }
  }
  return out;
}

GridFunction apply_bergman_positive(double t, const GridFunction& f) {
  return apply_bergman_positive_batch(t, std::span(&f, 1)).front();
}

ComplexGridFunction apply_bergman(double t, const GridFunction& f) {
  ensure_admissible_disc_t(t);
  const PolarGrid& grid = *f.grid;
  auto rows = convolve_all(grid, std::span(&f, 1), t, analytic_kernel_ring);
  ComplexGridFunction out;
  out.grid = f.grid;
  out.values.resize(grid.size());
  for (int i = 0; i < grid.n_r(); ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    for (int j = 0; j < grid.n_theta; ++j)
      out.values[grid.node(i, j)] = row[static_cast<std::size_t>(j)];
  }
  return out;
}

std::optional<std::string> bergman_resolution_warning(double t,
                                                      const PolarGrid& grid) {
  ensure_admissible_disc_t(t);
  int n_r = grid.n_r();
  std::vector<int> probes{n_r - 1, n_r / 2};
  double worst = 0.0;
  int worst_ring = 0;
  for (int i : probes) {
    if (i < 0) continue;
    double r = grid.r_nodes[static_cast<std::size_t>(i)];
    double total = 0.0, near = 0.0;
    for (int ip = 0; ip < n_r; ++ip) {
      double rho = grid.r_nodes[static_cast<std::size_t>(ip)];
      double cell =
          4.0 * std::max(grid.cell_diameter(i), grid.cell_diameter(ip));
      double w = grid.ring_weight[static_cast<std::size_t>(ip)] / grid.n_theta;
      double c = r * rho;
      for (int d = 0; d < grid.n_theta; ++d) {
        double phi = 2.0 * std::numbers::pi * d / grid.n_theta;
        double dist2 = 1.0 - 2.0 * c * std::cos(phi) + c * c;
        double v = std::pow(dist2, -t) * w;
        total += v;
        if (dist2 < cell * cell) near += v;
      }
    }
    double frac = (total > 0.0) ? near / total : 0.0;
    if (frac > worst) {
      worst = frac;
      worst_ring = i;
    }
  }
  if (worst > 0.10) {
    return "near-diagonal kernel mass " + std::to_string(worst * 100.0) +
           "% at ring " + std::to_string(worst_ring) +
           " exceeds 10%; refine the grid near the boundary";
  }
  return std::nullopt;
}

}  // namespace hso
