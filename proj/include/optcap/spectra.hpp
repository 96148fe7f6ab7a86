#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "optcap/kernels.hpp"
#include "optcap/mode_spectrum.hpp"
#include "optcap/quadrature.hpp"

namespace optcap {

/// Nystrom discretization of a kernel: entry (j, i) is
/// sqrt(w_j) K(r_j, r_i) sqrt(w_i), with j on the output grid.
struct SampledKernel {
  Eigen::MatrixXcd matrix;
  QuadratureGrid input;
  QuadratureGrid output;
  Scenario scenario = Scenario::Lens;
};

namespace detail {

// Column-parallel fill. Every entry is computed independently with the same
// arithmetic as the serial fill, so both produce identical matrices.
template <class Fn>
void fill_parallel(Eigen::MatrixXcd& m, const Fn& fn, const QuadratureGrid& in,
                   const QuadratureGrid& out) {
  const auto rows = static_cast<Eigen::Index>(out.size());
  const auto cols = static_cast<Eigen::Index>(in.size());
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < cols; ++i) {
    const double sw_in = std::sqrt(in.weights[static_cast<std::size_t>(i)]);
    const PlanarPoint from = in.nodes[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < rows; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      m(j, i) = std::sqrt(out.weights[jj]) * fn(out.nodes[jj], from) * sw_in;
    }
  }
}

template <class Fn>
void fill_serial(Eigen::MatrixXcd& m, const Fn& fn, const QuadratureGrid& in,
                 const QuadratureGrid& out) {
  const auto rows = static_cast<Eigen::Index>(out.size());
  const auto cols = static_cast<Eigen::Index>(in.size());
  for (Eigen::Index i = 0; i < cols; ++i) {
    const double sw_in = std::sqrt(in.weights[static_cast<std::size_t>(i)]);
    const PlanarPoint from = in.nodes[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < rows; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      m(j, i) = std::sqrt(out.weights[jj]) * fn(out.nodes[jj], from) * sw_in;
    }
  }
}

}  // namespace detail

/// Discretizes an arbitrary kernel callable `fn(to, from) -> Complex`.
template <class Fn>
SampledKernel assemble_with(const Fn& fn, const QuadratureGrid& in, const QuadratureGrid& out,
                            Scenario scenario = Scenario::Lens) {
  SampledKernel s{Eigen::MatrixXcd(static_cast<Eigen::Index>(out.size()),
                                   static_cast<Eigen::Index>(in.size())),
                  in, out, scenario};
  detail::fill_parallel(s.matrix, fn, in, out);
  return s;
}

/// Single-threaded reference for assemble_with.
template <class Fn>
SampledKernel assemble_with_serial(const Fn& fn, const QuadratureGrid& in,
                                   const QuadratureGrid& out, Scenario scenario = Scenario::Lens) {
  SampledKernel s{Eigen::MatrixXcd(static_cast<Eigen::Index>(out.size()),
                                   static_cast<Eigen::Index>(in.size())),
                  in, out, scenario};
  detail::fill_serial(s.matrix, fn, in, out);
  return s;
}

/// Discretizes a scenario kernel. The input grid must cover the object
/// square and the output grid the image square; otherwise ConfigError.
/// The hole kernel is evaluated entry by entry here; see
/// assemble_hole_product for the faster route.
SampledKernel assemble(const Kernel& kernel, const QuadratureGrid& in, const QuadratureGrid& out);
SampledKernel assemble_serial(const Kernel& kernel, const QuadratureGrid& in,
                              const QuadratureGrid& out);

/// Product K2 W K1 of two stages sharing the pupil grid. In symmetrized
/// form this is the plain matrix product stage2 * stage1.
SampledKernel compose_spectra_matrix(const SampledKernel& stage1, const QuadratureGrid& pupil,
                                     const SampledKernel& stage2);

struct HoleStages {
  SampledKernel to_screen;  // object square -> pupil disk, distance D_o
  SampledKernel to_image;   // pupil disk -> image square, distance D_i
};

HoleStages hole_stages(const OpticalGeometry& geom, const QuadratureGrid& in,
                       const QuadratureGrid& pupil, const QuadratureGrid& out);

/// Hole-scenario matrix through the stage product, using `pupil` for the
/// screen integral.
SampledKernel assemble_hole_product(const OpticalGeometry& geom, const QuadratureGrid& in,
                                    const QuadratureGrid& pupil, const QuadratureGrid& out);

// Arithmetic used by the SVD. Double has an absolute floor near eps * sigma_1,
// so eta_k far below sigma_1^2 carry relative error ~ eps sigma_1 / sigma_k;
// Extended runs the same decomposition in long double (several times slower).
enum class SvdPrecision { Double, Extended };

const char* to_string(SvdPrecision p);

/// Singular values of `m`, descending. Divide-and-conquer SVD, validated
/// (finite, sum sigma^2 = |m|_F^2) with a Jacobi fallback.
std::vector<double> singular_values(const Eigen::MatrixXcd& m,
                                    SvdPrecision precision = SvdPrecision::Double);

/// eta_k = sigma_k^2 of the sampled matrix, descending. Overshoot above
/// 1 + 1e-6 throws PhysicalityError, SVD failure NumericalError.
ModeSpectrum singular_spectrum(const SampledKernel& sampled,
                               SvdPrecision precision = SvdPrecision::Double);

/// Spectrum of a scenario kernel on order x order squares. For the hole
/// scenario `pupil_order` (and `pupil_angular_order`, 0 = twice the radial
/// order) sets the screen quadrature.
ModeSpectrum spectrum_at_order(const Kernel& kernel, int order, int pupil_order = 0,
                               int pupil_angular_order = 0,
                               SvdPrecision precision = SvdPrecision::Double);

struct ConvergenceOptions {
  int initial_order = 12;
  int max_order = 48;
  double rtol = 1e-4;
  SvdPrecision precision = SvdPrecision::Double;
};

/// Doubles the grid order (and the pupil order for the hole scenario) until
/// the leading max(10, ceil(2F)) transmissivities change by less than rtol,
/// relative to max(eta_k, 1e-12). Returns the last spectrum with
/// converged = false when max_order is reached first.
ModeSpectrum converge_spectrum(const Kernel& kernel, const ConvergenceOptions& options = {});

/// Number of leading modes the convergence test watches.
std::size_t watched_modes(const Kernel& kernel);

}  // namespace optcap
