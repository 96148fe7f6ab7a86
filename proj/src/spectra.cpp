#include "optcap/spectra.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "optcap/error.hpp"

namespace optcap {
namespace {

void check_domains(const Kernel& kernel, const QuadratureGrid& in, const QuadratureGrid& out) {
  if (!(in.domain == kernel.input_domain())) {
    throw ConfigError("input grid does not cover the object square of the kernel");
  }
  if (!(out.domain == kernel.output_domain())) {
    throw ConfigError("output grid does not cover the image square of the kernel");
  }
}

template <class Matrix>
bool plausible(const Matrix& m, const std::vector<double>& sigma) {
  long double sum = 0.0L;
  for (double v : sigma) {
    if (!std::isfinite(v) || v < 0.0) return false;
    sum += static_cast<long double>(v) * v;
  }
  const long double fro = static_cast<long double>(m.squaredNorm());
  return std::abs(sum - fro) <= 1e-8L * fro;
}

template <class Matrix>
std::vector<double> decompose(const Matrix& m) {
  auto collect = [](const auto& svd) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(svd.singularValues().size()));
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
      out.push_back(static_cast<double>(svd.singularValues()(k)));
    }
    return out;
  };
  {
    Eigen::BDCSVD<Matrix> svd(m);
    if (svd.info() == Eigen::Success) {
      std::vector<double> out = collect(svd);
      if (plausible(m, out)) return out;
    }
  }
  // Divide-and-conquer occasionally loses deflated values on clustered
  // spectra; the Jacobi sweep is slower but unconditionally stable.
  Eigen::JacobiSVD<Matrix> svd(m);
  std::vector<double> out = collect(svd);
  if (svd.info() != Eigen::Success || !plausible(m, out)) {
    std::ostringstream msg;
    msg << "SVD failed on a " << m.rows() << "x" << m.cols() << " matrix (norm "
        << static_cast<double>(m.norm()) << ")";
    throw NumericalError(msg.str());
  }
  return out;
}

}  // namespace

SampledKernel assemble(const Kernel& kernel, const QuadratureGrid& in, const QuadratureGrid& out) {
  check_domains(kernel, in, out);
  return kernel.visit([&](const auto& k) { return assemble_with(k, in, out, kernel.scenario()); });
}

SampledKernel assemble_serial(const Kernel& kernel, const QuadratureGrid& in,
                              const QuadratureGrid& out) {
  check_domains(kernel, in, out);
  return kernel.visit(
      [&](const auto& k) { return assemble_with_serial(k, in, out, kernel.scenario()); });
}

SampledKernel compose_spectra_matrix(const SampledKernel& stage1, const QuadratureGrid& pupil,
                                     const SampledKernel& stage2) {
  auto same = [](const QuadratureGrid& a, const QuadratureGrid& b) {
    return a.domain == b.domain && a.order == b.order && a.angular_order == b.angular_order &&
           a.size() == b.size();
  };
  if (!same(stage1.output, pupil) || !same(stage2.input, pupil)) {
    throw ConfigError("compose: stage grids do not meet on the pupil grid");
  }
  SampledKernel out;
  out.matrix = stage2.matrix * stage1.matrix;
  out.input = stage1.input;
  out.output = stage2.output;
  out.scenario = Scenario::Hole;
  return out;
}

HoleStages hole_stages(const OpticalGeometry& geom, const QuadratureGrid& in,
                       const QuadratureGrid& pupil, const QuadratureGrid& out) {
  if (!(pupil.domain == Domain::disk(geom.pupil_radius()))) {
    throw ConfigError("pupil grid does not match the pupil radius");
  }
  const FreeSpacePropagator first(geom.object_distance(), geom.wavelength());
  const FreeSpacePropagator second(geom.image_distance(), geom.wavelength());
  return {assemble_with(first, in, pupil, Scenario::FreeSpace),
          assemble_with(second, pupil, out, Scenario::FreeSpace)};
}

SampledKernel assemble_hole_product(const OpticalGeometry& geom, const QuadratureGrid& in,
                                    const QuadratureGrid& pupil, const QuadratureGrid& out) {
  if (!(in.domain == Domain::square(geom.patch_side())) ||
      !(out.domain == Domain::square(geom.magnification() * geom.patch_side()))) {
    throw ConfigError("hole grids must cover the object and image squares");
  }
  const HoleStages stages = hole_stages(geom, in, pupil, out);
  return compose_spectra_matrix(stages.to_screen, pupil, stages.to_image);
}

const char* to_string(SvdPrecision p) {
  return p == SvdPrecision::Double ? "double" : "extended";
}

std::vector<double> singular_values(const Eigen::MatrixXcd& m, SvdPrecision precision) {
  if (!m.allFinite()) throw NumericalError("sampled kernel has non-finite entries");
  const bool real = m.imag().isZero(0.0);
  if (precision == SvdPrecision::Extended) {
    using Ld = long double;
    if (real) return decompose(Eigen::Matrix<Ld, Eigen::Dynamic, Eigen::Dynamic>(m.real().cast<Ld>()));
    return decompose(Eigen::Matrix<std::complex<Ld>, Eigen::Dynamic, Eigen::Dynamic>(
        m.cast<std::complex<Ld>>()));
  }
  if (real) return decompose(Eigen::MatrixXd(m.real()));
  return decompose(m);
}

ModeSpectrum singular_spectrum(const SampledKernel& sampled, SvdPrecision precision) {
  ModeSpectrum spectrum =
      ModeSpectrum::from_singular_values(singular_values(sampled.matrix, precision));
  spectrum.input_order = sampled.input.order;
  spectrum.output_order = sampled.output.order;
  return spectrum;
}

ModeSpectrum spectrum_at_order(const Kernel& kernel, int order, int pupil_order,
                               int pupil_angular_order, SvdPrecision precision) {
  const QuadratureGrid in = build_grid(kernel.input_domain(), order);
  const QuadratureGrid out = build_grid(kernel.output_domain(), order);
  if (kernel.scenario() != Scenario::Hole) {
    return singular_spectrum(assemble(kernel, in, out), precision);
  }

  const int p = pupil_order > 0 ? pupil_order : kernel.spec().pupil_order;
  const int pa = pupil_order > 0 ? pupil_angular_order : kernel.spec().pupil_angular_order;
  const QuadratureGrid pupil =
      build_grid(Domain::disk(kernel.geometry().pupil_radius()), p, pa);
  ModeSpectrum spectrum =
      singular_spectrum(assemble_hole_product(kernel.geometry(), in, pupil, out), precision);
  spectrum.pupil_order = p;
  spectrum.pupil_angular_order = pupil.angular_order;
  return spectrum;
}

std::size_t watched_modes(const Kernel& kernel) {
  const double f = scenario_fresnel(kernel.scenario(), kernel.geometry());
  // Shave roundoff so that F = 20 watches 40 modes, not 41.
  return std::max<std::size_t>(10, static_cast<std::size_t>(std::ceil(2.0 * f * (1.0 - 1e-12))));
}

ModeSpectrum converge_spectrum(const Kernel& kernel, const ConvergenceOptions& options) {
  if (!(options.rtol > 0.0)) throw ConfigError("convergence rtol must be positive");
  if (options.initial_order < 4) throw ConfigError("initial grid order must be at least 4");
  if (options.max_order < options.initial_order) {
    throw ConfigError("max grid order must not be below the initial order");
  }
  const std::size_t watched = watched_modes(kernel);
  const int pupil0 = kernel.spec().pupil_order;
  const int angular0 = kernel.spec().pupil_angular_order;

  std::optional<ModeSpectrum> previous;
  int order = options.initial_order;
  int level = 0;
  while (true) {
    const bool last = 2 * order > options.max_order;
    std::optional<ModeSpectrum> current;
    try {
      current = spectrum_at_order(kernel, order, pupil0 << level, angular0 << level,
                                  options.precision);
    } catch (const PhysicalityError&) {
      // An under-resolved grid can overshoot; only the finest grid is fatal.
      if (last) throw;
    }
    if (current && previous) {
      bool settled = true;
      for (std::size_t k = 0; k < watched && settled; ++k) {
        const double a = k < current->size() ? current->eta[k] : 0.0;
        const double b = k < previous->size() ? previous->eta[k] : 0.0;
        settled = std::abs(a - b) <= options.rtol * std::max(std::max(a, b), 1e-12);
      }
      if (settled) {
        current->converged = true;
        return *current;
      }
    }
    if (last) {
      current->converged = false;
      return *current;
    }
    previous = std::move(current);
    order *= 2;
    ++level;
  }
}

}  // namespace optcap
