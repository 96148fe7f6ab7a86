#include "optcap/kernels.hpp"

#include <cmath>
#include <numbers>

#include "optcap/error.hpp"
#include "optcap/mathfn.hpp"

namespace optcap {
namespace {

constexpr double kPi = std::numbers::pi;

double squared_norm(PlanarPoint p) { return p.x * p.x + p.y * p.y; }

std::variant<LensPsf, FreeSpacePropagator, HoleComposite> make_impl(const KernelSpec& spec) {
  const OpticalGeometry& g = spec.geometry;
  switch (spec.scenario) {
    case Scenario::Lens: return LensPsf(g, spec.with_phase);
    case Scenario::FreeSpace: return FreeSpacePropagator(g.total_distance(), g.wavelength());
    case Scenario::Hole: return HoleComposite(g, spec.pupil_order, spec.pupil_angular_order);
  }
  throw ConfigError("unknown scenario");
}

}  // namespace

LensPsf::LensPsf(const OpticalGeometry& geom, bool with_phase)
    : radius_(geom.pupil_radius()),
      magnification_(geom.magnification()),
      with_phase_(with_phase) {
  const double lambda = geom.wavelength();
  amplitude_ = radius_ * radius_ / (lambda * lambda * geom.object_distance() * geom.image_distance());
  inv_lambda_di_ = 1.0 / (lambda * geom.image_distance());
  quad_phase_ = kPi / (lambda * geom.object_distance());
  const double cycles = geom.object_distance() * (1.0 + magnification_) / lambda;
  constant_phase_ = 2.0 * kPi * (cycles - std::floor(cycles));
}

double LensPsf::phase(PlanarPoint image, PlanarPoint object) const {
  return quad_phase_ * (squared_norm(object) + squared_norm(image) / magnification_) +
         constant_phase_;
}

double LensPsf::peak_modulus() const { return kPi * amplitude_; }

Complex LensPsf::operator()(PlanarPoint image, PlanarPoint object) const {
  const double dx = image.x - magnification_ * object.x;
  const double dy = image.y - magnification_ * object.y;
  const double rho = std::hypot(dx, dy) * inv_lambda_di_;
  const double value = amplitude_ * jinc_psf(radius_ * rho);
  if (!with_phase_) return {value, 0.0};
  return std::polar(value, phase(image, object));
}

Complex free_space_kernel(double distance, PlanarPoint to, PlanarPoint from, double wavelength) {
  return FreeSpacePropagator(distance, wavelength)(to, from);
}

FreeSpacePropagator::FreeSpacePropagator(double distance, double wavelength)
    : distance_(distance), wavelength_(wavelength) {
  if (!(distance > 0.0) || !std::isfinite(distance)) {
    throw DomainError("free-space propagation distance must be positive");
  }
  if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
    throw DomainError("wavelength must be positive");
  }
  inv_lambda_d_ = 1.0 / (wavelength * distance);
  phase_scale_ = kPi * inv_lambda_d_;
}

Complex FreeSpacePropagator::operator()(PlanarPoint to, PlanarPoint from) const {
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  const double arg = phase_scale_ * (dx * dx + dy * dy);
  return {inv_lambda_d_ * std::cos(arg), inv_lambda_d_ * std::sin(arg)};
}

HoleComposite::HoleComposite(const OpticalGeometry& geom, int pupil_order, int pupil_angular_order)
    : to_screen_(geom.object_distance(), geom.wavelength()),
      to_image_(geom.image_distance(), geom.wavelength()),
      pupil_(build_grid(Domain::disk(geom.pupil_radius()), pupil_order, pupil_angular_order)) {}

Complex HoleComposite::operator()(PlanarPoint image, PlanarPoint object) const {
  Complex sum{0.0, 0.0};
  for (std::size_t s = 0; s < pupil_.size(); ++s) {
    const PlanarPoint rs = pupil_.nodes[s];
    sum += pupil_.weights[s] * to_image_(image, rs) * to_screen_(rs, object);
  }
  return sum;
}

Kernel::Kernel(const KernelSpec& spec) : spec_(spec), impl_(make_impl(spec)) {}

Complex Kernel::operator()(PlanarPoint image, PlanarPoint object) const {
  return std::visit([&](const auto& k) { return k(image, object); }, impl_);
}

Domain Kernel::input_domain() const { return Domain::square(spec_.geometry.patch_side()); }

Domain Kernel::output_domain() const {
  return Domain::square(spec_.geometry.magnification() * spec_.geometry.patch_side());
}

}  // namespace optcap
