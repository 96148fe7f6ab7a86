#pragma once

#include <complex>
#include <variant>

#include "optcap/geometry.hpp"
#include "optcap/mode_spectrum.hpp"
#include "optcap/quadrature.hpp"

namespace optcap {

using Complex = std::complex<double>;

/// Choice of propagation kernel for one of the three scenarios.
struct KernelSpec {
  Scenario scenario = Scenario::Lens;
  OpticalGeometry geometry;
  // Include the separable factor exp(j theta) of the lens PSF. It cannot
  // change singular values, so it is off by default.
  bool with_phase = false;
  // Radial Gauss-Legendre order on the pupil disk (hole scenario only).
  int pupil_order = 16;
  // Angles on the pupil disk; 0 means 2 * pupil_order.
  int pupil_angular_order = 0;
};

/// Point-spread function of a thin lens with a circular pupil inside an
/// absorbing screen:
///   T = exp(j theta) R^2 / (lambda^2 D_o D_i) * J1(2 pi R rho) / (R rho),
///   rho = |r_i - M r_o| / (lambda D_i).
class LensPsf {
 public:
  LensPsf(const OpticalGeometry& geom, bool with_phase);

  Complex operator()(PlanarPoint image, PlanarPoint object) const;
  /// theta(r_i, r_o), with the constant 2 pi D_o (1 + M) / lambda reduced mod 2 pi.
  double phase(PlanarPoint image, PlanarPoint object) const;
  /// Modulus at the geometric image point, pi R^2 / (lambda^2 D_o D_i).
  double peak_modulus() const;

 private:
  double radius_;
  double magnification_;
  double amplitude_;        // R^2 / (lambda^2 D_o D_i)
  double inv_lambda_di_;    // 1 / (lambda D_i)
  double quad_phase_;       // pi / (lambda D_o)
  double constant_phase_;   // reduced to [0, 2 pi)
  bool with_phase_;
};

/// Paraxial Fresnel propagator over distance d, exp(j pi |to - from|^2 / (lambda d)) / (lambda d).
/// The conventional 1/j prefactor is dropped.
Complex free_space_kernel(double distance, PlanarPoint to, PlanarPoint from, double wavelength);

class FreeSpacePropagator {
 public:
  FreeSpacePropagator(double distance, double wavelength);
  Complex operator()(PlanarPoint to, PlanarPoint from) const;
  double distance() const { return distance_; }

 private:
  double distance_;
  double wavelength_;
  double inv_lambda_d_;
  double phase_scale_;
};

/// Object plane -> circular hole of radius R -> image plane, as the pupil
/// integral of two Fresnel propagators evaluated with a disk quadrature.
class HoleComposite {
 public:
  HoleComposite(const OpticalGeometry& geom, int pupil_order, int pupil_angular_order = 0);
  Complex operator()(PlanarPoint image, PlanarPoint object) const;
  const QuadratureGrid& pupil() const { return pupil_; }
  const FreeSpacePropagator& to_screen() const { return to_screen_; }
  const FreeSpacePropagator& to_image() const { return to_image_; }

 private:
  FreeSpacePropagator to_screen_;
  FreeSpacePropagator to_image_;
  QuadratureGrid pupil_;
};

/// Scenario kernel mapping the object square (side L) to the image square
/// (side M L).
class Kernel {
 public:
  explicit Kernel(const KernelSpec& spec);

  Complex operator()(PlanarPoint image, PlanarPoint object) const;

  Scenario scenario() const { return spec_.scenario; }
  const KernelSpec& spec() const { return spec_; }
  const OpticalGeometry& geometry() const { return spec_.geometry; }
  Domain input_domain() const;
  Domain output_domain() const;

  template <class Fn>
  decltype(auto) visit(Fn&& fn) const {
    return std::visit(std::forward<Fn>(fn), impl_);
  }

 private:
  KernelSpec spec_;
  std::variant<LensPsf, FreeSpacePropagator, HoleComposite> impl_;
};

}  // namespace optcap
