#pragma once

#include <cstddef>
#include <vector>

#include "pushbutton/acoustics.hpp"

namespace pushbutton {

/// Flat disc proxy for the fingertip or the measuring bar (10 mm diameter by default).
struct DiscTarget {
  Vec3 center;
  double radius = 5e-3;
  Vec3 normal{0.0, 0.0, 1.0};
};

/// Polar product rule over a disc: Gauss-Legendre in r (weight r dr) and a
/// midpoint rule in angle.
struct DiscQuadrature {
  std::vector<double> radii;   // m
  std::vector<double> angles;  // rad
  std::vector<double> weights; // m^2, radius-major
};

DiscQuadrature disc_quadrature(double radius, std::size_t radial_nodes, std::size_t angular_nodes);

struct ForceOptions {
  /// Plate -> disc -> plate round trips added on top of the first plate reflection.
  std::size_t bounce_order = 3;
  std::size_t radial_nodes = 16;
  std::size_t angular_nodes = 32;
  /// Upper bound on total image sources (elements x (bounce_order + 1)).
  std::size_t max_image_sources = 1u << 16;
  unsigned workers = 1;
};

/// Upward radiation force (N) on the underside of a rigid disc held parallel to
/// the plate at `gap` above it, directly over disc.center.
///
/// The incident field on the underside is the upgoing plate reflection of the
/// array plus `bounce_order` further images, each one disc reflection and one
/// plate reflection deeper. The direct downgoing wave is blocked by the disc.
/// Pressure on the face follows the perfect-reflector plane-wave form
/// |p_inc|^2 / (rho c^2), integrated with disc_quadrature.
double radiation_force_disc(const Scene& scene, const DriveState& drive, const DiscTarget& disc,
                            double gap, const ForceOptions& options = {});

/// Force (N) on a disc facing the arrays in free field, no plate and no
/// bounces; used to calibrate source strength.
double free_field_disc_force(const Scene& scene, const DriveState& drive, const DiscTarget& disc,
                             const ForceOptions& options = {});

}  // namespace pushbutton
