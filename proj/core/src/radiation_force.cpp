#include "pushbutton/radiation_force.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "pushbutton/error.hpp"
#include "pushbutton/numeric.hpp"

namespace pushbutton {

DiscQuadrature disc_quadrature(double radius, std::size_t radial_nodes,
                               std::size_t angular_nodes) {
  if (!(radius > 0.0)) throw ConfigError("disc radius must be positive");
  if (radial_nodes == 0 || angular_nodes == 0) throw ConfigError("disc quadrature needs nodes");
  const QuadratureRule gl = gauss_legendre(radial_nodes);
  DiscQuadrature q;
  const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(angular_nodes);
  for (std::size_t j = 0; j < angular_nodes; ++j) {
    q.angles.push_back((static_cast<double>(j) + 0.5) * dtheta);
  }
  for (std::size_t i = 0; i < radial_nodes; ++i) {
    const double r = 0.5 * radius * (gl.nodes[i] + 1.0);
    q.radii.push_back(r);
    const double w_r = 0.5 * radius * gl.weights[i] * r;
    for (std::size_t j = 0; j < angular_nodes; ++j) q.weights.push_back(w_r * dtheta);
  }
  return q;
}

namespace {

// Orthonormal in-plane basis for a disc with unit normal n.
std::pair<Vec3, Vec3> disc_basis(const Vec3& n) {
  const Vec3 seed = std::abs(n.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  const Vec3 e1 = normalized(cross(n, seed));
  return {e1, cross(n, e1)};
}

double integrate_intensity(const SourceField& sources, const DiscQuadrature& quad,
                           const Vec3& center, const Vec3& normal, double rho_c2,
                           unsigned workers) {
  const auto [e1, e2] = disc_basis(normal);
  const std::size_t na = quad.angles.size();
  std::vector<double> samples(quad.weights.size());
  parallel_chunks(samples.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const double r = quad.radii[j / na];
      const double t = quad.angles[j % na];
      const Vec3 x = center + e1 * (r * std::cos(t)) + e2 * (r * std::sin(t));
      samples[j] = quad.weights[j] * std::norm(sources.evaluate(x)) / rho_c2;
    }
  });
  return pairwise_sum(samples);
}

double rho_c2(const Scene& scene) {
  return scene.air_density * scene.sound_speed * scene.sound_speed;
}

}  // namespace

double radiation_force_disc(const Scene& scene, const DriveState& drive, const DiscTarget& disc,
                            double gap, const ForceOptions& options) {
  if (!(gap > 0.0)) throw ConfigError("disc gap must be positive");
  if (!(disc.radius > 0.0)) throw ConfigError("disc radius must be positive");
  const Vec3 n = scene.plane.normal;
  if (std::abs(std::abs(dot(normalized(disc.normal), n)) - 1.0) > 1e-12) {
    throw ConfigError("disc must be parallel to the reflecting plane");
  }
  validate_scene(scene);
  const auto emitters = scene.emitters();
  validate_drive(drive, emitters.size());
  const std::size_t image_count = emitters.size() * (options.bounce_order + 1);
  if (image_count > options.max_image_sources) {
    throw ConfigError("bounce order needs " + std::to_string(image_count) +
                      " image sources, above the configured cap");
  }

  const double ka = scene.wavenumber() * scene.arrays.front().lattice.element_radius;
  SourceField sources(scene.wavenumber(), ka, scene.directivity);
  const double rc = scene.plane.reflection_coefficient;
  // Round trip m: plate image shifted 2*m*gap further below the plate, with
  // the plate reflection applied m + 1 times and the rigid disc m times.
  for (std::size_t m = 0; m <= options.bounce_order; ++m) {
    const Vec3 shift = n * (-2.0 * gap * static_cast<double>(m));
    const double gain = std::pow(rc, static_cast<double>(m + 1));
    for (std::size_t i = 0; i < emitters.size(); ++i) {
      sources.add({mirror_point(scene.plane, emitters[i].position) + shift,
                   mirror_direction(scene.plane, emitters[i].normal)},
                  drive.weight(i) * gain);
    }
  }

  const Vec3 foot = disc.center - n * signed_distance(scene.plane, disc.center);
  const Vec3 center = foot + n * gap;
  const DiscQuadrature quad =
      disc_quadrature(disc.radius, options.radial_nodes, options.angular_nodes);
  return integrate_intensity(sources, quad, center, n, rho_c2(scene), options.workers);
}

double free_field_disc_force(const Scene& scene, const DriveState& drive, const DiscTarget& disc,
                             const ForceOptions& options) {
  const SourceField sources = build_free_field(scene, drive);
  const DiscQuadrature quad =
      disc_quadrature(disc.radius, options.radial_nodes, options.angular_nodes);
  return integrate_intensity(sources, quad, disc.center, normalized(disc.normal), rho_c2(scene),
                             options.workers);
}

}  // namespace pushbutton
