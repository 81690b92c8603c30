#include "pushbutton/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pushbutton/error.hpp"

namespace pushbutton {

namespace {

constexpr double kUnitTolerance = 1e-12;

bool is_unit(const Vec3& v) { return std::abs(norm(v) - 1.0) <= kUnitTolerance; }

}  // namespace

std::vector<Vec3> TransducerLattice::local_positions() const {
  std::vector<Vec3> out;
  out.reserve(size());
  const double x0 = -0.5 * static_cast<double>(cols - 1) * pitch;
  const double y0 = -0.5 * static_cast<double>(rows - 1) * pitch;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      out.push_back({x0 + static_cast<double>(c) * pitch, y0 + static_cast<double>(r) * pitch, 0.0});
    }
  }
  return out;
}

TransducerLattice build_lattice(std::size_t rows, std::size_t cols, double pitch,
                                double element_radius) {
  if (rows < 1 || cols < 1) {
    throw ConfigError("lattice needs at least one row and one column");
  }
  if (!(pitch > 0.0)) {
    throw ConfigError("lattice pitch must be positive");
  }
  if (!(element_radius > 0.0) || !(element_radius < 0.5 * pitch)) {
    throw ConfigError("element radius must lie in (0, pitch/2)");
  }
  return {rows, cols, pitch, element_radius};
}

ArrayPose ArrayPose::tilted_down(const Vec3& origin, const Vec3& hinge, double tilt) {
  ArrayPose pose;
  pose.origin = origin;
  pose.axis = hinge;
  pose.normal = rotate({0.0, 0.0, -1.0}, hinge, tilt);
  return pose;
}

void validate_pose(const ArrayPose& pose) {
  if (!is_unit(pose.normal)) {
    throw ConfigError("array pose normal is not a unit vector");
  }
  if (!is_unit(pose.axis)) {
    throw ConfigError("array pose in-plane axis is not a unit vector");
  }
  if (std::abs(dot(pose.normal, pose.axis)) > kUnitTolerance) {
    throw ConfigError("array pose in-plane axis is not orthogonal to the normal");
  }
}

void validate_plane(const ReflectingPlane& plane) {
  if (!is_unit(plane.normal)) {
    throw ConfigError("reflecting plane normal is not a unit vector");
  }
  if (!(plane.reflection_coefficient >= 0.0 && plane.reflection_coefficient <= 1.0)) {
    throw ConfigError("reflection coefficient must lie in [0, 1]");
  }
}

std::vector<Emitter> pose_array(const TransducerLattice& lattice, const ArrayPose& pose) {
  validate_pose(pose);
  const Vec3 u = pose.axis;
  const Vec3 v = pose.row_axis();
  std::vector<Emitter> out;
  out.reserve(lattice.size());
  for (const Vec3& local : lattice.local_positions()) {
    out.push_back({pose.origin + u * local.x + v * local.y, pose.normal});
  }
  return out;
}

double Scene::wavenumber() const { return 2.0 * std::numbers::pi / wavelength(); }

std::vector<Emitter> Scene::emitters() const {
  std::vector<Emitter> out;
  out.reserve(element_count());
  for (const auto& placement : arrays) {
    auto posed = pose_array(placement.lattice, placement.pose);
    out.insert(out.end(), posed.begin(), posed.end());
  }
  return out;
}

std::size_t Scene::element_count() const {
  std::size_t n = 0;
  for (const auto& placement : arrays) n += placement.lattice.size();
  return n;
}

void validate_scene(const Scene& scene) {
  if (!(scene.frequency > 0.0)) throw ConfigError("frequency must be positive");
  if (!(scene.sound_speed > 0.0)) throw ConfigError("sound speed must be positive");
  if (!(scene.air_density > 0.0)) throw ConfigError("air density must be positive");
  if (!(scene.source_pressure > 0.0)) throw ConfigError("source pressure must be positive");
  if (!(scene.beam_height > 0.0)) throw ConfigError("beam height must be positive");
  if (scene.arrays.empty()) throw ConfigError("scene has no transducer arrays");
  validate_plane(scene.plane);
  for (std::size_t i = 0; i < scene.arrays.size(); ++i) {
    const auto& placement = scene.arrays[i];
    build_lattice(placement.lattice.rows, placement.lattice.cols, placement.lattice.pitch,
                  placement.lattice.element_radius);
    validate_pose(placement.pose);
    if (!(signed_distance(scene.plane, placement.pose.origin) > 0.0)) {
      throw ConfigError("array " + std::to_string(i) + " origin is not above the reflecting plane");
    }
  }
}

Scene default_scene() {
  constexpr double kTilt = std::numbers::pi / 4.0;
  constexpr double kHeight = 200e-3;
  constexpr double kHalfSpacing = 135e-3;
  const Vec3 hinge{0.0, 1.0, 0.0};
  const TransducerLattice lattice = build_lattice(14, 18, 10.16e-3, 4.5e-3);

  Scene scene;
  // Positive rotation about +y swings the -z normal toward -x, i.e. toward the
  // center for the array on the +x side.
  scene.arrays.push_back({lattice, ArrayPose::tilted_down({kHalfSpacing, 0.0, kHeight}, hinge, kTilt)});
  scene.arrays.push_back({lattice, ArrayPose::tilted_down({-kHalfSpacing, 0.0, kHeight}, hinge, -kTilt)});
  scene.plane = ReflectingPlane{{0.0, 0.0, 0.0}, {0.0, 0.0, 1.0}, 1.0};
  scene.frequency = 40e3;
  scene.sound_speed = 340.0;
  scene.air_density = 1.2;
  scene.beam_height = 3e-3;
  scene.source_pressure = kDefaultSourcePressure;
  scene.directivity = Directivity::Piston;
  scene.plate_extent = 120e-3;
  return scene;
}

}  // namespace pushbutton
