#pragma once

#include <cstddef>
#include <vector>

#include "pushbutton/vec3.hpp"

namespace pushbutton {

/// Regular rows x cols grid of circular pistons, centered on the local origin.
/// Columns run along the pose's in-plane axis, rows along normal x axis.
struct TransducerLattice {
  std::size_t rows = 1;
  std::size_t cols = 1;
  double pitch = 10.16e-3;          // m
  double element_radius = 4.5e-3;   // m, effective piston radius

  std::size_t size() const { return rows * cols; }

  /// Element centers in the array frame (z = 0), row-major.
  std::vector<Vec3> local_positions() const;
};

TransducerLattice build_lattice(std::size_t rows, std::size_t cols, double pitch,
                                double element_radius);

struct ArrayPose {
  Vec3 origin;                 // center of the emission plane, world frame
  Vec3 normal{0.0, 0.0, -1.0};  // emission direction
  Vec3 axis{1.0, 0.0, 0.0};     // in-plane axis, orthogonal to normal

  /// Third frame axis, completing (axis, row_axis, normal) to a right-handed basis.
  Vec3 row_axis() const { return cross(normal, axis); }

  /// Pose facing straight down (-z) at origin, then rotated by `tilt` radians
  /// about `hinge` (a horizontal unit vector that becomes the in-plane axis).
  static ArrayPose tilted_down(const Vec3& origin, const Vec3& hinge, double tilt);
};

void validate_pose(const ArrayPose& pose);

struct ReflectingPlane {
  Vec3 point;
  Vec3 normal{0.0, 0.0, 1.0};
  double reflection_coefficient = 1.0;
};

void validate_plane(const ReflectingPlane& plane);

/// Signed distance of p from the plane, positive on the normal side.
inline double signed_distance(const ReflectingPlane& plane, const Vec3& p) {
  return dot(p - plane.point, plane.normal);
}

/// Mirror image of p across the plane.
inline Vec3 mirror_point(const ReflectingPlane& plane, const Vec3& p) {
  return p - plane.normal * (2.0 * signed_distance(plane, p));
}

/// Mirror image of a direction (no translation).
inline Vec3 mirror_direction(const ReflectingPlane& plane, const Vec3& d) {
  return d - plane.normal * (2.0 * dot(d, plane.normal));
}

/// One world-frame transducer element.
struct Emitter {
  Vec3 position;
  Vec3 normal;
};

std::vector<Emitter> pose_array(const TransducerLattice& lattice, const ArrayPose& pose);

enum class Directivity { Piston, Monopole };

struct ArrayPlacement {
  TransducerLattice lattice;
  ArrayPose pose;
};

struct Scene {
  std::vector<ArrayPlacement> arrays;
  ReflectingPlane plane;
  double frequency = 40e3;       // Hz
  double sound_speed = 340.0;    // m/s
  double air_density = 1.2;      // kg/m^3
  double beam_height = 3e-3;     // m, IR beam axis above the plate
  double source_pressure = 1.0;  // Pa*m per element at unit drive
  Directivity directivity = Directivity::Piston;
  double plate_extent = 120e-3;  // m, square plate side; display only

  double wavelength() const { return sound_speed / frequency; }
  double wavenumber() const;

  /// All elements of all arrays in world coordinates, array order then row-major.
  std::vector<Emitter> emitters() const;
  std::size_t element_count() const;
};

/// Throws ConfigError if any scene invariant is violated.
void validate_scene(const Scene& scene);

/// Two 14x18 arrays 200 mm above the plate, 270 mm apart, tilted 45 degrees
/// toward the workspace center; 40 kHz; IR beam 3 mm above the plate.
Scene default_scene();

/// Source strength that makes one default lattice, focused straight ahead at
/// 200 mm in free field, push about 20 mN on a 10 mm disc at the focus.
inline constexpr double kDefaultSourcePressure = 6.58;

}  // namespace pushbutton
