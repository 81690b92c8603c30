#include "pushbutton/acoustics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pushbutton/error.hpp"
#include "pushbutton/numeric.hpp"

namespace pushbutton {

namespace {

constexpr double kPlaneTolerance = 1e-12;  // m

void require_not_below(const ReflectingPlane& plane, const Vec3& p) {
  if (signed_distance(plane, p) < -kPlaneTolerance) {
    throw ConfigError("evaluation point lies below the reflecting plane");
  }
}

double element_ka(const Scene& scene, std::size_t array_index) {
  return scene.wavenumber() * scene.arrays[array_index].lattice.element_radius;
}

}  // namespace

Complex DriveState::weight(std::size_t i) const {
  return std::polar(source_pressure * amplitudes[i], phases[i]);
}

void validate_drive(const DriveState& drive, std::size_t element_count) {
  if (drive.phases.size() != element_count || drive.amplitudes.size() != element_count) {
    throw ConfigError("drive has " + std::to_string(drive.phases.size()) +
                      " phases for " + std::to_string(element_count) + " elements");
  }
  if (!(drive.source_pressure > 0.0)) throw ConfigError("source pressure must be positive");
  for (std::size_t i = 0; i < element_count; ++i) {
    if (!(drive.amplitudes[i] >= 0.0 && drive.amplitudes[i] <= 1.0)) {
      throw ConfigError("drive amplitude outside [0, 1]");
    }
    if (!(drive.phases[i] >= 0.0 && drive.phases[i] < 2.0 * std::numbers::pi)) {
      throw ConfigError("drive phase outside [0, 2pi)");
    }
  }
}

DriveState uniform_drive(const Scene& scene, double amplitude) {
  const std::size_t n = scene.element_count();
  DriveState drive{std::vector<double>(n, 0.0), std::vector<double>(n, amplitude),
                   scene.source_pressure};
  validate_drive(drive, n);
  return drive;
}

DriveState scale_amplitudes(DriveState drive, double factor) {
  for (double& a : drive.amplitudes) {
    a *= factor;
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("scaled amplitude outside [0, 1]");
  }
  return drive;
}

DriveState apply_occlusion_mask(DriveState drive, std::span<const bool> occluded) {
  if (occluded.size() != drive.amplitudes.size()) {
    throw ConfigError("occlusion mask size does not match the drive");
  }
  for (std::size_t i = 0; i < occluded.size(); ++i) {
    if (occluded[i]) drive.amplitudes[i] = 0.0;
  }
  return drive;
}

double wavelength(double frequency, double sound_speed) {
  if (!(frequency > 0.0) || !(sound_speed > 0.0)) {
    throw ConfigError("frequency and sound speed must be positive");
  }
  return sound_speed / frequency;
}

DriveState focus_phases(const Scene& scene, const FocusSpec& focus) {
  validate_scene(scene);
  if (focus.via_reflection && !(signed_distance(scene.plane, focus.target) > 0.0)) {
    throw ConfigError("reflected focus target must lie strictly above the plane");
  }
  const Vec3 q = focus.via_reflection ? mirror_point(scene.plane, focus.target) : focus.target;
  const double k = scene.wavenumber();
  DriveState drive;
  drive.source_pressure = scene.source_pressure;
  for (const Emitter& e : scene.emitters()) {
    drive.phases.push_back(wrap_phase(k * norm(e.position - q)));
    drive.amplitudes.push_back(1.0);
  }
  return drive;
}

double directivity(Directivity model, double ka, const Vec3& normal, const Vec3& dir) {
  if (model == Directivity::Monopole) return 1.0;
  const double c = std::clamp(dot(normal, dir), -1.0, 1.0);
  const double x = ka * std::sqrt(1.0 - c * c);
  if (x < 1e-6) return 1.0 - x * x / 8.0;
  return 2.0 * std::cyl_bessel_j(1.0, x) / x;
}

Complex element_contribution(const Emitter& emitter, Complex weight, double k, double ka,
                             Directivity model, const Vec3& p) {
  const Vec3 d = p - emitter.position;
  const double r = norm(d);
  if (!(r > 0.0)) throw SingularityError("field evaluated at a source position");
  const double amp = directivity(model, ka, emitter.normal, d * (1.0 / r)) / r;
  return weight * std::polar(amp, -k * r);
}

void SourceField::add(const Emitter& emitter, Complex weight) {
  positions_.push_back(emitter.position);
  normals_.push_back(emitter.normal);
  weights_.push_back(weight);
}

Complex SourceField::evaluate(const Vec3& p) const {
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (weights_[i] == Complex{0.0, 0.0}) continue;
    acc += element_contribution({positions_[i], normals_[i]}, weights_[i], k_, ka_, model_, p);
  }
  return acc;
}

namespace {

double common_ka(const Scene& scene) {
  // Pistons of different radii would need per-source ka; the scene format
  // allows it, so fold it into a single value only when all arrays agree.
  const double ka = element_ka(scene, 0);
  for (std::size_t a = 1; a < scene.arrays.size(); ++a) {
    if (element_ka(scene, a) != ka) {
      throw ConfigError("all arrays in a scene must share one element radius");
    }
  }
  return ka;
}

SourceField build(const Scene& scene, const DriveState& drive, bool with_plane) {
  validate_scene(scene);
  const auto emitters = scene.emitters();
  validate_drive(drive, emitters.size());
  SourceField field(scene.wavenumber(), common_ka(scene), scene.directivity);
  const double rc = scene.plane.reflection_coefficient;
  for (std::size_t i = 0; i < emitters.size(); ++i) {
    const Complex w = drive.weight(i);
    field.add(emitters[i], w);
    if (with_plane && rc > 0.0) {
      field.add({mirror_point(scene.plane, emitters[i].position),
                 mirror_direction(scene.plane, emitters[i].normal)},
                w * rc);
    }
  }
  return field;
}

}  // namespace

SourceField build_source_field(const Scene& scene, const DriveState& drive) {
  return build(scene, drive, true);
}

SourceField build_free_field(const Scene& scene, const DriveState& drive) {
  return build(scene, drive, false);
}

Complex pressure_at(const Scene& scene, const DriveState& drive, const Vec3& p) {
  require_not_below(scene.plane, p);
  return build_source_field(scene, drive).evaluate(p);
}

Vec3 GridSpec::point(std::size_t i0, std::size_t i1, std::size_t i2) const {
  return origin + axes[0] * (static_cast<double>(i0) * spacing[0]) +
         axes[1] * (static_cast<double>(i1) * spacing[1]) +
         axes[2] * (static_cast<double>(i2) * spacing[2]);
}

Vec3 GridSpec::point(std::size_t flat) const {
  const std::size_t i0 = flat % counts[0];
  const std::size_t i1 = (flat / counts[0]) % counts[1];
  const std::size_t i2 = flat / (counts[0] * counts[1]);
  return point(i0, i1, i2);
}

GridSpec GridSpec::box(const Vec3& lo, std::array<std::size_t, 3> counts, double step) {
  GridSpec spec;
  spec.origin = lo;
  spec.counts = counts;
  spec.spacing = {step, step, step};
  return spec;
}

void validate_grid(const GridSpec& spec) {
  for (std::size_t a = 0; a < 3; ++a) {
    if (spec.counts[a] == 0) throw ConfigError("grid axis with zero points");
    if (!(spec.spacing[a] > 0.0)) throw ConfigError("grid spacing must be positive");
    if (std::abs(norm(spec.axes[a]) - 1.0) > 1e-12) {
      throw ConfigError("grid axes must be unit vectors");
    }
  }
}

FieldGrid field_grid(const Scene& scene, const DriveState& drive, const GridSpec& spec,
                     unsigned workers) {
  validate_grid(spec);
  // Signed distance is affine in the grid indices, so the corners bound it.
  for (std::size_t c = 0; c < 8; ++c) {
    const Vec3 corner = spec.point((c & 1) ? spec.counts[0] - 1 : 0,
                                   (c & 2) ? spec.counts[1] - 1 : 0,
                                   (c & 4) ? spec.counts[2] - 1 : 0);
    if (signed_distance(scene.plane, corner) < -kPlaneTolerance) {
      throw ConfigError("field grid crosses below the reflecting plane");
    }
  }
  const SourceField sources = build_source_field(scene, drive);
  FieldGrid grid{spec, std::vector<Complex>(spec.size())};
  parallel_chunks(spec.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) grid.values[j] = sources.evaluate(spec.point(j));
  });
  return grid;
}

namespace {

// Walks from the peak along one axis until |p| drops below half the peak and
// returns the interpolated crossing offset in index units.
std::optional<double> half_crossing(const FieldGrid& grid, std::size_t peak, std::size_t axis,
                                    int direction, double half) {
  const auto& c = grid.spec.counts;
  std::array<std::size_t, 3> idx{peak % c[0], (peak / c[0]) % c[1], peak / (c[0] * c[1])};
  const std::size_t stride = axis == 0 ? 1 : (axis == 1 ? c[0] : c[0] * c[1]);
  double prev = std::abs(grid.values[peak]);
  std::size_t flat = peak;
  for (std::size_t step = 1;; ++step) {
    if (direction < 0 && idx[axis] == 0) return std::nullopt;
    if (direction > 0 && idx[axis] + 1 >= c[axis]) return std::nullopt;
    idx[axis] = direction > 0 ? idx[axis] + 1 : idx[axis] - 1;
    flat = direction > 0 ? flat + stride : flat - stride;
    const double cur = std::abs(grid.values[flat]);
    if (cur < half) {
      const double frac = (prev - half) / (prev - cur);
      return static_cast<double>(step - 1) + frac;
    }
    prev = cur;
  }
}

}  // namespace

FocalMetrics focal_metrics(const FieldGrid& grid, const Vec3& target) {
  if (grid.values.empty()) throw NoPeakError("empty field grid");
  FocalMetrics m;
  for (std::size_t j = 0; j < grid.values.size(); ++j) {
    const double mag = std::abs(grid.values[j]);
    if (mag > m.peak_magnitude) {
      m.peak_magnitude = mag;
      m.peak_index = j;
    }
  }
  if (!(m.peak_magnitude > 0.0)) throw NoPeakError("field grid is identically zero");
  m.peak_position = grid.spec.point(m.peak_index);
  m.distance_to_target = norm(m.peak_position - target);
  const double half = 0.5 * m.peak_magnitude;
  for (std::size_t a = 0; a < 3; ++a) {
    if (grid.spec.counts[a] < 2) continue;
    const auto lo = half_crossing(grid, m.peak_index, a, -1, half);
    const auto hi = half_crossing(grid, m.peak_index, a, +1, half);
    if (lo && hi) m.widths[a] = (*lo + *hi) * grid.spec.spacing[a];
  }
  return m;
}

double boundary_residual(const Scene& scene, const DriveState& drive,
                         std::span<const Vec3> plate_points) {
  const SourceField sources = build_source_field(scene, drive);
  const double k = scene.wavenumber();
  const double h = scene.wavelength() / 100.0;
  const Vec3 n = scene.plane.normal;
  double worst = 0.0;
  for (const Vec3& x : plate_points) {
    const Complex p0 = sources.evaluate(x);
    const double mag = std::abs(p0);
    if (mag == 0.0) continue;
    const Complex dpdn = (sources.evaluate(x + n * h) - sources.evaluate(x - n * h)) / (2.0 * h);
    worst = std::max(worst, std::abs(dpdn) / (k * mag));
  }
  return worst;
}

}  // namespace pushbutton
