#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pushbutton/geometry.hpp"

namespace pushbutton {

using Complex = std::complex<double>;

/// Per-element drive. Time convention is e^{i(wt - kr)}: an element with phase
/// phi contributes w * D / r * e^{-i(kr - phi)}.
struct DriveState {
  std::vector<double> phases;      // rad, [0, 2pi)
  std::vector<double> amplitudes;  // [0, 1]
  double source_pressure = 1.0;    // Pa*m at unit amplitude

  std::size_t size() const { return phases.size(); }

  /// Complex source weight of element i.
  Complex weight(std::size_t i) const;
};

void validate_drive(const DriveState& drive, std::size_t element_count);

/// Uniform drive: every element at amplitude `amplitude`, phase 0.
DriveState uniform_drive(const Scene& scene, double amplitude = 1.0);

/// Copy with every amplitude multiplied by `factor`; throws ConfigError if any
/// result leaves [0, 1].
DriveState scale_amplitudes(DriveState drive, double factor);

/// Elements flagged true are silenced (e.g. shadowed by the hand).
/// Not applied anywhere by default.
DriveState apply_occlusion_mask(DriveState drive, std::span<const bool> occluded);

struct FocusSpec {
  Vec3 target;
  bool via_reflection = true;
};

double wavelength(double frequency, double sound_speed);

/// Phases phi_i = k * |element_i - q| mod 2pi, q the target or its mirror image.
DriveState focus_phases(const Scene& scene, const FocusSpec& focus);

/// Directivity factor for an element with unit normal `normal` toward unit
/// direction `dir`: 2 J1(ka sin t)/(ka sin t) for pistons, 1 for monopoles.
double directivity(Directivity model, double ka, const Vec3& normal, const Vec3& dir);

/// Free-space contribution of one element (no plane).
Complex element_contribution(const Emitter& emitter, Complex weight, double k, double ka,
                             Directivity model, const Vec3& p);

/// Flattened set of (image) sources with their complex weights, ready for
/// repeated evaluation.
class SourceField {
 public:
  SourceField(double k, double ka, Directivity model) : k_(k), ka_(ka), model_(model) {}

  void add(const Emitter& emitter, Complex weight);
  std::size_t size() const { return positions_.size(); }

  /// Sum of all contributions at p, in insertion order. Throws SingularityError at a source.
  Complex evaluate(const Vec3& p) const;

 private:
  double k_;
  double ka_;
  Directivity model_;
  std::vector<Vec3> positions_;
  std::vector<Vec3> normals_;
  std::vector<Complex> weights_;
};

/// Direct sources plus their plate images scaled by the reflection coefficient.
SourceField build_source_field(const Scene& scene, const DriveState& drive);

/// Direct sources only, ignoring the plate.
SourceField build_free_field(const Scene& scene, const DriveState& drive);

/// Complex pressure (Pa) at p, on or above the plate.
Complex pressure_at(const Scene& scene, const DriveState& drive, const Vec3& p);

struct GridSpec {
  Vec3 origin;
  std::array<Vec3, 3> axes{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  std::array<std::size_t, 3> counts{1, 1, 1};
  std::array<double, 3> spacing{1e-3, 1e-3, 1e-3};

  std::size_t size() const { return counts[0] * counts[1] * counts[2]; }
  /// Point index j = i0 + n0 * (i1 + n1 * i2).
  Vec3 point(std::size_t i0, std::size_t i1, std::size_t i2) const;
  Vec3 point(std::size_t flat) const;

  /// Axis-aligned box grid from `lo` with `counts` points per axis at `step`.
  static GridSpec box(const Vec3& lo, std::array<std::size_t, 3> counts, double step);
};

void validate_grid(const GridSpec& spec);

struct FieldGrid {
  GridSpec spec;
  std::vector<Complex> values;
};

FieldGrid field_grid(const Scene& scene, const DriveState& drive, const GridSpec& spec,
                     unsigned workers = 1);

struct FocalMetrics {
  Vec3 peak_position;
  double peak_magnitude = 0.0;
  std::size_t peak_index = 0;
  double distance_to_target = 0.0;
  /// Full width at half peak magnitude along each grid axis through the peak;
  /// empty when the axis has one point or the field never falls to half.
  std::array<std::optional<double>, 3> widths;
};

FocalMetrics focal_metrics(const FieldGrid& grid, const Vec3& target);

/// Max over plate points of |dp/dn| / (k |p|), central differences with step
/// lambda/100. Points where p vanishes contribute 0.
double boundary_residual(const Scene& scene, const DriveState& drive,
                         std::span<const Vec3> plate_points);

}  // namespace pushbutton
