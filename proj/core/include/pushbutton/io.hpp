#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pushbutton/acoustics.hpp"
#include "pushbutton/harness.hpp"

namespace pushbutton {

/// Shortest round-trip decimal form of x.
std::string format_number(double x);

// CSV writers. Columns are fixed; numbers use format_number.
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);          // gap_mm,focal_height_mm,force_mN
void write_events_csv(std::ostream& os, const std::vector<ButtonEvent>& events);  // time_s,kind,volts
void write_commands_csv(std::ostream& os, const std::vector<CommandRecord>& commands);  // start_s,duration_s,x_mm,y_mm,z_mm
void write_trace_csv(std::ostream& os, const std::vector<VoltageSample>& trace);  // time_s,volts
void write_field_csv(std::ostream& os, const FieldGrid& grid);             // x,y,z,re,im,abs (m, Pa)

std::vector<VoltageSample> read_trace_csv(std::istream& is);
std::vector<ButtonEvent> read_events_csv(std::istream& is);

/// Little-endian layout: "PBFG", u32 version (1), u32 counts[3], f64 origin[3],
/// f64 axes[3][3], f64 spacing[3], then counts product x (f64 re, f64 im) in
/// grid index order.
void write_field_binary(std::ostream& os, const FieldGrid& grid);
FieldGrid read_field_binary(std::istream& is);

std::vector<VoltageSample> voltage_trace(const SessionLog& log);

/// Writes every (path, content) pair via temp file + rename, only after all
/// contents exist; a failure removes any files already placed.
void write_files_atomically(const std::vector<std::pair<std::filesystem::path, std::string>>& files);

}  // namespace pushbutton
