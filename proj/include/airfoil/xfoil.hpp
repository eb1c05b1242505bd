#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "airfoil/aero.hpp"
#include "airfoil/geometry.hpp"

namespace airfoil::aero {

struct XfoilSettings {
  std::string executable = "xfoil";  // overridable via $XFOIL_EXECUTABLE
  std::optional<double> reynolds;    // viscous mode when present
  double mach = 0.0;
  double alpha = 0.0;  // degrees
  double timeout_seconds = 30.0;
  // Working directory for the exchange files. When absent a fresh
  // temporary directory is created per call and removed on success.
  std::optional<std::filesystem::path> workdir;
};

struct XfoilResult {
  CpDistribution cp;       // resampled onto the profile's panel midpoints
  AeroMeasures measures;   // LM/DM from the resampled Cp, CL/CD from the polar
};

/// Runs the external XFOIL process on the profile: writes the coordinate
/// file, drives the scripted command sequence, parses the Cp dump and the
/// polar, and resamples Cp onto the profile's panel midpoints.
XfoilResult xfoil_solve(const geom::AirfoilProfile& profile,
                        const XfoilSettings& settings);

/// The exact standard-input command sequence fed to XFOIL.
std::string xfoil_command_script(const XfoilSettings& settings,
                                 const std::string& coord_file,
                                 const std::string& polar_file,
                                 const std::string& cp_file);

struct CpFileSample {
  double x = 0.0;
  std::optional<double> y;
  double cp = 0.0;
};

/// Parses the CPWR dump: header lines skipped, data rows of "x cp" or
/// "x y cp". Throws ProtocolError naming the offending line.
std::vector<CpFileSample> parse_cp_file(const std::filesystem::path& path);

struct PolarRow {
  double alpha = 0.0;
  double cl = 0.0;
  double cd = 0.0;
};

/// Parses XFOIL's fixed-header polar accumulation file.
PolarRow parse_polar_file(const std::filesystem::path& path);

/// Linear interpolation of the dumped Cp, in arc length, onto the
/// profile's panel midpoints.
std::vector<double> resample_cp_to_midpoints(
    const std::vector<CpFileSample>& samples,
    const geom::AirfoilProfile& profile);

/// Resolves the executable: explicit path as-is, bare names through $PATH.
/// Empty result when nothing executable is found.
std::optional<std::filesystem::path> find_executable(const std::string& name);

namespace detail {

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string output;  // stdout and stderr interleaved
};

/// Spawns `executable` in `workdir`, feeds `input` on stdin, captures
/// output, enforces the timeout (SIGKILL on expiry).
ProcessResult run_process(const std::filesystem::path& executable,
                          const std::filesystem::path& workdir,
                          const std::string& input, double timeout_seconds);

}  // namespace detail

}  // namespace airfoil::aero
