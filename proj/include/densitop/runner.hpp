#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "densitop/mma.hpp"
#include "densitop/problem.hpp"

namespace densitop {

struct RunConfig {
  std::string problem = "mbb";  // preset name or path to a JSON problem file
  std::filesystem::path out_dir = "out";
  std::optional<int> width;
  std::optional<int> height;
  std::optional<double> density;
  std::optional<int> steps;
  std::optional<double> filter_width;
  std::optional<double> penal;
  bool save_frames = false;
  bool quiet = false;
  int threads = 1;
};

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2 };

/// Resolves the problem source and applies overrides. Width/height overrides
/// are only meaningful for presets and are rejected for explicit geometry.
ProblemSpec build_problem(const RunConfig& config);

/// "Optimizing a problem with {D} DOFs"
std::string header_line(const ProblemSpec& spec);
/// "step {n}, loss {:.2e}, t={:.2f}s"
std::string progress_line(int step, double loss, double elapsed_seconds);

/// Runs the optimization and writes into out_dir:
///   design.pgm, design_full.pgm  final design and its mirrored full beam
///   loss.csv                     step,compliance,volume_fraction
///   timing.csv                   step,elapsed_seconds
///   problem.json                 the resolved problem
///   frames/step_####.pgm         one per evaluation with save_frames
/// Returns an ExitCode; diagnostics go to err.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace densitop
