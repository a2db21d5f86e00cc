#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "densitop/field.hpp"

namespace densitop {

enum class Axis : int { kX = 0, kY = 1 };

/// Design domain, supports, loads and every scalar hyperparameter of a run.
///
/// Nodes are numbered column-major, n(i, j) = (nely + 1) * i + j for node
/// column i in [0, nelx] and node row j in [0, nely], row 0 at the top. Node n
/// owns DOFs 2n (horizontal) and 2n + 1 (vertical).
struct ProblemSpec {
  int nelx = 0;
  int nely = 0;

  double young = 1.0;
  double young_min = 1e-9;
  double poisson = 0.3;
  double penal = 3.0;

  double density = 0.4;
  double filter_width = 1.0;
  double xmin = 0.001;
  double xmax = 1.0;

  // nullopt is the scalar mask 1. Otherwise shape (nely, nelx); 0 excludes a cell.
  std::optional<DensityField> mask;

  std::vector<double> forces;
  std::vector<int> fixdofs;
  std::vector<int> freedofs;

  int opt_steps = 80;
  int print_every = 10;

  int dof_count() const { return 2 * (nelx + 1) * (nely + 1); }
  int element_count() const { return nelx * nely; }

  /// Mask as a dense field (all ones for the scalar mask).
  DensityField mask_field() const;

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

/// 2 * ((nely + 1) * i + j) + axis. Throws ValidationError when out of range.
int dof_index(int i, int j, Axis axis, int nelx, int nely);

/// Builds a spec from sparse supports and loads; freedofs is the sorted
/// complement of fixdofs. Scalars take their defaults. Validates the result.
ProblemSpec make_problem(int nelx, int nely, std::vector<int> fixdofs, std::vector<double> forces,
                         double density = 0.4);

/// Throws ValidationError naming the first violated invariant.
void validate(const ProblemSpec& spec);

// Presets. mbb_beam follows the textbook half-beam: symmetry plane on the
// left edge, roller at the bottom-right node, unit downward load top-left.
ProblemSpec mbb_beam(int width = 80, int height = 25, double density = 0.4);

// Non-canonical extras.
// Cantilever: left edge clamped, unit downward load at the middle of the right edge.
ProblemSpec cantilever(int width = 60, int height = 30, double density = 0.4);
// Bridge: pinned bottom-left, roller bottom-right, unit downward load at bottom mid-span.
ProblemSpec bridge(int width = 90, int height = 30, double density = 0.3);

std::vector<std::string> preset_names();
bool is_preset(std::string_view name);
/// Builds a named preset; a width/height/density of nullopt takes the preset default.
ProblemSpec make_preset(std::string_view name, std::optional<int> width = std::nullopt,
                        std::optional<int> height = std::nullopt,
                        std::optional<double> density = std::nullopt);

/// Parses the JSON problem format. ValidationError on parse or invariant failures.
ProblemSpec parse_problem(std::string_view json_text);
ProblemSpec load_problem(const std::filesystem::path& path);

/// Writes explicit `fixed`/`loads`/`mask` entries (never a preset key), so the
/// output reloads to an equal spec.
std::string serialize_problem(const ProblemSpec& spec);
void save_problem(const ProblemSpec& spec, const std::filesystem::path& path);

}  // namespace densitop
