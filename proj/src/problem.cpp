#include "densitop/problem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "densitop/errors.hpp"
#include "json.hpp"

namespace densitop {
namespace {

using nlohmann::json;

std::vector<int> complement(const std::vector<int>& fixdofs, int n) {
  std::vector<int> free;
  free.reserve(n - fixdofs.size());
  auto it = fixdofs.begin();
  for (int d = 0; d < n; ++d) {
    if (it != fixdofs.end() && *it == d) {
      ++it;
    } else {
      free.push_back(d);
    }
  }
  return free;
}

std::string where(std::string_view field) { return "field '" + std::string(field) + "': "; }

// Line/column of a byte offset, for parse diagnostics.
std::pair<int, int> line_and_column(std::string_view text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

int get_int(const json& doc, const char* key, int fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (!v.is_number_integer()) throw ValidationError(where(key) + "expected an integer");
  return v.get<int>();
}

double get_real(const json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (!v.is_number()) throw ValidationError(where(key) + "expected a number");
  return v.get<double>();
}

template <std::size_t N>
std::vector<std::array<json, N>> get_tuples(const json& doc, const char* key) {
  std::vector<std::array<json, N>> out;
  if (!doc.contains(key)) return out;
  const auto& arr = doc.at(key);
  if (!arr.is_array()) throw ValidationError(where(key) + "expected an array");
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const auto& item = arr[k];
    if (!item.is_array() || item.size() != N) {
      throw ValidationError(where(key) + "entry " + std::to_string(k) + " must have " +
                            std::to_string(N) + " elements");
    }
    std::array<json, N> t;
    for (std::size_t c = 0; c < N; ++c) {
      if (!item[c].is_number()) {
        throw ValidationError(where(key) + "entry " + std::to_string(k) + " is not numeric");
      }
      t[c] = item[c];
    }
    out.push_back(t);
  }
  return out;
}

int as_index(const json& v, const char* key, std::size_t entry) {
  if (!v.is_number_integer()) {
    throw ValidationError(where(key) + "entry " + std::to_string(entry) +
                          " has a non-integer index");
  }
  return v.get<int>();
}

Axis as_axis(int a, const char* key, std::size_t entry) {
  if (a != 0 && a != 1) {
    throw ValidationError(where(key) + "entry " + std::to_string(entry) + " axis must be 0 or 1");
  }
  return static_cast<Axis>(a);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "width",   "height",  "density", "penal",   "filter_width", "opt_steps",   "fixed",
      "loads",   "mask",    "preset",  "young",   "young_min",    "poisson",     "xmin",
      "xmax",    "print_every"};
  return keys;
}

}  // namespace

DensityField ProblemSpec::mask_field() const {
  if (mask) return *mask;
  return DensityField(nely, nelx, 1.0);
}

int dof_index(int i, int j, Axis axis, int nelx, int nely) {
  const int a = static_cast<int>(axis);
  if (i < 0 || i > nelx || j < 0 || j > nely || (a != 0 && a != 1)) {
    throw ValidationError("dof_index: node (" + std::to_string(i) + ", " + std::to_string(j) +
                          ", axis " + std::to_string(a) + ") outside a " + std::to_string(nelx) +
                          "x" + std::to_string(nely) + " grid");
  }
  return 2 * ((nely + 1) * i + j) + a;
}

void validate(const ProblemSpec& s) {
  if (s.nelx < 1 || s.nely < 1) throw ValidationError("grid must be at least 1x1 elements");
  if (!(s.density > 0.0 && s.density < 1.0)) throw ValidationError("density out of (0,1)");
  if (!(s.young_min > 0.0)) throw ValidationError("young_min must be positive");
  if (!(s.young_min < s.young)) throw ValidationError("young_min must be below young");
  if (!(s.poisson >= 0.0 && s.poisson < 0.5)) throw ValidationError("poisson out of [0,0.5)");
  if (!(s.penal >= 1.0)) throw ValidationError("penal must be >= 1");
  if (!(s.filter_width > 0.0)) throw ValidationError("filter_width must be positive");
  if (!(s.xmin >= 0.0 && s.xmin < s.xmax && s.xmax <= 1.0)) {
    throw ValidationError("xmin/xmax must satisfy 0 <= xmin < xmax <= 1");
  }
  if (s.opt_steps < 0) throw ValidationError("opt_steps must be non-negative");
  if (s.print_every < 1) throw ValidationError("print_every must be positive");

  const int n = s.dof_count();
  if (static_cast<int>(s.forces.size()) != n) {
    throw ValidationError("forces length " + std::to_string(s.forces.size()) +
                          " does not match DOF count " + std::to_string(n));
  }
  for (double f : s.forces) {
    if (!std::isfinite(f)) throw ValidationError("forces contain a non-finite value");
  }
  auto check_sorted = [n](const std::vector<int>& v, const char* name) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k] < 0 || v[k] >= n) throw ValidationError(std::string(name) + " index out of range");
      if (k > 0 && v[k] <= v[k - 1]) {
        throw ValidationError(std::string(name) + " must be sorted and unique");
      }
    }
  };
  check_sorted(s.fixdofs, "fixdofs");
  check_sorted(s.freedofs, "freedofs");
  if (s.freedofs.empty()) throw ValidationError("no free DOFs");
  if (s.fixdofs.size() + s.freedofs.size() != static_cast<std::size_t>(n) ||
      s.freedofs != complement(s.fixdofs, n)) {
    throw ValidationError("freedofs must be the complement of fixdofs");
  }

  if (s.mask) {
    if (s.mask->rows() != s.nely || s.mask->cols() != s.nelx) {
      throw ValidationError("mask shape must be (nely, nelx)");
    }
    for (double m : s.mask->values()) {
      if (!std::isfinite(m)) throw ValidationError("mask contains a non-finite value");
    }
    if (!(mean(*s.mask) > 0.0)) throw ValidationError("mask excludes every cell");
  }
}

ProblemSpec make_problem(int nelx, int nely, std::vector<int> fixdofs, std::vector<double> forces,
                         double density) {
  ProblemSpec s;
  s.nelx = nelx;
  s.nely = nely;
  s.density = density;
  std::sort(fixdofs.begin(), fixdofs.end());
  fixdofs.erase(std::unique(fixdofs.begin(), fixdofs.end()), fixdofs.end());
  s.fixdofs = std::move(fixdofs);
  s.forces = std::move(forces);
  if (nelx >= 1 && nely >= 1) s.freedofs = complement(s.fixdofs, s.dof_count());
  validate(s);
  return s;
}

ProblemSpec mbb_beam(int width, int height, double density) {
  if (width < 1 || height < 1) throw ValidationError("mbb_beam: width and height must be >= 1");
  std::vector<int> fixed;
  for (int j = 0; j <= height; ++j) fixed.push_back(dof_index(0, j, Axis::kX, width, height));
  fixed.push_back(dof_index(width, height, Axis::kY, width, height));
  std::vector<double> forces(2 * (width + 1) * (height + 1), 0.0);
  forces[dof_index(0, 0, Axis::kY, width, height)] = -1.0;
  return make_problem(width, height, std::move(fixed), std::move(forces), density);
}

ProblemSpec cantilever(int width, int height, double density) {
  if (width < 1 || height < 1) throw ValidationError("cantilever: width and height must be >= 1");
  std::vector<int> fixed;
  for (int j = 0; j <= height; ++j) {
    fixed.push_back(dof_index(0, j, Axis::kX, width, height));
    fixed.push_back(dof_index(0, j, Axis::kY, width, height));
  }
  std::vector<double> forces(2 * (width + 1) * (height + 1), 0.0);
  forces[dof_index(width, height / 2, Axis::kY, width, height)] = -1.0;
  return make_problem(width, height, std::move(fixed), std::move(forces), density);
}

ProblemSpec bridge(int width, int height, double density) {
  if (width < 2 || height < 1) throw ValidationError("bridge: width >= 2 and height >= 1 required");
  std::vector<int> fixed = {dof_index(0, height, Axis::kX, width, height),
                            dof_index(0, height, Axis::kY, width, height),
                            dof_index(width, height, Axis::kY, width, height)};
  std::vector<double> forces(2 * (width + 1) * (height + 1), 0.0);
  forces[dof_index(width / 2, height, Axis::kY, width, height)] = -1.0;
  return make_problem(width, height, std::move(fixed), std::move(forces), density);
}

std::vector<std::string> preset_names() { return {"mbb", "cantilever", "bridge"}; }

bool is_preset(std::string_view name) {
  const auto names = preset_names();
  return std::find(names.begin(), names.end(), name) != names.end() || name == "mbb_beam";
}

ProblemSpec make_preset(std::string_view name, std::optional<int> width, std::optional<int> height,
                        std::optional<double> density) {
  if (name == "mbb" || name == "mbb_beam") {
    return mbb_beam(width.value_or(80), height.value_or(25), density.value_or(0.4));
  }
  if (name == "cantilever") {
    return cantilever(width.value_or(60), height.value_or(30), density.value_or(0.4));
  }
  if (name == "bridge") {
    return bridge(width.value_or(90), height.value_or(30), density.value_or(0.3));
  }
  throw ValidationError("unknown preset '" + std::string(name) + "'");
}

ProblemSpec parse_problem(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ValidationError("parse error at line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + e.what());
  }
  if (!doc.is_object()) throw ValidationError("problem file must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!known_keys().count(key)) throw ValidationError(where(key) + "unknown key");
  }

  const std::optional<double> density =
      doc.contains("density") ? std::optional(get_real(doc, "density", 0.4)) : std::nullopt;
  if (density && !(*density > 0.0 && *density < 1.0)) {
    throw ValidationError("density out of (0,1)");
  }

  ProblemSpec s;
  if (doc.contains("preset")) {
    if (!doc.at("preset").is_string()) throw ValidationError(where("preset") + "expected a string");
    const auto name = doc.at("preset").get<std::string>();
    std::optional<int> w, h;
    if (doc.contains("width")) w = get_int(doc, "width", 0);
    if (doc.contains("height")) h = get_int(doc, "height", 0);
    s = make_preset(name, w, h, density);
  } else {
    if (!doc.contains("width") || !doc.contains("height")) {
      throw ValidationError("field 'width'/'height': required without a preset");
    }
    const int w = get_int(doc, "width", 0);
    const int h = get_int(doc, "height", 0);
    if (w < 1 || h < 1) throw ValidationError("grid must be at least 1x1 elements");

    std::vector<int> fixed;
    const auto fixed_entries = get_tuples<3>(doc, "fixed");
    for (std::size_t k = 0; k < fixed_entries.size(); ++k) {
      const auto& t = fixed_entries[k];
      const Axis axis = as_axis(as_index(t[2], "fixed", k), "fixed", k);
      fixed.push_back(dof_index(as_index(t[0], "fixed", k), as_index(t[1], "fixed", k), axis, w, h));
    }
    std::vector<double> forces(2 * (w + 1) * (h + 1), 0.0);
    const auto load_entries = get_tuples<4>(doc, "loads");
    for (std::size_t k = 0; k < load_entries.size(); ++k) {
      const auto& t = load_entries[k];
      const Axis axis = as_axis(as_index(t[2], "loads", k), "loads", k);
      forces[dof_index(as_index(t[0], "loads", k), as_index(t[1], "loads", k), axis, w, h)] +=
          t[3].get<double>();
    }
    s.nelx = w;
    s.nely = h;
    std::sort(fixed.begin(), fixed.end());
    fixed.erase(std::unique(fixed.begin(), fixed.end()), fixed.end());
    s.fixdofs = std::move(fixed);
    s.freedofs = complement(s.fixdofs, s.dof_count());
    s.forces = std::move(forces);
    s.density = density.value_or(0.4);
  }

  s.penal = get_real(doc, "penal", s.penal);
  s.filter_width = get_real(doc, "filter_width", s.filter_width);
  s.opt_steps = get_int(doc, "opt_steps", s.opt_steps);
  s.young = get_real(doc, "young", s.young);
  s.young_min = get_real(doc, "young_min", s.young_min);
  s.poisson = get_real(doc, "poisson", s.poisson);
  s.xmin = get_real(doc, "xmin", s.xmin);
  s.xmax = get_real(doc, "xmax", s.xmax);
  s.print_every = get_int(doc, "print_every", s.print_every);

  const auto cells = get_tuples<2>(doc, "mask");
  if (!cells.empty()) {
    DensityField mask(s.nely, s.nelx, 1.0);
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const int ex = as_index(cells[k][0], "mask", k);
      const int ey = as_index(cells[k][1], "mask", k);
      if (ex < 0 || ex >= s.nelx || ey < 0 || ey >= s.nely) {
        throw ValidationError(where("mask") + "entry " + std::to_string(k) + " outside the grid");
      }
      mask(ey, ex) = 0.0;
    }
    s.mask = std::move(mask);
  }

  validate(s);
  return s;
}

ProblemSpec load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open problem file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

std::string serialize_problem(const ProblemSpec& s) {
  json doc;
  doc["width"] = s.nelx;
  doc["height"] = s.nely;
  doc["density"] = s.density;
  doc["penal"] = s.penal;
  doc["filter_width"] = s.filter_width;
  doc["opt_steps"] = s.opt_steps;
  doc["young"] = s.young;
  doc["young_min"] = s.young_min;
  doc["poisson"] = s.poisson;
  doc["xmin"] = s.xmin;
  doc["xmax"] = s.xmax;
  doc["print_every"] = s.print_every;

  const int stride = s.nely + 1;
  auto node_of = [stride](int dof) { return std::array<int, 3>{dof / 2 / stride, dof / 2 % stride, dof % 2}; };
  json fixed = json::array();
  for (int d : s.fixdofs) {
    const auto [i, j, a] = node_of(d);
    fixed.push_back({i, j, a});
  }
  doc["fixed"] = std::move(fixed);
  json loads = json::array();
  for (int d = 0; d < static_cast<int>(s.forces.size()); ++d) {
    if (s.forces[d] == 0.0) continue;
    const auto [i, j, a] = node_of(d);
    loads.push_back({i, j, a, s.forces[d]});
  }
  doc["loads"] = std::move(loads);
  if (s.mask) {
    json cells = json::array();
    for (int ey = 0; ey < s.nely; ++ey) {
      for (int ex = 0; ex < s.nelx; ++ex) {
        if ((*s.mask)(ey, ex) == 0.0) cells.push_back({ex, ey});
      }
    }
    doc["mask"] = std::move(cells);
  }
  return doc.dump(2);
}

void save_problem(const ProblemSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write problem file " + path.string());
  out << serialize_problem(spec) << '\n';
}

}  // namespace densitop
