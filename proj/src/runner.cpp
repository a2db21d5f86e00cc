#include "densitop/runner.hpp"

#include <fmt/core.h>
#include <fmt/os.h>

#include <filesystem>
#include <fstream>
#include <ostream>

#include "densitop/errors.hpp"
#include "densitop/image.hpp"

namespace densitop {

ProblemSpec build_problem(const RunConfig& cfg) {
  ProblemSpec spec;
  if (is_preset(cfg.problem)) {
    spec = make_preset(cfg.problem, cfg.width, cfg.height, cfg.density);
  } else {
    if (!std::filesystem::exists(cfg.problem)) {
      throw ValidationError("'" + cfg.problem + "' is neither a preset (" +
                            fmt::format("{}", fmt::join(preset_names(), ", ")) +
                            ") nor an existing problem file");
    }
    spec = load_problem(cfg.problem);
    if (cfg.width || cfg.height) {
      throw ValidationError("--width/--height only apply to presets; edit the problem file");
    }
    if (cfg.density) spec.density = *cfg.density;
  }
  if (cfg.steps) spec.opt_steps = *cfg.steps;
  if (cfg.filter_width) spec.filter_width = *cfg.filter_width;
  if (cfg.penal) spec.penal = *cfg.penal;
  validate(spec);
  return spec;
}

std::string header_line(const ProblemSpec& spec) {
  return fmt::format("Optimizing a problem with {} DOFs", spec.dof_count());
}

std::string progress_line(int step, double loss, double elapsed_seconds) {
  return fmt::format("step {}, loss {:.2e}, t={:.2f}s", step, loss, elapsed_seconds);
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const ProblemSpec spec = build_problem(cfg);
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw ValidationError("cannot create output directory " + cfg.out_dir.string());
    const auto frame_dir = cfg.out_dir / "frames";
    if (cfg.save_frames) std::filesystem::create_directories(frame_dir);
    save_problem(spec, cfg.out_dir / "problem.json");

    if (!cfg.quiet) out << header_line(spec) << '\n';

    OptimizeCallbacks callbacks;
    callbacks.on_progress = [&](const Progress& p) {
      if (!cfg.quiet) out << progress_line(p.evaluation, p.loss, p.elapsed_seconds) << std::endl;
    };
    if (cfg.save_frames) {
      callbacks.on_evaluation = [&](const Progress& p) {
        write_pgm(render_density(*p.x), frame_dir / fmt::format("step_{:04d}.pgm", p.evaluation));
      };
    }
    OptimizeOptions options;
    options.objective.fem.threads = cfg.threads;
    const OptimizeResult result = optimize(spec, std::nullopt, callbacks, options);

    write_pgm(render_density(result.x), cfg.out_dir / "design.pgm");
    write_pgm(render_density(mirror_concat(result.x)), cfg.out_dir / "design_full.pgm");
    {
      auto csv = fmt::output_file((cfg.out_dir / "loss.csv").string());
      csv.print("step,compliance,volume_fraction\n");
      for (std::size_t i = 0; i < result.losses.size(); ++i) {
        csv.print("{},{:.17g},{:.17g}\n", i + 1, result.losses[i], result.volumes[i]);
      }
    }
    {
      auto csv = fmt::output_file((cfg.out_dir / "timing.csv").string());
      csv.print("step,elapsed_seconds\n");
      for (std::size_t i = 0; i < result.elapsed_seconds.size(); ++i) {
        csv.print("{},{:.6f}\n", i + 1, result.elapsed_seconds[i]);
      }
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace densitop
