#include <iostream>

#include "CLI11.hpp"
#include "densitop/parallel.hpp"
#include "densitop/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"densitop: 2D SIMP topology optimization (compliance, Gaussian filter, MMA)"};
  app.require_subcommand(1);

  densitop::RunConfig cfg;
  std::string out_dir = "out";
  auto* run = app.add_subcommand("run", "optimize a preset or problem file");
  run->add_option("--problem", cfg.problem, "preset (mbb, cantilever, bridge) or JSON file")
      ->required();
  run->add_option("--width", cfg.width, "elements across (presets only)");
  run->add_option("--height", cfg.height, "elements down (presets only)");
  run->add_option("--density", cfg.density, "target volume fraction in (0,1)");
  run->add_option("--steps", cfg.steps, "optimizer steps (evaluations = steps + 1)");
  run->add_option("--filter-width", cfg.filter_width, "Gaussian filter sigma, in elements");
  run->add_option("--penal", cfg.penal, "SIMP exponent");
  run->add_option("--out", out_dir, "output directory")->capture_default_str();
  run->add_flag("--save-frames", cfg.save_frames, "write frames/step_####.pgm per evaluation");
  run->add_flag("--quiet", cfg.quiet, "suppress the progress trace");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : densitop::kExitValidation;
  }
  cfg.out_dir = out_dir;
  cfg.threads = densitop::threads_from_env();
  return densitop::run(cfg, std::cout, std::cerr);
}
