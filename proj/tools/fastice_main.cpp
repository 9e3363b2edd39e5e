#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "fastice/ellipticity.hpp"
#include "fastice/params.hpp"
#include "fastice/scenario.hpp"
#include "fastice/version.hpp"

namespace {

fastice::Config resolve_config(const std::string& preset_name,
                               const std::string& config_path) {
  if (!preset_name.empty() && !config_path.empty())
    throw CLI::ValidationError("--preset and --config are mutually exclusive");
  if (!config_path.empty()) return fastice::load_config(config_path);
  if (!preset_name.empty()) return fastice::preset(preset_name);
  return fastice::Config{};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sea-ice dynamics with tensile strength and grounding"};
  app.set_version_flag("--version", fastice::kVersion);
  app.require_subcommand(1);

  std::string preset_name, config_path;

  auto* run_cmd = app.add_subcommand("run", "Execute a scenario");
  fastice::RunOptions opts;
  run_cmd->add_option("--preset", preset_name, "Named experiment setup");
  run_cmd->add_option("--config", config_path, "JSON config path");
  run_cmd->add_option("--out", opts.out_dir, "Output directory")->required();
  run_cmd->add_option("--snapshots-every", opts.snapshot_interval,
                      "Snapshot cadence in seconds (0 = first/last only)");
  run_cmd->add_option("--seed", opts.seed, "Recorded in the manifest");
  run_cmd->add_option("--resume", opts.resume_from, "Binary state to continue from");
  run_cmd->add_option("--max-steps", opts.max_steps, "Stop after N steps");
  run_cmd->add_flag("--quiet", opts.quiet, "Suppress progress lines");

  auto* compare_cmd = app.add_subcommand("compare", "Diff two finished runs");
  std::string dir_a, dir_b;
  compare_cmd->add_option("dir_a", dir_a, "First run directory")->required();
  compare_cmd->add_option("dir_b", dir_b, "Second run directory")->required();

  auto* ell_cmd = app.add_subcommand(
      "ellipticity", "Sampled checks of the linearized operator's structure");
  std::int64_t n_strong = 10000, n_normal = 100000;
  std::uint64_t ell_seed = 42;
  ell_cmd->add_option("--samples", n_strong, "Strong-ellipticity samples");
  ell_cmd->add_option("--normal-samples", n_normal, "Normal-ellipticity samples");
  ell_cmd->add_option("--seed", ell_seed, "Sampling seed");
  ell_cmd->add_option("--preset", preset_name, "Take parameters from a preset");
  ell_cmd->add_option("--config", config_path, "Take parameters from a config");

  auto* presets_cmd = app.add_subcommand("presets", "Preset catalogue");
  presets_cmd->add_subcommand("list", "Print available preset names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      const fastice::Config cfg = resolve_config(preset_name, config_path);
      const fastice::RunManifest m =
          fastice::run(cfg.scenario, cfg.params, cfg.solver, opts);
      if (!opts.quiet)
        std::printf("done: %d steps in %.1f s -> %s\n", m.steps, m.wall_seconds,
                    opts.out_dir.c_str());
      return 0;
    }
    if (compare_cmd->parsed()) {
      const fastice::CompareReport r = fastice::compare(dir_a, dir_b);
      std::fputs(fastice::format_report(r).c_str(), stdout);
      return 0;
    }
    if (ell_cmd->parsed()) {
      const fastice::Config cfg = resolve_config(preset_name, config_path);
      const auto sampler = fastice::make_random_sampler();
      const auto strong =
          fastice::check_strong_ellipticity(sampler, n_strong, ell_seed, cfg.params);
      const auto normal =
          fastice::check_normal_ellipticity(sampler, n_normal, ell_seed + 1, cfg.params);
      std::fputs(fastice::format_report(strong).c_str(), stdout);
      std::fputs(fastice::format_report(normal).c_str(), stdout);
      return strong.ok() && normal.ok() ? 0 : 1;
    }
    if (presets_cmd->parsed()) {
      for (const auto& name : fastice::preset_names()) std::printf("%s\n", name.c_str());
      return 0;
    }
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
