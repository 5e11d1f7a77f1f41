#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "holo/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Phase-shifting holography: simulate, reconstruct, analyze"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = "holo_out";
  std::optional<std::uint64_t> seed;
  std::optional<int> m;
  std::optional<double> exposure;
  bool no_noise = false;

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", seed, "override the master seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--m", m, "phase steps / subset target")
      ->check(CLI::IsMember({3, 4, 6, 12}));
  app.add_option("--exposure", exposure, "override the exposure (seconds)");
  app.add_flag("--no-noise", no_noise, "disable Poisson and read noise");

  CLI::App* sim = app.add_subcommand("simulate", "write synthetic frame stacks");
  CLI::App* rec =
      app.add_subcommand("reconstruct", "phase/transmission from stacks");
  std::string object_dir, reference_dir;
  rec->add_option("object_stack", object_dir, "object stack directory")
      ->required();
  rec->add_option("reference_stack", reference_dir,
                  "reference stack directory")
      ->required();
  CLI::App* ana = app.add_subcommand("analyze", "quantitative studies");
  std::string study;
  ana->add_option("study", study,
                  "phase-step | resolution | noise | od-sweep | snr")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    holo::RunConfig cfg;
    if (!config_path.empty()) cfg = holo::load_config_file(config_path);
    if (seed) cfg.seed = *seed;
    if (m) cfg.m = *m;
    if (exposure) cfg.exposure = *exposure;
    if (no_noise) cfg.noise = false;

    if (sim->parsed()) {
      holo::cmd_simulate(cfg, out_dir);
    } else if (rec->parsed()) {
      holo::cmd_reconstruct(cfg, object_dir, reference_dir, out_dir, m);
    } else {
      holo::cmd_analyze(cfg, study, out_dir);
    }
    return 0;
  } catch (const holo::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const holo::IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 3;
  } catch (const holo::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
}
