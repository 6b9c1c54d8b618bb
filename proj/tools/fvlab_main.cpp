#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fvlab/config.hpp"
#include "fvlab/experiments.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::int64_t replicates = 0;
  bool replicates_set = false;
  int threads = -1;
};

void add_common_flags(CLI::App* cmd, CliOptions& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config file")->required();
  cmd->add_option("--seed", opts.seed, "override the master seed")
      ->each([&](const std::string&) { opts.seed_set = true; });
  cmd->add_option("--replicates", opts.replicates, "override the replicate count")
      ->each([&](const std::string&) { opts.replicates_set = true; });
  cmd->add_option("--threads", opts.threads, "worker threads (0 = hardware)");
  cmd->add_option("--out", opts.out_path, "output file (default stdout)");
  cmd->add_option("--format", opts.format, "report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

fvlab::Config load_config(const CliOptions& opts) {
  fvlab::Config cfg = fvlab::Config::parse_file(opts.config_path);
  if (opts.seed_set) cfg.set("seed", std::to_string(opts.seed));
  if (opts.replicates_set) cfg.set("replicates", std::to_string(opts.replicates));
  if (opts.threads >= 0) cfg.set("threads", std::to_string(opts.threads));
  return cfg;
}

void write_output(const CliOptions& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.out_path);
  if (!out) throw fvlab::ConfigError("cannot open output file: " + opts.out_path);
  out << text;
}

int run_report_command(const CliOptions& opts,
                       const std::function<fvlab::Report(fvlab::Config&)>& experiment) {
  fvlab::Config cfg = load_config(opts);
  const fvlab::Report report = experiment(cfg);
  write_output(opts, report.format(opts.format));
  return report.all_pass() ? 0 : 1;
}

int run_table_command(const CliOptions& opts,
                      const std::function<void(fvlab::Config&, std::ostream&)>& sim) {
  fvlab::Config cfg = load_config(opts);
  std::ostringstream table;
  sim(cfg, table);
  write_output(opts, table.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moran / Fleming-Viot simulation laboratory in random fitness environments"};
  app.require_subcommand(1);

  CliOptions opts;
  std::function<int()> action;

  auto* duality = app.add_subcommand("duality-check", "forward vs backward moment estimates");
  add_common_flags(duality, opts);
  duality->callback([&] { action = [&] { return run_report_command(opts, fvlab::run_duality_check); }; });

  auto* generator = app.add_subcommand("generator-check", "generator identity and N-convergence");
  add_common_flags(generator, opts);
  generator->callback(
      [&] { action = [&] { return run_report_command(opts, fvlab::run_generator_check); }; });

  auto* degree = app.add_subcommand("degree-chain", "dual degree chain and absorption");
  add_common_flags(degree, opts);
  degree->callback([&] { action = [&] { return run_report_command(opts, fvlab::run_degree_chain); }; });

  auto* ergodic = app.add_subcommand("ergodic-limit", "long-time limits via the dual");
  add_common_flags(ergodic, opts);
  ergodic->callback([&] { action = [&] { return run_report_command(opts, fvlab::run_ergodic_limit); }; });

  auto* moran = app.add_subcommand("moran-sim", "simulate one Moran trajectory");
  add_common_flags(moran, opts);
  moran->callback([&] { action = [&] { return run_table_command(opts, fvlab::run_moran_sim); }; });

  auto* dual = app.add_subcommand("dual-sim", "simulate one dual trajectory");
  add_common_flags(dual, opts);
  dual->callback([&] { action = [&] { return run_table_command(opts, fvlab::run_dual_sim); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return action();
  } catch (const fvlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
