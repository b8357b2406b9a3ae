// Command-line front end: parses run configs, dispatches solves and sweeps,
// and writes machine-readable reports.
//
// Exit status: 0 ok, 1 failed verification, 2 configuration error,
// 3 numerical error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "heatctl/acceptance.hpp"
#include "heatctl/runner.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  int threads = 0;
  long long seed = -1;
};

heatctl::RunConfig load_config(const CommonOpts& opts) {
  if (opts.config_path.empty())
    throw heatctl::ConfigError("--config PATH is required");
  heatctl::RunConfig cfg = heatctl::RunConfig::parse_file(opts.config_path);
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (opts.threads > 0) cfg.threads = opts.threads;
  if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);
  return cfg;
}

void write_report(const heatctl::Report& rep, const std::string& out_dir,
                  const std::string& stem) {
  fs::create_directories(out_dir);
  const fs::path json_path = fs::path(out_dir) / (stem + ".json");
  std::ofstream json_out(json_path);
  if (!json_out)
    throw heatctl::ConfigError("cannot write " + json_path.string());
  rep.write_json(json_out);
  if (!rep.rows.empty()) {
    const fs::path csv_path = fs::path(out_dir) / (stem + ".csv");
    std::ofstream csv_out(csv_path);
    if (!csv_out)
      throw heatctl::ConfigError("cannot write " + csv_path.string());
    rep.write_csv(csv_out);
  }
  std::cout << "wrote " << json_path.string() << '\n';
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "run configuration file");
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--threads", opts.threads, "worker threads (0 = auto)");
  cmd->add_option("--seed", opts.seed, "random seed override");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral toolkit for time-optimal and minimal-norm control of "
               "the 1-d heat equation with sampled-data controls"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string report_path;
  bool verbose = false;

  CLI::App* solve_norm = app.add_subcommand(
      "solve-norm", "fixed-horizon minimal-norm solves");
  add_common(solve_norm, opts);

  CLI::App* solve_time = app.add_subcommand(
      "solve-time", "time-optimal solves (distributed and sampled)");
  add_common(solve_time, opts);

  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "delta sweep with witness set, order fits, and gap hunt");
  add_common(sweep_cmd, opts);

  CLI::App* verify = app.add_subcommand(
      "verify", "run the full verification suite on the reference problem");
  add_common(verify, opts);
  verify->add_flag("--verbose", verbose, "print every sub-check");

  CLI::App* report_cmd = app.add_subcommand(
      "report", "re-render a JSON report as text");
  report_cmd->add_option("json", report_path, "report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help
    app.exit(e);
    return 2;
  }

  try {
    if (solve_norm->parsed()) {
      heatctl::RunConfig cfg = load_config(opts);
      heatctl::Report rep = heatctl::run_solve_norm(cfg);
      rep.render_text(std::cout);
      write_report(rep, cfg.out_dir, "solve_norm");
      return rep.all_passed() ? 0 : 1;
    }
    if (solve_time->parsed()) {
      heatctl::RunConfig cfg = load_config(opts);
      heatctl::Report rep = heatctl::run_solve_time(cfg);
      rep.render_text(std::cout);
      write_report(rep, cfg.out_dir, "solve_time");
      return rep.all_passed() ? 0 : 1;
    }
    if (sweep_cmd->parsed()) {
      heatctl::RunConfig cfg = load_config(opts);
      heatctl::Report rep = heatctl::run_error_lab(cfg);
      rep.render_text(std::cout);
      write_report(rep, cfg.out_dir, "sweep");
      return rep.all_passed() ? 0 : 1;
    }
    if (verify->parsed()) {
      const bool ok = heatctl::run_acceptance(std::cout, opts.threads, verbose);
      return ok ? 0 : 1;
    }
    if (report_cmd->parsed()) {
      std::ifstream in(report_path);
      if (!in)
        throw heatctl::ConfigError("cannot open report '" + report_path + "'");
      heatctl::Report rep = heatctl::Report::from_json(in);
      rep.render_text(std::cout);
      return 0;
    }
  } catch (const heatctl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const heatctl::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
