#include "rgs_lab/commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rgs/errors.hpp"
#include "rgs_lab/config.hpp"
#include "rgs_lab/problem_io.hpp"
#include "rgs_lab/trace_csv.hpp"
#include "rgs_lab/verification.hpp"

namespace rgs::lab {

namespace {

template <typename F>
int guarded(std::ostream& err, const char* cmd, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << cmd << ": config error: " << e.what() << "\n";
    return kUsage;
  } catch (const ContractViolation& e) {
    err << cmd << ": invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << cmd << ": " << e.what() << "\n";
    return kRuntime;
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int cmd_gen(const std::filesystem::path& config_path, bool full, std::ostream& out,
            std::ostream& err) {
  return guarded(err, "gen", [&] {
    const auto config = load_config(config_path);
    auto loaded = load_problem(config, full);
    const linalg::LsqProblem problem(loaded.A, loaded.b);
    const auto& dir = config.output_dir;

    write_matrix(dir / "matrix.txt", problem.A());
    write_vector(dir / "rhs.txt", problem.b());
    write_vector(dir / "x_star.txt", problem.x_star());

    nlohmann::ordered_json meta;
    meta["experiment_id"] = config.experiment_id;
    if (config.problem_dir) {
      meta["source"] = config.problem_dir->string();
    } else {
      const auto& s = config.matrix;
      meta["matrix"] = {{"kind", std::string(testgen::to_string(s.kind))},
                        {"m", s.m},
                        {"n", s.n},
                        {"seed", s.seed},
                        {"shift", s.shift},
                        {"perturb", s.perturb}};
      meta["rhs"] = {{"mode", std::string(testgen::to_string(config.rhs_mode))},
                     {"seed", config.rhs_seed}};
    }
    meta["rows"] = problem.rows();
    meta["cols"] = problem.cols();
    meta["rank"] = problem.rank();
    meta["frob_sq"] = problem.frob_sq();
    meta["spectrum"] = problem.svd().sigma;
    meta["x_star_norm"] = linalg::norm2(problem.x_star());
    meta["x_star_checksum"] = checksum(problem.x_star());
    write_text(dir / "metadata.json", meta.dump(2) + "\n");

    out << "gen: wrote " << dir.string() << " (" << problem.rows() << " x " << problem.cols()
        << ", rank " << problem.rank() << ", x* checksum " << checksum(problem.x_star()) << ")\n";
    return kOk;
  });
}

int cmd_run(const std::filesystem::path& config_path, bool full, std::ostream& out,
            std::ostream& err) {
  return guarded(err, "run", [&] {
    const auto config = load_config(config_path);
    if (config.quantities.empty()) throw ConfigError("run needs at least one quantity");
    auto loaded = load_problem(config, full);
    const linalg::LsqProblem problem(std::move(loaded.A), std::move(loaded.b));
    const auto quantities = resolve_quantities(config, problem);
    const auto grid = effective_k_grid(config);

    const auto t0 = std::chrono::steady_clock::now();
    const auto result =
        diagnostics::monte_carlo(problem, config.solver, quantities, grid, config.trials);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const auto csv_path = config.output_dir / "trace.csv";
    write_text(csv_path, format_trace_csv(result, config.experiment_id, config.solver.method));

    char line[256];
    std::snprintf(line, sizeof line,
                  "run %s: method %s, trials %zu (failed %zu), seed %llu, %zu grid points up to "
                  "k = %zu, wall %.2f s\n",
                  config.experiment_id.c_str(),
                  std::string(solvers::to_string(config.solver.method)).c_str(), config.trials,
                  result.failed_trials, static_cast<unsigned long long>(config.solver.master_seed),
                  grid.size(), grid.back(), wall);
    out << line;
    for (const auto& s : result.summaries) {
      std::string name(diagnostics::to_string(s.spec.quantity));
      if (s.spec.ell) name += " ell " + std::to_string(*s.spec.ell);
      std::snprintf(line, sizeof line, "  %-32s median at k = %zu: %.6g\n", name.c_str(),
                    s.k_grid.back(), s.median.back());
      out << line;
    }
    out << "  trace " << csv_path.string() << "\n";
    if (result.failed_trials > 0) {
      for (const auto& t : result.trials) {
        if (t.failed) {
          err << "run: a trial failed: " << t.error << "\n";
          break;
        }
      }
    }
    return kOk;
  });
}

int cmd_verify(const std::optional<std::filesystem::path>& config_path, std::ostream& out,
               std::ostream& err) {
  return guarded(err, "verify", [&] {
    VerifySettings settings;
    std::optional<std::filesystem::path> report_path;
    if (config_path) {
      const auto config = load_config(*config_path);
      settings = config.verify;
      report_path = config.output_dir / "verify_report.txt";
    }
    const auto report = run_verification(settings);
    const std::string text = format_report(report);
    out << text;
    if (report_path) write_text(*report_path, text);
    return report.all_passed() ? kOk : kVerifyFailed;
  });
}

int cmd_plot(const std::filesystem::path& csv, const PlotOptions& options,
             const std::filesystem::path& output, std::ostream& out, std::ostream& err) {
  return guarded(err, "plot", [&] {
    const auto rows = parse_trace_csv(read_file(csv));
    const auto plot = render_plot(rows, options);
    write_text(output, plot.svg);
    if (plot.dropped_nonpositive > 0) {
      err << "plot: warning: dropped " << plot.dropped_nonpositive
          << " nonpositive points on the log scale\n";
    }
    out << "plot: wrote " << output.string() << " (" << plot.series << " series, " << plot.points
        << " points)\n";
    return kOk;
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized Gauss-Seidel verification lab", "rgs-lab"};
  app.require_subcommand(1);

  std::string config;
  bool full = false;
  auto* gen = app.add_subcommand("gen", "build a problem and write it as text files");
  gen->add_option("config", config, "experiment config (JSON)")->required();
  gen->add_flag("--full", full, "allow the full-size 600x500 / 500x600 matrices");

  auto* run = app.add_subcommand("run", "run a Monte Carlo experiment and write trace.csv");
  run->add_option("config", config, "experiment config (JSON)")->required();
  run->add_flag("--full", full, "allow the full-size 600x500 / 500x600 matrices");

  auto* verify = app.add_subcommand("verify", "check the convergence identities");
  verify->add_option("config", config, "config with an optional \"verify\" section");

  std::string csv;
  std::string output;
  PlotOptions plot_opts;
  std::size_t ell = 0;
  auto* plot = app.add_subcommand("plot", "draw an SVG line chart from trace.csv");
  plot->add_option("csv", csv, "trace CSV")->required();
  plot->add_option("-q,--quantity", plot_opts.quantity, "quantity to draw")->required();
  auto* ell_opt = plot->add_option("--ell", ell, "singular index when several are present");
  plot->add_option("-o,--output", output, "SVG file to write")->required();
  plot->add_flag("--log-y", plot_opts.log_y, "logarithmic y axis");
  plot->add_flag("--mean", plot_opts.mean, "draw the trial mean instead of every trial");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  if (gen->parsed()) return cmd_gen(config, full, out, err);
  if (run->parsed()) return cmd_run(config, full, out, err);
  if (verify->parsed()) {
    return cmd_verify(config.empty() ? std::nullopt : std::optional<std::filesystem::path>(config),
                      out, err);
  }
  if (ell_opt->count() > 0) plot_opts.ell = ell;
  return cmd_plot(csv, plot_opts, output, out, err);
}

}  // namespace rgs::lab
