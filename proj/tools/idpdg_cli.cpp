// Batch driver: idpdg run | riemann | dmr | verify

#include "idpdg/cases.hpp"
#include "idpdg/output.hpp"
#include "idpdg/verify.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using namespace idpdg;

namespace {

constexpr int kNumericalFailure = 1;
constexpr int kConfigError = 2;

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <int Dim>
void write_summary(const fs::path& dir, const CaseConfig& cfg, const CaseRun<Dim>& run, double l1) {
  const auto& d = run.result.diagnostics;
  const auto& v = d.verification;
  const DensityRange range = density_range(*run.op, run.result.U);
  std::ostringstream os;
  os << "case = " << cfg.name << '\n'
     << "time = " << num(run.result.time) << '\n'
     << "steps = " << run.result.steps << '\n'
     << "min_density_over_run = " << num(d.min_density) << '\n'
     << "max_density_over_run = " << num(d.max_density) << '\n'
     << "final_min_density = " << num(range.min) << '\n'
     << "final_max_density = " << num(range.max) << '\n'
     << "limiter_activations = " << d.activations() << '\n'
     << "pseudo_iteration_mean = " << num(d.iteration_mean()) << '\n';
  if (l1 >= 0.0) os << "l1_density_error = " << num(l1) << '\n';
  if (cfg.verify) {
    os << "verify.elements_checked = " << v.elements_checked << '\n'
       << "verify.theorem_violations = " << v.theorem_violations << '\n'
       << "verify.min_theorem_slack = " << num(v.min_theorem_slack) << '\n'
       << "verify.max_identity_error = " << num(v.max_identity_error) << '\n'
       << "verify.max_pseudo_residual = " << num(v.max_pseudo_residual) << '\n'
       << "verify.min_domination = " << num(v.min_domination) << '\n'
       << "verify.post_limit_violations = " << v.post_limit_violations << '\n'
       << "verify.max_limiter_drift = " << num(v.max_limiter_drift) << '\n';
  }
  open_output(dir / "summary.txt") << os.str();
  std::cout << os.str();
}

int run_config(const CaseConfig& cfg) {
  const fs::path dir = cfg.directory;
  fs::create_directories(dir);
  open_output(dir / "config.ini") << echo_config(cfg);
  std::cout << "# effective configuration (also in " << (dir / "config.ini").string() << ")\n"
            << echo_config(cfg) << '\n';

  if (!is_two_dimensional(cfg.name)) {
    StepObserver<1> observer;
    std::unique_ptr<SchemeOperator<1>> snapshot_op;
    if (cfg.snapshot_every > 0) {
      const auto setup = setup_1d(cfg);
      snapshot_op = std::make_unique<SchemeOperator<1>>(setup.mesh, scheme_settings(cfg), setup.boundary);
      observer = [&](const Field<1>& U, double, long step) {
        if (step % cfg.snapshot_every == 0) {
          auto os = open_output(dir / ("profile_" + std::to_string(step) + ".csv"));
          write_profile_csv(os, *snapshot_op, U, cfg.samples_per_element);
        }
      };
    }
    const auto run = run_case<1>(cfg, observer);
    auto os = open_output(dir / "profile.csv");
    write_profile_csv(os, *run.op, run.result.U, cfg.samples_per_element);
    double l1 = -1.0;
    if (run.setup.exact) {
      const double t = run.result.time;
      l1 = l1_density_error<1>(*run.op, run.result.U,
                               [&](const Vec<1>& x) { return run.setup.exact(x, t); });
    }
    if (cfg.write_stats) {
      auto st = open_output(dir / "stats.csv");
      write_stats_csv(st, run.result.diagnostics);
    }
    write_summary(dir, cfg, run, l1);
  } else {
    StepObserver<2> observer;
    std::unique_ptr<SchemeOperator<2>> snapshot_op;
    if (cfg.snapshot_every > 0) {
      const auto setup = setup_2d(cfg);
      snapshot_op = std::make_unique<SchemeOperator<2>>(setup.mesh, scheme_settings(cfg), setup.boundary);
      observer = [&](const Field<2>& U, double, long step) {
        if (step % cfg.snapshot_every == 0) {
          auto os = open_output(dir / ("solution_" + std::to_string(step) + ".vtk"));
          write_vtk(os, *snapshot_op, U, cfg.degree);
        }
      };
    }
    const auto run = run_case<2>(cfg, observer);
    auto os = open_output(dir / "solution.vtk");
    write_vtk(os, *run.op, run.result.U, cfg.degree, cfg.name);
    if (cfg.write_stats) {
      auto st = open_output(dir / "stats.csv");
      write_stats_csv(st, run.result.diagnostics);
    }
    write_summary(dir, cfg, run, -1.0);
  }
  return 0;
}

void set_threads() {
#ifdef _OPENMP
  if (const char* env = std::getenv("IDPDG_NUM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-order DG solver for the Euler equations with invariant-domain-preserving limiting"};
  app.require_subcommand(1);

  std::string config_path, case_name, suite = "all";
  std::vector<std::string> overrides;

  auto* run = app.add_subcommand("run", "run the case named in the config (case.name)");
  run->add_option("--config", config_path, "configuration file")->check(CLI::ExistingFile);
  run->add_option("overrides", overrides, "section.key=value overrides");

  auto* riemann = app.add_subcommand("riemann", "shock tube: sod, lax or toro4");
  riemann->add_option("case", case_name, "problem name")->required()->check(CLI::IsMember({"sod", "lax", "toro4"}));
  riemann->add_option("--config", config_path, "configuration file")->check(CLI::ExistingFile);
  riemann->add_option("overrides", overrides, "section.key=value overrides");

  auto* dmr = app.add_subcommand("dmr", "Mach 10 reflection over a 30 degree wedge");
  dmr->add_option("--config", config_path, "configuration file")->check(CLI::ExistingFile);
  dmr->add_option("overrides", overrides, "section.key=value overrides");

  auto* verify = app.add_subcommand("verify", "property suites");
  verify->add_option("suite", suite, "closure, quadrature, pseudo, idp, freestream, conservation or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }
  set_threads();

  try {
    if (verify->parsed()) {
      const Report report = run_verify(suite);
      print_report(std::cout, report);
      return report.passed() ? 0 : kNumericalFailure;
    }
    std::string fallback;
    if (riemann->parsed()) fallback = case_name;
    if (dmr->parsed()) fallback = "dmr";
    if (riemann->parsed() || dmr->parsed()) overrides.push_back("case.name=" + fallback);
    const CaseConfig cfg = load_config_file(config_path, overrides, fallback);
    if (riemann->parsed() && !is_riemann_case(cfg.name))
      throw ConfigError("case.name: riemann needs sod, lax or toro4");
    if (dmr->parsed() && cfg.name != "dmr") throw ConfigError("case.name: dmr subcommand runs the dmr case");
    return run_config(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InadmissibleState& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}
