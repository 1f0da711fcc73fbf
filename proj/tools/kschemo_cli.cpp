// kschemo: run, sweep and classify chemotaxis experiments.
//
// Exit status: 0 when every asserted check passes and no fatal event occurred,
// 1 when a run completed but failed its checks, 2 on usage or input errors.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ks/error.hpp"
#include "ks/harness.hpp"
#include "ks/reference.hpp"
#include "ks/verify/acceptance.hpp"

namespace {

void print_report(const ks::Report& r, const std::filesystem::path& dir) {
  std::printf("%s: t = %g after %lld steps%s\n", r.scenario.name.c_str(), r.t_final,
              static_cast<long long>(r.steps), r.completed ? "" : " (stopped early)");
  for (const auto& e : r.events)
    std::printf("  event %-18s t = %-10g %s%s\n", e.kind.c_str(), e.t, e.fatal ? "[fatal] " : "", e.message.c_str());
  if (r.speed) std::printf("  front speed %.5f +- %.5f (%zu samples)\n", r.speed->speed, r.speed->std_error, r.speed->samples);
  for (const auto& c : r.checks) {
    const char* tag = !c.asserted ? "info" : c.pass ? "pass" : "FAIL";
    std::printf("  %-4s %-20s measured %-12.5g bound %-12.5g %s\n", tag, c.name.c_str(), c.measured, c.bound,
                c.detail.c_str());
  }
  std::printf("  output: %s\n", dir.string().c_str());
}

int classify(double chi, double a, double b, int dim) {
  const ks::Params p{chi, a, b, dim};
  const auto r = ks::reference::classify(p);
  const auto cstar = ks::reference::cstar_lower_bound_formula(p);
  nlohmann::json j = {
      {"chi", chi},
      {"a", a},
      {"b", b},
      {"dim", dim},
      {"global_bounded", r.global_bounded},
      {"global_exists", r.global_exists},
      {"thm16_applies", r.thm16_applies},
      {"stability", r.stability},
      {"spreading", r.spreading},
      {"max_safe_r", std::isinf(r.max_safe_r) ? nlohmann::json("inf") : nlohmann::json(r.max_safe_r)},
      {"thresholds",
       {{"global_chi_max", r.thresholds.global_chi_max},
        {"half_dim", r.thresholds.half_dim},
        {"stability_chi_max", r.thresholds.stability_chi_max},
        {"spreading_chi_max", r.thresholds.spreading_chi_max}}},
      {"cstar_lower_bound", cstar ? nlohmann::json(*cstar) : nlohmann::json(nullptr)},
  };
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parabolic-elliptic chemotaxis experiments"};
  app.require_subcommand(1);
  app.footer("Default output root: $KS_OUTPUT_ROOT, or ./runs");

  auto* run = app.add_subcommand("run", "Run one scenario and write its artifacts");
  std::string run_file, run_out;
  bool run_force = false;
  run->add_option("scenario", run_file, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", run_out, "Output directory");
  run->add_flag("--force", run_force, "Overwrite a non-empty output directory");

  auto* sweep = app.add_subcommand("sweep", "Run a scenario once per value of one parameter");
  std::string sweep_file, axis, values, sweep_out;
  int workers = 1;
  bool sweep_force = false;
  sweep->add_option("scenario", sweep_file, "Scenario file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--axis", axis, "Numeric field, e.g. chi or params.chi")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);
  sweep->add_option("--out", sweep_out, "Sweep root directory");
  sweep->add_flag("--force", sweep_force, "Overwrite existing run directories");

  auto* cls = app.add_subcommand("classify", "Print the parameter-regime report as JSON");
  double chi = 0, a = 1, b = 1;
  int dim = 1;
  cls->add_option("--chi", chi)->required();
  cls->add_option("--a", a)->required();
  cls->add_option("--b", b)->required();
  cls->add_option("--dim", dim)->required();

  auto* verify = app.add_subcommand("verify-all", "Run the acceptance suite");
  std::vector<int> only;
  verify->add_option("--only", only, "Criterion ids to run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      const ks::Scenario s = ks::load_scenario(run_file);
      const auto dir = ks::harness::output_dir_for(s, run_out);
      const ks::Report r = ks::harness::run_experiment(s, dir, run_force);
      print_report(r, dir);
      return r.ok() ? 0 : 1;
    }
    if (*sweep) {
      const ks::Scenario s = ks::load_scenario(sweep_file);
      const auto list = ks::harness::parse_value_list(values);
      const auto root = sweep_out.empty() ? ks::harness::default_output_root() / (s.name + "_sweep_" + axis)
                                          : std::filesystem::path(sweep_out);
      const auto result = ks::harness::sweep(s, axis, list, root, workers, sweep_force);
      bool ok = true;
      for (const auto& row : result.rows) {
        std::printf("%s = %-10g %s %s\n", axis.c_str(), row.value, row.ok ? "ok  " : "FAIL",
                    row.error.empty() ? row.failed_checks.c_str() : row.error.c_str());
        ok = ok && row.ok;
      }
      std::printf("aggregate: %s\n", (root / "aggregate.csv").string().c_str());
      return ok ? 0 : 1;
    }
    if (*cls) {
      return classify(chi, a, b, dim);
    }
    if (*verify) {
      ks::acceptance::Options opt;
      opt.only = only;
      const auto results = ks::acceptance::run_all(opt, std::cout);
      return ks::acceptance::all_passed(results) ? 0 : 1;
    }
  } catch (const ks::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 2;
  } catch (const ks::harness::OutputExists& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
