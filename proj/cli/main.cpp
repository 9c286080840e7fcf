#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "evcl/evcl.h"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

int report(evcl_status s) {
  std::fprintf(stderr, "error: %s: %s\n", evcl_status_name(s), evcl_last_error());
  return s == EVCL_ERR_CONFIG ? kExitConfig : kExitRuntime;
}

void print_progress(const char* message, void*) { std::fprintf(stderr, "%s\n", message); }

void print_selftest_line(const char* name, int passed, const char* detail, void*) {
  std::printf("[%s] %s (%s)\n", passed ? "PASS" : "FAIL", name, detail);
}

int cmd_run(const std::string& config_path, const std::string& out_dir, std::size_t workers) {
  evcl_config* config = nullptr;
  if (auto s = evcl_config_load(config_path.c_str(), &config); s != EVCL_OK) return report(s);
  if (!out_dir.empty()) {
    if (auto s = evcl_config_set_out_dir(config, out_dir.c_str()); s != EVCL_OK) {
      evcl_config_free(config);
      return report(s);
    }
  }
  const std::filesystem::path dir = evcl_config_out_dir(config);

  evcl_results* results = nullptr;
  auto s = evcl_run_experiment(config, workers, print_progress, nullptr, &results);
  evcl_config_free(config);
  if (s != EVCL_OK) return report(s);

  const auto raw = (dir / "results.csv").string();
  const auto summary = (dir / "summary.csv").string();
  const auto svg = (dir / "accuracy.svg").string();
  s = evcl_results_write_csv(results, raw.c_str(), summary.c_str());
  if (s == EVCL_OK) s = evcl_results_render_svg(results, svg.c_str());
  if (s != EVCL_OK) {
    evcl_results_free(results);
    return report(s);
  }

  std::printf("%-22s %5s %10s %10s %10s\n", "method", "after", "avg_acc", "std", "forgetting");
  for (std::size_t i = 0; i < evcl_results_aggregate_count(results); ++i) {
    evcl_aggregate_row row;
    evcl_results_aggregate_row(results, i, &row);
    std::printf("%-22s %5zu %10.4f %10.4f %10.4f\n", row.method, row.after_task,
                row.avg_accuracy_mean, row.avg_accuracy_std, row.forgetting_mean);
  }
  std::printf("wrote %s, %s, %s\n", raw.c_str(), summary.c_str(), svg.c_str());
  evcl_results_free(results);
  return 0;
}

int cmd_plot(const std::string& results_path, const std::string& out) {
  evcl_results* results = nullptr;
  if (auto s = evcl_results_load(results_path.c_str(), &results); s != EVCL_OK) return report(s);
  const auto s = evcl_results_render_svg(results, out.c_str());
  evcl_results_free(results);
  if (s != EVCL_OK) return report(s);
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

int cmd_selftest() {
  int all_passed = 0;
  if (auto s = evcl_selftest(print_selftest_line, nullptr, &all_passed); s != EVCL_OK) {
    return report(s);
  }
  std::printf("%s\n", all_passed ? "selftest passed" : "selftest FAILED");
  return all_passed ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continual learning with asymmetric variance-penalized variational inference"};
  app.set_version_flag("--version", std::string(evcl_version()));
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::size_t workers = 1;
  auto* run = app.add_subcommand("run", "Run an experiment described by a config file");
  run->add_option("--config", config_path, "Config file (key = value lines)")->required();
  run->add_option("--out", out_dir, "Output directory, overrides out_dir");
  run->add_option("--workers", workers, "Parallel (method, seed) runs")
      ->check(CLI::PositiveNumber);

  std::string results_path, svg_path;
  auto* plot = app.add_subcommand("plot", "Render accuracy.svg from a raw results CSV");
  plot->add_option("--results", results_path, "Raw results CSV")->required();
  plot->add_option("--out", svg_path, "SVG to write")->required();

  auto* selftest = app.add_subcommand("selftest", "Run the gradient, Fisher and KL oracles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*run) return cmd_run(config_path, out_dir, workers);
  if (*plot) return cmd_plot(results_path, svg_path);
  if (*selftest) return cmd_selftest();
  return kExitConfig;
}
