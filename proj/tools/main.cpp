// Command-line driver for the agenda pipeline: preprocess raw records into
// token documents, fit the seeded topic model, and produce the cross-corpus
// analytics bundle. Progress goes to stderr; machine-readable results go to
// files under the configured output directory.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "agenda/app/commands.hpp"
#include "agenda/app/run_config.hpp"
#include "agenda/core/errors.hpp"

namespace {

using agenda::ExitCode;

std::string default_config_path() {
  if (const char* env = std::getenv("AGENDA_CONFIG")) return env;
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seeded nonparametric topic model and cross-corpus agenda analytics"};
  app.require_subcommand(1);

  std::string config_path = default_config_path();
  agenda::app::CliOverrides overrides;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "config file (JSON)");
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t v) { overrides.seed = v; },
        "override model.rng_seed");
    cmd->add_option_function<int>(
        "--sweeps", [&](int v) { overrides.sweeps = v; },
        "override model.sweeps");
    cmd->add_option_function<double>(
        "--alpha", [&](double v) { overrides.alpha = v; },
        "override model.alpha");
    cmd->add_option_function<double>(
        "--beta", [&](double v) { overrides.beta = v; },
        "override model.beta");
    cmd->add_option_function<std::string>(
        "--likelihood-mode",
        [&](const std::string& v) { overrides.likelihood_mode = v; },
        "paper-approximate | exact-collapsed");
    cmd->add_option_function<std::string>(
        "--hc", [&](const std::string& v) { overrides.hc = v; },
        "robust-SE flavor HC0..HC3");
    cmd->add_option_function<std::string>(
        "--out", [&](const std::string& v) { overrides.out_dir = v; },
        "override output directory");
  };

  CLI::App* preprocess =
      app.add_subcommand("preprocess", "records -> token documents + vocabulary");
  add_common(preprocess);

  CLI::App* train =
      app.add_subcommand("train", "fit the model, write state + diagnostics");
  add_common(train);
  std::string resume_path;
  train->add_option("--resume", resume_path,
                    "continue from a persisted state file (replay-verified)");

  CLI::App* analyze = app.add_subcommand(
      "analyze", "salience, correlations, top words, similarity grid, regressions");
  add_common(analyze);
  std::string state_path;
  analyze->add_option("--state", state_path,
                      "state file (default: <out>/state.jsonl)");

  CLI::App* report = app.add_subcommand(
      "report", "labeling evidence for new topics (top words + samples)");
  add_common(report);
  std::string report_state_path;
  report->add_option("--state", report_state_path,
                     "state file (default: <out>/state.jsonl)");

  CLI::App* validate =
      app.add_subcommand("validate", "run the oracle and acceptance checks");
  bool quick = false;
  validate->add_flag("--quick", quick, "fast subset (< 60 s)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      const bool ok = agenda::app::cmd_validate(quick, std::cerr);
      return ok ? static_cast<int>(ExitCode::ok)
                : static_cast<int>(ExitCode::invariant_violation);
    }
    if (config_path.empty()) {
      std::cerr << "error: no config file (use --config or AGENDA_CONFIG)\n";
      return static_cast<int>(ExitCode::config_error);
    }
    const agenda::app::RunConfig config =
        agenda::app::RunConfig::load(config_path, overrides);
    std::cerr << "run_id " << config.run_id << "\n";
    if (preprocess->parsed()) {
      agenda::app::cmd_preprocess(config, std::cerr);
    } else if (train->parsed()) {
      agenda::app::cmd_train(config, std::cerr, resume_path);
    } else if (analyze->parsed()) {
      agenda::app::cmd_analyze(config, std::cerr, state_path);
    } else if (report->parsed()) {
      agenda::app::cmd_report(config, std::cerr, report_state_path);
    }
    return static_cast<int>(ExitCode::ok);
  } catch (const agenda::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::config_error);
  } catch (const agenda::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::data_error);
  } catch (const agenda::InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return static_cast<int>(ExitCode::invariant_violation);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::usage);
  }
}
