#pragma once

#include <iosfwd>
#include <string>

#include "agenda/app/run_config.hpp"

namespace agenda::app {

// The five batch commands. Progress goes to `log` (the CLI passes stderr);
// machine-readable results go to files under the configured output
// directory. Errors surface as the typed exceptions of core/errors.hpp,
// which the CLI maps to exit-code classes.

void cmd_preprocess(const RunConfig& config, std::ostream& log);

// resume_path, when set, loads that state, replay-verifies it and continues
// to config.model.sweeps total sweeps.
void cmd_train(const RunConfig& config, std::ostream& log,
               const std::string& resume_path = "");

void cmd_analyze(const RunConfig& config, std::ostream& log,
                 const std::string& state_path = "");

// Labeling support: top words and sample documents for every retained new
// topic, for writing the topic metadata file that cmd_analyze requires.
void cmd_report(const RunConfig& config, std::ostream& log,
                const std::string& state_path = "");

// Runs the oracle suite; returns false when any check fails.
bool cmd_validate(bool quick, std::ostream& log);

}  // namespace agenda::app
