//---------------------------------------------------------------------------//
//! \file qns/commands.hpp
//! \brief Subcommands as JSON-config to JSON-report functions.
//!
//! Every report carries the command, seed, worker count and a timestamp;
//! apart from the timestamp, a rerun with the same config is byte-identical.
//---------------------------------------------------------------------------//
#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace qns::commands {

struct Artifact {
    std::string name;
    std::string data;
};

struct Outcome {
    //! 0 success or pass, 1 threshold exceeded or certification failed,
    //! 2 invalid input or construction error.
    int exit_code = 0;
    nlohmann::json report;
    std::vector<Artifact> artifacts;
};

//! analyze-set, check-qns, counterexample, constants, analyze-f or phi.
//! Never throws for bad input: errors become exit code 2 with an "error"
//! field in the report.
Outcome run(std::string const& command, nlohmann::json const& config);

//! As run, parsing the config text first; malformed JSON is exit code 2.
Outcome run_text(std::string const& command, std::string const& config_text);

std::vector<std::string> const& command_names();
char const* version();

//! Report without the timestamp, serialized; the determinism comparison key.
std::string canonical_report(nlohmann::json const& report);

}  // namespace qns::commands
