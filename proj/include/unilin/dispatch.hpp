#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unilin/json_io.hpp"

namespace unilin {

struct RunConfig {
  std::string command;
  json params = json::object();
  json constants = json::object();  // overrides on top of the shipped profile
  std::uint64_t seed = 0;
  int threads = 0;                  // 0 means one worker per logical core
};

struct RunResult {
  json report;          // embeds tool, version, command, seed and the resolved constants
  std::string csv;      // empty for commands without tabular output
  std::string summary;  // one line per finding, human-readable
};

// Accepts {"command", "params", "constants", "seed", "threads"}; `command` may come from the caller instead.
RunConfig config_from_json(const json& j);
const std::vector<std::string>& command_names();
RunResult dispatch(const RunConfig& cfg);

// 0 ok, 2 module or precondition error, 3 internal error.
int exit_code_for(Errc e);
json error_json(Errc e, const std::string& message);

}  // namespace unilin
