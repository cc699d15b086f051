// Copyright 2026 The kerrlat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace kerrlat::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitConfigError = 2,
    kExitNumericalAbort = 3,
};

/// Environment variable holding the worker count for sweep commands.
inline constexpr const char* kWorkersEnv = "KERRLAT_WORKERS";

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Every accepted key with its default. Keys carry unit suffixes.
nlohmann::json default_config();

/// Parse JSON text; syntax errors are reported with line and column.
nlohmann::json parse_config_text(const std::string& text, const std::string& origin);

/// Apply `dotted.path=value`. The value is parsed as JSON when possible,
/// otherwise taken as a string. The path must exist in the defaults.
void apply_override(nlohmann::json& config, const std::string& assignment);

/// Reject keys absent from the defaults and values whose JSON type differs
/// from the default's (null defaults accept numbers).
void check_against_defaults(const nlohmann::json& config, const nlohmann::json& defaults);

/// Defaults, merged with the file (if any), then the overrides, then checked.
nlohmann::json resolve_config(const std::optional<std::filesystem::path>& file,
                              const std::vector<std::string>& overrides);

/// Execute a resolved config, writing artifacts under `out_dir`.
int run(const nlohmann::json& config, const std::filesystem::path& out_dir, std::ostream& log);

/// Command-line entry point (flags: --config, --out, --override).
int main_entry(int argc, char** argv);

/// Worker count from the environment (>= 1).
int worker_count();

}  // namespace kerrlat::cli
