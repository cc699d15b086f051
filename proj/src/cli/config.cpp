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

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "kerrlat/cli.hpp"

namespace kerrlat::cli {

using nlohmann::json;

json default_config() {
    return json{
        {"command", "run-protocol"},
        {"seed", 12345},
        {"lattice", {{"sites", 2}, {"cutoff", 20}, {"periodic", false}}},
        {"alpha", {{"re", 3.1622776601683795}, {"im", 0.0}}},
        {"plan",
         {{"target", "W_ECS"},
          {"blocks", json::array()},
          {"ramp_up_ns", 10.0},
          {"decouple_inter_block_ns", 2.0},
          {"hold_ns", 0.0},
          // null: the target's default step-three duration, or t_star_ns when set.
          {"ramp_down_ns", nullptr},
          {"t_star_ns", nullptr},
          {"ramp_down_shape", "linear"},
          {"decouple_intra_block_ns", 2.0},
          {"chi_max_mhz", 40.0},
          {"kappa_max_mhz", 40.0},
          {"kappa_floor_mhz", 0.1},
          {"reference_phase_rad", 0.0},
          {"omega_c0_ghz", 7.5}}},
        {"site_offsets_mhz", json::array()},
        {"damping",
         {{"enabled", true},
          {"t1_at_zero_us", 3.0},
          {"t1_at_max_us", 1.5},
          {"tphi_at_zero_s", 1.0},
          {"tphi_at_max_us", 100.0},
          {"freeze_rates_per_step", false}}},
        {"integration", {{"dt_s", 1e-11}, {"checkpoint_interval_ns", 0.05}, {"trace_abort", 1e-6}}},
        {"output",
         {{"trajectory", "trajectory.csv"},
          {"wigner", "wigner.csv"},
          {"manifest", "manifest.json"},
          {"coherence", "coherence.csv"},
          {"sweep", "ground_state_sweep.csv"},
          {"report", "oracle_report.json"},
          {"final_wigner", true}}},
        {"wigner",
         {{"x_min", -6.0},
          {"x_max", 6.0},
          {"p_min", -6.0},
          {"p_max", 6.0},
          {"nx", 121},
          {"np", 121},
          // Single-mode state for the `wigner` command: vacuum | coherent | cat | fock.
          {"state", "cat"},
          {"state_cutoff", 20},
          {"fock_n", 1}}},
        {"coherence",
         {{"alpha_min", 1.0},
          {"alpha_max", 6.0},
          {"points", 51},
          {"dt1_us", 0.02},
          {"dt2_us", 0.002},
          {"dt3_us", 0.02},
          {"dt4_us", 0.002},
          {"dt5a_us", 0.01},
          {"dt5b_us", 0.16},
          {"t1_eff_us", 2.0},
          {"tphi_eff_us", 100.0},
          {"t0n_5a_us", 3.42},
          {"t0n_5b_us", 7.67},
          {"n_terms", 1000}}},
        {"sweep", {{"sites", 2}, {"total", 6}, {"taus", json::array({0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 10.0})}}},
    };
}

json parse_config_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t column = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::ostringstream msg;
        msg << origin << ":" << line << ":" << column << ": invalid JSON (" << e.what() << ")";
        throw ConfigError(msg.str());
    }
}

namespace {

std::string join_path(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

bool types_compatible(const json& value, const json& reference) {
    if (reference.is_null()) {
        return value.is_null() || value.is_number();
    }
    if (reference.is_number()) {
        return value.is_number();
    }
    return value.type() == reference.type();
}

void check_node(const json& value, const json& reference, const std::string& path) {
    if (!types_compatible(value, reference)) {
        throw ConfigError("field '" + path + "': expected " + std::string(reference.type_name()) + ", got " +
                          value.type_name());
    }
    if (reference.is_object()) {
        for (const auto& [key, child] : value.items()) {
            const std::string child_path = join_path(path, key);
            if (!reference.contains(key)) {
                throw ConfigError("unknown key '" + child_path + "'");
            }
            check_node(child, reference.at(key), child_path);
        }
    }
    if (reference.is_number_integer() && !value.is_number_integer()) {
        throw ConfigError("field '" + path + "': expected an integer");
    }
}

void merge_into(json& base, const json& patch) {
    for (const auto& [key, value] : patch.items()) {
        if (value.is_object() && base.contains(key) && base[key].is_object()) {
            merge_into(base[key], value);
        } else {
            base[key] = value;
        }
    }
}

}  // namespace

void check_against_defaults(const json& config, const json& defaults) {
    if (!config.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    check_node(config, defaults, "");
}

void apply_override(json& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override '" + assignment + "' is not of the form key=value");
    }
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }
    const json defaults = default_config();
    const json* ref = &defaults;
    json* node = &config;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty() || !ref->is_object() || !ref->contains(key)) {
            throw ConfigError("override: unknown key '" + path + "'");
        }
        ref = &ref->at(key);
        if (!node->contains(key)) {
            (*node)[key] = *ref;
        }
        node = &(*node)[key];
        if (dot == std::string::npos) {
            break;
        }
        start = dot + 1;
    }
    *node = value;
}

json resolve_config(const std::optional<std::filesystem::path>& file, const std::vector<std::string>& overrides) {
    json config = default_config();
    if (file) {
        std::ifstream in(*file);
        if (!in) {
            throw ConfigError("cannot read config file '" + file->string() + "'");
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        const json user = parse_config_text(buffer.str(), file->string());
        check_against_defaults(user, default_config());
        merge_into(config, user);
    }
    for (const auto& o : overrides) {
        apply_override(config, o);
    }
    check_against_defaults(config, default_config());
    return config;
}

int worker_count() {
    const char* env = std::getenv(kWorkersEnv);
    if (env == nullptr || *env == '\0') {
        return 1;
    }
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1) {
        throw ConfigError(std::string(kWorkersEnv) + " must be a positive integer");
    }
    return static_cast<int>(std::min<long>(n, 256));
}

}  // namespace kerrlat::cli
