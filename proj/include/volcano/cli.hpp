/*
   Copyright 2026 The Volcano Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/


#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <volcano/clone_engine.hpp>

namespace volcano::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

//! Everything one invocation needs. Fields a subcommand does not use keep
//! their defaults.
struct RunConfig {
    //! fetch | extract | normalize | clones | derive | scan | evolve | cache clear
    std::string subcommand;
    std::string in;
    std::string out;
    std::string sigs;
    std::string labels;
    std::string review;
    std::string cache_dir;
    std::string catalog;
    std::string manifest;
    std::string explorer_url;
    std::string addresses_file;
    std::vector<std::string> addresses;
    RenamingMode mode{RenamingMode::kConsistent};
    int threshold_percent{30};
    std::size_t min_lines{3};
    std::optional<std::size_t> max_lines;
    bool use_cache{true};
    bool dedupe{false};
    bool timing{true};
    //! json | csv | text; empty picks by the --out extension.
    std::string format;
    //! Worker threads; 0 uses the hardware concurrency.
    unsigned jobs{0};
    //! Evolution settings as "<mode>:<percent>".
    std::vector<std::string> cells;
    double rate{5.0};

    [[nodiscard]] CloneConfig clone_config() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct ParseResult {
    std::optional<RunConfig> config;
    int exit_code{kExitOk};
    //! Help text or the usage error followed by the grammar.
    std::string message;
};

//! Parses arguments (program name excluded) without running anything.
ParseResult parse_run_config(const std::vector<std::string>& args);

//! Arguments that parse back to `cfg`.
std::vector<std::string> to_argv(const RunConfig& cfg);

//! Config echo embedded in reports.
nlohmann::json to_json(const RunConfig& cfg);

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

//! Parse then execute. Exit 0 on success, 1 on operational error, 2 on usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace volcano::cli
