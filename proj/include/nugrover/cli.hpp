// Copyright 2026 The nugrover Authors
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

// Command-line front end: configuration, sweep orchestration and table output.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nugrover/core.hpp"

namespace nugrover::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kOutputDirEnv = "NUGROVER_OUTPUT_DIR";

enum class ExitCode : int { ok = 0, verification_failed = 1, usage = 2 };

enum class Mode { run, sweep_dt, sweep_eps, plan_scale, verify, eff_compare };
enum class EngineChoice { exact, approx, effective };

std::string to_string(Mode mode);
std::string to_string(EngineChoice engine);

/// lo:hi:count, inclusive on both ends. Bounds accept multiples of pi, e.g. "3pi-0.3".
struct Grid {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;

    std::vector<double> points() const;
    std::string spec;  // as given, echoed in output headers
    static Grid parse(const std::string& text);
};

/// Parses a real number with an optional pi multiple: "0.2", "pi", "1e6pi+0.2", "-2pi".
double parse_scalar(const std::string& text);

/// Resolved command configuration. Everything that influences an output file is a field
/// here and is echoed in that file's header.
struct RunConfig {
    Mode mode = Mode::run;

    std::optional<std::string> n;  // database size (N1 for plan-scale)
    std::optional<std::int64_t> k;
    std::optional<std::string> tau;
    std::optional<std::string> dt;
    std::optional<double> alpha;
    std::optional<double> dtheta;
    double theta0 = 0.0;
    double eps = 0.0;  // absolute detuning
    std::optional<std::int64_t> steps;
    EngineChoice engine = EngineChoice::exact;
    std::optional<Grid> grid;
    std::int64_t stride = 1;

    // plan-scale
    std::optional<std::string> target_n;
    double validity_fraction = 0.1;
    bool check = false;

    // sweep-eps
    double clip = 1e3;

    // verify
    std::uint64_t seed = 20200;
    std::string inject_fault = "none";

    // Not part of the output contents.
    std::string out;
    int jobs = 1;

    /// Key/value pairs that determine the output; written as the file header.
    std::vector<std::pair<std::string, std::string>> content_entries() const;
    /// content_entries() plus out and jobs.
    std::vector<std::pair<std::string, std::string>> all_entries() const;

    /// Overwrites fields from "key=value" entries as produced by content_entries().
    void apply_entries(const std::map<std::string, std::string>& entries);
};

/// Reads "# config.key=value" lines from the header of a previous output file.
std::map<std::string, std::string> read_embedded_config(const std::string& path);

/// Builds SearchParams from the parameter fields; throws ParameterError when inconsistent.
SearchParams resolve_params(const RunConfig& config);

/// Formats a double with 17 significant digits.
std::string format_number(double value);

/// Entry point shared by the tool and the tests.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nugrover::cli
