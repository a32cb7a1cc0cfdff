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

#include "nugrover/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "nugrover/effective.hpp"
#include "nugrover/fullspace.hpp"
#include "nugrover/parallel.hpp"
#include "nugrover/scaling.hpp"
#include "nugrover/stroboscopic.hpp"

namespace nugrover::cli {

namespace {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

constexpr double kVerifyTolerance = 1e-8;
constexpr double kLeakTolerance = 1e-10;
constexpr double kUnitaryLimitTolerance = 1e-9;

template <typename T>
std::string opt_string(const std::optional<T>& v) {
    if (!v) {
        return "none";
    }
    if constexpr (std::is_same_v<T, std::string>) {
        return *v;
    } else if constexpr (std::is_same_v<T, double>) {
        return format_number(*v);
    } else {
        return std::to_string(*v);
    }
}

std::optional<std::string> opt_from(const std::string& s) {
    if (s == "none") {
        return std::nullopt;
    }
    return s;
}

double parse_double_strict(const std::string& text) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("not a number: '" + text + "'");
    }
    if (used != text.size()) {
        throw ConfigError("not a number: '" + text + "'");
    }
    return value;
}

std::int64_t parse_int_strict(const std::string& text) {
    std::size_t used = 0;
    long long value = 0;
    try {
        value = std::stoll(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("not an integer: '" + text + "'");
    }
    if (used != text.size()) {
        throw ConfigError("not an integer: '" + text + "'");
    }
    return value;
}

Mode mode_from(const std::string& s) {
    static const std::map<std::string, Mode> table = {
        {"run", Mode::run},           {"sweep-dt", Mode::sweep_dt}, {"sweep-eps", Mode::sweep_eps},
        {"plan-scale", Mode::plan_scale}, {"verify", Mode::verify},  {"eff-compare", Mode::eff_compare}};
    auto it = table.find(s);
    if (it == table.end()) {
        throw ConfigError("unknown command '" + s + "'");
    }
    return it->second;
}

EngineChoice engine_from(const std::string& s) {
    if (s == "exact") return EngineChoice::exact;
    if (s == "approx") return EngineChoice::approx;
    if (s == "effective") return EngineChoice::effective;
    throw ConfigError("unknown engine '" + s + "'");
}

// ---------------------------------------------------------------------------------------
// Output assembly

class Table {
  public:
    Table(const RunConfig& config, std::vector<std::string> columns) : columns_(std::move(columns)) {
        header_ << "# nugrover_version=" << kVersion << "\n";
        for (const auto& [key, value] : config.content_entries()) {
            header_ << "# config." << key << "=" << value << "\n";
        }
    }

    void derived(const std::string& key, const std::string& value) {
        header_ << "# derived." << key << "=" << value << "\n";
    }
    void derived(const std::string& key, double value) { derived(key, format_number(value)); }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            body_ << (i ? "," : "") << cells[i];
        }
        body_ << "\n";
    }

    std::string text() const {
        std::string out = header_.str();
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            out += (i ? "," : "") + columns_[i];
        }
        out += "\n" + body_.str();
        return out;
    }

    json summary;

  private:
    std::vector<std::string> columns_;
    std::ostringstream header_;
    std::ostringstream body_;
};

std::string num(double v) { return format_number(v); }
std::string num(std::int64_t v) { return std::to_string(v); }

std::string resolve_output_path(const RunConfig& config) {
    if (!config.out.empty()) {
        return config.out;
    }
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
        return std::string(dir) + "/" + to_string(config.mode) + ".csv";
    }
    return {};
}

void emit(const RunConfig& config, const Table& table, std::ostream& out) {
    const std::string path = resolve_output_path(config);
    if (path.empty()) {
        out << table.text();
        return;
    }
    {
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        if (!file) {
            throw ConfigError("cannot write output file '" + path + "'");
        }
        file << table.text();
    }
    json sidecar;
    sidecar["version"] = kVersion;
    sidecar["command"] = to_string(config.mode);
    json cfg = json::object();
    for (const auto& [key, value] : config.content_entries()) {
        cfg[key] = value;
    }
    sidecar["config"] = cfg;
    sidecar["summary"] = table.summary;
    std::ofstream side(path + ".summary.json", std::ios::binary | std::ios::trunc);
    if (!side) {
        throw ConfigError("cannot write summary file '" + path + ".summary.json'");
    }
    side << sidecar.dump(2) << "\n";
}

void add_param_echo(Table& table, const SearchParams& p) {
    table.derived("N", p.N);
    table.derived("x", p.x);
    table.derived("delta_t", p.delta_t);
    table.derived("delta_theta", p.delta_theta);
    table.derived("alpha", p.alpha);
    table.derived("step_mode", to_string(p.mode));
    table.derived("k", std::to_string(p.k));
    table.derived("tau", p.tau);
    table.derived("n_G", std::to_string(p.n_G));
}

std::int64_t resolved_steps(const RunConfig& config, const SearchParams& p) {
    const std::int64_t steps = config.steps.value_or(p.n_G);
    if (steps < 1) {
        throw ParameterError("--steps must be >= 1");
    }
    return steps;
}

const Grid& require_grid(const RunConfig& config) {
    if (!config.grid) {
        throw ConfigError("this command needs --grid lo:hi:count");
    }
    return *config.grid;
}

// ---------------------------------------------------------------------------------------
// Commands

int cmd_run(const RunConfig& config, std::ostream& out) {
    const SearchParams p = resolve_params(config);
    const std::int64_t steps = resolved_steps(config, p);
    RunRecord record;
    if (config.engine == EngineChoice::effective) {
        record = integrate_effective(p, static_cast<double>(steps) * p.delta_t, config.stride);
    } else {
        const Engine engine = config.engine == EngineChoice::exact ? Engine::exact : Engine::approx;
        record = accumulate_process(p, steps, engine).record;
    }

    Table table(config, {"n", "t", "f", "P", "d"});
    add_param_echo(table, p);
    table.derived("steps", std::to_string(steps));
    for (std::size_t i = 0; i < record.samples.size(); ++i) {
        const Sample& s = record.samples[i];
        const bool last = i + 1 == record.samples.size();
        if (s.n % config.stride != 0 && !last) {
            continue;
        }
        table.row({num(s.n), num(s.t), num(s.fidelity), num(s.survival), num(s.distance)});
    }
    const HeuristicRegime regime = classify_regime(p);
    table.summary = {{"final_n", record.final().n},
                     {"final_f", record.final().fidelity},
                     {"final_P", record.final().survival},
                     {"final_d", record.final().distance},
                     {"underflow", record.underflow},
                     {"regime", to_string(regime.kind)},
                     {"regime_gamma", regime.gamma},
                     {"regime_ratio", regime.ratio}};
    emit(config, table, out);
    return 0;
}

int cmd_sweep_dt(const RunConfig& config, std::ostream& out) {
    const std::vector<double> grid = require_grid(config).points();
    if (config.alpha && config.dtheta) {
        throw ConfigError("--alpha and --dtheta are mutually exclusive");
    }
    if (!config.n) {
        throw ConfigError("--n is required");
    }
    const double N = parse_scalar(*config.n);

    struct Point {
        SearchParams params;
        double distance = 0.0;
    };
    const auto points = parallel_map(grid.size(), config.jobs, [&](std::size_t i) {
        const double dt = grid[i];
        const double dtheta = config.alpha ? delta_theta_for_alpha(N, dt, *config.alpha) : config.dtheta.value_or(0.0);
        Point pt{make_params(N, StepSpec::raw(dt), dtheta, config.theta0, config.eps), 0.0};
        pt.distance = distance_from_unitarity(accumulate_process(pt.params, pt.params.n_G, Engine::exact).V);
        return pt;
    });

    Table table(config, {"dt", "n_G", "d"});
    table.derived("N", N);
    std::size_t best = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        table.row({num(points[i].params.delta_t), num(points[i].params.n_G), num(points[i].distance)});
        if (points[i].distance < points[best].distance) {
            best = i;
        }
    }
    table.summary = {{"points", points.size()}};
    if (points.size() > 1) {
        table.summary["min_index"] = best;
        table.summary["min_dt"] = points[best].params.delta_t;
        table.summary["min_d"] = points[best].distance;
        table.summary["min_dt_over_pi"] = points[best].params.delta_t / kPi;
    }
    emit(config, table, out);
    return 0;
}

int cmd_sweep_eps(const RunConfig& config, std::ostream& out) {
    const std::vector<double> grid = require_grid(config).points();
    const SearchParams base = resolve_params(config);
    std::vector<double> eps;
    eps.reserve(grid.size());
    for (double e : grid) {
        eps.push_back(e * base.x);
    }
    QualityOptions options;
    options.clip_ceiling = config.clip;
    options.jobs = config.jobs;
    const auto reports = quality_factor_sweep(base, eps, options);

    Table table(config, {"eps_over_x", "eps", "f", "P", "fP", "f_G", "Q", "Q_clipped", "divergent", "t_result_nu",
                         "t_result_G"});
    add_param_echo(table, base);
    json peaks = json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const QualityReport& r = reports[i];
        table.row({num(grid[i]), num(r.epsilon), num(r.f_nu), num(r.P_nu), num(r.numerator()), num(r.f_G),
                   r.Q ? num(*r.Q) : std::string("divergent"), num(r.Q_clipped), r.divergent ? "1" : "0",
                   num(r.t_result_nu), num(r.t_result_G)});
        if (r.divergent || r.Q_clipped > 1.0) {
            peaks.push_back(grid[i]);
        }
    }
    table.summary = {{"points", reports.size()}, {"q_above_one_eps_over_x", peaks}};
    emit(config, table, out);
    return 0;
}

int cmd_plan_scale(const RunConfig& config, std::ostream& out) {
    if (!config.n || !config.k || !config.target_n) {
        throw ConfigError("plan-scale needs --n (N1), --k (k1), --tau and --target-n (N_r)");
    }
    const double N1 = parse_scalar(*config.n);
    const double tau = config.tau ? parse_scalar(*config.tau) : 0.0;
    const double N_r = parse_scalar(*config.target_n);
    const ScalePlan plan = plan_scaled_instance(N1, *config.k, tau, N_r, config.validity_fraction);

    std::vector<std::string> columns = {"N1", "k1", "tau", "N_r", "N2", "k2", "k2_requested", "k2_raw",
                                        "integrality_residual", "valid"};
    if (config.check) {
        for (const char* c : {"ref_f", "ref_P", "planned_f", "planned_P", "max_df", "max_dP"}) {
            columns.emplace_back(c);
        }
    }
    Table table(config, columns);
    std::vector<std::string> row = {num(N1), num(plan.k1), num(tau), num(N_r), std::to_string(plan.N2),
                                    num(plan.k2), num(plan.k2_requested), num(plan.k2_raw),
                                    num(plan.integrality_residual), plan.valid ? "1" : "0"};
    table.summary = {{"N2", plan.N2}, {"k2", plan.k2}, {"k2_raw", plan.k2_raw},
                     {"integrality_residual", plan.integrality_residual}, {"valid", plan.valid}};
    if (config.check) {
        if (!config.alpha) {
            throw ConfigError("--check needs --alpha");
        }
        const ScaleCheckReport rep = scaled_process_check(plan, *config.alpha);
        for (double v : {rep.reference_f, rep.reference_P, rep.planned_f, rep.planned_P, rep.max_fidelity_deviation,
                         rep.max_survival_deviation}) {
            row.push_back(num(v));
        }
        table.summary["check"] = {{"reference_f", rep.reference_f}, {"reference_P", rep.reference_P},
                                  {"planned_f", rep.planned_f},     {"planned_P", rep.planned_P},
                                  {"max_df", rep.max_fidelity_deviation},
                                  {"max_dP", rep.max_survival_deviation}};
    }
    table.row(row);
    emit(config, table, out);
    return 0;
}

struct VerifyCase {
    std::string kind;
    std::int64_t N = 0;
    std::int64_t w = -1;
    double dt = 0.0;
    double dtheta = 0.0;
};

struct VerifyResult {
    double max_df = 0.0;
    double max_dP = 0.0;
    double max_leak = 0.0;
    bool pass = false;
};

VerifyResult run_verify_case(const VerifyCase& c, const RunConfig& config, std::int64_t steps,
                             std::shared_ptr<const fullspace::FullSpectrum> spectrum) {
    VerifyResult res;
    if (c.kind == "unitary_limit") {
        const SearchParams p = make_params(static_cast<double>(c.N), StepSpec::raw(c.dt), 0.0, 0.0, 0.0);
        const RunRecord rec = accumulate_process(p, p.n_G, Engine::exact).record;
        for (const Sample& s : rec.samples) {
            res.max_df = std::max(res.max_df, std::abs(s.fidelity - grover_fidelity_closed_form(s.t, p.N)));
            res.max_dP = std::max(res.max_dP, std::abs(s.survival - 1.0));
        }
        res.pass = res.max_df < kUnitaryLimitTolerance && res.max_dP < kUnitaryLimitTolerance;
        return res;
    }

    const SearchParams p = make_trajectory_params(static_cast<double>(c.N), StepSpec::raw(c.dt), c.dtheta,
                                                  config.theta0, config.eps);
    BlockHamiltonians blocks = subspace_basis_matrices(p);
    if (config.inject_fault == "h_down_sign") {
        // Flip the |s><s| term of the down block: -(1+eps)|w><w| - |s><s|.
        const Matrix2c oracle = 0.5 * (blocks.h_up + blocks.h_down);
        blocks.h_down = oracle - (blocks.h_down - oracle);
    }
    const RunRecord sub = accumulate_process(p, steps, Engine::exact, blocks).record;

    const fullspace::FullSpaceSimulator sim(c.N, c.w, p, std::move(spectrum));
    fullspace::FullState state = sim.initial_state();
    for (std::int64_t j = 1; j <= steps; ++j) {
        sim.step(state, j);
        const Sample& s = sub.samples[static_cast<std::size_t>(j)];
        res.max_df = std::max(res.max_df, std::abs(sim.target_fidelity(state) - s.fidelity));
        res.max_dP = std::max(res.max_dP, std::abs(state.survival - s.survival));
        res.max_leak = std::max(res.max_leak, sim.subspace_leakage(state));
    }
    res.pass = res.max_df < kVerifyTolerance && res.max_dP < kVerifyTolerance && res.max_leak < kLeakTolerance;
    return res;
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
    if (config.inject_fault != "none" && config.inject_fault != "h_down_sign") {
        throw ConfigError("unknown fault '" + config.inject_fault + "'");
    }
    std::vector<std::int64_t> sizes = {4, 16, 64, 256};
    if (config.n) {
        const double N = parse_scalar(*config.n);
        if (N != std::floor(N) || N < 2 || N > static_cast<double>(fullspace::kMaxDatabaseSize)) {
            throw ConfigError("verify supports integer N in [2, " + std::to_string(fullspace::kMaxDatabaseSize) +
                              "]");
        }
        sizes = {static_cast<std::int64_t>(N)};
    }
    const std::int64_t steps = config.steps.value_or(200);
    if (steps < 1) {
        throw ConfigError("--steps must be >= 1");
    }

    std::mt19937_64 rng(config.seed);
    std::vector<VerifyCase> cases;
    for (std::int64_t N : sizes) {
        std::uniform_int_distribution<std::int64_t> pick(0, N - 1);
        for (int t = 0; t < 3; ++t) {
            const std::int64_t w = pick(rng);
            for (double dt : {1.0, kPi, kPi + 0.2}) {
                for (double dtheta : {0.0, 0.001, 0.01}) {
                    cases.push_back({"fullspace", N, w, dt, dtheta});
                }
            }
        }
    }
    cases.push_back({"unitary_limit", 1000000, -1, 1.0, 0.0});
    cases.push_back({"unitary_limit", 1000000, -1, kPi + 0.2, 0.0});

    const auto spectra = parallel_map(sizes.size(), config.jobs, [&](std::size_t i) {
        return fullspace::diagonalize_blocks(sizes[i], config.eps);
    });
    const auto spectrum_for = [&](std::int64_t N) -> std::shared_ptr<const fullspace::FullSpectrum> {
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            if (sizes[i] == N) {
                return spectra[i];
            }
        }
        return nullptr;
    };
    const auto results = parallel_map(cases.size(), config.jobs, [&](std::size_t i) {
        return run_verify_case(cases[i], config, steps, spectrum_for(cases[i].N));
    });

    Table table(config, {"case", "kind", "N", "w", "dt", "dtheta", "max_df", "max_dP", "max_leak", "pass"});
    bool all = true;
    double worst_df = 0.0;
    double worst_dP = 0.0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const VerifyCase& c = cases[i];
        const VerifyResult& r = results[i];
        all = all && r.pass;
        worst_df = std::max(worst_df, r.max_df);
        worst_dP = std::max(worst_dP, r.max_dP);
        table.row({std::to_string(i), c.kind, num(c.N), num(c.w), num(c.dt), num(c.dtheta), num(r.max_df),
                   num(r.max_dP), num(r.max_leak), r.pass ? "1" : "0"});
    }
    table.summary = {{"cases", cases.size()}, {"pass", all}, {"max_df", worst_df}, {"max_dP", worst_dP}};
    emit(config, table, out);
    return all ? static_cast<int>(ExitCode::ok) : static_cast<int>(ExitCode::verification_failed);
}

int cmd_eff_compare(const RunConfig& config, std::ostream& out) {
    const SearchParams p = resolve_params(config);
    const std::int64_t steps = resolved_steps(config, p);
    const RunRecord exact = accumulate_process(p, steps, Engine::exact).record;
    const RunRecord eff = integrate_effective(p, static_cast<double>(steps) * p.delta_t, 1);

    Table table(config, {"n", "t", "f_exact", "f_eff", "f_unitary_approx", "P_exact", "P_eff"});
    add_param_echo(table, p);
    double dev_eff = 0.0;
    double dev_unitary = 0.0;
    double dev_eff_unitary_approx = 0.0;
    for (std::int64_t n = 0; n <= steps; ++n) {
        const Sample& a = exact.samples[static_cast<std::size_t>(n)];
        const Sample& b = eff.samples[static_cast<std::size_t>(n)];
        const double f_ua = unitary_approx_fidelity(n, p);
        dev_eff = std::max(dev_eff, std::abs(b.fidelity - a.fidelity));
        dev_unitary = std::max(dev_unitary, std::abs(f_ua - a.fidelity));
        dev_eff_unitary_approx = std::max(dev_eff_unitary_approx, std::abs(b.fidelity - f_ua));
        if (n % config.stride == 0 || n == steps) {
            table.row({num(n), num(a.t), num(a.fidelity), num(b.fidelity), num(f_ua), num(a.survival),
                       num(b.survival)});
        }
    }
    table.summary = {{"max_abs_f_eff_minus_f_exact", dev_eff},
                     {"max_abs_f_unitary_approx_minus_f_exact", dev_unitary},
                     {"max_abs_f_eff_minus_f_unitary_approx", dev_eff_unitary_approx}};
    emit(config, table, out);
    return 0;
}

// ---------------------------------------------------------------------------------------
// Argument parsing

std::optional<std::string> find_config_path(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            return args[i + 1];
        }
        if (args[i].rfind("--config=", 0) == 0) {
            return args[i].substr(9);
        }
    }
    return std::nullopt;
}

void register_options(CLI::App& sub, RunConfig& cfg, bool& print_config, std::string& config_path) {
    sub.add_option_function<std::string>("--n", [&](const std::string& v) { cfg.n = v; },
                                         "Database size N (N1 for plan-scale)");
    sub.add_option_function<std::int64_t>("--k", [&](const std::int64_t& v) { cfg.k = v; },
                                          "Step multiplier k, dt = pi*k + tau");
    sub.add_option_function<std::string>("--tau", [&](const std::string& v) { cfg.tau = v; }, "Offset tau");
    sub.add_option_function<std::string>("--dt", [&](const std::string& v) { cfg.dt = v; },
                                         "Raw step duration, e.g. 3.3 or 1e6pi+0.2");
    sub.add_option_function<double>("--alpha", [&](const double& v) { cfg.alpha = v; },
                                    "Sets dtheta = alpha * x * dt");
    sub.add_option_function<double>("--dtheta", [&](const double& v) { cfg.dtheta = v; },
                                    "Per-step ancilla rotation");
    sub.add_option("--theta0", cfg.theta0, "Initial ancilla angle");
    sub.add_option("--eps", cfg.eps, "Oracle detuning (absolute)");
    sub.add_option_function<std::int64_t>("--steps", [&](const std::int64_t& v) { cfg.steps = v; },
                                          "Number of protocol steps (default n_G)");
    sub.add_option_function<std::string>("--engine", [&](const std::string& v) { cfg.engine = engine_from(v); },
                                         "exact | approx | effective")
        ->check(CLI::IsMember({"exact", "approx", "effective"}));
    sub.add_option_function<std::string>("--grid", [&](const std::string& v) { cfg.grid = Grid::parse(v); },
                                         "lo:hi:count");
    sub.add_option("--stride", cfg.stride, "Keep every stride-th row");
    sub.add_option_function<std::string>("--target-n", [&](const std::string& v) { cfg.target_n = v; },
                                         "Requested database size N_r (plan-scale)");
    sub.add_option("--validity", cfg.validity_fraction, "Plan validity: |k2_raw - k2| < validity * |tau|");
    sub.add_flag("--check", cfg.check, "Run both planned processes and compare");
    sub.add_option("--clip", cfg.clip, "Q ceiling for plotting");
    sub.add_option("--seed", cfg.seed, "Seed for verify targets");
    sub.add_option("--inject-fault", cfg.inject_fault, "Test fixture: none | h_down_sign");
    sub.add_option("--out", cfg.out, "Output CSV path (default: $" + std::string(kOutputDirEnv) + "/<command>.csv, else stdout)");
    sub.add_option("--jobs", cfg.jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
    sub.add_option("--config", config_path, "Replay the configuration embedded in an output file");
    sub.add_flag("--print-config", print_config, "Print the resolved configuration and exit");
}

int dispatch(const RunConfig& config, std::ostream& out) {
    if (config.stride < 1) {
        throw ConfigError("--stride must be >= 1");
    }
    switch (config.mode) {
        case Mode::run:
            return cmd_run(config, out);
        case Mode::sweep_dt:
            return cmd_sweep_dt(config, out);
        case Mode::sweep_eps:
            return cmd_sweep_eps(config, out);
        case Mode::plan_scale:
            return cmd_plan_scale(config, out);
        case Mode::verify:
            return cmd_verify(config, out);
        case Mode::eff_compare:
            return cmd_eff_compare(config, out);
    }
    return static_cast<int>(ExitCode::usage);
}

}  // namespace

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::run:
            return "run";
        case Mode::sweep_dt:
            return "sweep-dt";
        case Mode::sweep_eps:
            return "sweep-eps";
        case Mode::plan_scale:
            return "plan-scale";
        case Mode::verify:
            return "verify";
        case Mode::eff_compare:
            return "eff-compare";
    }
    return "unknown";
}

std::string to_string(EngineChoice engine) {
    switch (engine) {
        case EngineChoice::exact:
            return "exact";
        case EngineChoice::approx:
            return "approx";
        case EngineChoice::effective:
            return "effective";
    }
    return "unknown";
}

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

double parse_scalar(const std::string& raw) {
    std::string text;
    for (char c : raw) {
        if (c != ' ' && c != '*') {
            text += c;
        }
    }
    const auto at = text.find("pi");
    if (at == std::string::npos) {
        return parse_double_strict(text);
    }
    const std::string prefix = text.substr(0, at);
    const std::string suffix = text.substr(at + 2);
    double factor = 1.0;
    if (prefix == "-") {
        factor = -1.0;
    } else if (!prefix.empty() && prefix != "+") {
        factor = parse_double_strict(prefix);
    }
    const double offset = suffix.empty() ? 0.0 : parse_double_strict(suffix);
    return factor * kPi + offset;
}

std::vector<double> Grid::points() const {
    if (count == 1) {
        return {lo};
    }
    std::vector<double> out(static_cast<std::size_t>(count));
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (int i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] = i == count - 1 ? hi : lo + static_cast<double>(i) * step;
    }
    return out;
}

Grid Grid::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) {
        parts.push_back(part);
    }
    if (parts.size() != 3) {
        throw ConfigError("grid must be lo:hi:count, got '" + text + "'");
    }
    Grid g;
    g.lo = parse_scalar(parts[0]);
    g.hi = parse_scalar(parts[1]);
    const std::int64_t count = parse_int_strict(parts[2]);
    if (count < 1 || count > 10000000) {
        throw ConfigError("grid count must be in [1, 1e7]");
    }
    g.count = static_cast<int>(count);
    g.spec = text;
    return g;
}

std::vector<std::pair<std::string, std::string>> RunConfig::content_entries() const {
    return {
        {"command", to_string(mode)},
        {"n", opt_string(n)},
        {"k", opt_string(k)},
        {"tau", opt_string(tau)},
        {"dt", opt_string(dt)},
        {"alpha", opt_string(alpha)},
        {"dtheta", opt_string(dtheta)},
        {"theta0", format_number(theta0)},
        {"eps", format_number(eps)},
        {"steps", opt_string(steps)},
        {"engine", to_string(engine)},
        {"grid", grid ? grid->spec : "none"},
        {"stride", std::to_string(stride)},
        {"target_n", opt_string(target_n)},
        {"validity", format_number(validity_fraction)},
        {"check", check ? "1" : "0"},
        {"clip", format_number(clip)},
        {"seed", std::to_string(seed)},
        {"inject_fault", inject_fault},
    };
}

std::vector<std::pair<std::string, std::string>> RunConfig::all_entries() const {
    auto entries = content_entries();
    entries.emplace_back("out", out.empty() ? "none" : out);
    entries.emplace_back("jobs", std::to_string(jobs));
    return entries;
}

void RunConfig::apply_entries(const std::map<std::string, std::string>& entries) {
    for (const auto& [key, value] : entries) {
        if (key == "command") {
            mode = mode_from(value);
        } else if (key == "n") {
            n = opt_from(value);
        } else if (key == "k") {
            k = value == "none" ? std::nullopt : std::optional<std::int64_t>(parse_int_strict(value));
        } else if (key == "tau") {
            tau = opt_from(value);
        } else if (key == "dt") {
            dt = opt_from(value);
        } else if (key == "alpha") {
            alpha = value == "none" ? std::nullopt : std::optional<double>(parse_double_strict(value));
        } else if (key == "dtheta") {
            dtheta = value == "none" ? std::nullopt : std::optional<double>(parse_double_strict(value));
        } else if (key == "theta0") {
            theta0 = parse_double_strict(value);
        } else if (key == "eps") {
            eps = parse_double_strict(value);
        } else if (key == "steps") {
            steps = value == "none" ? std::nullopt : std::optional<std::int64_t>(parse_int_strict(value));
        } else if (key == "engine") {
            engine = engine_from(value);
        } else if (key == "grid") {
            grid = value == "none" ? std::nullopt : std::optional<Grid>(Grid::parse(value));
        } else if (key == "stride") {
            stride = parse_int_strict(value);
        } else if (key == "target_n") {
            target_n = opt_from(value);
        } else if (key == "validity") {
            validity_fraction = parse_double_strict(value);
        } else if (key == "check") {
            check = value == "1";
        } else if (key == "clip") {
            clip = parse_double_strict(value);
        } else if (key == "seed") {
            seed = static_cast<std::uint64_t>(parse_int_strict(value));
        } else if (key == "inject_fault") {
            inject_fault = value;
        } else {
            throw ConfigError("unknown configuration key '" + key + "'");
        }
    }
}

std::map<std::string, std::string> read_embedded_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read configuration file '" + path + "'");
    }
    std::map<std::string, std::string> entries;
    const std::string marker = "# config.";
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] != '#') {
            break;
        }
        if (line.rfind(marker, 0) != 0) {
            continue;
        }
        const std::string kv = line.substr(marker.size());
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("malformed configuration line '" + line + "'");
        }
        entries[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return entries;
}

SearchParams resolve_params(const RunConfig& config) {
    if (!config.n) {
        throw ParameterError("--n is required");
    }
    const double N = parse_scalar(*config.n);
    if (config.k && config.dt) {
        throw ParameterError("--k/--tau and --dt are mutually exclusive");
    }
    if (config.alpha && config.dtheta) {
        throw ParameterError("--alpha and --dtheta are mutually exclusive");
    }
    StepSpec step;
    if (config.k) {
        step = StepSpec::k_tau(*config.k, config.tau ? parse_scalar(*config.tau) : 0.0);
    } else if (config.dt) {
        if (config.tau) {
            throw ParameterError("--tau needs --k");
        }
        step = StepSpec::raw(parse_scalar(*config.dt));
    } else {
        throw ParameterError("either --k [--tau] or --dt is required");
    }
    // Resolve the step length first so that alpha can be converted to dtheta.
    const SearchParams probe = make_params(N, step, 0.0, config.theta0, config.eps);
    const double dtheta =
        config.alpha ? delta_theta_for_alpha(N, probe.delta_t, *config.alpha) : config.dtheta.value_or(0.0);
    return make_params(N, step, dtheta, config.theta0, config.eps);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Measurement-driven non-unitary continuous-time Grover search"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    RunConfig cfg;
    bool print_config = false;
    std::string config_path;

    struct Entry {
        const char* name;
        const char* help;
    };
    const Entry entries[] = {
        {"run", "Trajectory f, P, d per step"},
        {"sweep-dt", "Distance from unitarity at n_G over a dt grid"},
        {"sweep-eps", "Quality factor over a grid of eps/x"},
        {"plan-scale", "Plan a larger instance with the same step count"},
        {"verify", "Subspace engine against full-space propagation"},
        {"eff-compare", "Exact, effective and unitary-approximation fidelities"},
    };
    std::vector<CLI::App*> subs;
    for (const Entry& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        register_options(*sub, cfg, print_config, config_path);
        subs.push_back(sub);
    }

    try {
        // Embedded configuration first; explicit flags parsed afterwards override it.
        if (const auto path = find_config_path(args)) {
            cfg.apply_entries(read_embedded_config(*path));
        }
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::usage);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::usage);
    }

    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (subs[i]->parsed()) {
            const Mode chosen = mode_from(entries[i].name);
            if (!config_path.empty() && chosen != cfg.mode) {
                err << "error: configuration file is for '" << to_string(cfg.mode) << "'\n";
                return static_cast<int>(ExitCode::usage);
            }
            cfg.mode = chosen;
        }
    }

    if (print_config) {
        for (const auto& [key, value] : cfg.all_entries()) {
            out << key << "=" << value << "\n";
        }
        return 0;
    }

    try {
        return dispatch(cfg, out);
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return static_cast<int>(ExitCode::usage);
}

}  // namespace nugrover::cli
