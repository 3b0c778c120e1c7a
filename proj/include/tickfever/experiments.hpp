#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tickfever/analysis.hpp"
#include "tickfever/integrator.hpp"
#include "tickfever/model.hpp"
#include "tickfever/optimal_control.hpp"

namespace tickfever {

enum class ScenarioKind { Base, Controlled, Optimal };

/// One-at-a-time variation of a single key over a list of values.
struct ParameterSweep {
    std::string key;
    std::vector<double> values;
};

struct ScenarioConfig {
    std::string name = "custom";
    std::string description;
    ScenarioKind kind = ScenarioKind::Base;
    ModelParams params;
    StateVector initial = default_initial_state();
    double t0 = 0.0;
    double t1 = 40.0;
    std::size_t n_steps = 4000;
    ModelVariant variant = ModelVariant::Consistent;
    /// Constant control values for Controlled runs.
    ControlVector::Array controls{0.02, 0.01, 0.05};
    ControlVector::Array bounds{1.0, 1.0, 1.0};
    CostWeights weights{1.0, 1.0, 1.0, 10.0, 10.0, 10.0};
    SweepOptions sweep_options;
    std::vector<ParameterSweep> sweeps;
    /// Run control values literally, ignoring the caps m_i.
    bool allow_unbounded_controls = false;
    std::filesystem::path output_dir = ".";

    /// Throws InputError on an invalid grid, parameters, or sweep key.
    void validate() const;
    [[nodiscard]] TimeGrid grid() const { return {t0, t1, n_steps}; }
};

struct MemberResult {
    std::string label;
    std::optional<std::string> sweep_key;
    double sweep_value = 0.0;
    /// Value actually used after clamping to the control cap (equals sweep_value otherwise).
    double applied_value = 0.0;
    std::filesystem::path csv_path;
    StateTrajectory states;
    std::optional<ControlTrajectory> controls;
    std::optional<AdjointTrajectory> adjoints;
    std::optional<double> objective;
    std::optional<bool> converged;
    std::optional<std::size_t> iterations;
    /// First sample index with a compartment below -1e-9, if any.
    std::optional<std::size_t> negative_sample;
};

struct RunReport {
    std::string scenario_id;
    R0Report r0;
    std::vector<EquilibriumReport> equilibria;
    std::vector<MemberResult> members;
    std::vector<std::string> notes;
    std::filesystem::path report_path;
    double wall_seconds = 0.0;
};

/// Keys accepted by load_config and by sweeps.
[[nodiscard]] std::vector<std::string> config_keys();
[[nodiscard]] std::vector<std::string> sweep_keys();

/// Sets a numeric key (a ModelParams field, a control value/bound, a cost
/// weight, an initial compartment, ...). Throws InputError listing the valid
/// keys when the key is unknown.
void set_numeric_key(ScenarioConfig& config, const std::string& key, double value);

/// Parses a flat "key = value" file. Lines starting with '#' are comments.
/// Missing keys keep the ModelParams defaults. Throws ConfigError with a line number.
[[nodiscard]] ScenarioConfig load_config(const std::filesystem::path& path);
[[nodiscard]] ScenarioConfig parse_config(const std::string& text);

[[nodiscard]] std::vector<ScenarioConfig> builtin_scenarios();
[[nodiscard]] std::optional<ScenarioConfig> find_builtin(const std::string& name);

/// Integrates every sweep member, writes one CSV per trajectory and a JSON
/// report. Output directory writability is checked before any computation.
[[nodiscard]] RunReport run_scenario(const ScenarioConfig& config);

/// CSV column header: t,S_B,...,I_T[,u1,u2,u3][,l1..l7].
[[nodiscard]] std::string csv_header(bool with_controls, bool with_adjoints);

void write_trajectory_csv(const std::filesystem::path& path, const StateTrajectory& states,
                          const ControlTrajectory* controls = nullptr, const AdjointTrajectory* adjoints = nullptr);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

[[nodiscard]] CsvTable read_csv(const std::filesystem::path& path);

/// 17 significant digits, locale independent; round-trips exactly.
[[nodiscard]] std::string format_double(double value);

[[nodiscard]] std::string_view to_string(ScenarioKind kind);

}  // namespace tickfever
