#include "tickfever/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <system_error>

#include "json.hpp"

#include "tickfever/errors.hpp"

namespace tickfever {

namespace fs = std::filesystem;

namespace {

using Accessor = std::function<double&(ScenarioConfig&)>;

struct NumericKey {
    std::string name;
    Accessor access;
    bool sweepable;
};

const std::vector<NumericKey>& numeric_keys() {
    static const std::vector<NumericKey> keys = [] {
        std::vector<NumericKey> k;
        auto param = [&](const char* name, double ModelParams::*field) {
            k.push_back({name, [field](ScenarioConfig& c) -> double& { return c.params.*field; }, true});
        };
        param("tau_B", &ModelParams::tau_B);
        param("tau_T", &ModelParams::tau_T);
        param("beta_1", &ModelParams::beta_1);
        param("beta_2", &ModelParams::beta_2);
        param("beta_3", &ModelParams::beta_3);
        param("theta", &ModelParams::theta);
        param("lambda", &ModelParams::lambda);
        param("alpha_B", &ModelParams::alpha_B);
        param("alpha_T", &ModelParams::alpha_T);
        param("d", &ModelParams::d);
        param("mu", &ModelParams::mu);
        param("sigma", &ModelParams::sigma);
        param("delta", &ModelParams::delta);
        param("N_B0", &ModelParams::N_B0);
        param("N_T0", &ModelParams::N_T0);
        for (int i = 0; i < 3; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            const std::string n = std::to_string(i + 1);
            k.push_back({"u" + n, [idx](ScenarioConfig& c) -> double& { return c.controls[idx]; }, true});
            k.push_back({"u" + n + "_bound", [idx](ScenarioConfig& c) -> double& { return c.bounds[idx]; }, true});
        }
        for (int i = 0; i < kNumCompartments; ++i) {
            k.push_back({std::string(kCompartmentNames[static_cast<std::size_t>(i)]) + "_init",
                         [i](ScenarioConfig& c) -> double& { return c.initial[i]; }, false});
        }
        auto weight = [&](const char* name, double CostWeights::*field) {
            k.push_back({name, [field](ScenarioConfig& c) -> double& { return c.weights.*field; }, false});
        };
        weight("C1", &CostWeights::C1);
        weight("C2", &CostWeights::C2);
        weight("C3", &CostWeights::C3);
        weight("D1", &CostWeights::D1);
        weight("D2", &CostWeights::D2);
        weight("D3", &CostWeights::D3);
        k.push_back({"t0", [](ScenarioConfig& c) -> double& { return c.t0; }, false});
        k.push_back({"t1", [](ScenarioConfig& c) -> double& { return c.t1; }, false});
        k.push_back({"relaxation", [](ScenarioConfig& c) -> double& { return c.sweep_options.relaxation; }, false});
        k.push_back({"tolerance", [](ScenarioConfig& c) -> double& { return c.sweep_options.tolerance; }, false});
        return k;
    }();
    return keys;
}

// Keys that are not plain doubles.
const std::vector<std::string> kOtherKeys = {"name",     "kind",      "variant",      "recruitment_mode",
                                             "steps",    "max_iter",  "sweep_key",    "sweep_values",
                                             "allow_unbounded_controls"};

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += ", ";
        out += s;
    }
    return out;
}

const NumericKey* find_numeric(const std::string& key) {
    for (const auto& k : numeric_keys()) {
        if (k.name == key) return &k;
    }
    return nullptr;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) return std::nullopt;
    double value = 0.0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    if (*begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return value;
}

std::optional<std::size_t> parse_count(const std::string& text) {
    const auto v = parse_double(text);
    if (!v || *v < 0.0 || *v != std::floor(*v) || *v > 1e12) return std::nullopt;
    return static_cast<std::size_t>(*v);
}

ControlVector::Array effective_bounds(const ScenarioConfig& c) {
    if (!c.allow_unbounded_controls) return c.bounds;
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {inf, inf, inf};
}

nlohmann::json state_json(const StateVector& x) {
    nlohmann::json j = nlohmann::json::object();
    for (int i = 0; i < kNumCompartments; ++i) j[std::string(kCompartmentNames[static_cast<std::size_t>(i)])] = x[i];
    return j;
}

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

nlohmann::json equilibrium_json(const EquilibriumReport& e) {
    nlohmann::json ev = nlohmann::json::array();
    for (const auto& z : e.eigenvalues) ev.push_back({z.real(), z.imag()});
    return {{"kind", e.kind == EquilibriumKind::DiseaseFree ? "disease_free" : "endemic"},
            {"point", state_json(e.point)},
            {"residual_norm", e.residual_norm},
            {"eigenvalues", ev},
            {"locally_stable", e.locally_stable},
            {"newton_iterations", e.iterations}};
}

// Shortest round-trip form, for labels and file names.
std::string short_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

std::string member_file_stem(const std::string& stem, const std::optional<std::string>& key, double value) {
    if (!key) return stem;
    return stem + "_" + *key + "_" + short_double(value);
}

void ensure_writable(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError("cannot create output directory " + dir.string() + ": " + ec.message());
    const fs::path probe = dir / ".tickfever_write_probe";
    {
        std::ofstream out(probe, std::ios::binary);
        if (!out || !(out << "ok") || (out.close(), !out)) {
            throw InputError("output directory " + dir.string() + " is not writable");
        }
    }
    fs::remove(probe, ec);
}

MemberResult run_member(const ScenarioConfig& base, const std::optional<std::string>& key, double value,
                        std::vector<std::string>& notes) {
    ScenarioConfig c = base;
    MemberResult m;
    m.sweep_key = key;
    m.sweep_value = value;
    m.applied_value = value;
    if (key) {
        set_numeric_key(c, *key, value);
        m.label = *key + "=" + short_double(value);
    } else {
        m.label = c.name;
    }
    c.params.validate();
    const TimeGrid grid = c.grid();
    const auto bounds = effective_bounds(c);

    switch (c.kind) {
        case ScenarioKind::Base: {
            const ModelParams p = c.params;
            m.states = integrate([&p](double, const Vec7& x) { return detail::base_rhs(x, p); }, c.initial, grid);
            break;
        }
        case ScenarioKind::Controlled: {
            const ControlVector u = ControlVector::clamped(c.controls, bounds);
            for (std::size_t i = 0; i < 3; ++i) {
                if (u.values()[i] != c.controls[i]) {
                    notes.push_back(m.label + ": u" + std::to_string(i + 1) + " = " + short_double(c.controls[i]) +
                                    " clamped to " + short_double(u.values()[i]));
                }
            }
            if (key && key->size() == 2 && (*key)[0] == 'u') {
                m.applied_value = u.values()[static_cast<std::size_t>((*key)[1] - '1')];
            }
            m.controls = constant_controls(grid, u);
            m.states = simulate_controlled(c.initial, *m.controls, c.params, c.variant);
            m.objective = objective(m.states, *m.controls, c.weights);
            break;
        }
        case ScenarioKind::Optimal: {
            SweepResult r = forward_backward_sweep(c.initial, grid, c.weights, c.params, c.variant, bounds,
                                                   c.sweep_options);
            m.states = std::move(r.state_traj);
            m.controls = std::move(r.control_traj);
            m.adjoints = std::move(r.adjoint_traj);
            m.objective = r.objective_value;
            m.converged = r.converged;
            m.iterations = r.iterations;
            if (!r.converged) notes.push_back(m.label + ": sweep did not converge within max_iter");
            break;
        }
    }

    for (std::size_t k = 0; k < m.states.samples.size(); ++k) {
        if (m.states.samples[k].minCoeff() < -1e-9) {
            m.negative_sample = k;
            notes.push_back(m.label + ": compartment below -1e-9 at sample " + std::to_string(k));
            break;
        }
    }
    return m;
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::Base:
            return "base";
        case ScenarioKind::Controlled:
            return "controlled";
        case ScenarioKind::Optimal:
            return "optimal";
    }
    return "base";
}

std::vector<std::string> config_keys() {
    std::vector<std::string> out;
    for (const auto& k : numeric_keys()) out.push_back(k.name);
    out.insert(out.end(), kOtherKeys.begin(), kOtherKeys.end());
    return out;
}

std::vector<std::string> sweep_keys() {
    std::vector<std::string> out;
    for (const auto& k : numeric_keys()) {
        if (k.sweepable) out.push_back(k.name);
    }
    return out;
}

void set_numeric_key(ScenarioConfig& config, const std::string& key, double value) {
    const NumericKey* k = find_numeric(key);
    if (k == nullptr) throw InputError("unknown key '" + key + "'; valid keys: " + join(sweep_keys()));
    if (!std::isfinite(value)) throw InputError("value for '" + key + "' must be finite");
    k->access(config) = value;
}

void ScenarioConfig::validate() const {
    (void)grid();
    params.validate();
    check_finite_state(initial);
    for (int i = 0; i < kNumCompartments; ++i) {
        if (initial[i] < 0.0) {
            throw InputError("initial " + std::string(kCompartmentNames[static_cast<std::size_t>(i)]) +
                             " must be >= 0");
        }
    }
    for (std::size_t i = 0; i < 3; ++i) {
        if (std::isnan(bounds[i]) || bounds[i] < 0.0) {
            throw InputError("u" + std::to_string(i + 1) + "_bound must be >= 0");
        }
    }
    const auto valid = sweep_keys();
    for (const auto& s : sweeps) {
        if (std::find(valid.begin(), valid.end(), s.key) == valid.end()) {
            throw InputError("invalid sweep key '" + s.key + "'; valid keys: " + join(valid));
        }
        if (s.values.empty()) throw InputError("sweep over '" + s.key + "' has no values");
        for (double v : s.values) {
            if (!std::isfinite(v)) throw InputError("sweep over '" + s.key + "' has a non-finite value");
        }
    }
}

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig c;
    std::istringstream in(text);
    std::string line;
    std::map<std::string, int> seen;
    std::optional<std::string> sweep_key;
    std::optional<std::vector<double>> sweep_values;
    int line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(line);
        if (body.empty() || body[0] == '#') continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (key.empty()) throw ConfigError(where + "missing key before '='");
        if (auto [it, inserted] = seen.emplace(key, line_no); !inserted) {
            throw ConfigError(where + "duplicate key '" + key + "' (first set on line " +
                              std::to_string(it->second) + ")");
        }

        if (const NumericKey* k = find_numeric(key)) {
            const auto v = parse_double(value);
            if (!v || !std::isfinite(*v)) throw ConfigError(where + "key '" + key + "' expects a finite number");
            k->access(c) = *v;
        } else if (key == "name") {
            if (value.empty()) throw ConfigError(where + "key 'name' expects a non-empty string");
            c.name = value;
        } else if (key == "kind") {
            if (value == "base") c.kind = ScenarioKind::Base;
            else if (value == "controlled") c.kind = ScenarioKind::Controlled;
            else if (value == "optimal") c.kind = ScenarioKind::Optimal;
            else throw ConfigError(where + "key 'kind' expects base|controlled|optimal");
        } else if (key == "variant") {
            if (value == "paper") c.variant = ModelVariant::PaperExact;
            else if (value == "consistent") c.variant = ModelVariant::Consistent;
            else throw ConfigError(where + "key 'variant' expects paper|consistent");
        } else if (key == "recruitment_mode") {
            if (value == "constant") c.params.recruitment_mode = RecruitmentMode::ConstantInflow;
            else if (value == "proportional") c.params.recruitment_mode = RecruitmentMode::Proportional;
            else throw ConfigError(where + "key 'recruitment_mode' expects constant|proportional");
        } else if (key == "steps") {
            const auto n = parse_count(value);
            if (!n) throw ConfigError(where + "key 'steps' expects a non-negative integer");
            c.n_steps = *n;
        } else if (key == "max_iter") {
            const auto n = parse_count(value);
            if (!n) throw ConfigError(where + "key 'max_iter' expects a non-negative integer");
            c.sweep_options.max_iterations = *n;
        } else if (key == "allow_unbounded_controls") {
            if (value == "true") c.allow_unbounded_controls = true;
            else if (value == "false") c.allow_unbounded_controls = false;
            else throw ConfigError(where + "key 'allow_unbounded_controls' expects true|false");
        } else if (key == "sweep_key") {
            sweep_key = value;
        } else if (key == "sweep_values") {
            std::vector<double> values;
            std::istringstream items(value);
            std::string item;
            while (std::getline(items, item, ',')) {
                const auto v = parse_double(item);
                if (!v || !std::isfinite(*v)) {
                    throw ConfigError(where + "key 'sweep_values' expects a comma-separated list of numbers");
                }
                values.push_back(*v);
            }
            sweep_values = std::move(values);
        } else {
            throw ConfigError(where + "unknown key '" + key + "'");
        }
    }

    if (sweep_key.has_value() != sweep_values.has_value()) {
        throw ConfigError("sweep_key and sweep_values must be given together");
    }
    if (sweep_key) c.sweeps.push_back({*sweep_key, *sweep_values});
    try {
        c.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
    return c;
}

ScenarioConfig load_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    ScenarioConfig c = parse_config(buf.str());
    if (c.name == "custom") c.name = path.stem().string();
    return c;
}

std::vector<ScenarioConfig> builtin_scenarios() {
    std::vector<ScenarioConfig> out;
    auto make = [](std::string name, std::string description, ScenarioKind kind, double t1) {
        ScenarioConfig c;
        c.name = std::move(name);
        c.description = std::move(description);
        c.kind = kind;
        c.t1 = t1;
        c.n_steps = static_cast<std::size_t>(std::lround(t1 / 0.01));
        if (kind == ScenarioKind::Controlled) c.variant = ModelVariant::PaperExact;
        return c;
    };
    const std::vector<double> deltas = {0.08, 0.16, 0.24, 0.32, 0.4};

    out.push_back(make("fig2", "base model, default parameters, no controls", ScenarioKind::Base, 40.0));

    auto c = make("fig3a", "infectious birds as alpha_B varies", ScenarioKind::Base, 40.0);
    c.sweeps = {{"alpha_B", {0.1, 0.2, 0.3, 0.4, 0.5}}};
    out.push_back(c);

    c = make("fig3b", "infectious birds as the bird death rate d varies", ScenarioKind::Base, 40.0);
    c.sweeps = {{"d", {0.5, 1.0, 1.5}}};
    out.push_back(c);

    c = make("fig3c", "infectious ticks as alpha_T and delta vary", ScenarioKind::Base, 40.0);
    c.sweeps = {{"alpha_T", {0.1, 0.2, 0.3}}, {"delta", deltas}};
    out.push_back(c);

    c = make("fig3d", "exposed ticks as delta varies", ScenarioKind::Base, 40.0);
    c.sweeps = {{"delta", deltas}};
    out.push_back(c);

    out.push_back(make("fig4a", "control model with u = (0.02, 0.01, 0.05)", ScenarioKind::Controlled, 40.0));

    c = make("fig4b", "susceptible birds as u2 varies", ScenarioKind::Controlled, 40.0);
    c.sweeps = {{"u2", {0.2, 0.6, 1.0}}};
    out.push_back(c);

    c = make("fig4c", "exposed birds as u1 varies (values above m1 are clamped)", ScenarioKind::Controlled, 40.0);
    c.sweeps = {{"u1", {0.02, 5.0, 20.0, 25.0}}};
    out.push_back(c);

    c = make("fig4d", "exposed birds as u2 varies (values above m2 are clamped)", ScenarioKind::Controlled, 40.0);
    c.sweeps = {{"u2", {0.3, 0.6, 0.9, 1.0, 1.2}}};
    out.push_back(c);

    c = make("fig5a", "recovered birds as u2 varies", ScenarioKind::Controlled, 50.0);
    c.sweeps = {{"u2", {0.08, 0.48, 0.88}}};
    out.push_back(c);

    c = make("fig5b", "recovered birds without control as sigma varies", ScenarioKind::Base, 50.0);
    c.sweeps = {{"sigma", {1.0, 1.5, 2.0, 2.5, 3.0}}};
    out.push_back(c);

    c = make("optimal", "three-control optimum by forward-backward sweep", ScenarioKind::Optimal, 40.0);
    c.weights = {1.0, 1.0, 1.0, 10.0, 10.0, 10.0};
    c.bounds = {0.9, 0.9, 0.9};
    out.push_back(c);
    return out;
}

std::optional<ScenarioConfig> find_builtin(const std::string& name) {
    for (auto& c : builtin_scenarios()) {
        if (c.name == name) return c;
    }
    return std::nullopt;
}

RunReport run_scenario(const ScenarioConfig& config) {
    config.validate();
    ensure_writable(config.output_dir);
    const auto started = std::chrono::steady_clock::now();

    RunReport report;
    report.scenario_id = config.name;
    report.r0 = r0(config.params);
    try {
        report.equilibria.push_back(disease_free_report(config.params));
    } catch (const NumericalFailure& e) {
        report.notes.push_back(std::string("disease-free report unavailable: ") + e.what());
    }
    try {
        report.equilibria.push_back(find_endemic_equilibrium(config.params));
    } catch (const NumericalFailure& e) {
        report.notes.push_back(std::string("equilibrium search failed: ") + e.what());
    }

    std::vector<std::pair<std::optional<std::string>, double>> plan;
    if (config.sweeps.empty()) {
        plan.emplace_back(std::nullopt, 0.0);
    } else {
        for (const auto& s : config.sweeps) {
            for (double v : s.values) plan.emplace_back(s.key, v);
        }
    }

    for (const auto& [key, value] : plan) {
        MemberResult m = run_member(config, key, value, report.notes);
        m.csv_path = config.output_dir / (member_file_stem(config.name, key, value) + ".csv");
        write_trajectory_csv(m.csv_path, m.states, m.controls ? &*m.controls : nullptr,
                             m.adjoints ? &*m.adjoints : nullptr);
        report.members.push_back(std::move(m));
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    nlohmann::json j;
    j["scenario"] = config.name;
    j["kind"] = std::string(to_string(config.kind));
    j["variant"] = std::string(to_string(config.variant));
    j["recruitment_mode"] = std::string(to_string(config.params.recruitment_mode));
    j["t1"] = config.t1;
    j["steps"] = config.n_steps;
    j["r0"] = {{"R_B", report.r0.R_B},
               {"R_T", report.r0.R_T},
               {"R_TB", report.r0.R_TB},
               {"r0_formula", optional_json(report.r0.r0_formula)},
               {"r0_spectral", report.r0.r0_spectral},
               {"agreement", optional_json(report.r0.agreement)}};
    j["equilibria"] = nlohmann::json::array();
    for (const auto& e : report.equilibria) j["equilibria"].push_back(equilibrium_json(e));
    j["members"] = nlohmann::json::array();
    for (const auto& m : report.members) {
        nlohmann::json mj = {{"label", m.label},
                             {"csv", m.csv_path.filename().string()},
                             {"terminal_state", state_json(m.states.back())},
                             {"objective", optional_json(m.objective)}};
        if (m.sweep_key) {
            mj["sweep_key"] = *m.sweep_key;
            mj["sweep_value"] = m.sweep_value;
            mj["applied_value"] = m.applied_value;
        }
        if (m.converged) mj["converged"] = *m.converged;
        if (m.iterations) mj["iterations"] = *m.iterations;
        if (m.negative_sample) mj["negative_sample"] = *m.negative_sample;
        j["members"].push_back(mj);
    }
    j["notes"] = report.notes;
    j["wall_seconds"] = report.wall_seconds;

    report.report_path = config.output_dir / (config.name + "_report.json");
    std::ofstream out(report.report_path, std::ios::binary);
    out << j.dump(2) << '\n';
    if (!out) throw InputError("failed to write report " + report.report_path.string());
    return report;
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

std::string csv_header(bool with_controls, bool with_adjoints) {
    std::string h = "t";
    for (const auto& n : kCompartmentNames) {
        h += ',';
        h += n;
    }
    if (with_controls) h += ",u1,u2,u3";
    if (with_adjoints) {
        for (int i = 1; i <= kNumCompartments; ++i) h += ",l" + std::to_string(i);
    }
    return h;
}

void write_trajectory_csv(const fs::path& path, const StateTrajectory& states, const ControlTrajectory* controls,
                          const AdjointTrajectory* adjoints) {
    const std::size_t n = states.samples.size();
    if ((controls != nullptr && controls->samples.size() != n) || (adjoints != nullptr && adjoints->samples.size() != n)) {
        throw InputError("trajectory columns have mismatched lengths");
    }
    std::string out = csv_header(controls != nullptr, adjoints != nullptr);
    out += '\n';
    for (std::size_t k = 0; k < n; ++k) {
        out += format_double(states.grid.at(k));
        for (int i = 0; i < kNumCompartments; ++i) {
            out += ',';
            out += format_double(states.samples[k][i]);
        }
        if (controls != nullptr) {
            for (int i = 0; i < 3; ++i) {
                out += ',';
                out += format_double(controls->samples[k][i]);
            }
        }
        if (adjoints != nullptr) {
            for (int i = 0; i < kNumCompartments; ++i) {
                out += ',';
                out += format_double(adjoints->samples[k][i]);
            }
        }
        out += '\n';
    }
    std::ofstream file(path, std::ios::binary);
    file << out;
    if (!file) throw InputError("failed to write " + path.string());
}

CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) return table;
    {
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) table.header.push_back(cell);
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            const auto v = parse_double(cell);
            if (!v) throw InputError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
            row.push_back(*v);
        }
        if (row.size() != table.header.size()) {
            throw InputError(path.string() + ":" + std::to_string(line_no) + ": wrong column count");
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace tickfever
