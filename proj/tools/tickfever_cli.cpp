// Command-line front end for the bird-tick spirochaetosis model.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "tickfever/errors.hpp"
#include "tickfever/experiments.hpp"

namespace tf = tickfever;
using nlohmann::json;

namespace {

struct Overrides {
    std::optional<std::string> out;
    std::optional<std::size_t> steps;
    std::optional<double> t1;
    std::optional<std::string> variant;
    std::optional<std::string> mode;
    bool allow_unbounded = false;
};

tf::ScenarioConfig resolve(const std::string& target) {
    if (auto c = tf::find_builtin(target)) return *c;
    if (std::filesystem::exists(target)) return tf::load_config(target);
    throw tf::ConfigError("'" + target + "' is neither a built-in scenario nor a config file (see `list`)");
}

void apply(tf::ScenarioConfig& c, const Overrides& o) {
    if (o.out) c.output_dir = *o.out;
    if (o.t1) {
        c.t1 = *o.t1;
        if (!o.steps) c.n_steps = static_cast<std::size_t>(std::ceil((c.t1 - c.t0) / 0.01 - 1e-9));
    }
    if (o.steps) c.n_steps = *o.steps;
    if (o.variant) c.variant = *o.variant == "paper" ? tf::ModelVariant::PaperExact : tf::ModelVariant::Consistent;
    if (o.mode) {
        c.params.recruitment_mode =
            *o.mode == "proportional" ? tf::RecruitmentMode::Proportional : tf::RecruitmentMode::ConstantInflow;
    }
    if (o.allow_unbounded) c.allow_unbounded_controls = true;
    c.validate();
}

json complex_list(const std::vector<std::complex<double>>& values) {
    json out = json::array();
    for (const auto& z : values) out.push_back({z.real(), z.imag()});
    return out;
}

json equilibrium(const tf::EquilibriumReport& e) {
    json point = json::object();
    for (int i = 0; i < tf::kNumCompartments; ++i) {
        point[std::string(tf::kCompartmentNames[static_cast<std::size_t>(i)])] = e.point[i];
    }
    return {{"kind", e.kind == tf::EquilibriumKind::DiseaseFree ? "disease_free" : "endemic"},
            {"point", point},
            {"residual_norm", e.residual_norm},
            {"eigenvalues", complex_list(e.eigenvalues)},
            {"locally_stable", e.locally_stable}};
}

void print_run(const tf::RunReport& r) {
    for (const auto& m : r.members) {
        std::cout << m.label << " -> " << m.csv_path.string();
        if (m.objective) std::cout << "  J=" << tf::format_double(*m.objective);
        if (m.converged) std::cout << (*m.converged ? "  converged" : "  NOT converged") << " in " << *m.iterations;
        std::cout << '\n';
    }
    for (const auto& n : r.notes) std::cout << "note: " << n << '\n';
    std::cout << "report: " << r.report_path.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bird-tick spirochaetosis model and its optimal control"};
    app.require_subcommand(1);

    Overrides o;
    std::string out_dir;
    std::size_t steps = 0;
    double t1 = 0.0;
    std::string variant;
    std::string mode;
    auto* out_opt = app.add_option("--out", out_dir, "Output directory (default: current directory)");
    auto* steps_opt = app.add_option("--steps", steps, "Number of RK4 steps")->check(CLI::PositiveNumber);
    auto* t1_opt = app.add_option("--t1", t1, "Final time; steps default to ceil(t1 / 0.01)");
    auto* variant_opt =
        app.add_option("--variant", variant, "Controlled-system form")->check(CLI::IsMember({"paper", "consistent"}));
    auto* mode_opt =
        app.add_option("--mode", mode, "Recruitment mode")->check(CLI::IsMember({"constant", "proportional"}));
    app.add_flag("--allow-unbounded-controls", o.allow_unbounded, "Run control values above their caps literally");
    app.fallthrough();

    std::string target;
    auto* run = app.add_subcommand("run", "Run a built-in scenario or a config file");
    run->add_option("scenario", target, "Scenario name or config path")->required();
    auto* list = app.add_subcommand("list", "List built-in scenarios");
    std::string config_path;
    auto* r0_cmd = app.add_subcommand("r0", "Reproduction numbers");
    r0_cmd->add_option("config", config_path, "Config file or scenario name");
    auto* eq_cmd = app.add_subcommand("equilibria", "Disease-free and endemic equilibria with spectra");
    eq_cmd->add_option("config", config_path, "Config file or scenario name");
    auto* opt_cmd = app.add_subcommand("optimal", "Optimal control by forward-backward sweep");
    opt_cmd->add_option("config", config_path, "Config file or scenario name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (*out_opt) o.out = out_dir;
    if (*steps_opt) o.steps = steps;
    if (*t1_opt) o.t1 = t1;
    if (*variant_opt) o.variant = variant;
    if (*mode_opt) o.mode = mode;

    try {
        if (*list) {
            for (const auto& c : tf::builtin_scenarios()) {
                std::cout << c.name << "\t" << tf::to_string(c.kind) << "\t" << c.description << '\n';
            }
            return 0;
        }
        if (*run) {
            auto c = resolve(target);
            apply(c, o);
            print_run(tf::run_scenario(c));
            return 0;
        }
        if (*opt_cmd) {
            auto c = config_path.empty() ? *tf::find_builtin("optimal") : resolve(config_path);
            c.kind = tf::ScenarioKind::Optimal;
            apply(c, o);
            print_run(tf::run_scenario(c));
            return 0;
        }
        tf::ScenarioConfig c = config_path.empty() ? tf::ScenarioConfig{} : resolve(config_path);
        apply(c, o);
        if (*r0_cmd) {
            const auto r = tf::r0(c.params);
            json j = {{"R_B", r.R_B}, {"R_T", r.R_T}, {"R_TB", r.R_TB}, {"r0_spectral", r.r0_spectral}};
            j["r0_formula"] = r.r0_formula ? json(*r.r0_formula) : json();
            j["agreement"] = r.agreement ? json(*r.agreement) : json();
            std::cout << j.dump(2) << '\n';
            return 0;
        }
        json j;
        j["disease_free"] = equilibrium(tf::disease_free_report(c.params));
        const auto s = tf::dfe_stability_condition(c.params);
        j["dfe_stability"] = {{"spectral_stable", s.spectral_stable},
                              {"inequality_stable", s.inequality_stable},
                              {"eigenvalues", complex_list(s.eigenvalues)}};
        try {
            j["endemic"] = equilibrium(tf::find_endemic_equilibrium(c.params));
        } catch (const tf::NumericalFailure& e) {
            j["endemic"] = {{"error", e.what()}};
        }
        std::cout << j.dump(2) << '\n';
        return 0;
    } catch (const tf::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const tf::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
}
