#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "tickfever/errors.hpp"
#include "tickfever/experiments.hpp"

using namespace tickfever;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("tickfever_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string error_of(const std::string& text) {
    try {
        (void)parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

RunReport run_builtin(const std::string& name, const fs::path& dir) {
    auto c = find_builtin(name);
    REQUIRE(c.has_value());
    c->output_dir = dir;
    return run_scenario(*c);
}

int cli(const std::string& args) {
    const std::string cmd = std::string(TICKFEVER_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config parsing") {
    SUBCASE("empty file keeps the defaults") {
        const auto c = parse_config("");
        const ModelParams d;
        CHECK(c.params.beta_1 == d.beta_1);
        CHECK(c.params.tau_B == d.tau_B);
        CHECK(c.params.delta == d.delta);
        CHECK(c.initial == default_initial_state());
        CHECK(c.kind == ScenarioKind::Base);
        CHECK(c.sweeps.empty());
    }
    SUBCASE("numeric and enumerated keys") {
        const auto c = parse_config(
            "# comment\n"
            "beta_2 = 0.05\n"
            "alpha_B = 0.3\n"
            "u2_bound = 0.5\n"
            "I_T_init = 12\n"
            "D3 = 7\n"
            "t1 = 25\n"
            "steps = 2500\n"
            "variant = paper\n"
            "recruitment_mode = proportional\n"
            "kind = controlled\n"
            "sweep_key = u2\n"
            "sweep_values = 0.1, 0.2,0.3\n");
        CHECK(c.params.beta_2 == 0.05);
        CHECK(c.params.alpha_B == 0.3);
        CHECK(c.bounds[1] == 0.5);
        CHECK(c.initial[kIT] == 12.0);
        CHECK(c.weights.D3 == 7.0);
        CHECK(c.t1 == 25.0);
        CHECK(c.n_steps == 2500);
        CHECK(c.variant == ModelVariant::PaperExact);
        CHECK(c.params.recruitment_mode == RecruitmentMode::Proportional);
        CHECK(c.kind == ScenarioKind::Controlled);
        REQUIRE(c.sweeps.size() == 1);
        CHECK(c.sweeps[0].key == "u2");
        CHECK(c.sweeps[0].values == std::vector<double>{0.1, 0.2, 0.3});
    }
    SUBCASE("unknown key is named") {
        const auto msg = error_of("beta_9 = 1\n");
        CHECK(msg.find("beta_9") != std::string::npos);
        CHECK(msg.find("line 1") != std::string::npos);
    }
    SUBCASE("parse error carries the line number") {
        CHECK(error_of("beta_1 = 1e-4\n\nthis line has no equals\n").find("line 3") != std::string::npos);
    }
    SUBCASE("type mismatch names the key") {
        const auto msg = error_of("sigma = fast\n");
        CHECK(msg.find("sigma") != std::string::npos);
        CHECK(error_of("steps = 1.5\n").find("steps") != std::string::npos);
        CHECK(error_of("variant = both\n").find("variant") != std::string::npos);
    }
    SUBCASE("duplicates and invalid values") {
        CHECK(error_of("d = 0.1\nd = 0.2\n").find("duplicate") != std::string::npos);
        CHECK_FALSE(error_of("steps = 0\n").empty());
        CHECK_FALSE(error_of("mu = -1\n").empty());
        CHECK(error_of("sweep_key = gamma\nsweep_values = 1\n").find("alpha_B") != std::string::npos);
        CHECK_FALSE(error_of("sweep_key = d\n").empty());
    }
    SUBCASE("file loading") {
        const auto dir = scratch("load");
        std::ofstream(dir / "mine.cfg") << "beta_2 = 0.05\n";
        const auto c = load_config(dir / "mine.cfg");
        CHECK(c.params.beta_2 == 0.05);
        CHECK(c.name == "mine");
        CHECK_THROWS_AS((void)load_config(dir / "absent.cfg"), ConfigError);
    }
}

TEST_CASE("every config key round-trips through set_numeric_key or the parser") {
    for (const auto& key : sweep_keys()) {
        ScenarioConfig c;
        CHECK_NOTHROW(set_numeric_key(c, key, 0.5));
    }
    ScenarioConfig c;
    try {
        set_numeric_key(c, "gamma", 1.0);
        FAIL("expected rejection");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("tau_B") != std::string::npos);
    }
}

TEST_CASE("built-in scenarios") {
    const auto all = builtin_scenarios();
    std::vector<std::string> names;
    for (const auto& c : all) {
        names.push_back(c.name);
        CHECK_NOTHROW(c.validate());
        CHECK(c.grid().dt() == doctest::Approx(0.01));
    }
    CHECK(names == std::vector<std::string>{"fig2", "fig3a", "fig3b", "fig3c", "fig3d", "fig4a", "fig4b", "fig4c",
                                            "fig4d", "fig5a", "fig5b", "optimal"});
    CHECK(find_builtin("fig5a")->t1 == 50.0);
    CHECK(find_builtin("fig4c")->sweeps[0].values == std::vector<double>{0.02, 5, 20, 25});
    CHECK(find_builtin("fig3c")->sweeps.size() == 2);
    const auto opt = *find_builtin("optimal");
    CHECK(opt.kind == ScenarioKind::Optimal);
    CHECK(opt.bounds == ControlVector::Array{0.9, 0.9, 0.9});
    CHECK(opt.weights.D1 == 10.0);
    CHECK_FALSE(find_builtin("fig9").has_value());
}

TEST_CASE("run_scenario validation happens before any computation") {
    ScenarioConfig c;
    c.output_dir = scratch("invalid");
    c.n_steps = 0;
    CHECK_THROWS_AS((void)run_scenario(c), InputError);

    c = ScenarioConfig{};
    c.output_dir = scratch("badsweep");
    c.sweeps = {{"gamma", {1.0}}};
    try {
        (void)run_scenario(c);
        FAIL("expected rejection");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("alpha_B") != std::string::npos);
    }
    CHECK(fs::is_empty(c.output_dir));

    c = ScenarioConfig{};
    const auto blocker = scratch("blocked") / "file";
    std::ofstream(blocker) << "x";
    c.output_dir = blocker / "sub";
    CHECK_THROWS_AS((void)run_scenario(c), InputError);
}

TEST_CASE("outputs: headers, round trip, determinism") {
    const auto dir = scratch("outputs");
    const auto r = run_builtin("fig4a", dir);
    REQUIRE(r.members.size() == 1);
    const auto& m = r.members[0];
    CHECK(m.csv_path == dir / "fig4a.csv");
    CHECK(fs::exists(dir / "fig4a_report.json"));

    const std::string text = slurp(m.csv_path);
    CHECK(text.rfind("t,S_B,E_B,I_B,R,S_T,E_T,I_T,u1,u2,u3\n", 0) == 0);
    CHECK(text.find('\r') == std::string::npos);

    const auto table = read_csv(m.csv_path);
    REQUIRE(table.rows.size() == m.states.samples.size());
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        CHECK(table.rows[k][0] == m.states.grid.at(k));
        for (int i = 0; i < 7; ++i) CHECK(table.rows[k][static_cast<std::size_t>(i + 1)] == m.states.samples[k][i]);
    }

    const auto again = run_builtin("fig4a", scratch("outputs2"));
    CHECK(slurp(again.members[0].csv_path) == text);

    CHECK(csv_header(false, false) == "t,S_B,E_B,I_B,R,S_T,E_T,I_T");
    CHECK(csv_header(true, true) == "t,S_B,E_B,I_B,R,S_T,E_T,I_T,u1,u2,u3,l1,l2,l3,l4,l5,l6,l7");
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("control sweeps beyond their caps are clamped unless allowed") {
    auto c = *find_builtin("fig4c");
    c.output_dir = scratch("clamp");
    auto r = run_scenario(c);
    REQUIRE(r.members.size() == 4);
    CHECK(r.members[1].applied_value == 1.0);
    CHECK(r.members[3].applied_value == 1.0);
    CHECK(r.members[0].applied_value == 0.02);
    CHECK(r.notes.size() >= 3);
    CHECK(fs::exists(c.output_dir / "fig4c_u1_25.csv"));

    c.allow_unbounded_controls = true;
    r = run_scenario(c);
    CHECK(r.members[3].applied_value == 25.0);
}

TEST_CASE("figure sweeps show the described trends") {
    SUBCASE("peak infectious birds rises with alpha_B") {
        const auto r = run_builtin("fig3a", scratch("fig3a"));
        double prev = -1.0;
        for (const auto& m : r.members) {
            double peak = 0.0;
            for (const auto& x : m.states.samples) peak = std::max(peak, x[kIB]);
            CHECK(peak > prev);
            prev = peak;
        }
    }
    SUBCASE("larger bird death rate lowers infectious birds after the transient") {
        const auto r = run_builtin("fig3b", scratch("fig3b"));
        REQUIRE(r.members.size() == 3);
        const auto& g = r.members[0].states.grid;
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (g.at(k) <= 1.0) continue;
            CHECK(r.members[1].states.samples[k][kIB] < r.members[0].states.samples[k][kIB]);
            CHECK(r.members[2].states.samples[k][kIB] < r.members[1].states.samples[k][kIB]);
        }
    }
    SUBCASE("larger tick death rate lowers the exposed-tick tail") {
        const auto r = run_builtin("fig3d", scratch("fig3d"));
        REQUIRE(r.members.size() == 5);
        for (std::size_t i = 1; i < r.members.size(); ++i) {
            CHECK(r.members[i].states.back()[kET] < r.members[i - 1].states.back()[kET]);
        }
    }
    SUBCASE("recovered birds increase without control for every sigma") {
        const auto r = run_builtin("fig5b", scratch("fig5b"));
        REQUIRE(r.members.size() == 5);
        for (const auto& m : r.members) {
            std::size_t rises = 0;
            for (std::size_t k = 1; k < m.states.samples.size(); ++k) {
                if (m.states.samples[k][kR] > m.states.samples[k - 1][kR]) ++rises;
            }
            MESSAGE(m.label << ": R increasing on " << rises << " of " << m.states.samples.size() - 1 << " steps");
            CHECK(rises == m.states.samples.size() - 1);
        }
    }
}

TEST_CASE("optimal scenario writes adjoint columns") {
    const auto r = run_builtin("optimal", scratch("optimal"));
    REQUIRE(r.members.size() == 1);
    CHECK(r.members[0].converged.value_or(false));
    CHECK(r.members[0].objective.has_value());
    const auto table = read_csv(r.members[0].csv_path);
    CHECK(table.header.size() == 18);
    CHECK(table.header.back() == "l7");
}

TEST_CASE("command-line exit codes") {
    const auto dir = scratch("cli");
    CHECK(cli("list") == 0);
    CHECK(cli("r0") == 0);
    CHECK(cli("run fig2 --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "fig2.csv"));
    CHECK(cli("run no_such_scenario") == 2);
    std::ofstream(dir / "bad.cfg") << "beta_9 = 1\n";
    CHECK(cli("run " + (dir / "bad.cfg").string()) == 2);
    CHECK(cli("run fig2 --steps 0") == 2);
    CHECK(cli("run fig2 --variant sideways") == 2);
    CHECK(cli("run fig2 --mode proportional --t1 200 --out " + dir.string()) == 3);
    CHECK(cli("run fig2 --t1 5 --out " + dir.string()) == 0);
    CHECK(read_csv(dir / "fig2.csv").rows.size() == 501);
}
