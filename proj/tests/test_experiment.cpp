// Experiment layer: config parsing and validation (every violation is
// reported, never thrown mid-list), CSV round-trip formatting, and the
// command-line runner's contract (exit codes, artifacts, determinism),
// exercised through real subprocess invocations of the built binary.
#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <bouss/experiment.hpp>
#include <bouss/io.hpp>
#include <json.hpp>

using namespace bouss;
namespace fs = std::filesystem;

namespace {

experiment::ExperimentConfig parse_str(const std::string& text, experiment::Violations& v) {
    const auto doc = nlohmann::ordered_json::parse(text);
    return experiment::parse_config(doc, v);
}

std::vector<std::string> check(const std::string& text) {
    experiment::Violations v;
    const auto cfg = parse_str(text, v);
    const auto more = experiment::validate(cfg);
    auto items = v.items;
    items.insert(items.end(), more.items.begin(), more.items.end());
    return items;
}

bool any_contains(const std::vector<std::string>& items, const std::string& needle) {
    for (const auto& s : items)
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

struct CmdResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

CmdResult run_cli(const std::string& args) {
    const fs::path log = fs::temp_directory_path() / "bouss_cli_test.log";
    const std::string cmd =
        std::string(BOUSS_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    CmdResult res;
    res.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    res.output = ss.str();
    return res;
}

fs::path write_temp_config(const std::string& name, const std::string& text) {
    const fs::path dir = fs::temp_directory_path() / "bouss_exp_tests";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream out(p, std::ios::binary);
    out << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("experiment kind names round-trip") {
    using experiment::Kind;
    for (const auto& info : experiment::kind_table()) {
        const auto k = experiment::kind_from_string(info.name);
        REQUIRE(k.has_value());
        REQUIRE(std::string(experiment::to_string(*k)) == info.name);
    }
    REQUIRE_FALSE(experiment::kind_from_string("no-such-kind").has_value());
}

TEST_CASE("all shipped configuration files parse and validate cleanly") {
    std::size_t count = 0;
    for (const auto& entry : fs::directory_iterator(BOUSS_CONFIG_DIR)) {
        if (entry.path().extension() != ".json") continue;
        ++count;
        INFO(entry.path().filename().string());
        experiment::Violations v;
        const auto doc = nlohmann::ordered_json::parse(slurp(entry.path()));
        const auto cfg = experiment::parse_config(doc, v);
        const auto more = experiment::validate(cfg);
        CHECK(v.empty());
        CHECK(more.empty());
    }
    REQUIRE(count >= 10);
}

TEST_CASE("validation reports every violation with a named rule") {
    SECTION("grid resolution must be a power of two") {
        const auto items = check(R"({"kind":"kernel-validation","grid":{"n":100,"box_pi":20}})");
        REQUIRE(items.size() == 1);
        REQUIRE(any_contains(items, "power of two"));
    }

    SECTION("the box-horizon rule names itself and the offending values") {
        const auto items = check(
            R"({"kind":"nonlinear-decay","grid":{"n":32,"box_pi":8},
                "time":{"dt":0.05,"t_max":999,"store":[1,2]},
                "checks":[{"quantity":"theta","a":0,"b":0,"p":2}],
                "fit_window":{"t1":1,"t2":4}})");
        REQUIRE(any_contains(items, "box-horizon"));
        REQUIRE(any_contains(items, "t_max"));
    }

    SECTION("unknown keys are violations, not silent passes") {
        const auto items = check(R"({"kind":"kernel-validation","bogus":1})");
        REQUIRE(items.size() == 1);
        REQUIRE(any_contains(items, "unknown key"));
        REQUIRE(any_contains(items, "bogus"));
    }

    SECTION("store times must fall inside the simulated range") {
        const auto items = check(
            R"({"kind":"nonlinear-decay","grid":{"n":32,"box_pi":20},
                "time":{"dt":0.05,"t_max":5,"store":[1,2,7]},
                "checks":[{"quantity":"theta","a":0,"b":0,"p":2}],
                "fit_window":{"t1":1,"t2":4}})");
        REQUIRE(any_contains(items, "store"));
    }

    SECTION("fit windows must span half a decade") {
        const auto items = check(
            R"({"kind":"nonlinear-decay","grid":{"n":32,"box_pi":20},
                "time":{"dt":0.05,"t_max":5,"store":[1,2]},
                "checks":[{"quantity":"theta","a":0,"b":0,"p":2}],
                "fit_window":{"t1":1,"t2":2}})");
        REQUIRE(any_contains(items, "window"));
    }

    SECTION("tilde profile variants require vanishing scalar mass") {
        const auto items = check(
            R"({"kind":"profile","grid":{"n":32,"box_pi":20},
                "initial_data":{"theta":{"family":"gaussian","amplitude":1e-3,"sigma":1.0}},
                "time":{"dt":0.05,"t_max":2,"store":[1,2]},
                "profile":{"variant":"Rt1","kappas":[4],"times":[2]}})");
        REQUIRE(any_contains(items, "moment precondition"));
        REQUIRE(any_contains(items, "m0"));
    }

    SECTION("multiple independent violations are all listed") {
        const auto items = check(
            R"({"kind":"nonlinear-decay","grid":{"n":100,"box_pi":8},
                "time":{"dt":0.05,"t_max":999,"store":[1]},
                "checks":[{"quantity":"theta","a":0,"b":0,"p":2}],
                "fit_window":{"t1":1,"t2":4},"bogus":true})");
        REQUIRE(items.size() >= 3);
        REQUIRE(any_contains(items, "power of two"));
        REQUIRE(any_contains(items, "box-horizon"));
        REQUIRE(any_contains(items, "unknown key"));
    }

    SECTION("type mismatches are collected, not fatal") {
        const auto items =
            check(R"({"kind":"kernel-validation","grid":{"n":"many","box_pi":20}})");
        REQUIRE_FALSE(items.empty());
    }
}

TEST_CASE("CSV encoding: shortest round-trip doubles") {
    // (std::strtod, not std::stod: glibc's stod throws on subnormals.)
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, 123456.789, -0.75, 2.0}) {
        const std::string s = io::shortest(v);
        REQUIRE(std::strtod(s.c_str(), nullptr) == v);
    }
    REQUIRE(io::shortest(2.0) == "2");

    io::MeasurementRow row;
    row.t = 0.5;
    row.quantity = "theta";
    row.a = 0;
    row.b = 0;
    row.p = 2.0;
    row.value = 6.954209372404345e-05;
    row.flag = 1;
    REQUIRE(io::csv_line(row) == "0.5,theta,0,0,2,6.954209372404345e-05,1");
}

TEST_CASE("CLI: list-experiments names every kind") {
    const auto res = run_cli("list-experiments");
    REQUIRE(res.exit_code == 0);
    for (const auto& info : experiment::kind_table())
        REQUIRE(res.output.find(info.name) != std::string::npos);
}

TEST_CASE("CLI: validate accepts shipped configs and rejects bad ones with exit 2") {
    const std::string good = std::string(BOUSS_CONFIG_DIR) + "/kernel_validation.json";
    const auto ok = run_cli("validate " + good);
    REQUIRE(ok.exit_code == 0);
    REQUIRE(ok.output.find("ok") != std::string::npos);

    const auto bad_path = write_temp_config("bad.json", R"({
        "kind": "nonlinear-decay",
        "grid": {"n": 100, "box_pi": 8},
        "time": {"dt": 0.05, "t_max": 999, "store": [1]},
        "checks": [{"quantity": "theta", "a": 0, "b": 0, "p": 2}],
        "fit_window": {"t1": 1, "t2": 4},
        "bogus": true
    })");
    const auto bad = run_cli("validate " + bad_path.string());
    REQUIRE(bad.exit_code == 2);
    REQUIRE(bad.output.find("box-horizon") != std::string::npos);
    REQUIRE(bad.output.find("power of two") != std::string::npos);
    REQUIRE(bad.output.find("bogus") != std::string::npos);

    REQUIRE(run_cli("validate /no/such/file.json").exit_code == 2);

    const auto mangled = write_temp_config("mangled.json", "{ not json");
    REQUIRE(run_cli("run " + mangled.string()).exit_code == 2);
}

TEST_CASE("CLI: run produces artifacts, is deterministic, and reports failures") {
    const fs::path dir = fs::temp_directory_path() / "bouss_exp_tests";
    fs::remove_all(dir);
    fs::create_directories(dir);

    const std::string good = std::string(BOUSS_CONFIG_DIR) + "/kernel_validation.json";
    const fs::path out1 = dir / "run1", out2 = dir / "run2";

    const auto r1 = run_cli("run " + good + " --output " + out1.string());
    REQUIRE(r1.exit_code == 0);
    REQUIRE(fs::exists(out1 / "measurements.csv"));
    REQUIRE(fs::exists(out1 / "fits.json"));
    REQUIRE(fs::exists(out1 / "manifest.json"));

    const std::string csv = slurp(out1 / "measurements.csv");
    REQUIRE(csv.rfind("t,quantity,a,b,p,value,flag\n", 0) == 0);

    const auto manifest = nlohmann::json::parse(slurp(out1 / "manifest.json"));
    REQUIRE(manifest.at("kind") == "kernel-validation");
    REQUIRE(manifest.at("pass") == true);
    REQUIRE(manifest.at("config_hash").get<std::string>().size() == 16);
    REQUIRE(manifest.at("versions").contains("fftw"));
    REQUIRE(manifest.at("threads").get<int>() >= 1);

    const auto fits = nlohmann::json::parse(slurp(out1 / "fits.json"));
    REQUIRE(fits.is_array());
    REQUIRE_FALSE(fits.empty());
    for (const auto& f : fits) REQUIRE(f.at("pass") == true);

    // Bitwise-deterministic measurements within one build.
    const auto r2 = run_cli("run " + good + " --output " + out2.string());
    REQUIRE(r2.exit_code == 0);
    REQUIRE(slurp(out1 / "measurements.csv") == slurp(out2 / "measurements.csv"));

    // An unreachable tolerance turns the same run into a measurement failure.
    const auto strict = write_temp_config("strict_kernel.json", R"({
        "kind": "kernel-validation",
        "kernel": {"rel_tol": 1e-30}
    })");
    const auto rf = run_cli("run " + strict.string() + " --output " + (dir / "strict").string());
    REQUIRE(rf.exit_code == 1);

    // A solver blowup is an exit-3 failure, reported rather than swallowed.
    const auto blowup = write_temp_config("blowup.json", R"({
        "kind": "nonlinear-decay",
        "grid": {"n": 8, "box_pi": 8},
        "initial_data": {
            "velocity": {"family": "vortex-blob", "amplitude": 1e8, "sigma": 1.0},
            "theta": {"family": "zero"}
        },
        "time": {"dt": 0.1, "t_max": 9.5, "store": [1, 9]},
        "checks": [{"quantity": "u", "a": 0, "b": 0, "p": 2}],
        "fit_window": {"t1": 1, "t2": 9}
    })");
    const auto rb = run_cli("run " + blowup.string() + " --output " + (dir / "blowup").string());
    REQUIRE(rb.exit_code == 3);
}
