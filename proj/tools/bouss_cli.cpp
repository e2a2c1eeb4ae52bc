// SPDX-License-Identifier: MIT
//
// Experiment runner CLI.
//
//   bouss run <config.json>        execute an experiment, write artifacts
//   bouss validate <config.json>   list every constraint violation
//   bouss list-experiments         show available experiment kinds
//
// Exit codes: 0 = pass, 1 = measurements failed acceptance, 2 = invalid
// config, 3 = solver failure.  The only environment variable consulted is
// BOUSS_NUM_THREADS (FFT thread count).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fftw3.h>

#include "bouss/experiment.hpp"

namespace {

namespace exp = bouss::experiment;

struct LoadedConfig {
    exp::json doc;
    std::string canonical; // whitespace-insensitive, key-sorted dump for hashing
};

bool load_config(const std::string& path, LoadedConfig& out, std::string& error) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        error = "cannot open config file: " + path;
        return false;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    try {
        out.doc = exp::json::parse(text);
        out.canonical = nlohmann::json::parse(text).dump();
    } catch (const std::exception& e) {
        error = std::string("config is not valid JSON: ") + e.what();
        return false;
    }
    if (!out.doc.is_object()) {
        error = "config root must be a JSON object";
        return false;
    }
    return true;
}

void print_fit_line(const exp::json& e) {
    std::ostringstream os;
    os << (e.value("pass", false) ? "[PASS] " : "[FAIL] ") << e.value("check", std::string("?"));
    if (e.contains("slope") && !e["slope"].is_null()) {
        os << "  slope=" << e["slope"].get<double>();
        if (!e["predicted"].is_null()) os << " predicted=" << e["predicted"].get<double>();
        if (!e["r2"].is_null()) os << " r2=" << e["r2"].get<double>();
    } else if (e.contains("value")) {
        os << "  value=" << e["value"].get<double>() << " threshold="
           << e["threshold"].get<double>();
    }
    std::cout << os.str() << "\n";
}

int cmd_run(const std::string& path, const std::string& out_override) {
    LoadedConfig loaded;
    std::string error;
    if (!load_config(path, loaded, error)) {
        std::cerr << "invalid config: " << error << "\n";
        return 2;
    }

    exp::Violations v;
    exp::ExperimentConfig cfg = exp::parse_config(loaded.doc, v);
    if (!out_override.empty()) cfg.output_dir = out_override;
    for (const auto& item : exp::validate(cfg).items) v.add(item);
    if (!v.empty()) {
        std::cerr << "invalid config (" << v.items.size() << " violation"
                  << (v.items.size() == 1 ? "" : "s") << "):\n";
        for (const auto& item : v.items) std::cerr << "  - " << item << "\n";
        return 2;
    }

    try {
        const auto outcome = exp::run(cfg, loaded.canonical);
        for (const auto& e : outcome.fits) print_fit_line(e);
        std::cout << (outcome.pass ? "result: PASS" : "result: FAIL")
                  << "  (artifacts in " << outcome.output_dir << ")\n";
        return outcome.exit_code;
    } catch (const bouss::solver::SolverBlowup& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const bouss::solver::PicardDivergence& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return 3;
    }
}

int cmd_validate(const std::string& path) {
    LoadedConfig loaded;
    std::string error;
    if (!load_config(path, loaded, error)) {
        std::cout << error << "\n";
        return 2;
    }
    exp::Violations v;
    exp::ExperimentConfig cfg = exp::parse_config(loaded.doc, v);
    for (const auto& item : exp::validate(cfg).items) v.add(item);
    if (v.empty()) {
        std::cout << "ok\n";
        return 0;
    }
    for (const auto& item : v.items) std::cout << item << "\n";
    return 2;
}

int cmd_list() {
    for (const auto& k : exp::kind_table())
        std::cout << k.name << "\n    " << k.summary << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    if (const char* env = std::getenv("BOUSS_NUM_THREADS")) {
        const int n = std::atoi(env);
        if (n > 1 && fftw_init_threads()) fftw_plan_with_nthreads(n);
    }

    CLI::App app{"Spectral solver experiment runner"};
    app.require_subcommand(1);

    std::string run_path, validate_path, run_output;
    auto* run = app.add_subcommand("run", "execute an experiment config");
    run->add_option("config", run_path, "path to a JSON experiment config")->required();
    run->add_option("--output", run_output, "override the config's output directory");
    auto* validate = app.add_subcommand("validate", "list config constraint violations");
    validate->add_option("config", validate_path, "path to a JSON experiment config")->required();
    app.add_subcommand("list-experiments", "show available experiment kinds");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(run_path, run_output);
    if (validate->parsed()) return cmd_validate(validate_path);
    return cmd_list();
}
