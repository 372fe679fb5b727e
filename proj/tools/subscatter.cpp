// Scenario runner: parses a config, dispatches to the library and writes
// CSV/JSON/SVG artifacts. Exit codes: 0 ok, 1 validation failure, 2 config
// error, 3 numeric guard violation.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "subscatter/parallel.hpp"
#include "subscatter/runner.hpp"

using namespace subscatter;

int main(int argc, char** argv) {
    CLI::App app{"subscatter: transmission/reflection subprocess decomposition of 1D "
                 "scattering, characteristic times, and double-slit diagnostics"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string formats;
    std::size_t threads = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "scenario config file (sections or JSON)");
        cmd->add_option("--out", out_dir, "output directory override");
        cmd->add_option("--format", formats, "comma list of csv,json,svg");
        cmd->add_option("--threads", threads, "worker count (default: all cores)");
    };

    for (const char* name : {"stationary", "packet", "times", "scan", "doubleslit",
                             "validate"})
        add_common(app.add_subcommand(name));

    CLI11_PARSE(app, argc, argv);
    const std::string mode = app.get_subcommands().front()->get_name();

    try {
        if (threads > 0) set_thread_count(threads);
        Scenario sc;
        if (!config_path.empty()) {
            sc = load_scenario(config_path);
        } else if (mode != "validate") {
            std::fprintf(stderr, "error: --config is required for mode %s\n", mode.c_str());
            return 2;
        }
        sc.mode = parse_mode(mode);
        if (!out_dir.empty()) sc.out_dir = out_dir;
        if (!formats.empty()) {
            sc.formats.clear();
            std::string f;
            std::istringstream fs(formats);
            while (std::getline(fs, f, ','))
                if (!f.empty()) sc.formats.insert(f);
        }
        const RunResult res = run_scenario(sc);
        for (const auto& f : res.files) std::fprintf(stderr, "wrote %s\n", f.c_str());
        return res.exit_code;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
