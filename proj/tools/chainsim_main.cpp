// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <chainsim/chainsim.hpp>

namespace fs = std::filesystem;

namespace {

int cmd_run(const std::string& script, std::optional<std::uint64_t> seed,
            std::optional<std::string> profile, bool interactive, const std::string& trace_path,
            const std::string& out_dir)
{
    chainsim::scenario::RunnerOptions options;
    options.seed_override = seed;
    if (profile)
        options.profile_override = profile;
    options.interactive = interactive;
    options.output_dir = out_dir;

    auto result = chainsim::scenario::run_scenario(script, options);
    if (result.exit_code == 2) {
        std::cerr << "error: cannot parse scenario " << script << "\n";
        return 2;
    }

    if (!trace_path.empty()) {
        std::ofstream out(trace_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write trace to " << trace_path << "\n";
            return 2;
        }
        out << result.trace.export_bytes();
    }

    std::size_t assertions = 0;
    for (const auto& ev : result.trace.events)
        if (ev.kind == "assertion")
            ++assertions;
    std::cout << result.trace.name << ": " << (result.exit_code == 0 ? "PASS" : "FAIL") << " ("
              << result.trace.events.size() << " events, " << assertions << " assertions)\n";
    return result.exit_code;
}

int cmd_list(const std::string& dir)
{
    if (!fs::is_directory(dir)) {
        std::cerr << "error: no scenario directory at " << dir << "\n";
        return 2;
    }
    std::vector<fs::path> scripts;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            scripts.push_back(entry.path());
    std::sort(scripts.begin(), scripts.end());
    for (const auto& path : scripts) {
        std::ifstream in(path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception&) {
            continue;
        }
        if (!j.contains("steps"))
            continue;
        std::cout << path.filename().string() << "  " << j.value("name", std::string("?"))
                  << "  [" << j.value("profile", std::string("ethereum-like")) << ", "
                  << j.at("steps").size() << " steps]\n";
    }
    return 0;
}

int cmd_verify(const std::string& trace_path)
{
    std::ifstream in(trace_path);
    if (!in) {
        std::cerr << "error: cannot open " << trace_path << "\n";
        return 2;
    }
    nlohmann::json trace;
    try {
        in >> trace;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: bad JSON: " << e.what() << "\n";
        return 2;
    }
    auto result = chainsim::scenario::verify_trace(trace);
    if (result.ok()) {
        std::cout << trace_path << ": trace invariants hold\n";
        return 0;
    }
    for (const auto& p : result.problems)
        std::cout << "violation: " << p << "\n";
    return 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"chainsim — deterministic blockchain simulator and pattern scenario runner"};
    app.require_subcommand(1);

    std::string script;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> profile;
    bool interactive = false;
    std::string trace_path;
    std::string out_dir = "scenario-out";

    auto* run = app.add_subcommand("run", "run a scenario script");
    run->add_option("script", script, "path to the scenario JSON")->required();
    run->add_option("--seed", seed, "override the script seed");
    run->add_option("--profile", profile, "profile name or profile JSON path");
    run->add_flag("--interactive", interactive, "prompt before submitting dapp transactions");
    run->add_option("--trace", trace_path, "write the JSON trace here");
    run->add_option("--out-dir", out_dir, "directory for files the scenario writes");

    std::string dir = "scenarios";
    auto* list = app.add_subcommand("list-scenarios", "list bundled scenario scripts");
    list->add_option("--dir", dir, "scenario directory");

    std::string trace_file;
    auto* verify = app.add_subcommand("verify-trace", "re-check invariants of a written trace");
    verify->add_option("trace", trace_file, "trace JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2; // usage errors exit 2
    }

    try {
        if (run->parsed())
            return cmd_run(script, seed, profile, interactive, trace_path, out_dir);
        if (list->parsed())
            return cmd_list(dir);
        if (verify->parsed())
            return cmd_verify(trace_file);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
