// Command-line front end. Builds a JSON config from --config and flags, runs
// it through the C API and writes the report (and artifacts under --out).

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qns/qns.h"

namespace {

using nlohmann::json;

struct Flags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::string out_dir;
    std::optional<double> max_k;
    std::string window;
    std::optional<int> n0;
    std::optional<int> m;
    std::string variant;
    std::string set;
    std::optional<double> k;
    std::optional<double> c;
    std::string kind;
    std::optional<double> scale;
    std::string function;
    bool compact = false;
};

bool write_file(std::filesystem::path const& p, char const* data, std::size_t size)
{
    std::ofstream os(p, std::ios::binary);
    os.write(data, static_cast<std::streamsize>(size));
    return static_cast<bool>(os);
}

int fail(std::string const& msg)
{
    std::cerr << "qns-cli: " << msg << '\n';
    return 2;
}

int run(std::string const& command, Flags const& f)
{
    json cfg = json::object();
    if (!f.config_path.empty()) {
        std::ifstream is(f.config_path);
        if (!is) {
            return fail("cannot open config " + f.config_path);
        }
        try {
            cfg = json::parse(is);
        } catch (json::exception const& e) {
            return fail("config " + f.config_path + " is not valid JSON: " + e.what());
        }
        if (!cfg.is_object()) {
            return fail("config must be a JSON object");
        }
    }
    if (f.seed) {
        cfg["seed"] = *f.seed;
    }
    if (f.workers) {
        cfg["workers"] = *f.workers;
    }
    if (f.max_k) {
        cfg["max_K"] = *f.max_k;
    }
    if (!f.window.empty()) {
        auto comma = f.window.find(',');
        if (comma == std::string::npos) {
            return fail("--window expects lo,hi");
        }
        cfg["window"] = {f.window.substr(0, comma), f.window.substr(comma + 1)};
    }
    if (f.n0) {
        cfg["N0"] = *f.n0;
    }
    if (f.m) {
        cfg["M"] = *f.m;
    }
    if (!f.variant.empty()) {
        cfg["variant"] = f.variant;
    }
    if (!f.set.empty()) {
        cfg[command == "constants" ? "set" : "D"] = f.set;
    }
    if (f.k) {
        cfg["K"] = *f.k;
    }
    if (f.c) {
        cfg[command == "counterexample" ? "c" : "C"] = *f.c;
    }
    if (!f.kind.empty()) {
        cfg["kind"] = f.kind;
    }
    if (f.scale) {
        cfg["scale"] = *f.scale;
    }
    if (!f.function.empty()) {
        cfg["function"] = f.function;
    }

    qns_result* res = nullptr;
    if (qns_run(command.c_str(), cfg.dump().c_str(), &res) != QNS_OK) {
        return fail(std::string("internal error: ") + qns_last_error());
    }
    int code = qns_result_exit_code(res);
    char* report = nullptr;
    qns_result_report(res, f.compact ? -1 : 2, &report);
    std::string text = report ? std::string(report) + "\n" : "{}\n";
    qns_string_free(report);

    if (!f.out_dir.empty()) {
        std::error_code ec;
        std::filesystem::path dir(f.out_dir);
        std::filesystem::create_directories(dir, ec);
        if (ec) {
            qns_result_free(res);
            return fail("cannot create " + f.out_dir + ": " + ec.message());
        }
        bool ok = write_file(dir / "report.json", text.data(), text.size());
        for (std::size_t i = 0; ok && i < qns_result_artifact_count(res); ++i) {
            std::size_t size = 0;
            char const* data = qns_result_artifact_data(res, i, &size);
            ok = write_file(dir / qns_result_artifact_name(res, i), data, size);
        }
        if (!ok) {
            qns_result_free(res);
            return fail("cannot write into " + f.out_dir);
        }
    }
    std::cout << text;
    qns_result_free(res);
    return code;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Toolkit for quasinearly subharmonic functions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(qns_version()));
    Flags f;

    struct Sub {
        char const* name;
        char const* help;
    };
    Sub const subs[] = {
        {"analyze-set", "Classify a radius set (favorable for all open sets / bounded domains)"},
        {"check-qns", "Estimate or check the QNS constant of a field over ball probes"},
        {"counterexample", "Build and certify the chain-of-balls counterexample"},
        {"constants", "Lens constant and C <-> K conversions"},
        {"analyze-f", "Admissibility of a scale function f"},
        {"phi", "Evaluate a phi-functional on a similarity image"},
    };
    for (auto const& s : subs) {
        auto* sc = app.add_subcommand(s.name, s.help);
        sc->add_option("--config", f.config_path, "JSON config file")->check(CLI::ExistingFile);
        sc->add_option("--seed", f.seed, "Master seed (u64)");
        sc->add_option("--workers", f.workers, "Worker threads")->check(CLI::Range(1, 1024));
        sc->add_option("--out", f.out_dir, "Directory for report.json and artifacts");
        sc->add_option("--max-K", f.max_k, "Fail (exit 1) when the estimated K exceeds this");
        sc->add_option("--window", f.window, "Observation window lo,hi");
        sc->add_flag("--compact", f.compact, "Single-line JSON output");
        std::string name = s.name;
        if (name == "counterexample") {
            sc->add_option("--N0", f.n0, "N0 > 2");
            sc->add_option("--M", f.m, "Number of balls");
            sc->add_option("--variant", f.variant, "gaps or f1")->check(CLI::IsMember({"gaps", "f1"}));
            sc->add_option("--c", f.c, "f1 slope c >= 1");
            sc->add_option("--set", f.set, "Marked set D for the f1 variant");
        }
        if (name == "constants") {
            sc->add_option("--set", f.set, "unit-square, unit-ball, unit-ball-3d or two-ball");
            sc->add_option("--K", f.k, "Convert K to C");
            sc->add_option("--C", f.c, "Convert C to K");
        }
        if (name == "phi") {
            sc->add_option("--set", f.set, "Region D (unit-square or unit-ball)");
            sc->add_option("--kind", f.kind, "boundary_H1, perimeter or isoperimetric_deficit");
            sc->add_option("--scale", f.scale, "Similarity scale k");
        }
        if (name == "analyze-f") {
            sc->add_option("--function", f.function, "linear, psi or f1");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (CLI::CallForHelp const& e) {
        return app.exit(e);
    } catch (CLI::CallForVersion const& e) {
        return app.exit(e);
    } catch (CLI::ParseError const& e) {
        app.exit(e);
        return 2;
    }
    return run(app.get_subcommands().front()->get_name(), f);
}
