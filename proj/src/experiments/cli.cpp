#include "biharm/experiments/cli.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "biharm/experiments/experiments.hpp"

namespace biharm::experiments {

namespace {

struct Options {
    std::string config_path;
    std::string out_dir;
    bool csv = false;
    bool timing = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> family;
    std::optional<int> n;
};

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error("cannot write '" + path.string() + "'");
    }
    f << text;
}

int execute(const std::string& command, const Options& o, std::ostream& out, std::ostream& err)
{
    Json config = Json::object();
    if (!o.config_path.empty()) {
        config = load_config_file(o.config_path);
    }

    RunOptions ropts;
    ropts.seed = o.seed;

    const std::vector<std::string> names =
        command == "all" ? experiment_names() : std::vector<std::string>{command};

    std::vector<RunReport> reports;
    for (const auto& name : names) {
        Json section = section_of(config, name);
        if (name == "ansatz") {
            if (o.family) {
                section["family"] = *o.family;
            }
            if (o.n) {
                section["n"] = *o.n;
            }
        }
        const auto t0 = std::chrono::steady_clock::now();
        reports.push_back(run_experiment(name, section, ropts));
        if (o.timing) {
            const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
            err << "wall_time_seconds " << name << " " << dt.count() << "\n";
        }
    }

    Json doc;
    if (command == "all") {
        doc["schema_version"] = kSchemaVersion;
        doc["experiment"] = "all";
        doc["status"] = exit_code(reports) == 0 ? "pass" : "fail";
        doc["reports"] = Json::array();
        for (const auto& r : reports) {
            doc["reports"].push_back(r.to_json());
        }
    } else {
        doc = reports.front().to_json();
    }
    const std::string text = doc.dump(2) + "\n";
    out << text;

    if (!o.out_dir.empty() || o.csv) {
        const std::filesystem::path dir = o.out_dir.empty() ? "." : o.out_dir;
        std::filesystem::create_directories(dir);
        if (!o.out_dir.empty()) {
            write_file(dir / (command + ".json"), text);
        }
        if (o.csv) {
            for (const auto& r : reports) {
                if (r.csv.empty()) {
                    continue;
                }
                std::ofstream f(dir / (r.experiment + ".csv"), std::ios::binary);
                if (!f) {
                    throw Error("cannot write CSV into '" + dir.string() + "'");
                }
                write_csv(f, r.csv);
            }
        }
    }
    return exit_code(reports);
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Biharmonicity checks for identity maps under conformal changes of metric",
                 "biharm"};
    app.require_subcommand(1);

    Options o;
    std::uint64_t seed = 0;
    int n = 0;
    std::string family;
    app.add_option("--config", o.config_path, "JSON config file");
    app.add_option("--out", o.out_dir, "directory for report and CSV files");
    app.add_flag("--csv", o.csv, "write CSV tables (into --out, default the current directory)");
    auto* seed_opt = app.add_option("--seed", seed, "seed for randomized presets");
    app.add_flag("--timing", o.timing, "print wall time per experiment on stderr");

    std::vector<std::string> commands = experiment_names();
    commands.push_back("all");
    CLI::Option* family_opt = nullptr;
    CLI::Option* n_opt = nullptr;
    for (const auto& name : commands) {
        auto* sc = app.add_subcommand(name, "run the " + name + " experiment");
        if (name == "all") {
            sc->description("run every experiment");
        }
        if (name == "ansatz") {
            family_opt = sc->add_option("--family", family, "ex1 or ex2");
            n_opt = sc->add_option("--n", n, "dimension");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitConfigError;
    }

    if (*seed_opt) {
        o.seed = seed;
    }
    if (family_opt && *family_opt) {
        o.family = family;
    }
    if (n_opt && *n_opt) {
        o.n = n;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        return execute(command, o, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
}

} // namespace biharm::experiments
