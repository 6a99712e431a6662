#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "ghostgrover/error.hpp"
#include "ghostgrover_presets.hpp"

namespace ghostgrover::cli {

const std::map<std::string, std::string>& preset_texts() { return generated::kPresets; }

ExperimentConfig preset_config(const std::string& name) {
    const auto& presets = preset_texts();
    const auto it = presets.find(name);
    if (it == presets.end()) {
        std::string known;
        for (const auto& [k, v] : presets) known += (known.empty() ? "" : "|") + k;
        throw UsageError("unknown figure preset '" + name + "' (expected " + known + ")");
    }
    return parse_config_text(it->second, "preset " + name);
}

namespace {

struct Leaf {
    CLI::App* app = nullptr;
    std::map<std::string, std::string> values;  // param name -> raw flag text
    std::map<std::string, CLI::Option*> options;
};

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string utc_timestamp(std::chrono::system_clock::time_point t) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::ostringstream ss;
    ss.imbue(std::locale::classic());
    ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return ss.str();
}

int fail(std::ostream& err, int code, const std::string& message) {
    err << "ghostgrover: error: " << message << '\n';
    return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum ghost imaging as Grover search: masks, states, reconstructions and noise simulation",
                 "ghostgrover"};
    app.set_version_flag("--version", kToolVersion);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    bool quiet = false;
    bool print_config = false;
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed");
    auto* threads_opt = app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--config", config_path, "JSON experiment config (flags override it)");
    app.add_option("--out-dir", out_dir, "output directory (default: $GHOSTGROVER_OUT_DIR or .)");
    app.add_flag("--quiet", quiet, "suppress progress messages");
    app.add_flag("--print-config", print_config, "print the resolved config as JSON and exit");
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::map<std::string, Leaf> leaves;
    auto add_leaf = [&](CLI::App* parent, const std::string& name, const std::string& command, const std::string& help) {
        Leaf& leaf = leaves[command];
        leaf.app = parent->add_subcommand(name, help);
        leaf.app->fallthrough();
        for (const auto& spec : command_params(command)) {
            if (command == "figures" && spec.name == "preset") continue;
            std::string flag = spec.name;
            std::replace(flag.begin(), flag.end(), '_', '-');
            leaf.options[spec.name] = leaf.app->add_option("--" + flag, leaf.values[spec.name], spec.help);
        }
        return leaf.app;
    };
    auto* masks = app.add_subcommand("masks", "Walsh-Hadamard mask export");
    masks->require_subcommand(1);
    masks->fallthrough();
    add_leaf(masks, "export", "masks export", "write every mask as a PGM plus index.json");
    auto* state = app.add_subcommand("state", "Schmidt-state diagnostics");
    state->require_subcommand(1);
    state->fallthrough();
    add_leaf(state, "info", "state info", "print Schmidt number, effective side and norm");
    auto* grover = app.add_subcommand("grover", "Grover search on the idler state");
    grover->require_subcommand(1);
    grover->fallthrough();
    add_leaf(grover, "run", "grover run", "iterate D O from lambda and write pixel probabilities");
    add_leaf(&app, "reconstruct", "reconstruct", "ghost-imaging reconstruction and its three-part decomposition");
    add_leaf(&app, "sweep-overlap", "sweep-overlap", "solution/non-solution overlap over database sizes");
    add_leaf(&app, "simulate-counts", "simulate-counts", "Poisson coincidence counts from a probability CSV");
    auto* figures = add_leaf(&app, "figures", "figures", "run a pinned figure preset");
    figures->add_option("preset", leaves["figures"].values["preset"], "fig1f|fig1g|fig2c-f|fig2g|fig2h|fig4-sim|fig5-sim");
    leaves["figures"].options["preset"] = figures->get_option("preset");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion& e) {
        out << kToolVersion << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        return fail(err, kUsage, e.what());
    }

    try {
        std::string command;
        for (const auto& [name, leaf] : leaves) {
            if (leaf.app->parsed()) command = name;
        }

        ExperimentConfig config;
        if (!config_path.empty()) {
            config = parse_config_text(read_text_file(config_path), config_path);
            if (!command.empty() && command != config.command) {
                throw UsageError("config is for '" + config.command + "' but the command line asks for '" + command + "'");
            }
            command = config.command;
        } else if (command.empty()) {
            err << app.help();
            return fail(err, kUsage, "no command given");
        } else if (command == "figures" && leaves["figures"].options["preset"]->count() > 0) {
            config = preset_config(leaves["figures"].values["preset"]);
        } else {
            config = default_config(command);
        }

        const auto& leaf = leaves.at(command);
        for (const auto& spec : command_params(command)) {
            const auto it = leaf.options.find(spec.name);
            if (it != leaf.options.end() && it->second->count() > 0) {
                config.params[spec.name] = parse_flag_value(spec, leaf.values.at(spec.name));
            }
        }
        if (seed_opt->count() > 0) config.seed = seed;
        if (threads_opt->count() > 0) config.threads = threads;

        if (print_config) {
            out << serialize_config(config);
            return kOk;
        }

        if (out_dir.empty()) {
            const char* env = std::getenv("GHOSTGROVER_OUT_DIR");
            out_dir = env && *env ? env : ".";
        }
        RunContext ctx(out_dir, quiet, out, err);
        const auto started = std::chrono::system_clock::now();
        const auto t0 = std::chrono::steady_clock::now();
        execute(config, ctx);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        json files = json::array();
        for (const auto& f : ctx.files()) files.push_back({{"path", f.path}, {"bytes", f.bytes}, {"sha256", f.sha256}});
        const json manifest{{"tool", "ghostgrover"},
                            {"version", kToolVersion},
                            {"config", config_to_json(config)},
                            {"seeds", json::array({config.seed})},
                            {"started_utc", utc_timestamp(started)},
                            {"wall_clock_seconds", wall},
                            {"files", files}};
        ctx.write_file("manifest.json", manifest.dump(2) + "\n");
        return kOk;
    } catch (const UsageError& e) {
        return fail(err, kUsage, e.what());
    } catch (const InvalidArgument& e) {
        return fail(err, kUsage, e.what());
    } catch (const IoError& e) {
        return fail(err, kIo, e.what());
    } catch (const ParseError& e) {
        return fail(err, kIo, e.what());
    } catch (const ResourceError& e) {
        return fail(err, kResource, e.what());
    } catch (const std::exception& e) {
        return fail(err, kFailure, e.what());
    }
}

}  // namespace ghostgrover::cli
