#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <system_error>

#include "cli.hpp"

namespace ghostgrover::cli {

namespace {

using K = ParamKind;

std::vector<ParamSpec> state_params() {
    return {
        {"m", K::integer, 8, "grid side (power of two)"},
        {"profile", K::text, "uniform", "uniform|gaussian"},
        {"n", K::integer, nullptr, "uniform block side (default: m)"},
        {"waist", K::real, nullptr, "gaussian waist in pixels"},
        {"target_k", K::real, nullptr, "calibrate the gaussian waist to this Schmidt number"},
        {"reference_m", K::integer, nullptr, "grid side at which target_k is calibrated (waist scales with m)"},
        {"placement", K::text, "centered", "centered|origin"},
    };
}

std::vector<ParamSpec> with(std::vector<ParamSpec> base, std::vector<ParamSpec> extra) {
    base.insert(base.end(), extra.begin(), extra.end());
    return base;
}

const std::map<std::string, std::vector<ParamSpec>>& tables() {
    static const std::map<std::string, std::vector<ParamSpec>> t = {
        {"masks export",
         {
             {"m", K::integer, 8, "grid side (power of two)"},
             {"ordering", K::text, "natural", "natural|sequency"},
             {"kind", K::text, "h", "h (Walsh masks) or q (superposition masks)"},
             {"screen", K::integer, nullptr, "rendered side in pixels (default: m)"},
             {"out", K::text, "masks", "output subdirectory"},
         }},
        {"state info", state_params()},
        {"grover run", with(state_params(),
                            {
                                {"object", K::text, "builtin:center", "builtin:<name> or a file path"},
                                {"iterations", K::text, "1", "iteration count or 'auto'"},
                                {"out", K::text, "probs.csv", "probability CSV"},
                            })},
        {"reconstruct", with(state_params(),
                             {
                                 {"object", K::text, "builtin:two-points", "builtin:<name> or a file path"},
                                 {"convention", K::text, "paper", "paper|physical"},
                                 {"ordering", K::text, "natural", "natural|sequency"},
                                 {"support_threshold", K::real, 0.05, "support cutoff as a fraction of max lambda"},
                                 {"out_prefix", K::text, "recon", "prefix for the output files"},
                             })},
        {"sweep-overlap",
         {
             {"m_list", K::integer_list, json::array({8, 16, 32}), "grid sides"},
             {"n_list", K::integer_list, nullptr, "uniform block sides (default: 1..max m)"},
             {"waist_list", K::real_list, nullptr, "gaussian waists"},
             {"profile", K::text, "uniform", "uniform|gaussian"},
             {"placement", K::text, "centered", "centered|origin"},
             {"convention", K::text, "paper", "paper|physical"},
             {"out", K::text, "heatmap.csv", "heatmap CSV"},
         }},
        {"simulate-counts",
         {
             {"probs", K::text, nullptr, "probability CSV with a p_j column"},
             {"pair_rate", K::real, 1.0e5, "true coincidence rate at the brightest mask (1/s)"},
             {"singles_a", K::real, 0.0, "detector A singles rate (1/s)"},
             {"singles_b", K::real, 0.0, "detector B singles rate (1/s)"},
             {"gate", K::real, 3e-9, "coincidence window (s)"},
             {"integration", K::real, 2.0, "dwell per mask (s)"},
             {"subtract", K::boolean, true, "subtract estimated accidentals"},
             {"out", K::text, "counts.csv", "counts CSV"},
         }},
        {"figures",
         {
             {"preset", K::text, nullptr, "fig1f|fig1g|fig2c-f|fig2g|fig2h|fig4-sim|fig5-sim"},
             {"m_list", K::integer_list, nullptr, "grid sides"},
             {"n_list", K::integer_list, nullptr, "uniform block sides"},
             {"waist_list", K::real_list, nullptr, "gaussian waists"},
             {"objects", K::text_list, nullptr, "objects (builtin:<name>, path, or center-of-database)"},
             {"profile", K::text, nullptr, "uniform|gaussian"},
             {"placement", K::text, "centered", "centered|origin"},
             {"waist", K::real, nullptr, "gaussian waist in pixels"},
             {"target_k", K::real, nullptr, "calibrate the gaussian waist to this Schmidt number"},
             {"reference_m", K::integer, nullptr, "grid side at which target_k is calibrated"},
             {"convention", K::text, "paper", "paper|physical"},
             {"support_threshold", K::real, 0.05, "support cutoff as a fraction of max lambda"},
             {"budget", K::real, nullptr, "expected total true coincidences (sets the pair rate)"},
             {"pair_rate", K::real, 1.0e5, "true coincidence rate at the brightest mask (1/s)"},
             {"singles_a", K::real, 0.0, "detector A singles rate (1/s)"},
             {"singles_b", K::real, 0.0, "detector B singles rate (1/s)"},
             {"gate", K::real, 3e-9, "coincidence window (s)"},
             {"integration", K::real, 2.0, "dwell per mask (s)"},
             {"subtract", K::boolean, true, "subtract estimated accidentals"},
         }},
    };
    return t;
}

bool kind_accepts(ParamKind kind, const json& v) {
    auto all_of = [&](auto pred) { return v.is_array() && std::all_of(v.begin(), v.end(), pred); };
    switch (kind) {
        case K::integer: return v.is_number_integer();
        case K::real: return v.is_number();
        case K::text: return v.is_string();
        case K::boolean: return v.is_boolean();
        case K::integer_list: return all_of([](const json& e) { return e.is_number_integer(); });
        case K::real_list: return all_of([](const json& e) { return e.is_number(); });
        case K::text_list: return all_of([](const json& e) { return e.is_string(); });
    }
    return false;
}

// Reals are stored as doubles even when written as integers, so that
// parse -> serialize -> parse is stable.
json normalize(ParamKind kind, const json& v) {
    if (v.is_null()) return v;
    if (kind == K::real) return v.get<double>();
    if (kind == K::real_list) {
        json out = json::array();
        for (const auto& e : v) out.push_back(e.get<double>());
        return out;
    }
    return v;
}

const char* kind_name(ParamKind kind) {
    switch (kind) {
        case K::integer: return "an integer";
        case K::real: return "a number";
        case K::text: return "a string";
        case K::boolean: return "a boolean";
        case K::integer_list: return "a list of integers";
        case K::real_list: return "a list of numbers";
        case K::text_list: return "a list of strings";
    }
    return "?";
}

double parse_real(const std::string& name, std::string_view s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto r = std::from_chars(s.data(), end, v);
    if (r.ec != std::errc{} || r.ptr != end || !std::isfinite(v)) {
        throw UsageError("--" + name + ": '" + std::string(s) + "' is not a number");
    }
    return v;
}

long long parse_integer(const std::string& name, std::string_view s) {
    long long v = 0;
    const auto* end = s.data() + s.size();
    const auto r = std::from_chars(s.data(), end, v);
    if (r.ec != std::errc{} || r.ptr != end) {
        throw UsageError("--" + name + ": '" + std::string(s) + "' is not an integer");
    }
    return v;
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        out.push_back(s.substr(0, comma));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

std::string flag_name(const std::string& key) {
    std::string f = key;
    std::replace(f.begin(), f.end(), '_', '-');
    return f;
}

}  // namespace

const std::vector<ParamSpec>& command_params(const std::string& command) {
    const auto& t = tables();
    const auto it = t.find(command);
    if (it == t.end()) throw UsageError("unknown command '" + command + "'");
    return it->second;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [k, v] : tables()) n.push_back(k);
        return n;
    }();
    return names;
}

ExperimentConfig default_config(const std::string& command) {
    ExperimentConfig c;
    c.command = command;
    for (const auto& p : command_params(command)) c.params[p.name] = normalize(p.kind, p.default_value);
    return c;
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key != "schema_version" && key != "command" && key != "seed" && key != "threads" && key != "params") {
            throw UsageError("unknown config key '" + key + "'");
        }
    }
    if (!j.contains("schema_version") || !j["schema_version"].is_string()) {
        throw UsageError("config needs a string schema_version");
    }
    if (j["schema_version"] != kSchemaVersion) {
        throw UsageError("unsupported schema_version '" + j["schema_version"].get<std::string>() + "' (expected " +
                         kSchemaVersion + ")");
    }
    if (!j.contains("command") || !j["command"].is_string()) throw UsageError("config needs a string command");
    ExperimentConfig c = default_config(j["command"].get<std::string>());
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw UsageError("config seed must be a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("threads")) {
        if (!j["threads"].is_number_unsigned() || j["threads"].get<std::uint64_t>() == 0) {
            throw UsageError("config threads must be a positive integer");
        }
        c.threads = j["threads"].get<unsigned>();
    }
    if (j.contains("params")) {
        const auto& params = j["params"];
        if (!params.is_object()) throw UsageError("config params must be an object");
        const auto& specs = command_params(c.command);
        for (const auto& [key, value] : params.items()) {
            const auto it = std::find_if(specs.begin(), specs.end(), [&](const ParamSpec& s) { return s.name == key; });
            if (it == specs.end()) throw UsageError("unknown parameter '" + key + "' for command '" + c.command + "'");
            if (!value.is_null() && !kind_accepts(it->kind, value)) {
                throw UsageError("parameter '" + key + "' must be " + kind_name(it->kind));
            }
            c.params[key] = normalize(it->kind, value);
        }
    }
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    return json{{"schema_version", c.schema_version},
                {"command", c.command},
                {"seed", c.seed},
                {"threads", c.threads},
                {"params", c.params}};
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& source) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw UsageError(source + ": " + e.what());
    }
    return config_from_json(j);
}

std::string serialize_config(const ExperimentConfig& c) { return config_to_json(c).dump(2) + "\n"; }

json parse_flag_value(const ParamSpec& spec, const std::string& text) {
    const std::string flag = flag_name(spec.name);
    switch (spec.kind) {
        case K::integer: return parse_integer(flag, text);
        case K::real: return parse_real(flag, text);
        case K::text: return text;
        case K::boolean:
            if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
            if (text == "false" || text == "0" || text == "no" || text == "off") return false;
            throw UsageError("--" + flag + ": expected true or false, got '" + text + "'");
        case K::integer_list: {
            json out = json::array();
            for (auto part : split_list(text)) out.push_back(parse_integer(flag, part));
            return out;
        }
        case K::real_list: {
            json out = json::array();
            for (auto part : split_list(text)) out.push_back(parse_real(flag, part));
            return out;
        }
        case K::text_list: {
            json out = json::array();
            for (auto part : split_list(text)) out.push_back(std::string(part));
            return out;
        }
    }
    return nullptr;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace ghostgrover::cli
