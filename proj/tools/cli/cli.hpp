#pragma once

// Command-line front end. Everything except main() lives here so the tests can
// drive whole runs in-process.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace ghostgrover::cli {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kIo = 3, kResource = 4 };

// Bad flags or config contents.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ParamKind { integer, real, text, boolean, integer_list, real_list, text_list };

struct ParamSpec {
    std::string name;  // config key; the flag is --name with '_' -> '-'
    ParamKind kind;
    json default_value;  // null means "unset" and is allowed as a value
    std::string help;
};

// Parameter table of a command ("masks export", "reconstruct", ...).
const std::vector<ParamSpec>& command_params(const std::string& command);
const std::vector<std::string>& command_names();

struct ExperimentConfig {
    std::string schema_version = kSchemaVersion;
    std::string command;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    json params = json::object();  // every key of the command's table, defaults filled in

    bool operator==(const ExperimentConfig&) const = default;
};

// Strict: unknown keys, wrong types or an unsupported schema version throw UsageError.
ExperimentConfig config_from_json(const json& j);
json config_to_json(const ExperimentConfig& c);
ExperimentConfig parse_config_text(const std::string& text, const std::string& source);
std::string serialize_config(const ExperimentConfig& c);
ExperimentConfig default_config(const std::string& command);

// Converts a flag's text to the parameter's JSON type.
json parse_flag_value(const ParamSpec& spec, const std::string& text);

// Shortest round-trip decimal form, independent of the global locale.
std::string format_number(double v);

std::string sha256_hex(const std::string& bytes);

struct FileRecord {
    std::string path;  // relative to the output directory
    std::uintmax_t bytes = 0;
    std::string sha256;
};

// Output directory plus the list of everything written through it.
class RunContext {
public:
    RunContext(std::filesystem::path out_dir, bool quiet, std::ostream& out, std::ostream& err);

    void write_file(const std::string& relative, const std::string& bytes);
    const std::vector<FileRecord>& files() const { return files_; }
    const std::filesystem::path& out_dir() const { return out_dir_; }
    std::filesystem::path resolve(const std::string& relative) const;
    void note(const std::string& message);  // progress line on stderr unless quiet
    std::ostream& out() { return out_; }

private:
    std::filesystem::path out_dir_;
    bool quiet_;
    std::ostream& out_;
    std::ostream& err_;
    std::vector<FileRecord> files_;
};

// Runs one command with an already-resolved config; writes outputs and the
// manifest through ctx. Throws on error.
void execute(const ExperimentConfig& config, RunContext& ctx);

// Names of the built-in figure presets and their JSON text.
const std::map<std::string, std::string>& preset_texts();
ExperimentConfig preset_config(const std::string& name);

// Full entry point: argv parsing, config overlay, execution, manifest.
// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ghostgrover::cli
