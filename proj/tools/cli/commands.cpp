#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "ghostgrover/coincidence.hpp"
#include "ghostgrover/ghost.hpp"
#include "ghostgrover/grover.hpp"
#include "ghostgrover/objects.hpp"
#include "ghostgrover/pgm.hpp"
#include "ghostgrover/photon_state.hpp"
#include "ghostgrover/walsh.hpp"

namespace ghostgrover::cli {

namespace {

constexpr std::size_t kMaxSide = 1024;          // reconstruct / grover / state
constexpr std::size_t kMaxMaskFiles = 1 << 16;  // masks export
constexpr std::uint64_t kMaxMaskBytes = std::uint64_t{1} << 30;

class Params {
public:
    explicit Params(const json& p) : p_(p) {}

    bool has(const std::string& k) const { return p_.contains(k) && !p_[k].is_null(); }

    const json& raw(const std::string& k) const {
        if (!has(k)) throw UsageError("missing required parameter --" + flag(k));
        return p_[k];
    }
    std::string text(const std::string& k) const { return raw(k).get<std::string>(); }
    double real(const std::string& k) const { return raw(k).get<double>(); }
    bool boolean(const std::string& k) const { return raw(k).get<bool>(); }
    std::size_t size(const std::string& k) const {
        const auto v = raw(k).get<long long>();
        if (v < 0) throw UsageError("--" + flag(k) + " must be >= 0");
        return static_cast<std::size_t>(v);
    }
    std::vector<std::size_t> sizes(const std::string& k) const {
        std::vector<std::size_t> out;
        for (const auto& e : raw(k)) {
            const auto v = e.get<long long>();
            if (v < 0) throw UsageError("--" + flag(k) + " entries must be >= 0");
            out.push_back(static_cast<std::size_t>(v));
        }
        return out;
    }
    std::vector<double> reals(const std::string& k) const { return raw(k).get<std::vector<double>>(); }
    std::vector<std::string> texts(const std::string& k) const { return raw(k).get<std::vector<std::string>>(); }

    static std::string flag(std::string k) {
        std::replace(k.begin(), k.end(), '_', '-');
        return k;
    }

private:
    const json& p_;
};

std::size_t checked_side(std::size_t m) {
    require_power_of_two(m, "m");
    if (m > kMaxSide) {
        throw ResourceError("m=" + std::to_string(m) + " exceeds the cap of " + std::to_string(kMaxSide));
    }
    return m;
}

SchmidtState build_state(const Params& p, std::size_t m) {
    const std::string profile = p.text("profile");
    const Placement placement = parse_placement(p.text("placement"));
    if (profile == "uniform") {
        const std::size_t n = p.has("n") ? p.size("n") : m;
        return uniform_block_profile(m, n, placement);
    }
    if (profile == "gaussian") {
        if (p.has("waist")) return gaussian_profile(m, p.real("waist"));
        if (p.has("target_k")) {
            const std::size_t ref = p.has("reference_m") ? checked_side(p.size("reference_m")) : m;
            const double w = calibrate_waist(ref, p.real("target_k")) * static_cast<double>(m) / static_cast<double>(ref);
            return gaussian_profile(m, w);
        }
        throw UsageError("gaussian profile needs --waist or --target-k");
    }
    throw UsageError("unknown profile '" + profile + "' (expected uniform|gaussian)");
}

json state_json(const SchmidtState& s) {
    const auto& meta = s.meta();
    json j{{"m", s.side()},
           {"dim", s.dim()},
           {"profile", to_string(meta.kind)},
           {"schmidt_number", schmidt_number(s)},
           {"n_eff", effective_block_side(s)},
           {"norm", l2_norm(s.coefficients())},
           {"center", {{"x", meta.center.x}, {"y", meta.center.y}}}};
    if (meta.kind == ProfileKind::uniform) {
        j["n"] = meta.block_side;
        j["placement"] = to_string(meta.placement);
    }
    if (meta.kind == ProfileKind::gaussian) j["waist"] = meta.waist;
    return j;
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

// Writes a min-max scaled PGM and returns its scale record.
json write_scaled_pgm(RunContext& ctx, const std::string& path, const Image& image) {
    const auto [bytes, scale] = quantize_minmax(image);
    ctx.write_file(path, encode_pgm(bytes));
    return json{{"file", std::filesystem::path(path).filename().string()},
                {"offset", scale.offset},
                {"scale", scale.scale},
                {"min", scale.min},
                {"max", scale.max}};
}

std::string csv_line(std::initializer_list<std::string> fields) {
    std::string line;
    bool first = true;
    for (const auto& f : fields) {
        if (!first) line += ',';
        line += f;
        first = false;
    }
    line += '\n';
    return line;
}

std::string num(double v) { return format_number(v); }
std::string num(std::size_t v) { return std::to_string(v); }

OracleObject resolve_object_spec(const std::string& spec, const SchmidtState& state) {
    if (spec == "center-of-database") return database_center_object(state);
    return resolve_object(spec, state.side());
}

std::string object_tag(const std::string& spec) {
    constexpr std::string_view prefix = "builtin:";
    if (spec.rfind(prefix, 0) == 0) return spec.substr(prefix.size());
    if (spec == "center-of-database") return "center";
    return std::filesystem::path(spec).stem().string();
}

json mark_json(const MarkDetectionReport& r) {
    json j{{"min_marked", r.min_marked},
           {"max_unmarked", r.max_unmarked},
           {"marked_count", r.marked_count},
           {"unmarked_support_count", r.unmarked_support_count},
           {"support_threshold", r.support_threshold},
           {"verdict", r.verdict}};
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

// ---------------------------------------------------------------- masks

void cmd_masks_export(const Params& p, RunContext& ctx) {
    const std::size_t m = p.size("m");
    require_power_of_two(m, "m");
    const auto ordering = parse_ordering(p.text("ordering"));
    const std::string kind = p.text("kind");
    if (kind != "h" && kind != "q") throw UsageError("--kind must be h or q");
    const std::size_t screen = p.has("screen") ? p.size("screen") : m;
    if (screen == 0 || screen % m != 0) {
        throw InvalidArgument("screen size " + std::to_string(screen) + " is not divisible by mask side " +
                              std::to_string(m));
    }
    const std::size_t count = m * m;
    const std::uint64_t bytes = static_cast<std::uint64_t>(count) * screen * screen;
    if (count > kMaxMaskFiles || bytes > kMaxMaskBytes) {
        throw ResourceError("exporting " + std::to_string(count) + " masks of " + std::to_string(screen) + "^2 pixels exceeds the output cap");
    }
    const std::string dir = p.text("out");
    const int width = static_cast<int>(std::to_string(count - 1).size());
    json index{{"m", m},
               {"ordering", to_string(ordering)},
               {"kind", kind},
               {"view", kind == "h" ? "mask (+1/-1 entries; -1 -> 0, +1 -> 255)"
                                    : "superposition (h0 - hj)/sqrt(2) (0 -> 0, sqrt(2) -> 255)"},
               {"screen", screen},
               {"superpixel", screen / m},
               {"masks", json::array()}};
    for (std::size_t j = 0; j < count; ++j) {
        Grid<std::uint8_t> g(m);
        if (kind == "h") {
            const auto mask = mask_2d(j, m, ordering);
            for (std::size_t k = 0; k < g.size(); ++k) g[k] = mask.values[k] > 0 ? 255 : 0;
        } else {
            const auto q = superposition_mask(j, m, ordering);
            for (std::size_t k = 0; k < g.size(); ++k) g[k] = q.values[k] > 0.0 ? 255 : 0;
        }
        std::string name = std::to_string(j);
        name.insert(0, static_cast<std::size_t>(width) - name.size(), '0');
        name = "mask_" + name + ".pgm";
        ctx.write_file(dir + "/" + name, encode_pgm(render_superpixel(g, screen)));
        index["masks"].push_back({{"j", j}, {"u", j / m}, {"v", j % m}, {"file", name}});
    }
    ctx.write_file(dir + "/index.json", json_text(index));
    ctx.note("wrote " + std::to_string(count) + " masks to " + ctx.resolve(dir).string());
}

// ---------------------------------------------------------------- state

void cmd_state_info(const Params& p, RunContext& ctx) {
    const auto state = build_state(p, checked_side(p.size("m")));
    const json info = state_json(state);
    ctx.write_file("state_info.json", json_text(info));
    ctx.out() << info.dump(2) << '\n';
}

// ---------------------------------------------------------------- grover

void cmd_grover_run(const Params& p, RunContext& ctx) {
    const std::size_t m = checked_side(p.size("m"));
    const auto state = build_state(p, m);
    const std::string object_spec = p.text("object");
    const auto object = resolve_object_spec(object_spec, state);

    const auto lambda = state.coefficients();
    std::size_t database = 0;
    std::size_t marked_in_db = 0;
    for (std::size_t j = 0; j < lambda.size(); ++j) {
        if (lambda[j] > 0.0) {
            ++database;
            marked_in_db += object.marked(j);
        }
    }
    const std::string it_text = p.text("iterations");
    int iterations = 0;
    if (it_text == "auto") {
        iterations = optimal_iterations(database, marked_in_db);
    } else {
        const auto r = std::from_chars(it_text.data(), it_text.data() + it_text.size(), iterations);
        if (r.ec != std::errc{} || r.ptr != it_text.data() + it_text.size() || iterations < 0) {
            throw UsageError("--iterations must be a non-negative integer or 'auto'");
        }
    }

    const auto v = grover_iterate(state, object, iterations);
    std::string csv = "# convention=physical\n" + csv_line({"j", "x", "y", "p_j"});
    for (std::size_t j = 0; j < v.dim(); ++j) {
        const double a = v.amplitudes[j];
        csv += csv_line({num(j), num(j % m), num(j / m), num(a * a)});
    }
    const std::string out = p.text("out");
    ctx.write_file(out, csv);

    json summary{{"convention", "physical"},
                 {"m", m},
                 {"iterations", iterations},
                 {"database_size", database},
                 {"marked_in_database", marked_in_db},
                 {"marked_count", object.count()},
                 {"success_mass", marked_probability(v, object)},
                 {"total_probability", std::pow(l2_norm(v.amplitudes), 2)},
                 {"state", state_json(state)},
                 {"object", object_spec}};
    if (marked_in_db > 0 && marked_in_db <= database) {
        summary["theta"] = grover_angle(database, marked_in_db);
        summary["success_law"] = grover_success_law(database, marked_in_db, iterations);
    }
    const auto stem = std::filesystem::path(out).replace_extension().string();
    ctx.write_file(stem + "_summary.json", json_text(summary));
    ctx.out() << summary.dump(2) << '\n';
}

// ---------------------------------------------------------------- reconstruct

json write_reconstruction(RunContext& ctx, const std::string& prefix, const SchmidtState& state,
                          const OracleObject& object, const std::string& object_spec, Convention convention,
                          WalshOrdering ordering, double threshold) {
    const auto idler = apply_oracle(state, object);
    const auto img = decompose(idler, convention, ordering);
    const auto probs = ghost_probabilities(idler, convention, ordering);

    json meta{{"convention", to_string(convention)},
              {"ordering", to_string(ordering)},
              {"inverse", "value = byte / scale + offset"},
              {"images", json::object()}};
    meta["images"]["total"] = write_scaled_pgm(ctx, prefix + "_total.pgm", img.total);
    meta["images"]["delta"] = write_scaled_pgm(ctx, prefix + "_delta.pgm", img.delta_part);
    meta["images"]["s"] = write_scaled_pgm(ctx, prefix + "_s.pgm", img.s_part);
    meta["images"]["object"] = write_scaled_pgm(ctx, prefix + "_object.pgm", img.object_part);
    ctx.write_file(prefix + "_meta.json", json_text(meta));

    std::string csv = "# convention=" + std::string(to_string(convention)) + "\n" + csv_line({"j", "p_j"});
    for (std::size_t j = 0; j < probs.dim(); ++j) csv += csv_line({num(j), num(probs.p[j])});
    ctx.write_file(prefix + "_probs.csv", csv);

    const auto ov = overlap(img);
    const auto marks = mark_detection_report(img, object, state, threshold);
    json report{{"convention", to_string(convention)},
                {"ordering", to_string(ordering)},
                {"m", state.side()},
                {"state", state_json(state)},
                {"schmidt_number", schmidt_number(state)},
                {"object", {{"spec", object_spec}, {"marked_count", object.count()}}},
                {"reference_level", img.reference_level},
                {"scale", img.scale},
                {"probability_total", probs.total()},
                {"overlap", {{"inner", ov.inner}, {"overlap", ov.overlap}}},
                {"mark_detection", mark_json(marks)}};
    ctx.write_file(prefix + "_report.json", json_text(report));
    return report;
}

void cmd_reconstruct(const Params& p, RunContext& ctx) {
    const std::size_t m = checked_side(p.size("m"));
    const auto state = build_state(p, m);
    const std::string spec = p.text("object");
    const auto report =
        write_reconstruction(ctx, p.text("out_prefix"), state, resolve_object_spec(spec, state), spec,
                             parse_convention(p.text("convention")), parse_ordering(p.text("ordering")),
                             p.real("support_threshold"));
    ctx.note("overlap " + format_number(report["overlap"]["overlap"].get<double>()) + ", contrast verdict " +
             (report["mark_detection"]["verdict"].get<bool>() ? "true" : "false"));
}

// ---------------------------------------------------------------- sweep

std::string heatmap_csv(const std::vector<std::vector<OverlapReport>>& grid, bool uniform) {
    std::string csv = csv_line({"m", uniform ? "n" : "waist", "n_eff", "overlap"});
    for (const auto& row : grid) {
        for (const auto& c : row) {
            if (!c.valid) continue;
            csv += csv_line({num(c.m), uniform ? num(c.n) : num(c.waist), num(c.n_eff), num(c.overlap)});
        }
    }
    return csv;
}

std::vector<std::vector<OverlapReport>> run_sweep(const Params& p, unsigned threads, const std::string& profile,
                                                  const std::function<OracleObject(const SchmidtState&)>& rule) {
    SweepSpec spec;
    spec.m_list = p.sizes("m_list");
    if (spec.m_list.empty()) throw UsageError("--m-list is empty");
    spec.placement = parse_placement(p.text("placement"));
    spec.convention = parse_convention(p.text("convention"));
    spec.threads = threads;
    spec.object_rule = rule;
    if (profile == "uniform") {
        spec.profile = ProfileKind::uniform;
        if (p.has("n_list")) {
            spec.n_list = p.sizes("n_list");
        } else {
            const std::size_t top = *std::max_element(spec.m_list.begin(), spec.m_list.end());
            for (std::size_t n = 1; n <= top; ++n) spec.n_list.push_back(n);
        }
    } else if (profile == "gaussian") {
        spec.profile = ProfileKind::gaussian;
        spec.waist_list = p.reals("waist_list");
    } else {
        throw UsageError("unknown profile '" + profile + "' (expected uniform|gaussian)");
    }
    return sweep_overlap(spec);
}

void cmd_sweep_overlap(const Params& p, RunContext& ctx, unsigned threads) {
    const std::string profile = p.text("profile");
    const auto grid = run_sweep(p, threads, profile, nullptr);
    ctx.write_file(p.text("out"), heatmap_csv(grid, profile == "uniform"));
}

// ---------------------------------------------------------------- counts

NoiseParams noise_from(const Params& p, std::uint64_t seed) {
    NoiseParams np;
    np.pair_rate = p.real("pair_rate");
    np.singles_rate_a = p.real("singles_a");
    np.singles_rate_b = p.real("singles_b");
    np.gate = p.real("gate");
    np.integration = p.real("integration");
    np.seed = seed;
    np.validate();
    return np;
}

ProbabilityVector read_probs_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open probability file '" + path + "'");
    ProbabilityVector pv;
    pv.convention = Convention::paper;
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    std::ptrdiff_t p_col = -1;
    std::ptrdiff_t j_col = -1;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string f;
        while (std::getline(ss, f, ',')) out.push_back(f);
        if (!s.empty() && s.back() == ',') out.emplace_back();
        return out;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto pos = line.find("convention=");
            if (pos != std::string::npos) pv.convention = parse_convention(line.substr(pos + 11));
            continue;
        }
        const auto fields = split(line);
        if (header.empty()) {
            header = fields;
            for (std::size_t k = 0; k < header.size(); ++k) {
                if (header[k] == "p_j") p_col = static_cast<std::ptrdiff_t>(k);
                if (header[k] == "j") j_col = static_cast<std::ptrdiff_t>(k);
            }
            if (p_col < 0) throw ParseError(path, lineno, 1, "header has no p_j column");
            continue;
        }
        if (fields.size() != header.size()) {
            throw ParseError(path, lineno, 1,
                             "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
        }
        const auto& f = fields[static_cast<std::size_t>(p_col)];
        double v = 0.0;
        const auto r = std::from_chars(f.data(), f.data() + f.size(), v);
        if (r.ec != std::errc{} || r.ptr != f.data() + f.size()) {
            throw ParseError(path, lineno, static_cast<std::size_t>(p_col) + 1, "'" + f + "' is not a number");
        }
        if (j_col >= 0 && fields[static_cast<std::size_t>(j_col)] != std::to_string(pv.p.size())) {
            throw ParseError(path, lineno, static_cast<std::size_t>(j_col) + 1, "rows must be listed in j order from 0");
        }
        pv.p.push_back(v);
    }
    if (pv.p.empty()) throw ParseError(path, lineno, 1, "no probability rows");
    return pv;
}

std::string counts_csv(const CoincidenceCounts& counts, const ProbabilityEstimate& est) {
    std::string csv = csv_line({"j", "coincidences", "singles_a", "singles_b", "accidentals_est", "corrected", "clamped"});
    for (const auto& c : counts.masks) {
        csv += csv_line({num(c.j), std::to_string(c.coincidences), std::to_string(c.singles_a),
                         std::to_string(c.singles_b), num(c.accidentals_est), num(c.corrected),
                         est.clamped[c.j] ? "1" : "0"});
    }
    return csv;
}

void cmd_simulate_counts(const Params& p, RunContext& ctx, std::uint64_t seed) {
    const auto probs = read_probs_csv(p.text("probs"));
    const auto counts = simulate_counts(probs, noise_from(p, seed));
    const auto est = estimate_probabilities(counts, p.boolean("subtract"));
    ctx.write_file(p.text("out"), counts_csv(counts, est));
    const auto clamped = std::count(est.clamped.begin(), est.clamped.end(), true);
    ctx.note(std::to_string(counts.masks.size()) + " masks, " + std::to_string(clamped) + " clamped");
}

// ---------------------------------------------------------------- figures

void figure_grover(const Params& p, RunContext& ctx, const std::string& dir) {
    json summary = json::array();
    for (std::size_t m : p.sizes("m_list")) {
        checked_side(m);
        const auto state = build_state(p, m);
        for (const auto& spec : p.texts("objects")) {
            const auto object = resolve_object_spec(spec, state);
            const auto idler = apply_oracle(state, object);
            const auto amps = grover_amplitudes(idler);
            Image amp_img(m);
            Image prob_img(m);
            for (std::size_t k = 0; k < amps.size(); ++k) {
                amp_img[k] = amps[k];
                prob_img[k] = amps[k] * amps[k];
            }
            const std::string prefix = dir + "/m" + std::to_string(m) + "_" + object_tag(spec);
            json meta{{"inverse", "value = byte / scale + offset"}, {"images", json::object()}};
            meta["images"]["amplitude"] = write_scaled_pgm(ctx, prefix + "_amplitude.pgm", amp_img);
            meta["images"]["probability"] = write_scaled_pgm(ctx, prefix + "_probability.pgm", prob_img);
            meta["images"]["lambda"] = write_scaled_pgm(ctx, prefix + "_lambda.pgm", state.lambda());
            ctx.write_file(prefix + "_meta.json", json_text(meta));

            const auto marks = mark_detection_report(amp_img, object, state, p.real("support_threshold"));
            json report{{"m", m},
                        {"object", spec},
                        {"basis", "grover (diffusion absorbed into the pixel basis)"},
                        {"state", state_json(state)},
                        {"success_mass", marked_probability(StateVector{amps, true}, object)},
                        {"signed_amplitude_detection", mark_json(marks)}};
            ctx.write_file(prefix + "_report.json", json_text(report));
            summary.push_back({{"m", m}, {"object", spec}, {"verdict", marks.verdict}});
        }
    }
    ctx.write_file(dir + "/summary.json", json_text(summary));
}

void figure_reconstructions(const Params& p, RunContext& ctx, const std::string& dir) {
    const auto convention = parse_convention(p.text("convention"));
    json summary = json::array();
    const std::string profile = p.text("profile");
    for (std::size_t m : p.sizes("m_list")) {
        checked_side(m);
        std::vector<std::optional<std::size_t>> blocks{std::nullopt};
        if (profile == "uniform" && p.has("n_list")) {
            blocks.clear();
            for (std::size_t n : p.sizes("n_list")) blocks.emplace_back(n);
        }
        for (const auto& n : blocks) {
            SchmidtState state = [&] {
                if (!n) return build_state(p, m);
                return uniform_block_profile(m, *n, parse_placement(p.text("placement")));
            }();
            for (const auto& spec : p.texts("objects")) {
                std::string prefix = dir + "/m" + std::to_string(m);
                if (n) prefix += "_n" + std::to_string(*n);
                prefix += "_" + object_tag(spec);
                const auto report = write_reconstruction(ctx, prefix, state, resolve_object_spec(spec, state), spec,
                                                         convention, WalshOrdering::natural, p.real("support_threshold"));
                json row{{"m", m},
                         {"object", spec},
                         {"overlap", report["overlap"]["overlap"]},
                         {"verdict", report["mark_detection"]["verdict"]}};
                if (n) row["n"] = *n;
                summary.push_back(row);
            }
        }
    }
    ctx.write_file(dir + "/summary.json", json_text(summary));
}

void figure_sweep(const Params& p, RunContext& ctx, const std::string& dir, unsigned threads) {
    const std::string profile = p.text("profile");
    const auto objects = p.has("objects") ? p.texts("objects") : std::vector<std::string>{"center-of-database"};
    if (objects.size() != 1) throw UsageError("sweep presets take exactly one object rule");
    const std::string spec = objects.front();
    const auto grid = run_sweep(p, threads, profile,
                                [spec](const SchmidtState& s) { return resolve_object_spec(spec, s); });
    ctx.write_file(dir + "/heatmap.csv", heatmap_csv(grid, profile == "uniform"));

    json summary{{"profile", profile}, {"object", spec}, {"rows", json::array()}};
    for (const auto& row : grid) {
        json r{{"m", row.empty() ? 0 : row.front().m}};
        if (profile == "uniform") {
            bool zero_below = true;
            bool positive_above = true;
            for (const auto& c : row) {
                if (!c.valid) continue;
                if (2 * c.n <= c.m) zero_below = zero_below && c.overlap <= 1e-10;
                else positive_above = positive_above && c.overlap > 1e-6;
            }
            r["zero_for_n_le_m_over_2"] = zero_below;
            r["positive_for_n_gt_m_over_2"] = positive_above;
        } else {
            bool monotone = true;
            double prev = -1.0;
            double last = 0.0;
            for (const auto& c : row) {
                monotone = monotone && c.overlap >= prev - 1e-12;
                prev = c.overlap;
                last = c.overlap;
            }
            r["nondecreasing_in_waist"] = monotone;
            r["overlap_at_largest_waist"] = last;
        }
        summary["rows"].push_back(r);
    }
    ctx.write_file(dir + "/summary.json", json_text(summary));
}

void figure_noisy(const Params& p, RunContext& ctx, const std::string& dir, std::uint64_t seed, bool with_profile) {
    const auto convention = parse_convention(p.text("convention"));
    json summary = json::array();
    for (std::size_t m : p.sizes("m_list")) {
        checked_side(m);
        const auto state = build_state(p, m);
        if (with_profile) {
            json meta{{"inverse", "value = byte / scale + offset"},
                      {"lambda", write_scaled_pgm(ctx, dir + "/m" + std::to_string(m) + "_lambda.pgm", state.lambda())}};
            ctx.write_file(dir + "/m" + std::to_string(m) + "_lambda_meta.json", json_text(meta));
        }
        for (const auto& spec : p.texts("objects")) {
            const auto object = resolve_object_spec(spec, state);
            const auto idler = apply_oracle(state, object);
            NoiseParams np = noise_from(p, seed);
            if (p.has("budget")) {
                const auto ideal = ghost_probabilities(idler, convention);
                const double peak = *std::max_element(ideal.p.begin(), ideal.p.end());
                if (!(peak > 0.0)) throw InvalidArgument("all ideal probabilities are zero; no budget can be set");
                np.pair_rate = p.real("budget") / (np.integration * ideal.total() / peak);
            }
            const auto r = noisy_reconstruct(idler, convention, np, p.boolean("subtract"));
            const std::string prefix = dir + "/m" + std::to_string(m) + "_" + object_tag(spec);
            ctx.write_file(prefix + "_counts.csv", counts_csv(r.counts, r.estimate));
            std::string probs = "# convention=" + std::string(to_string(convention)) + "\n" +
                                csv_line({"j", "p_ideal", "p_noisy"});
            for (std::size_t j = 0; j < r.ideal_p.dim(); ++j) {
                probs += csv_line({num(j), num(r.ideal_p.p[j]), num(r.noisy_p.p[j])});
            }
            ctx.write_file(prefix + "_probs.csv", probs);
            json meta{{"inverse", "value = byte / scale + offset"}, {"images", json::object()}};
            meta["images"]["ideal"] = write_scaled_pgm(ctx, prefix + "_ideal.pgm", r.ideal.total);
            meta["images"]["noisy"] = write_scaled_pgm(ctx, prefix + "_noisy.pgm", r.noisy_total);
            ctx.write_file(prefix + "_meta.json", json_text(meta));
            const auto marks = mark_detection_report(r.noisy_total, object, state, p.real("support_threshold"));
            const auto clamped = std::count(r.estimate.clamped.begin(), r.estimate.clamped.end(), true);
            json report{{"m", m},
                        {"object", spec},
                        {"convention", to_string(convention)},
                        {"state", state_json(state)},
                        {"seed", seed},
                        {"pair_rate", np.pair_rate},
                        {"expected_signal_total", r.expected_signal_total},
                        {"accidentals_subtracted", r.estimate.accidentals_subtracted},
                        {"clamped_masks", clamped},
                        {"pearson", r.pearson},
                        {"pearson_no_origin", r.pearson_no_origin},
                        {"mark_detection", mark_json(marks)}};
            ctx.write_file(prefix + "_report.json", json_text(report));
            summary.push_back({{"m", m}, {"object", spec}, {"pearson", r.pearson}, {"verdict", marks.verdict}});
        }
    }
    ctx.write_file(dir + "/summary.json", json_text(summary));
}

void cmd_figures(const Params& p, RunContext& ctx, std::uint64_t seed, unsigned threads) {
    const std::string preset = p.text("preset");
    const std::string dir = preset;
    if (preset == "fig1f") {
        figure_grover(p, ctx, dir);
    } else if (preset == "fig1g" || preset == "fig2c-f") {
        figure_reconstructions(p, ctx, dir);
    } else if (preset == "fig2g" || preset == "fig2h") {
        figure_sweep(p, ctx, dir, threads);
    } else if (preset == "fig4-sim") {
        figure_noisy(p, ctx, dir, seed, false);
    } else if (preset == "fig5-sim") {
        figure_noisy(p, ctx, dir, seed, true);
    } else {
        throw UsageError("unknown figure preset '" + preset + "'");
    }
    ctx.note("wrote " + std::to_string(ctx.files().size()) + " files under " + ctx.resolve(dir).string());
}

}  // namespace

void execute(const ExperimentConfig& config, RunContext& ctx) {
    const Params p(config.params);
    const auto& c = config.command;
    if (c == "masks export") return cmd_masks_export(p, ctx);
    if (c == "state info") return cmd_state_info(p, ctx);
    if (c == "grover run") return cmd_grover_run(p, ctx);
    if (c == "reconstruct") return cmd_reconstruct(p, ctx);
    if (c == "sweep-overlap") return cmd_sweep_overlap(p, ctx, config.threads);
    if (c == "simulate-counts") return cmd_simulate_counts(p, ctx, config.seed);
    if (c == "figures") return cmd_figures(p, ctx, config.seed, config.threads);
    throw UsageError("unknown command '" + c + "'");
}

}  // namespace ghostgrover::cli
