#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "lrsp/acquisition/abe.hpp"
#include "lrsp/acquisition/lfs_lc_d.hpp"
#include "lrsp/error.hpp"
#include "lrsp/util/io.hpp"
#include "lrsp/util/text.hpp"

#ifndef LRSP_VERSION
#define LRSP_VERSION "0.1.0"
#endif

namespace lrsp::harness {

enum class SimMode { AlMsp, Hat };

inline std::string mode_name(SimMode m) { return m == SimMode::Hat ? "hat" : "al"; }

enum class BudgetKind { Percent, Absolute };

/// Cumulative budget per round, either as pool percentages or row counts.
struct BudgetSchedule {
    BudgetKind kind = BudgetKind::Percent;
    std::vector<double> cumulative;
};

inline const BudgetSchedule kHatSchedule{BudgetKind::Percent, {1, 2, 4, 8, 16}};
inline const BudgetSchedule kAlMspSchedule{BudgetKind::Percent, {1, 2, 4, 8, 16, 32}};

/// Cumulative selection counts. Percentages round to nearest with a floor of
/// one row; every round must add at least one row and the total must fit the pool.
inline std::vector<std::size_t> cumulative_budgets(const BudgetSchedule& s, std::size_t pool_size) {
    std::vector<std::size_t> out;
    for (double v : s.cumulative) {
        if (!std::isfinite(v) || v <= 0) throw Error(Errc::InvalidConfig, "budgets must be positive");
        std::size_t n = 0;
        if (s.kind == BudgetKind::Percent) {
            n = static_cast<std::size_t>(std::max<long>(1, std::lround(v / 100.0 * static_cast<double>(pool_size))));
        } else {
            if (v != std::floor(v)) throw Error(Errc::InvalidConfig, "absolute budgets must be integers");
            n = static_cast<std::size_t>(v);
        }
        if (!out.empty() && n <= out.back()) {
            throw Error(Errc::InvalidConfig, "cumulative budget must grow every round");
        }
        out.push_back(n);
    }
    if (!out.empty() && out.back() > pool_size) {
        throw Error(Errc::InvalidConfig, "cumulative budget " + std::to_string(out.back()) + " exceeds pool size " +
                                             std::to_string(pool_size));
    }
    return out;
}

/// Rows added in each round.
inline std::vector<std::size_t> round_budgets(const BudgetSchedule& s, std::size_t pool_size) {
    auto cum = cumulative_budgets(s, pool_size);
    std::vector<std::size_t> out;
    std::size_t prev = 0;
    for (std::size_t c : cum) {
        out.push_back(c - prev);
        prev = c;
    }
    return out;
}

inline const std::set<std::string>& known_methods() {
    static const std::set<std::string> m{"random",        "cluster", "max-compound", "traffic", "lcs-bw",
                                         "lcs-fw",        "nbest-entropy", "csse",   "lfs-lc-d", "abe",
                                         "abe-nbest",     "abe-max"};
    return m;
}

struct AcquisitionConfig {
    std::string method = "lfs-lc-d";
    acquisition::LfsLcdParams lfs = acquisition::kGeoQueryPreset;
    acquisition::AbeCoefficients abe;
    std::size_t neighbors = acquisition::kDefaultDensityNeighbors;
    double bandwidth = features::kDefaultBandwidth;
};

struct DataPaths {
    std::filesystem::path pool;        // source-language examples
    std::filesystem::path oracle;      // human translations {id, utterance}
    std::filesystem::path mt;          // machine translations {id, utterance}
    std::filesystem::path scores;      // optional score table
    std::filesystem::path embeddings;  // optional embedding table
};

struct AlConfig {
    SimMode mode = SimMode::Hat;
    std::uint64_t seed = 0;
    std::optional<std::size_t> rounds;  // defaults to the schedule length
    BudgetSchedule budget = kHatSchedule;
    AcquisitionConfig acquisition;
    DataPaths data;
    std::filesystem::path output = "out";
    std::string target_language = "tgt";

    std::size_t round_count() const { return rounds.value_or(budget.cumulative.size()); }

    void validate() const {
        if (!known_methods().count(acquisition.method)) {
            throw Error(Errc::InvalidConfig, "unknown acquisition method '" + acquisition.method + "'");
        }
        if (rounds && *rounds > budget.cumulative.size()) {
            throw Error(Errc::InvalidConfig, "rounds exceeds the budget schedule length");
        }
        const auto& p = acquisition.lfs;
        if (!(p.alpha >= 0) || !(p.beta >= 0 && p.beta <= 1)) {
            throw Error(Errc::InvalidConfig, "alpha must be >= 0 and beta in [0,1]");
        }
        if (!(acquisition.bandwidth > 0)) throw Error(Errc::InvalidConfig, "bandwidth must be positive");
        if (acquisition.neighbors == 0) throw Error(Errc::InvalidConfig, "neighbors must be positive");
        if (data.pool.empty()) throw Error(Errc::InvalidConfig, "data.pool is required");
        if (data.oracle.empty()) throw Error(Errc::InvalidConfig, "data.oracle is required");
        if (mode == SimMode::Hat && data.mt.empty()) throw Error(Errc::InvalidConfig, "hat mode needs data.mt");
        if (target_language.empty()) throw Error(Errc::InvalidConfig, "target_language must be nonempty");
    }
};

namespace detail {

/// Shortest text that reads back to the same double.
inline std::string fmt_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline std::vector<double> parse_list(const std::string& key, const std::string& s) {
    std::vector<double> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
        const auto t = std::string(text::trim(cur));
        if (t.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(t, &used));
            if (used != t.size()) throw std::invalid_argument(t);
        } catch (const std::exception&) {
            throw Error(Errc::InvalidConfig, key + ": not a number: " + t);
        }
    }
    if (out.empty()) throw Error(Errc::InvalidConfig, key + " is empty");
    return out;
}

}  // namespace detail

/// Canonical key=value text of every setting; its hash identifies a run.
inline std::string canonical_text(const AlConfig& c) {
    std::ostringstream o;
    o << "run.mode=" << mode_name(c.mode) << "\nrun.seed=" << c.seed << "\nrun.rounds=" << c.round_count()
      << "\nrun.target_language=" << c.target_language << "\nbudget.kind="
      << (c.budget.kind == BudgetKind::Percent ? "percent" : "absolute") << "\nbudget.cumulative=";
    for (std::size_t i = 0; i < c.budget.cumulative.size(); ++i) {
        o << (i ? "," : "") << detail::fmt_double(c.budget.cumulative[i]);
    }
    const auto& a = c.acquisition;
    o << "\nacquisition.method=" << a.method << "\nacquisition.alpha=" << detail::fmt_double(a.lfs.alpha)
      << "\nacquisition.beta=" << detail::fmt_double(a.lfs.beta) << "\nacquisition.neighbors=" << a.neighbors
      << "\nacquisition.bandwidth=" << detail::fmt_double(a.bandwidth)
      << "\nacquisition.bias=" << detail::fmt_double(a.abe.bias)
      << "\nacquisition.error=" << detail::fmt_double(a.abe.error)
      << "\nacquisition.density=" << detail::fmt_double(a.abe.density)
      << "\nacquisition.diversity=" << detail::fmt_double(a.abe.diversity);
    // Data files enter by name only so relocating a checkout keeps the hash.
    o << "\ndata.pool=" << c.data.pool.filename().string() << "\ndata.oracle=" << c.data.oracle.filename().string()
      << "\ndata.mt=" << c.data.mt.filename().string() << "\ndata.scores=" << c.data.scores.filename().string()
      << "\ndata.embeddings=" << c.data.embeddings.filename().string() << "\n";
    return o.str();
}

inline std::string config_hash(const AlConfig& c) { return text::hex64(text::fnv1a64(canonical_text(c))); }

/// Reproducibility header written alongside every output.
inline io::Json run_header(std::uint64_t seed, const std::string& config_hash_hex, const std::string& command) {
    return io::Json{{"tool", "lrsp"},
                    {"version", LRSP_VERSION},
                    {"command", command},
                    {"seed", seed},
                    {"config_hash", config_hash_hex}};
}

/// Parses INI text. Relative data and output paths resolve against `base`.
inline AlConfig parse_config(const std::string& ini, const std::filesystem::path& base = {}) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(ini);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw Error(Errc::InvalidConfig, std::string("config: ") + e.message() + " at line " + std::to_string(e.line()));
    }
    static const std::map<std::string, std::set<std::string>> allowed{
        {"run", {"mode", "seed", "rounds", "output", "target_language"}},
        {"budget", {"preset", "kind", "cumulative"}},
        {"acquisition",
         {"method", "preset", "alpha", "beta", "neighbors", "bandwidth", "bias", "error", "density", "diversity"}},
        {"data", {"pool", "oracle", "mt", "scores", "embeddings"}},
    };
    for (const auto& [section, body] : tree) {
        auto it = allowed.find(section);
        if (it == allowed.end()) throw Error(Errc::InvalidConfig, "unknown config section [" + section + "]");
        for (const auto& [key, v] : body) {
            if (!it->second.count(key)) throw Error(Errc::InvalidConfig, "unknown key " + section + "." + key);
        }
    }
    auto get = [&](const std::string& key) -> std::optional<std::string> {
        auto v = tree.get_optional<std::string>(pt::ptree::path_type(key, '.'));
        if (!v) return std::nullopt;
        return std::string(text::trim(*v));
    };
    auto number = [&](const std::string& key, double fallback) {
        auto v = get(key);
        return v ? detail::parse_list(key, *v).at(0) : fallback;
    };
    auto count = [&](const std::string& key, std::size_t fallback) -> std::size_t {
        const double d = number(key, static_cast<double>(fallback));
        if (d < 0 || d != std::floor(d)) throw Error(Errc::InvalidConfig, key + " must be a non-negative integer");
        return static_cast<std::size_t>(d);
    };
    auto resolve = [&](const std::string& key) -> std::filesystem::path {
        auto v = get(key);
        if (!v || v->empty()) return {};
        std::filesystem::path p(*v);
        return p.is_absolute() || base.empty() ? p : base / p;
    };

    AlConfig c;
    if (auto m = get("run.mode")) {
        if (*m == "hat") c.mode = SimMode::Hat;
        else if (*m == "al" || *m == "al-msp") c.mode = SimMode::AlMsp;
        else throw Error(Errc::InvalidConfig, "run.mode must be al or hat");
    }
    c.seed = count("run.seed", 0);
    if (get("run.rounds")) c.rounds = count("run.rounds", 0);
    if (auto o = resolve("run.output"); !o.empty()) c.output = o;
    else if (!base.empty()) c.output = base / "out";
    if (auto t = get("run.target_language")) c.target_language = *t;

    // Without an explicit schedule the preset follows the mode.
    c.budget = c.mode == SimMode::Hat ? kHatSchedule : kAlMspSchedule;
    if (auto p = get("budget.preset")) {
        if (*p == "hat") c.budget = kHatSchedule;
        else if (*p == "al-msp" || *p == "al") c.budget = kAlMspSchedule;
        else throw Error(Errc::InvalidConfig, "budget.preset must be hat or al-msp");
    }
    if (auto k = get("budget.kind")) {
        if (*k == "percent") c.budget.kind = BudgetKind::Percent;
        else if (*k == "absolute") c.budget.kind = BudgetKind::Absolute;
        else throw Error(Errc::InvalidConfig, "budget.kind must be percent or absolute");
    }
    if (auto v = get("budget.cumulative")) c.budget.cumulative = detail::parse_list("budget.cumulative", *v);

    auto& a = c.acquisition;
    if (auto m = get("acquisition.method")) a.method = *m;
    if (auto p = get("acquisition.preset")) {
        if (*p == "geoquery") a.lfs = acquisition::kGeoQueryPreset;
        else if (*p == "nlmap") a.lfs = acquisition::kNlmapPreset;
        else throw Error(Errc::InvalidConfig, "acquisition.preset must be geoquery or nlmap");
    }
    a.lfs.alpha = number("acquisition.alpha", a.lfs.alpha);
    a.lfs.beta = number("acquisition.beta", a.lfs.beta);
    a.neighbors = count("acquisition.neighbors", a.neighbors);
    a.bandwidth = number("acquisition.bandwidth", a.bandwidth);
    a.abe.bias = number("acquisition.bias", a.abe.bias);
    a.abe.error = number("acquisition.error", a.abe.error);
    a.abe.density = number("acquisition.density", a.abe.density);
    a.abe.diversity = number("acquisition.diversity", a.abe.diversity);

    c.data.pool = resolve("data.pool");
    c.data.oracle = resolve("data.oracle");
    c.data.mt = resolve("data.mt");
    c.data.scores = resolve("data.scores");
    c.data.embeddings = resolve("data.embeddings");
    c.validate();
    return c;
}

inline AlConfig load_config(const std::filesystem::path& path) {
    return parse_config(io::read_file(path), path.parent_path());
}

}  // namespace lrsp::harness
