#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lrsp/error.hpp"
#include "lrsp/lf/logical_form.hpp"
#include "lrsp/util/io.hpp"
#include "lrsp/util/text.hpp"

namespace lrsp {

/// One dataset row.
struct Example {
    std::string id;
    std::vector<std::string> utterance;
    lf::LogicalForm lf;
    std::string language = "en";
    std::optional<std::string> task;
    std::map<std::string, std::string> meta;

    std::string utterance_text() const { return text::join(utterance); }

    friend bool operator==(const Example&, const Example&) = default;
};

inline io::Json to_json(const Example& ex) {
    io::Json j;
    j["id"] = ex.id;
    j["utterance"] = ex.utterance_text();
    j["lf"] = lf::serialize(ex.lf);
    j["language"] = ex.language;
    j["task"] = ex.task ? io::Json(*ex.task) : io::Json(nullptr);
    j["meta"] = ex.meta;
    return j;
}

inline Example example_from_json(const io::Json& j) {
    if (!j.is_object() || !j.contains("id") || !j.contains("utterance") || !j.contains("lf")) {
        throw Error(Errc::Io, "example row needs id, utterance and lf");
    }
    Example ex;
    try {
        ex.id = j.at("id").get<std::string>();
        const auto& u = j.at("utterance");
        ex.utterance = u.is_array() ? u.get<std::vector<std::string>>() : text::split_ws(u.get<std::string>());
        ex.lf = lf::parse_lf(j.at("lf").get<std::string>());
        if (j.contains("language") && !j["language"].is_null()) ex.language = j["language"].get<std::string>();
        if (j.contains("task") && !j["task"].is_null()) ex.task = j["task"].get<std::string>();
        if (j.contains("meta") && j["meta"].is_object()) {
            for (const auto& [k, v] : j["meta"].items()) ex.meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
        }
    } catch (const io::Json::exception& e) {
        throw Error(Errc::Io, std::string("bad example row: ") + e.what());
    }
    return ex;
}

/// Reads a dataset and enforces id uniqueness.
inline std::vector<Example> load_examples(const std::filesystem::path& path) {
    std::vector<Example> out;
    std::set<std::string> seen;
    for (const auto& row : io::read_jsonl(path)) {
        out.push_back(example_from_json(row));
        if (!seen.insert(out.back().id).second) throw Error(Errc::Io, "duplicate example id " + out.back().id);
    }
    return out;
}

inline std::string examples_to_jsonl(const std::vector<Example>& rows) {
    std::string out;
    for (const auto& ex : rows) {
        out += to_json(ex).dump();
        out += '\n';
    }
    return out;
}

}  // namespace lrsp
