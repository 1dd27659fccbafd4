#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lrsp/features/vectors.hpp"
#include "lrsp/lf/decompose.hpp"

namespace lrsp::features {

/// Feature id -> weight. Zero weights are never stored.
using SparseVector = std::map<std::size_t, double>;

struct TfidfModel {
    std::vector<std::string> vocabulary;  // feature id -> key ("A:..." atom, "C:..." compound)
    std::map<std::string, std::size_t> index;
    std::vector<double> idf;

    std::size_t dimension() const noexcept { return vocabulary.size(); }
};

struct TfidfResult {
    TfidfModel model;
    std::vector<SparseVector> vectors;
};

/// Atom and compound TF-IDF: weight = raw count in the LF x ln(N / df).
/// Vocabulary ids are assigned in sorted key order.
inline TfidfResult tfidf_featurize(const std::vector<lf::LogicalForm>& corpus) {
    TfidfResult out;
    std::vector<std::map<std::string, std::size_t>> counts(corpus.size());
    std::map<std::string, std::size_t> df;
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        for (auto& key : lf::structure_features(corpus[d])) ++counts[d][key];
        for (const auto& [key, c] : counts[d]) ++df[key];
    }
    const double n = static_cast<double>(corpus.size());
    for (const auto& [key, f] : df) {
        out.model.index[key] = out.model.vocabulary.size();
        out.model.vocabulary.push_back(key);
        out.model.idf.push_back(std::log(n / static_cast<double>(f)));
    }
    for (const auto& doc : counts) {
        SparseVector v;
        for (const auto& [key, c] : doc) {
            const std::size_t id = out.model.index.at(key);
            const double w = static_cast<double>(c) * out.model.idf[id];
            if (w != 0.0) v[id] = w;
        }
        out.vectors.push_back(std::move(v));
    }
    return out;
}

inline DenseVector densify(const SparseVector& v, std::size_t dim) {
    DenseVector out(dim, 0.0);
    for (const auto& [id, w] : v) out.at(id) = w;
    return out;
}

inline std::vector<DenseVector> densify(const std::vector<SparseVector>& vs, std::size_t dim) {
    std::vector<DenseVector> out;
    out.reserve(vs.size());
    for (const auto& v : vs) out.push_back(densify(v, dim));
    return out;
}

}  // namespace lrsp::features
