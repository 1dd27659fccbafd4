#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lrsp/error.hpp"
#include "lrsp/util/io.hpp"

namespace lrsp::features {

using DenseVector = std::vector<double>;

inline double dot(const DenseVector& a, const DenseVector& b) {
    if (a.size() != b.size()) throw Error(Errc::DimensionMismatch, "vector sizes differ");
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double squared_distance(const DenseVector& a, const DenseVector& b) {
    if (a.size() != b.size()) throw Error(Errc::DimensionMismatch, "vector sizes differ");
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

/// Cosine similarity; a zero vector is dissimilar (0) to everything but itself.
inline double cosine(const DenseVector& a, const DenseVector& b) {
    const double na = std::sqrt(dot(a, a));
    const double nb = std::sqrt(dot(b, b));
    if (na == 0 || nb == 0) return (na == 0 && nb == 0) ? 1.0 : 0.0;
    const double c = dot(a, b) / (na * nb);
    return c > 1.0 ? 1.0 : (c < -1.0 ? -1.0 : c);
}

inline double cosine_distance(const DenseVector& a, const DenseVector& b) { return 1.0 - cosine(a, b); }

/// Externally produced utterance embeddings keyed by example id.
class EmbeddingTable {
public:
    std::size_t dimension() const noexcept { return dim_; }
    std::size_t size() const noexcept { return rows_.size(); }
    bool contains(const std::string& id) const { return rows_.count(id) != 0; }

    void add(const std::string& id, DenseVector v) {
        if (rows_.empty() && dim_ == 0) dim_ = v.size();
        if (v.size() != dim_) {
            throw Error(Errc::DimensionMismatch, "embedding " + id + " has dimension " + std::to_string(v.size()) +
                                                     ", expected " + std::to_string(dim_));
        }
        for (double x : v) {
            if (!std::isfinite(x)) throw Error(Errc::InvalidArgument, "embedding " + id + " has a non-finite entry");
        }
        rows_[id] = std::move(v);
    }

    const DenseVector& at(const std::string& id) const {
        auto it = rows_.find(id);
        if (it == rows_.end()) throw Error(Errc::MissingEmbedding, "no embedding for " + id);
        return it->second;
    }

    /// Vectors for `ids` in order; MissingEmbedding for the first absent id.
    std::vector<DenseVector> gather(const std::vector<std::string>& ids) const {
        std::vector<DenseVector> out;
        out.reserve(ids.size());
        for (const auto& id : ids) out.push_back(at(id));
        return out;
    }

    /// JSON-lines of {id, vector:[...]}; the first record fixes the dimension.
    static EmbeddingTable load(const std::filesystem::path& path) {
        EmbeddingTable t;
        for (const auto& row : io::read_jsonl(path)) {
            try {
                t.add(row.at("id").get<std::string>(), row.at("vector").get<DenseVector>());
            } catch (const io::Json::exception& e) {
                throw Error(Errc::Io, path.string() + ": bad embedding row: " + e.what());
            }
        }
        return t;
    }

private:
    std::size_t dim_ = 0;
    std::map<std::string, DenseVector> rows_;
};

}  // namespace lrsp::features
