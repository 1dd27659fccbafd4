#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "lrsp/error.hpp"

namespace lrsp::acquisition {

using ScoreMap = std::map<std::string, double>;

inline constexpr double kGated = -std::numeric_limits<double>::infinity();

/// Empirical quantile ranks fitted on a set of finite reference scores.
/// A value maps to (r - 1) / (n - 1), where r is its 1-based rank among the
/// references and tied references share the mean rank of their block. Values
/// that fall between references interpolate at half a rank. With a single
/// reference, or all references equal, every value maps to 0.5. The -inf gate
/// passes through untouched.
class QuantileMap {
public:
    QuantileMap() = default;

    explicit QuantileMap(std::vector<double> reference) : ref_(std::move(reference)) {
        ref_.erase(std::remove_if(ref_.begin(), ref_.end(), [](double v) { return v == kGated; }), ref_.end());
        for (double v : ref_) {
            if (std::isnan(v)) throw Error(Errc::InvalidArgument, "cannot quantile-normalize NaN");
        }
        std::sort(ref_.begin(), ref_.end());
    }

    std::size_t size() const noexcept { return ref_.size(); }

    double operator()(double v) const {
        if (v == kGated) return kGated;
        if (std::isnan(v)) throw Error(Errc::InvalidArgument, "cannot quantile-normalize NaN");
        const std::size_t n = ref_.size();
        if (n <= 1 || ref_.front() == ref_.back()) return 0.5;
        const auto lo = std::lower_bound(ref_.begin(), ref_.end(), v);
        const auto hi = std::upper_bound(lo, ref_.end(), v);
        const double below = static_cast<double>(lo - ref_.begin());
        const double equal = static_cast<double>(hi - lo);
        const double rank = equal > 0 ? below + (equal + 1.0) / 2.0 : below + 0.5;
        return std::clamp((rank - 1.0) / static_cast<double>(n - 1), 0.0, 1.0);
    }

private:
    std::vector<double> ref_;
};

/// Quantile-normalizes a score vector against itself.
inline std::vector<double> quantile_normalize(const std::vector<double>& scores) {
    QuantileMap q(scores);
    std::vector<double> out;
    out.reserve(scores.size());
    for (double v : scores) out.push_back(q(v));
    return out;
}

inline QuantileMap fit_quantiles(const ScoreMap& scores) {
    std::vector<double> v;
    v.reserve(scores.size());
    for (const auto& [id, s] : scores) v.push_back(s);
    return QuantileMap(std::move(v));
}

inline ScoreMap quantile_normalize(const ScoreMap& scores) {
    if (scores.empty()) throw Error(Errc::InvalidArgument, "need at least one score");
    const auto q = fit_quantiles(scores);
    ScoreMap out;
    for (const auto& [id, s] : scores) out[id] = q(s);
    return out;
}

}  // namespace lrsp::acquisition
