#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lrsp/error.hpp"
#include "lrsp/util/io.hpp"

namespace lrsp::memory {

using ActionCounts = std::map<std::string, std::size_t>;

/// Entropy in nats of the action distribution in `counts`, restricted to
/// `scope` when given. Probabilities are renormalized over the in-scope mass;
/// no in-scope mass gives 0.
inline double action_entropy(const ActionCounts& counts, const std::set<std::string>* scope = nullptr) {
    double total = 0;
    for (const auto& [a, n] : counts) {
        if (!scope || scope->count(a)) total += static_cast<double>(n);
    }
    if (total <= 0) return 0;
    double h = 0;
    for (const auto& [a, n] : counts) {
        if (n == 0 || (scope && !scope->count(a))) continue;
        const double p = static_cast<double>(n) / total;
        h -= p * std::log(p);
    }
    return h;
}

using ActionTable = std::shared_ptr<const std::vector<std::vector<std::string>>>;

/// A replay memory: at most `capacity` example indices with the action
/// counts of their LFs.
class MemoryBuffer {
public:
    MemoryBuffer() = default;
    MemoryBuffer(std::size_t capacity, ActionTable actions) : capacity_(capacity), actions_(std::move(actions)) {}

    std::size_t capacity() const noexcept { return capacity_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const std::vector<std::size_t>& entries() const noexcept { return entries_; }
    const std::vector<std::size_t>& clusters() const noexcept { return clusters_; }
    const ActionCounts& action_counts() const noexcept { return counts_; }
    const std::vector<std::string>& actions_of(std::size_t item) const { return actions_->at(item); }

    void push(std::size_t item, std::size_t cluster = 0) {
        if (entries_.size() >= capacity_) throw Error(Errc::InvalidArgument, "memory buffer is full");
        entries_.push_back(item);
        clusters_.push_back(cluster);
        add(item, +1);
    }

    /// Replaces the entry in `slot` with `item`.
    void replace(std::size_t slot, std::size_t item) {
        add(entries_.at(slot), -1);
        entries_[slot] = item;
        add(item, +1);
    }

    /// Recount from scratch; equals action_counts() at all times.
    ActionCounts recount() const {
        ActionCounts c;
        for (std::size_t e : entries_) {
            for (const auto& a : (*actions_)[e]) ++c[a];
        }
        return c;
    }

    double entropy(const std::set<std::string>* scope = nullptr) const {
        if (entries_.empty()) throw Error(Errc::EmptyBuffer, "entropy of an empty memory");
        return action_entropy(counts_, scope);
    }

private:
    void add(std::size_t item, int sign) {
        for (const auto& a : (*actions_)[item]) {
            auto& n = counts_[a];
            if (sign > 0) {
                ++n;
            } else {
                --n;
                if (n == 0) counts_.erase(a);
            }
        }
    }

    std::size_t capacity_ = 0;
    ActionTable actions_;
    std::vector<std::size_t> entries_;
    std::vector<std::size_t> clusters_;
    ActionCounts counts_;
};

/// Memory manifest rows {task, slot, id, cluster, actions}.
inline std::vector<io::Json> memory_manifest(const MemoryBuffer& buf, const std::vector<std::string>& ids,
                                             const std::string& task) {
    std::vector<io::Json> out;
    for (std::size_t s = 0; s < buf.size(); ++s) {
        io::Json j;
        j["task"] = task;
        j["slot"] = s;
        j["id"] = ids[buf.entries()[s]];
        j["cluster"] = buf.clusters()[s];
        j["actions"] = buf.actions_of(buf.entries()[s]);
        out.push_back(std::move(j));
    }
    return out;
}

}  // namespace lrsp::memory
