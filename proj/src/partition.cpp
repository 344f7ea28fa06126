#include "mqf/partition.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

#include "mqf/error.hpp"

namespace mqf {

Partition::Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] <= 0)
            throw DomainError("partition parts must be positive: " + str());
        if (i > 0 && parts_[i] > parts_[i - 1])
            throw DomainError("partition parts must be non-increasing: " + str());
    }
    weight_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

Partition Partition::conjugate() const {
    std::vector<int> conj(parts_.empty() ? 0 : parts_.front(), 0);
    for (int p : parts_)
        for (int j = 0; j < p; ++j) ++conj[j];
    return Partition(std::move(conj));
}

bool Partition::dominates(const Partition& other) const {
    int a = 0, b = 0;
    const std::size_t n = std::max(parts_.size(), other.parts_.size());
    for (std::size_t i = 0; i < n; ++i) {
        a += (*this)[i];
        b += other[i];
        if (a < b) return false;
    }
    return true;
}

std::string Partition::str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i];
    os << ')';
    return os.str();
}

namespace {

void enumerate_rec(int remaining, int max_part, int slots, std::vector<int>& cur, std::vector<Partition>& out) {
    if (remaining == 0) {
        out.emplace_back(cur);
        return;
    }
    if (slots == 0) return;
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
        // Remaining slots must be able to hold what is left.
        if (static_cast<long>(p) * slots < remaining) break;
        cur.push_back(p);
        enumerate_rec(remaining - p, p, slots - 1, cur, out);
        cur.pop_back();
    }
}

} // namespace

std::vector<Partition> enumerate_partitions(int k, int max_len) {
    if (k < 0) throw DomainError("enumerate_partitions: negative weight");
    std::vector<Partition> out;
    std::vector<int> cur;
    enumerate_rec(k, k, std::max(max_len, 0), cur, out);
    return out;
}

PartitionIndex::PartitionIndex(int max_weight, int max_len) : max_weight_(max_weight), max_len_(max_len) {
    std::map<std::vector<int>, std::size_t> lookup;
    offsets_.push_back(0);
    for (int w = 0; w <= max_weight; ++w) {
        for (auto& p : enumerate_partitions(w, max_len)) {
            lookup.emplace(p.parts(), parts_.size());
            parts_.push_back(std::move(p));
        }
        offsets_.push_back(parts_.size());
    }
    removals_.resize(parts_.size());
    for (std::size_t idx = 0; idx < parts_.size(); ++idx) {
        const auto& parts = parts_[idx].parts();
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i > 0 && parts[i] == parts[i - 1]) continue;
            std::vector<int> rest(parts);
            // Removing the last copy of a value keeps the order non-increasing.
            std::size_t last = i;
            while (last + 1 < parts.size() && parts[last + 1] == parts[i]) ++last;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(last));
            removals_[idx].emplace_back(parts[i], lookup.at(rest));
        }
    }
}

std::shared_ptr<const PartitionIndex> PartitionIndex::shared(int max_weight, int max_len) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const PartitionIndex>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{max_weight, max_len}];
    if (!slot) slot = std::make_shared<const PartitionIndex>(max_weight, max_len);
    return slot;
}

} // namespace mqf
