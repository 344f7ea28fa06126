#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace mqf {

// Integer partition with non-increasing, strictly positive parts.
class Partition {
public:
    Partition() = default;
    Partition(std::initializer_list<int> parts);
    explicit Partition(std::vector<int> parts);

    const std::vector<int>& parts() const noexcept { return parts_; }
    int weight() const noexcept { return weight_; }
    int length() const noexcept { return static_cast<int>(parts_.size()); }
    bool empty() const noexcept { return parts_.empty(); }

    // Part i (0-based); zero beyond the length.
    int operator[](std::size_t i) const noexcept { return i < parts_.size() ? parts_[i] : 0; }

    // Conjugate partition (column lengths of the Young diagram).
    Partition conjugate() const;

    // Dominance order: this >= other iff every prefix sum is at least as large.
    bool dominates(const Partition& other) const;

    std::string str() const;

    friend bool operator==(const Partition& a, const Partition& b) { return a.parts_ == b.parts_; }
    friend std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
        return a.parts_ <=> b.parts_;
    }

private:
    std::vector<int> parts_;
    int weight_ = 0;
};

// All partitions of k with at most max_len parts, reverse-lexicographic
// order (the largest first part first). k = 0 yields the empty partition.
std::vector<Partition> enumerate_partitions(int k, int max_len);

// All partitions of weight 0..max_weight with at most max_len parts,
// grouped by weight in enumerate_partitions order, with removal links used
// by the monomial-symmetric-function recursion.
class PartitionIndex {
public:
    PartitionIndex(int max_weight, int max_len);

    int max_weight() const noexcept { return max_weight_; }
    int max_len() const noexcept { return max_len_; }
    std::size_t size() const noexcept { return parts_.size(); }

    const Partition& at(std::size_t idx) const { return parts_[idx]; }
    // First global index of the weight-w group and its size.
    std::size_t group_begin(int w) const { return offsets_[w]; }
    std::size_t group_size(int w) const { return offsets_[w + 1] - offsets_[w]; }

    // For each partition, pairs (part value v, index of the partition with one v removed).
    const std::vector<std::pair<int, std::size_t>>& removals(std::size_t idx) const { return removals_[idx]; }

    static std::shared_ptr<const PartitionIndex> shared(int max_weight, int max_len);

private:
    int max_weight_;
    int max_len_;
    std::vector<Partition> parts_;
    std::vector<std::size_t> offsets_;
    std::vector<std::vector<std::pair<int, std::size_t>>> removals_;
};

} // namespace mqf
