#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "mqf/algebra.hpp"
#include "mqf/partition.hpp"
#include "mqf/special.hpp"

namespace mqf {

/// Monomial-basis coefficients of the C-normalised Jack polynomials of one
/// weight k, restricted to partitions with at most max_len parts:
///   C_kappa = sum_{mu <= kappa} coeff(kappa, mu) m_mu.
/// Rows come from the Laplace-Beltrami eigen-recurrence over the dominance
/// lattice. Up to k = kExactWeight the recurrence runs in exact rationals.
class JackTable {
public:
    static constexpr int kExactWeight = 12;

    using Row = std::vector<std::pair<std::size_t, double>>;

    // Rows are filled only for kappa with at most row_len parts (row_len < 0: all).
    JackTable(int k, int max_len, AlgebraKind beta, int row_len = -1);

    int weight() const noexcept { return k_; }
    int max_len() const noexcept { return max_len_; }
    int row_len() const noexcept { return row_len_; }
    AlgebraKind beta() const noexcept { return beta_; }
    bool exact() const noexcept { return k_ <= kExactWeight; }

    // Partitions of k with at most max_len parts, reverse-lexicographic.
    const std::vector<Partition>& partitions() const noexcept { return parts_; }
    // Sparse row of kappa (index into partitions()); entries index partitions().
    const Row& row(std::size_t kappa) const { return rows_[kappa]; }

    friend bool operator==(const JackTable& a, const JackTable& b) {
        return a.k_ == b.k_ && a.max_len_ == b.max_len_ && a.row_len_ == b.row_len_ && a.beta_ == b.beta_ &&
               a.rows_ == b.rows_;
    }

private:
    int k_;
    int max_len_;
    int row_len_;
    AlgebraKind beta_;
    std::vector<Partition> parts_;
    std::vector<Row> rows_;
};

/// Process-wide table cache keyed by (k, max_len, row_len, beta). Lookups take a shared
/// lock; a miss builds the table under the exclusive lock.
class JackCache {
public:
    static JackCache& global();

    std::shared_ptr<const JackTable> get(int k, int max_len, AlgebraKind beta, int row_len = -1);
    std::size_t size() const;
    void clear();

private:
    mutable std::shared_mutex mu_;
    std::map<std::tuple<int, int, int, int>, std::shared_ptr<const JackTable>> tables_;
};

/// Evaluates every C_kappa of weight <= max_weight at one spectrum. The
/// monomial symmetric functions are computed once by the variable-by-variable
/// recursion m_mu(x_1..x_j) = m_mu(x_1..x_{j-1}) + sum_v x_j^v m_{mu-v}(x_1..x_{j-1}).
///
/// With max_len below the number of variables the evaluator switches to the
/// horizontal-strip branching rule P_kappa(x_1..x_j) = sum_mu psi_{kappa/mu}
/// x_j^{|kappa/mu|} P_mu(x_1..x_{j-1}), which only visits partitions with at
/// most max_len parts. layer() then rejects longer partitions.
template <class T>
class JackEvaluator {
public:
    JackEvaluator(std::span<const T> eigs, int max_weight, AlgebraKind beta, int max_len = -1);

    int variables() const noexcept { return nvars_; }

    // C_kappa for kappa in enumerate_partitions(k, max_len) order. Partitions
    // longer than the number of variables evaluate to 0.
    std::vector<T> layer(int k, int max_len, int workers = 1) const;

    T value(const Partition& kappa) const;

private:
    struct Snapshot {
        std::shared_ptr<const PartitionIndex> index;
        // Monomial values, or C_kappa values directly in strip mode.
        std::shared_ptr<const std::vector<T>> monomials;
    };

    Snapshot build_monomials(int cap) const;
    Snapshot build_strips(int cap) const;

    // Grows the monomial table (capacity doubling) so that weight k is covered.
    Snapshot reserve(int k) const;

    std::vector<T> eigs_;
    int nvars_;
    int max_weight_;
    AlgebraKind beta_;
    int strip_len_ = -1;
    mutable std::mutex grow_mu_;
    mutable int built_weight_ = -1;
    mutable Snapshot state_;
};

/// C-normalised Jack polynomial at the given spectrum. Homogeneous of degree
/// |kappa|; the weight-k layer sums to (sum of eigs)^k.
template <class T>
T jack_c(const Partition& kappa, std::span<const T> eigs, AlgebraKind beta);

double jack_c(const Partition& kappa, std::initializer_list<double> eigs, AlgebraKind beta);

/// Closed form of C_kappa(I_n) from the hook-length products.
double jack_c_identity(const Partition& kappa, int n, AlgebraKind beta);

/// Truncated 1F0(a; X) = sum_k sum_kappa [a]_kappa C_kappa(X) / k!, whose
/// limit is prod (1 - x_i)^{-a} for max |x_i| < 1.
template <class T>
SeriesResult<T> hypergeom_1F0(double a, std::span<const T> eigs, AlgebraKind beta, const SeriesControl& ctrl);

} // namespace mqf
