#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mqf/algebra.hpp"
#include "mqf/error.hpp"
#include "mqf/partition.hpp"

namespace mqf {

/// Truncation control for the zonal-type series.
struct SeriesControl {
    int max_degree = 40;
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int workers = 1;

    void validate() const;
};

/// Outcome of a truncated series. `partial_sums[k]` is the sum through
/// degree k and `layer_norms[k]` the sum of |term| over the partitions of k.
template <class T>
struct SeriesResult {
    T value{};
    int degree_used = 0;
    double tail_estimate = 0.0;
    bool converged = false;
    std::vector<T> partial_sums;
    std::vector<T> layers;
    std::vector<double> layer_norms;
};

// Thrown when the series has not met the stopping rule by max_degree.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, std::complex<double> partial, int degree, double tail)
        : Error(what), partial_(partial), degree_(degree), tail_(tail) {}
    std::complex<double> partial() const noexcept { return partial_; }
    int degree() const noexcept { return degree_; }
    double tail() const noexcept { return tail_; }

private:
    std::complex<double> partial_;
    int degree_;
    double tail_;
};

// Fixed-shape pairwise reduction; the result depends only on the input order.
template <class T>
T pairwise_sum(std::span<const T> xs) {
    if (xs.empty()) return T{};
    if (xs.size() <= 8) {
        T s = xs[0];
        for (std::size_t i = 1; i < xs.size(); ++i) s += xs[i];
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& x) { return std::abs(x); }

/// Sums `layer(k)` for k = 0..max_degree. A layer returns its value and its
/// term-norm. Convergence is declared once two consecutive layers both fall
/// under rel_tol * |partial| + abs_tol; throws TruncationError otherwise.
template <class T, class LayerFn>
SeriesResult<T> sum_series(LayerFn&& layer, const SeriesControl& ctrl, const char* what) {
    ctrl.validate();
    SeriesResult<T> res;
    T sum{};
    double prev_mag = -1.0;
    for (int k = 0; k <= ctrl.max_degree; ++k) {
        auto [value, norm] = layer(k);
        sum += value;
        res.layers.push_back(value);
        res.partial_sums.push_back(sum);
        res.layer_norms.push_back(norm);
        const double mag = magnitude(value);
        const double bound = ctrl.rel_tol * magnitude(sum) + ctrl.abs_tol;
        if (k >= 1 && mag < bound && prev_mag >= 0.0 && prev_mag < bound) {
            res.value = sum;
            res.degree_used = k;
            res.tail_estimate = mag;
            res.converged = true;
            return res;
        }
        prev_mag = mag;
    }
    res.value = sum;
    res.degree_used = ctrl.max_degree;
    res.tail_estimate = prev_mag;
    res.converged = false;
    throw TruncationError(std::string(what) + ": series did not converge within degree " +
                              std::to_string(ctrl.max_degree) + " (last layer magnitude " +
                              std::to_string(prev_mag) + ")",
                          std::complex<double>(sum), ctrl.max_degree, prev_mag);
}

/// Generalised Pochhammer symbol prod_i (a - (i-1) beta/2)_{k_i}, evaluated as
/// the literal finite product (zero at the poles of the gamma-ratio form).
double gen_pochhammer(double a, const Partition& kappa, AlgebraKind beta);

/// Scalar rising factorial (a)_k.
double pochhammer(double a, int k);

/// Multivariate gamma pi^{m(m-1)beta/4} prod_i Gamma(a - (i-1) beta/2).
/// Requires a > (m-1) beta/2.
double mv_gamma(int m, double a, AlgebraKind beta);
double log_mv_gamma(int m, double a, AlgebraKind beta);

/// Volume 2^m pi^{m n beta/2} / Gamma_m^beta[n beta/2] of the Stiefel manifold.
double stiefel_volume(int m, int n, AlgebraKind beta);
double log_stiefel_volume(int m, int n, AlgebraKind beta);

} // namespace mqf
