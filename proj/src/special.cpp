#include "mqf/special.hpp"

#include <numbers>
#include <sstream>

namespace mqf {

void SeriesControl::validate() const {
    if (max_degree < 0) throw DomainError("max_degree must be >= 0");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("series tolerances must be positive");
    if (workers < 1) throw DomainError("workers must be >= 1");
}

double pochhammer(double a, int k) {
    double p = 1.0;
    for (int j = 0; j < k; ++j) p *= a + j;
    return p;
}

double gen_pochhammer(double a, const Partition& kappa, AlgebraKind beta) {
    double p = 1.0;
    for (int i = 0; i < kappa.length(); ++i) p *= pochhammer(a - i * beta.half_beta(), kappa[i]);
    return p;
}

namespace {

void check_mv_gamma_domain(int m, double a, AlgebraKind beta) {
    if (m < 1) throw DomainError("mv_gamma: m must be positive");
    for (int i = 0; i < m; ++i) {
        const double arg = a - i * beta.half_beta();
        if (!(arg > 0.0)) {
            std::ostringstream os;
            os << "mv_gamma: factor " << i + 1 << " has Gamma argument a-(i-1)beta/2 = " << arg
               << " <= 0 (need a > (m-1)beta/2 = " << (m - 1) * beta.half_beta() << ")";
            throw DomainError(os.str());
        }
    }
}

} // namespace

double log_mv_gamma(int m, double a, AlgebraKind beta) {
    check_mv_gamma_domain(m, a, beta);
    double s = m * (m - 1) * beta.beta() / 4.0 * std::log(std::numbers::pi);
    for (int i = 0; i < m; ++i) s += std::lgamma(a - i * beta.half_beta());
    return s;
}

double mv_gamma(int m, double a, AlgebraKind beta) {
    check_mv_gamma_domain(m, a, beta);
    double p = std::pow(std::numbers::pi, m * (m - 1) * beta.beta() / 4.0);
    for (int i = 0; i < m; ++i) p *= std::tgamma(a - i * beta.half_beta());
    return p;
}

double log_stiefel_volume(int m, int n, AlgebraKind beta) {
    if (m < 1 || n < 1) throw DomainError("stiefel_volume: dimensions must be positive");
    if (m > n) throw DomainError("stiefel_volume: requires m <= n");
    return m * std::log(2.0) + m * n * beta.half_beta() * std::log(std::numbers::pi) -
           log_mv_gamma(m, n * beta.half_beta(), beta);
}

double stiefel_volume(int m, int n, AlgebraKind beta) { return std::exp(log_stiefel_volume(m, n, beta)); }

} // namespace mqf
