#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mqf/json_io.hpp"
#include "mqf/partition.hpp"
#include "mqf/quadform.hpp"

namespace mqf {

/// A theoretical value competing to explain an estimate. Candidates that
/// cannot be evaluated (divergent series, zero denominator, wrong family)
/// stay in the report with available = false and the reason in `note`.
struct Candidate {
    std::string label;
    std::complex<double> value;
    bool available = true;
    std::string note;
};

/// Outcome of one check. The verdict is "matches-<label>" when exactly one
/// group of numerically coincident candidates lies within `band` of the
/// estimate, "inconclusive" when several distinct groups do, and "fail" when
/// none does. band = max(3 SE, tolerance |estimate|, a small floor).
struct CheckReport {
    std::string name;
    json params;
    std::string inputs_digest;
    std::complex<double> estimate;
    double standard_error = 0.0;
    double band = 0.0;
    bool exact = false; // estimate from an exact oracle rather than Monte Carlo
    std::string method;
    std::vector<Candidate> candidates;
    std::vector<Candidate> references; // reported, not part of the verdict
    std::string verdict;
    std::vector<std::string> matched;
    std::uint64_t sample_count = 0;
    std::uint64_t seed = 0;
    double wall_time = 0.0;
    std::vector<std::string> diagnostics;

    bool failed() const { return verdict == "fail"; }
    // wall_time is included only with `timing`, so that reports are
    // byte-reproducible by default.
    json to_json(bool timing = false) const;
};

// Candidates closer than this (relative to max(1, |value|)) count as one.
inline constexpr double kCoincidence = 1e-6;

/// Fills band, matched and verdict from the estimate, SE and candidates.
void decide(CheckReport& report, double tolerance);

std::string fnv1a_digest(const std::string& text);

/// Mean of f(0..n-1) with its standard error. Samples are grouped in fixed
/// chunks whose moments are merged pairwise, so the result does not depend
/// on the worker count.
struct MCEstimate {
    std::complex<double> mean;
    double standard_error = 0.0;
    double var_re = 0.0;
    double var_im = 0.0;
};
MCEstimate mc_mean(std::uint64_t n, int workers, const std::function<std::complex<double>(std::uint64_t)>& f);

/// E_H C_kappa(X1 H X2 H*) over Haar H in U^beta(m) against
/// C(X1) C(X2) / C(I_r) (r = rank X2) and C(X1) C(X2) / C(I_m). X2 must be PSD.
CheckReport check_orbital_integral(const HermitianMatrix& x1, const HermitianMatrix& x2, const Partition& kappa,
                                   std::uint64_t samples, std::uint64_t seed, int workers = 1);

/// E_{H1} C_kappa(X1 H1 X2 H1*) over uniform H1 in V_{m,n} (the Stiefel
/// volume divided out) against the denominators C(I_r) and C(I_n).
CheckReport check_stiefel_splitting(const HermitianMatrix& x1, const HermitianMatrix& x2, const Partition& kappa,
                                    std::uint64_t samples, std::uint64_t seed, int workers = 1);

/// linear_volume_factor(A, m) against sqrt(det G), G the Gram matrix of the
/// real-linear map X -> AX on n x m matrices. No sampling.
CheckReport check_jacobian_linear(const DAMatrix& a, int m);
/// singular_volume_factor(A, C, m) against the ratio of Gram volumes of
/// Z -> ACZ and Z -> CZ.
CheckReport check_jacobian_singular(const DAMatrix& a, const DAMatrix& c, int m);

/// beta = 1: int etr(-XZ) |X|^{a-(m+1)/2} C_kappa(XU) dX, estimated with
/// X ~ Wishart_m(2a, (2Z)^{-1}), against [a]_kappa Gamma_m[a] |Z|^{-a} C_kappa(U Z^{-1}).
CheckReport check_laplace_integral(double a, const Partition& kappa, const HermitianMatrix& u,
                                   const HermitianMatrix& z, std::uint64_t samples, std::uint64_t seed,
                                   int workers = 1);

/// Empirical E exp(i tr(WS)) against the CF series under each convention and
/// the determinant closed forms with exponents n and r.
CheckReport check_cf_empirical(const QuadFormModel& model, const HermitianMatrix& s, std::uint64_t samples,
                               std::uint64_t seed, const SeriesControl& ctrl, const SeriesOptions& opts = {},
                               int workers = 1);

/// Density of W at one point: an exact oracle where one exists (scaled
/// chi-square / Wishart for equal nonzero eigenvalues of Theta A under the
/// normal family, a one-dimensional mixture integral for Pearson VII with
/// m = 1), a box-count Monte Carlo estimate otherwise. Candidates: the density
/// series (both sign variants for Pearson VII) and the series of the reduced
/// model with n = rank(A).
CheckReport check_density_empirical(const QuadFormModel& model, const HermitianMatrix& w, std::uint64_t samples,
                                    std::uint64_t seed, const SeriesControl& ctrl, const SeriesOptions& opts = {},
                                    double tolerance = 0.02, int workers = 1);

// Oracles shared with the tests.
double chi_square_pdf(double x, double k);
double wishart_pdf_real(const Eigen::MatrixXd& w, double dof, const Eigen::MatrixXd& sigma);
// Density of W = X* A X, m = 1, beta = 1, X Pearson VII with Theta A having
// r equal nonzero eigenvalues lambda: Gamma scale mixture of lambda sigma^2 chi^2_r.
double pearson_quadform_pdf_mixture(double w, double lambda, double sigma2, int r, int n, double s, double g);

/// Model with n' = rank(A): A' = Lambda, Theta' = P1* Theta P1; a Pearson VII
/// exponent drops by beta (n - r) m / 2 (the marginal of the first r rows).
QuadFormModel reduced_model(const QuadFormModel& model);

// {"family": .., "a": matrix, "theta": matrix, "sigma": matrix}
QuadFormModel quadform_model_from_json(const json& j);
json quadform_model_to_json(const QuadFormModel& m);

/// Runs a list of {check, params, N, seed} entries. Returns the suite report;
/// `failures` receives the number of "fail" verdicts.
json run_suite(const json& config, int workers, bool timing, int& failures);
json default_suite_config(std::uint64_t seed);

} // namespace mqf
