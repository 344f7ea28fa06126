#pragma once

#include <complex>
#include <string>
#include <vector>

#include "mqf/elliptical.hpp"
#include "mqf/matalg.hpp"
#include "mqf/special.hpp"

namespace mqf {

/// Which C_kappa(I_d) divides each term of the density and CF series.
///   RankR: d = r = rank(A), the orbital-integral denominator as printed.
///   FullM: d = m.
///   FullN: d = n, the dimension of the unitary group averaged over when the
///          n x n matrix A is integrated out (the classical result).
enum class SplittingConvention { RankR, FullM, FullN };

/// Multiplier of Sigma S inside the CF series: Printed uses i beta,
/// Derived uses i / beta (the value E etr(iWS) forces for beta != 1).
enum class ArgumentScale { Printed, Derived };

std::string to_string(SplittingConvention c);
std::string to_string(ArgumentScale s);
SplittingConvention parse_convention(const std::string& s);

struct SeriesOptions {
    SplittingConvention convention = SplittingConvention::RankR;
    // Pearson VII density: drop the (-1)^k of h^{(k)}(0).
    bool paper_printed_signs = false;
    ArgumentScale cf_scale = ArgumentScale::Printed;
    // Evaluate through h^{(k)}(0) / theta(c) instead of the family closed forms.
    bool generic_path = false;
};

/// W = X* A X with X ~ E_{n x m}(0, Theta, Sigma, h).
struct QuadFormModel {
    HermitianMatrix a;     // n x n, positive semidefinite
    HermitianMatrix theta; // n x n, positive definite
    HermitianMatrix sigma; // m x m, positive definite
    GeneratorFamily family;
    AlgebraKind beta;
    PSDDecomposition decomposition; // non-singular part of A

    int n() const { return a.dim(); }
    int m() const { return sigma.dim(); }
    int rank() const { return decomposition.rank; }
    Dims dims() const { return {m(), n(), beta}; }

    // Validates and decomposes A (beta <= 4).
    static QuadFormModel make(HermitianMatrix a, HermitianMatrix theta, HermitianMatrix sigma,
                              const GeneratorFamily& family, double rank_tol = 0.0);

    EllipticalModel x_model() const;
};

/// Everything the series need, as spectra and determinants. This is the
/// entry point for beta = 8, where no matrix algebra is available.
struct QuadFormSpectra {
    AlgebraKind beta;
    int n = 0;
    int m = 0;
    int r = 0;
    GeneratorFamily family;
    double det_sigma = 1.0;
    double det_theta = 1.0;
    double det_lambda = 1.0;               // product of the r nonzero eigenvalues of A
    std::vector<double> theta_inv_a_plus;  // nonzero eigenvalues of Theta^{-1} A^+ (density)
    std::vector<double> theta_a;           // nonzero eigenvalues of Theta A (CF)

    static QuadFormSpectra from_model(const QuadFormModel& model);
    void validate() const;
};

/// Density of W at a positive definite point, as the series
///   C pi^{N/2} |W|^{beta(n-m+1)/2-1} / (Gamma_m[beta n/2] |Sigma|^{beta n/2} |Theta|^{beta m/2} |Lambda|^{beta m/2})
///   * sum_k h^{(k)}(0)/k! sum_kappa C_kappa(Theta^{-1}A^+) C_kappa(beta Sigma^{-1}W) / C_kappa(I_d).
/// Partial sums in the result include the prefactor. Requires rank(A) >= m.
SeriesResult<double> density_w(const HermitianMatrix& w, const QuadFormModel& model, const SeriesControl& ctrl,
                               const SeriesOptions& opts = {});
// w_eigs: eigenvalues of Sigma^{-1} W; det_w = |W|.
SeriesResult<double> density_w_spectral(const std::vector<double>& w_eigs, double det_w, const QuadFormSpectra& sp,
                                        const SeriesControl& ctrl, const SeriesOptions& opts = {});

/// Characteristic function E etr(i W S), normalised so the degree-0 term is 1:
///   sum_k sum_kappa [beta n/2]_kappa / k! * w_k * C_kappa(Theta A) C_kappa(z Sigma S) / C_kappa(I_d)
/// with w_k = Gamma(N/2) theta(N/2+k) / (Gamma(N/2+k) theta(N/2)) and z from
/// opts.cf_scale. Pearson VII: w_k = g^k / (s - N/2 - k)_k, PoleError at zeros.
SeriesResult<std::complex<double>> cf_w(const HermitianMatrix& s, const QuadFormModel& model,
                                        const SeriesControl& ctrl, const SeriesOptions& opts = {});
// s_eigs: eigenvalues of Sigma S.
SeriesResult<std::complex<double>> cf_w_spectral(const std::vector<double>& s_eigs, const QuadFormSpectra& sp,
                                                 const SeriesControl& ctrl, const SeriesOptions& opts = {});

/// Degree-0 value of the CF series with the printed constants left
/// unnormalised: C pi^{N/2} theta_printed(N/2) / Gamma(N/2) = beta^{N/2} b^{beta-1},
/// b = 2 (normal) or g (Pearson VII).
double cf_raw_printed_prefactor(const GeneratorFamily& family, const Dims& d);

/// |I - 2 i beta Sigma S|^{-d/2} from the eigenvalues of Sigma^{1/2} S Sigma^{1/2}.
std::complex<double> cf_normal_closed(const HermitianMatrix& s, const HermitianMatrix& sigma, double exponent_df);
std::complex<double> cf_normal_closed_spectral(const std::vector<double>& s_eigs, double exponent_df, AlgebraKind beta);
// prod_j (1 - i c t_j)^{-e}.
std::complex<double> det_form(const std::vector<double>& t, double c, double e);

/// Eigenvalues of Sigma^{1/2} S Sigma^{1/2}, i.e. of Sigma S.
std::vector<double> sigma_s_spectrum(const HermitianMatrix& s, const HermitianMatrix& sigma);

struct PartialRow {
    int degree = 0;
    std::complex<double> layer;
    std::complex<double> partial;
    double term_norm = 0.0;
};

enum class SeriesKind { Density, CharacteristicFunction };

/// All K + 1 layers of the density or CF series at one point, with no early
/// stop (diagnostics for truncation studies).
std::vector<PartialRow> series_partial_table(const QuadFormModel& model, SeriesKind kind, const HermitianMatrix& point,
                                             const SeriesControl& ctrl, const SeriesOptions& opts = {});

/// Real part of tr(W S). For beta <= 2 the trace is real for Hermitian
/// W, S and a non-negligible imaginary part raises DomainError.
double trace_ws(const HermitianMatrix& w, const HermitianMatrix& s);

} // namespace mqf
