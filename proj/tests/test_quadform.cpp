#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

#include "mqf/matalg.hpp"
#include "mqf/quadform.hpp"
#include "mqf/rng.hpp"

using namespace mqf;
using doctest::Approx;
using cd = std::complex<double>;

namespace {

constexpr double pi = std::numbers::pi;

SeriesControl tight() {
    SeriesControl c;
    c.max_degree = 100;
    c.rel_tol = 1e-12;
    c.abs_tol = 1e-15;
    return c;
}

QuadFormModel model(const std::vector<double>& a, const std::vector<double>& sigma, GeneratorFamily f = GeneratorFamily::normal(),
                    int beta = 1) {
    const AlgebraKind b(beta);
    return QuadFormModel::make(HermitianMatrix::diagonal(b, a), HermitianMatrix::identity(b, static_cast<int>(a.size())),
                               HermitianMatrix::diagonal(b, sigma), f);
}

HermitianMatrix scalar(double v, int beta = 1) { return HermitianMatrix::diagonal(AlgebraKind(beta), {v}); }

double chi2_pdf(double x, double k) {
    return std::exp((k / 2 - 1) * std::log(x) - x / 2 - (k / 2) * std::log(2.0) - std::lgamma(k / 2));
}

// Real Wishart_p(dof, Sigma) density.
double wishart_pdf(const Eigen::MatrixXd& w, double dof, const Eigen::MatrixXd& sigma) {
    const int p = static_cast<int>(w.rows());
    double lgp = p * (p - 1) / 4.0 * std::log(pi);
    for (int i = 0; i < p; ++i) lgp += std::lgamma(dof / 2 - i / 2.0);
    const double log_pdf = (dof - p - 1) / 2 * std::log(w.determinant()) - 0.5 * (sigma.inverse() * w).trace() -
                           dof * p / 2 * std::log(2.0) - dof / 2 * std::log(sigma.determinant()) - lgp;
    return std::exp(log_pdf);
}

HermitianMatrix random_pd(int beta, int n, std::uint64_t stream, double scale) {
    StreamRng rng(5150, stream);
    const DAMatrix g = gaussian_matrix(AlgebraKind(beta), n, n + 2, scale * scale / (n + 2), rng);
    return HermitianMatrix(g * g.adjoint());
}

} // namespace

TEST_CASE("scalar chi-square density and CF") {
    for (int n : {1, 2, 5})
        for (double s2 : {0.5, 1.0, 2.0}) {
            std::vector<double> a(n, 1.0);
            const auto m = model(a, {s2});
            for (double w : {0.2, 1.0, 3.0}) {
                const double want = chi2_pdf(w / s2, n) / s2;
                CHECK(density_w(scalar(w), m, tight()).value == Approx(want).epsilon(1e-10));
            }
            for (double s : {-0.1, 0.05, 0.15}) {
                const cd want = std::pow(cd(1.0, -2.0 * s2 * s), -n / 2.0);
                CHECK(std::abs(cf_w(scalar(s), m, tight()).value - want) < 1e-10);
            }
        }
    // n = 1 closed form from the one-dimensional change of variables
    const double sigma = 1.3, w = 0.8;
    const double want = std::pow(w, -0.5) * std::exp(-w / (2 * sigma * sigma)) / (sigma * std::sqrt(2 * pi));
    CHECK(density_w(scalar(w), model({1.0}, {sigma * sigma}), tight()).value == Approx(want).epsilon(1e-10));
}

TEST_CASE("real Wishart density") {
    Eigen::MatrixXd sig(2, 2);
    sig << 1.0, 0.3, 0.3, 0.8;
    const AlgebraKind b(1);
    for (int n : {2, 3}) {
        const auto m = QuadFormModel::make(HermitianMatrix::identity(b, n), HermitianMatrix::identity(b, n),
                                           HermitianMatrix(DAMatrix::from_real(b, sig)), GeneratorFamily::normal());
        Eigen::MatrixXd w(2, 2);
        w << 0.9, -0.2, -0.2, 0.7;
        const double got = density_w(HermitianMatrix(DAMatrix::from_real(b, w)), m, tight()).value;
        CHECK(got == Approx(wishart_pdf(w, n, sig)).epsilon(1e-10));
    }
}

TEST_CASE("rank and shape preconditions") {
    const auto m = model({1.0, 0.0, 0.0}, {1.0, 1.0});
    CHECK(m.rank() == 1);
    CHECK_THROWS_AS(density_w(HermitianMatrix::identity(AlgebraKind(1), 2), m, tight()), RankError);
    CHECK_THROWS_AS(model({0.0, 0.0}, {1.0}), RankError);
    CHECK_THROWS_AS(model({1.0}, {1.0, 1.0}), DomainError);
}

TEST_CASE("CF at zero is one") {
    for (int beta : {1, 2, 4})
        for (const auto& f : {GeneratorFamily::normal(), GeneratorFamily::pearson7(40.0, 2.0),
                              GeneratorFamily::student_t(3.0), GeneratorFamily::cauchy()}) {
            const auto m = model({1.0, 0.5, 0.0}, {1.0, 2.0}, f, beta);
            const auto r = cf_w(HermitianMatrix(DAMatrix(AlgebraKind(beta), 2, 2)), m, tight());
            CHECK(r.value == cd(1.0, 0.0));
            CHECK(r.degree_used == 0);
        }
    QuadFormSpectra sp;
    sp.beta = AlgebraKind(8);
    sp.n = 3;
    sp.m = 2;
    sp.r = 2;
    sp.theta_a = {1.0, 0.5};
    sp.theta_inv_a_plus = {1.0, 2.0};
    sp.det_lambda = 0.5;
    for (const auto& f : {GeneratorFamily::normal(), GeneratorFamily::pearson7(40.0, 2.0)}) {
        sp.family = f;
        CHECK(cf_w_spectral({0.0, 0.0}, sp, tight()).value == cd(1.0, 0.0));
    }
}

TEST_CASE("CF conjugate symmetry") {
    const AlgebraKind b(2);
    const auto m = QuadFormModel::make(random_pd(2, 3, 1, 1.0), HermitianMatrix::identity(b, 3),
                                       random_pd(2, 2, 2, 1.0), GeneratorFamily::normal());
    const HermitianMatrix s = random_pd(2, 2, 3, 0.05);
    const HermitianMatrix neg(-1.0 * s.matrix());
    const cd p = cf_w(s, m, tight()).value, q = cf_w(neg, m, tight()).value;
    CHECK(std::abs(p - std::conj(q)) < 1e-12);
}

TEST_CASE("fast and generic evaluation paths agree") {
    SeriesOptions generic;
    generic.generic_path = true;
    for (int beta : {1, 2, 4})
        for (const auto& f : {GeneratorFamily::normal(), GeneratorFamily::pearson7(80.25, 30.0)}) {
            const auto m = model({1.0, 0.7, 0.4}, {0.8, 1.1}, f, beta);
            const HermitianMatrix w = HermitianMatrix::diagonal(AlgebraKind(beta), {0.3, 0.2});
            const auto r1 = density_w(w, m, tight()), r2 = density_w(w, m, tight(), generic);
            // beta = 4 runs to degree ~70 with heavy cancellation, so the bound scales with the term sizes.
            double mass = 0.0;
            for (double v : r1.layer_norms) mass += v;
            CHECK(std::abs(r1.value - r2.value) <= 1e-13 * mass + 1e-12 * std::abs(r1.value));
            const HermitianMatrix s = HermitianMatrix::diagonal(AlgebraKind(beta), {0.05, -0.03});
            const cd c1 = cf_w(s, m, tight()).value, c2 = cf_w(s, m, tight(), generic).value;
            CHECK(std::abs(c1 - c2) < 1e-10);
        }
}

TEST_CASE("conventions coincide when the rank equals m") {
    const auto m = model({1.0, 0.6, 0.0}, {1.0, 0.7});
    REQUIRE(m.rank() == 2);
    SeriesOptions rank_r, full_m;
    full_m.convention = SplittingConvention::FullM;
    const HermitianMatrix w = HermitianMatrix::diagonal(AlgebraKind(1), {0.4, 0.9});
    CHECK(density_w(w, m, tight(), rank_r).value == Approx(density_w(w, m, tight(), full_m).value).epsilon(1e-13));
    const HermitianMatrix s = HermitianMatrix::diagonal(AlgebraKind(1), {0.1, 0.2});
    CHECK(std::abs(cf_w(s, m, tight(), rank_r).value - cf_w(s, m, tight(), full_m).value) < 1e-13);
}

TEST_CASE("idempotent A: full-n series against the exponent-r closed form") {
    const auto m = model({1.0, 1.0, 0.0, 0.0}, {1.0, 1.0});
    Eigen::MatrixXd s(2, 2);
    s << 0.12, 0.05, 0.05, -0.08;
    const HermitianMatrix sh(DAMatrix::from_real(AlgebraKind(1), s));
    SeriesOptions full_n;
    full_n.convention = SplittingConvention::FullN;
    const cd series = cf_w(sh, m, tight(), full_n).value;
    const cd closed_r = cf_normal_closed(sh, m.sigma, 2.0);
    const cd closed_n = cf_normal_closed(sh, m.sigma, 4.0);
    CHECK(std::abs(series - closed_r) < 1e-10);
    CHECK(std::abs(series - closed_n) > 1e-3);
    // The default convention reproduces the exponent-n form instead.
    CHECK(std::abs(cf_w(sh, m, tight()).value - closed_n) < 1e-10);
}

TEST_CASE("t-family CF pole") {
    const auto m = model({1.0, 1.0}, {1.0}, GeneratorFamily::student_t(2.0));
    try {
        (void)cf_w(scalar(0.1), m, tight());
        FAIL("expected a pole");
    } catch (const PoleError& e) {
        CHECK(e.degree() == 1);
    }
}

TEST_CASE("spectral entry points reproduce the matrix path") {
    for (int beta : {1, 2, 4}) {
        const AlgebraKind b(beta);
        const auto m = QuadFormModel::make(random_pd(beta, 3, 20 + beta, 1.0), random_pd(beta, 3, 30 + beta, 1.0),
                                           random_pd(beta, 2, 40 + beta, 1.0), GeneratorFamily::pearson7(80.5, 30.0));
        const auto sp = QuadFormSpectra::from_model(m);
        const HermitianMatrix w = random_pd(beta, 2, 50 + beta, 0.3);
        const auto sw = eig_hermitian(congruence(inv_sqrt_pd(m.sigma).matrix(), w));
        // The spectral path takes the eigenvalues of Sigma^{-1} W along with |W|.
        const double got = density_w_spectral(sw, det_pd(w), sp, tight()).value;
        CHECK(got == Approx(density_w(w, m, tight()).value).epsilon(1e-9));
        const HermitianMatrix s = random_pd(beta, 2, 60 + beta, 0.01);
        const cd c = cf_w_spectral(sigma_s_spectrum(s, m.sigma), sp, tight()).value;
        CHECK(std::abs(c - cf_w(s, m, tight()).value) < 1e-10);
    }
}

TEST_CASE("beta = 8 through spectra") {
    QuadFormSpectra sp;
    sp.beta = AlgebraKind(8);
    sp.n = 2;
    sp.m = 1;
    sp.r = 2;
    sp.family = GeneratorFamily::normal();
    sp.theta_a = {1.0, 1.0};
    sp.theta_inv_a_plus = {1.0, 1.0};
    // m = 1, A = I_2, normal: beta W is chi-square with 16 degrees of freedom.
    const double w = 1.7;
    CHECK(density_w_spectral({w}, w, sp, tight()).value == Approx(8 * chi2_pdf(8 * w, 16)).epsilon(1e-8));
    SeriesOptions derived;
    derived.cf_scale = ArgumentScale::Derived;
    const cd want = std::pow(cd(1.0, -2.0 * 0.3 / 8), -8.0);
    CHECK(std::abs(cf_w_spectral({0.3}, sp, tight(), derived).value - want) < 1e-10);
    CHECK_THROWS_AS(model({1.0, 1.0}, {1.0}, GeneratorFamily::normal(), 8), UnsupportedAlgebra);
}

TEST_CASE("partial-sum table") {
    const auto m = model({1.0, 0.5}, {1.0});
    SeriesControl c = tight();
    c.max_degree = 12;
    const auto rows = series_partial_table(m, SeriesKind::CharacteristicFunction, scalar(0.05), c);
    REQUIRE(rows.size() == 13);
    CHECK(rows[0].degree == 0);
    CHECK(rows[0].partial == cd(1.0, 0.0));
    for (std::size_t k = 2; k < rows.size(); ++k) CHECK(rows[k].term_norm < rows[k - 1].term_norm);
    CHECK(std::abs(rows.back().partial - cf_w(scalar(0.05), m, tight()).value) < 1e-12);
}

TEST_CASE("truncation reports the partial sum") {
    const auto m = model({1.0, 1.0}, {1.0});
    SeriesControl c;
    c.max_degree = 3;
    CHECK_THROWS_AS(density_w(scalar(2.0), m, c), TruncationError);
}
