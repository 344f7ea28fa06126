#include <doctest.h>

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "mqf/elliptical.hpp"
#include "mqf/matalg.hpp"

using namespace mqf;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

DAMatrix scalar(int beta, double re, double im = 0.0) {
    DAMatrix y(AlgebraKind(beta), 1, 1);
    y.comp(0, 0, 0) = re;
    if (beta > 1) y.comp(0, 0, 1) = im;
    return y;
}

} // namespace

TEST_CASE("generator derivatives at zero") {
    const Dims d{1, 1, AlgebraKind(1)};
    CHECK(h_deriv0(GeneratorFamily::normal(), 0, d) == 1.0);
    CHECK(h_deriv0(GeneratorFamily::normal(), 3, d) == Approx(-0.125));
    const auto p = GeneratorFamily::pearson7(3.0, 2.0);
    CHECK(h_deriv0(p, 1, d) == Approx(-1.5));
    CHECK(h_deriv0(p, 1, d, true) == Approx(1.5));
    // one-sided differences, h is only defined on u >= 0
    const double e = 1e-4;
    const double h0 = h_value(p, 0.0, d), h1 = h_value(p, e, d), h2 = h_value(p, 2 * e, d);
    const double fd1 = (-3 * h0 + 4 * h1 - h2) / (2 * e);
    const double fd2 = (h0 - 2 * h1 + h2) / (e * e);
    CHECK(fd1 == Approx(h_deriv0(p, 1, d)).epsilon(1e-6));
    CHECK(fd2 == Approx(h_deriv0(p, 2, d)).epsilon(1e-3));
    CHECK_THROWS_AS(h_value(p, -1.0, d), DomainError);
}

TEST_CASE("radial moments") {
    const Dims d{1, 1, AlgebraKind(1)};
    CHECK(radial_moment(GeneratorFamily::normal(), 1.0, d) == Approx(2.0).epsilon(1e-14));
    CHECK(radial_moment(GeneratorFamily::pearson7(3.0, 1.0), 1.0, d) == Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(radial_moment(GeneratorFamily::pearson7(3.0, 1.0), 3.0, d), DomainError);
    for (int beta : {1, 2})
        for (int m : {1, 2})
            for (int n : {1, 2}) {
                const Dims dd{m, n, AlgebraKind(beta)};
                for (const auto& f : {GeneratorFamily::normal(), GeneratorFamily::pearson7(6.5, 1.7),
                                      GeneratorFamily::student_t(5.0)})
                    for (double c : {0.5, dd.half_dim(), dd.half_dim() + 1.0}) {
                        if (f.kind != GeneratorFamily::Kind::Normal && !(bind(f, dd).s > c)) continue;
                        CHECK(radial_moment_quadrature(f, c, dd) == Approx(radial_moment(f, c, dd)).epsilon(1e-8));
                    }
            }
    // The printed t-family moment coincides with direct integration when beta = 1.
    for (int m : {1, 2}) {
        const Dims dd{m, 2, AlgebraKind(1)};
        const auto t = GeneratorFamily::student_t(7.0);
        for (double c : {1.0, 2.0, 3.0})
            CHECK(radial_moment_printed(t, c, dd) == Approx(radial_moment(t, c, dd)).epsilon(1e-12));
    }
}

TEST_CASE("normalising constants") {
    for (int beta : {1, 2})
        for (int m : {1, 2})
            for (int n : {1, 2}) {
                const AlgebraKind b(beta);
                const double half = 0.5 * beta * m * n;
                CHECK(normalizing_constant(GeneratorFamily::normal(), m, n, b) ==
                      Approx(std::pow(2 * pi / beta, -half)).epsilon(1e-13));
                const double s = 6.0, g = 1.5;
                const double pearson = std::tgamma(s) / (std::pow(pi * g / beta, half) * std::tgamma(s - half));
                CHECK(normalizing_constant(GeneratorFamily::pearson7(s, g), m, n, b) ==
                      Approx(pearson).epsilon(1e-13));
                for (const auto& f : {GeneratorFamily::normal(), GeneratorFamily::pearson7(s, g)})
                    CHECK(normalizing_constant_quadrature(f, m, n, b) ==
                          Approx(normalizing_constant(f, m, n, b)).epsilon(1e-8));
            }
    CHECK_THROWS_AS(normalizing_constant(GeneratorFamily::pearson7(1.0, 1.0), 1, 2, AlgebraKind(1)), NonNormalizable);
}

TEST_CASE("scalar densities at the origin") {
    const auto normal1 = EllipticalModel::standard(GeneratorFamily::normal(), 1, 1, AlgebraKind(1));
    CHECK(density_x(scalar(1, 0.0), normal1) == Approx(1.0 / std::sqrt(2 * pi)).epsilon(1e-14));
    const auto cauchy = EllipticalModel::standard(GeneratorFamily::student_t(1.0), 1, 1, AlgebraKind(1));
    CHECK(density_x(scalar(1, 0.0), cauchy) == Approx(1.0 / pi).epsilon(1e-14));
    const auto cauchy2 = EllipticalModel::standard(GeneratorFamily::cauchy(), 1, 1, AlgebraKind(1));
    CHECK(density_x(scalar(1, 0.7), cauchy2) == Approx(1.0 / (pi * 1.49)).epsilon(1e-14));
    const auto normal2 = EllipticalModel::standard(GeneratorFamily::normal(), 1, 1, AlgebraKind(2));
    CHECK(density_x(scalar(2, 0.0), normal2) == Approx(1.0 / pi).epsilon(1e-14));
}

TEST_CASE("densities integrate to one") {
    using boost::math::quadrature::tanh_sinh;
    using boost::math::quadrature::exp_sinh;
    const auto p = EllipticalModel::standard(GeneratorFamily::pearson7(2.5, 3.0), 1, 1, AlgebraKind(1));
    tanh_sinh<double> ts;
    const double real_mass =
        ts.integrate([&](double y) { return density_x(scalar(1, y), p); }, -std::numeric_limits<double>::infinity(),
                     std::numeric_limits<double>::infinity());
    CHECK(real_mass == Approx(1.0).epsilon(1e-9));
    // beta = 2 scalar: integrate over the plane in polar coordinates.
    const auto c = EllipticalModel::standard(GeneratorFamily::pearson7(2.5, 3.0), 1, 1, AlgebraKind(2));
    exp_sinh<double> es;
    const double complex_mass = es.integrate([&](double r) { return 2 * pi * r * density_x(scalar(2, r), c); });
    CHECK(complex_mass == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("general model density") {
    auto m = EllipticalModel::standard(GeneratorFamily::normal(), 2, 1, AlgebraKind(1));
    m.sigma = HermitianMatrix::diagonal(AlgebraKind(1), {4.0});
    m.theta = HermitianMatrix::diagonal(AlgebraKind(1), {1.0, 9.0});
    DAMatrix y(AlgebraKind(1), 2, 1);
    y.comp(0, 0, 0) = 1.0;
    y.comp(1, 0, 0) = -2.0;
    // independent N(0, 4) and N(0, 36)
    const double want = std::exp(-1.0 / 8) / std::sqrt(2 * pi * 4) * std::exp(-4.0 / 72) / std::sqrt(2 * pi * 36);
    CHECK(density_x(y, m) == Approx(want).epsilon(1e-13));
    m.sigma = HermitianMatrix::diagonal(AlgebraKind(1), {-1.0});
    CHECK_THROWS_AS(m.validate(), DomainError);
}

TEST_CASE("normal sampler moments") {
    const auto m = EllipticalModel::standard(GeneratorFamily::normal(), 1, 1, AlgebraKind(1));
    const auto xs = sample_x(m, 100000, 3);
    double s = 0, s2 = 0, s4 = 0;
    for (const auto& x : xs) {
        const double v = x.comp(0, 0, 0);
        s += v;
        s2 += v * v;
        s4 += v * v * v * v;
    }
    const double n = xs.size();
    const double mean = s / n, var = s2 / n;
    CHECK(std::abs(mean) < 3 * std::sqrt(var / n));
    CHECK(std::abs(var - 1.0) < 3 * std::sqrt((s4 / n - var * var) / n));

    const auto c = EllipticalModel::standard(GeneratorFamily::normal(), 1, 1, AlgebraKind(2));
    const auto zs = sample_x(c, 100000, 4);
    double q = 0, q2 = 0;
    for (const auto& z : zs) {
        const double v = z.comp(0, 0, 1) * z.comp(0, 0, 1);
        q += v;
        q2 += v * v;
    }
    const double cm = q / n;
    CHECK(std::abs(cm - 0.5) < 3 * std::sqrt((q2 / n - cm * cm) / n));
}

TEST_CASE("sampler is deterministic and honours the location") {
    auto m = EllipticalModel::standard(GeneratorFamily::student_t(4.0), 2, 2, AlgebraKind(4));
    m.mu = DAMatrix::identity(AlgebraKind(4), 2);
    const auto a = sample_x(m, 50, 8), b = sample_x(m, 50, 8);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    const auto anti = sample_x(m, 2, 8, true);
    CHECK((anti[0] + anti[1]).max_abs_diff(2.0 * m.mu) < 1e-12);
}

TEST_CASE("t sampler passes a Kolmogorov-Smirnov test") {
    const double dof = 5.0;
    const auto m = EllipticalModel::standard(GeneratorFamily::student_t(dof), 1, 1, AlgebraKind(1));
    const auto xs = sample_x(m, 20000, 5);
    std::vector<double> v;
    for (const auto& x : xs) v.push_back(x.comp(0, 0, 0));
    std::sort(v.begin(), v.end());
    boost::math::students_t dist(dof);
    double ks = 0;
    const double n = v.size();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double f = boost::math::cdf(dist, v[i]);
        ks = std::max({ks, std::abs(f - i / n), std::abs((i + 1) / n - f)});
    }
    // 1% critical value
    CHECK(ks < 1.628 / std::sqrt(n));
}

TEST_CASE("Cauchy and t paths agree") {
    const Dims d{2, 3, AlgebraKind(2)};
    const auto t1 = GeneratorFamily::student_t(1.0);
    const auto c = GeneratorFamily::cauchy();
    CHECK(normalizing_constant(t1, 2, 3, AlgebraKind(2)) == Approx(normalizing_constant(c, 2, 3, AlgebraKind(2))));
    for (int k = 0; k < 6; ++k) CHECK(h_deriv0(t1, k, d) == Approx(h_deriv0(c, k, d)));
}
