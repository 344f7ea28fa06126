#include <doctest.h>

#include <cmath>

#include "mqf/json_io.hpp"
#include "mqf/matalg.hpp"
#include "mqf/rng.hpp"
#include "mqf/verify.hpp"

using namespace mqf;
using doctest::Approx;

namespace {

CheckReport synthetic(double est, double se, std::vector<std::pair<std::string, double>> cands) {
    CheckReport r;
    r.estimate = est;
    r.standard_error = se;
    for (auto& [l, v] : cands) r.candidates.push_back({l, v, true, ""});
    return r;
}

double uniform01(std::uint64_t seed, std::uint64_t i) {
    StreamRng rng(seed, i);
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

json tiny_suite() {
    return json::parse(R"({"checks": [
      {"check": "jacobian_linear", "params": {"p": 4, "n": 2, "m": 2, "beta": 2}, "N": 0, "seed": 3},
      {"check": "laplace_integral", "params": {"a": 2.5, "kappa": [1], "u": [[0.7]], "z": [[1.3]]}, "N": 5000, "seed": 11},
      {"check": "orbital_integral", "params": {"x1": [[1.2, 0.0], [0.0, 0.4]], "x2": [[1.0, 0.0], [0.0, 0.0]], "kappa": [2]}, "N": 3000, "seed": 12},
      {"check": "no_such_check", "params": {}, "N": 1, "seed": 1}
    ]})");
}

} // namespace

TEST_CASE("verdict rule") {
    auto one = synthetic(1.0, 0.01, {{"a", 1.02}, {"b", 1.5}});
    decide(one, 0.0);
    CHECK(one.verdict == "matches-a");
    CHECK(one.band == Approx(0.03));

    auto same = synthetic(1.0, 0.01, {{"a", 1.0}, {"b", 1.0 + 1e-9}, {"c", 2.0}});
    decide(same, 0.0);
    CHECK(same.verdict == "matches-a = b");

    auto two = synthetic(1.0, 0.01, {{"a", 0.99}, {"b", 1.01}});
    decide(two, 0.0);
    CHECK(two.verdict == "inconclusive");
    CHECK(two.matched.size() == 2);

    auto none = synthetic(1.0, 0.01, {{"a", 1.1}});
    decide(none, 0.0);
    CHECK(none.verdict == "fail");
    CHECK(none.failed());

    auto tol = synthetic(1.0, 0.0, {{"a", 1.015}});
    decide(tol, 0.02);
    CHECK(tol.verdict == "matches-a");

    auto unavailable = synthetic(1.0, 0.01, {{"a", 1.0}});
    unavailable.candidates[0].available = false;
    decide(unavailable, 0.0);
    CHECK(unavailable.verdict == "fail");
}

TEST_CASE("FNV-1a digest") {
    CHECK(fnv1a_digest("") == "cbf29ce484222325");
    CHECK(fnv1a_digest("a") == "af63dc4c8601ec8c");
}

TEST_CASE("Monte Carlo mean is independent of the worker count") {
    auto f = [](std::uint64_t i) { return std::complex<double>(uniform01(7, i), uniform01(8, i)); };
    const auto a = mc_mean(10007, 1, f);
    const auto b = mc_mean(10007, 6, f);
    CHECK(a.mean == b.mean);
    CHECK(a.standard_error == b.standard_error);
    CHECK(std::abs(a.mean.real() - 0.5) < 3 * std::sqrt(a.var_re / 10007));
    CHECK(a.var_re == Approx(1.0 / 12).epsilon(0.05));
}

TEST_CASE("standard error scales as N^{-1/2}") {
    auto f = [](std::uint64_t i) { return std::complex<double>(uniform01(9, i), 0.0); };
    const double se1 = mc_mean(20000, 2, f).standard_error;
    const double se4 = mc_mean(80000, 2, f).standard_error;
    CHECK(se1 / se4 == Approx(2.0).epsilon(0.05));
    CHECK(se1 == Approx(std::sqrt(1.0 / 12 / 20000)).epsilon(0.05));
}

TEST_CASE("exact checks") {
    const auto id = check_jacobian_linear(DAMatrix::identity(AlgebraKind(1), 3), 2);
    CHECK(id.estimate.real() == Approx(1.0));
    CHECK(id.verdict.rfind("matches-", 0) == 0);

    const auto sq = check_jacobian_linear(DAMatrix::diagonal(AlgebraKind(1), {2.0, 3.0}), 1);
    CHECK(sq.estimate.real() == Approx(6.0));
    CHECK_FALSE(sq.failed());
}

TEST_CASE("empirical CF at zero is exactly one") {
    const AlgebraKind b(1);
    const auto m = QuadFormModel::make(HermitianMatrix::diagonal(b, {1, 1, 0, 0}), HermitianMatrix::identity(b, 4),
                                       HermitianMatrix::identity(b, 2), GeneratorFamily::normal());
    SeriesControl c;
    const auto r = check_cf_empirical(m, HermitianMatrix(DAMatrix(b, 2, 2)), 2000, 5, c);
    CHECK(r.estimate == std::complex<double>(1.0, 0.0));
    for (const auto& cand : r.candidates)
        if (cand.available) CHECK(std::abs(cand.value - 1.0) < 1e-15);
}

TEST_CASE("chi-square CF check") {
    const AlgebraKind b(1);
    const auto m = QuadFormModel::make(HermitianMatrix::identity(b, 3), HermitianMatrix::identity(b, 3),
                                       HermitianMatrix::diagonal(b, {1.3}), GeneratorFamily::normal());
    SeriesControl c;
    const auto r = check_cf_empirical(m, HermitianMatrix::diagonal(b, {0.12}), 50000, 21, c, {}, 4);
    CHECK_FALSE(r.failed());
    CHECK(r.verdict.find("closed n") != std::string::npos);
}

TEST_CASE("density oracles") {
    CHECK(chi_square_pdf(2.0, 2.0) == Approx(0.5 * std::exp(-1.0)));
    Eigen::MatrixXd w(1, 1), s(1, 1);
    w << 1.5;
    s << 1.0;
    CHECK(wishart_pdf_real(w, 3.0, s) == Approx(chi_square_pdf(1.5, 3.0)));
}

TEST_CASE("suite runner") {
    int failures = -1;
    const json empty = run_suite(json::array(), 2, false, failures);
    CHECK(failures == 0);
    CHECK(empty.at("checks").empty());
    CHECK(empty.at("summary").at("total") == 0);

    const json a = run_suite(tiny_suite(), 1, false, failures);
    CHECK(failures == 1); // the unknown check
    const auto& unknown = a.at("checks").at(3);
    CHECK(unknown.at("verdict") == "fail");
    CHECK(unknown.at("diagnostics").at(0).get<std::string>().rfind("error:", 0) == 0);
    CHECK_FALSE(a.at("checks").at(0).contains("wall_time"));

    // Same seeds, same estimates, regardless of how checks are spread over threads.
    const json b = run_suite(tiny_suite(), 4, false, failures);
    CHECK(dump_json(a) == dump_json(b));
    const json t = run_suite(tiny_suite(), 1, true, failures);
    CHECK(t.at("checks").at(0).contains("wall_time"));
}

TEST_CASE("default suite configuration") {
    const json c1 = default_suite_config(42), c2 = default_suite_config(42), c3 = default_suite_config(43);
    CHECK(c1 == c2);
    CHECK(c1 != c3);
    CHECK(c1.at("checks").size() >= 10);
}
