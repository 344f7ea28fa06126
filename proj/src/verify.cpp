#include "mqf/verify.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "mqf/jack.hpp"
#include "mqf/parallel.hpp"
#include "mqf/rng.hpp"

namespace mqf {

namespace {

json candidate_json(const Candidate& c) {
    json j = {{"label", c.label}, {"available", c.available}};
    if (c.available) j["value"] = complex_to_json(c.value);
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

double rel_scale(std::complex<double> a, std::complex<double> b) {
    return std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace

json CheckReport::to_json(bool timing) const {
    json j;
    j["name"] = name;
    j["params"] = params;
    j["inputs_digest"] = inputs_digest;
    j["estimate"] = complex_to_json(estimate);
    j["standard_error"] = standard_error;
    j["band"] = band;
    j["exact"] = exact;
    j["method"] = method;
    j["candidates"] = json::array();
    for (const auto& c : candidates) j["candidates"].push_back(candidate_json(c));
    j["references"] = json::array();
    for (const auto& c : references) j["references"].push_back(candidate_json(c));
    j["verdict"] = verdict;
    j["matched"] = matched;
    j["sample_count"] = sample_count;
    j["seed"] = seed;
    j["diagnostics"] = diagnostics;
    if (timing) j["wall_time"] = wall_time;
    return j;
}

void decide(CheckReport& r, double tolerance) {
    const double mag = std::abs(r.estimate);
    r.band = std::max({3.0 * r.standard_error, tolerance * mag, 1e-9 * std::max(1.0, mag)});
    std::vector<std::vector<const Candidate*>> groups;
    for (const auto& c : r.candidates) {
        if (!c.available || !(std::abs(c.value - r.estimate) <= r.band)) continue;
        bool placed = false;
        for (auto& g : groups) {
            if (std::abs(g.front()->value - c.value) <= kCoincidence * rel_scale(g.front()->value, c.value)) {
                g.push_back(&c);
                placed = true;
                break;
            }
        }
        if (!placed) groups.push_back({&c});
    }
    r.matched.clear();
    for (const auto& g : groups)
        for (const auto* c : g) r.matched.push_back(c->label);
    if (groups.empty()) {
        r.verdict = "fail";
    } else if (groups.size() == 1) {
        std::string label;
        for (const auto* c : groups.front()) label += (label.empty() ? "" : " = ") + c->label;
        r.verdict = "matches-" + label;
    } else {
        r.verdict = "inconclusive";
    }
}

std::string fnv1a_digest(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

struct Moments {
    double count = 0.0;
    double mean_re = 0.0, mean_im = 0.0;
    double m2_re = 0.0, m2_im = 0.0;
};

Moments merge(const Moments& a, const Moments& b) {
    if (a.count == 0.0) return b;
    if (b.count == 0.0) return a;
    Moments m;
    m.count = a.count + b.count;
    const double dre = b.mean_re - a.mean_re, dim = b.mean_im - a.mean_im;
    m.mean_re = a.mean_re + dre * b.count / m.count;
    m.mean_im = a.mean_im + dim * b.count / m.count;
    m.m2_re = a.m2_re + b.m2_re + dre * dre * a.count * b.count / m.count;
    m.m2_im = a.m2_im + b.m2_im + dim * dim * a.count * b.count / m.count;
    return m;
}

Moments merge_range(const std::vector<Moments>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return v[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return merge(merge_range(v, lo, mid), merge_range(v, mid, hi));
}

constexpr std::uint64_t kChunk = 1024;

} // namespace

MCEstimate mc_mean(std::uint64_t n, int workers, const std::function<std::complex<double>(std::uint64_t)>& f) {
    if (n == 0) throw DomainError("Monte Carlo estimate needs at least one sample");
    const std::size_t chunks = static_cast<std::size_t>((n + kChunk - 1) / kChunk);
    std::vector<Moments> parts(chunks);
    parallel_for(chunks, workers, [&](std::size_t c) {
        Moments m;
        const std::uint64_t lo = c * kChunk, hi = std::min<std::uint64_t>(n, lo + kChunk);
        for (std::uint64_t i = lo; i < hi; ++i) {
            const std::complex<double> v = f(i);
            m.count += 1.0;
            const double dre = v.real() - m.mean_re, dim = v.imag() - m.mean_im;
            m.mean_re += dre / m.count;
            m.mean_im += dim / m.count;
            m.m2_re += dre * (v.real() - m.mean_re);
            m.m2_im += dim * (v.imag() - m.mean_im);
        }
        parts[c] = m;
    });
    const Moments all = merge_range(parts, 0, parts.size());
    MCEstimate e;
    e.mean = {all.mean_re, all.mean_im};
    if (all.count > 1.0) {
        e.var_re = all.m2_re / (all.count - 1.0);
        e.var_im = all.m2_im / (all.count - 1.0);
    }
    e.standard_error = std::sqrt((e.var_re + e.var_im) / all.count);
    return e;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<double> spectrum(const HermitianMatrix& x) { return eig_hermitian(x); }

double jack_at(const Partition& kappa, const std::vector<double>& eigs, AlgebraKind beta) {
    return jack_c<double>(kappa, std::span<const double>(eigs), beta);
}

void apply_mc(CheckReport& r, const MCEstimate& e, std::uint64_t samples) {
    r.estimate = e.mean;
    r.standard_error = e.standard_error;
    r.sample_count = samples;
    r.method = "monte-carlo";
    if (e.standard_error == 0.0) r.diagnostics.push_back("zero sample variance: integrand constant over the draws");
}

Candidate ratio_candidate(const std::string& label, double num, double den, const std::string& what) {
    if (den == 0.0) return {label, 0.0, false, what + " vanishes (partition longer than its rank)"};
    return {label, num / den, true, ""};
}

} // namespace

CheckReport check_orbital_integral(const HermitianMatrix& x1, const HermitianMatrix& x2, const Partition& kappa,
                                   std::uint64_t samples, std::uint64_t seed, int workers) {
    const auto t0 = Clock::now();
    const AlgebraKind beta = x1.algebra();
    beta.require_matrix_algebra("check_orbital_integral");
    if (x2.algebra() != beta || x2.dim() != x1.dim()) throw DomainError("orbital integral: X1, X2 must be m x m");
    const int m = x1.dim();
    const PSDDecomposition d2 = spectral_nonsingular(x2);
    const DAMatrix half = sqrt_psd(x2).matrix();
    CheckReport r;
    r.name = "orbital_integral";
    r.seed = seed;
    const auto e = mc_mean(samples, workers, [&](std::uint64_t i) {
        const DAMatrix b = haar_sample(m, beta, seed, i) * half;
        return std::complex<double>(jack_at(kappa, spectrum(congruence(b, x1)), beta));
    });
    apply_mc(r, e, samples);
    const double num = jack_at(kappa, spectrum(x1), beta) * jack_at(kappa, spectrum(x2), beta);
    r.candidates.push_back(ratio_candidate("printed RankR", num, jack_c_identity(kappa, d2.rank, beta), "C_kappa(I_r)"));
    r.candidates.push_back(ratio_candidate("classical FullM", num, jack_c_identity(kappa, m, beta), "C_kappa(I_m)"));
    decide(r, 0.0);
    r.wall_time = seconds_since(t0);
    return r;
}

CheckReport check_stiefel_splitting(const HermitianMatrix& x1, const HermitianMatrix& x2, const Partition& kappa,
                                    std::uint64_t samples, std::uint64_t seed, int workers) {
    const auto t0 = Clock::now();
    const AlgebraKind beta = x1.algebra();
    beta.require_matrix_algebra("check_stiefel_splitting");
    if (x2.algebra() != beta) throw DomainError("Stiefel splitting: X1, X2 must share beta");
    const int n = x1.dim(), m = x2.dim();
    if (m > n) throw DomainError("Stiefel splitting: need m <= n");
    const PSDDecomposition d2 = spectral_nonsingular(x2);
    const DAMatrix half = sqrt_psd(x2).matrix();
    CheckReport r;
    r.name = "stiefel_splitting";
    r.seed = seed;
    const auto e = mc_mean(samples, workers, [&](std::uint64_t i) {
        const DAMatrix b = stiefel_sample(m, n, beta, seed, i) * half;
        return std::complex<double>(jack_at(kappa, spectrum(congruence(b, x1)), beta));
    });
    apply_mc(r, e, samples);
    const double num = jack_at(kappa, spectrum(x1), beta) * jack_at(kappa, spectrum(x2), beta);
    r.candidates.push_back(ratio_candidate("printed RankR", num, jack_c_identity(kappa, d2.rank, beta), "C_kappa(I_r)"));
    r.candidates.push_back(ratio_candidate("classical FullN", num, jack_c_identity(kappa, n, beta), "C_kappa(I_n)"));
    r.references.push_back({"Stiefel volume", stiefel_volume(m, n, beta), true, "divided out of the integral"});
    decide(r, 0.0);
    r.wall_time = seconds_since(t0);
    return r;
}

namespace {

// Real matrix of the map Z -> B Z on q x m matrices over the algebra, in the
// coordinates of the stored components.
Eigen::MatrixXd real_linear_map(const DAMatrix& b, int m) {
    const AlgebraKind beta = b.algebra();
    const int q = b.cols(), nb = beta.beta();
    const int in_dim = q * m * nb;
    const int out_dim = b.rows() * m * nb;
    Eigen::MatrixXd mat(out_dim, in_dim);
    for (int col = 0; col < in_dim; ++col) {
        DAMatrix e(beta, q, m);
        e.comp(col / (m * nb), (col / nb) % m, col % nb) = 1.0;
        const DAMatrix img = b * e;
        for (int row = 0; row < out_dim; ++row) mat(row, col) = img.components()[row];
    }
    return mat;
}

double gram_volume(const Eigen::MatrixXd& map) {
    const Eigen::MatrixXd g = map.transpose() * map;
    return std::sqrt(std::abs(g.determinant()));
}

} // namespace

CheckReport check_jacobian_linear(const DAMatrix& a, int m) {
    const auto t0 = Clock::now();
    CheckReport r;
    r.name = "jacobian_linear";
    r.exact = true;
    r.method = "exact";
    r.estimate = linear_volume_factor(a, m);
    const double gram = gram_volume(real_linear_map(a, m));
    r.candidates.push_back({"Gram determinant", gram, true, ""});
    decide(r, 1e-10);
    r.wall_time = seconds_since(t0);
    return r;
}

CheckReport check_jacobian_singular(const DAMatrix& a, const DAMatrix& c, int m) {
    const auto t0 = Clock::now();
    CheckReport r;
    r.name = "jacobian_singular";
    r.exact = true;
    r.method = "exact";
    r.estimate = singular_volume_factor(a, c, m);
    const double gram = gram_volume(real_linear_map(a * c, m)) / gram_volume(real_linear_map(c, m));
    r.candidates.push_back({"Gram determinant ratio", gram, true, ""});
    decide(r, 1e-10);
    r.wall_time = seconds_since(t0);
    return r;
}

CheckReport check_laplace_integral(double a, const Partition& kappa, const HermitianMatrix& u,
                                   const HermitianMatrix& z, std::uint64_t samples, std::uint64_t seed,
                                   int workers) {
    const auto t0 = Clock::now();
    const AlgebraKind beta = u.algebra();
    if (beta.beta() != 1 || z.algebra() != beta) throw DomainError("Laplace integral check is real (beta = 1) only");
    const int m = u.dim();
    if (z.dim() != m) throw DomainError("Laplace integral: U, Z must be m x m");
    const double log_norm = log_mv_gamma(m, a, beta) - a * std::log(det_pd(z, "Z"));
    // X ~ Wishart_m(2a, (2Z)^{-1}) via the Bartlett decomposition X = C L L' C'.
    const HermitianMatrix cov = inverse_pd(HermitianMatrix(2.0 * z.matrix()));
    const DAMatrix c = sqrt_psd(cov).matrix();
    const double dof = 2.0 * a;
    CheckReport r;
    r.name = "laplace_integral";
    r.seed = seed;
    const auto e = mc_mean(samples, workers, [&](std::uint64_t i) {
        StreamRng rng(seed, i);
        std::normal_distribution<double> nd(0.0, 1.0);
        DAMatrix l(beta, m, m);
        for (int row = 0; row < m; ++row) {
            std::gamma_distribution<double> gd(0.5 * (dof - row), 1.0);
            l.comp(row, row, 0) = std::sqrt(2.0 * gd(rng));
            for (int col = 0; col < row; ++col) l.comp(row, col, 0) = nd(rng);
        }
        const DAMatrix b = c * l;
        return std::complex<double>(jack_at(kappa, spectrum(congruence(b, u)), beta));
    });
    apply_mc(r, e, samples);
    r.estimate *= std::exp(log_norm);
    r.standard_error *= std::exp(log_norm);
    if (std::abs(r.estimate) > 0.0 && r.standard_error > 0.5 * std::abs(r.estimate))
        r.diagnostics.push_back("relative standard error above 50%: too few samples");
    const HermitianMatrix zi_half = inv_sqrt_pd(z);
    const double rhs = gen_pochhammer(a, kappa, beta) * std::exp(log_norm) *
                       jack_at(kappa, spectrum(congruence(zi_half.matrix(), u)), beta);
    r.candidates.push_back({"closed form", rhs, true, ""});
    decide(r, 0.0);
    r.wall_time = seconds_since(t0);
    return r;
}

namespace {

template <class F>
Candidate try_candidate(const std::string& label, F&& f) {
    try {
        return {label, f(), true, ""};
    } catch (const TruncationError& e) {
        return {label, 0.0, false, e.what()};
    } catch (const Error& e) {
        return {label, 0.0, false, e.what()};
    }
}

SeriesOptions with_convention(SeriesOptions o, SplittingConvention c) {
    o.convention = c;
    return o;
}

} // namespace

CheckReport check_cf_empirical(const QuadFormModel& model, const HermitianMatrix& s, std::uint64_t samples,
                               std::uint64_t seed, const SeriesControl& ctrl, const SeriesOptions& opts,
                               int workers) {
    const auto t0 = Clock::now();
    const AlgebraKind beta = model.beta;
    if (s.dim() != model.m() || s.algebra() != beta) throw DomainError("CF check: S must be m x m");
    const EllipticalSampler sampler(model.x_model());
    CheckReport r;
    r.name = "cf_empirical";
    r.seed = seed;
    const auto e = mc_mean(samples, workers, [&](std::uint64_t i) {
        const HermitianMatrix w = congruence(sampler.draw(seed, i), model.a);
        return std::exp(std::complex<double>(0.0, trace_ws(w, s)));
    });
    apply_mc(r, e, samples);

    const QuadFormSpectra sp = QuadFormSpectra::from_model(model);
    const std::vector<double> t = sigma_s_spectrum(s, model.sigma);
    const bool normal = bind(model.family, model.dims()).normal;
    auto series = [&](SplittingConvention c, ArgumentScale scale) {
        SeriesOptions o = with_convention(opts, c);
        o.cf_scale = scale;
        return cf_w_spectral(t, sp, ctrl, o).value;
    };
    auto closed = [&](double exponent) {
        if (!normal) throw DomainError("determinant closed form applies to the normal family only");
        return cf_normal_closed_spectral(t, exponent, beta);
    };
    const std::string scale_tag = beta.beta() == 1 ? "" : opts.cf_scale == ArgumentScale::Printed ? " (i*beta)" : " (i/beta)";
    r.candidates.push_back(try_candidate("series RankR" + scale_tag, [&] { return series(SplittingConvention::RankR, opts.cf_scale); }));
    r.candidates.push_back(try_candidate("series FullM" + scale_tag, [&] { return series(SplittingConvention::FullM, opts.cf_scale); }));
    r.candidates.push_back(try_candidate("closed n", [&] { return closed(model.n()); }));
    r.candidates.push_back(try_candidate("closed r", [&] { return closed(model.rank()); }));
    if (beta.beta() != 1) {
        r.candidates.push_back(try_candidate("closed r (2i/beta, exponent beta r/2)", [&] {
            if (!normal) throw DomainError("determinant closed form applies to the normal family only");
            return det_form(t, 2.0 / beta.beta(), 0.5 * beta.beta() * model.rank());
        }));
        r.references.push_back(try_candidate("series FullN (i/beta)", [&] { return series(SplittingConvention::FullN, ArgumentScale::Derived); }));
    }
    r.references.push_back(try_candidate("series FullN" + scale_tag, [&] { return series(SplittingConvention::FullN, opts.cf_scale); }));
    decide(r, 0.0);
    r.wall_time = seconds_since(t0);
    return r;
}

double chi_square_pdf(double x, double k) {
    if (x <= 0.0) return 0.0;
    return std::exp((0.5 * k - 1.0) * std::log(x) - 0.5 * x - 0.5 * k * std::log(2.0) - std::lgamma(0.5 * k));
}

double wishart_pdf_real(const Eigen::MatrixXd& w, double dof, const Eigen::MatrixXd& sigma) {
    const int m = static_cast<int>(w.rows());
    const double log_gamma_m = 0.25 * m * (m - 1) * std::log(std::numbers::pi) + [&] {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += std::lgamma(0.5 * (dof - i));
        return s;
    }();
    const Eigen::LDLT<Eigen::MatrixXd> ls(sigma);
    const double log_det_w = std::log(w.determinant());
    const double log_det_s = std::log(sigma.determinant());
    const double tr = ls.solve(w).trace();
    return std::exp(0.5 * (dof - m - 1) * log_det_w - 0.5 * tr - 0.5 * dof * m * std::log(2.0) -
                    0.5 * dof * log_det_s - log_gamma_m);
}

double pearson_quadform_pdf_mixture(double w, double lambda, double sigma2, int r, int n, double s, double g) {
    const double a0 = s - 0.5 * n;
    if (!(a0 > 0.0)) throw DomainError("Pearson VII mixture needs s > n/2");
    if (w <= 0.0) return 0.0;
    const double base = lambda * sigma2 * g / 2.0; // c_t = base / t
    boost::math::quadrature::exp_sinh<double> integrator;
    auto integrand = [&](double t) {
        if (t <= 0.0) return 0.0;
        const double ct = base / t;
        const double log_gamma = (a0 - 1.0) * std::log(t) - t - std::lgamma(a0);
        const double x = w / ct;
        const double log_chi = (0.5 * r - 1.0) * std::log(x) - 0.5 * x - 0.5 * r * std::log(2.0) - std::lgamma(0.5 * r);
        return std::exp(log_gamma + log_chi - std::log(ct));
    };
    return integrator.integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), 1e-13);
}

QuadFormModel reduced_model(const QuadFormModel& model) {
    const int r = model.rank();
    const AlgebraKind beta = model.beta;
    const DAMatrix& p1 = model.decomposition.frame;
    GeneratorFamily f = model.family;
    if (f.kind == GeneratorFamily::Kind::PearsonVII) f.s -= 0.5 * beta.beta() * (model.n() - r) * model.m();
    return QuadFormModel::make(HermitianMatrix::diagonal(beta, model.decomposition.lambda), congruence(p1, model.theta),
                               model.sigma, f);
}

namespace {

Eigen::MatrixXd real_part(const HermitianMatrix& h) {
    Eigen::MatrixXd m(h.dim(), h.dim());
    for (int i = 0; i < h.dim(); ++i)
        for (int j = 0; j < h.dim(); ++j) m(i, j) = h.matrix().comp(i, j, 0);
    return m;
}

} // namespace

CheckReport check_density_empirical(const QuadFormModel& model, const HermitianMatrix& w, std::uint64_t samples,
                                    std::uint64_t seed, const SeriesControl& ctrl, const SeriesOptions& opts,
                                    double tolerance, int workers) {
    const auto t0 = Clock::now();
    if (model.beta.beta() != 1) throw DomainError("density check is real (beta = 1) only");
    if (w.dim() != model.m()) throw DomainError("density check: W must be m x m");
    const int m = model.m(), r = model.rank();
    if (r < m) throw RankError("density check: rank(A) < m, W has no Lebesgue density");
    CheckReport rep;
    rep.name = "density_empirical";
    rep.seed = seed;

    const QuadFormSpectra sp = QuadFormSpectra::from_model(model);
    const auto [lo, hi] = std::minmax_element(sp.theta_a.begin(), sp.theta_a.end());
    const bool equal = (*hi - *lo) <= 1e-12 * *hi;
    const double lambda = *hi;
    const BoundGenerator gen = bind(model.family, model.dims());
    const Eigen::MatrixXd wr = real_part(w);
    const Eigen::MatrixXd sig = real_part(model.sigma);

    if (equal && gen.normal && m == 1) {
        const double c = lambda * sig(0, 0);
        rep.estimate = chi_square_pdf(wr(0, 0) / c, r) / c;
        rep.method = "exact: scaled chi-square(r)";
        rep.exact = true;
    } else if (equal && gen.normal) {
        rep.estimate = wishart_pdf_real(wr / lambda, r, sig) / std::pow(lambda, 0.5 * m * (m + 1));
        rep.method = "exact: scaled Wishart_m(r, Sigma)";
        rep.exact = true;
    } else if (equal && m == 1) {
        rep.estimate = pearson_quadform_pdf_mixture(wr(0, 0), lambda, sig(0, 0), r, model.n(), gen.s, gen.g);
        rep.method = "exact: gamma scale mixture integral";
        rep.exact = true;
    } else {
        // Box count: fraction of draws whose upper-triangular entries fall in
        // a cube of half-width h around W.
        double h = 0.0;
        for (int i = 0; i < m; ++i) h = std::max(h, wr(i, i));
        h *= 0.05;
        const int coords = m * (m + 1) / 2;
        const double vol = std::pow(2.0 * h, coords);
        const EllipticalSampler sampler(model.x_model());
        const auto e = mc_mean(samples, workers, [&](std::uint64_t i) {
            const HermitianMatrix x = congruence(sampler.draw(seed, i), model.a);
            for (int a = 0; a < m; ++a)
                for (int b = a; b < m; ++b)
                    if (std::abs(x.matrix().comp(a, b, 0) - wr(a, b)) > h) return std::complex<double>(0.0);
            return std::complex<double>(1.0 / vol);
        });
        apply_mc(rep, e, samples);
        rep.method = "monte-carlo box count (half-width " + format_double(h) + ")";
        rep.diagnostics.push_back("box-count estimate carries O(h^2) smoothing bias");
    }

    const bool pearson = !gen.normal;
    if (pearson) {
        SeriesOptions analytic = opts, printed = opts;
        analytic.paper_printed_signs = false;
        printed.paper_printed_signs = true;
        rep.candidates.push_back(try_candidate("series analytic-sign", [&] { return std::complex<double>(density_w(w, model, ctrl, analytic).value); }));
        rep.candidates.push_back(try_candidate("series printed-sign", [&] { return std::complex<double>(density_w(w, model, ctrl, printed).value); }));
    } else {
        rep.candidates.push_back(try_candidate("series", [&] { return std::complex<double>(density_w(w, model, ctrl, opts).value); }));
    }
    if (r < model.n()) {
        rep.candidates.push_back(try_candidate("reduced rank-r series", [&] {
            SeriesOptions o = opts;
            o.paper_printed_signs = false;
            return std::complex<double>(density_w(w, reduced_model(model), ctrl, o).value);
        }));
    }
    decide(rep, tolerance);
    rep.wall_time = seconds_since(t0);
    return rep;
}

QuadFormModel quadform_model_from_json(const json& j) {
    try {
        const DAMatrix a_raw = matrix_from_json(j.at("a"));
        const DAMatrix sigma_raw = matrix_from_json(j.at("sigma"));
        const std::optional<DAMatrix> theta_raw =
            j.contains("theta") ? std::optional<DAMatrix>(matrix_from_json(j.at("theta"))) : std::nullopt;
        int b = std::max(a_raw.beta(), sigma_raw.beta());
        if (theta_raw) b = std::max(b, theta_raw->beta());
        const AlgebraKind beta(j.value("beta", b));
        const HermitianMatrix a(promote(a_raw, beta));
        const HermitianMatrix sigma(promote(sigma_raw, beta));
        const HermitianMatrix theta =
            theta_raw ? HermitianMatrix(promote(*theta_raw, beta)) : HermitianMatrix::identity(beta, a.dim());
        const GeneratorFamily f = j.contains("family") ? family_from_json(j.at("family")) : GeneratorFamily::normal();
        return QuadFormModel::make(a, theta, sigma, f);
    } catch (const json::exception& e) {
        throw FormatError(std::string("quadratic-form model: ") + e.what());
    }
}

json quadform_model_to_json(const QuadFormModel& m) {
    return {{"family", family_to_json(m.family)},
            {"a", matrix_to_json(m.a.matrix())},
            {"theta", matrix_to_json(m.theta.matrix())},
            {"sigma", matrix_to_json(m.sigma.matrix())}};
}

namespace {

Partition kappa_from(const json& p) {
    if (!p.contains("kappa")) return Partition{};
    return Partition(p.at("kappa").get<std::vector<int>>());
}

SeriesControl ctrl_from(const json& p) {
    SeriesControl c;
    c.max_degree = p.value("max_degree", c.max_degree);
    c.rel_tol = p.value("rel_tol", c.rel_tol);
    c.abs_tol = p.value("abs_tol", c.abs_tol);
    return c;
}

SeriesOptions opts_from(const json& p) {
    SeriesOptions o;
    if (p.contains("convention")) o.convention = parse_convention(p.at("convention").get<std::string>());
    o.paper_printed_signs = p.value("paper_printed_signs", false);
    const std::string scale = p.value("cf_scale", std::string("printed"));
    if (scale == "printed") o.cf_scale = ArgumentScale::Printed;
    else if (scale == "derived") o.cf_scale = ArgumentScale::Derived;
    else throw FormatError("cf_scale must be 'printed' or 'derived'");
    return o;
}

DAMatrix random_matrix(const json& p, std::uint64_t seed, const char* rows_key, const char* cols_key) {
    const AlgebraKind beta(p.value("beta", 1));
    StreamRng rng(seed, 0);
    return gaussian_matrix(beta, p.at(rows_key).get<int>(), p.at(cols_key).get<int>(), 1.0, rng);
}

CheckReport dispatch(const std::string& check, const json& p, std::uint64_t n, std::uint64_t seed) {
    if (check == "orbital_integral")
        return check_orbital_integral(hermitian_from_json(p.at("x1")), hermitian_from_json(p.at("x2")), kappa_from(p), n,
                                      seed);
    if (check == "stiefel_splitting")
        return check_stiefel_splitting(hermitian_from_json(p.at("x1")), hermitian_from_json(p.at("x2")), kappa_from(p),
                                       n, seed);
    if (check == "jacobian_linear") {
        const DAMatrix a = p.contains("a") ? matrix_from_json(p.at("a")) : random_matrix(p, seed, "p", "n");
        return check_jacobian_linear(a, p.at("m").get<int>());
    }
    if (check == "jacobian_singular") {
        const DAMatrix a = matrix_from_json(p.at("a"));
        const DAMatrix c = matrix_from_json(p.at("c"));
        return check_jacobian_singular(a, c, p.at("m").get<int>());
    }
    if (check == "laplace_integral")
        return check_laplace_integral(p.at("a").get<double>(), kappa_from(p), hermitian_from_json(p.at("u")),
                                      hermitian_from_json(p.at("z")), n, seed);
    if (check == "cf_empirical")
        return check_cf_empirical(quadform_model_from_json(p.at("model")), hermitian_from_json(p.at("s")), n, seed,
                                  ctrl_from(p), opts_from(p));
    if (check == "density_empirical")
        return check_density_empirical(quadform_model_from_json(p.at("model")), hermitian_from_json(p.at("w")), n, seed,
                                       ctrl_from(p), opts_from(p), p.value("tolerance", 0.02));
    throw FormatError("unknown check '" + check + "'");
}

} // namespace

json run_suite(const json& config, int workers, bool timing, int& failures) {
    const json& list = config.is_object() ? config.at("checks") : config;
    if (!list.is_array()) throw FormatError("suite config must be a list of checks");
    std::vector<json> reports(list.size());
    parallel_for(list.size(), workers, [&](std::size_t i) {
        const json& entry = list[i];
        const std::string check = entry.at("check").get<std::string>();
        const json params = entry.value("params", json::object());
        const std::uint64_t n = entry.value("N", std::uint64_t{0});
        const std::uint64_t seed = entry.value("seed", std::uint64_t{0});
        const std::string digest = fnv1a_digest(dump_json({{"check", check}, {"params", params}, {"N", n}, {"seed", seed}}, -1));
        CheckReport rep;
        try {
            rep = dispatch(check, params, n, seed);
        } catch (const std::exception& e) {
            rep.name = check;
            rep.seed = seed;
            rep.verdict = "fail";
            rep.method = "error";
            rep.diagnostics.push_back(std::string("error: ") + e.what());
        }
        rep.params = params;
        rep.inputs_digest = digest;
        reports[i] = rep.to_json(timing);
        if (entry.contains("topic")) reports[i]["topic"] = entry.at("topic");
    });
    failures = 0;
    int inconclusive = 0;
    json out = {{"checks", json::array()}};
    for (auto& r : reports) {
        const std::string v = r.at("verdict").get<std::string>();
        if (v == "fail") ++failures;
        if (v == "inconclusive") ++inconclusive;
        out["checks"].push_back(std::move(r));
    }
    out["summary"] = {{"total", reports.size()},
                      {"fail", failures},
                      {"inconclusive", inconclusive},
                      {"matched", static_cast<int>(reports.size()) - failures - inconclusive}};
    return out;
}

namespace {

json real_matrix(std::initializer_list<std::initializer_list<double>> rows, int beta = 1) {
    Eigen::MatrixXd m(rows.size(), rows.begin()->size());
    int i = 0;
    for (const auto& row : rows) {
        int j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return matrix_to_json(DAMatrix::from_real(AlgebraKind(beta), m));
}

json diag(std::initializer_list<double> d, int beta = 1) {
    return matrix_to_json(DAMatrix::diagonal(AlgebraKind(beta), std::vector<double>(d)));
}

json qf(const json& a, const json& sigma, const json& family = {{"kind", "normal"}}) {
    return {{"a", a}, {"sigma", sigma}, {"family", family}};
}

} // namespace

json default_suite_config(std::uint64_t seed) {
    json checks = json::array();
    auto add = [&](const std::string& name, json params, std::uint64_t n, const char* topic = nullptr) {
        const std::uint64_t s = splitmix64(seed + 0x9e3779b97f4a7c15ULL * (checks.size() + 1));
        json entry = {{"check", name}, {"params", std::move(params)}, {"N", n}, {"seed", s}};
        if (topic) entry["topic"] = topic;
        checks.push_back(std::move(entry));
    };
    const json x1 = real_matrix({{2.0, 0.3, 0.1}, {0.3, 1.0, -0.2}, {0.1, -0.2, 0.5}});
    add("orbital_integral", {{"x1", x1}, {"x2", diag({1.5, 0.0, 0.0})}, {"kappa", {2}}}, 100000, "orbital-denominator");
    add("orbital_integral", {{"x1", x1}, {"x2", diag({1.0, 1.0, 1.0})}, {"kappa", {2}}}, 20000);
    add("orbital_integral", {{"x1", diag({1.0, 1.0, 1.0})}, {"x2", x1}, {"kappa", {2, 1}}}, 2000);
    add("orbital_integral", {{"x1", diag({1.2, 0.4}, 2)}, {"x2", diag({1.0, 0.0}, 2)}, {"kappa", {2}}}, 100000);
    add("stiefel_splitting",
        {{"x1", real_matrix({{1.5, 0.2, 0, 0}, {0.2, 1.0, 0, 0}, {0, 0, 0.7, 0.1}, {0, 0, 0.1, 0.3}})},
         {"x2", real_matrix({{1.0, 0.25}, {0.25, 0.6}})},
         {"kappa", {2}}},
        100000, "stiefel-denominator");
    add("jacobian_linear", {{"p", 5}, {"n", 3}, {"m", 2}, {"beta", 1}}, 0);
    add("jacobian_linear", {{"p", 4}, {"n", 2}, {"m", 3}, {"beta", 2}}, 0);
    add("jacobian_singular",
        {{"a", real_matrix({{1.0, 0.5, -0.2}, {0.3, 2.0, 0.1}, {-0.4, 0.2, 1.5}, {0.6, -0.1, 0.3}})},
         {"c", real_matrix({{1.0, 0.2}, {0.0, 1.0}, {0.5, -0.3}})},
         {"m", 2}},
        0);
    add("laplace_integral", {{"a", 2.5}, {"kappa", {2}}, {"u", diag({0.7})}, {"z", diag({1.3})}}, 100000);
    add("laplace_integral",
        {{"a", 2.0},
         {"kappa", {1}},
         {"u", real_matrix({{1.0, 0.2}, {0.2, 0.5}})},
         {"z", real_matrix({{1.5, -0.3}, {-0.3, 1.0}})}},
        100000);
    add("cf_empirical", {{"model", qf(diag({1, 1, 1}), diag({1.3}))}, {"s", diag({0.12})}}, 100000);
    add("cf_empirical",
        {{"model", qf(diag({1, 1, 0, 0}), real_matrix({{1.0, 0.3}, {0.3, 0.8}}))},
         {"s", real_matrix({{0.2, 0.05}, {0.05, -0.1}})}},
        200000, "idempotent-closed-form");
    add("cf_empirical", {{"model", qf(diag({1, 1}, 2), diag({1.0}, 2))}, {"s", diag({0.08}, 2)}}, 100000, "cf-argument-scale");
    add("density_empirical", {{"model", qf(diag({1, 1, 1}), diag({1.3}))}, {"w", diag({2.0})}}, 0);
    add("density_empirical", {{"model", qf(diag({1, 1}), real_matrix({{1.0, 0.3}, {0.3, 0.8}}))},
                              {"w", real_matrix({{1.2, 0.2}, {0.2, 0.9}})}},
        0);
    add("density_empirical",
        {{"model", qf(diag({1, 1, 1}), diag({1.0}), {{"kind", "pearson7"}, {"s", 4.0}, {"g", 6.0}})},
         {"w", diag({0.8})}},
        0, "pearson-sign");
    add("density_empirical", {{"model", qf(diag({1, 1, 0}), real_matrix({{1.0, 0.2}, {0.2, 0.7}}))},
                              {"w", real_matrix({{0.9, 0.1}, {0.1, 0.6}})}},
        0, "density-exponent");
    return {{"checks", checks}};
}

} // namespace mqf
