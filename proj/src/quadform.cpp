#include "mqf/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "mqf/jack.hpp"

namespace mqf {

std::string to_string(SplittingConvention c) {
    switch (c) {
    case SplittingConvention::RankR: return "rank-r";
    case SplittingConvention::FullM: return "full-m";
    case SplittingConvention::FullN: return "full-n";
    }
    return "?";
}

std::string to_string(ArgumentScale s) { return s == ArgumentScale::Printed ? "i*beta" : "i/beta"; }

SplittingConvention parse_convention(const std::string& s) {
    if (s == "rank-r") return SplittingConvention::RankR;
    if (s == "full-m") return SplittingConvention::FullM;
    if (s == "full-n") return SplittingConvention::FullN;
    throw DomainError("unknown convention '" + s + "' (expected rank-r, full-m or full-n)");
}

QuadFormModel QuadFormModel::make(HermitianMatrix a, HermitianMatrix theta, HermitianMatrix sigma,
                                  const GeneratorFamily& family, double rank_tol) {
    QuadFormModel q;
    q.beta = a.algebra();
    if (theta.algebra() != q.beta || sigma.algebra() != q.beta)
        throw DomainError("quadratic form: A, Theta, Sigma must share beta");
    if (theta.dim() != a.dim()) throw DomainError("quadratic form: Theta must have the dimension of A");
    q.beta.require_matrix_algebra("QuadFormModel");
    q.a = std::move(a);
    q.theta = std::move(theta);
    q.sigma = std::move(sigma);
    q.family = family;
    q.decomposition = spectral_nonsingular(q.a, rank_tol);
    if (q.decomposition.rank == 0) throw RankError("quadratic form: A is zero");
    if (q.m() > q.n()) throw DomainError("quadratic form: need m <= n");
    q.x_model().validate();
    return q;
}

EllipticalModel QuadFormModel::x_model() const { return {DAMatrix(beta, n(), m()), theta, sigma, family, beta}; }

namespace {

std::vector<double> top(const std::vector<double>& v, int r) { return {v.begin(), v.begin() + r}; }

} // namespace

QuadFormSpectra QuadFormSpectra::from_model(const QuadFormModel& model) {
    QuadFormSpectra sp;
    sp.beta = model.beta;
    sp.n = model.n();
    sp.m = model.m();
    sp.r = model.rank();
    sp.family = model.family;
    sp.det_sigma = det_pd(model.sigma, "Sigma");
    sp.det_theta = det_pd(model.theta, "Theta");
    sp.det_lambda = 1.0;
    for (double l : model.decomposition.lambda) sp.det_lambda *= l;
    const HermitianMatrix a_plus = moore_penrose(model.a);
    sp.theta_inv_a_plus = top(eig_hermitian(congruence(inv_sqrt_pd(model.theta).matrix(), a_plus)), sp.r);
    sp.theta_a = top(eig_hermitian(congruence(sqrt_psd(model.theta).matrix(), model.a)), sp.r);
    return sp;
}

void QuadFormSpectra::validate() const {
    if (m < 1 || n < m) throw DomainError("quadratic form spectra: need 1 <= m <= n");
    if (r < 1 || r > n) throw DomainError("quadratic form spectra: need 1 <= r <= n");
    if (!theta_inv_a_plus.empty() && static_cast<int>(theta_inv_a_plus.size()) != r)
        throw DomainError("quadratic form spectra: Theta^{-1}A^+ spectrum must have r entries");
    if (!theta_a.empty() && static_cast<int>(theta_a.size()) != r)
        throw DomainError("quadratic form spectra: Theta A spectrum must have r entries");
    if (!(det_sigma > 0.0) || !(det_theta > 0.0) || !(det_lambda > 0.0))
        throw DomainError("quadratic form spectra: determinants must be positive");
    bind(family, {m, n, beta});
}

namespace {

int denominator_dim(SplittingConvention c, const QuadFormSpectra& sp) {
    switch (c) {
    case SplittingConvention::RankR: return sp.r;
    case SplittingConvention::FullM: return sp.m;
    case SplittingConvention::FullN: return sp.n;
    }
    return sp.r;
}

template <class T>
using Layer = std::function<std::pair<T, double>(int)>;

double log_factorial(int k) { return std::lgamma(k + 1.0); }

// Density layers, prefactor included.
Layer<double> density_layers(const std::vector<double>& w_eigs, double det_w, const QuadFormSpectra& sp,
                             const SeriesControl& ctrl, const SeriesOptions& opts) {
    sp.validate();
    if (sp.theta_inv_a_plus.empty()) throw DomainError("density: Theta^{-1}A^+ spectrum missing");
    if (sp.r < sp.m)
        throw RankError("density of W: rank(A) = " + std::to_string(sp.r) + " < m = " + std::to_string(sp.m) +
                        " makes W rank deficient; no Lebesgue density exists");
    if (static_cast<int>(w_eigs.size()) != sp.m) throw DomainError("density: W must be m x m");
    for (double v : w_eigs)
        if (!(v > 0.0)) throw DomainError("density: W must be positive definite");
    if (!(det_w > 0.0)) throw DomainError("density: |W| must be positive");

    const Dims d{sp.m, sp.n, sp.beta};
    const double b = sp.beta.beta();
    const double half_n = d.half_dim();
    const double log_pref = log_normalizing_constant(sp.family, sp.m, sp.n, sp.beta) +
                            half_n * std::log(std::numbers::pi) +
                            (0.5 * b * (sp.n - sp.m + 1) - 1.0) * std::log(det_w) -
                            log_mv_gamma(sp.m, 0.5 * b * sp.n, sp.beta) - 0.5 * b * sp.n * std::log(sp.det_sigma) -
                            0.5 * b * sp.m * std::log(sp.det_theta) - 0.5 * b * sp.m * std::log(sp.det_lambda);
    const double pref = std::exp(log_pref);

    const BoundGenerator gen = bind(sp.family, d);
    // Argument multiplier and per-degree coefficient (excluding 1/k!).
    double mult = b;
    std::function<double(int)> coeff;
    if (opts.generic_path) {
        coeff = [f = sp.family, d, signs = opts.paper_printed_signs](int k) { return h_deriv0(f, k, d, signs); };
    } else if (gen.normal) {
        mult = -0.5 * b;
        coeff = [](int) { return 1.0; };
    } else {
        mult = (opts.paper_printed_signs ? 1.0 : -1.0) * b / gen.g;
        coeff = [s = gen.s](int k) { return pochhammer(s, k); };
    }
    std::vector<double> arg(w_eigs);
    for (double& x : arg) x *= mult;

    const int len = std::min(sp.r, sp.m);
    const int ddim = denominator_dim(opts.convention, sp);
    auto ja = std::make_shared<JackEvaluator<double>>(sp.theta_inv_a_plus, ctrl.max_degree, sp.beta, len);
    auto jw = std::make_shared<JackEvaluator<double>>(arg, ctrl.max_degree, sp.beta, len);
    const int workers = ctrl.workers;
    return [=](int k) {
        const auto parts = enumerate_partitions(k, len);
        const auto ca = ja->layer(k, len, workers);
        const auto cw = jw->layer(k, len, workers);
        const double scale = pref * coeff(k) * std::exp(-log_factorial(k));
        std::vector<double> terms(parts.size());
        double norm = 0.0;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            terms[i] = scale * ca[i] * cw[i] / jack_c_identity(parts[i], ddim, sp.beta);
            norm += std::abs(terms[i]);
        }
        return std::pair<double, double>(pairwise_sum<double>(terms), norm);
    };
}

// log w_k = log [Gamma(N/2) theta(N/2+k) / (Gamma(N/2+k) theta(N/2))] for the
// generic path.
double generic_weight(const GeneratorFamily& f, const Dims& d, int k) {
    const double c = d.half_dim();
    return std::exp(std::lgamma(c) - std::lgamma(c + k) + log_radial_moment(f, c + k, d) -
                    log_radial_moment(f, c, d));
}

Layer<std::complex<double>> cf_layers(const std::vector<double>& s_eigs, const QuadFormSpectra& sp,
                                      const SeriesControl& ctrl, const SeriesOptions& opts) {
    sp.validate();
    if (sp.theta_a.empty()) throw DomainError("characteristic function: Theta A spectrum missing");
    if (static_cast<int>(s_eigs.size()) != sp.m) throw DomainError("characteristic function: S must be m x m");
    const Dims d{sp.m, sp.n, sp.beta};
    const double b = sp.beta.beta();
    const BoundGenerator gen = bind(sp.family, d);
    const std::complex<double> z(0.0, opts.cf_scale == ArgumentScale::Printed ? b : 1.0 / b);

    std::function<double(int)> weight;
    if (opts.generic_path) {
        weight = [f = sp.family, d](int k) { return generic_weight(f, d, k); };
    } else if (gen.normal) {
        weight = [](int k) { return std::pow(2.0, k); };
    } else {
        weight = [gen, c = d.half_dim()](int k) {
            const double p = pochhammer(gen.s - c - k, k);
            if (p == 0.0) {
                std::ostringstream os;
                os << "characteristic function: (s - beta m n/2 - k)_k vanishes at degree " << k << " (s = " << gen.s
                   << ")";
                throw PoleError(os.str(), k);
            }
            return std::pow(gen.g, k) / p;
        };
    }

    std::vector<std::complex<double>> arg(s_eigs.size());
    for (std::size_t i = 0; i < s_eigs.size(); ++i) arg[i] = z * s_eigs[i];
    const int len = std::min(sp.r, sp.m);
    const int ddim = denominator_dim(opts.convention, sp);
    const double a = 0.5 * b * sp.n;
    auto ja = std::make_shared<JackEvaluator<double>>(sp.theta_a, ctrl.max_degree, sp.beta, len);
    auto js = std::make_shared<JackEvaluator<std::complex<double>>>(arg, ctrl.max_degree, sp.beta, len);
    const int workers = ctrl.workers;
    return [=](int k) {
        const auto parts = enumerate_partitions(k, len);
        const auto ca = ja->layer(k, len, workers);
        const auto cs = js->layer(k, len, workers);
        const double scale = weight(k) * std::exp(-log_factorial(k));
        std::vector<std::complex<double>> terms(parts.size());
        double norm = 0.0;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            const double c = scale * gen_pochhammer(a, parts[i], sp.beta) * ca[i] /
                             jack_c_identity(parts[i], ddim, sp.beta);
            terms[i] = c * cs[i];
            norm += std::abs(terms[i]);
        }
        return std::pair<std::complex<double>, double>(pairwise_sum<std::complex<double>>(terms), norm);
    };
}

std::vector<double> sigma_inv_w_spectrum(const HermitianMatrix& w, const HermitianMatrix& sigma) {
    return eig_hermitian(congruence(inv_sqrt_pd(sigma).matrix(), w));
}

} // namespace

std::vector<double> sigma_s_spectrum(const HermitianMatrix& s, const HermitianMatrix& sigma) {
    if (s.dim() != sigma.dim() || s.algebra() != sigma.algebra())
        throw DomainError("S must be m x m over the same algebra as Sigma");
    return eig_hermitian(congruence(sqrt_psd(sigma).matrix(), s));
}

SeriesResult<double> density_w_spectral(const std::vector<double>& w_eigs, double det_w, const QuadFormSpectra& sp,
                                        const SeriesControl& ctrl, const SeriesOptions& opts) {
    ctrl.validate();
    return sum_series<double>(density_layers(w_eigs, det_w, sp, ctrl, opts), ctrl, "density_w");
}

SeriesResult<double> density_w(const HermitianMatrix& w, const QuadFormModel& model, const SeriesControl& ctrl,
                               const SeriesOptions& opts) {
    if (w.dim() != model.m() || w.algebra() != model.beta) throw DomainError("density_w: W must be m x m");
    if (model.rank() < model.m())
        throw RankError("density of W: rank(A) = " + std::to_string(model.rank()) + " < m = " +
                        std::to_string(model.m()) + " makes W rank deficient; no Lebesgue density exists");
    const double det_w = det_pd(w, "W");
    return density_w_spectral(sigma_inv_w_spectrum(w, model.sigma), det_w, QuadFormSpectra::from_model(model), ctrl,
                              opts);
}

SeriesResult<std::complex<double>> cf_w_spectral(const std::vector<double>& s_eigs, const QuadFormSpectra& sp,
                                                 const SeriesControl& ctrl, const SeriesOptions& opts) {
    ctrl.validate();
    if (std::all_of(s_eigs.begin(), s_eigs.end(), [](double x) { return x == 0.0; })) {
        sp.validate();
        SeriesResult<std::complex<double>> r;
        r.value = 1.0;
        r.converged = true;
        r.partial_sums = {1.0};
        r.layers = {1.0};
        r.layer_norms = {1.0};
        return r;
    }
    return sum_series<std::complex<double>>(cf_layers(s_eigs, sp, ctrl, opts), ctrl, "cf_w");
}

SeriesResult<std::complex<double>> cf_w(const HermitianMatrix& s, const QuadFormModel& model,
                                        const SeriesControl& ctrl, const SeriesOptions& opts) {
    return cf_w_spectral(sigma_s_spectrum(s, model.sigma), QuadFormSpectra::from_model(model), ctrl, opts);
}

double cf_raw_printed_prefactor(const GeneratorFamily& family, const Dims& d) {
    const BoundGenerator gen = bind(family, d);
    const double base = gen.normal ? 2.0 : gen.g;
    return std::pow(d.beta.beta(), d.half_dim()) * std::pow(base, d.beta.beta() - 1.0);
}

std::complex<double> det_form(const std::vector<double>& t, double c, double e) {
    std::complex<double> v = 1.0;
    for (double x : t) v *= std::pow(std::complex<double>(1.0, -c * x), -e);
    return v;
}

std::complex<double> cf_normal_closed_spectral(const std::vector<double>& s_eigs, double exponent_df,
                                               AlgebraKind beta) {
    return det_form(s_eigs, 2.0 * beta.beta(), 0.5 * exponent_df);
}

std::complex<double> cf_normal_closed(const HermitianMatrix& s, const HermitianMatrix& sigma, double exponent_df) {
    return cf_normal_closed_spectral(sigma_s_spectrum(s, sigma), exponent_df, s.algebra());
}

std::vector<PartialRow> series_partial_table(const QuadFormModel& model, SeriesKind kind, const HermitianMatrix& point,
                                             const SeriesControl& ctrl, const SeriesOptions& opts) {
    ctrl.validate();
    const QuadFormSpectra sp = QuadFormSpectra::from_model(model);
    std::function<std::pair<std::complex<double>, double>(int)> layer;
    if (kind == SeriesKind::Density) {
        if (point.dim() != model.m()) throw DomainError("series_partial_table: W must be m x m");
        auto f = density_layers(sigma_inv_w_spectrum(point, model.sigma), det_pd(point, "W"), sp, ctrl, opts);
        layer = [f](int k) {
            auto [v, nrm] = f(k);
            return std::pair<std::complex<double>, double>(v, nrm);
        };
    } else {
        layer = cf_layers(sigma_s_spectrum(point, model.sigma), sp, ctrl, opts);
    }
    std::vector<PartialRow> rows;
    std::complex<double> sum = 0.0;
    for (int k = 0; k <= ctrl.max_degree; ++k) {
        auto [v, nrm] = layer(k);
        sum += v;
        rows.push_back({k, v, sum, nrm});
    }
    return rows;
}

double trace_ws(const HermitianMatrix& w, const HermitianMatrix& s) {
    if (w.dim() != s.dim() || w.algebra() != s.algebra()) throw DomainError("tr(WS): shape mismatch");
    const DAMatrix p = w.matrix() * s.matrix();
    double re = 0.0, im = 0.0, scale = 0.0;
    for (int i = 0; i < p.rows(); ++i) {
        re += p.comp(i, i, 0);
        if (p.beta() == 2) im += p.comp(i, i, 1);
    }
    for (double v : p.components()) scale = std::max(scale, std::abs(v));
    if (std::abs(im) > 1e-10 * std::max(1.0, scale) * p.rows())
        throw DomainError("tr(WS) has a non-negligible imaginary part");
    return re;
}

} // namespace mqf
