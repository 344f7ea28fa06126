#include "mqf/elliptical.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "mqf/matalg.hpp"
#include "mqf/rng.hpp"
#include "mqf/special.hpp"

namespace mqf {

std::string GeneratorFamily::name() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
    case Kind::Normal: return "normal";
    case Kind::PearsonVII: os << "pearson7(s=" << s << ", g=" << g << ")"; return os.str();
    case Kind::StudentT: os << "t(g=" << g << ")"; return os.str();
    case Kind::Cauchy: return "cauchy";
    }
    return "?";
}

BoundGenerator bind(const GeneratorFamily& f, const Dims& d) {
    if (d.m < 1 || d.n < 1) throw DomainError("elliptical dimensions must be positive");
    BoundGenerator b;
    switch (f.kind) {
    case GeneratorFamily::Kind::Normal: return b;
    case GeneratorFamily::Kind::PearsonVII:
        b.s = f.s;
        b.g = f.g;
        break;
    case GeneratorFamily::Kind::StudentT:
        b.g = f.g;
        b.s = 0.5 * (d.real_dim() + f.g);
        break;
    case GeneratorFamily::Kind::Cauchy:
        b.g = 1.0;
        b.s = 0.5 * (d.real_dim() + 1.0);
        break;
    }
    b.normal = false;
    if (!(b.g > 0.0)) throw DomainError("Pearson VII generator needs g > 0");
    if (!(b.s > d.half_dim())) {
        std::ostringstream os;
        os << "Pearson VII generator needs s > beta m n / 2 = " << d.half_dim() << " (got s = " << b.s << ")";
        throw NonNormalizable(os.str());
    }
    return b;
}

double h_value(const GeneratorFamily& f, double u, const Dims& d) {
    if (!(u >= 0.0)) throw DomainError("h(u) requires u >= 0");
    const BoundGenerator b = bind(f, d);
    if (b.normal) return std::exp(-0.5 * u);
    return std::pow(1.0 + u / b.g, -b.s);
}

double h_deriv0(const GeneratorFamily& f, int k, const Dims& d, bool drop_sign) {
    if (k < 0) throw DomainError("h_deriv0: negative order");
    const BoundGenerator b = bind(f, d);
    if (b.normal) return std::pow(-0.5, k);
    const double mag = pochhammer(b.s, k) / std::pow(b.g, k);
    return (drop_sign || k % 2 == 0) ? mag : -mag;
}

namespace {

void require_moment(const BoundGenerator& b, double c) {
    if (!(c > 0.0)) throw DomainError("radial moment needs c > 0");
    if (!b.normal && !(b.s > c)) {
        std::ostringstream os;
        os << "radial moment diverges: Pearson VII needs s > c (s = " << b.s << ", c = " << c << ")";
        throw DomainError(os.str());
    }
}

} // namespace

double log_radial_moment(const GeneratorFamily& f, double c, const Dims& d) {
    const BoundGenerator b = bind(f, d);
    require_moment(b, c);
    if (b.normal) return c * std::log(2.0) + std::lgamma(c);
    return c * std::log(b.g) + std::lgamma(c) + std::lgamma(b.s - c) - std::lgamma(b.s);
}

double radial_moment(const GeneratorFamily& f, double c, const Dims& d) {
    return std::exp(log_radial_moment(f, c, d));
}

double radial_moment_printed(const GeneratorFamily& f, double c, const Dims& d) {
    const BoundGenerator b = bind(f, d);
    require_moment(b, c);
    const double base = b.normal ? 2.0 : b.g;
    return radial_moment(f, c, d) * std::pow(base, d.beta.beta() - 1.0);
}

double radial_moment_quadrature(const GeneratorFamily& f, double c, const Dims& d) {
    const BoundGenerator b = bind(f, d);
    require_moment(b, c);
    boost::math::quadrature::exp_sinh<double> integrator;
    auto integrand = [&](double z) {
        if (!(z > 0.0) || !std::isfinite(z)) return 0.0;
        const double log_h = b.normal ? -0.5 * z : -b.s * std::log1p(z / b.g);
        return std::exp(log_h + (c - 1.0) * std::log(z));
    };
    return integrator.integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), 1e-14);
}

double log_normalizing_constant(const GeneratorFamily& f, int m, int n, AlgebraKind beta) {
    const Dims d{m, n, beta};
    const double half = d.half_dim();
    return std::lgamma(half) + half * std::log(beta.beta()) - half * std::log(std::numbers::pi) -
           log_radial_moment(f, half, d);
}

double normalizing_constant(const GeneratorFamily& f, int m, int n, AlgebraKind beta) {
    return std::exp(log_normalizing_constant(f, m, n, beta));
}

double normalizing_constant_quadrature(const GeneratorFamily& f, int m, int n, AlgebraKind beta) {
    const Dims d{m, n, beta};
    const BoundGenerator b = bind(f, d);
    const int big_n = d.real_dim();
    const double bb = beta.beta();
    boost::math::quadrature::exp_sinh<double> integrator;
    auto integrand = [&](double u) {
        if (!(u > 0.0) || !std::isfinite(u)) return 0.0;
        const double arg = bb * u * u;
        const double log_h = b.normal ? -0.5 * arg : -b.s * std::log1p(arg / b.g);
        return std::exp(log_h + (big_n - 1) * std::log(u));
    };
    const double radial = integrator.integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), 1e-14);
    const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * big_n) / std::tgamma(0.5 * big_n);
    return 1.0 / (sphere * radial);
}

void EllipticalModel::validate() const {
    if (theta.algebra() != beta || sigma.algebra() != beta || mu.algebra() != beta)
        throw DomainError("elliptical model: mu, Theta, Sigma must share the model's beta");
    if (mu.rows() != n() || mu.cols() != m())
        throw DomainError("elliptical model: mu must be n x m with n = dim Theta, m = dim Sigma");
    bind(family, dims());
    if (beta.has_matrix_algebra()) {
        det_pd(theta, "Theta");
        det_pd(sigma, "Sigma");
    }
}

EllipticalModel EllipticalModel::standard(const GeneratorFamily& f, int n, int m, AlgebraKind beta) {
    return {DAMatrix(beta, n, m), HermitianMatrix::identity(beta, n), HermitianMatrix::identity(beta, m), f, beta};
}

double density_x(const DAMatrix& y, const EllipticalModel& model) {
    model.validate();
    model.beta.require_matrix_algebra("density_x");
    if (y.rows() != model.n() || y.cols() != model.m() || y.algebra() != model.beta)
        throw DomainError("density_x: Y has the wrong shape or algebra");
    const Dims d = model.dims();
    const DAMatrix dev = y - model.mu;
    const HermitianMatrix q = congruence(dev, inverse_pd(model.theta));
    const HermitianMatrix sih = inv_sqrt_pd(model.sigma);
    const double tr = congruence(sih.matrix(), q).real_trace();
    const double b = model.beta.beta();
    const double log_det = -0.5 * b * model.n() * std::log(det_pd(model.sigma, "Sigma")) -
                           0.5 * b * model.m() * std::log(det_pd(model.theta, "Theta"));
    return std::exp(log_normalizing_constant(model.family, d.m, d.n, model.beta) + log_det) *
           h_value(model.family, b * tr, d);
}

EllipticalSampler::EllipticalSampler(const EllipticalModel& model) : model_(model) {
    model_.validate();
    model_.beta.require_matrix_algebra("sample_x");
    gen_ = bind(model_.family, model_.dims());
    theta_half_ = sqrt_psd(model_.theta).matrix();
    sigma_half_ = sqrt_psd(model_.sigma).matrix();
}

DAMatrix EllipticalSampler::draw_standard(std::uint64_t seed, std::uint64_t index) const {
    StreamRng rng(seed, index);
    const AlgebraKind beta = model_.beta;
    const int n = model_.n(), m = model_.m();
    if (gen_.normal) return gaussian_matrix(beta, n, m, 1.0 / beta.beta(), rng);
    const Dims d = model_.dims();
    DAMatrix z = gaussian_matrix(beta, n, m, 1.0, rng);
    std::gamma_distribution<double> g1(d.half_dim(), 1.0), g2(gen_.s - d.half_dim(), 1.0);
    const double t = g1(rng) / g2(rng);
    const double rho = std::sqrt(gen_.g * t / beta.beta());
    z *= rho / z.frobenius_norm();
    return z;
}

DAMatrix EllipticalSampler::draw(std::uint64_t seed, std::uint64_t index) const {
    return model_.mu + theta_half_ * draw_standard(seed, index) * sigma_half_;
}

std::vector<DAMatrix> sample_x(const EllipticalModel& model, std::size_t count, std::uint64_t seed, bool antithetic,
                               std::uint64_t first) {
    const EllipticalSampler sampler(model);
    std::vector<DAMatrix> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t idx = first + i;
        if (antithetic && idx % 2 == 1) {
            // Reflection through mu of the partner draw.
            DAMatrix x = sampler.draw(seed, idx - 1);
            out.push_back(2.0 * model.mu - x);
            continue;
        }
        out.push_back(sampler.draw(seed, idx));
    }
    return out;
}

} // namespace mqf
