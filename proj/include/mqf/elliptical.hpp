#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mqf/algebra.hpp"
#include "mqf/matrix.hpp"

namespace mqf {

/// Density generator h of a matrix elliptical law. StudentT and Cauchy are
/// Pearson VII generators whose exponent depends on the dimension; they are
/// resolved by bind().
struct GeneratorFamily {
    enum class Kind { Normal, PearsonVII, StudentT, Cauchy };

    Kind kind = Kind::Normal;
    double s = 0.0; // Pearson VII exponent
    double g = 0.0; // Pearson VII / t scale (degrees of freedom for t)

    static GeneratorFamily normal() { return {Kind::Normal, 0.0, 0.0}; }
    static GeneratorFamily pearson7(double s, double g) { return {Kind::PearsonVII, s, g}; }
    static GeneratorFamily student_t(double g) { return {Kind::StudentT, 0.0, g}; }
    static GeneratorFamily cauchy() { return {Kind::Cauchy, 0.0, 1.0}; }

    std::string name() const;
};

/// Shape of X (n x m over the algebra); N = beta m n real coordinates.
struct Dims {
    int m = 1;
    int n = 1;
    AlgebraKind beta;

    int real_dim() const { return beta.beta() * m * n; }
    double half_dim() const { return 0.5 * real_dim(); }
};

/// A generator with the dimension fixed: either the normal kernel
/// exp(-u/2) or (1 + u/g)^{-s} with s > N/2, g > 0.
struct BoundGenerator {
    bool normal = true;
    double s = 0.0;
    double g = 0.0;
};

BoundGenerator bind(const GeneratorFamily& f, const Dims& d);

double h_value(const GeneratorFamily& f, double u, const Dims& d);

/// h^{(k)}(0). Normal: (-1/2)^k. Pearson VII: (-1)^k (s)_k / g^k, or without
/// the (-1)^k when `drop_sign` reproduces the sign-free printed variant.
double h_deriv0(const GeneratorFamily& f, int k, const Dims& d, bool drop_sign = false);

/// theta(c) = int_0^inf h(z) z^{c-1} dz. Normal: 2^c Gamma(c); Pearson VII:
/// g^c Gamma(c) Gamma(s-c) / Gamma(s), finite for s > c.
double radial_moment(const GeneratorFamily& f, double c, const Dims& d);
double log_radial_moment(const GeneratorFamily& f, double c, const Dims& d);
// Printed variant with the power of 2 (or g) raised to c - 1 + beta.
double radial_moment_printed(const GeneratorFamily& f, double c, const Dims& d);
// Adaptive quadrature of the defining integral.
double radial_moment_quadrature(const GeneratorFamily& f, double c, const Dims& d);

/// C^beta(m, n) making C h(beta tr ...) a density:
///   Gamma(N/2) beta^{N/2} / (pi^{N/2} theta(N/2)).
double normalizing_constant(const GeneratorFamily& f, int m, int n, AlgebraKind beta);
double log_normalizing_constant(const GeneratorFamily& f, int m, int n, AlgebraKind beta);
// 1 / (Vol(S^{N-1}) int_0^inf u^{N-1} h(beta u^2) du) by adaptive quadrature.
double normalizing_constant_quadrature(const GeneratorFamily& f, int m, int n, AlgebraKind beta);

/// X ~ E_{n x m}(mu, Theta, Sigma, h): density
///   C |Sigma|^{-beta n/2} |Theta|^{-beta m/2} h(beta tr[Sigma^{-1}(X-mu)* Theta^{-1}(X-mu)]).
struct EllipticalModel {
    DAMatrix mu;           // n x m
    HermitianMatrix theta; // n x n, positive definite
    HermitianMatrix sigma; // m x m, positive definite
    GeneratorFamily family;
    AlgebraKind beta;

    int n() const { return theta.dim(); }
    int m() const { return sigma.dim(); }
    Dims dims() const { return {m(), n(), beta}; }

    // Checks shapes, algebra consistency, positive definiteness and the family
    // parameters. Throws DomainError.
    void validate() const;

    // Zero mean; Theta, Sigma identities.
    static EllipticalModel standard(const GeneratorFamily& f, int n, int m, AlgebraKind beta);
};

double density_x(const DAMatrix& y, const EllipticalModel& model);

/// Draws X = mu + Theta^{1/2} Z Sigma^{1/2}. For the normal family the
/// components of Z are i.i.d. N(0, 1/beta); for Pearson VII, Z = rho U with
/// U uniform on the unit sphere of R^N and beta rho^2 / g ~ BetaPrime(N/2, s - N/2).
/// Draw i depends only on (seed, i).
class EllipticalSampler {
public:
    explicit EllipticalSampler(const EllipticalModel& model);

    DAMatrix draw(std::uint64_t seed, std::uint64_t index) const;
    // Z before the affine map.
    DAMatrix draw_standard(std::uint64_t seed, std::uint64_t index) const;
    const EllipticalModel& model() const noexcept { return model_; }

private:
    EllipticalModel model_;
    BoundGenerator gen_;
    DAMatrix theta_half_;
    DAMatrix sigma_half_;
};

/// `count` draws with indices first..first+count-1. With `antithetic`, odd
/// indices return the reflection 2 mu - X of the preceding even draw.
std::vector<DAMatrix> sample_x(const EllipticalModel& model, std::size_t count, std::uint64_t seed,
                               bool antithetic = false, std::uint64_t first = 0);

} // namespace mqf
