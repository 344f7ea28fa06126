#pragma once

#include <cmath>
#include <string>

#include "mqf/error.hpp"

namespace mqf {

// Real dimension of a normed division algebra: R, C, H or O.
class AlgebraKind {
public:
    constexpr AlgebraKind() = default;
    explicit AlgebraKind(int beta) : beta_(beta) {
        if (beta != 1 && beta != 2 && beta != 4 && beta != 8)
            throw DomainError("beta must be one of 1, 2, 4, 8 (got " + std::to_string(beta) + ")");
    }

    constexpr int beta() const noexcept { return beta_; }
    constexpr double alpha() const noexcept { return 2.0 / beta_; }
    constexpr double half_beta() const noexcept { return 0.5 * beta_; }

    // Matrix arithmetic is available for the associative algebras only.
    constexpr bool has_matrix_algebra() const noexcept { return beta_ <= 4; }
    void require_matrix_algebra(const char* op) const {
        if (!has_matrix_algebra())
            throw UnsupportedAlgebra(std::string(op) +
                                     ": octonion (beta=8) matrices are not supported; supply eigenvalue spectra");
    }

    friend constexpr bool operator==(AlgebraKind, AlgebraKind) = default;

private:
    int beta_ = 1;
};

// Quaternion w + x i + y j + z k. Reals and complex numbers embed as the
// first one or two components, so a single scalar type serves beta <= 4.
struct Quat {
    double w = 0, x = 0, y = 0, z = 0;

    constexpr Quat() = default;
    constexpr Quat(double w_, double x_ = 0, double y_ = 0, double z_ = 0) : w(w_), x(x_), y(y_), z(z_) {}

    constexpr Quat conj() const { return {w, -x, -y, -z}; }
    constexpr double norm2() const { return w * w + x * x + y * y + z * z; }
    double abs() const { return std::sqrt(norm2()); }

    constexpr Quat& operator+=(const Quat& o) {
        w += o.w; x += o.x; y += o.y; z += o.z;
        return *this;
    }
    constexpr Quat& operator-=(const Quat& o) {
        w -= o.w; x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }
    friend constexpr Quat operator+(Quat a, const Quat& b) { return a += b; }
    friend constexpr Quat operator-(Quat a, const Quat& b) { return a -= b; }
    friend constexpr Quat operator-(const Quat& a) { return {-a.w, -a.x, -a.y, -a.z}; }
    friend constexpr Quat operator*(const Quat& a, const Quat& b) {
        return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
                a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
                a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
                a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
    }
    friend constexpr Quat operator*(double s, const Quat& a) { return {s * a.w, s * a.x, s * a.y, s * a.z}; }
    friend constexpr Quat operator*(const Quat& a, double s) { return s * a; }
    friend constexpr bool operator==(const Quat&, const Quat&) = default;
};

} // namespace mqf
