#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "mqf/algebra.hpp"

namespace mqf {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Dense n x m matrix over the algebra of dimension beta, stored as beta
/// real components per entry (row-major entries, components contiguous).
///
/// For beta <= 4 the matrix has a complex embedding: beta = 1, 2 map entry
/// for entry; a quaternion w + xi + yj + zk = z1 + z2 j with z1 = w + xi,
/// z2 = y + zi becomes the block [[z1, z2], [-conj z2, conj z1]].
class DAMatrix {
public:
    DAMatrix() = default;
    DAMatrix(AlgebraKind beta, int rows, int cols);

    static DAMatrix identity(AlgebraKind beta, int n);
    static DAMatrix from_real(AlgebraKind beta, const Eigen::MatrixXd& m);
    static DAMatrix diagonal(AlgebraKind beta, const std::vector<double>& d);
    // Inverse of embed(); the input must have the block structure for beta = 4
    // and zero imaginary part for beta = 1 (neither is checked).
    static DAMatrix from_embedding(AlgebraKind beta, const CMatrix& e);

    AlgebraKind algebra() const noexcept { return beta_; }
    int beta() const noexcept { return beta_.beta(); }
    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }

    double comp(int i, int j, int c) const { return data_[index(i, j) + c]; }
    double& comp(int i, int j, int c) { return data_[index(i, j) + c]; }
    const std::vector<double>& components() const noexcept { return data_; }

    // Entry as a quaternion (beta <= 4; missing components are zero).
    Quat at(int i, int j) const;
    void set(int i, int j, const Quat& q);

    DAMatrix adjoint() const;
    CMatrix embed() const;

    double frobenius_norm() const;
    double max_abs_diff(const DAMatrix& o) const;

    DAMatrix& operator+=(const DAMatrix& o);
    DAMatrix& operator-=(const DAMatrix& o);
    DAMatrix& operator*=(double s);
    friend DAMatrix operator+(DAMatrix a, const DAMatrix& b) { return a += b; }
    friend DAMatrix operator-(DAMatrix a, const DAMatrix& b) { return a -= b; }
    friend DAMatrix operator*(double s, DAMatrix a) { return a *= s; }
    friend DAMatrix operator*(const DAMatrix& a, const DAMatrix& b);

    friend bool operator==(const DAMatrix& a, const DAMatrix& b) {
        return a.beta_ == b.beta_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t index(int i, int j) const {
        return (static_cast<std::size_t>(i) * cols_ + j) * static_cast<std::size_t>(beta_.beta());
    }

    AlgebraKind beta_;
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// Self-adjoint square DAMatrix. Construction rejects asymmetry beyond
/// 1e-12 (relative to the largest entry) and then replaces the matrix by
/// (S + S*)/2, so the stored matrix is exactly self-adjoint.
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(DAMatrix m);

    static HermitianMatrix identity(AlgebraKind beta, int n) { return HermitianMatrix(DAMatrix::identity(beta, n)); }
    static HermitianMatrix diagonal(AlgebraKind beta, const std::vector<double>& d) {
        return HermitianMatrix(DAMatrix::diagonal(beta, d));
    }

    const DAMatrix& matrix() const noexcept { return m_; }
    AlgebraKind algebra() const noexcept { return m_.algebra(); }
    int beta() const noexcept { return m_.beta(); }
    int dim() const noexcept { return m_.rows(); }

    double real_trace() const;

private:
    DAMatrix m_;
};

} // namespace mqf
