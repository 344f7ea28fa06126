#include "mqf/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mqf {

DAMatrix::DAMatrix(AlgebraKind beta, int rows, int cols)
    : beta_(beta), rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw DomainError("DAMatrix: negative dimension");
    data_.assign(static_cast<std::size_t>(rows) * cols * beta.beta(), 0.0);
}

DAMatrix DAMatrix::identity(AlgebraKind beta, int n) {
    DAMatrix m(beta, n, n);
    for (int i = 0; i < n; ++i) m.comp(i, i, 0) = 1.0;
    return m;
}

DAMatrix DAMatrix::from_real(AlgebraKind beta, const Eigen::MatrixXd& r) {
    DAMatrix m(beta, static_cast<int>(r.rows()), static_cast<int>(r.cols()));
    for (int i = 0; i < m.rows_; ++i)
        for (int j = 0; j < m.cols_; ++j) m.comp(i, j, 0) = r(i, j);
    return m;
}

DAMatrix DAMatrix::diagonal(AlgebraKind beta, const std::vector<double>& d) {
    const int n = static_cast<int>(d.size());
    DAMatrix m(beta, n, n);
    for (int i = 0; i < n; ++i) m.comp(i, i, 0) = d[i];
    return m;
}

DAMatrix DAMatrix::from_embedding(AlgebraKind beta, const CMatrix& e) {
    beta.require_matrix_algebra("DAMatrix::from_embedding");
    if (beta.beta() <= 2) {
        DAMatrix m(beta, static_cast<int>(e.rows()), static_cast<int>(e.cols()));
        for (int i = 0; i < m.rows_; ++i) {
            for (int j = 0; j < m.cols_; ++j) {
                m.comp(i, j, 0) = e(i, j).real();
                if (beta.beta() == 2) m.comp(i, j, 1) = e(i, j).imag();
            }
        }
        return m;
    }
    if (e.rows() % 2 != 0 || e.cols() % 2 != 0) throw DomainError("quaternion embedding must have even dimensions");
    DAMatrix m(beta, static_cast<int>(e.rows() / 2), static_cast<int>(e.cols() / 2));
    for (int i = 0; i < m.rows_; ++i) {
        for (int j = 0; j < m.cols_; ++j) {
            const auto z1 = e(2 * i, 2 * j);
            const auto z2 = e(2 * i, 2 * j + 1);
            m.set(i, j, Quat(z1.real(), z1.imag(), z2.real(), z2.imag()));
        }
    }
    return m;
}

Quat DAMatrix::at(int i, int j) const {
    beta_.require_matrix_algebra("DAMatrix::at");
    const std::size_t b = index(i, j);
    Quat q;
    q.w = data_[b];
    if (beta_.beta() >= 2) q.x = data_[b + 1];
    if (beta_.beta() >= 4) {
        q.y = data_[b + 2];
        q.z = data_[b + 3];
    }
    return q;
}

void DAMatrix::set(int i, int j, const Quat& q) {
    beta_.require_matrix_algebra("DAMatrix::set");
    const std::size_t b = index(i, j);
    data_[b] = q.w;
    if (beta_.beta() >= 2) data_[b + 1] = q.x;
    if (beta_.beta() >= 4) {
        data_[b + 2] = q.y;
        data_[b + 3] = q.z;
    }
}

DAMatrix DAMatrix::adjoint() const {
    DAMatrix t(beta_, cols_, rows_);
    const int nb = beta_.beta();
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) {
            t.comp(j, i, 0) = comp(i, j, 0);
            for (int c = 1; c < nb; ++c) t.comp(j, i, c) = -comp(i, j, c);
        }
    }
    return t;
}

CMatrix DAMatrix::embed() const {
    beta_.require_matrix_algebra("DAMatrix::embed");
    using C = std::complex<double>;
    if (beta_.beta() <= 2) {
        CMatrix e(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                e(i, j) = C(comp(i, j, 0), beta_.beta() == 2 ? comp(i, j, 1) : 0.0);
        return e;
    }
    CMatrix e(2 * rows_, 2 * cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) {
            const Quat q = at(i, j);
            const C z1(q.w, q.x), z2(q.y, q.z);
            e(2 * i, 2 * j) = z1;
            e(2 * i, 2 * j + 1) = z2;
            e(2 * i + 1, 2 * j) = -std::conj(z2);
            e(2 * i + 1, 2 * j + 1) = std::conj(z1);
        }
    }
    return e;
}

double DAMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

double DAMatrix::max_abs_diff(const DAMatrix& o) const {
    if (o.beta_ != beta_ || o.rows_ != rows_ || o.cols_ != cols_) throw DomainError("max_abs_diff: shape mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) d = std::max(d, std::abs(data_[i] - o.data_[i]));
    return d;
}

DAMatrix& DAMatrix::operator+=(const DAMatrix& o) {
    if (o.beta_ != beta_ || o.rows_ != rows_ || o.cols_ != cols_) throw DomainError("DAMatrix +: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

DAMatrix& DAMatrix::operator-=(const DAMatrix& o) {
    if (o.beta_ != beta_ || o.rows_ != rows_ || o.cols_ != cols_) throw DomainError("DAMatrix -: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

DAMatrix& DAMatrix::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

DAMatrix operator*(const DAMatrix& a, const DAMatrix& b) {
    a.beta_.require_matrix_algebra("DAMatrix product");
    if (a.beta_ != b.beta_ || a.cols_ != b.rows_)
        throw DomainError("DAMatrix product: shape mismatch (" + std::to_string(a.rows_) + "x" +
                          std::to_string(a.cols_) + " times " + std::to_string(b.rows_) + "x" +
                          std::to_string(b.cols_) + ")");
    DAMatrix c(a.beta_, a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i) {
        for (int j = 0; j < b.cols_; ++j) {
            Quat s;
            for (int l = 0; l < a.cols_; ++l) s += a.at(i, l) * b.at(l, j);
            c.set(i, j, s);
        }
    }
    return c;
}

HermitianMatrix::HermitianMatrix(DAMatrix m) {
    if (m.rows() != m.cols()) throw DomainError("Hermitian matrix must be square");
    const DAMatrix t = m.adjoint();
    double scale = 1.0;
    for (double v : m.components()) scale = std::max(scale, std::abs(v));
    const double asym = m.max_abs_diff(t);
    if (asym > 1e-12 * scale)
        throw DomainError("matrix is not self-adjoint (asymmetry " + std::to_string(asym) + ")");
    m += t;
    m *= 0.5;
    m_ = std::move(m);
}

double HermitianMatrix::real_trace() const {
    double t = 0.0;
    for (int i = 0; i < dim(); ++i) t += m_.comp(i, i, 0);
    return t;
}

} // namespace mqf
