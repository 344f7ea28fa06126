#include "mqf/matalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mqf/rng.hpp"

namespace mqf {

namespace {

// Quaternion inner product p* q of columns a and b of two matrices.
Quat column_dot(const DAMatrix& p, int pc, const DAMatrix& q, int qc) {
    Quat s;
    for (int i = 0; i < p.rows(); ++i) s += p.at(i, pc).conj() * q.at(i, qc);
    return s;
}

double column_norm(const DAMatrix& a, int c) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i) s += a.at(i, c).norm2();
    return std::sqrt(s);
}

// q_c <- q_c - p_pc (p_pc* q_c); right scalar multiplication keeps
// eigenvectors of a Hermitian quaternion matrix inside their eigenspace.
void project_out(const DAMatrix& p, int pc, DAMatrix& q, int qc) {
    const Quat d = column_dot(p, pc, q, qc);
    for (int i = 0; i < q.rows(); ++i) q.set(i, qc, q.at(i, qc) - p.at(i, pc) * d);
}

void scale_column(DAMatrix& a, int c, double s) {
    for (int i = 0; i < a.rows(); ++i) a.set(i, c, a.at(i, c) * s);
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// f applied to the spectrum: V diag(f(lambda)) V*.
template <class F>
HermitianMatrix spectral_map(const HermitianEigen& e, F&& f) {
    const int n = static_cast<int>(e.values.size());
    DAMatrix scaled = e.vectors;
    for (int c = 0; c < n; ++c) scale_column(scaled, c, f(e.values[c]));
    return HermitianMatrix(scaled * e.vectors.adjoint());
}

} // namespace

double default_rank_tol(int dim) {
    return 64.0 * std::max(dim, 1) * std::numeric_limits<double>::epsilon();
}

HermitianEigen eig_hermitian_system(const HermitianMatrix& s) {
    const AlgebraKind beta = s.algebra();
    beta.require_matrix_algebra("eig_hermitian");
    const int n = s.dim();
    const CMatrix e = s.matrix().embed();
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(e);
    if (solver.info() != Eigen::Success) throw DomainError("eig_hermitian: eigensolver failed");
    const Eigen::VectorXd vals = solver.eigenvalues(); // ascending
    const CMatrix& vecs = solver.eigenvectors();
    const int dim = static_cast<int>(vals.size());

    HermitianEigen out;
    if (beta.beta() == 1) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> real_solver(e.real());
        if (real_solver.info() != Eigen::Success) throw DomainError("eig_hermitian: eigensolver failed");
        out.vectors = DAMatrix(beta, n, n);
        for (int c = 0; c < n; ++c) {
            out.values.push_back(real_solver.eigenvalues()(n - 1 - c));
            for (int i = 0; i < n; ++i) out.vectors.comp(i, c, 0) = real_solver.eigenvectors()(i, n - 1 - c);
        }
        return out;
    }
    if (beta.beta() == 2) {
        out.vectors = DAMatrix(beta, n, n);
        for (int c = 0; c < n; ++c) {
            const int src = dim - 1 - c;
            out.values.push_back(vals(src));
            for (int i = 0; i < n; ++i) out.vectors.set(i, c, Quat(vecs(i, src).real(), vecs(i, src).imag()));
        }
        return out;
    }

    // beta = 4: the embedding spectrum comes in equal pairs.
    const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
    for (int c = 0; c < n; ++c) {
        const double hi = vals(dim - 1 - 2 * c);
        const double lo = vals(dim - 2 - 2 * c);
        if (std::abs(hi - lo) > 1e-8 * scale)
            throw DomainError("eig_hermitian: quaternion embedding eigenvalues are not paired (gap " +
                              std::to_string(hi - lo) + ")");
        out.values.push_back(0.5 * (hi + lo));
    }
    // Frame: each complex eigenvector (a; b) interleaved is the first column
    // of the embedding of the quaternion vector a - conj(b) j. Walk them in
    // descending order and keep those independent over the quaternions.
    out.vectors = DAMatrix(beta, n, n);
    DAMatrix cand(beta, n, 1);
    int kept = 0;
    for (int src = dim - 1; src >= 0 && kept < n; --src) {
        for (int i = 0; i < n; ++i) {
            const auto a = vecs(2 * i, src);
            const auto b = vecs(2 * i + 1, src);
            cand.set(i, 0, Quat(a.real(), a.imag(), -b.real(), b.imag()));
        }
        for (int p = 0; p < kept; ++p) project_out(out.vectors, p, cand, 0);
        const double nrm = column_norm(cand, 0);
        if (nrm < 0.5) continue;
        for (int i = 0; i < n; ++i) out.vectors.set(i, kept, cand.at(i, 0) * (1.0 / nrm));
        ++kept;
    }
    if (kept != n) throw DomainError("eig_hermitian: could not assemble a quaternion eigenframe");
    return out;
}

std::vector<double> eig_hermitian(const HermitianMatrix& s) {
    const AlgebraKind beta = s.algebra();
    beta.require_matrix_algebra("eig_hermitian");
    const CMatrix e = s.matrix().embed();
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(e, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw DomainError("eig_hermitian: eigensolver failed");
    const Eigen::VectorXd vals = solver.eigenvalues();
    const int dim = static_cast<int>(vals.size());
    std::vector<double> out;
    if (beta.beta() <= 2) {
        for (int i = dim - 1; i >= 0; --i) out.push_back(vals(i));
        return out;
    }
    const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
    for (int i = dim - 1; i > 0; i -= 2) {
        if (std::abs(vals(i) - vals(i - 1)) > 1e-8 * scale)
            throw DomainError("eig_hermitian: quaternion embedding eigenvalues are not paired (gap " +
                              std::to_string(vals(i) - vals(i - 1)) + ")");
        out.push_back(0.5 * (vals(i) + vals(i - 1)));
    }
    return out;
}

PSDDecomposition spectral_nonsingular(const HermitianMatrix& a, double tol) {
    if (tol <= 0.0) tol = default_rank_tol(a.dim());
    const HermitianEigen e = eig_hermitian_system(a);
    const double cut = tol * max_abs(e.values);
    PSDDecomposition d;
    for (double v : e.values) {
        if (v < -cut)
            throw IndefiniteInput("matrix is not positive semidefinite (eigenvalue " + std::to_string(v) + ")");
        if (v > cut) {
            d.lambda.push_back(v);
            ++d.rank;
        }
    }
    d.frame = DAMatrix(a.algebra(), a.dim(), d.rank);
    for (int c = 0; c < d.rank; ++c)
        for (int i = 0; i < a.dim(); ++i) d.frame.set(i, c, e.vectors.at(i, c));
    return d;
}

HermitianMatrix moore_penrose(const HermitianMatrix& a, double tol) {
    const PSDDecomposition d = spectral_nonsingular(a, tol);
    DAMatrix scaled = d.frame;
    for (int c = 0; c < d.rank; ++c) scale_column(scaled, c, 1.0 / d.lambda[c]);
    return HermitianMatrix(scaled * d.frame.adjoint());
}

HermitianMatrix sqrt_psd(const HermitianMatrix& a, double tol) {
    const PSDDecomposition d = spectral_nonsingular(a, tol);
    DAMatrix scaled = d.frame;
    for (int c = 0; c < d.rank; ++c) scale_column(scaled, c, std::sqrt(d.lambda[c]));
    if (d.rank == 0) return HermitianMatrix(DAMatrix(a.algebra(), a.dim(), a.dim()));
    return HermitianMatrix(scaled * d.frame.adjoint());
}

namespace {

HermitianEigen pd_eigen(const HermitianMatrix& a, const char* what) {
    HermitianEigen e = eig_hermitian_system(a);
    const double cut = default_rank_tol(a.dim()) * max_abs(e.values);
    for (double v : e.values)
        if (!(v > cut)) throw DomainError(std::string(what) + " is not positive definite (eigenvalue " +
                                          std::to_string(v) + ")");
    return e;
}

} // namespace

HermitianMatrix inverse_pd(const HermitianMatrix& a) {
    return spectral_map(pd_eigen(a, "matrix"), [](double v) { return 1.0 / v; });
}

HermitianMatrix inv_sqrt_pd(const HermitianMatrix& a) {
    return spectral_map(pd_eigen(a, "matrix"), [](double v) { return 1.0 / std::sqrt(v); });
}

double det_pd(const HermitianMatrix& a, const char* what) {
    const std::vector<double> v = eig_hermitian(a);
    const double cut = default_rank_tol(a.dim()) * max_abs(v);
    double d = 1.0;
    for (double x : v) {
        if (!(x > cut))
            throw DomainError(std::string(what) + " is not positive definite (eigenvalue " + std::to_string(x) + ")");
        d *= x;
    }
    return d;
}

HermitianMatrix congruence(const DAMatrix& b, const HermitianMatrix& s) {
    return HermitianMatrix(b.adjoint() * s.matrix() * b);
}

double linear_volume_factor(const DAMatrix& a, int m, double tol) {
    if (m <= 0) throw DomainError("linear_volume_factor: m must be positive");
    const int n = a.cols();
    if (tol <= 0.0) tol = default_rank_tol(std::max(a.rows(), n));
    const HermitianMatrix gram(a.adjoint() * a);
    const std::vector<double> s2 = eig_hermitian(gram);
    const double cut = tol * max_abs(s2);
    double f = 1.0;
    for (int i = 0; i < n; ++i) {
        if (!(s2[i] > cut))
            throw RankError("linear_volume_factor: A has rank " + std::to_string(i) + " < " + std::to_string(n));
        f *= std::pow(s2[i], 0.5 * a.beta() * m);
    }
    return f;
}

double singular_volume_factor(const DAMatrix& a, const DAMatrix& c, int m, double tol) {
    if (m <= 0) throw DomainError("singular_volume_factor: m must be positive");
    if (a.cols() != c.rows()) throw DomainError("singular_volume_factor: shape mismatch");
    const DAMatrix ac = a * c;
    const std::vector<double> lc = eig_hermitian(HermitianMatrix(c * c.adjoint()));
    const std::vector<double> lac = eig_hermitian(HermitianMatrix(ac * ac.adjoint()));
    const double tc = (tol > 0.0 ? tol : default_rank_tol(c.rows())) * max_abs(lc);
    const double tac = (tol > 0.0 ? tol : default_rank_tol(ac.rows())) * max_abs(lac);
    const int q = static_cast<int>(std::count_if(lc.begin(), lc.end(), [&](double v) { return v > tc; }));
    const int qa = static_cast<int>(std::count_if(lac.begin(), lac.end(), [&](double v) { return v > tac; }));
    if (qa < q)
        throw RankError("singular_volume_factor: rank(AC) = " + std::to_string(qa) + " < rank(C) = " +
                        std::to_string(q));
    const double e = 0.5 * a.beta() * m;
    double f = 1.0;
    for (int i = 0; i < q; ++i) f *= std::pow(lac[i] / lc[i], e);
    return f;
}

int gram_schmidt(DAMatrix& a, double drop) {
    a.algebra().require_matrix_algebra("gram_schmidt");
    int kept = 0;
    for (int c = 0; c < a.cols(); ++c) {
        const double before = column_norm(a, c);
        for (int p = 0; p < c; ++p)
            if (column_norm(a, p) > 0.0) project_out(a, p, a, c);
        const double after = column_norm(a, c);
        if (before == 0.0 || after <= drop * before) {
            scale_column(a, c, 0.0);
            continue;
        }
        scale_column(a, c, 1.0 / after);
        ++kept;
    }
    return kept;
}

DAMatrix stiefel_sample(int m, int n, AlgebraKind beta, std::uint64_t seed, std::uint64_t stream) {
    beta.require_matrix_algebra("stiefel_sample");
    if (m <= 0 || m > n) throw DomainError("stiefel_sample: need 0 < m <= n");
    StreamRng rng(seed, stream);
    for (;;) {
        DAMatrix g = gaussian_matrix(beta, n, m, 1.0, rng);
        // Gram-Schmidt leaves the triangular factor with a positive real
        // diagonal, which makes the frame exactly Haar distributed.
        if (gram_schmidt(g) == m) return g;
    }
}

DAMatrix haar_sample(int m, AlgebraKind beta, std::uint64_t seed, std::uint64_t stream) {
    return stiefel_sample(m, m, beta, seed, stream);
}

} // namespace mqf
