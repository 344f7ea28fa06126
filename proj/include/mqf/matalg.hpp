#pragma once

#include <cstdint>
#include <vector>

#include "mqf/matrix.hpp"

namespace mqf {

/// Default relative rank tolerance: a multiple of dim * machine epsilon.
double default_rank_tol(int dim);

struct HermitianEigen {
    std::vector<double> values; // descending
    DAMatrix vectors;           // columns orthonormal over the algebra, A v_i = v_i values[i]
};

/// Real eigenvalues of a Hermitian matrix, descending. beta = 4 goes through
/// the 2m x 2m complex embedding, whose spectrum repeats every value twice.
std::vector<double> eig_hermitian(const HermitianMatrix& s);
HermitianEigen eig_hermitian_system(const HermitianMatrix& s);

/// Non-singular part A = P1 diag(lambda) P1* of a positive semidefinite A.
struct PSDDecomposition {
    int rank = 0;
    DAMatrix frame;              // n x r, P1* P1 = I_r
    std::vector<double> lambda;  // r positive values, descending
};

// tol <= 0 selects default_rank_tol(n). Eigenvalues below -tol * max|lambda|
// raise IndefiniteInput.
PSDDecomposition spectral_nonsingular(const HermitianMatrix& a, double tol = 0.0);
HermitianMatrix moore_penrose(const HermitianMatrix& a, double tol = 0.0);
HermitianMatrix sqrt_psd(const HermitianMatrix& a, double tol = 0.0);

// Inverse and inverse square root of a positive definite matrix.
HermitianMatrix inverse_pd(const HermitianMatrix& a);
HermitianMatrix inv_sqrt_pd(const HermitianMatrix& a);
// Determinant of a positive definite matrix (product of eigenvalues);
// throws DomainError unless all eigenvalues exceed tol * max.
double det_pd(const HermitianMatrix& a, const char* what = "matrix");

// X Y as a Hermitian matrix when the product is known to be self-adjoint
// (e.g. B* S B).
HermitianMatrix congruence(const DAMatrix& b, const HermitianMatrix& s);

/// prod sigma_i(A)^{beta m} over the n singular values of the p x n matrix A
/// (full column rank required): the Jacobian of X -> AX on n x m matrices.
double linear_volume_factor(const DAMatrix& a, int m, double tol = 0.0);

/// prod lambda_i(A C C* A*)^{beta m/2} / prod lambda_i(C C*)^{beta m/2} over
/// the q = rank(C) nonzero eigenvalues: the Jacobian of Y = AX restricted to
/// X = C Z. Raises RankError if rank(AC) < rank(C).
double singular_volume_factor(const DAMatrix& a, const DAMatrix& c, int m, double tol = 0.0);

/// Haar-distributed element of U^beta(m) and a uniform n x m Stiefel frame,
/// from Gram-Schmidt of a Gaussian matrix (beta <= 4).
DAMatrix haar_sample(int m, AlgebraKind beta, std::uint64_t seed, std::uint64_t stream = 0);
DAMatrix stiefel_sample(int m, int n, AlgebraKind beta, std::uint64_t seed, std::uint64_t stream = 0);

// Gaussian n x m matrix whose beta components are i.i.d. N(0, var).
template <class Rng>
DAMatrix gaussian_matrix(AlgebraKind beta, int n, int m, double var, Rng& rng);

// Modified Gram-Schmidt over the algebra, in place on the columns of `a`.
// Returns the number of columns kept (columns whose residual norm falls
// below `drop` times their original norm are zeroed and skipped).
int gram_schmidt(DAMatrix& a, double drop = 1e-10);

} // namespace mqf

#include <random>

namespace mqf {

template <class Rng>
DAMatrix gaussian_matrix(AlgebraKind beta, int n, int m, double var, Rng& rng) {
    std::normal_distribution<double> nd(0.0, std::sqrt(var));
    DAMatrix g(beta, n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            for (int c = 0; c < beta.beta(); ++c) g.comp(i, j, c) = nd(rng);
    return g;
}

} // namespace mqf
