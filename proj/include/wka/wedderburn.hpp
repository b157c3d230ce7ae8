// Wedderburn data of a finite-dimensional C*-algebra: central projections,
// block sizes, matrix units, inclusion matrices and Perron-Frobenius data.

#ifndef WKA_WEDDERBURN_HPP_
#define WKA_WEDDERBURN_HPP_

#include <vector>

#include "wka/star_algebra.hpp"

namespace wka {

/// A ~= M_{d_1} + ... + M_{d_N}.  Column i of central_projections is the
/// unit of the i-th summand.  Blocks are ordered by size, ties broken by the
/// coordinates of the projections, so the order does not depend on the seed.
struct BlockDecomposition {
  Mat central_projections;
  std::vector<int> block_dims;

  int blocks() const { return int(block_dims.size()); }
};

/// units[i] has d_i^2 columns; column k*d_i + l holds e_kl of block i.
struct MatrixUnitSystem {
  std::vector<Mat> units;
  std::vector<int> block_dims;

  Element unit(int block, int k, int l) const {
    return units[block].col(Eigen::Index(k) * block_dims[block] + l);
  }
};

/// Minimal projections of the commutative *-subalgebra spanned by the
/// columns of `basis`, found as eigenvectors of multiplication by a random
/// self-adjoint element.  Throws DecompositionError if no clean split is
/// found within the retry budget.
Mat minimal_projections(const StarAlgebra& a, const Mat& basis, const Tolerance& tol);

BlockDecomposition block_decompose(const StarAlgebra& a, const Tolerance& tol);
Report verify_block_decomposition(const StarAlgebra& a, const BlockDecomposition& dec,
                                  const Tolerance& tol);

MatrixUnitSystem matrix_units(const StarAlgebra& a, const BlockDecomposition& dec,
                              const Tolerance& tol);
Report verify_matrix_units(const StarAlgebra& a, const MatrixUnitSystem& mu, const Tolerance& tol);

/// Lambda(alpha, i) = multiplicity of block alpha of the subalgebra inside
/// block i of the ambient algebra.  Throws VerificationError when an entry is
/// not integral.
IntMat inclusion_matrix(const SubalgebraEmbedding& e, const MatrixUnitSystem& sub_units,
                        const BlockDecomposition& amb_dec, const Tolerance& tol);
IntMat inclusion_matrix(const SubalgebraEmbedding& e, const Tolerance& tol);

struct PerronData {
  double value = 0.0;
  Eigen::VectorXd vector;
  bool irreducible = false;
};

/// Dominant eigenvalue and eigenvector of an entrywise nonnegative matrix by
/// power iteration on M + I.  The vector is scaled so that its smallest
/// positive entry is 1.
PerronData perron_eigen(const RealMat& m, int max_iterations = 200000);

RealMat to_real(const IntMat& m);
Eigen::VectorXd to_real(const std::vector<int>& v);

} // namespace wka

#endif // WKA_WEDDERBURN_HPP_
