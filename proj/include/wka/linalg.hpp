// Dense linear-algebra helpers: ranks, null spaces, subspace intersection
// and the row-major tensor layout used for elements of A (x) B.

#ifndef WKA_LINALG_HPP_
#define WKA_LINALG_HPP_

#include <vector>

#include "wka/types.hpp"

namespace wka {

double max_abs(const Mat& m);
inline double max_abs(const Element& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

int numerical_rank(const Mat& m, const Tolerance& tol);

/// Orthonormal basis (columns) of {x : m x = 0}.
Mat null_space(const Mat& m, const Tolerance& tol);

/// Orthonormal basis (columns) of the column space of m.
Mat range_basis(const Mat& m, const Tolerance& tol);

/// Greedy left-to-right choice of linearly independent columns.  The result
/// depends only on the column order, which keeps coordinates reproducible.
std::vector<int> independent_columns(const Mat& m, const Tolerance& tol);

/// Same as independent_columns but continuing from an existing orthonormal
/// set `fixed`: returns the columns of m that enlarge span(fixed).
std::vector<int> independent_columns(const Mat& m, const Mat& fixed, const Tolerance& tol);

/// Orthonormal basis of span(u) intersected with span(v).
Mat intersect(const Mat& u, const Mat& v, const Tolerance& tol);

/// Distance of each column of v from span(u) (u orthonormal); the max is returned.
double distance_from_span(const Mat& orthonormal_u, const Mat& v);

/// Least-squares solution of a x = b; `residual` receives max|a x - b|.
Element solve_least_squares(const Mat& a, const Element& b, double* residual = nullptr);
Mat solve_least_squares(const Mat& a, const Mat& b, double* residual = nullptr);

Mat kron(const Mat& a, const Mat& b);
Element kron(const Element& a, const Element& b);

/// Element of an n_a*n_b dimensional tensor product stored at index
/// i*n_b + j, viewed as an n_a x n_b matrix.
Mat unflatten(const Element& v, int rows, int cols);
Element flatten(const Mat& t);

/// Rounds to the nearest integer; throws VerificationError if the value is
/// not integral within tolerance.
long long checked_round(double value, const Tolerance& tol, const std::string& what);
bool is_integral(double value, const Tolerance& tol);

/// Smallest eigenvalue of the Hermitian part of m.
double min_hermitian_eigenvalue(const Mat& m);

} // namespace wka

#endif // WKA_LINALG_HPP_
