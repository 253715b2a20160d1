#pragma once

#include <cstddef>

#include "quadrinv/types.hpp"

// Small dense linear-algebra helpers shared by the modules.
namespace quadrinv::linalg {

double spectral_norm(const Matrix& a);
double spectral_norm(const CMatrix& a);

/// sigma_min / sigma_max, or 0 for the zero matrix.
double inverse_condition(const Matrix& a);
double condition_number(const CMatrix& a);

/// Number of singular values to treat as zero. `singular_values` must be
/// sorted in decreasing order (as Eigen's SVDs return them).
///
/// Values are compared against top = max(s_0, scale). A cut is placed at the
/// largest ratio s_i / s_{i+1} exceeding 1e6 among positions with
/// s_{i+1} <= tol * top and s_i above the rounding floor 1e-13 * top. Without
/// such a gap, values at or below `tol * top` are counted.
std::size_t nullity(const Vector& singular_values, double tol, double scale = 0.0);

/// Orthonormal basis of the column space, rank decided at `tol * sigma_max`.
Matrix orthonormal_basis(const Matrix& columns, double tol = 1e-10);

/// Orthonormal real basis of the real span of {Re v, Im v} over the columns.
Matrix realify(const CMatrix& columns, double tol = 1e-10);

/// Orthonormal basis of the null space of `a` (rank decided by `nullity`).
Matrix null_space(const Matrix& a, double tol, double scale = 0.0);

// Coordinates on the symmetric matrices of order `order` with respect to the
// Frobenius-orthonormal basis {E_ii} U {(E_ij + E_ji)/sqrt 2 : i < j},
// ordered row-wise over the upper triangle.
std::size_t symmetric_dimension(Eigen::Index order);
Vector to_symmetric_coordinates(const Matrix& m);
Matrix from_symmetric_coordinates(const Vector& coords, Eigen::Index order);
CVector to_symmetric_coordinates(const CMatrix& m);

Matrix symmetric_part(const Matrix& m);

/// Flips the sign so the first entry of maximal magnitude is positive.
void canonicalize_sign(Matrix& m);

/// Scales to unit 2-norm with the first non-negligible entry real positive.
void canonicalize_phase(Eigen::Ref<CVector> v);

/// Distance between the lines spanned by two real vectors, measured on
/// unit representatives: min(|a/|a| - b/|b||, |a/|a| + b/|b||).
double line_distance(const Vector& a, const Vector& b);

}  // namespace quadrinv::linalg
