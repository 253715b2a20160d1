#pragma once

#include <vector>

#include "quadrinv/homogeneous.hpp"
#include "quadrinv/types.hpp"

namespace quadrinv {

/// A cluster of numerically equal eigenvalues.
struct EigenCluster {
  Complex value;
  int multiplicity = 0;  // algebraic
  int geometric = 0;     // numerical rank deficiency of A - value*I, capped at multiplicity
};

/// Complex eigenstructure of a real invertible matrix.
///
/// `vectors` holds `geometric` unit eigenvectors per cluster, grouped in
/// cluster order; `column_cluster[k]` names the cluster of column k. Columns
/// of complex-conjugate clusters are exact conjugates of each other.
struct SpectralDecomposition {
  std::vector<EigenCluster> eigenvalues;  // sorted by (|lambda|, arg in [0, 2pi))
  CMatrix vectors;
  std::vector<int> column_cluster;
  bool semisimple = false;
  double condition = 0.0;  // cond(V); infinite unless semisimple
  double residual = 0.0;   // ||A V - V D_raw||_F / ||A||_F
  double norm = 0.0;       // ||A||_2
  bool closed_plus = false;   // spectrum closed under lambda -> 1/lambda
  bool closed_minus = false;  // spectrum closed under lambda -> -1/lambda

  int order() const { return static_cast<int>(vectors.rows()); }
  /// Index of the cluster containing `z` within the pairing tolerance, or -1.
  int find(Complex z, double tol_pair) const;
};

/// Eigenvalues clustered by union-find at distance tol.cluster * ||A||_2;
/// eigenvectors from the null space of A - lambda I per cluster.
/// Throws IllConditionedEigenbasis when a semisimple basis has condition
/// number above tol.max_eigvec_condition.
SpectralDecomposition decompose(const Matrix& a, const Tolerances& tol = {});
SpectralDecomposition decompose(const SystemMatrix& system, const Tolerances& tol = {});

/// Multiset {lambda} equals {eps/lambda} with multiplicities. Does not require
/// semisimplicity.
bool spectrum_closed(const SpectralDecomposition& sd, Epsilon eps, const Tolerances& tol = {});

/// Whether A is similar to eps * A^{-1}; throws NotSemisimple otherwise.
bool check_inverse_similarity(const SpectralDecomposition& sd, Epsilon eps, const Tolerances& tol = {});

/// A transversal of the pairing lambda <-> eps/lambda that excludes the two
/// self-paired values +-sqrt(eps).
struct SigmaSet {
  std::vector<EigenCluster> sigma;
  int r = 0;  // m(sqrt eps)
  int s = 0;  // m(-sqrt eps)
};

/// Selects eigenvalues with |lambda| < 1 together with the unit-modulus ones
/// in the upper half plane (eps = +1) or right half plane (eps = -1).
/// Requires check_inverse_similarity; throws NotApplicable otherwise and
/// PairingAmbiguity when the selection is not a transversal.
SigmaSet sigma_epsilon(const SpectralDecomposition& sd, Epsilon eps, const Tolerances& tol = {});

/// D = P A P^{-1} with D = diag(D(l_1), ..., D(l_j), sqrt(eps) I_r, -sqrt(eps) I_s),
/// D(l) = diag(l, eps/l), each sigma-eigenvalue repeated by its multiplicity.
struct OrderedDiagonalization {
  Epsilon eps = Epsilon::plus;
  CVector d;
  CMatrix p;       // rows: dual basis
  CMatrix basis;   // P^{-1}; columns are eigenvectors in D order
  std::vector<int> column_cluster;
  int j = 0;
  int r = 0;
  int s = 0;
  double condition = 0.0;  // cond(P)

  int order() const { return static_cast<int>(d.size()); }
  /// Number of diagonal blocks: j pairs followed by r + s singletons.
  int block_count() const { return j + r + s; }
};

OrderedDiagonalization ordered_diagonalization(const SpectralDecomposition& sd, Epsilon eps,
                                               const Tolerances& tol = {});

}  // namespace quadrinv
