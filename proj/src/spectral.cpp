#include "quadrinv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "quadrinv/linalg.hpp"

namespace quadrinv {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double argument_0_2pi(Complex z) {
  double arg = std::arg(z);
  if (arg < 0.0) arg += kTwoPi;
  return arg;
}

bool spectral_order(Complex a, Complex b) {
  const double ma = std::abs(a);
  const double mb = std::abs(b);
  if (ma != mb) return ma < mb;
  return argument_0_2pi(a) < argument_0_2pi(b);
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int root(int i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
      parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
      i = parent[static_cast<std::size_t>(i)];
    }
    return i;
  }
  void join(int a, int b) { parent[static_cast<std::size_t>(root(a))] = root(b); }
};

// Right singular vectors of the `count` smallest singular values, and the
// number of singular values below `threshold`.
template <typename MatrixType>
std::pair<CMatrix, int> eigenspace(const MatrixType& shifted, double threshold, int multiplicity) {
  Eigen::JacobiSVD<MatrixType> svd(shifted, Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  int deficiency = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) <= threshold) ++deficiency;
  }
  // An eigenvalue always has at least one eigenvector; keep the closest
  // direction even if rounding lifted it above the threshold.
  const int count = std::max(1, std::min(deficiency, multiplicity));
  CMatrix vectors = svd.matrixV().rightCols(count).template cast<Complex>();
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) linalg::canonicalize_phase(vectors.col(c));
  return {vectors, deficiency};
}

}  // namespace

int SpectralDecomposition::find(Complex z, double tol_pair) const {
  int best = -1;
  double best_dist = std::numeric_limits<double>::infinity();
  const double reach = tol_pair * std::max(1.0, std::abs(z));
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    const double dist = std::abs(eigenvalues[i].value - z);
    if (dist <= reach && dist < best_dist) {
      best = static_cast<int>(i);
      best_dist = dist;
    }
  }
  return best;
}

SpectralDecomposition decompose(const Matrix& a, const Tolerances& tol) {
  if (a.rows() != a.cols() || a.rows() < 1) throw PreconditionError("decompose: matrix must be square");
  const int order = static_cast<int>(a.rows());

  SpectralDecomposition sd;
  sd.norm = linalg::spectral_norm(a);
  if (linalg::inverse_condition(a) <= tol.singular) throw SingularMatrix("decompose: matrix is singular");

  Eigen::EigenSolver<Matrix> solver(a, false);
  if (solver.info() != Eigen::Success) throw NumericalFailure("decompose: eigenvalue iteration did not converge");
  const CVector raw = solver.eigenvalues();

  const double merge = tol.cluster * sd.norm;
  UnionFind groups(order);
  for (int i = 0; i < order; ++i) {
    for (int k = i + 1; k < order; ++k) {
      if (std::abs(raw(i) - raw(k)) <= merge) groups.join(i, k);
    }
  }
  std::vector<EigenCluster> clusters;
  std::vector<int> slot(static_cast<std::size_t>(order), -1);
  std::vector<Complex> sums;
  for (int i = 0; i < order; ++i) {
    const int root = groups.root(i);
    if (slot[static_cast<std::size_t>(root)] < 0) {
      slot[static_cast<std::size_t>(root)] = static_cast<int>(clusters.size());
      clusters.push_back({});
      sums.emplace_back(0.0, 0.0);
    }
    const auto c = static_cast<std::size_t>(slot[static_cast<std::size_t>(root)]);
    clusters[c].multiplicity += 1;
    sums[c] += raw(i);
  }
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    Complex mean = sums[c] / static_cast<double>(clusters[c].multiplicity);
    if (std::abs(mean.imag()) <= merge) mean = Complex(mean.real(), 0.0);
    clusters[c].value = mean;
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const EigenCluster& x, const EigenCluster& y) { return spectral_order(x.value, y.value); });

  // Eigenvectors: real clusters through a real SVD, upper-half-plane clusters
  // through a complex one, lower-half-plane clusters by conjugation.
  const double rank_threshold = tol.rank * sd.norm;
  std::vector<CMatrix> cluster_vectors(clusters.size());
  bool semisimple = true;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    EigenCluster& cl = clusters[c];
    if (cl.value.imag() < 0.0) continue;
    std::pair<CMatrix, int> space;
    if (cl.value.imag() == 0.0) {
      const Matrix shifted = a - cl.value.real() * Matrix::Identity(order, order);
      space = eigenspace(shifted, rank_threshold, cl.multiplicity);
    } else {
      const CMatrix shifted = a.cast<Complex>() - cl.value * CMatrix::Identity(order, order);
      space = eigenspace(shifted, rank_threshold, cl.multiplicity);
    }
    cluster_vectors[c] = space.first;
    cl.geometric = static_cast<int>(space.first.cols());
    semisimple = semisimple && space.second == cl.multiplicity;
  }
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    EigenCluster& cl = clusters[c];
    if (cl.value.imag() >= 0.0) continue;
    std::size_t partner = clusters.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < clusters.size(); ++k) {
      if (clusters[k].value.imag() <= 0.0) continue;
      const double dist = std::abs(clusters[k].value - std::conj(cl.value));
      if (dist < best) {
        best = dist;
        partner = k;
      }
    }
    if (partner == clusters.size() || best > merge || clusters[partner].multiplicity != cl.multiplicity) {
      throw NumericalFailure("decompose: spectrum is not closed under conjugation");
    }
    cl.value = std::conj(clusters[partner].value);
    cl.geometric = clusters[partner].geometric;
    cluster_vectors[c] = cluster_vectors[partner].conjugate();
  }

  int columns = 0;
  for (const auto& cl : clusters) columns += cl.geometric;
  sd.vectors.resize(order, columns);
  CVector diagonal(columns);
  int col = 0;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (Eigen::Index k = 0; k < cluster_vectors[c].cols(); ++k) {
      sd.vectors.col(col) = cluster_vectors[c].col(k);
      diagonal(col) = clusters[c].value;
      sd.column_cluster.push_back(static_cast<int>(c));
      ++col;
    }
  }
  sd.eigenvalues = std::move(clusters);
  sd.semisimple = semisimple && columns == order;

  const CMatrix ac = a.cast<Complex>();
  const double frob = a.norm();
  sd.residual = (ac * sd.vectors - sd.vectors * diagonal.asDiagonal()).norm() / (frob > 0.0 ? frob : 1.0);
  sd.condition = sd.semisimple ? linalg::condition_number(sd.vectors) : std::numeric_limits<double>::infinity();
  if (sd.semisimple && sd.condition > tol.max_eigvec_condition) {
    throw IllConditionedEigenbasis("decompose: eigenvector basis condition number " + std::to_string(sd.condition) +
                                   " exceeds the cap");
  }
  sd.closed_plus = spectrum_closed(sd, Epsilon::plus, tol);
  sd.closed_minus = spectrum_closed(sd, Epsilon::minus, tol);
  return sd;
}

SpectralDecomposition decompose(const SystemMatrix& system, const Tolerances& tol) {
  return decompose(system.matrix(), tol);
}

bool spectrum_closed(const SpectralDecomposition& sd, Epsilon eps, const Tolerances& tol) {
  for (const auto& cl : sd.eigenvalues) {
    const int partner = sd.find(value(eps) / cl.value, tol.pairing);
    if (partner < 0) return false;
    if (sd.eigenvalues[static_cast<std::size_t>(partner)].multiplicity != cl.multiplicity) return false;
  }
  return true;
}

bool check_inverse_similarity(const SpectralDecomposition& sd, Epsilon eps, const Tolerances& tol) {
  if (!sd.semisimple) {
    throw NotSemisimple("similarity to eps*A^{-1} needs Jordan-structure matching for non-semisimple A");
  }
  return spectrum_closed(sd, eps, tol);
}

SigmaSet sigma_epsilon(const SpectralDecomposition& sd, Epsilon eps, const Tolerances& tol) {
  if (!check_inverse_similarity(sd, eps, tol)) {
    throw NotApplicable("matrix is not similar to eps*A^{-1} for eps = " + to_string(eps));
  }
  const Complex root = sqrt_of(eps);
  const auto near = [&](Complex a, Complex b) { return std::abs(a - b) <= tol.pairing * std::max(1.0, std::abs(b)); };

  SigmaSet out;
  std::vector<char> selected(sd.eigenvalues.size(), 0);
  std::vector<char> is_root(sd.eigenvalues.size(), 0);
  for (std::size_t c = 0; c < sd.eigenvalues.size(); ++c) {
    const EigenCluster& cl = sd.eigenvalues[c];
    if (near(cl.value, root)) {
      out.r += cl.multiplicity;
      is_root[c] = 1;
      continue;
    }
    if (near(cl.value, -root)) {
      out.s += cl.multiplicity;
      is_root[c] = 1;
      continue;
    }
    const double modulus = std::abs(cl.value);
    if (modulus < 1.0 - tol.unit_circle) {
      selected[c] = 1;
    } else if (std::abs(modulus - 1.0) <= tol.unit_circle) {
      const double side = eps == Epsilon::plus ? cl.value.imag() : cl.value.real();
      selected[c] = side > tol.pairing ? 1 : 0;
    }
  }
  for (std::size_t c = 0; c < sd.eigenvalues.size(); ++c) {
    if (is_root[c]) continue;
    const int partner = sd.find(value(eps) / sd.eigenvalues[c].value, tol.pairing);
    if (partner < 0 || static_cast<std::size_t>(partner) == c ||
        selected[c] == selected[static_cast<std::size_t>(partner)]) {
      throw PairingAmbiguity("cannot resolve the pairing partner of eigenvalue (" +
                             std::to_string(sd.eigenvalues[c].value.real()) + ", " +
                             std::to_string(sd.eigenvalues[c].value.imag()) + ")");
    }
    if (selected[c]) out.sigma.push_back(sd.eigenvalues[c]);
  }
  return out;
}

OrderedDiagonalization ordered_diagonalization(const SpectralDecomposition& sd, Epsilon eps, const Tolerances& tol) {
  const SigmaSet sigma = sigma_epsilon(sd, eps, tol);
  const int order = sd.order();

  std::vector<std::vector<int>> columns_of(sd.eigenvalues.size());
  for (std::size_t k = 0; k < sd.column_cluster.size(); ++k) {
    columns_of[static_cast<std::size_t>(sd.column_cluster[k])].push_back(static_cast<int>(k));
  }

  OrderedDiagonalization od;
  od.eps = eps;
  od.r = sigma.r;
  od.s = sigma.s;
  od.basis.resize(order, order);
  od.d.resize(order);
  int next = 0;
  const auto place = [&](int cluster, int column) {
    if (next >= order) throw PairingAmbiguity("ordered diagonalization: too many columns");
    od.basis.col(next) = sd.vectors.col(column);
    od.d(next) = sd.eigenvalues[static_cast<std::size_t>(cluster)].value;
    od.column_cluster.push_back(cluster);
    ++next;
  };

  for (const EigenCluster& cl : sigma.sigma) {
    const int self = sd.find(cl.value, tol.pairing);
    const int partner = sd.find(value(eps) / cl.value, tol.pairing);
    const auto& mine = columns_of[static_cast<std::size_t>(self)];
    const auto& theirs = columns_of[static_cast<std::size_t>(partner)];
    if (mine.size() != theirs.size()) throw PairingAmbiguity("paired eigenspaces differ in dimension");
    for (std::size_t k = 0; k < mine.size(); ++k) {
      place(self, mine[k]);
      place(partner, theirs[k]);
      ++od.j;
    }
  }
  const Complex root = sqrt_of(eps);
  for (const Complex target : {root, -root}) {
    for (std::size_t c = 0; c < sd.eigenvalues.size(); ++c) {
      if (std::abs(sd.eigenvalues[c].value - target) > tol.pairing) continue;
      for (int column : columns_of[c]) place(static_cast<int>(c), column);
    }
  }
  if (next != order || 2 * od.j + od.r + od.s != order) {
    throw PairingAmbiguity("ordered diagonalization does not cover the spectrum");
  }
  od.p = od.basis.fullPivLu().inverse();
  od.condition = linalg::condition_number(od.basis);
  return od;
}

}  // namespace quadrinv
