#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "quadrinv/homogeneous.hpp"
#include "quadrinv/io.hpp"
#include "quadrinv/types.hpp"

namespace quadrinv::genlab {

/// Real eigenvalue lambda together with its partner eps/lambda.
struct RealPair {
  double lambda = 2.0;
};

/// e^{+-i theta}. For eps = -1 the partners e^{+-i(pi - theta)} are added,
/// so the block has size 4.
struct UnitComplexPair {
  double theta = 1.0;
};

/// {lambda, conj lambda, eps/lambda, eps/conj lambda}, |lambda| != 1.
struct ComplexQuadruple {
  Complex lambda{0.5, 0.5};
};

/// `count` copies of sqrt(eps): 1 for eps = +1, i for eps = -1.
struct PlusRoot {
  int count = 1;
};

/// `count` copies of -sqrt(eps).
struct MinusRoot {
  int count = 1;
};

using Block = std::variant<RealPair, UnitComplexPair, ComplexQuadruple, PlusRoot, MinusRoot>;

/// Size of a block in the matrix of order n+1.
int block_size(const Block& block, Epsilon eps);

struct InstanceSpec {
  int n = 2;
  Epsilon eps = Epsilon::plus;
  std::vector<Block> blocks;
  double condition_cap = 1e3;  // <= 1 means no conjugation
  std::uint64_t seed = 0;
};

struct SigmaEntry {
  Complex value;
  int multiplicity = 0;
};

/// Ground truth derived from the block list alone.
struct GroundTruth {
  std::vector<Complex> spectrum;  // with repetitions
  std::vector<SigmaEntry> sigma;
  int r = 0;
  int s = 0;
  std::size_t dim = 0;  // dim C_eps(A)
};

struct Instance {
  InstanceSpec spec;
  Matrix a;  // order n+1, |det| = 1
  Matrix core;
  Matrix transform;
  double transform_condition = 1.0;
  GroundTruth truth;

  /// The matrix as a SystemMatrix; requires n >= 2.
  SystemMatrix system(const Tolerances& tol = {}) const;
};

/// Eigenvalue multiset and expected dimension from the spec:
/// (r^2 + r + s^2 + s)/2 + sum over sigma of m^2.
GroundTruth ground_truth(const InstanceSpec& spec);

/// Block-diagonal real core conjugated by a Gaussian matrix with condition
/// number at most the cap (resampled), then scaled to |det| = 1.
/// Throws SpecSizeMismatch when the blocks do not fill order n+1, and
/// PreconditionError on invalid block parameters.
Instance generate(const InstanceSpec& spec);

/// A random valid spec of the given order. Distinct eigenvalues stay at least
/// 0.05 apart and away from +-1 and +-i unless they are roots of eps; some
/// blocks are repeated to create multiplicities. For eps = -1 the order must
/// be even.
InstanceSpec random_instance_spec(int order, Epsilon eps, std::uint64_t seed, double condition_cap = 1e3);

/// A spec whose every eigenvalue satisfies lambda^2 = eps.
InstanceSpec involutive_spec(int order, Epsilon eps, std::uint64_t seed, double condition_cap = 1e3);

InstanceSpec spec_from_json(const io::json& doc);
io::json spec_to_json(const InstanceSpec& spec);
/// {"n", "A"} as accepted by system_from_json, plus "epsilon" and "ground_truth".
io::json instance_to_json(const Instance& instance);

}  // namespace quadrinv::genlab
