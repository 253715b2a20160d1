#include "quadrinv/genlab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "quadrinv/linalg.hpp"

namespace quadrinv::genlab {

namespace {

constexpr double kSeparation = 0.05;
constexpr double kSame = 1e-9;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Matrix rotation(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

// Real 2x2 representation of multiplication by z: eigenvalues z, conj z.
Matrix real_form(Complex z) {
  Matrix r(2, 2);
  r << z.real(), -z.imag(), z.imag(), z.real();
  return r;
}

int total_roots(const InstanceSpec& spec, bool plus) {
  int total = 0;
  for (const Block& b : spec.blocks) {
    if (plus) {
      if (const auto* p = std::get_if<PlusRoot>(&b)) total += p->count;
    } else {
      if (const auto* m = std::get_if<MinusRoot>(&b)) total += m->count;
    }
  }
  return total;
}

void validate(const InstanceSpec& spec) {
  if (spec.n < 1) throw PreconditionError("instance spec: n must be at least 1");
  int size = 0;
  for (const Block& b : spec.blocks) {
    std::visit(Overloaded{
                   [](const RealPair& p) {
                     if (!std::isfinite(p.lambda) || p.lambda == 0.0) {
                       throw PreconditionError("RealPair needs a finite non-zero lambda");
                     }
                   },
                   [](const UnitComplexPair& p) {
                     if (!std::isfinite(p.theta) || std::abs(std::sin(p.theta)) < 1e-12) {
                       throw PreconditionError("UnitComplexPair needs theta off the real axis");
                     }
                   },
                   [](const ComplexQuadruple& p) {
                     if (!std::isfinite(std::abs(p.lambda)) || p.lambda.imag() == 0.0) {
                       throw PreconditionError("ComplexQuadruple needs a non-real lambda");
                     }
                     if (std::abs(std::abs(p.lambda) - 1.0) < 1e-12) {
                       throw PreconditionError("ComplexQuadruple needs |lambda| != 1");
                     }
                   },
                   [](const PlusRoot& p) {
                     if (p.count < 0) throw PreconditionError("PlusRoot count must be non-negative");
                   },
                   [](const MinusRoot& p) {
                     if (p.count < 0) throw PreconditionError("MinusRoot count must be non-negative");
                   },
               },
               b);
    size += block_size(b, spec.eps);
  }
  if (size != spec.n + 1) {
    throw SpecSizeMismatch("blocks fill order " + std::to_string(size) + " but n+1 = " + std::to_string(spec.n + 1));
  }
  if (spec.eps == Epsilon::minus && total_roots(spec, true) != total_roots(spec, false)) {
    throw PreconditionError("for eps = -1 the PlusRoot and MinusRoot counts must agree (i and -i pair up)");
  }
}

std::vector<Complex> block_spectrum(const Block& block, Epsilon eps) {
  const double e = value(eps);
  return std::visit(Overloaded{
                        [&](const RealPair& p) -> std::vector<Complex> { return {p.lambda, e / p.lambda}; },
                        [&](const UnitComplexPair& p) -> std::vector<Complex> {
                          const Complex z = std::polar(1.0, p.theta);
                          if (eps == Epsilon::plus) return {z, std::conj(z)};
                          const Complex w = -1.0 / z;
                          return {z, std::conj(z), w, std::conj(w)};
                        },
                        [&](const ComplexQuadruple& p) -> std::vector<Complex> {
                          const Complex w = e / p.lambda;
                          return {p.lambda, std::conj(p.lambda), w, std::conj(w)};
                        },
                        [&](const PlusRoot& p) -> std::vector<Complex> {
                          return std::vector<Complex>(static_cast<std::size_t>(p.count), sqrt_of(eps));
                        },
                        [&](const MinusRoot& p) -> std::vector<Complex> {
                          return std::vector<Complex>(static_cast<std::size_t>(p.count), -sqrt_of(eps));
                        },
                    },
                    block);
}

bool same(Complex a, Complex b) { return std::abs(a - b) <= kSame * std::max(1.0, std::abs(a)); }

}  // namespace

int block_size(const Block& block, Epsilon eps) {
  return std::visit(Overloaded{
                        [](const RealPair&) { return 2; },
                        [&](const UnitComplexPair&) { return eps == Epsilon::plus ? 2 : 4; },
                        [](const ComplexQuadruple&) { return 4; },
                        [](const PlusRoot& p) { return p.count; },
                        [](const MinusRoot& p) { return p.count; },
                    },
                    block);
}

GroundTruth ground_truth(const InstanceSpec& spec) {
  validate(spec);
  GroundTruth truth;
  for (const Block& b : spec.blocks) {
    for (Complex z : block_spectrum(b, spec.eps)) truth.spectrum.push_back(z);
  }
  std::vector<SigmaEntry> groups;
  for (Complex z : truth.spectrum) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const SigmaEntry& g) { return same(g.value, z); });
    if (it == groups.end()) {
      groups.push_back({z, 1});
    } else {
      ++it->multiplicity;
    }
  }
  const Complex root = sqrt_of(spec.eps);
  for (const SigmaEntry& g : groups) {
    const double modulus = std::abs(g.value);
    if (same(g.value, root)) {
      truth.r = g.multiplicity;
      continue;
    }
    if (same(g.value, -root)) {
      truth.s = g.multiplicity;
      continue;
    }
    bool selected = modulus < 1.0 - kSame;
    if (std::abs(modulus - 1.0) <= kSame) {
      selected = spec.eps == Epsilon::plus ? g.value.imag() > kSame : g.value.real() > kSame;
    }
    if (selected) truth.sigma.push_back(g);
  }
  const auto r = static_cast<std::size_t>(truth.r);
  const auto s = static_cast<std::size_t>(truth.s);
  truth.dim = (r * r + r + s * s + s) / 2;
  for (const SigmaEntry& g : truth.sigma) {
    const auto m = static_cast<std::size_t>(g.multiplicity);
    truth.dim += m * m;
  }
  return truth;
}

SystemMatrix Instance::system(const Tolerances& tol) const { return SystemMatrix(a, tol); }

Instance generate(const InstanceSpec& spec) {
  Instance inst;
  inst.spec = spec;
  inst.truth = ground_truth(spec);
  const int order = spec.n + 1;
  const double e = value(spec.eps);

  inst.core = Matrix::Zero(order, order);
  int at = 0;
  const auto put = [&](const Matrix& block) {
    inst.core.block(at, at, block.rows(), block.cols()) = block;
    at += static_cast<int>(block.rows());
  };
  for (const Block& b : spec.blocks) {
    std::visit(Overloaded{
                   [&](const RealPair& p) { put(Vector((Vector(2) << p.lambda, e / p.lambda).finished()).asDiagonal()); },
                   [&](const UnitComplexPair& p) {
                     put(rotation(p.theta));
                     if (spec.eps == Epsilon::minus) put(rotation(std::numbers::pi - p.theta));
                   },
                   [&](const ComplexQuadruple& p) {
                     put(real_form(p.lambda));
                     put(real_form(e / p.lambda));
                   },
                   [&](const PlusRoot& p) {
                     if (spec.eps == Epsilon::plus) {
                       put(Matrix::Identity(p.count, p.count));
                     } else {
                       // i and -i come in conjugate pairs: one quarter-turn per PlusRoot.
                       for (int k = 0; k < p.count; ++k) put((Matrix(2, 2) << 0.0, -1.0, 1.0, 0.0).finished());
                     }
                   },
                   [&](const MinusRoot& p) {
                     if (spec.eps == Epsilon::plus) put(-Matrix::Identity(p.count, p.count));
                   },
               },
               b);
  }

  // Extended precision keeps the stored matrix within one rounding of the
  // exact similarity, so its eigenvalues pair up far better than u * cond(T).
  using Wide = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  Wide wide = inst.core.cast<long double>();
  if (spec.condition_cap <= 1.0) {
    inst.transform = Matrix::Identity(order, order);
  } else {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    bool found = false;
    for (int attempt = 0; attempt < 10000 && !found; ++attempt) {
      Matrix t(order, order);
      for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = gauss(rng);
      const double ratio = linalg::inverse_condition(t);
      if (ratio > 0.0 && 1.0 / ratio <= spec.condition_cap) {
        inst.transform = t;
        inst.transform_condition = 1.0 / ratio;
        found = true;
      }
    }
    if (!found) throw NumericalFailure("no similarity transform within the condition cap");
    const Wide t = inst.transform.cast<long double>();
    wide = t * wide * t.fullPivLu().inverse();
  }

  const long double det = std::abs(inst.core.cast<long double>().determinant());
  if (std::abs(det - 1.0L) > 1e-14L) wide *= std::pow(det, -1.0L / order);
  inst.a = wide.cast<double>();
  return inst;
}

namespace {

// Draws a block of size at most `room` whose new eigenvalues keep the
// separation rules; nullopt when the draw is rejected.
std::optional<Block> draw_block(std::mt19937_64& rng, Epsilon eps, int room, const std::vector<Complex>& taken) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto between = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  const double pi = std::numbers::pi;

  std::vector<int> kinds;  // 0 real pair, 1 unit pair, 2 quadruple, 3 roots
  if (room >= 2) kinds.push_back(0);
  if (room >= (eps == Epsilon::plus ? 2 : 4)) kinds.push_back(1);
  if (room >= 4) kinds.push_back(2);
  if (room >= (eps == Epsilon::plus ? 1 : 2)) kinds.push_back(3);
  if (kinds.empty()) return std::nullopt;
  const int kind = kinds[static_cast<std::size_t>(unit(rng) * static_cast<double>(kinds.size())) % kinds.size()];

  Block block;
  switch (kind) {
    case 0: {
      const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
      block = RealPair{sign * between(0.25, 0.85)};
      break;
    }
    case 1:
      block = UnitComplexPair{eps == Epsilon::plus ? between(0.25, pi - 0.25) : between(0.25, pi / 2 - 0.25)};
      break;
    case 2:
      block = ComplexQuadruple{std::polar(between(0.35, 0.85), between(0.25, pi - 0.25))};
      break;
    default:
      if (unit(rng) < 0.5) return Block{PlusRoot{1}};
      return Block{MinusRoot{1}};
  }

  const std::vector<Complex> fresh = block_spectrum(block, eps);
  std::vector<Complex> avoid = taken;
  for (Complex z : {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)}) avoid.push_back(z);
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    for (Complex z : avoid) {
      if (std::abs(fresh[i] - z) < kSeparation) return std::nullopt;
    }
    for (std::size_t k = 0; k < i; ++k) {
      if (std::abs(fresh[i] - fresh[k]) < kSeparation) return std::nullopt;
    }
  }
  return block;
}

}  // namespace

InstanceSpec random_instance_spec(int order, Epsilon eps, std::uint64_t seed, double condition_cap) {
  if (order < 2) throw PreconditionError("random_instance_spec: order must be at least 2");
  if (eps == Epsilon::minus && order % 2 != 0) {
    throw PreconditionError("random_instance_spec: eps = -1 needs an even order");
  }
  InstanceSpec spec;
  spec.n = order - 1;
  spec.eps = eps;
  spec.condition_cap = condition_cap;
  spec.seed = seed;

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Complex> taken;
  int room = order;
  for (int attempt = 0; room > 0 && attempt < 10000; ++attempt) {
    std::vector<Block> candidates;
    if (!spec.blocks.empty() && unit(rng) < 0.25) {
      const Block& previous = spec.blocks[static_cast<std::size_t>(unit(rng) * static_cast<double>(spec.blocks.size())) %
                                          spec.blocks.size()];
      candidates.push_back(previous);
      if (eps == Epsilon::minus && std::holds_alternative<PlusRoot>(previous)) candidates.push_back(MinusRoot{1});
      if (eps == Epsilon::minus && std::holds_alternative<MinusRoot>(previous)) candidates.push_back(PlusRoot{1});
    } else if (auto block = draw_block(rng, eps, room, taken)) {
      candidates.push_back(*block);
      if (eps == Epsilon::minus && std::holds_alternative<PlusRoot>(*block)) candidates.push_back(MinusRoot{1});
      if (eps == Epsilon::minus && std::holds_alternative<MinusRoot>(*block)) candidates.push_back(PlusRoot{1});
    }
    int size = 0;
    for (const Block& b : candidates) size += block_size(b, eps);
    if (candidates.empty() || size > room) continue;
    for (const Block& b : candidates) {
      for (Complex z : block_spectrum(b, eps)) {
        if (std::none_of(taken.begin(), taken.end(), [&](Complex t) { return same(t, z); })) taken.push_back(z);
      }
      spec.blocks.push_back(b);
    }
    room -= size;
  }
  if (room != 0) throw NumericalFailure("random_instance_spec: could not fill the requested order");
  return spec;
}

InstanceSpec involutive_spec(int order, Epsilon eps, std::uint64_t seed, double condition_cap) {
  if (order < 2) throw PreconditionError("involutive_spec: order must be at least 2");
  if (eps == Epsilon::minus && order % 2 != 0) throw PreconditionError("involutive_spec: eps = -1 needs an even order");
  InstanceSpec spec;
  spec.n = order - 1;
  spec.eps = eps;
  spec.condition_cap = condition_cap;
  spec.seed = seed;
  if (eps == Epsilon::minus) {
    spec.blocks = {PlusRoot{order / 2}, MinusRoot{order / 2}};
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> split(1, order - 1);
    const int plus = split(rng);
    spec.blocks = {PlusRoot{plus}, MinusRoot{order - plus}};
  }
  return spec;
}

InstanceSpec spec_from_json(const io::json& doc) {
  try {
    if (!doc.is_object()) throw ParseError("instance spec must be a JSON object");
    InstanceSpec spec;
    spec.n = doc.at("n").get<int>();
    const int e = doc.value("epsilon", 1);
    if (e != 1 && e != -1) throw ParseError("epsilon must be 1 or -1");
    spec.eps = e == 1 ? Epsilon::plus : Epsilon::minus;
    spec.condition_cap = doc.value("condition_cap", 1e3);
    spec.seed = doc.value("seed", std::uint64_t{0});
    for (const auto& b : doc.at("blocks")) {
      const std::string type = b.at("type").get<std::string>();
      if (type == "RealPair") {
        spec.blocks.push_back(RealPair{b.at("lambda").get<double>()});
      } else if (type == "UnitComplexPair") {
        spec.blocks.push_back(UnitComplexPair{b.at("theta").get<double>()});
      } else if (type == "ComplexQuadruple") {
        const auto& z = b.at("lambda");
        if (!z.is_array() || z.size() != 2) throw ParseError("ComplexQuadruple lambda must be [re, im]");
        spec.blocks.push_back(ComplexQuadruple{Complex(z[0].get<double>(), z[1].get<double>())});
      } else if (type == "PlusRoot") {
        spec.blocks.push_back(PlusRoot{b.value("count", 1)});
      } else if (type == "MinusRoot") {
        spec.blocks.push_back(MinusRoot{b.value("count", 1)});
      } else {
        throw ParseError("unknown block type: " + type);
      }
    }
    return spec;
  } catch (const io::json::exception& e) {
    throw ParseError(std::string("instance spec: ") + e.what());
  }
}

io::json spec_to_json(const InstanceSpec& spec) {
  io::json out;
  out["n"] = spec.n;
  out["epsilon"] = static_cast<int>(spec.eps);
  io::json blocks = io::json::array();
  for (const Block& b : spec.blocks) {
    std::visit(Overloaded{
                   [&](const RealPair& p) { blocks.push_back({{"type", "RealPair"}, {"lambda", p.lambda}}); },
                   [&](const UnitComplexPair& p) {
                     blocks.push_back({{"type", "UnitComplexPair"}, {"theta", p.theta}});
                   },
                   [&](const ComplexQuadruple& p) {
                     blocks.push_back({{"type", "ComplexQuadruple"}, {"lambda", io::to_json(p.lambda)}});
                   },
                   [&](const PlusRoot& p) { blocks.push_back({{"type", "PlusRoot"}, {"count", p.count}}); },
                   [&](const MinusRoot& p) { blocks.push_back({{"type", "MinusRoot"}, {"count", p.count}}); },
               },
               b);
  }
  out["blocks"] = std::move(blocks);
  out["condition_cap"] = spec.condition_cap;
  out["seed"] = spec.seed;
  return out;
}

io::json instance_to_json(const Instance& instance) {
  io::json out;
  out["n"] = instance.spec.n;
  out["A"] = io::to_json(instance.a);
  out["epsilon"] = static_cast<int>(instance.spec.eps);
  io::json truth;
  io::json spectrum = io::json::array();
  for (Complex z : instance.truth.spectrum) spectrum.push_back(io::to_json(z));
  truth["spectrum"] = std::move(spectrum);
  io::json sigma = io::json::array();
  for (const SigmaEntry& g : instance.truth.sigma) {
    sigma.push_back({{"value", io::to_json(g.value)}, {"multiplicity", g.multiplicity}});
  }
  truth["sigma"] = std::move(sigma);
  truth["r"] = instance.truth.r;
  truth["s"] = instance.truth.s;
  truth["dim"] = instance.truth.dim;
  out["ground_truth"] = std::move(truth);
  out["transform_condition"] = instance.transform_condition;
  out["spec"] = spec_to_json(instance.spec);
  return out;
}

}  // namespace quadrinv::genlab
