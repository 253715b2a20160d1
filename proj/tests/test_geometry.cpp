#include <doctest.h>

#include <cmath>
#include <numbers>

#include "quadrinv/genlab.hpp"
#include "quadrinv/geometry.hpp"
#include "quadrinv/spectral.hpp"
#include "support.hpp"

using namespace quadrinv;

namespace {

Matrix diag(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v.asDiagonal();
}

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

Matrix rotation_plus_one(double theta) {
  Matrix a = Matrix::Identity(3, 3);
  a.topLeftCorner(2, 2) << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return a;
}

Matrix antidiag3() { return (Matrix(3, 3) << 0, 0, 1, 0, 1, 0, 1, 0, 0).finished(); }

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("signature") {
    CHECK(signature_of(diag({1, 1, -1})) == Signature{2, 1, 0});
    CHECK(signature_of(diag({1, 0, -1})) == Signature{1, 1, 1});
    CHECK(signature_of(antidiag3()) == Signature{2, 1, 0});
    CHECK(signature_of(Matrix::Zero(3, 3)) == Signature{0, 0, 3});
    const Quadric q(diag({1, 1e-12, -1}));
    CHECK(q.degenerate());
    CHECK(q.indefinite());
    CHECK(q.rank() == 2);
  }

  TEST_CASE("quadric stores the symmetric part") {
    const Quadric q((Matrix(3, 3) << 1, 2, 0, 0, 1, 0, 0, 0, -1).finished());
    CHECK(q.matrix()(0, 1) == 1.0);
    CHECK(q.matrix()(1, 0) == 1.0);
  }

  TEST_CASE("membership") {
    const Quadric circle(diag({1, 1, -1}));
    CHECK(quadric_contains(circle, vec({1, 0})));
    CHECK_FALSE(quadric_contains(circle, vec({2, 0})));
    CHECK(circle.value(vec({2, 0})) == 3.0);
    CHECK(quadric_contains(Quadric(antidiag3()), vec({0, 0})));
  }

  TEST_CASE("verify invariance") {
    const SystemMatrix rot(rotation_plus_one(0.7));
    const InvarianceReport circle = verify_invariance(Quadric(diag({1, 1, -1})), rot);
    REQUIRE(circle.mu.has_value());
    CHECK(*circle.mu == doctest::Approx(1.0));
    CHECK(circle.geometric_equivalence());

    const SystemMatrix d(diag({2, 1, 0.5}));
    const InvarianceReport anti = verify_invariance(Quadric(antidiag3()), d);
    REQUIRE(anti.mu.has_value());
    CHECK(*anti.mu == doctest::Approx(1.0));

    const InvarianceReport identity = verify_invariance(Quadric(Matrix::Identity(3, 3)), d);
    CHECK_FALSE(identity.mu.has_value());
    CHECK(identity.definite);
  }

  TEST_CASE("fixed points") {
    const SystemMatrix d(diag({2, 1, 0.5}));
    const auto points = fixed_points(d, decompose(d));
    bool origin = false;
    for (const FixedPoint& p : points) {
      if (p.x.norm() < 1e-14 && std::abs(p.lambda - 0.5) < 1e-14) origin = true;
    }
    CHECK(origin);
    CHECK(points.size() == 1);

    const SystemMatrix rot(rotation_plus_one(0.7));
    const auto rp = fixed_points(rot, decompose(rot));
    REQUIRE(rp.size() == 1);
    CHECK(rp[0].x.norm() < 1e-14);
    CHECK(rp[0].lambda == doctest::Approx(1.0));

    const SystemMatrix id(Matrix::Identity(3, 3));
    const auto ip = fixed_points(id, decompose(id));
    REQUIRE(ip.size() == 1);
    CHECK(ip[0].x.norm() < 1e-14);
  }

  TEST_CASE("variety from a subspace") {
    Matrix span(3, 2);
    span << 1, 0, 0, 0, 0, 1;  // e1, e3
    const auto axis = variety_from_subspace(span);
    REQUIRE(axis.has_value());
    CHECK(axis->base.norm() < 1e-15);
    REQUIRE(axis->dim() == 1);
    CHECK(std::abs(axis->directions(0, 0)) == doctest::Approx(1.0));
    CHECK(axis->contains(vec({5, 0})));
    CHECK_FALSE(axis->contains(vec({5, 1})));

    span << 1, 0, 0, 1, 0, 0;  // e1, e2 lie in U_0
    CHECK_FALSE(variety_from_subspace(span).has_value());

    // The homogeneous basis has pr in {0, 1}.
    testing::Gen gen(3);
    for (int t = 0; t < 100; ++t) {
      const Matrix u = gen.matrix(5, gen.integer(1, 4));
      const auto v = variety_from_subspace(u);
      REQUIRE(v.has_value());
      const Matrix h = v->homogeneous_basis();
      CHECK(std::abs(h(4, 0) - 1.0) < 1e-15);
      for (Eigen::Index k = 1; k < h.cols(); ++k) CHECK(h(4, k) == 0.0);
      // Every column of U projects into the variety.
      for (Eigen::Index k = 0; k < u.cols(); ++k) {
        CHECK(v->distance(project(HomogeneousVector{u.col(k)})) <= 1e-9 * (1.0 + u.col(k).norm() / std::abs(u(4, k))));
      }
    }
  }

  TEST_CASE("invariant affine varieties") {
    const SystemMatrix d(diag({2, 1, 0.5}));
    const auto list = invariant_affine_varieties(d, decompose(d));
    bool x_axis = false;
    bool origin = false;
    for (const auto& iv : list) {
      const auto& v = iv.variety;
      if (v.dim() == 1 && v.base.norm() < 1e-14 && std::abs(std::abs(v.directions(0, 0)) - 1.0) < 1e-14) x_axis = true;
      if (v.dim() == 0 && v.base.norm() < 1e-14) origin = true;
      // Each variety is F-invariant: random points map back into it.
      testing::Gen gen(1);
      for (int t = 0; t < 5; ++t) {
        const Vector x = v.point(gen.vector(v.dim()));
        if (auto y = try_evaluate_map(d, x)) CHECK(v.contains(*y));
      }
    }
    CHECK(x_axis);
    CHECK(origin);

    const SystemMatrix rot(rotation_plus_one(0.7));
    const auto rlist = invariant_affine_varieties(rot, decompose(rot));
    REQUIRE(rlist.size() == 1);
    CHECK(rlist[0].variety.dim() == 0);

    Matrix jordan(3, 3);
    jordan << 1, 0, 0, 1, 1, 0, 0, 0, 1;
    CHECK_THROWS_AS(invariant_affine_varieties(SystemMatrix(jordan), decompose(jordan)), NotSemisimple);
  }

  TEST_CASE("invariant line for a non-unit complex pair") {
    const double pi = std::numbers::pi;
    genlab::InstanceSpec spec;
    spec.n = 4;
    spec.blocks = {genlab::ComplexQuadruple{std::polar(0.5, pi / 4)}, genlab::PlusRoot{1}};
    spec.seed = 4;
    spec.condition_cap = 50;
    const genlab::Instance inst = genlab::generate(spec);
    const SystemMatrix system = inst.system();
    const SpectralDecomposition sd = decompose(system);
    int lines = 0;
    for (std::size_t c = 0; c < sd.eigenvalues.size(); ++c) {
      const Complex z = sd.eigenvalues[c].value;
      if (z.imag() <= 0) continue;
      CVector v;
      for (std::size_t k = 0; k < sd.column_cluster.size(); ++k) {
        if (sd.column_cluster[k] == static_cast<int>(c)) v = sd.vectors.col(static_cast<Eigen::Index>(k));
      }
      const auto line = invariant_line_for_pair(system, z, v);
      REQUIRE(std::holds_alternative<AffineVariety>(line));
      const auto& l = std::get<AffineVariety>(line);
      CHECK(l.dim() == 1);
      testing::Gen gen(c);
      for (int t = 0; t < 5; ++t) {
        const Vector x = l.point(gen.vector(1));
        if (auto y = try_evaluate_map(system, x)) CHECK(l.contains(*y, 1e-7));
      }
      ++lines;
    }
    CHECK(lines == 2);

    const SystemMatrix rot(rotation_plus_one(0.7));
    const SpectralDecomposition rsd = decompose(rot);
    for (std::size_t c = 0; c < rsd.eigenvalues.size(); ++c) {
      if (rsd.eigenvalues[c].value.imag() <= 0) continue;
      const CVector v = rsd.vectors.col(static_cast<Eigen::Index>(c));
      CHECK_THROWS_AS(invariant_line_for_pair(rot, rsd.eigenvalues[c].value, v), NotApplicable);
    }
  }

  TEST_CASE("line contained in U_0") {
    // A pair acting only on the first two coordinates: its plane lies in U_0.
    Matrix a = Matrix::Identity(3, 3);
    a.topLeftCorner(2, 2) << 1.0, -1.0, 1.0, 1.0;
    const SystemMatrix system(a);
    const CVector v = (CVector(3) << Complex(1, 0), Complex(0, -1), Complex(0, 0)).finished() / std::sqrt(2.0);
    const auto line = invariant_line_for_pair(system, Complex(1, 1), v);
    CHECK(std::holds_alternative<InU0>(line));
  }

  TEST_CASE("quadric JSON round trip") {
    const Quadric q(diag({1, 1, -1}));
    const Quadric back = quadric_from_json(quadric_to_json(q));
    CHECK(back.matrix() == q.matrix());
    CHECK_THROWS_AS(quadric_from_json(io::json::parse(R"({"M": [[1, 2], [0, 1]]})")), ParseError);
  }
}
