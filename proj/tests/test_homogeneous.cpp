#include <doctest.h>

#include <cmath>

#include "quadrinv/homogeneous.hpp"
#include "support.hpp"

using namespace quadrinv;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

}  // namespace

TEST_SUITE("homogeneous") {
  TEST_CASE("lift appends a unit coordinate") {
    CHECK(lift(vec({0, 0})).u == vec({0, 0, 1}));
    CHECK(lift(vec({2, 3})).u == vec({2, 3, 1}));
    CHECK(lift(vec({1, -1, 5})).u == vec({1, -1, 5, 1}));
  }

  TEST_CASE("project divides by the last coordinate") {
    CHECK(project(HomogeneousVector{vec({2, 4, 2})}) == vec({1, 2}));
    CHECK(project(HomogeneousVector{vec({0, 0, 1})}) == vec({0, 0}));
    CHECK_THROWS_AS(project(HomogeneousVector{vec({3, -6, 0})}), ForbiddenProjection);
    CHECK_FALSE(try_project(HomogeneousVector{vec({1e13, 0, 1})}).has_value());
  }

  TEST_CASE("system matrix validation") {
    CHECK_THROWS_AS(SystemMatrix(Matrix::Identity(2, 2)), ParseError);
    CHECK_THROWS_AS(SystemMatrix(Matrix::Ones(3, 4)), ParseError);
    Matrix bad = Matrix::Identity(3, 3);
    bad(1, 1) = std::nan("");
    CHECK_THROWS_AS(SystemMatrix{bad}, ParseError);
    Matrix singular(3, 3);
    singular << 1, 2, 3, 2, 4, 6, 0, 0, 1;
    CHECK_THROWS_AS(SystemMatrix{singular}, SingularMatrix);
  }

  TEST_CASE("block layout") {
    Matrix a1(2, 2);
    a1 << 1, 2, 3, 4;
    const SystemMatrix s = SystemMatrix::from_blocks(a1, vec({5, 6}), vec({7, 8}), 10);
    Matrix expected(3, 3);
    expected << 1, 2, 7, 3, 4, 8, 5, 6, 10;
    CHECK(s.matrix() == expected);
    CHECK(s.a1() == a1);
    CHECK(s.b() == vec({5, 6}));
    CHECK(s.c() == vec({7, 8}));
    CHECK(s.d() == 10);
  }

  TEST_CASE("normalize") {
    const SystemMatrix twice(2.0 * Matrix::Identity(3, 3));
    CHECK((normalize(twice).matrix() - Matrix::Identity(3, 3)).norm() < 1e-15);

    const SystemMatrix d4(Vector(vec({4, 1, 1})).asDiagonal());
    const Matrix expected = Matrix(Vector(vec({4, 1, 1})).asDiagonal()) * std::pow(4.0, -1.0 / 3.0);
    CHECK((normalize(d4).matrix() - expected).norm() < 1e-15);

    const SystemMatrix unchanged(Vector(vec({2, 0.5, 1})).asDiagonal());
    CHECK((normalize(unchanged).matrix() - unchanged.matrix()).norm() < 1e-15);
  }

  TEST_CASE("evaluate the rational map") {
    Matrix swap(3, 3);
    swap << 0, 0, 1, 0, 1, 0, 1, 0, 0;
    const Vector y = evaluate_map(SystemMatrix(swap), vec({2, 3}));
    CHECK(y(0) == doctest::Approx(0.5));
    CHECK(y(1) == doctest::Approx(1.5));

    const SystemMatrix identity(Matrix::Identity(3, 3));
    CHECK(evaluate_map(identity, vec({-4, 7})) == vec({-4, 7}));

    // The denominator of the swap map is x_1.
    CHECK_THROWS_AS(evaluate_map(SystemMatrix(swap), vec({0, 5})), ForbiddenPoint);
    CHECK_THROWS_AS(evaluate_map(identity, vec({1, 2, 3})), PreconditionError);
  }

  TEST_CASE("JSON forms") {
    const SystemMatrix s = system_from_json(io::json::parse(R"({"n": 2, "A": [[2,0,0],[0,1,0],[0,0,0.5]]})"));
    CHECK(s.n() == 2);
    CHECK(s.matrix()(2, 2) == 0.5);
    const SystemMatrix b = system_from_json(io::json::parse(R"({"A1": [[1,0],[0,1]], "B": [0,1], "C": [1,0], "d": 2})"));
    CHECK(b.matrix()(2, 1) == 1);
    CHECK(b.matrix()(0, 2) == 1);
    CHECK(system_from_json(system_to_json(s)).matrix() == s.matrix());
    CHECK_THROWS_AS(system_from_json(io::json::parse(R"({"n": 3, "A": [[1,0,0],[0,1,0],[0,0,1]]})")), ParseError);
    CHECK_THROWS_AS(system_from_json(io::json::parse(R"({"A": [[1,0,0],[0,1],[0,0,1]]})")), ParseError);
    CHECK_THROWS_AS(system_from_json(io::json::parse(R"({"A1": [[1,0],[0,1]]})")), ParseError);
    CHECK_THROWS_AS(system_from_json(io::json::parse(R"({"A": [[1,0,0],[0,0,0],[0,0,1]]})")), SingularMatrix);
  }

  TEST_CASE("lift and project identities on random samples") {
    testing::Gen gen(11);
    for (int t = 0; t < 1000; ++t) {
      const int n = gen.integer(2, 6);
      const Vector x = gen.vector(n, 10.0);
      // q(l(x)) = x
      CHECK((project(lift(x)) - x).norm() <= 1e-12 * (1.0 + x.norm()));
      // l(q(a)) = a / a_{n+1}
      Vector a = gen.vector(n + 1);
      a(n) = (gen.uniform(0, 1) < 0.5 ? -1 : 1) * gen.uniform(0.1, 2.0);
      CHECK((lift(project(HomogeneousVector{a})).u - a / a(n)).norm() <= 1e-12 * a.norm() / std::abs(a(n)));
      // q(a) = q(c a) for c != 0
      const double c = gen.uniform(0.5, 3.0) * (gen.uniform(0, 1) < 0.5 ? -1 : 1);
      const Vector qa = project(HomogeneousVector{a});
      CHECK((project(HomogeneousVector{Vector(c * a)}) - qa).norm() <= 1e-12 * (1.0 + qa.norm()));
      // q(A l(q(a))) = q(A a)
      const Matrix m = gen.well_conditioned(n + 1);
      const Vector left = project(HomogeneousVector{Vector(m * lift(qa).u)});
      const Vector right = project(HomogeneousVector{Vector(m * a)});
      const double scale = (m * a).lpNorm<Eigen::Infinity>() / std::abs((m * a)(n));
      if (scale < 1e4) CHECK((left - right).norm() <= 1e-12 * scale * (1.0 + right.norm()));
    }
  }
}
