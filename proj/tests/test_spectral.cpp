#include <doctest.h>

#include <cmath>
#include <numbers>

#include "quadrinv/genlab.hpp"
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

Matrix rotation(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

bool near(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("identity: one cluster of multiplicity three") {
    const SpectralDecomposition sd = decompose(Matrix::Identity(3, 3));
    REQUIRE(sd.eigenvalues.size() == 1);
    CHECK(near(sd.eigenvalues[0].value, 1.0));
    CHECK(sd.eigenvalues[0].multiplicity == 3);
    CHECK(sd.eigenvalues[0].geometric == 3);
    CHECK(sd.semisimple);
  }

  TEST_CASE("Jordan block is detected") {
    Matrix a(3, 3);
    a << 1, 0, 0, 1, 1, 0, 0, 0, 1;
    const SpectralDecomposition sd = decompose(a);
    REQUIRE(sd.eigenvalues.size() == 1);
    CHECK(sd.eigenvalues[0].multiplicity == 3);
    CHECK(sd.eigenvalues[0].geometric == 2);
    CHECK_FALSE(sd.semisimple);
    CHECK_THROWS_AS(check_inverse_similarity(sd, Epsilon::plus), NotSemisimple);
  }

  TEST_CASE("defective 4x4 with eigenvalues +-i") {
    Matrix a(4, 4);
    a << 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, 1, 0, 1, -1, 0;
    const SpectralDecomposition sd = decompose(a);
    REQUIRE(sd.eigenvalues.size() == 2);
    CHECK(sd.eigenvalues[0].multiplicity == 2);
    CHECK(sd.eigenvalues[0].geometric == 1);
    CHECK_FALSE(sd.semisimple);
  }

  TEST_CASE("diagonal matrix sorted by modulus") {
    const SpectralDecomposition sd = decompose(diag({2, 0.5, 1}));
    REQUIRE(sd.eigenvalues.size() == 3);
    CHECK(near(sd.eigenvalues[0].value, 0.5));
    CHECK(near(sd.eigenvalues[1].value, 1.0));
    CHECK(near(sd.eigenvalues[2].value, 2.0));
    CHECK(sd.semisimple);
    CHECK(sd.residual < 1e-14);
  }

  TEST_CASE("inverse similarity") {
    CHECK(check_inverse_similarity(decompose(diag({2, 0.5, 1})), Epsilon::plus));
    CHECK_FALSE(check_inverse_similarity(decompose(diag({2, 3, 1})), Epsilon::plus));
    const SpectralDecomposition quarter = decompose(rotation(std::numbers::pi / 2));
    CHECK(check_inverse_similarity(quarter, Epsilon::minus));
    CHECK(check_inverse_similarity(quarter, Epsilon::plus));
    CHECK_FALSE(check_inverse_similarity(decompose(diag({2, 0.5, 1})), Epsilon::minus));
  }

  TEST_CASE("sigma selection") {
    const SigmaSet a = sigma_epsilon(decompose(diag({2, 0.5, 1, -1})), Epsilon::plus);
    REQUIRE(a.sigma.size() == 1);
    CHECK(near(a.sigma[0].value, 0.5));
    CHECK(a.sigma[0].multiplicity == 1);
    CHECK(a.r == 1);
    CHECK(a.s == 1);

    const SigmaSet b = sigma_epsilon(decompose(rotation(std::numbers::pi / 3)), Epsilon::plus);
    REQUIRE(b.sigma.size() == 1);
    CHECK(near(b.sigma[0].value, std::polar(1.0, std::numbers::pi / 3), 1e-12));

    const SigmaSet c = sigma_epsilon(decompose(Matrix::Identity(3, 3)), Epsilon::plus);
    CHECK(c.sigma.empty());
    CHECK(c.r == 3);
    CHECK(c.s == 0);

    // eps = -1 on the unit circle: the right half plane is selected.
    Matrix blocks = Matrix::Zero(4, 4);
    blocks.topLeftCorner(2, 2) = rotation(0.4);
    blocks.bottomRightCorner(2, 2) = rotation(std::numbers::pi - 0.4);
    const SigmaSet d = sigma_epsilon(decompose(blocks), Epsilon::minus);
    REQUIRE(d.sigma.size() == 2);
    for (const auto& cl : d.sigma) CHECK(cl.value.real() > 0);

    CHECK_THROWS_AS(sigma_epsilon(decompose(diag({2, 3, 1})), Epsilon::plus), NotApplicable);
  }

  TEST_CASE("ordered diagonalization puts the sigma eigenvalue first") {
    for (const Matrix& a : {diag({2, 0.5}), diag({0.5, 2})}) {
      const OrderedDiagonalization od = ordered_diagonalization(decompose(a), Epsilon::plus);
      CHECK(od.j == 1);
      CHECK(near(od.d(0), 0.5));
      CHECK(near(od.d(1), 2.0));
      CHECK((od.p * a.cast<Complex>() - od.d.asDiagonal() * od.p).norm() < 1e-14);
    }

    const OrderedDiagonalization rot = ordered_diagonalization(decompose(rotation(std::numbers::pi / 2)), Epsilon::plus);
    CHECK(near(rot.d(0), Complex(0, 1)));
    CHECK(near(rot.d(1), Complex(0, -1)));
    // Rows of P are dual to the eigenvectors (1, -+i)/sqrt 2 up to phase.
    const CVector v = rot.basis.col(0);
    CHECK(std::abs(std::abs(v(0)) - std::sqrt(0.5)) < 1e-12);
    CHECK(std::abs(v(1) / v(0) - Complex(0, -1)) < 1e-12);
  }

  TEST_CASE("ordered diagonalization on generated instances") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const Epsilon eps = seed % 2 == 0 ? Epsilon::plus : Epsilon::minus;
      const int order = eps == Epsilon::plus ? 2 + static_cast<int>(seed % 7) : 2 + 2 * static_cast<int>(seed % 4);
      const genlab::Instance inst = genlab::generate(genlab::random_instance_spec(order, eps, seed));
      const SpectralDecomposition sd = decompose(inst.a);
      REQUIRE(sd.semisimple);
      CHECK(sd.residual <= 1e-10);
      int total = 0;
      for (const auto& c : sd.eigenvalues) total += c.multiplicity;
      CHECK(total == order);
      const OrderedDiagonalization od = ordered_diagonalization(sd, eps);
      CHECK(2 * od.j + od.r + od.s == order);
      for (int i = 0; i < od.j; ++i) CHECK(near(od.d(2 * i) * od.d(2 * i + 1), value(eps), 1e-7));
      const CMatrix a = inst.a.cast<Complex>();
      CHECK((od.p * a - od.d.asDiagonal() * od.p).norm() <= 1e-10 * inst.a.norm() * od.condition);
      ++checked;
    }
    CHECK(checked == 60);
  }

  TEST_CASE("spectrum is closed under conjugation") {
    testing::Gen gen(5);
    for (int t = 0; t < 50; ++t) {
      const Matrix a = gen.well_conditioned(5);
      const SpectralDecomposition sd = decompose(a);
      for (const auto& c : sd.eigenvalues) {
        const int partner = sd.find(std::conj(c.value), 1e-7);
        REQUIRE(partner >= 0);
        CHECK(sd.eigenvalues[static_cast<std::size_t>(partner)].multiplicity == c.multiplicity);
      }
    }
  }
}
