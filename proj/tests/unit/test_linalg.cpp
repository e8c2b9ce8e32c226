#include <doctest.h>

#include "../oracle.hpp"
#include "qeffects/generators.hpp"
#include "qeffects/linalg.hpp"

using namespace qeffects;

namespace {

Matrix random_psd_matrix(Index d, Rng& rng) {
  const Matrix g = random_ginibre(d, d, rng);
  return g * g.adjoint();
}

}  // namespace

TEST_CASE("tolerance scale maps onto all fields") {
  const Tolerance t = Tolerance::from_scale(1e-6);
  CHECK(t.rank == 1e-6);
  CHECK(t.snap == 1e-6);
  CHECK(t.spec == doctest::Approx(1e-8));
  CHECK_NOTHROW(t.validate());
  Tolerance bad;
  bad.spec = 1e-6;
  bad.rank = 1e-8;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = Tolerance{};
  bad.rank = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("hermitian spectral decomposition") {
  SUBCASE("diagonal input") {
    const auto sd = hermitian_spectral(oracle::diag({0.0, 1.0}));
    CHECK(sd.eigenvalues(0) == doctest::Approx(0.0));
    CHECK(sd.eigenvalues(1) == doctest::Approx(1.0));
    CHECK(oracle::near(sd.eigenvectors, Matrix::Identity(2, 2), 1e-14));
  }
  SUBCASE("sigma_x") {
    const auto sd = hermitian_spectral(oracle::sigma_x());
    CHECK(sd.eigenvalues(0) == doctest::Approx(-1.0));
    CHECK(sd.eigenvalues(1) == doctest::Approx(1.0));
    const double s = 1.0 / std::sqrt(2.0);
    // Phase normalized: the dominant (first, on a tie) entry is real positive.
    Vector v0(2), v1(2);
    v0 << s, -s;
    v1 << s, s;
    CHECK((sd.eigenvectors.col(0) - v0).norm() < 1e-14);
    CHECK((sd.eigenvectors.col(1) - v1).norm() < 1e-14);
  }
  SUBCASE("identity") {
    for (Index d = 1; d <= 5; ++d) {
      const auto sd = hermitian_spectral(identity(d));
      CHECK((sd.eigenvalues - RealVector::Ones(d)).norm() < 1e-14);
    }
  }
  SUBCASE("not hermitian") {
    try {
      hermitian_spectral(oracle::mat2(0, 1, 0, 0));
      FAIL("expected NotHermitian");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotHermitian);
    }
  }
  SUBCASE("closed form 2x2") {
    Rng rng(11);
    for (int t = 0; t < 100; ++t) {
      const Matrix h = random_hermitian(2, rng);
      const auto [lo, hi] = oracle::eig2(h);
      const auto sd = hermitian_spectral(h);
      CHECK(sd.eigenvalues(0) == doctest::Approx(lo).epsilon(1e-12));
      CHECK(sd.eigenvalues(1) == doctest::Approx(hi).epsilon(1e-12));
    }
  }
  SUBCASE("random reconstruction and orthonormality") {
    Rng rng(12);
    for (Index d = 1; d <= 8; ++d)
      for (int t = 0; t < 20; ++t) {
        const Matrix h = random_hermitian(d, rng);
        const auto sd = hermitian_spectral(h);
        CHECK((sd.reconstruct() - h).norm() <= 1e-9 * h.norm());
        CHECK((sd.eigenvectors.adjoint() * sd.eigenvectors - identity(d)).norm() < 1e-12);
        for (Index i = 1; i < d; ++i) CHECK(sd.eigenvalues(i - 1) <= sd.eigenvalues(i));
      }
  }
}

TEST_CASE("psd square root") {
  CHECK(oracle::near(psd_sqrt(oracle::diag({0.25, 1.0})), oracle::diag({0.5, 1.0}), 1e-14));
  CHECK(oracle::near(psd_sqrt(Matrix::Zero(3, 3)), Matrix::Zero(3, 3), 1e-14));
  Rng rng(13);
  const Matrix p = random_projection(4, 2, rng);
  CHECK(oracle::near(psd_sqrt(p), p, 1e-12));
  for (Index d = 1; d <= 8; ++d) {
    const Matrix a = random_psd_matrix(d, rng);
    const Matrix s = psd_sqrt(a);
    CHECK((s * s - a).norm() <= 1e-9 * a.norm());
  }
  try {
    psd_sqrt(oracle::diag({1.0, -0.1}));
    FAIL("expected NotPSD");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPSD);
  }
  // Round-off below zero is clamped.
  CHECK_NOTHROW(psd_sqrt(oracle::diag({1.0, -1e-12})));
}

TEST_CASE("range and kernel projections") {
  auto rk = range_kernel_projections(oracle::diag({0.5, 0.0}));
  CHECK(oracle::near(rk.range, oracle::diag({1, 0}), 1e-14));
  CHECK(oracle::near(rk.kernel, oracle::diag({0, 1}), 1e-14));
  rk = range_kernel_projections(identity(3));
  CHECK(rk.rank == 3);
  CHECK(oracle::near(rk.kernel, Matrix::Zero(3, 3), 1e-14));
  rk = range_kernel_projections(Matrix::Zero(3, 3));
  CHECK(rk.rank == 0);
  CHECK(oracle::near(rk.kernel, identity(3), 1e-14));

  SUBCASE("scale floor ignores round-off") {
    const Matrix dust = oracle::diag({1e-17, 0.0});
    CHECK(range_kernel_projections(dust).rank == 1);
    CHECK(range_kernel_projections(dust, {}, 0.25).rank == 0);
  }
  SUBCASE("random low-rank PSD") {
    Rng rng(14);
    for (Index d = 2; d <= 8; ++d) {
      const Matrix v = random_ginibre(d, d / 2, rng);
      const Matrix a = v * v.adjoint();
      const auto r = range_kernel_projections(a);
      CHECK(r.rank == oracle::rank(a));
      CHECK((r.range + r.kernel - identity(d)).norm() < 1e-14);
      CHECK((r.range * r.range - r.range).norm() < 1e-10);
      CHECK((r.range * a - a).norm() <= 1e-8 * a.norm());
      CHECK((r.kernel * a).norm() <= 1e-8 * a.norm());
    }
  }
}

TEST_CASE("nullspace basis") {
  CHECK(nullspace_basis(identity(4)).cols() == 0);
  CHECK(nullspace_basis(Matrix::Zero(4, 4)).cols() == 4);
  const Matrix n = nullspace_basis(oracle::diag({0, 1, 1, 0}));
  REQUIRE(n.cols() == 2);
  // span{e1, e4}
  CHECK(std::abs(n.row(1).norm()) < 1e-14);
  CHECK(std::abs(n.row(2).norm()) < 1e-14);

  Rng rng(15);
  for (int t = 0; t < 30; ++t) {
    const Index rows = 3 + t % 5, inner = 1 + t % 4, cols = 6;
    const Matrix l = random_ginibre(rows, inner, rng) * random_ginibre(inner, cols, rng);
    const Matrix basis = nullspace_basis(l);
    CHECK(basis.cols() == cols - oracle::rank(l));
    const double top = l.norm();
    for (Index j = 0; j < basis.cols(); ++j) CHECK((l * basis.col(j)).norm() <= 10 * 1e-8 * top);
    CHECK((basis.adjoint() * basis - identity(basis.cols())).norm() < 1e-12);
  }
}

TEST_CASE("vectorization conventions") {
  Rng rng(16);
  const Matrix a = random_ginibre(3, 3, rng), x = random_ginibre(3, 3, rng),
               b = random_ginibre(3, 3, rng);
  CHECK((vec(a * x * b) - kron(b.transpose(), a) * vec(x)).norm() < 1e-12);
  CHECK(oracle::near(unvec(vec(x), 3), x, 0.0));
  CHECK(std::abs(hs_inner(a, b) - (a.adjoint() * b).trace()) < 1e-12);
}

TEST_CASE("orthonormalize and subspace containment") {
  const Matrix e11 = oracle::unit(2, 0, 0), e22 = oracle::unit(2, 1, 1), e12 = oracle::unit(2, 0, 1);
  const OperatorSubspace diag = orthonormalize({e11, e22, e11 + e22}, 2);
  CHECK(diag.size() == 2);
  const OperatorSubspace u1 = orthonormalize({e11}, 2);
  const OperatorSubspace u2 = orthonormalize({e12}, 2);

  auto c = subspace_contained(u1, diag);
  CHECK(c.contained);
  CHECK(c.max_residual <= 1e-8);
  c = subspace_contained(u2, diag);
  CHECK_FALSE(c.contained);
  CHECK(c.max_residual == doctest::Approx(1.0));
  OperatorSubspace empty;
  empty.dim = 2;
  c = subspace_contained(empty, diag);
  CHECK(c.contained);
  CHECK(c.max_residual == 0.0);
  OperatorSubspace other;
  other.dim = 3;
  CHECK_THROWS_AS(subspace_contained(u1, other), Error);

  SUBCASE("reflexive and transitive on random nested subspaces") {
    Rng rng(17);
    for (int t = 0; t < 20; ++t) {
      std::vector<Matrix> gens;
      for (int i = 0; i < 5; ++i) gens.push_back(random_ginibre(3, 3, rng));
      const auto a = orthonormalize({gens.begin(), gens.begin() + 2}, 3);
      const auto b = orthonormalize({gens.begin(), gens.begin() + 4}, 3);
      const auto cc = orthonormalize(gens, 3);
      CHECK(subspace_contained(a, a).contained);
      CHECK(subspace_contained(a, b).contained);
      CHECK(subspace_contained(b, cc).contained);
      CHECK(subspace_contained(a, cc).contained);
      CHECK_FALSE(subspace_contained(cc, a).contained);
    }
  }
}
