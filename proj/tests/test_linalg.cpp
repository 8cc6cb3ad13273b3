#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "superpos/error.hpp"
#include "superpos/linalg.hpp"
#include "superpos/optimizer.hpp"
#include "superpos/states.hpp"

using namespace superpos;
using std::numbers::pi;

TEST_CASE("kron") {
  CHECK((kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)) - ComplexMatrix::Identity(4, 4)).norm() == 0);

  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.block(0, 2, 2, 2) = ComplexMatrix::Identity(2, 2);
  expected.block(2, 0, 2, 2) = ComplexMatrix::Identity(2, 2);
  CHECK((kron(x, ComplexMatrix::Identity(2, 2)) - expected).norm() == 0);

  std::mt19937_64 rng(3);
  const auto a = oracle::random_matrix(2, 2, rng);
  const auto b = oracle::random_matrix(3, 3, rng);
  const auto k = kron(a, b);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) CHECK(std::abs(k(i * 3 + p, j * 3 + q) - a(i, j) * b(p, q)) < 1e-15);

  CHECK_THROWS_AS(kron(ComplexMatrix::Identity(16, 16), ComplexMatrix::Identity(8, 8)), InvalidInput);
}

TEST_CASE("partial trace") {
  const auto singlet = to_density(std::get<PureState>(make_state("singlet")));
  const std::vector<int> a{0};
  CHECK((partial_trace(singlet.mat, singlet.dims, a) - 0.5 * ComplexMatrix::Identity(2, 2)).norm() < 1e-15);

  std::mt19937_64 rng(5);
  const auto ra = random_density({2}, 1).mat;
  const auto rb = random_density({3}, 2).mat;
  CHECK((partial_trace(kron(ra, rb), {2, 3}, a) - ra).norm() < 1e-14);

  const auto ghz = to_density(std::get<PureState>(make_state("ghz")));
  const std::vector<int> ab{0, 1};
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = expected(3, 3) = 0.5;
  CHECK((partial_trace(ghz.mat, ghz.dims, ab) - expected).norm() < 1e-15);

  CHECK_THROWS_AS(partial_trace(ghz.mat, {2, 2}, a), InvalidInput);
  const std::vector<int> bad{3};
  CHECK_THROWS_AS(partial_trace(ghz.mat, ghz.dims, bad), InvalidInput);
}

TEST_CASE("partial trace matches index-loop oracle, preserves trace and is linear") {
  const Dims dims{2, 3, 2};
  const std::vector<std::vector<int>> keeps{{0}, {1}, {2}, {0, 2}, {1, 2}, {0, 1, 2}};
  for (int s = 0; s < 10; ++s) {
    const auto r1 = random_density(dims, 100 + s).mat;
    const auto r2 = random_density(dims, 200 + s).mat;
    for (const auto& keep : keeps) {
      const auto t1 = partial_trace(r1, dims, keep);
      CHECK((t1 - oracle::partial_trace(r1, dims, keep)).norm() < 1e-13);
      CHECK(std::abs(t1.trace() - 1.0) < 1e-12);
      const auto mix = partial_trace(0.3 * r1 + 0.7 * r2, dims, keep);
      CHECK((mix - 0.3 * t1 - 0.7 * partial_trace(r2, dims, keep)).norm() < 1e-13);
    }
  }
}

TEST_CASE("partial transpose matches oracle") {
  const Dims dims{2, 3};
  const auto r = random_density(dims, 9).mat;
  const std::vector<int> b{1};
  CHECK((partial_transpose(r, dims, b) - oracle::partial_transpose(r, dims, 1)).norm() < 1e-15);
}

TEST_CASE("svd") {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.6;
  d(1, 1) = 0.8;
  auto s = svd(d).singular_values;
  CHECK(s(0) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(s(1) == doctest::Approx(0.6).epsilon(1e-14));

  const auto singlet = std::get<PureState>(make_state("singlet"));
  s = svd(amplitude_matrix(singlet, {0})).singular_values;
  CHECK(std::abs(s(0) - std::sqrt(0.5)) < 1e-14);
  CHECK(std::abs(s(1) - std::sqrt(0.5)) < 1e-14);

  const double l = 0.2;
  const auto fig = std::get<PureState>(make_state("fig1_state", {l}));
  s = svd(amplitude_matrix(fig, {0})).singular_values;
  CHECK(std::abs(s(0) - std::sqrt(0.96)) < 1e-14);
  CHECK(std::abs(s(1) - std::sqrt(2.0 / 3.0) * l) < 1e-14);
  CHECK(std::abs(s(2) - std::sqrt(1.0 / 3.0) * l) < 1e-14);
}

TEST_CASE("svd reconstruction on random matrices") {
  std::mt19937_64 rng(11);
  for (int r = 2; r <= 6; ++r) {
    for (int c = 2; c <= 6; ++c) {
      const auto m = oracle::random_matrix(r, c, rng);
      const auto res = svd(m);
      ComplexMatrix sigma = ComplexMatrix::Zero(r, c);
      for (Eigen::Index k = 0; k < res.singular_values.size(); ++k) sigma(k, k) = res.singular_values(k);
      CHECK((m - res.left * sigma * res.right.adjoint()).norm() <= 1e-12 * m.norm());
      for (Eigen::Index k = 0; k < res.singular_values.size(); ++k) {
        CHECK(res.singular_values(k) >= 0);
        if (k > 0) CHECK(res.singular_values(k) <= res.singular_values(k - 1));
      }
      CHECK(unitarity_defect(res.left) < 1e-12);
      CHECK(unitarity_defect(res.right) < 1e-12);
    }
  }
}

TEST_CASE("eig_hermitian") {
  auto e = eig_hermitian(0.5 * ComplexMatrix::Identity(2, 2));
  CHECK(std::abs(e.values(0) - 0.5) < 1e-15);
  CHECK(std::abs(e.values(1) - 0.5) < 1e-15);

  const auto rsp = std::get<DensityMatrix>(make_state("rsp_state"));
  e = eig_hermitian(reduced_density(rsp, {0}));
  CHECK(std::abs(e.values(0) - (2 + std::sqrt(2.0)) / 4) < 1e-14);
  CHECK(std::abs(e.values(1) - (2 - std::sqrt(2.0)) / 4) < 1e-14);

  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  e = eig_hermitian(x);
  CHECK(std::abs(e.values(0) - 1) < 1e-15);
  CHECK(std::abs(e.values(1) + 1) < 1e-15);
  const double plus = std::abs(e.vectors.col(0).dot(ComplexVector::Constant(2, std::sqrt(0.5))));
  CHECK(std::abs(plus - 1) < 1e-14);

  const auto r = random_density({2, 3}, 4).mat;
  e = eig_hermitian(r);
  for (int k = 0; k < 6; ++k) CHECK((r * e.vectors.col(k) - e.values(k) * e.vectors.col(k)).norm() < 1e-10);
  CHECK(unitarity_defect(e.vectors) < 1e-12);

  ComplexMatrix bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(eig_hermitian(bad), InvalidInput);
}

TEST_CASE("unitary_from_angles") {
  auto u = unitary_from_angles({2, {0, 0, 0, 0}});
  ComplexMatrix sp(2, 2);
  sp << 0, -1, 1, 0;
  CHECK((u - sp).norm() < 1e-15);

  u = unitary_from_angles({2, {pi / 2, 0, 0, 0}});
  const double c = std::cos(pi / 4), s = std::sin(pi / 4);
  CHECK(std::abs(u(0, 0) - s) < 1e-15);
  CHECK(std::abs(u(1, 0) - c) < 1e-15);
  CHECK(std::abs(u(0, 1) + c) < 1e-15);
  CHECK(std::abs(u(1, 1) - s) < 1e-15);

  // two-level basis sin(t/2)|0> + e^{i phi}cos(t/2)|1>, -e^{-i phi}cos(t/2)|0> + sin(t/2)|1>
  const double t = 1.1, phi = 0.4;
  u = unitary_from_angles({2, {t, phi, 0, 0}});
  const Complex e(std::cos(phi), std::sin(phi));
  CHECK(std::abs(u(0, 0) - std::sin(t / 2)) < 1e-15);
  CHECK(std::abs(u(1, 0) - e * std::cos(t / 2)) < 1e-15);
  CHECK(std::abs(u(0, 1) + std::conj(e) * std::cos(t / 2)) < 1e-15);
  CHECK(std::abs(u(1, 1) - std::sin(t / 2)) < 1e-15);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ang(-pi, pi);
  for (int d = 1; d <= 5; ++d) {
    UnitaryParams p{d, std::vector<double>(d * d)};
    for (auto& a : p.angles) a = ang(rng);
    CHECK(unitarity_defect(unitary_from_angles(p)) < 1e-12);
  }
  CHECK_THROWS_AS(unitary_from_angles({3, {0, 0, 0}}), InvalidInput);
}

TEST_CASE("random_unitary") {
  const auto one = random_unitary(1, 99);
  CHECK(std::abs(std::abs(one(0, 0)) - 1) < 1e-15);
  CHECK((random_unitary(3, 5) - random_unitary(3, 5)).norm() == 0);
  CHECK((random_unitary(3, 5) - random_unitary(3, 6)).norm() > 0.1);
  const auto u = random_unitary(4, 7);
  CHECK((u.adjoint() * u - ComplexMatrix::Identity(4, 4)).norm() < 1e-12);
}

namespace {

// Frobenius distance between U(x) and V after the best global phase.
double phase_distance(const ComplexMatrix& u, const ComplexMatrix& v) {
  const double d = static_cast<double>(u.rows());
  return std::sqrt(std::max(0.0, 2 * d - 2 * std::abs((u.adjoint() * v).trace())));
}

}  // namespace

TEST_CASE("unitary chart reaches Haar samples up to global phase") {
  OptimizerConfig cfg;
  cfg.max_iters = 20000;
  cfg.tol = 1e-13;
  for (int d : {2, 3}) {
    for (int sample = 0; sample < 10; ++sample) {
      const ComplexMatrix target = random_unitary(d, 5000 + 17 * sample + d);
      const VectorObjective f = [&](std::span<const double> x) {
        return phase_distance(unitary_from_angles({d, {x.begin(), x.end()}}), target);
      };
      double best = 1e9;
      std::mt19937_64 rng(sample);
      std::uniform_real_distribution<double> ang(0, 2 * pi);
      for (int attempt = 0; attempt < 20 && best > 1e-8; ++attempt) {
        std::vector<double> x0(d * d);
        for (auto& a : x0) a = ang(rng);
        auto r = nelder_mead(f, x0, cfg);
        for (int polish = 0; polish < 5; ++polish) r = nelder_mead(f, r.params, cfg);
        best = std::min(best, r.value);
      }
      CHECK(best <= 1e-8);
    }
  }
}

TEST_CASE("basis chart has full rank at its center") {
  // The map from d(d-1) angles to the d(d-1) independent entries of the
  // projectors |phi_k><phi_k| has full Jacobian rank at theta = pi/2, phi = 0.
  for (int d : {2, 3, 4}) {
    const int n = basis_param_count(d);
    std::vector<double> x(n, 0.0);
    for (int k = 0; k < n / 2; ++k) x[k] = pi / 2;
    auto features = [d](std::span<const double> a) {
      const auto b = basis_from_angles(d, a);
      std::vector<double> out;
      for (int k = 0; k < d; ++k) {
        const ComplexMatrix p = b.col(k) * b.col(k).adjoint();
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) {
            out.push_back(p(i, j).real());
            out.push_back(p(i, j).imag());
          }
      }
      return out;
    };
    const auto f0 = features(x);
    Eigen::MatrixXd jac(f0.size(), n);
    const double h = 1e-6;
    for (int k = 0; k < n; ++k) {
      auto xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const auto fp = features(xp), fm = features(xm);
      for (std::size_t i = 0; i < f0.size(); ++i) jac(i, k) = (fp[i] - fm[i]) / (2 * h);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    lu.setThreshold(1e-6);
    CHECK(lu.rank() == n);
  }
}

TEST_CASE("permutation_indices") {
  const Dims dims{2, 3};
  const std::vector<int> order{1, 0};
  const auto perm = permutation_indices(dims, order);
  // permuted entry (j, i) with j over dim 3 and i over dim 2 comes from original (i, j)
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 2; ++i) CHECK(perm[j * 2 + i] == i * 3 + j);
}
