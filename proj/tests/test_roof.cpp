#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "superpos/certify.hpp"
#include "superpos/error.hpp"
#include "superpos/roof.hpp"

using namespace superpos;

namespace {

constexpr auto kRoot = MeasureVariant::RootOfPairSum;
constexpr auto kSum = MeasureVariant::SumOfPairRoots;

OptimizerConfig quick(int restarts = 8) {
  OptimizerConfig c;
  c.restarts = restarts;
  return c;
}

OptimizerConfig mixed_cfg(int restarts = 4) {
  OptimizerConfig c;
  c.restarts = restarts;
  c.max_iters = 20000;
  return c;
}

PureState product3(std::uint64_t seed) { return random_product({2, 2, 2}, seed); }

std::vector<double> schmidt_weights(const PureState& psi, const Block& block) {
  const auto s = schmidt_decompose(psi, bipartition_of(block, static_cast<int>(psi.dims.size())));
  std::vector<double> w;
  for (Eigen::Index k = 0; k < s.coefficients.size(); ++k) w.push_back(s.coefficients(k) * s.coefficients(k));
  return w;
}

}  // namespace

TEST_CASE("describe") {
  CHECK(describe(LsBlock{{0, 2}}) == "LS[0,2]");
  CHECK(describe(LsSymmetric{}) == "LS");
  CHECK(describe(Nls{parse_partition("01|2")}) == "NLS[01|2]");
}

TEST_CASE("LS of one block for pure states") {
  auto r = ls_block_pure(random_product({2, 3}, 1), {0}, kRoot, quick());
  CHECK(r.value < 1e-8);
  r = ls_block_pure(std::get<PureState>(make_state("singlet")), {0}, kRoot, quick());
  CHECK(std::abs(r.value - 1) < 1e-8);
  r = ls_block_pure(std::get<PureState>(make_state("fig1_state", {0.2})), {0}, kSum, quick());
  CHECK(std::abs(r.value - 0.583986531642978) < 1e-5);
  REQUIRE(r.closed_form);
  CHECK(r.value <= *r.closed_form + 1e-8);
  for (int i = 1; i <= 9; ++i) {
    const double l = 0.1 * i;
    const auto psi = std::get<PureState>(make_state("ghz_like", {l}));
    CHECK(std::abs(ls_block_pure(psi, {0}, kRoot, quick()).value - 2 * l * std::sqrt(1 - l * l)) < 1e-4);
  }
  CHECK_THROWS_AS(ls_block_pure(std::get<PureState>(make_state("singlet")), {0, 1}, kRoot, quick()), InvalidInput);
}

TEST_CASE("witness re-evaluation reproduces reported values") {
  const auto psi = random_pure({2, 3, 2}, 5);
  auto r = ls_block_pure(psi, {1}, kSum, quick(4));
  CHECK(std::abs(r.value - s_local(psi, {1}, r.witness.unitaries[0], kSum)) < 1e-12);
  const Partition p = parse_partition("0|12");
  r = nls_pure(psi, p, kRoot, quick(4));
  CHECK(std::abs(r.value - nls_in_basis(psi, {p, r.witness.unitaries}, kRoot)) < 1e-12);
}

TEST_CASE("symmetric LS") {
  auto r = ls_symmetric_pure(std::get<PureState>(make_state("ghz")), kRoot, quick());
  CHECK(std::abs(r.value - 1) < 1e-6);
  const auto w = std::get<PureState>(make_state("w_state"));
  for (int b = 0; b < 3; ++b) {
    CHECK(std::abs(ls_block_pure(w, {b}, kRoot, quick()).value - 0.9428) < 1e-3);
  }
  r = ls_symmetric_pure(w, kSum, quick());
  CHECK(std::abs(r.value - 2 * std::sqrt(2.0) / 3) < 1e-6);
  CHECK(ls_symmetric_pure(product3(3), kRoot, quick()).value < 1e-8);
  CHECK_THROWS_AS(ls_symmetric_pure(w, parse_partition("012"), kRoot, quick()), InvalidInput);
}

TEST_CASE("NLS for pure states") {
  const auto psi = std::get<PureState>(make_state("schmidt_qubits", {4.0 / 19.0}));
  auto r = nls_pure(psi, parse_partition("0|1"), kRoot, quick());
  CHECK(std::abs(r.value - 0.411616080243916) < 1e-6);
  CHECK(std::abs(r.value - concurrence_pure(psi)) < 1e-6);

  const auto w = std::get<PureState>(make_state("w_state"));
  CHECK(std::abs(nls_pure(w, parse_partition("0|1|2"), kRoot, quick()).value - 1.1547) < 1e-3);
  CHECK(std::abs(nls_pure(w, parse_partition("01|2"), kRoot, quick()).value - 0.9428) < 1e-3);

  for (const char* p : {"0|1|2", "01|2", "0|12"}) {
    CHECK(nls_pure(product3(4), parse_partition(p), kRoot, quick()).value < 1e-8);
  }
}

TEST_CASE("closed forms") {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = 0.6;
  v(3) = 0.8;
  const auto two = ls_closed_form_pure(make_pure({2, 2}, v), {0});
  CHECK(two.two_level);
  CHECK(std::abs(two.root_form - 0.96) < 1e-14);
  CHECK(std::abs(two.sum_form - 0.96) < 1e-14);

  const double l = 0.2;
  const auto fig = ls_closed_form_pure(std::get<PureState>(make_state("fig1_state", {l})), {0});
  CHECK_FALSE(fig.two_level);
  const double a = 0.96, b = 2.0 / 3.0 * l * l, c = 1.0 / 3.0 * l * l;
  CHECK(std::abs(fig.sum_form - 0.583986531642978) < 1e-9);
  CHECK(std::abs(fig.root_form - 2 * std::sqrt(a * b + a * c + b * c)) < 1e-14);
  CHECK(std::abs(fig.root_form - 0.3937286149395573) < 1e-12);
}

TEST_CASE("two-block root NLS is the Schmidt expression") {
  for (int s = 0; s < 5; ++s) {
    const auto psi = random_pure({3, 3}, 60 + s);
    const Partition ab = parse_partition("0|1");
    const double exact = nls_bipartite_exact(psi, ab);
    CHECK(std::abs(exact - oracle::pair_root(schmidt_weights(psi, {0}))) < 1e-13);
    const auto r = nls_pure(psi, ab, kRoot, quick(16));
    CHECK(r.value >= exact - 1e-9);
    CHECK(r.value - exact < 1e-6);
  }
}

TEST_CASE("random two-qubit pure states: NLS equals concurrence and LS equals 2 c1 c2") {
  for (int s = 0; s < 50; ++s) {
    const auto psi = random_pure({2, 2}, 500 + s);
    const double conc = concurrence_pure(psi);
    CHECK(std::abs(nls_pure(psi, parse_partition("0|1"), kRoot, quick()).value - conc) <= 1e-6);
    const auto w = schmidt_weights(psi, {0});
    CHECK(std::abs(ls_block_pure(psi, {0}, kRoot, quick()).value - 2 * std::sqrt(w[0] * w[1])) <= 1e-6);
  }
}

TEST_CASE("LS never beats the Schmidt basis value") {
  for (int s = 0; s < 10; ++s) {
    const auto psi = random_pure({3, 3}, 700 + s);
    const auto sch = schmidt_decompose(psi, parse_partition("0|1"));
    for (auto v : {kRoot, kSum}) {
      CHECK(ls_block_pure(psi, {0}, v, quick()).value <= s_local(psi, {0}, sch.left, v) + 1e-8);
    }
  }
}

TEST_CASE("local unitaries leave NLS unchanged") {
  for (int s = 0; s < 5; ++s) {
    const auto psi = random_pure({2, 2, 2}, 800 + s);
    const ComplexMatrix u = kron(kron(random_unitary(2, s), random_unitary(2, s + 50)), random_unitary(2, s + 99));
    const auto moved = make_pure(psi.dims, u * psi.amps);
    const Partition p = parse_partition("0|1|2");
    CHECK(std::abs(nls_pure(psi, p, kRoot, quick(16)).value - nls_pure(moved, p, kRoot, quick(16)).value) < 1e-6);
  }
}

TEST_CASE("symmetric LS is at least the mean of the single-block values") {
  for (int s = 0; s < 10; ++s) {
    const auto psi = random_pure({2, 3}, 900 + s);
    for (auto v : {kRoot, kSum}) {
      const double sym = ls_symmetric_pure(psi, v, quick()).value;
      const double a = ls_block_pure(psi, {0}, v, quick()).value;
      const double b = ls_block_pure(psi, {1}, v, quick()).value;
      CHECK(sym >= (a + b) / 2 - 1e-5);
    }
  }
}

TEST_CASE("GHZ-like states: LS and NLS agree") {
  for (int i = 1; i <= 9; ++i) {
    const auto psi = std::get<PureState>(make_state("ghz_like", {0.1 * i}));
    const double ls = ls_symmetric_pure(psi, kSum, quick()).value;
    const double nls = nls_pure(psi, parse_partition("0|1|2"), kRoot, quick()).value;
    CHECK(std::abs(ls - nls) < 1e-4);
  }
}

TEST_CASE("W-like states: LS and NLS differ somewhere") {
  double gap = 0;
  for (int i = 1; i <= 9; ++i) {
    const auto psi = std::get<PureState>(make_state("w_like", {0.1 * i}));
    const double ls = ls_symmetric_pure(psi, kSum, quick(4)).value;
    const double nls = nls_pure(psi, parse_partition("0|1|2"), kRoot, quick(4)).value;
    gap = std::max(gap, std::abs(ls - nls));
  }
  CHECK(gap > 0.01);
}

TEST_CASE("mixed LS") {
  const auto classical = std::get<DensityMatrix>(make_state("classical_diag"));
  auto r = ls_mixed_estimate(classical, LsBlock{{0}}, kRoot, mixed_cfg());
  CHECK(r.value < 1e-6);
  CHECK(r.upper_bound);
  REQUIRE(r.ensemble);
  CHECK((to_density(*r.ensemble).mat - classical.mat).norm() < 1e-10);

  const auto cq = random_classical_quantum({2, 2}, 3);
  CHECK(ls_mixed_estimate(cq, LsBlock{{0}}, kRoot, mixed_cfg()).value < 1e-6);

  const auto rsp = std::get<DensityMatrix>(make_state("rsp_state"));
  r = ls_mixed_estimate(rsp, LsBlock{{0}}, kRoot, mixed_cfg());
  CHECK(r.value >= 0.05);
  CHECK(cq_certify(rsp, {0}).verdict == Verdict::CertifiedNonzero);
  // witness: shared basis applied to the reported ensemble
  CHECK(std::abs(r.value - s_local_ensemble(*r.ensemble, {0}, r.witness.unitaries[0], kRoot)) < 1e-12);

  r = ls_mixed_estimate(classical, LsSymmetric{}, kSum, mixed_cfg());
  CHECK(r.value < 1e-6);

  CHECK_THROWS_AS(ls_mixed_estimate(random_density({2, 2, 2}, 1), LsBlock{{0}}, kRoot, mixed_cfg()), InvalidInput);
  CHECK_THROWS_AS(ls_mixed_estimate(classical, Nls{parse_partition("0|1")}, kRoot, mixed_cfg()), InvalidInput);
  RoofOptions big;
  big.ensemble_size = 5;
  CHECK_THROWS_AS(ls_mixed_estimate(classical, LsBlock{{0}}, kRoot, mixed_cfg(), big), InvalidInput);
}

TEST_CASE("mixed NLS") {
  // separable: sum_k p_k rho_A^k (x) rho_B^k with pure factors
  ComplexMatrix sep = ComplexMatrix::Zero(4, 4);
  const double w[3] = {0.5, 0.3, 0.2};
  for (int k = 0; k < 3; ++k) {
    const auto a = random_pure({2}, 10 + k).amps, b = random_pure({2}, 20 + k).amps;
    const ComplexVector ab = oracle::kron(a, b);
    sep += w[k] * ab * ab.adjoint();
  }
  const auto rho = make_density({2, 2}, sep);
  auto r = nls_mixed_estimate(rho, parse_partition("0|1"), mixed_cfg(8));
  CHECK(r.value < 5e-3);

  const auto wer = std::get<DensityMatrix>(make_state("werner", {0.6}));
  r = nls_mixed_estimate(wer, parse_partition("0|1"), mixed_cfg());
  CHECK(std::abs(r.value - 0.4) < 5e-3);
  CHECK(r.value >= concurrence_mixed(wer) - 1e-6);
  REQUIRE(r.ensemble);
  REQUIRE(r.member_bases.size() == r.ensemble->members.size());
  double again = 0;
  for (std::size_t i = 0; i < r.member_bases.size(); ++i) {
    again += r.ensemble->probs[i] * nls_in_basis(r.ensemble->members[i], r.member_bases[i], kRoot);
  }
  CHECK(std::abs(again - r.value) < 1e-10);

  const auto psi = random_pure({2, 2}, 4);
  const double pure = nls_pure(psi, parse_partition("0|1"), kRoot, quick()).value;
  CHECK(std::abs(nls_mixed_estimate(to_density(psi), parse_partition("0|1"), mixed_cfg()).value - pure) < 1e-8);
}

TEST_CASE("mixed NLS over three blocks uses the nested search") {
  const auto ghz = to_density(std::get<PureState>(make_state("ghz")));
  OptimizerConfig c = quick(2);
  const auto r = nls_mixed_estimate(ghz, parse_partition("0|1|2"), c);
  CHECK(std::abs(r.value - 1) < 1e-6);
}

TEST_CASE("mixed NLS is an upper bound on concurrence for Werner states") {
  for (double p : {0.4, 0.6, 0.8}) {
    const auto wer = std::get<DensityMatrix>(make_state("werner", {p}));
    CHECK(nls_mixed_estimate(wer, parse_partition("0|1"), mixed_cfg(2)).value >= concurrence_mixed(wer) - 1e-6);
  }
}

TEST_CASE("measure dispatch") {
  const auto singlet = std::get<PureState>(make_state("singlet"));
  MeasureRequest req{singlet, LsBlock{{0}}, kRoot, quick(2)};
  CHECK(std::abs(measure(req).value - 1) < 1e-8);
  req.kind = Nls{parse_partition("0|1")};
  CHECK(std::abs(measure(req).value - 1) < 1e-8);
  req.kind = LsSymmetric{};
  CHECK(std::abs(measure(req).value - 1) < 1e-8);
  req.target = std::get<DensityMatrix>(make_state("classical_diag"));
  req.cfg = mixed_cfg(2);
  CHECK(measure(req).value < 1e-6);
  req.kind = Nls{parse_partition("0|1")};
  CHECK(measure(req).value < 1e-6);
}
