#include "superpos/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "superpos/error.hpp"

namespace superpos {

// Partitions ------------------------------------------------------------------

Partition parse_partition(std::string_view spec) {
  Partition p;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t bar = spec.find('|', start);
    const std::string_view part = spec.substr(start, bar == std::string_view::npos ? spec.npos : bar - start);
    Block block;
    const bool comma_list = part.find(',') != std::string_view::npos;
    std::size_t k = 0;
    while (k < part.size()) {
      if (part[k] == ' ' || part[k] == ',') {
        ++k;
        continue;
      }
      if (part[k] < '0' || part[k] > '9') throw InvalidInput("partition: unexpected character in '" + std::string(spec) + "'");
      int value = 0;
      if (comma_list) {
        while (k < part.size() && part[k] >= '0' && part[k] <= '9') value = value * 10 + (part[k++] - '0');
      } else {
        value = part[k++] - '0';
      }
      block.push_back(value);
    }
    if (block.empty()) throw InvalidInput("partition: empty block in '" + std::string(spec) + "'");
    p.blocks.push_back(std::move(block));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return p;
}

std::string format_partition(const Partition& p) {
  std::string out;
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    if (b) out += '|';
    const bool wide = std::any_of(p.blocks[b].begin(), p.blocks[b].end(), [](int k) { return k > 9; });
    for (std::size_t k = 0; k < p.blocks[b].size(); ++k) {
      if (wide && k) out += ',';
      out += std::to_string(p.blocks[b][k]);
    }
  }
  return out;
}

void check_block(const Block& b, int n_subsystems) {
  if (b.empty()) throw InvalidInput("block must not be empty");
  std::vector<int> seen(n_subsystems, 0);
  for (int k : b) {
    if (k < 0 || k >= n_subsystems) throw InvalidInput("block index " + std::to_string(k) + " out of range");
    if (seen[k]++) throw InvalidInput("block index " + std::to_string(k) + " repeated");
  }
}

void check_partition(const Partition& p, int n_subsystems) {
  std::vector<int> seen(n_subsystems, 0);
  for (const auto& b : p.blocks) {
    if (b.empty()) throw InvalidInput("partition contains an empty block");
    for (int k : b) {
      if (k < 0 || k >= n_subsystems) throw InvalidInput("partition index " + std::to_string(k) + " out of range");
      if (seen[k]++) throw InvalidInput("partition blocks are not disjoint");
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw InvalidInput("partition does not cover every subsystem");
  }
}

Partition finest_partition(int n_subsystems) {
  Partition p;
  for (int k = 0; k < n_subsystems; ++k) p.blocks.push_back({k});
  return p;
}

Partition bipartition_of(const Block& block, int n_subsystems) {
  check_block(block, n_subsystems);
  Block first = block;
  std::sort(first.begin(), first.end());
  Block rest;
  for (int k = 0; k < n_subsystems; ++k) {
    if (!std::binary_search(first.begin(), first.end(), k)) rest.push_back(k);
  }
  if (rest.empty()) throw InvalidInput("block covers every subsystem; the complement is empty");
  return Partition{{first, rest}};
}

int block_dim(const Dims& dims, const Block& b) {
  int d = 1;
  for (int k : b) d *= dims.at(k);
  return d;
}

// Construction ----------------------------------------------------------------

namespace {

void fix_global_phase(ComplexVector& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double mag = std::abs(v(k));
    if (mag > 1e-12) {
      v *= std::conj(v(k)) / mag;
      v(k) = mag;
      return;
    }
  }
}

std::string residual_text(double r) {
  std::ostringstream os;
  os.precision(6);
  os << r;
  return os.str();
}

}  // namespace

PureState make_pure(Dims dims, ComplexVector amps) {
  PureState psi{std::move(dims), std::move(amps)};
  const auto report = validate(psi);
  if (!report.ok()) throw InvalidInput("invalid pure state: " + report.to_string());
  fix_global_phase(psi.amps);
  return psi;
}

PureState make_pure_normalized(Dims dims, ComplexVector amps) {
  const double n = amps.norm();
  if (!(n > 0) || !std::isfinite(n)) throw InvalidInput("cannot normalize a zero or non-finite amplitude vector");
  return make_pure(std::move(dims), amps / n);
}

DensityMatrix make_density(Dims dims, ComplexMatrix mat) {
  DensityMatrix rho{std::move(dims), std::move(mat)};
  const auto report = validate(rho);
  if (!report.ok()) throw InvalidInput("invalid density matrix: " + report.to_string());
  rho.mat = 0.5 * (rho.mat + rho.mat.adjoint()).eval();
  return rho;
}

DensityMatrix to_density(const PureState& psi) { return {psi.dims, psi.amps * psi.amps.adjoint()}; }

DensityMatrix to_density(const Ensemble& ens) {
  if (ens.members.empty()) throw InvalidInput("empty ensemble");
  const int n = static_cast<int>(ens.members.front().amps.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < ens.members.size(); ++i) {
    m += ens.probs[i] * ens.members[i].amps * ens.members[i].amps.adjoint();
  }
  return {ens.members.front().dims, m};
}

ComplexMatrix amplitude_matrix(const PureState& psi, const Block& block) {
  const int n = static_cast<int>(psi.dims.size());
  check_block(block, n);
  Block first = block;
  std::sort(first.begin(), first.end());
  std::vector<int> order = first;
  for (int k = 0; k < n; ++k) {
    if (!std::binary_search(first.begin(), first.end(), k)) order.push_back(k);
  }
  const int rows = block_dim(psi.dims, first);
  const int cols = static_cast<int>(psi.amps.size()) / rows;
  const auto perm = permutation_indices(psi.dims, order);
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = psi.amps(perm[r * cols + c]);
  }
  return m;
}

namespace {

std::vector<int> partition_order(const Partition& p) {
  std::vector<int> order;
  for (const auto& b : p.blocks) order.insert(order.end(), b.begin(), b.end());
  return order;
}

}  // namespace

ComplexVector amplitudes_in_partition_order(const PureState& psi, const Partition& p) {
  check_partition(p, static_cast<int>(psi.dims.size()));
  const auto perm = permutation_indices(psi.dims, partition_order(p));
  ComplexVector out(psi.amps.size());
  for (Eigen::Index k = 0; k < out.size(); ++k) out(k) = psi.amps(perm[k]);
  return out;
}

ComplexMatrix density_in_partition_order(const DensityMatrix& rho, const Partition& p) {
  check_partition(p, static_cast<int>(rho.dims.size()));
  const auto perm = permutation_indices(rho.dims, partition_order(p));
  const Eigen::Index n = rho.mat.rows();
  ComplexMatrix out(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) out(r, c) = rho.mat(perm[r], perm[c]);
  }
  return out;
}

ComplexMatrix reduced_density(const PureState& psi, const Block& keep) {
  const ComplexMatrix m = amplitude_matrix(psi, keep);
  return m * m.adjoint();
}

ComplexMatrix reduced_density(const DensityMatrix& rho, const Block& keep) {
  return partial_trace(rho.mat, rho.dims, keep);
}

SchmidtResult schmidt_decompose(const PureState& psi, const Partition& bipartition) {
  if (bipartition.size() != 2) {
    throw InvalidInput("schmidt_decompose: partition must have exactly two blocks, got " +
                       std::to_string(bipartition.size()));
  }
  check_partition(bipartition, static_cast<int>(psi.dims.size()));
  // Rows follow block 0 in the order given, columns block 1.
  const ComplexVector ordered = amplitudes_in_partition_order(psi, bipartition);
  const int rows = block_dim(psi.dims, bipartition.blocks[0]);
  const int cols = block_dim(psi.dims, bipartition.blocks[1]);
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = ordered(r * cols + c);
  }
  auto s = svd(m);
  return {s.singular_values, s.left, s.right.conjugate()};
}

// Ensembles -------------------------------------------------------------------

EigenEnsemble eigen_ensemble(const DensityMatrix& rho) {
  const auto eig = eig_hermitian(rho.mat);
  int rank = 0;
  while (rank < eig.values.size() && eig.values(rank) > kRankTol) ++rank;
  if (rank == 0) throw InvalidInput("density matrix has no eigenvalue above the rank tolerance");
  return {rho.dims, eig.values.head(rank), eig.vectors.leftCols(rank)};
}

ComplexMatrix unnormalized_members(const EigenEnsemble& eig, const ComplexMatrix& mix) {
  // column i = E * diag(sqrt q) * mix(i, :)^T
  const RealVector sq = eig.weights.cwiseSqrt();
  return eig.vectors * sq.asDiagonal() * mix.transpose();
}

Ensemble ensemble_from_isometry(const EigenEnsemble& eig, const ComplexMatrix& mix) {
  if (mix.cols() != eig.rank()) {
    throw InvalidInput("ensemble_from_isometry: isometry has " + std::to_string(mix.cols()) +
                       " columns but rank(rho) = " + std::to_string(eig.rank()));
  }
  const double defect = (mix.adjoint() * mix - ComplexMatrix::Identity(mix.cols(), mix.cols())).norm();
  if (!(defect <= kStateTol)) {
    throw InvalidInput("ensemble_from_isometry: mixing matrix is not an isometry (defect " +
                       residual_text(defect) + ")");
  }
  const ComplexMatrix members = unnormalized_members(eig, mix);
  Ensemble ens;
  for (Eigen::Index i = 0; i < members.cols(); ++i) {
    const double p = members.col(i).squaredNorm();
    ComplexVector v = p > 0 ? ComplexVector(members.col(i) / std::sqrt(p)) : ComplexVector(eig.vectors.col(0));
    fix_global_phase(v);
    ens.probs.push_back(p);
    ens.members.push_back({eig.dims, std::move(v)});
  }
  return ens;
}

Ensemble ensemble_from_isometry(const DensityMatrix& rho, const ComplexMatrix& mix) {
  return ensemble_from_isometry(eigen_ensemble(rho), mix);
}

// Catalog -----------------------------------------------------------------------

namespace {

double param(std::string_view name, const std::vector<double>& params, std::size_t count) {
  if (params.size() != count) {
    throw InvalidInput(std::string(name) + " expects " + std::to_string(count) + " parameter(s), got " +
                       std::to_string(params.size()));
  }
  return count ? params[0] : 0.0;
}

double unit_interval(std::string_view name, double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw InvalidInput(std::string(name) + ": parameter must lie in [0, 1], got " + std::to_string(x));
  }
  return x;
}

PureState basis_superposition(Dims dims, const std::vector<std::pair<int, Complex>>& terms) {
  ComplexVector v = ComplexVector::Zero(total_dim(dims));
  for (const auto& [idx, a] : terms) v(idx) += a;
  return make_pure(std::move(dims), std::move(v));
}

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

}  // namespace

std::vector<std::string> catalog_names() {
  return {"singlet", "schmidt_qubits", "fig1_state", "ghz_like", "ghz",
          "w_state", "w_like",         "rsp_state",  "werner",   "classical_diag"};
}

AnyState make_state(std::string_view name, const std::vector<double>& params) {
  const double r2 = std::numbers::sqrt2;
  if (name == "singlet") {
    param(name, params, 0);
    return basis_superposition({2, 2}, {{1, 1 / r2}, {2, -1 / r2}});
  }
  if (name == "schmidt_qubits") {
    const double a = unit_interval(name, param(name, params, 1));
    return basis_superposition({2, 2}, {{0, a}, {3, std::sqrt(1 - a * a)}});
  }
  if (name == "fig1_state") {
    const double l = unit_interval(name, param(name, params, 1));
    return basis_superposition({3, 3}, {{0, std::sqrt(2.0 / 3.0) * l}, {4, std::sqrt(1.0 / 3.0) * l},
                                        {8, std::sqrt(1 - l * l)}});
  }
  if (name == "ghz_like") {
    const double l = unit_interval(name, param(name, params, 1));
    return basis_superposition({2, 2, 2}, {{0, l}, {7, std::sqrt(1 - l * l)}});
  }
  if (name == "ghz") {
    param(name, params, 0);
    return basis_superposition({2, 2, 2}, {{0, 1 / r2}, {7, 1 / r2}});
  }
  if (name == "w_state") {
    param(name, params, 0);
    const double a = 1 / std::sqrt(3.0);
    return basis_superposition({2, 2, 2}, {{4, a}, {2, a}, {1, a}});
  }
  if (name == "w_like") {
    const double l = unit_interval(name, param(name, params, 1));
    return basis_superposition({2, 2, 2}, {{1, l / 2}, {2, std::sqrt(3.0) * l / 2}, {4, std::sqrt(1 - l * l)}});
  }
  if (name == "rsp_state") {
    param(name, params, 0);
    ComplexVector one(2), plus(2);
    one << 0, 1;
    plus << 1 / r2, 1 / r2;
    const ComplexMatrix m = 0.5 * kron(projector(one), projector(plus)) + 0.5 * kron(projector(plus), projector(one));
    return make_density({2, 2}, m);
  }
  if (name == "werner") {
    const double p = unit_interval(name, param(name, params, 1));
    ComplexVector s = ComplexVector::Zero(4);
    s(1) = 1 / r2;
    s(2) = -1 / r2;
    return make_density({2, 2}, p * projector(s) + (1 - p) * ComplexMatrix::Identity(4, 4) / 4.0);
  }
  if (name == "classical_diag") {
    param(name, params, 0);
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(0, 0) = 0.5;
    m(3, 3) = 0.5;
    return make_density({2, 2}, m);
  }
  throw InvalidInput("unknown state name '" + std::string(name) + "'");
}

// Random states -----------------------------------------------------------------

namespace {

ComplexVector random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(n);
  for (int k = 0; k < n; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(k) = Complex(re, im);
  }
  return v / v.norm();
}

ComplexMatrix random_density_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(n, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  }
  ComplexMatrix m = g * g.adjoint();
  return m / m.trace().real();
}

}  // namespace

PureState random_pure(const Dims& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return make_pure_normalized(dims, random_vector(total_dim(dims), rng));
}

PureState random_product(const Dims& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ComplexMatrix v = ComplexMatrix::Ones(1, 1);
  for (int d : dims) v = kron(v, random_vector(d, rng));
  return make_pure_normalized(dims, v.col(0));
}

DensityMatrix random_density(const Dims& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return make_density(dims, random_density_matrix(total_dim(dims), rng));
}

DensityMatrix random_classical_quantum(const Dims& dims, std::uint64_t seed) {
  if (dims.size() < 2) throw InvalidInput("random_classical_quantum needs at least two subsystems");
  std::mt19937_64 rng(seed);
  const int da = dims[0];
  const int rest = total_dim(dims) / da;
  const ComplexMatrix basis = random_unitary(da, mix_seed(seed, 1));
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  std::vector<double> w(da);
  double sum = 0;
  for (auto& x : w) sum += (x = unif(rng));
  ComplexMatrix m = ComplexMatrix::Zero(da * rest, da * rest);
  for (int i = 0; i < da; ++i) {
    const ComplexMatrix proj = basis.col(i) * basis.col(i).adjoint();
    m += (w[i] / sum) * kron(proj, random_density_matrix(rest, rng));
  }
  return make_density(dims, m);
}

// Validation --------------------------------------------------------------------

std::string ValidationReport::to_string() const {
  if (violations.empty()) return "ok";
  std::string out;
  for (std::size_t k = 0; k < violations.size(); ++k) {
    if (k) out += "; ";
    out += violations[k].invariant + " (residual " + residual_text(violations[k].residual) + ")";
  }
  return out;
}

namespace {

bool dims_ok(const Dims& dims, ValidationReport& report, int& total) {
  if (dims.empty()) {
    report.violations.push_back({"dims must not be empty", 0.0});
    return false;
  }
  long long n = 1;
  for (int d : dims) {
    if (d < 1) {
      report.violations.push_back({"subsystem dimension must be >= 1", static_cast<double>(d)});
      return false;
    }
    n *= d;
  }
  if (n > kMaxTotalDim) {
    report.violations.push_back({"total dimension exceeds limit", static_cast<double>(n)});
    return false;
  }
  total = static_cast<int>(n);
  return true;
}

}  // namespace

ValidationReport validate(const PureState& psi) {
  ValidationReport report;
  int total = 0;
  if (!dims_ok(psi.dims, report, total)) return report;
  if (psi.amps.size() != total) {
    report.violations.push_back({"amplitude count must equal the product of dims",
                                 static_cast<double>(psi.amps.size() - total)});
    return report;
  }
  if (!all_finite(psi.amps)) {
    report.violations.push_back({"amplitudes must be finite", std::numeric_limits<double>::infinity()});
    return report;
  }
  const double norm_residual = std::abs(psi.amps.squaredNorm() - 1.0);
  if (norm_residual > kStateTol) report.violations.push_back({"normalization", norm_residual});
  return report;
}

ValidationReport validate(const DensityMatrix& rho) {
  ValidationReport report;
  int total = 0;
  if (!dims_ok(rho.dims, report, total)) return report;
  if (rho.mat.rows() != total || rho.mat.cols() != total) {
    report.violations.push_back({"matrix must be square with size equal to the product of dims",
                                 static_cast<double>(rho.mat.rows() * rho.mat.cols() - total * total)});
    return report;
  }
  if (!all_finite(rho.mat)) {
    report.violations.push_back({"entries must be finite", std::numeric_limits<double>::infinity()});
    return report;
  }
  const double herm = hermiticity_defect(rho.mat);
  if (herm > kStateTol) report.violations.push_back({"hermiticity", herm});
  const double tr = std::abs(rho.mat.trace() - Complex(1.0, 0.0));
  if (tr > kStateTol) report.violations.push_back({"unit trace", tr});
  const ComplexMatrix sym = 0.5 * (rho.mat + rho.mat.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -kStateTol) report.violations.push_back({"positive semidefinite", -min_eig});
  return report;
}

ValidationReport validate(const Ensemble& ens) {
  ValidationReport report;
  if (ens.members.empty() || ens.members.size() != ens.probs.size()) {
    report.violations.push_back({"ensemble needs one probability per member", 0.0});
    return report;
  }
  double sum = 0;
  for (double p : ens.probs) {
    if (p < 0) report.violations.push_back({"probabilities must be non-negative", -p});
    sum += p;
  }
  if (std::abs(sum - 1.0) > kStateTol) report.violations.push_back({"probabilities must sum to one", std::abs(sum - 1)});
  for (const auto& m : ens.members) {
    if (m.dims != ens.members.front().dims) {
      report.violations.push_back({"members must share dims", 0.0});
      break;
    }
    const auto sub = validate(m);
    report.violations.insert(report.violations.end(), sub.violations.begin(), sub.violations.end());
  }
  return report;
}

ValidationReport validate(const AnyState& s) {
  return std::visit([](const auto& x) { return validate(x); }, s);
}

}  // namespace superpos
