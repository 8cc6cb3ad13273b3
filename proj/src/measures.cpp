#include "superpos/measures.hpp"

#include <algorithm>
#include <cmath>

#include "superpos/error.hpp"

namespace superpos {

std::string_view to_string(MeasureVariant v) {
  return v == MeasureVariant::RootOfPairSum ? "root" : "sum";
}

MeasureVariant parse_variant(std::string_view s) {
  if (s == "root" || s == "ROOT_OF_PAIRSUM" || s == "root_of_pairsum") return MeasureVariant::RootOfPairSum;
  if (s == "sum" || s == "SUM_OF_PAIRROOTS" || s == "sum_of_pairroots") return MeasureVariant::SumOfPairRoots;
  throw InvalidInput("unknown measure variant '" + std::string(s) + "' (expected root or sum)");
}

double pair_functional(std::span<const double> probs, MeasureVariant variant) {
  // suffix sums avoid the cancellation in ((sum P)^2 - sum P^2) / 2 near pure distributions
  double acc = 0.0;
  double tail = 0.0;
  if (variant == MeasureVariant::RootOfPairSum) {
    for (std::size_t k = probs.size(); k-- > 0;) {
      const double p = std::max(probs[k], 0.0);
      acc += p * tail;
      tail += p;
    }
    return 2.0 * std::sqrt(acc);
  }
  for (std::size_t k = probs.size(); k-- > 0;) {
    const double r = std::sqrt(std::max(probs[k], 0.0));
    acc += r * tail;
    tail += r;
  }
  return 2.0 * acc;
}

void check_product_basis(const ProductBasis& basis, const Dims& dims) {
  check_partition(basis.partition, static_cast<int>(dims.size()));
  if (basis.unitaries.size() != basis.partition.size()) {
    throw InvalidInput("product basis needs one unitary per block");
  }
  for (std::size_t b = 0; b < basis.unitaries.size(); ++b) {
    const int d = block_dim(dims, basis.partition.blocks[b]);
    const auto& u = basis.unitaries[b];
    if (u.rows() != d || u.cols() != d) throw InvalidInput("product basis unitary has the wrong dimension");
    if (unitarity_defect(u) > 1e-10) throw InvalidInput("product basis matrix is not unitary");
  }
}

BlockProbe::BlockProbe(const PureState& psi, const Block& block) : amps_(amplitude_matrix(psi, block)) {}

void BlockProbe::probs(const ComplexMatrix& basis, std::vector<double>& out) const {
  const Eigen::Index d = amps_.rows();
  out.assign(d, 0.0);
  for (Eigen::Index m = 0; m < d; ++m) {
    // <phi_m| applied to the block index of every column
    for (Eigen::Index c = 0; c < amps_.cols(); ++c) {
      const Complex a = basis.col(m).dot(amps_.col(c));
      out[m] += std::norm(a);
    }
  }
}

std::vector<double> probs_in_block_basis(const PureState& psi, const Block& block, const ComplexMatrix& basis) {
  check_block(block, static_cast<int>(psi.dims.size()));
  const int d = block_dim(psi.dims, block);
  if (basis.rows() != d || basis.cols() != d) {
    throw InvalidInput("basis dimension " + std::to_string(basis.rows()) + " does not match block dimension " +
                       std::to_string(d));
  }
  if (unitarity_defect(basis) > 1e-10) throw InvalidInput("basis matrix is not unitary");
  std::vector<double> out;
  BlockProbe(psi, block).probs(basis, out);
  return out;
}

double s_local(const PureState& psi, const Block& block, const ComplexMatrix& basis, MeasureVariant variant) {
  const auto p = probs_in_block_basis(psi, block, basis);
  return pair_functional(p, variant);
}

ProductProbe::ProductProbe(const PureState& psi, const Partition& partition)
    : amps_(amplitudes_in_partition_order(psi, partition)) {
  for (const auto& b : partition.blocks) block_dims_.push_back(block_dim(psi.dims, b));
}

ProductProbe::ProductProbe(const ComplexVector& ordered_amps, std::vector<int> block_dims)
    : amps_(ordered_amps), block_dims_(std::move(block_dims)) {}

void ProductProbe::probs(std::span<const ComplexMatrix> unitaries, std::vector<double>& out) const {
  ComplexVector cur = amps_;
  ComplexVector next(cur.size());
  const Eigen::Index total = cur.size();
  Eigen::Index left = 1;
  for (std::size_t b = 0; b < block_dims_.size(); ++b) {
    const Eigen::Index d = block_dims_[b];
    const Eigen::Index right = total / (left * d);
    const auto& u = unitaries[b];
    for (Eigen::Index l = 0; l < left; ++l) {
      for (Eigen::Index m = 0; m < d; ++m) {
        for (Eigen::Index r = 0; r < right; ++r) {
          Complex acc = 0.0;
          for (Eigen::Index k = 0; k < d; ++k) acc += std::conj(u(k, m)) * cur((l * d + k) * right + r);
          next((l * d + m) * right + r) = acc;
        }
      }
    }
    cur.swap(next);
    left *= d;
  }
  out.resize(total);
  for (Eigen::Index k = 0; k < total; ++k) out[k] = std::norm(cur(k));
}

std::vector<double> probs_in_product_basis(const PureState& psi, const ProductBasis& basis) {
  check_product_basis(basis, psi.dims);
  std::vector<double> out;
  ProductProbe(psi, basis.partition).probs(basis.unitaries, out);
  return out;
}

double nls_in_basis(const PureState& psi, const ProductBasis& basis, MeasureVariant variant) {
  return pair_functional(probs_in_product_basis(psi, basis), variant);
}

double s_local_ensemble(const Ensemble& ens, const Block& block, const ComplexMatrix& basis, MeasureVariant variant) {
  if (ens.members.empty() || ens.members.size() != ens.probs.size()) {
    throw InvalidInput("ensemble needs one probability per member");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < ens.members.size(); ++i) {
    if (ens.members[i].dims != ens.members.front().dims) throw InvalidInput("ensemble members have mismatched dims");
    if (ens.probs[i] == 0.0) continue;
    total += ens.probs[i] * s_local(ens.members[i], block, basis, variant);
  }
  return total;
}

namespace {

void require_two_qubits(const Dims& dims, const char* what) {
  if (dims != Dims{2, 2}) throw InvalidInput(std::string(what) + " requires dims [2,2]");
}

}  // namespace

double concurrence_pure(const PureState& psi) {
  require_two_qubits(psi.dims, "concurrence_pure");
  const auto s = schmidt_decompose(psi, Partition{{{0}, {1}}});
  return 2.0 * s.coefficients(0) * s.coefficients(1);
}

double concurrence_mixed(const DensityMatrix& rho) {
  require_two_qubits(rho.dims, "concurrence_mixed");
  ComplexMatrix yy = ComplexMatrix::Zero(4, 4);
  yy(0, 3) = -1;
  yy(1, 2) = 1;
  yy(2, 1) = 1;
  yy(3, 0) = -1;
  // With rho = sum_i w_i w_i^dagger (w_i = sqrt(lambda_i) v_i), the mu are the
  // singular values of tau_ij = w_i^T (sy x sy) w_j. Avoids square roots of
  // eigenvalues that are zero up to rounding.
  const auto eig = eig_hermitian(0.5 * (rho.mat + rho.mat.adjoint()));
  int r = 0;
  while (r < 4 && eig.values(r) > kRankTol) ++r;
  ComplexMatrix w(4, r);
  for (int k = 0; k < r; ++k) w.col(k) = std::sqrt(eig.values(k)) * eig.vectors.col(k);
  const ComplexMatrix tau = w.transpose() * yy * w;
  const RealVector s = Eigen::JacobiSVD<ComplexMatrix>(tau).singularValues();
  std::array<double, 4> mu{};
  for (Eigen::Index k = 0; k < s.size(); ++k) mu[k] = s(k);
  return std::max(0.0, mu[0] - mu[1] - mu[2] - mu[3]);
}

double ppt_min_eigenvalue(const DensityMatrix& rho, const Partition& bipartition) {
  if (bipartition.size() != 2) throw InvalidInput("ppt_min_eigenvalue needs a partition with exactly two blocks");
  check_partition(bipartition, static_cast<int>(rho.dims.size()));
  const ComplexMatrix pt = partial_transpose(rho.mat, rho.dims, bipartition.blocks[1]);
  return eig_hermitian(0.5 * (pt + pt.adjoint())).values.minCoeff();
}

double rotated_probability_product(double alpha, double beta, double theta) {
  const double a2 = alpha * alpha;
  const double b2 = beta * beta;
  if (std::abs(a2 + b2 - 1.0) > 1e-10) throw InvalidInput("alpha^2 + beta^2 must equal 1");
  const double s2 = std::sin(theta / 2) * std::sin(theta / 2);
  const double diff = a2 - b2;
  return -diff * diff * ((s2 - 0.5) * (s2 - 0.5) - 0.25) + a2 * b2;
}

}  // namespace superpos
