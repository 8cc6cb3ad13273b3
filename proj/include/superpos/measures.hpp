#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "superpos/linalg.hpp"
#include "superpos/states.hpp"

namespace superpos {

/// How the pairwise superposition of a probability vector is aggregated.
///   RootOfPairSum:  2 * sqrt(sum_{m<n} P_m P_n)
///   SumOfPairRoots: 2 * sum_{m<n} sqrt(P_m P_n)
/// Both give 2 sqrt(P_0 P_1) when at most two outcomes are nonzero.
enum class MeasureVariant { RootOfPairSum, SumOfPairRoots };

std::string_view to_string(MeasureVariant v);
/// Accepts "root"/"sum" and the long names.
MeasureVariant parse_variant(std::string_view s);

/// Defaults: NLS uses RootOfPairSum, LS uses SumOfPairRoots.
inline constexpr MeasureVariant kDefaultNlsVariant = MeasureVariant::RootOfPairSum;
inline constexpr MeasureVariant kDefaultLsVariant = MeasureVariant::SumOfPairRoots;

/// Pair functional over all unordered pairs of distinct outcomes.
double pair_functional(std::span<const double> probs, MeasureVariant variant);

/// One orthonormal basis (as unitary columns) per block of the partition.
struct ProductBasis {
  Partition partition;
  std::vector<ComplexMatrix> unitaries;
};

/// Throws InvalidInput unless every unitary matches its block dimension and is unitary.
void check_product_basis(const ProductBasis& basis, const Dims& dims);

/// P_m = <phi_m| Tr_rest(|psi><psi|) |phi_m> for the columns phi_m of `basis`.
std::vector<double> probs_in_block_basis(const PureState& psi, const Block& block, const ComplexMatrix& basis);

double s_local(const PureState& psi, const Block& block, const ComplexMatrix& basis, MeasureVariant variant);

/// Probabilities of every product-basis element; labels run row-major over the partition's blocks.
std::vector<double> probs_in_product_basis(const PureState& psi, const ProductBasis& basis);

double nls_in_basis(const PureState& psi, const ProductBasis& basis, MeasureVariant variant);

/// Probability-weighted s_local with one basis shared by every member.
double s_local_ensemble(const Ensemble& ens, const Block& block, const ComplexMatrix& basis, MeasureVariant variant);

/// 2 c_1 c_2 from the Schmidt coefficients of a two-qubit state.
double concurrence_pure(const PureState& psi);

/// Spin-flip concurrence max(0, mu_1 - mu_2 - mu_3 - mu_4) of a two-qubit state.
double concurrence_mixed(const DensityMatrix& rho);

/// Smallest eigenvalue of the partial transpose on the second block.
double ppt_min_eigenvalue(const DensityMatrix& rho, const Partition& bipartition);

/// For |psi> = alpha|0'0'> + beta|1'1'> measured on A in the basis
/// {sin(t/2)|0'> + e^{i phi}cos(t/2)|1'>, -e^{-i phi}cos(t/2)|0'> + sin(t/2)|1'>}:
/// P(phi) P(phi_perp) = -(a^2 - b^2)^2 [(sin^2(t/2) - 1/2)^2 - 1/4] + a^2 b^2,
/// minimal (= a^2 b^2) at t = 0 or pi.
/// Throws InvalidInput unless alpha^2 + beta^2 = 1 within 1e-10.
double rotated_probability_product(double alpha, double beta, double theta);

// Fast evaluators for inner loops --------------------------------------------

/// Amplitudes of one state arranged for repeated block-basis evaluations.
class BlockProbe {
 public:
  BlockProbe(const PureState& psi, const Block& block);
  int block_dim() const { return static_cast<int>(amps_.rows()); }
  /// Writes probabilities into `out` (resized to block_dim()).
  void probs(const ComplexMatrix& basis, std::vector<double>& out) const;

 private:
  ComplexMatrix amps_;
};

/// Same for product bases over a fixed partition.
class ProductProbe {
 public:
  ProductProbe(const PureState& psi, const Partition& partition);
  ProductProbe(const ComplexVector& ordered_amps, std::vector<int> block_dims);
  const std::vector<int>& block_dims() const { return block_dims_; }
  void probs(std::span<const ComplexMatrix> unitaries, std::vector<double>& out) const;

 private:
  ComplexVector amps_;
  std::vector<int> block_dims_;
};

}  // namespace superpos
