#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "superpos/linalg.hpp"

namespace superpos {

/// Set of subsystem indices treated as one party.
using Block = std::vector<int>;

/// Disjoint blocks covering all subsystems, e.g. {{0,1},{2}} for AB|C.
struct Partition {
  std::vector<Block> blocks;

  std::size_t size() const { return blocks.size(); }
};

/// Parses "0|1|2", "01|2" or "0,1|2". Digits name zero-based subsystems.
Partition parse_partition(std::string_view spec);
std::string format_partition(const Partition& p);

/// Throws InvalidInput unless `p` is a partition of {0..n_subsystems-1}.
void check_partition(const Partition& p, int n_subsystems);
void check_block(const Block& b, int n_subsystems);

/// The single-subsystem partition 0|1|...|n-1.
Partition finest_partition(int n_subsystems);

/// {block, complement}.
Partition bipartition_of(const Block& block, int n_subsystems);

int block_dim(const Dims& dims, const Block& b);

struct PureState {
  Dims dims;
  ComplexVector amps;
};

struct DensityMatrix {
  Dims dims;
  ComplexMatrix mat;
};

struct Ensemble {
  std::vector<double> probs;
  std::vector<PureState> members;
};

using AnyState = std::variant<PureState, DensityMatrix>;

/// Checked constructors. Amplitudes must be normalized within 1e-10; the first
/// amplitude with modulus above 1e-12 is rotated to be real and non-negative.
PureState make_pure(Dims dims, ComplexVector amps);
/// Normalizes before applying the checks of make_pure.
PureState make_pure_normalized(Dims dims, ComplexVector amps);
DensityMatrix make_density(Dims dims, ComplexMatrix mat);

DensityMatrix to_density(const PureState& psi);
DensityMatrix to_density(const Ensemble& ens);

/// Amplitudes arranged as a (dim(block) x dim(rest)) matrix; rows follow the
/// block's subsystems in ascending order, columns the remaining subsystems.
ComplexMatrix amplitude_matrix(const PureState& psi, const Block& block);

/// psi rearranged so the blocks of `p` are contiguous, in partition order.
ComplexVector amplitudes_in_partition_order(const PureState& psi, const Partition& p);

/// Same rearrangement for a density matrix.
ComplexMatrix density_in_partition_order(const DensityMatrix& rho, const Partition& p);

ComplexMatrix reduced_density(const PureState& psi, const Block& keep);
ComplexMatrix reduced_density(const DensityMatrix& rho, const Block& keep);

struct SchmidtResult {
  RealVector coefficients;  // descending, length min(dA, dB)
  ComplexMatrix left;       // columns |u_k>
  ComplexMatrix right;      // columns |v_k>
};

/// psi = sum_k c_k |u_k>|v_k> across a two-block partition.
SchmidtResult schmidt_decompose(const PureState& psi, const Partition& bipartition);

/// Spectral ensemble {q_j, |e_j>} of rho restricted to eigenvalues above kRankTol.
struct EigenEnsemble {
  Dims dims;
  RealVector weights;     // q_j, descending
  ComplexMatrix vectors;  // columns |e_j>
  int rank() const { return static_cast<int>(weights.size()); }
};

/// Eigenvalues in [-1e-10, 0) are clipped to zero; those at or below kRankTol
/// do not count towards the rank.
inline constexpr double kRankTol = 1e-12;

EigenEnsemble eigen_ensemble(const DensityMatrix& rho);

/// Columns are the unnormalized members sum_j mix(i,j) sqrt(q_j) |e_j>.
ComplexMatrix unnormalized_members(const EigenEnsemble& eig, const ComplexMatrix& mix);

/// Decomposition of rho obtained from an isometry acting on its spectral ensemble.
Ensemble ensemble_from_isometry(const DensityMatrix& rho, const ComplexMatrix& mix);
Ensemble ensemble_from_isometry(const EigenEnsemble& eig, const ComplexMatrix& mix);

// Catalog -------------------------------------------------------------------

/// Names accepted by make_state.
std::vector<std::string> catalog_names();

/// Builds a named state:
///   singlet                  (|01> - |10>)/sqrt2
///   schmidt_qubits(alpha)    alpha|00> + sqrt(1-alpha^2)|11>
///   fig1_state(lambda)       sqrt(2/3)l|00> + sqrt(1/3)l|11> + sqrt(1-l^2)|22>
///   ghz_like(lambda)         l|000> + sqrt(1-l^2)|111>
///   ghz                      ghz_like(1/sqrt2)
///   w_state                  (|100> + |010> + |001>)/sqrt3
///   w_like(lambda)           l/2|001> + sqrt3 l/2|010> + sqrt(1-l^2)|100>
///   rsp_state                1/2|1><1| (x) |+><+| + 1/2|+><+| (x) |1><1|
///   werner(p)                p|singlet><singlet| + (1-p) I/4
///   classical_diag           1/2|00><00| + 1/2|11><11|
AnyState make_state(std::string_view name, const std::vector<double>& params = {});

// Random states used by property tests and sweeps --------------------------

PureState random_pure(const Dims& dims, std::uint64_t seed);
/// Tensor product of independent random pure states, one per subsystem.
PureState random_product(const Dims& dims, std::uint64_t seed);
/// Full-rank random density matrix (Ginibre ensemble).
DensityMatrix random_density(const Dims& dims, std::uint64_t seed);
/// p1 |a1><a1| (x) rho_1 + p2 |a2><a2| (x) rho_2 + ... for a random basis {|a_i>} of subsystem 0.
DensityMatrix random_classical_quantum(const Dims& dims, std::uint64_t seed);

// Validation ----------------------------------------------------------------

struct Violation {
  std::string invariant;
  double residual = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

inline constexpr double kStateTol = 1e-10;

ValidationReport validate(const PureState& psi);
ValidationReport validate(const DensityMatrix& rho);
ValidationReport validate(const Ensemble& ens);
ValidationReport validate(const AnyState& s);

}  // namespace superpos
