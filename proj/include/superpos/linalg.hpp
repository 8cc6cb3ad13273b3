#pragma once

// Dense complex linear algebra used throughout the library.
//
// Composite-system indices are row-major: for subsystem dimensions
// (d_0, ..., d_{n-1}) and digits (i_0, ..., i_{n-1}) the global index is
// sum_k i_k * d_{k+1} * ... * d_{n-1}.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace superpos {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<int>;

/// Largest total Hilbert-space dimension any routine accepts.
inline constexpr int kMaxTotalDim = 64;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-12;

struct SvdResult {
  ComplexMatrix left;
  RealVector singular_values;  // descending
  ComplexMatrix right;         // m = left * diag(s) * right^dagger
};

struct EigResult {
  RealVector values;  // descending
  ComplexMatrix vectors;
};

/// Parameters of an element of U(dim): dim*dim angles laid out as
/// [rotation angles theta (d(d-1)/2) | rotation phases phi (d(d-1)/2) | diagonal phases (d)],
/// planes (i<j) in lexicographic order.
struct UnitaryParams {
  int dim = 0;
  std::vector<double> angles;
};

bool all_finite(const ComplexMatrix& m);

int total_dim(const Dims& dims);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Traces out every subsystem not listed in `keep`. Kept subsystems appear in
/// ascending index order in the result.
ComplexMatrix partial_trace(const ComplexMatrix& rho, const Dims& dims, std::span<const int> keep);

/// Partial transpose of the listed subsystems.
ComplexMatrix partial_transpose(const ComplexMatrix& rho, const Dims& dims, std::span<const int> which);

SvdResult svd(const ComplexMatrix& m);

/// Throws InvalidInput when `m` is not Hermitian within kHermitianTol.
EigResult eig_hermitian(const ComplexMatrix& m);

/// Two-level rotation on plane (i, j): columns i and j become
/// sin(t/2)|i> + e^{i phi} cos(t/2)|j> and -e^{-i phi} cos(t/2)|i> + sin(t/2)|j>.
ComplexMatrix plane_rotation(int dim, int i, int j, double theta, double phi);

/// Product of plane rotations (lexicographic plane order) times a diagonal phase matrix.
ComplexMatrix unitary_from_angles(const UnitaryParams& p);

/// Same chart with the diagonal phases fixed to zero; takes d(d-1) angles.
/// Probabilities in a basis do not depend on the phases of its vectors, so
/// basis searches use this reduced chart.
ComplexMatrix basis_from_angles(int dim, std::span<const double> angles);

inline int basis_param_count(int dim) { return dim * (dim - 1); }

/// Haar-distributed unitary, deterministic in (dim, seed).
ComplexMatrix random_unitary(int dim, std::uint64_t seed);

/// Frobenius norm of U^dagger U - I.
double unitarity_defect(const ComplexMatrix& u);

double hermiticity_defect(const ComplexMatrix& m);

/// Maps the index of a tensor with subsystem dims `dims` after reordering the
/// subsystems as `order` (a permutation of 0..n-1). Result[k] is the original
/// index of the k-th entry in the permuted layout.
std::vector<int> permutation_indices(const Dims& dims, std::span<const int> order);

/// splitmix64 step; used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace superpos
