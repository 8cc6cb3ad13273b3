#pragma once

// Gradient-free minimization over products of unitary groups and decomposition
// isometries.
//
// Every unitary is searched through the chart
//     U = frame * B(x) * B(center)^dagger
// where B is basis_from_angles and `center` is a fixed regular point of the
// chart (all rotation angles pi/2, phases 0). Restart 0 uses the caller's hint
// frames (identity when absent); restart r > 0 draws Haar-random frames from
// (seed, r). Isometries use the chart entry(i,j) = cos(a_ij) e^{i b_ij}
// followed by Gram-Schmidt on the columns.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "superpos/linalg.hpp"

namespace superpos {

struct OptimizerConfig {
  std::uint64_t seed = 42;
  int restarts = 32;
  int max_iters = 2000;  // per Nelder-Mead run
  double tol = 1e-10;
  double simplex_scale = 0.3;
  /// Extra Nelder-Mead runs restarted from the incumbent while they still improve it.
  int polish_rounds = 8;
  /// When > 0, restart 0 starts from the best point of a coarse grid over the unitary charts.
  int grid_resolution = 0;
};

/// Throws InvalidInput when a field is out of range.
void check_config(const OptimizerConfig& cfg);

struct IsometryShape {
  int rows = 0;  // ensemble size
  int cols = 0;  // rank
};

struct SearchDomain {
  std::vector<int> unitary_dims;
  std::optional<IsometryShape> isometry;

  int param_count() const;
};

/// Decoded search point handed to objectives.
struct DomainPoint {
  std::vector<ComplexMatrix> unitaries;
  ComplexMatrix isometry;  // empty when the domain has none
};

/// Optional starting point for restart 0.
struct SearchHint {
  std::vector<ComplexMatrix> frames;     // one per unitary, or empty
  std::optional<ComplexMatrix> isometry;
};

struct OptResult {
  double value = 0.0;
  std::vector<double> params;
  bool converged = false;
  long long evaluations = 0;
  int restart = 0;    // restart that produced the best value
  DomainPoint point;  // params decoded with that restart's frames
};

using VectorObjective = std::function<double(std::span<const double>)>;
using DomainObjective = std::function<double(const DomainPoint&)>;

/// Adaptive Nelder-Mead from x0 with initial steps cfg.simplex_scale.
/// Converged when simplex diameter and objective spread both fall below cfg.tol.
/// Throws NumericalError if the objective returns a non-finite value.
OptResult nelder_mead(const VectorObjective& f, std::span<const double> x0, const OptimizerConfig& cfg);

/// Best of cfg.restarts independent local searches (each followed by polish
/// rounds). Ties go to the lowest restart index; the result does not depend on
/// the order in which restarts execute.
OptResult minimize_over_domain(const DomainObjective& f, const SearchDomain& domain, const OptimizerConfig& cfg,
                               const SearchHint& hint = {});

/// Maps raw chart parameters (no frames) to a point: unitaries via
/// basis_from_angles, the isometry via the Gram-Schmidt chart.
DomainPoint decode_raw(const SearchDomain& domain, std::span<const double> params);

/// Gram-Schmidt chart for a rows x cols isometry from 2*rows*cols angles.
ComplexMatrix isometry_from_angles(int rows, int cols, std::span<const double> angles);

inline constexpr long long kDefaultGridCap = 1'000'000;

/// Evaluates the raw chart on a regular grid (rotation angles over [0, pi]
/// including both ends, phases over [0, 2 pi)) and returns the parameters with
/// the smallest objective, lowest grid index on ties.
std::vector<double> grid_seed(const SearchDomain& domain, int resolution, const DomainObjective& f,
                              long long cap = kDefaultGridCap);

}  // namespace superpos
