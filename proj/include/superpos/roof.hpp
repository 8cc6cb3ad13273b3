#pragma once

// Local (LS) and nonlocal (NLS) superposition of pure and mixed states.
//
// Pure-state values minimize the basis-specific functionals of measures.hpp
// over block bases; mixed-state values additionally minimize over
// decompositions {p_i, |psi_i>} reached through isometries acting on the
// spectral ensemble. All optimized values are upper bounds on the true minima.

#include <optional>
#include <string>
#include <variant>

#include "superpos/measures.hpp"
#include "superpos/optimizer.hpp"
#include "superpos/states.hpp"

namespace superpos {

struct LsBlock {
  Block block;
};
/// Average of per-block LS over the blocks of `partition` (finest partition when empty).
struct LsSymmetric {
  Partition partition;
};
struct Nls {
  Partition partition;
};
using MeasureKind = std::variant<LsBlock, LsSymmetric, Nls>;

std::string describe(const MeasureKind& kind);

struct MeasureRequest {
  AnyState target;
  MeasureKind kind;
  MeasureVariant variant = kDefaultLsVariant;
  OptimizerConfig cfg;
};

struct MeasureReport {
  double value = 0.0;
  /// Optimal bases (one per searched block) and, for mixed states, the isometry.
  DomainPoint witness;
  /// Decomposition realizing `value` (mixed states only).
  std::optional<Ensemble> ensemble;
  /// Per-member product bases for mixed NLS.
  std::vector<ProductBasis> member_bases;
  bool converged = false;
  MeasureVariant variant = kDefaultLsVariant;
  std::optional<double> closed_form;
  bool upper_bound = false;  // mixed-state estimates
  long long evaluations = 0;
};

struct RoofOptions {
  int rank_cap = 4;
  /// Ensemble size for decomposition searches; 0 selects rank(rho). At most rank^2.
  int ensemble_size = 0;
};

MeasureReport ls_block_pure(const PureState& psi, const Block& block, MeasureVariant variant,
                            const OptimizerConfig& cfg);

MeasureReport ls_symmetric_pure(const PureState& psi, const Partition& partition, MeasureVariant variant,
                                const OptimizerConfig& cfg);
MeasureReport ls_symmetric_pure(const PureState& psi, MeasureVariant variant, const OptimizerConfig& cfg);

MeasureReport nls_pure(const PureState& psi, const Partition& partition, MeasureVariant variant,
                       const OptimizerConfig& cfg);

/// Shared-basis convex roof of LS (one basis per block for all members).
MeasureReport ls_mixed_estimate(const DensityMatrix& rho, const MeasureKind& kind, MeasureVariant variant,
                                const OptimizerConfig& cfg, const RoofOptions& opts = {});

/// Convex roof of pure NLS; every member is measured in its own optimal product basis.
MeasureReport nls_mixed_estimate(const DensityMatrix& rho, const Partition& partition, const OptimizerConfig& cfg,
                                 MeasureVariant variant = kDefaultNlsVariant, const RoofOptions& opts = {});

/// Dispatches on the target (pure or mixed) and the kind.
MeasureReport measure(const MeasureRequest& req, const RoofOptions& opts = {});

/// Schmidt-coefficient expressions for LS of a pure state across block|rest:
/// root_form = 2 (sum_{i<j} c_i^2 c_j^2)^{1/2}, sum_form = 2 sum_{i<j} c_i c_j.
/// For a two-level block both equal 2 c_0 c_1.
struct LsClosedForm {
  double root_form = 0.0;
  double sum_form = 0.0;
  bool two_level = false;
  double for_variant(MeasureVariant v) const {
    return v == MeasureVariant::RootOfPairSum ? root_form : sum_form;
  }
};

LsClosedForm ls_closed_form_pure(const PureState& psi, const Block& block);

/// Root-variant NLS of a pure state across a two-block partition, from its
/// Schmidt coefficients: no product basis has sum P^2 above sum c^4, and the
/// Schmidt basis attains it.
double nls_bipartite_exact(const PureState& psi, const Partition& bipartition);

}  // namespace superpos
