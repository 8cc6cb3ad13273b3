#pragma once

// Structural certificates for states whose local superposition vanishes.
//
// A state is classical-quantum with respect to a block exactly when it can be
// written sum_i p_i |a_i><a_i| (x) rho_i for an orthonormal basis {|a_i>} of
// the block. When the block's marginal has a non-degenerate spectrum its
// eigenbasis is the only candidate, so checking that rho is block-diagonal in
// that basis decides the question.

#include <optional>
#include <string>
#include <string_view>

#include "superpos/linalg.hpp"
#include "superpos/states.hpp"

namespace superpos {

enum class Verdict { CertifiedZero, CertifiedNonzero, Inconclusive };

std::string_view to_string(Verdict v);

struct CertificationResult {
  Verdict verdict = Verdict::Inconclusive;
  /// Basis exhibiting the zero form (columns), when one was found.
  std::optional<ComplexMatrix> basis;
  /// Off-diagonal residual, commutator norm or Schmidt weight backing the verdict.
  double residual = 0.0;
  std::string reason;
};

inline constexpr double kBlockResidualTol = 1e-8;
inline constexpr double kDegeneracyGap = 1e-8;

/// Classical-quantum test with `side` as the classical block.
CertificationResult cq_certify(const DensityMatrix& rho, const Block& side);

/// Classical (diagonal in a product basis) test for a bipartite state; the
/// witness basis is the tensor product of the two marginal eigenbases.
CertificationResult classical_certify(const DensityMatrix& rho);

}  // namespace superpos
