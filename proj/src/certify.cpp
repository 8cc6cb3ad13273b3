#include "superpos/certify.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "superpos/error.hpp"

namespace superpos {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::CertifiedZero:
      return "CERTIFIED_ZERO";
    case Verdict::CertifiedNonzero:
      return "CERTIFIED_NONZERO";
    case Verdict::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

namespace {

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

double min_gap(const RealVector& values) {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 1; k < values.size(); ++k) gap = std::min(gap, values(k - 1) - values(k));
  return gap;
}

// Norm of the blocks (i, j), i != j, of a (ds*dr)-square matrix viewed as ds x ds blocks.
double off_block_norm(const ComplexMatrix& m, int ds, int dr) {
  double acc = 0.0;
  for (int i = 0; i < ds; ++i) {
    for (int j = 0; j < ds; ++j) {
      if (i != j) acc += m.block(i * dr, j * dr, dr, dr).squaredNorm();
    }
  }
  return std::sqrt(acc);
}

// Fixed, generic coefficients; any choice avoiding accidental degeneracy works.
constexpr std::array<double, 7> kCombination{0.8147, -0.9058, 0.1270, 0.9134, -0.6324, 0.0975, 0.2785};

// Tr_rest[rho (I (x) X)] for X running over a Hermitian basis of the rest.
std::vector<ComplexMatrix> conditional_operators(const ComplexMatrix& rho, int ds, int dr) {
  std::vector<ComplexMatrix> out;
  const double h = 1.0 / std::sqrt(2.0);
  auto apply = [&](const ComplexMatrix& x) {
    ComplexMatrix m = ComplexMatrix::Zero(ds, ds);
    for (int a = 0; a < ds; ++a) {
      for (int c = 0; c < ds; ++c) m(a, c) = (rho.block(a * dr, c * dr, dr, dr) * x).trace();
    }
    out.push_back(m);
  };
  for (int k = 0; k < dr; ++k) {
    ComplexMatrix x = ComplexMatrix::Zero(dr, dr);
    x(k, k) = 1;
    apply(x);
    for (int l = k + 1; l < dr; ++l) {
      ComplexMatrix re = ComplexMatrix::Zero(dr, dr);
      re(k, l) = re(l, k) = h;
      apply(re);
      ComplexMatrix im = ComplexMatrix::Zero(dr, dr);
      im(k, l) = Complex(0, -h);
      im(l, k) = Complex(0, h);
      apply(im);
    }
  }
  return out;
}

}  // namespace

CertificationResult cq_certify(const DensityMatrix& rho, const Block& side) {
  const int n = static_cast<int>(rho.dims.size());
  const Partition cut = bipartition_of(side, n);  // throws on an invalid or full block
  const int ds = block_dim(rho.dims, cut.blocks[0]);
  const int dr = block_dim(rho.dims, cut.blocks[1]);
  const ComplexMatrix ordered = density_in_partition_order(rho, cut);

  const ComplexMatrix marginal = partial_trace(rho.mat, rho.dims, cut.blocks[0]);
  const auto eig = eig_hermitian(0.5 * (marginal + marginal.adjoint()));

  CertificationResult out;
  if (min_gap(eig.values) >= kDegeneracyGap) {
    const ComplexMatrix frame = kron(eig.vectors, ComplexMatrix::Identity(dr, dr));
    const ComplexMatrix rotated = frame.adjoint() * ordered * frame;
    out.residual = off_block_norm(rotated, ds, dr);
    if (out.residual <= kBlockResidualTol) {
      out.verdict = Verdict::CertifiedZero;
      out.basis = eig.vectors;
      out.reason = "block-diagonal in the marginal eigenbasis";
    } else {
      out.verdict = Verdict::CertifiedNonzero;
      out.reason = "off-diagonal blocks in the unique marginal eigenbasis (norm " + fmt_double(out.residual) + ")";
    }
    return out;
  }

  // Degenerate marginal: the eigenbasis is not unique. The state is CQ exactly
  // when the operators Tr_rest[rho (I (x) X)] commute for every X on the rest;
  // a generic combination of them then fixes a valid basis.
  const auto family = conditional_operators(ordered, ds, dr);
  ComplexMatrix combo = ComplexMatrix::Zero(ds, ds);
  for (std::size_t k = 0; k < family.size(); ++k) combo += kCombination[k % kCombination.size()] * family[k];
  const auto joint = eig_hermitian(0.5 * (combo + combo.adjoint()));
  const ComplexMatrix frame = kron(joint.vectors, ComplexMatrix::Identity(dr, dr));
  const double residual = off_block_norm(frame.adjoint() * ordered * frame, ds, dr);
  if (residual <= kBlockResidualTol) {
    out.verdict = Verdict::CertifiedZero;
    out.basis = joint.vectors;
    out.residual = residual;
    out.reason = "block-diagonal in a joint eigenbasis of the conditional operators";
    return out;
  }
  double comm = 0.0;
  for (std::size_t j = 0; j < family.size(); ++j) {
    for (std::size_t k = j + 1; k < family.size(); ++k) {
      comm = std::max(comm, (family[j] * family[k] - family[k] * family[j]).norm());
    }
  }
  if (comm > kBlockResidualTol) {
    out.verdict = Verdict::CertifiedNonzero;
    out.residual = comm;
    out.reason = "conditional operators do not commute (norm " + fmt_double(comm) + ")";
    return out;
  }
  out.verdict = Verdict::Inconclusive;
  out.residual = residual;
  out.reason = "degenerate marginal spectrum (gap " + fmt_double(min_gap(eig.values)) + ")";
  return out;
}

CertificationResult classical_certify(const DensityMatrix& rho) {
  if (rho.dims.size() != 2) throw InvalidInput("classical_certify requires a bipartite state");
  const auto a = cq_certify(rho, {0});
  const auto b = cq_certify(rho, {1});
  CertificationResult out;
  if (a.verdict == Verdict::CertifiedNonzero || b.verdict == Verdict::CertifiedNonzero) {
    const auto& bad = a.verdict == Verdict::CertifiedNonzero ? a : b;
    out.verdict = Verdict::CertifiedNonzero;
    out.residual = bad.residual;
    out.reason = std::string(a.verdict == Verdict::CertifiedNonzero ? "side A: " : "side B: ") + bad.reason;
    return out;
  }
  if (a.verdict == Verdict::Inconclusive || b.verdict == Verdict::Inconclusive) {
    out.verdict = Verdict::Inconclusive;
    out.residual = a.verdict == Verdict::Inconclusive ? a.residual : b.residual;
    out.reason = a.verdict == Verdict::Inconclusive ? "side A: " + a.reason : "side B: " + b.reason;
    return out;
  }
  const ComplexMatrix frame = kron(*a.basis, *b.basis);
  const ComplexMatrix rotated = frame.adjoint() * rho.mat * frame;
  const ComplexMatrix off = rotated - ComplexMatrix(rotated.diagonal().asDiagonal());
  out.residual = off.norm();
  if (out.residual <= kBlockResidualTol) {
    out.verdict = Verdict::CertifiedZero;
    out.basis = frame;
    out.reason = "diagonal in the product of marginal eigenbases";
  } else {
    out.verdict = Verdict::CertifiedNonzero;
    out.reason = "not diagonal in the product of marginal eigenbases (norm " + fmt_double(out.residual) + ")";
  }
  return out;
}

}  // namespace superpos
