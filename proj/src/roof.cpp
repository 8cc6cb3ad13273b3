#include "superpos/roof.hpp"

#include <algorithm>
#include <cmath>

#include "superpos/error.hpp"

namespace superpos {

std::string describe(const MeasureKind& kind) {
  struct {
    std::string operator()(const LsBlock& k) const {
      std::string s = "LS[";
      for (std::size_t i = 0; i < k.block.size(); ++i) s += (i ? "," : "") + std::to_string(k.block[i]);
      return s + "]";
    }
    std::string operator()(const LsSymmetric& k) const {
      return k.partition.blocks.empty() ? "LS" : "LS[" + format_partition(k.partition) + "]";
    }
    std::string operator()(const Nls& k) const { return "NLS[" + format_partition(k.partition) + "]"; }
  } visitor;
  return std::visit(visitor, kind);
}

namespace {

// Gathers a state vector into a (rows x cols) matrix whose rows follow `order`'s leading subsystems.
struct Reshaper {
  std::vector<int> perm;
  int rows = 0;
  int cols = 0;

  Reshaper(const Dims& dims, const Block& block) {
    const int n = static_cast<int>(dims.size());
    check_block(block, n);
    Block first = block;
    std::sort(first.begin(), first.end());
    std::vector<int> order = first;
    for (int k = 0; k < n; ++k) {
      if (!std::binary_search(first.begin(), first.end(), k)) order.push_back(k);
    }
    perm = permutation_indices(dims, order);
    rows = block_dim(dims, first);
    cols = static_cast<int>(perm.size()) / rows;
  }

  Reshaper(const Dims& dims, const Partition& bipartition) {
    std::vector<int> order = bipartition.blocks[0];
    order.insert(order.end(), bipartition.blocks[1].begin(), bipartition.blocks[1].end());
    perm = permutation_indices(dims, order);
    rows = block_dim(dims, bipartition.blocks[0]);
    cols = static_cast<int>(perm.size()) / rows;
  }

  template <typename Vec>
  void apply(const Vec& v, double scale, ComplexMatrix& out) const {
    out.resize(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) out(r, c) = scale * v(perm[r * cols + c]);
    }
  }
};

void block_probs(const ComplexMatrix& basis, const ComplexMatrix& m, std::vector<double>& out) {
  out.assign(m.rows(), 0.0);
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out[k] += std::norm(basis.col(k).dot(m.col(c)));
  }
}

double root_form_from_singular_values(const RealVector& s) {
  std::vector<double> p(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k) p[k] = s(k) * s(k);
  return pair_functional(p, MeasureVariant::RootOfPairSum);
}

void require_pure_for(const PureState& psi) {
  const auto report = validate(psi);
  if (!report.ok()) throw InvalidInput("invalid pure state: " + report.to_string());
}

}  // namespace

LsClosedForm ls_closed_form_pure(const PureState& psi, const Block& block) {
  require_pure_for(psi);
  const Partition cut = bipartition_of(block, static_cast<int>(psi.dims.size()));
  const auto schmidt = schmidt_decompose(psi, cut);
  const RealVector& c = schmidt.coefficients;
  std::vector<double> p2(c.size());
  for (Eigen::Index k = 0; k < c.size(); ++k) p2[k] = c(k) * c(k);
  LsClosedForm out;
  out.root_form = pair_functional(p2, MeasureVariant::RootOfPairSum);
  out.sum_form = pair_functional(p2, MeasureVariant::SumOfPairRoots);
  out.two_level = block_dim(psi.dims, cut.blocks[0]) == 2;
  return out;
}

double nls_bipartite_exact(const PureState& psi, const Partition& bipartition) {
  if (bipartition.size() != 2) throw InvalidInput("nls_bipartite_exact needs a two-block partition");
  check_partition(bipartition, static_cast<int>(psi.dims.size()));
  return root_form_from_singular_values(schmidt_decompose(psi, bipartition).coefficients);
}

MeasureReport ls_block_pure(const PureState& psi, const Block& block, MeasureVariant variant,
                            const OptimizerConfig& cfg) {
  require_pure_for(psi);
  const BlockProbe probe(psi, block);
  const SearchDomain domain{{probe.block_dim()}, std::nullopt};
  const DomainObjective f = [&probe, variant](const DomainPoint& x) {
    std::vector<double> buf;
    probe.probs(x.unitaries[0], buf);
    return pair_functional(buf, variant);
  };
  const OptResult r = minimize_over_domain(f, domain, cfg);
  MeasureReport out;
  out.value = r.value;
  out.witness = r.point;
  out.converged = r.converged;
  out.variant = variant;
  out.evaluations = r.evaluations;
  out.closed_form = ls_closed_form_pure(psi, block).for_variant(variant);
  return out;
}

MeasureReport ls_symmetric_pure(const PureState& psi, const Partition& partition, MeasureVariant variant,
                                const OptimizerConfig& cfg) {
  require_pure_for(psi);
  const int n = static_cast<int>(psi.dims.size());
  const Partition parts = partition.blocks.empty() ? finest_partition(n) : partition;
  check_partition(parts, n);
  if (parts.size() < 2) throw InvalidInput("symmetric LS needs at least two blocks");
  std::vector<BlockProbe> probes;
  SearchDomain domain;
  for (const auto& b : parts.blocks) {
    probes.emplace_back(psi, b);
    domain.unitary_dims.push_back(probes.back().block_dim());
  }
  const double inv = 1.0 / static_cast<double>(parts.size());
  const DomainObjective f = [&probes, variant, inv](const DomainPoint& x) {
    std::vector<double> buf;
    double acc = 0.0;
    for (std::size_t b = 0; b < probes.size(); ++b) {
      probes[b].probs(x.unitaries[b], buf);
      acc += pair_functional(buf, variant);
    }
    return acc * inv;
  };
  const OptResult r = minimize_over_domain(f, domain, cfg);
  MeasureReport out;
  out.value = r.value;
  out.witness = r.point;
  out.converged = r.converged;
  out.variant = variant;
  out.evaluations = r.evaluations;
  double closed = 0.0;
  for (const auto& b : parts.blocks) closed += ls_closed_form_pure(psi, b).for_variant(variant);
  out.closed_form = closed * inv;
  return out;
}

MeasureReport ls_symmetric_pure(const PureState& psi, MeasureVariant variant, const OptimizerConfig& cfg) {
  return ls_symmetric_pure(psi, Partition{}, variant, cfg);
}

MeasureReport nls_pure(const PureState& psi, const Partition& partition, MeasureVariant variant,
                       const OptimizerConfig& cfg) {
  require_pure_for(psi);
  check_partition(partition, static_cast<int>(psi.dims.size()));
  const ProductProbe probe(psi, partition);
  const SearchDomain domain{probe.block_dims(), std::nullopt};
  const DomainObjective f = [&probe, variant](const DomainPoint& x) {
    std::vector<double> buf;
    probe.probs(x.unitaries, buf);
    return pair_functional(buf, variant);
  };
  const OptResult r = minimize_over_domain(f, domain, cfg);
  MeasureReport out;
  out.value = r.value;
  out.witness = r.point;
  out.converged = r.converged;
  out.variant = variant;
  out.evaluations = r.evaluations;
  if (partition.size() == 2 && variant == MeasureVariant::RootOfPairSum) {
    out.closed_form = nls_bipartite_exact(psi, partition);
  } else if (partition.size() == 1) {
    out.closed_form = 0.0;
  }
  return out;
}

namespace {

struct MixedSetup {
  EigenEnsemble eig;
  int ensemble_size = 0;
};

MixedSetup prepare_mixed(const DensityMatrix& rho, const RoofOptions& opts) {
  const auto report = validate(rho);
  if (!report.ok()) throw InvalidInput("invalid density matrix: " + report.to_string());
  MixedSetup s{eigen_ensemble(rho), 0};
  const int r = s.eig.rank();
  if (r > opts.rank_cap) {
    throw InvalidInput("rank " + std::to_string(r) + " exceeds the decomposition rank cap of " +
                       std::to_string(opts.rank_cap));
  }
  s.ensemble_size = opts.ensemble_size == 0 ? r : opts.ensemble_size;
  if (s.ensemble_size < r || s.ensemble_size > r * r) {
    throw InvalidInput("ensemble size must lie between rank and rank^2 (" + std::to_string(r) + ".." +
                       std::to_string(r * r) + ")");
  }
  return s;
}

ComplexMatrix identity_isometry(int rows, int cols) {
  ComplexMatrix m = ComplexMatrix::Zero(rows, cols);
  for (int k = 0; k < cols; ++k) m(k, k) = 1.0;
  return m;
}

}  // namespace

MeasureReport ls_mixed_estimate(const DensityMatrix& rho, const MeasureKind& kind, MeasureVariant variant,
                                const OptimizerConfig& cfg, const RoofOptions& opts) {
  const MixedSetup setup = prepare_mixed(rho, opts);
  const int n = static_cast<int>(rho.dims.size());
  std::vector<Block> blocks;
  if (const auto* b = std::get_if<LsBlock>(&kind)) {
    check_block(b->block, n);
    blocks.push_back(b->block);
  } else if (const auto* s = std::get_if<LsSymmetric>(&kind)) {
    const Partition parts = s->partition.blocks.empty() ? finest_partition(n) : s->partition;
    check_partition(parts, n);
    if (parts.size() < 2) throw InvalidInput("symmetric LS needs at least two blocks");
    blocks = parts.blocks;
  } else {
    throw InvalidInput("ls_mixed_estimate expects an LS kind");
  }

  std::vector<Reshaper> shapes;
  SearchDomain domain;
  SearchHint hint;
  for (const auto& b : blocks) {
    shapes.emplace_back(rho.dims, b);
    domain.unitary_dims.push_back(shapes.back().rows);
    // the marginal eigenbasis is the only basis that can reach zero when the spectrum is simple
    hint.frames.push_back(eig_hermitian(reduced_density(rho, b)).vectors);
  }
  const int r = setup.eig.rank();
  domain.isometry = IsometryShape{setup.ensemble_size, r};
  hint.isometry = identity_isometry(setup.ensemble_size, r);

  const double inv = 1.0 / static_cast<double>(blocks.size());
  const EigenEnsemble& eig = setup.eig;
  const DomainObjective f = [&](const DomainPoint& x) {
    std::vector<double> buf;
    ComplexMatrix m;
    const ComplexMatrix members = unnormalized_members(eig, x.isometry);
    double total = 0.0;
    for (Eigen::Index i = 0; i < members.cols(); ++i) {
      const double p = members.col(i).squaredNorm();
      if (p <= 0.0) continue;
      const double scale = 1.0 / std::sqrt(p);
      double acc = 0.0;
      for (std::size_t b = 0; b < shapes.size(); ++b) {
        shapes[b].apply(members.col(i), scale, m);
        block_probs(x.unitaries[b], m, buf);
        acc += pair_functional(buf, variant);
      }
      total += p * acc * inv;
    }
    return total;
  };
  const OptResult res = minimize_over_domain(f, domain, cfg, hint);
  MeasureReport out;
  out.value = res.value;
  out.witness = res.point;
  out.ensemble = ensemble_from_isometry(eig, res.point.isometry);
  out.converged = res.converged;
  out.variant = variant;
  out.upper_bound = true;
  out.evaluations = res.evaluations;
  return out;
}

MeasureReport nls_mixed_estimate(const DensityMatrix& rho, const Partition& partition, const OptimizerConfig& cfg,
                                 MeasureVariant variant, const RoofOptions& opts) {
  const MixedSetup setup = prepare_mixed(rho, opts);
  check_partition(partition, static_cast<int>(rho.dims.size()));
  const EigenEnsemble& eig = setup.eig;
  const int r = eig.rank();
  const SearchDomain domain{{}, IsometryShape{setup.ensemble_size, r}};
  SearchHint hint;
  hint.isometry = identity_isometry(setup.ensemble_size, r);

  // Inner minimization per member: exact for two blocks with the root variant,
  // a nested numerical search otherwise.
  const bool exact_inner = partition.size() == 2 && variant == MeasureVariant::RootOfPairSum;
  OptimizerConfig inner = cfg;
  inner.restarts = std::max(1, std::min(cfg.restarts, 4));
  inner.polish_rounds = std::min(cfg.polish_rounds, 2);

  std::optional<Reshaper> cut;
  if (exact_inner) cut.emplace(rho.dims, partition);
  auto member_value = [&](const ComplexVector& v, double scale, ComplexMatrix& m) {
    if (exact_inner) {
      cut->apply(v, scale, m);
      Eigen::JacobiSVD<ComplexMatrix> solver(m);
      return root_form_from_singular_values(solver.singularValues());
    }
    const PureState member{rho.dims, v * scale};
    return nls_pure(member, partition, variant, inner).value;
  };

  const DomainObjective f = [&](const DomainPoint& x) {
    ComplexMatrix m;
    const ComplexMatrix members = unnormalized_members(eig, x.isometry);
    double total = 0.0;
    for (Eigen::Index i = 0; i < members.cols(); ++i) {
      const double p = members.col(i).squaredNorm();
      if (p <= 0.0) continue;
      total += p * member_value(members.col(i), 1.0 / std::sqrt(p), m);
    }
    return total;
  };
  const OptResult res = minimize_over_domain(f, domain, cfg, hint);

  MeasureReport out;
  out.value = res.value;
  out.witness = res.point;
  out.ensemble = ensemble_from_isometry(eig, res.point.isometry);
  out.converged = res.converged;
  out.variant = variant;
  out.upper_bound = true;
  out.evaluations = res.evaluations;
  // Product bases realizing each member's value.
  for (std::size_t i = 0; i < out.ensemble->members.size(); ++i) {
    const PureState& member = out.ensemble->members[i];
    if (exact_inner) {
      const auto s = schmidt_decompose(member, partition);
      out.member_bases.push_back({partition, {s.left, s.right}});
    } else {
      const auto rep = nls_pure(member, partition, variant, inner);
      out.member_bases.push_back({partition, rep.witness.unitaries});
    }
  }
  return out;
}

MeasureReport measure(const MeasureRequest& req, const RoofOptions& opts) {
  if (const auto* psi = std::get_if<PureState>(&req.target)) {
    if (const auto* b = std::get_if<LsBlock>(&req.kind)) return ls_block_pure(*psi, b->block, req.variant, req.cfg);
    if (const auto* s = std::get_if<LsSymmetric>(&req.kind)) {
      return ls_symmetric_pure(*psi, s->partition, req.variant, req.cfg);
    }
    return nls_pure(*psi, std::get<Nls>(req.kind).partition, req.variant, req.cfg);
  }
  const auto& rho = std::get<DensityMatrix>(req.target);
  if (const auto* k = std::get_if<Nls>(&req.kind)) return nls_mixed_estimate(rho, k->partition, req.cfg, req.variant, opts);
  return ls_mixed_estimate(rho, req.kind, req.variant, req.cfg, opts);
}

}  // namespace superpos
