#include "superpos/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "superpos/error.hpp"

namespace superpos {

void check_config(const OptimizerConfig& cfg) {
  if (cfg.restarts < 1) throw InvalidInput("optimizer: restarts must be >= 1");
  if (cfg.max_iters < 1) throw InvalidInput("optimizer: max_iters must be >= 1");
  if (!(cfg.tol > 0)) throw InvalidInput("optimizer: tol must be > 0");
  if (!(cfg.simplex_scale > 0)) throw InvalidInput("optimizer: simplex_scale must be > 0");
  if (cfg.polish_rounds < 0) throw InvalidInput("optimizer: polish_rounds must be >= 0");
  if (cfg.grid_resolution < 0 || cfg.grid_resolution == 1) {
    throw InvalidInput("optimizer: grid_resolution must be 0 or >= 2");
  }
}

int SearchDomain::param_count() const {
  int n = 0;
  for (int d : unitary_dims) n += basis_param_count(d);
  if (isometry) n += 2 * isometry->rows * isometry->cols;
  return n;
}

// Nelder-Mead -------------------------------------------------------------------

namespace {

[[noreturn]] void non_finite(std::span<const double> x, double v) {
  std::ostringstream os;
  os << "objective returned " << v << " at (";
  for (std::size_t k = 0; k < x.size(); ++k) os << (k ? ", " : "") << x[k];
  os << ")";
  throw NumericalError(os.str());
}

}  // namespace

OptResult nelder_mead(const VectorObjective& f, std::span<const double> x0, const OptimizerConfig& cfg) {
  check_config(cfg);
  const std::size_t n = x0.size();
  OptResult out;
  auto eval = [&](const std::vector<double>& x) {
    const double v = f(x);
    ++out.evaluations;
    if (!std::isfinite(v)) non_finite(x, v);
    return v;
  };

  std::vector<double> start(x0.begin(), x0.end());
  if (n == 0) {
    out.value = eval(start);
    out.converged = true;
    return out;
  }

  // Dimension-adaptive coefficients (Gao & Han).
  const double dn = static_cast<double>(n);
  const double reflect = 1.0;
  const double expand = n >= 2 ? 1.0 + 2.0 / dn : 2.0;
  const double contract = n >= 2 ? 0.75 - 1.0 / (2.0 * dn) : 0.5;
  const double shrink = n >= 2 ? 1.0 - 1.0 / dn : 0.5;

  std::vector<std::vector<double>> simplex(n + 1, start);
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += cfg.simplex_scale;
  for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  auto point_along = [&](double t, const std::vector<double>& from, std::vector<double>& dst) {
    // dst = centroid + t * (centroid - from)
    for (std::size_t k = 0; k < n; ++k) dst[k] = centroid[k] + t * (centroid[k] - from[k]);
  };

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    {
      std::vector<std::vector<double>> s2(n + 1);
      std::vector<double> v2(n + 1);
      for (std::size_t i = 0; i <= n; ++i) {
        s2[i] = std::move(simplex[order[i]]);
        v2[i] = values[order[i]];
      }
      simplex.swap(s2);
      values.swap(v2);
    }

    double diameter = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t k = 0; k < n; ++k) diameter = std::max(diameter, std::abs(simplex[i][k] - simplex[0][k]));
    }
    if (values[n] - values[0] <= cfg.tol && diameter <= cfg.tol) {
      out.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k];
    }
    for (auto& c : centroid) c /= dn;

    point_along(reflect, simplex[n], xr);
    const double fr = eval(xr);
    if (fr < values[0]) {
      point_along(reflect * expand, simplex[n], xe);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[n] = xe;
        values[n] = fe;
      } else {
        simplex[n] = xr;
        values[n] = fr;
      }
      continue;
    }
    if (fr < values[n - 1]) {
      simplex[n] = xr;
      values[n] = fr;
      continue;
    }
    bool accepted = false;
    if (fr < values[n]) {
      point_along(reflect * contract, simplex[n], xc);
      const double fc = eval(xc);
      if (fc <= fr) {
        simplex[n] = xc;
        values[n] = fc;
        accepted = true;
      }
    } else {
      point_along(-contract, simplex[n], xc);
      const double fc = eval(xc);
      if (fc < values[n]) {
        simplex[n] = xc;
        values[n] = fc;
        accepted = true;
      }
    }
    if (!accepted) {
      for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t k = 0; k < n; ++k) simplex[i][k] = simplex[0][k] + shrink * (simplex[i][k] - simplex[0][k]);
        values[i] = eval(simplex[i]);
      }
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  out.value = values[best];
  out.params = simplex[best];
  return out;
}

// Charts --------------------------------------------------------------------------

ComplexMatrix isometry_from_angles(int rows, int cols, std::span<const double> angles) {
  if (rows < cols || cols < 1) throw InvalidInput("isometry needs rows >= cols >= 1");
  const std::size_t count = static_cast<std::size_t>(rows) * cols;
  if (angles.size() != 2 * count) throw InvalidInput("isometry chart: wrong parameter count");
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * cols + j;
      m(i, j) = std::polar(std::cos(angles[k]), angles[count + k]);
    }
  }
  // modified Gram-Schmidt; a collapsed column is replaced by the first unit vector that survives
  for (int j = 0; j < cols; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int l = 0; l < j; ++l) m.col(j) -= m.col(l).dot(m.col(j)) * m.col(l);
    }
    double norm = m.col(j).norm();
    for (int e = 0; norm < 1e-10 && e < rows; ++e) {
      m.col(j) = ComplexVector::Unit(rows, e);
      for (int l = 0; l < j; ++l) m.col(j) -= m.col(l).dot(m.col(j)) * m.col(l);
      norm = m.col(j).norm();
    }
    m.col(j) /= norm;
  }
  return m;
}

namespace {

std::vector<double> chart_center(int dim) {
  const int m = dim * (dim - 1) / 2;
  std::vector<double> c(2 * static_cast<std::size_t>(m), 0.0);
  std::fill(c.begin(), c.begin() + m, std::numbers::pi / 2);
  return c;
}

std::vector<double> isometry_angles_of(const ComplexMatrix& iso) {
  const std::size_t count = static_cast<std::size_t>(iso.size());
  std::vector<double> x(2 * count);
  for (Eigen::Index i = 0; i < iso.rows(); ++i) {
    for (Eigen::Index j = 0; j < iso.cols(); ++j) {
      const std::size_t k = static_cast<std::size_t>(i * iso.cols() + j);
      x[k] = std::acos(std::clamp(std::abs(iso(i, j)), 0.0, 1.0));
      x[count + k] = std::arg(iso(i, j));
    }
  }
  return x;
}

struct RestartPlan {
  std::vector<ComplexMatrix> frames;  // frame * B(center)^dagger, one per unitary
  std::vector<double> x0;
};

class Decoder {
 public:
  explicit Decoder(const SearchDomain& d) : domain_(d) {
    for (int dim : d.unitary_dims) {
      if (dim < 1) throw InvalidInput("search domain: unitary dimension must be >= 1");
      center_inv_.push_back(basis_from_angles(dim, chart_center(dim)).adjoint());
    }
    if (d.isometry && (d.isometry->cols < 1 || d.isometry->rows < d.isometry->cols)) {
      throw InvalidInput("search domain: isometry needs rows >= cols >= 1");
    }
  }

  RestartPlan plan(int restart, const OptimizerConfig& cfg, const SearchHint& hint,
                   const std::optional<std::vector<double>>& grid_point) const {
    RestartPlan p;
    std::mt19937_64 rng(mix_seed(cfg.seed, 2 * static_cast<std::uint64_t>(restart) + 1));
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    std::optional<DomainPoint> grid_decoded;
    if (restart == 0 && grid_point) grid_decoded = decode_raw(domain_, *grid_point);
    for (std::size_t b = 0; b < domain_.unitary_dims.size(); ++b) {
      const int dim = domain_.unitary_dims[b];
      ComplexMatrix frame;
      if (restart == 0) {
        if (grid_decoded) {
          frame = grid_decoded->unitaries[b];
        } else if (b < hint.frames.size()) {
          frame = hint.frames[b];
          if (frame.rows() != dim || frame.cols() != dim || unitarity_defect(frame) > 1e-8) {
            throw InvalidInput("search hint: frame is not a unitary of the block dimension");
          }
        } else {
          frame = ComplexMatrix::Identity(dim, dim);
        }
      } else {
        frame = random_unitary(dim, mix_seed(cfg.seed, 1000003ULL * static_cast<std::uint64_t>(restart) + b));
      }
      p.frames.push_back(frame * center_inv_[b]);
      const auto c = chart_center(dim);
      p.x0.insert(p.x0.end(), c.begin(), c.end());
    }
    if (domain_.isometry) {
      const int rows = domain_.isometry->rows;
      const int cols = domain_.isometry->cols;
      if (restart == 0 && hint.isometry) {
        const auto& h = *hint.isometry;
        if (h.rows() != rows || h.cols() != cols) throw InvalidInput("search hint: isometry has the wrong shape");
        const auto x = isometry_angles_of(h);
        p.x0.insert(p.x0.end(), x.begin(), x.end());
      } else if (restart == 0 && grid_point) {
        const std::size_t off = p.x0.size();
        p.x0.insert(p.x0.end(), grid_point->begin() + static_cast<std::ptrdiff_t>(off), grid_point->end());
      } else {
        for (int k = 0; k < 2 * rows * cols; ++k) p.x0.push_back(angle(rng));
      }
    }
    return p;
  }

  void decode(const RestartPlan& plan, std::span<const double> x, DomainPoint& out) const {
    out.unitaries.resize(domain_.unitary_dims.size());
    std::size_t off = 0;
    for (std::size_t b = 0; b < domain_.unitary_dims.size(); ++b) {
      const int dim = domain_.unitary_dims[b];
      const std::size_t np = static_cast<std::size_t>(basis_param_count(dim));
      out.unitaries[b] = plan.frames[b] * basis_from_angles(dim, x.subspan(off, np));
      off += np;
    }
    if (domain_.isometry) {
      out.isometry = isometry_from_angles(domain_.isometry->rows, domain_.isometry->cols, x.subspan(off));
    } else {
      out.isometry.resize(0, 0);
    }
  }

 private:
  const SearchDomain& domain_;
  std::vector<ComplexMatrix> center_inv_;
};

// Runs fn(0..n-1) on up to hardware_concurrency threads; results are indexed, so
// the outcome does not depend on scheduling.
template <typename Fn>
auto parallel_map(int n, Fn fn) -> std::vector<decltype(fn(0))> {
  using R = decltype(fn(0));
  std::vector<R> results(n);
  const int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (workers == 1 || n == 1) {
    for (int i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }
  for (int begin = 0; begin < n; begin += workers) {
    const int end = std::min(n, begin + workers);
    std::vector<std::future<R>> batch;
    for (int i = begin; i < end; ++i) batch.push_back(std::async(std::launch::async, fn, i));
    for (int i = begin; i < end; ++i) results[i] = batch[i - begin].get();
  }
  return results;
}

}  // namespace

DomainPoint decode_raw(const SearchDomain& domain, std::span<const double> params) {
  if (static_cast<int>(params.size()) != domain.param_count()) throw InvalidInput("decode_raw: wrong parameter count");
  DomainPoint out;
  std::size_t off = 0;
  for (int dim : domain.unitary_dims) {
    const std::size_t np = static_cast<std::size_t>(basis_param_count(dim));
    out.unitaries.push_back(basis_from_angles(dim, params.subspan(off, np)));
    off += np;
  }
  if (domain.isometry) out.isometry = isometry_from_angles(domain.isometry->rows, domain.isometry->cols, params.subspan(off));
  return out;
}

std::vector<double> grid_seed(const SearchDomain& domain, int resolution, const DomainObjective& f, long long cap) {
  if (resolution < 2) throw InvalidInput("grid_seed: resolution must be >= 2");
  // per-parameter grids
  std::vector<std::vector<double>> axes;
  for (int dim : domain.unitary_dims) {
    const int m = dim * (dim - 1) / 2;
    for (int k = 0; k < 2 * m; ++k) axes.push_back({});
    for (int k = 0; k < m; ++k) {
      auto& theta = axes[axes.size() - 2 * m + k];
      auto& phi = axes[axes.size() - m + k];
      for (int i = 0; i < resolution; ++i) {
        theta.push_back(std::numbers::pi * i / (resolution - 1));
        phi.push_back(2 * std::numbers::pi * i / resolution);
      }
    }
  }
  if (domain.isometry) {
    const int count = domain.isometry->rows * domain.isometry->cols;
    for (int part = 0; part < 2; ++part) {
      for (int k = 0; k < count; ++k) {
        std::vector<double> axis;
        for (int i = 0; i < resolution; ++i) {
          axis.push_back(part == 0 ? std::numbers::pi * i / (resolution - 1) : 2 * std::numbers::pi * i / resolution);
        }
        axes.push_back(std::move(axis));
      }
    }
  }
  long double points = 1;
  for (std::size_t k = 0; k < axes.size(); ++k) points *= resolution;
  if (points > static_cast<long double>(cap)) {
    throw InvalidInput("grid_seed: " + std::to_string(static_cast<double>(points)) + " grid points exceed the cap of " +
                       std::to_string(cap));
  }
  const long long total = static_cast<long long>(points);
  std::vector<int> digits(axes.size(), 0);
  std::vector<double> x(axes.size());
  std::vector<double> best;
  double best_value = std::numeric_limits<double>::infinity();
  for (long long idx = 0; idx < total; ++idx) {
    for (std::size_t k = 0; k < axes.size(); ++k) x[k] = axes[k][digits[k]];
    const double v = f(decode_raw(domain, x));
    if (!std::isfinite(v)) non_finite(x, v);
    if (v < best_value) {
      best_value = v;
      best = x;
    }
    for (std::size_t k = axes.size(); k-- > 0;) {
      if (++digits[k] < resolution) break;
      digits[k] = 0;
    }
  }
  return best;
}

OptResult minimize_over_domain(const DomainObjective& f, const SearchDomain& domain, const OptimizerConfig& cfg,
                               const SearchHint& hint) {
  check_config(cfg);
  const Decoder decoder(domain);
  std::optional<std::vector<double>> grid_point;
  if (cfg.grid_resolution >= 2) grid_point = grid_seed(domain, cfg.grid_resolution, f);

  auto run = [&](int restart) {
    const RestartPlan plan = decoder.plan(restart, cfg, hint, grid_point);
    DomainPoint scratch;
    const VectorObjective g = [&](std::span<const double> x) {
      decoder.decode(plan, x, scratch);
      return f(scratch);
    };
    OptResult best = nelder_mead(g, plan.x0, cfg);
    for (int round = 0; round < cfg.polish_rounds; ++round) {
      OptResult next = nelder_mead(g, best.params, cfg);
      const long long evals = best.evaluations + next.evaluations;
      const bool improved = next.value < best.value - cfg.tol;
      if (next.value <= best.value) {
        best = std::move(next);
      } else {
        best.converged = next.converged;
      }
      best.evaluations = evals;
      if (!improved) break;
    }
    best.restart = restart;
    decoder.decode(plan, best.params, best.point);
    return best;
  };

  auto results = parallel_map(cfg.restarts, run);
  long long evaluations = 0;
  std::size_t winner = 0;
  for (std::size_t r = 0; r < results.size(); ++r) {
    evaluations += results[r].evaluations;
    if (results[r].value < results[winner].value) winner = r;
  }
  OptResult out = std::move(results[winner]);
  out.evaluations = evaluations;
  return out;
}

}  // namespace superpos
