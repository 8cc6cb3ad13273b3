#include "superpos/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "superpos/certify.hpp"
#include "superpos/error.hpp"
#include "superpos/io.hpp"

namespace superpos {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (in.fail() || !in.eof()) throw InvalidInput("config key '" + key + "': cannot parse '" + value + "'");
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<double>(key, trim(item)));
  return out;
}

Block parse_block(const std::string& spec) {
  const Partition p = parse_partition(spec);
  if (p.size() != 1) throw InvalidInput("block spec '" + spec + "' must name a single block");
  return p.blocks[0];
}

std::string block_label(const Block& b) {
  std::string s;
  for (int k : b) s += static_cast<char>('A' + k);
  return s;
}

std::string partition_label(const Partition& p) {
  std::string s;
  for (std::size_t i = 0; i < p.blocks.size(); ++i) s += (i ? "|" : "") + block_label(p.blocks[i]);
  return s;
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

RunConfig parse_run_config(std::string_view text, RunConfig base) {
  RunConfig c = std::move(base);
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw InvalidInput("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key == "command") c.command = value;
    else if (key == "state") c.state = value;
    else if (key == "catalog") c.catalog = value;
    else if (key == "measure") c.measure = value;
    else if (key == "block") c.block = value;
    else if (key == "partition") c.partition = value;
    else if (key == "variant") c.variant = value.empty() ? std::nullopt : std::optional(parse_variant(value));
    else if (key == "family") c.family = value;
    else if (key == "grid_points") c.grid_points = parse_number<int>(key, value);
    else if (key == "grid_values") c.grid_values = parse_list(key, value);
    else if (key == "seed") c.opt.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "restarts") c.opt.restarts = parse_number<int>(key, value);
    else if (key == "max_iters") c.opt.max_iters = parse_number<int>(key, value);
    else if (key == "tol") c.opt.tol = parse_number<double>(key, value);
    else if (key == "simplex_scale") c.opt.simplex_scale = parse_number<double>(key, value);
    else if (key == "polish_rounds") c.opt.polish_rounds = parse_number<int>(key, value);
    else if (key == "grid_resolution") c.opt.grid_resolution = parse_number<int>(key, value);
    else if (key == "rank_cap") c.roof.rank_cap = parse_number<int>(key, value);
    else if (key == "ensemble_size") c.roof.ensemble_size = parse_number<int>(key, value);
    else if (key == "out") c.out = value;
    else throw InvalidInput("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return c;
}

RunConfig load_run_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), std::move(base));
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream o;
  o << "command = " << c.command << "\n"
    << "state = " << c.state << "\n"
    << "catalog = " << c.catalog << "\n"
    << "measure = " << c.measure << "\n"
    << "block = " << c.block << "\n"
    << "partition = " << c.partition << "\n"
    << "variant = " << (c.variant ? std::string(to_string(*c.variant)) : std::string()) << "\n"
    << "family = " << c.family << "\n"
    << "grid_points = " << c.grid_points << "\n"
    << "grid_values = ";
  for (std::size_t i = 0; i < c.grid_values.size(); ++i) o << (i ? "," : "") << format_number(c.grid_values[i]);
  o << "\n"
    << "seed = " << c.opt.seed << "\n"
    << "restarts = " << c.opt.restarts << "\n"
    << "max_iters = " << c.opt.max_iters << "\n"
    << "tol = " << format_number(c.opt.tol) << "\n"
    << "simplex_scale = " << format_number(c.opt.simplex_scale) << "\n"
    << "polish_rounds = " << c.opt.polish_rounds << "\n"
    << "grid_resolution = " << c.opt.grid_resolution << "\n"
    << "rank_cap = " << c.roof.rank_cap << "\n"
    << "ensemble_size = " << c.roof.ensemble_size << "\n"
    << "out = " << c.out << "\n";
  return o.str();
}

std::string Table::to_csv() const {
  std::string s;
  auto line = [&s](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
    s += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return s;
}

std::string Table::to_text() const {
  std::vector<std::size_t> width(header.size(), 0);
  auto grow = [&width](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size() && i < width.size(); ++i) width[i] = std::max(width[i], cells[i].size());
  };
  grow(header);
  for (const auto& r : rows) grow(r);
  std::string s;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      s += cells[i];
      if (i + 1 < cells.size()) s += std::string(width[i] - cells[i].size() + 2, ' ');
    }
    s += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return s;
}

std::vector<double> sweep_grid(const RunConfig& cfg) {
  if (!cfg.grid_values.empty()) {
    for (double x : cfg.grid_values) {
      if (!(x >= 0.0 && x <= 1.0)) throw InvalidInput("grid values must lie in [0, 1]");
    }
    return cfg.grid_values;
  }
  if (cfg.grid_points < 1) throw InvalidInput("grid_points must be >= 1");
  std::vector<double> g(cfg.grid_points);
  for (int i = 0; i < cfg.grid_points; ++i) g[i] = static_cast<double>(i + 1) / (cfg.grid_points + 1);
  return g;
}

AnyState resolve_state(const RunConfig& cfg) {
  if (!cfg.state.empty()) return load_state(cfg.state);
  if (!cfg.catalog.empty()) return state_from_spec(cfg.catalog);
  throw InvalidInput("no state given (use a state file or a catalog spec)");
}

MeasureKind resolve_kind(const RunConfig& cfg, int n) {
  if (cfg.measure == "ls") return LsBlock{parse_block(cfg.block)};
  if (cfg.measure == "ls_sym") {
    return LsSymmetric{cfg.partition.empty() ? Partition{} : parse_partition(cfg.partition)};
  }
  if (cfg.measure == "nls") return Nls{cfg.partition.empty() ? finest_partition(n) : parse_partition(cfg.partition)};
  throw InvalidInput("unknown measure '" + cfg.measure + "' (expected ls, ls_sym or nls)");
}

MeasureOutcome run_measure(const RunConfig& cfg) {
  const AnyState state = resolve_state(cfg);
  const Dims& dims = std::visit([](const auto& s) -> const Dims& { return s.dims; }, state);
  MeasureRequest req{state, resolve_kind(cfg, static_cast<int>(dims.size())), kDefaultLsVariant, cfg.opt};
  req.variant = cfg.variant.value_or(std::holds_alternative<Nls>(req.kind) ? kDefaultNlsVariant : kDefaultLsVariant);

  const auto t0 = std::chrono::steady_clock::now();
  MeasureOutcome out;
  out.report = measure(req, cfg.roof);
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const auto& r = out.report;
  out.table.header = {"measure", "variant", "value", "converged", "bound", "closed_form", "evaluations"};
  out.table.rows.push_back({describe(req.kind), std::string(to_string(r.variant)), format_number(r.value),
                            r.converged ? "1" : "0", r.upper_bound ? "upper" : "min",
                            r.closed_form ? format_number(*r.closed_form) : "", std::to_string(r.evaluations)});
  return out;
}

SweepOutcome run_sweep(const RunConfig& cfg) {
  const std::vector<double> grid = sweep_grid(cfg);
  SweepOutcome out;
  auto keep = [&out](const MeasureReport& r) {
    out.converged = out.converged && r.converged;
    return format_number(r.value);
  };
  const Partition abc = parse_partition("0|1|2");

  if (cfg.family == "fig1") {
    const MeasureVariant v = cfg.variant.value_or(kDefaultLsVariant);
    out.table.header = {"lambda", "ls_a", "ls_a_closed_sum", "ls_a_closed_root", "caption_curve"};
    for (double x : grid) {
      const auto psi = std::get<PureState>(make_state("fig1_state", {x}));
      const auto closed = ls_closed_form_pure(psi, {0});
      const double caption = 2.0 * std::sqrt(2.0) / 3.0 * x * x +
                             2.0 * (std::sqrt(2.0) + 1.0) * x * std::sqrt(1.0 - x * x) / std::sqrt(3.0);
      out.table.rows.push_back({format_number(x), keep(ls_block_pure(psi, {0}, v, cfg.opt)),
                                format_number(closed.sum_form), format_number(closed.root_form),
                                format_number(caption)});
    }
  } else if (cfg.family == "fig2") {
    const MeasureVariant v = cfg.variant.value_or(kDefaultNlsVariant);
    out.table.header = {"alpha", "nls", "concurrence", "closed"};
    for (double x : grid) {
      const auto psi = std::get<PureState>(make_state("schmidt_qubits", {x}));
      out.table.rows.push_back({format_number(x), keep(nls_pure(psi, parse_partition("0|1"), v, cfg.opt)),
                                format_number(concurrence_pure(psi)),
                                format_number(2.0 * x * std::sqrt(1.0 - x * x))});
    }
  } else if (cfg.family == "ghz_like") {
    out.table.header = {"lambda", "ls", "nls", "closed"};
    for (double x : grid) {
      const auto psi = std::get<PureState>(make_state("ghz_like", {x}));
      const std::string ls = keep(ls_symmetric_pure(psi, cfg.variant.value_or(kDefaultLsVariant), cfg.opt));
      const std::string nls = keep(nls_pure(psi, abc, cfg.variant.value_or(kDefaultNlsVariant), cfg.opt));
      out.table.rows.push_back({format_number(x), ls, nls, format_number(2.0 * x * std::sqrt(1.0 - x * x))});
    }
  } else if (cfg.family == "w_like") {
    const MeasureVariant lv = cfg.variant.value_or(kDefaultLsVariant);
    out.table.header = {"lambda", "nls", "ls_a", "ls_b", "ls_c", "ls"};
    for (double x : grid) {
      const auto psi = std::get<PureState>(make_state("w_like", {x}));
      std::vector<std::string> row{format_number(x), keep(nls_pure(psi, abc, cfg.variant.value_or(kDefaultNlsVariant), cfg.opt))};
      for (int b = 0; b < 3; ++b) row.push_back(keep(ls_block_pure(psi, {b}, lv, cfg.opt)));
      row.push_back(keep(ls_symmetric_pure(psi, lv, cfg.opt)));
      out.table.rows.push_back(std::move(row));
    }
  } else {
    throw InvalidInput("unknown sweep family '" + cfg.family + "' (expected fig1, fig2, ghz_like or w_like)");
  }
  return out;
}

SweepOutcome run_table1(const RunConfig& cfg) {
  const auto ghz = std::get<PureState>(make_state("ghz"));
  const auto w = std::get<PureState>(make_state("w_state"));
  SweepOutcome out;
  out.table.header = {"quantity", "ghz", "w", "converged"};
  auto row = [&](const std::string& label, auto&& eval) {
    const MeasureReport a = eval(ghz);
    const MeasureReport b = eval(w);
    const bool ok = a.converged && b.converged;
    out.converged = out.converged && ok;
    out.table.rows.push_back({label, format_number(a.value), format_number(b.value), ok ? "1" : "0"});
  };
  const MeasureVariant nv = cfg.variant.value_or(kDefaultNlsVariant);
  const MeasureVariant lv = cfg.variant.value_or(kDefaultLsVariant);
  for (const char* spec : {"0|1|2", "01|2", "0|12", "02|1"}) {
    const Partition p = parse_partition(spec);
    row("NLS " + partition_label(p), [&](const PureState& s) { return nls_pure(s, p, nv, cfg.opt); });
  }
  for (const char* spec : {"0", "1", "2", "01", "02", "12"}) {
    const Block b = parse_block(spec);
    row("LS " + block_label(b), [&](const PureState& s) { return ls_block_pure(s, b, lv, cfg.opt); });
  }
  return out;
}

std::string run_certify(const RunConfig& cfg) {
  const AnyState state = resolve_state(cfg);
  DensityMatrix rho = std::holds_alternative<PureState>(state) ? to_density(std::get<PureState>(state))
                                                               : std::get<DensityMatrix>(state);
  const int n = static_cast<int>(rho.dims.size());
  Partition cut = cfg.partition.empty() ? bipartition_of({0}, n) : parse_partition(cfg.partition);
  check_partition(cut, n);
  if (cut.size() != 2) throw InvalidInput("certification needs a two-block partition");
  const std::string a = block_label(cut.blocks[0]);
  const std::string b = block_label(cut.blocks[1]);
  if (n != 2 || cut.blocks[0] != Block{0}) {
    rho = make_density({block_dim(rho.dims, cut.blocks[0]), block_dim(rho.dims, cut.blocks[1])},
                       density_in_partition_order(rho, cut));
  }

  std::ostringstream o;
  auto verdict = [&o](const std::string& label, const CertificationResult& r) {
    o << label << ": " << to_string(r.verdict) << " (residual " << format_number(r.residual) << ")";
    if (!r.reason.empty()) o << " " << r.reason;
    o << "\n";
  };
  verdict("CQ(side " + a + ")", cq_certify(rho, {0}));
  verdict("CQ(side " + b + ")", cq_certify(rho, {1}));
  verdict("classical", classical_certify(rho));
  const double m = ppt_min_eigenvalue(rho, parse_partition("0|1"));
  o << "PPT: " << (m >= -1e-10 ? "satisfied" : "violated") << " (min eig " << format_number(m) << ")\n";
  return o.str();
}

Table run_schmidt(const RunConfig& cfg) {
  const AnyState state = resolve_state(cfg);
  const auto* psi = std::get_if<PureState>(&state);
  if (!psi) throw InvalidInput("schmidt needs a pure state");
  const int n = static_cast<int>(psi->dims.size());
  const Partition cut = cfg.partition.empty() ? bipartition_of({0}, n) : parse_partition(cfg.partition);
  const auto s = schmidt_decompose(*psi, cut);
  Table t;
  t.header = {"index", "coefficient", "weight"};
  for (Eigen::Index k = 0; k < s.coefficients.size(); ++k) {
    const double c = s.coefficients(k);
    t.rows.push_back({std::to_string(k), format_number(c), format_number(c * c)});
  }
  return t;
}

}  // namespace superpos
