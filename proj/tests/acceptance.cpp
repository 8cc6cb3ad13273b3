// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "superpos/certify.hpp"
#include "superpos/experiments.hpp"

using namespace superpos;

namespace {

constexpr auto kRoot = MeasureVariant::RootOfPairSum;
constexpr auto kSum = MeasureVariant::SumOfPairRoots;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::vector<double> column(const Table& t, const std::string& name) {
  const auto it = std::find(t.header.begin(), t.header.end(), name);
  const auto idx = static_cast<std::size_t>(it - t.header.begin());
  std::vector<double> out;
  for (const auto& r : t.rows) out.push_back(std::stod(r[idx]));
  return out;
}

RunConfig measure_config(const std::string& catalog, const std::string& kind, const std::string& where,
                         std::optional<MeasureVariant> v) {
  RunConfig c;
  c.command = "measure";
  c.catalog = catalog;
  c.measure = kind;
  if (kind == "ls") c.block = where;
  else c.partition = where;
  c.variant = v;
  return c;
}

const RunConfig kC1 = measure_config("schmidt_qubits:" + format_number(4.0 / 19.0), "nls", "0|1", kRoot);
const RunConfig kC2 = measure_config("fig1_state:0.2", "ls", "0", kSum);

Outcome criterion1() {
  const auto t0 = Clock::now();
  const auto m = run_measure(kC1);
  const double secs = seconds_since(t0);
  const double conc = concurrence_pure(std::get<PureState>(make_state("schmidt_qubits", {4.0 / 19.0})));
  const double target = 0.411616080243916;
  Outcome o;
  o.pass = std::abs(m.report.value - target) <= 1e-6 && std::abs(conc - target) <= 1e-12 && secs < 10;
  o.detail = "nls=" + format_number(m.report.value) + " concurrence=" + format_number(conc) +
             " target=0.411616080243916 tol=1e-6/1e-12" + fmt(" time=%.2fs (<10s)", secs);
  return o;
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  const auto m = run_measure(kC2);
  const double secs = seconds_since(t0);
  const double closed = ls_closed_form_pure(std::get<PureState>(make_state("fig1_state", {0.2})), {0}).sum_form;
  const double target = 0.583986531642978;
  Outcome o;
  o.pass = std::abs(m.report.value - target) <= 1e-5 && std::abs(closed - target) <= 1e-9 && secs < 60;
  o.detail = "ls_a=" + format_number(m.report.value) + " closed_sum=" + format_number(closed) +
             " target=0.583986531642978 tol=1e-5/1e-9" + fmt(" time=%.2fs (<60s)", secs);
  return o;
}

RunConfig table1_config() {
  RunConfig c;
  c.command = "table1";
  return c;
}

Outcome criterion3() {
  const auto t0 = Clock::now();
  const auto t = run_table1(table1_config());
  const double secs = seconds_since(t0);
  const auto ghz = column(t.table, "ghz"), w = column(t.table, "w");
  double ghz_dev = 0, w_dev = 0;
  for (std::size_t i = 0; i < ghz.size(); ++i) {
    ghz_dev = std::max(ghz_dev, std::abs(ghz[i] - 1.0));
    const double expected = i == 0 ? 1.1547 : 0.9428;
    w_dev = std::max(w_dev, std::abs(w[i] - expected));
  }
  Outcome o;
  o.pass = t.table.rows.size() == 10 && ghz_dev <= 1e-4 && w_dev <= 1e-3 && secs < 600;
  o.detail = std::to_string(t.table.rows.size()) + " rows, max|ghz-1|=" + fmt("%.3g", ghz_dev) +
             " (tol 1e-4) max|w-ref|=" + fmt("%.3g", w_dev) + " (tol 1e-3)" + fmt(" time=%.1fs (<600s)", secs);
  return o;
}

Outcome criterion4() {
  RunConfig c;
  c.command = "sweep";
  c.family = "ghz_like";
  for (int i = 0; i <= 10; ++i) c.grid_values.push_back(0.1 * i);
  const auto t = run_sweep(c);
  const auto lam = column(t.table, "lambda"), ls = column(t.table, "ls"), nls = column(t.table, "nls");
  double dev = 0;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    const double ref = 2 * lam[i] * std::sqrt(1 - lam[i] * lam[i]);
    dev = std::max({dev, std::abs(ls[i] - ref), std::abs(nls[i] - ref)});
  }
  return {lam.size() == 11 && dev <= 1e-4, "11 points, max deviation " + fmt("%.3g", dev) + " (tol 1e-4)"};
}

Outcome criterion5() {
  RunConfig c;
  c.command = "sweep";
  c.family = "w_like";
  c.grid_points = 199;
  const auto t = run_sweep(c);
  const auto ls = column(t.table, "ls"), nls = column(t.table, "nls");
  double gap = 0;
  for (std::size_t i = 0; i < ls.size(); ++i) gap = std::max(gap, std::abs(ls[i] - nls[i]));
  double jump = 0;
  for (const char* name : {"nls", "ls_a", "ls_b", "ls_c", "ls"}) {
    const auto col = column(t.table, name);
    for (std::size_t i = 1; i < col.size(); ++i) jump = std::max(jump, std::abs(col[i] - col[i - 1]));
  }
  return {gap > 0.01 && jump < 0.1, "199 points, max|LS-NLS|=" + fmt("%.4f", gap) + " (>0.01) max adjacent jump=" +
                                        fmt("%.4f", jump) + " (<0.1)"};
}

Outcome criterion6() {
  Outcome o;
  OptimizerConfig cfg;
  cfg.max_iters = 20000;
  for (double p : {0.4, 0.6, 0.8}) {
    const auto rho = std::get<DensityMatrix>(make_state("werner", {p}));
    const auto t0 = Clock::now();
    const double v = nls_mixed_estimate(rho, parse_partition("0|1"), cfg).value;
    const double secs = seconds_since(t0);
    const double c = concurrence_mixed(rho);
    const bool ok = std::abs(v - c) <= 5e-3 && v >= c - 1e-6 && secs < 300;
    o.pass = o.pass && ok;
    o.detail += fmt("p=%.1f", p) + " nls=" + format_number(v) + " C=" + format_number(c) + fmt(" %.1fs; ", secs);
  }
  o.detail += "tol 5e-3, upper bound slack 1e-6, <300s per point";
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::string fails;
  OptimizerConfig cfg;

  // (a) classical-quantum states
  {
    OptimizerConfig mc;
    mc.restarts = 4;
    int bad = 0;
    double worst = 0;
    for (int s = 0; s < 200; ++s) {
      const auto rho = random_classical_quantum({2, 2}, 10000 + s);
      const double v = ls_mixed_estimate(rho, LsBlock{{0}}, kRoot, mc).value;
      worst = std::max(worst, v);
      if (v > 1e-4 || cq_certify(rho, {0}).verdict != Verdict::CertifiedZero) ++bad;
    }
    o.detail += "(a) max LS=" + fmt("%.2g", worst) + " fails=" + std::to_string(bad) + "; ";
    if (bad) fails += "a";
  }
  // (b) product states
  {
    const std::vector<Dims> shapes{{2, 2}, {2, 3}, {2, 2, 2}, {3, 3}};
    int bad = 0;
    double worst = 0;
    for (int s = 0; s < 200; ++s) {
      const Dims& d = shapes[s % shapes.size()];
      const auto psi = random_product(d, 20000 + s);
      const double v = nls_pure(psi, finest_partition(static_cast<int>(d.size())), kRoot, cfg).value;
      worst = std::max(worst, v);
      if (v > 1e-8) ++bad;
    }
    o.detail += "(b) max NLS=" + fmt("%.2g", worst) + " fails=" + std::to_string(bad) + "; ";
    if (bad) fails += "b";
  }
  // (c) Appendix-4 state
  {
    const auto v = cq_certify(std::get<DensityMatrix>(make_state("rsp_state")), {0}).verdict;
    o.detail += std::string("(c) ") + std::string(to_string(v)) + "; ";
    if (v != Verdict::CertifiedNonzero) fails += "c";
  }
  // (d) random two-qubit pure states, (e) two-level LS bound
  std::vector<double> two_level;
  {
    int bad = 0;
    double worst_n = 0, worst_l = 0;
    for (int s = 0; s < 500; ++s) {
      const auto psi = random_pure({2, 2}, 30000 + s);
      const double n = nls_pure(psi, parse_partition("0|1"), kRoot, cfg).value;
      const double l = ls_block_pure(psi, {0}, kRoot, cfg).value;
      const auto sch = schmidt_decompose(psi, parse_partition("0|1")).coefficients;
      worst_n = std::max(worst_n, std::abs(n - concurrence_pure(psi)));
      worst_l = std::max(worst_l, std::abs(l - 2 * sch(0) * sch(1)));
      if (std::abs(n - concurrence_pure(psi)) > 1e-6 || std::abs(l - 2 * sch(0) * sch(1)) > 1e-6) ++bad;
      two_level.push_back(l);
    }
    o.detail += "(d) max|NLS-C|=" + fmt("%.2g", worst_n) + " max|LS-2c1c2|=" + fmt("%.2g", worst_l) +
                " fails=" + std::to_string(bad) + "; ";
    if (bad) fails += "d";
  }
  {
    for (int s = 0; s < 100; ++s) {
      const auto psi = random_pure({2, 3, 2}, 40000 + s);
      for (auto v : {kRoot, kSum}) two_level.push_back(ls_block_pure(psi, {s % 2 ? 0 : 2}, v, cfg).value);
    }
    const auto [lo, hi] = std::minmax_element(two_level.begin(), two_level.end());
    const bool ok = *lo >= 0 && *hi <= 1 + 1e-8;
    o.detail += "(e) " + std::to_string(two_level.size()) + " values in [" + fmt("%.3g", *lo) + ", " +
                fmt("%.12g", *hi) + "]; ";
    if (!ok) fails += "e";
  }
  // (f) symmetric LS against the single-block mean
  {
    int bad = 0;
    double worst = 1e9;
    for (int s = 0; s < 100; ++s) {
      const Dims d = s % 2 ? Dims{2, 3} : Dims{3, 3};
      const auto psi = random_pure(d, 50000 + s);
      const auto v = s % 4 < 2 ? kSum : kRoot;
      const double sym = ls_symmetric_pure(psi, v, cfg).value;
      const double mean = 0.5 * (ls_block_pure(psi, {0}, v, cfg).value + ls_block_pure(psi, {1}, v, cfg).value);
      worst = std::min(worst, sym - mean);
      if (sym < mean - 1e-5) ++bad;
    }
    o.detail += "(f) min(LS-mean)=" + fmt("%.2g", worst) + " fails=" + std::to_string(bad);
    if (bad) fails += "f";
  }
  o.pass = fails.empty();
  if (!o.pass) o.detail += " failing parts: " + fails;
  return o;
}

Outcome criterion8() {
  auto csv = [] {
    return run_measure(kC1).table.to_csv() + run_measure(kC2).table.to_csv() + run_table1(table1_config()).table.to_csv();
  };
  const std::string a = csv(), b = csv();
  return {a == b, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different")};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
      {5, criterion5}, {6, criterion6}, {7, criterion7}, {8, criterion8}};
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
