// SPDX-License-Identifier: Apache-2.0
// rwcap: command line front end for the capacity / branching-capacity /
// sausage-volume estimators.
//
// Every subcommand reads an optional key=value config file (--config);
// explicit CLI flags always win. The effective configuration is echoed to
// results/<subcommand>/<timestamp>-<confighash>/config.echo next to
// record.json (full payload) and trends.csv (per-row numbers), so a run is
// reproducible from its own output directory via --config config.echo.
//
// Exit codes: 0 success, 1 finished with warnings, 2 usage or runtime error.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_lib.hpp"
#include "rwcap/bcap.hpp"
#include "rwcap/bushfield.hpp"
#include "rwcap/capacity.hpp"
#include "rwcap/green.hpp"
#include "rwcap/hitting.hpp"
#include "rwcap/mc.hpp"
#include "rwcap/offspring.hpp"
#include "rwcap/sausage_limits.hpp"
#include "rwcap/verify.hpp"

#ifndef RWCAP_VERSION
#define RWCAP_VERSION "0.0.0"
#endif

namespace {

using namespace rwcap;
namespace cl = rwcap::cli;
using nlohmann::json;

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double secs() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

// ---- option binding: default < config file < CLI flag ----

void from_cfg(const std::string& s, std::string& v) { v = s; }
void from_cfg(const std::string& s, bool& v) {
  if (s == "1" || s == "true" || s == "yes") v = true;
  else if (s == "0" || s == "false" || s == "no") v = false;
  else throw std::runtime_error("config boolean must be 0/1/true/false, got: " + s);
}
void from_cfg(const std::string& s, int& v) { v = std::stoi(s); }
void from_cfg(const std::string& s, std::uint64_t& v) { v = std::stoull(s); }
void from_cfg(const std::string& s, double& v) { v = std::stod(s); }

std::string to_cfg(const std::string& v) { return v; }
std::string to_cfg(bool v) { return v ? "1" : "0"; }
std::string to_cfg(int v) { return std::to_string(v); }
std::string to_cfg(std::uint64_t v) { return std::to_string(v); }
std::string to_cfg(double v) { return cl::fmt_double(v); }

class Binder {
 public:
  explicit Binder(CLI::App* app) : app_(app) {
    app_->add_option("--config", config_path_,
                     "key=value config file; explicit flags override it");
    app_->add_option("--out", out_root_, "results root directory")->capture_default_str();
  }

  template <class T>
  void bind(const std::string& key, T& var, const std::string& desc) {
    CLI::Option* opt = app_->add_option("--" + key, var, desc)->capture_default_str();
    fillers_.push_back([&var, key, opt](const cl::Config& cfg) {
      if (opt->count() == 0)
        if (const std::string* raw = cfg.find(key)) from_cfg(*raw, var);
    });
    echoers_.push_back([&var, key](cl::Config& cfg) { cfg.set(key, to_cfg(var)); });
  }

  void bind_flag(const std::string& key, bool& var, const std::string& desc) {
    CLI::Option* opt = app_->add_flag("--" + key, var, desc);
    fillers_.push_back([&var, key, opt](const cl::Config& cfg) {
      if (opt->count() == 0)
        if (const std::string* raw = cfg.find(key)) from_cfg(*raw, var);
    });
    echoers_.push_back([&var, key](cl::Config& cfg) { cfg.set(key, to_cfg(var)); });
  }

  // Called at the top of the subcommand callback: applies the config file
  // under the CLI values and returns the effective-config echo.
  cl::Config resolve() {
    cl::Config file_cfg;
    if (!config_path_.empty()) file_cfg = cl::Config::parse_file(config_path_);
    for (auto& f : fillers_) f(file_cfg);
    cl::Config echo;
    for (auto& e : echoers_) e(echo);
    return echo;
  }

  const std::string& out_root() const { return out_root_; }
  CLI::App* parent() const { return app_; }

 private:
  CLI::App* app_;
  std::string config_path_;
  std::string out_root_ = "results";
  std::vector<std::function<void(const cl::Config&)>> fillers_;
  std::vector<std::function<void(cl::Config&)>> echoers_;
};

struct CommonOpts {
  std::uint64_t seed = 1;
  int workers = 0;
};

void bind_common(Binder& b, CommonOpts& c) {
  b.bind("seed", c.seed, "master seed; fixes every replica stream");
  b.bind("workers", c.workers, "worker threads (0 = RWCAP_WORKERS or hardware)");
}

// ---- run directory + record.json plumbing ----

struct RunContext {
  std::string sub;
  cl::Config echo;
  std::string out_root;
  CommonOpts common;
  json results = json::object();
  cl::Csv trends;
  std::vector<std::string> warnings;
  double wall = 0.0;
};

int finalize(RunContext& rc) {
  std::string serialized = rc.echo.serialize();
  auto dir = cl::make_run_dir(rc.out_root, rc.sub, cl::config_hash(serialized));
  cl::write_file(dir / "config.echo", serialized);
  cl::write_file(dir / "trends.csv", rc.trends.serialize());

  json record = {
      {"tool", "rwcap"},
      {"version", RWCAP_VERSION},
      {"subcommand", rc.sub},
      {"config", json::object()},
      {"results", rc.results},
      {"warnings", rc.warnings},
      {"meta",
       {{"created_utc", cl::utc_iso8601()},
        {"wall_seconds", rc.wall},
        {"workers_effective", rc.common.workers > 0 ? rc.common.workers : default_workers()},
        {"seed", rc.common.seed}}},
  };
  for (const auto& [k, v] : rc.echo.items()) record["config"][k] = v;
  cl::write_file(dir / "record.json", record.dump(2) + "\n");

  for (const auto& w : rc.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  std::printf("results: %s\n", dir.string().c_str());
  return rc.warnings.empty() ? 0 : 1;
}

std::vector<std::string> est_row(const MCEstimate& e) {
  return {cl::fmt_double(e.mean), cl::fmt_double(e.se), std::to_string(e.replicas),
          cl::fmt_double(e.bias_lo), cl::fmt_double(e.bias_hi)};
}

void append(std::vector<std::string>& row, std::vector<std::string> tail) {
  for (auto& t : tail) row.push_back(std::move(t));
}

template <class T>
std::vector<T> broadcast(std::vector<T> v, std::size_t n, const char* what) {
  if (v.size() == 1 && n > 1) v.assign(n, v[0]);
  if (v.size() != n)
    throw std::runtime_error(std::string(what) + " needs 1 or " + std::to_string(n) + " entries");
  return v;
}

// ---- subcommands ----

struct SetOpts {
  int d = 5;
  std::string points = "0 0 0 0 0";
  std::string set_file;
};

void bind_set(Binder& b, SetOpts& s, int default_d = 5, const char* default_points = "0 0 0 0 0") {
  s.d = default_d;
  s.points = default_points;
  b.bind("d", s.d, "lattice dimension");
  b.bind("points", s.points, "inline point set: \"x1 .. xd; y1 .. yd\"");
  b.bind("set", s.set_file, "point set file (overrides --points)");
}

PointSet load_set(const SetOpts& s) {
  if (!s.set_file.empty()) {
    PointSet ps = load_point_set(s.set_file);
    if (ps.dim() != s.d)
      throw std::runtime_error("set file dimension " + std::to_string(ps.dim()) +
                               " does not match --d " + std::to_string(s.d));
    return ps;
  }
  return cl::parse_points(s.d, s.points);
}

int run_capacity(Binder& b, const CommonOpts& common, const SetOpts& set_opts,
                 const std::string& kernel, int N, double gamma, const std::string& route,
                 std::uint64_t replicas, std::uint64_t horizon, double site_fraction,
                 double qp_tol) {
  Stopwatch sw;
  RunContext rc{"capacity", b.resolve(), b.out_root(), common};
  PointSet a = load_set(set_opts);
  rc.trends.header = {"route", "value", "se", "replicas", "bias_lo", "bias_hi"};

  bool want_exact = route == "exact" || route == "all";
  bool want_qp = route == "qp" || route == "all";
  bool want_mc = route == "mc" || route == "all";
  if (!(want_exact || want_qp || want_mc))
    throw std::runtime_error("route must be exact, qp, mc or all");

  double exact_value = 0.0;
  if (kernel == "green") {
    if (want_exact) {
      auto r = cap_green_exact(set_opts.d, a, N);
      exact_value = r.value;
      rc.results["exact"] = cl::capacity_json(r);
      rc.trends.add_row({"exact", cl::fmt_double(r.value), "0", "0", "0", "0"});
      if (r.clamped) rc.warnings.push_back("equilibrium weights were clamped at zero");
    }
    if (want_qp) {
      auto r = cap_qp(KernelSpec::green(set_opts.d, N), a, qp_tol);
      rc.results["qp"] = cl::capacity_json(r);
      rc.trends.add_row({"qp", cl::fmt_double(r.value), "0", "0", "0", "0"});
      if (want_exact && exact_value > 0 &&
          std::abs(r.value - exact_value) > 1e-4 * exact_value)
        rc.warnings.push_back("exact and QP capacities differ by more than 1e-4 relative");
    }
    if (want_mc) {
      if (N != 1) throw std::runtime_error("the mc route needs N=1");
      auto e = cap_escape_mc(set_opts.d, a, replicas, horizon, SeedSpec{common.seed, 0},
                             site_fraction, common.workers);
      rc.results["mc"] = cl::estimate_json(e);
      std::vector<std::string> row = {"mc"};
      append(row, est_row(e));
      rc.trends.add_row(row);
      if (want_exact && std::abs(e.mean - exact_value) > 3.0 * e.se + e.bias_hi)
        rc.warnings.push_back("mc estimate sits outside 3 sigma + bias of the exact value");
    }
  } else if (kernel == "radial") {
    if (!want_qp) throw std::runtime_error("radial kernel supports the qp route only");
    auto r = cap_gamma(set_opts.d, gamma, a, qp_tol);
    rc.results["qp"] = cl::capacity_json(r);
    rc.trends.add_row({"qp", cl::fmt_double(r.value), "0", "0", "0", "0"});
  } else {
    throw std::runtime_error("kernel must be green or radial");
  }

  rc.wall = sw.secs();
  return finalize(rc);
}

int run_bcap(Binder& b, const CommonOpts& common, const SetOpts& set_opts,
             const std::string& law_name, const std::string& route, std::uint64_t spine_len,
             std::uint64_t replicas, std::uint64_t lln_n, std::uint64_t lln_replicas,
             int box_radius, std::uint64_t node_cap) {
  Stopwatch sw;
  RunContext rc{"bcap", b.resolve(), b.out_root(), common};
  OffspringLaw law = OffspringLaw::parse(law_name);
  PointSet a = load_set(set_opts);
  rc.trends.header = {"route", "value", "se", "replicas", "bias_lo", "bias_hi"};

  bool want_spine = route == "spine" || route == "all";
  bool want_lln = route == "lln" || route == "all";
  bool want_escape = route == "escape" || route == "all";
  if (!(want_spine || want_lln || want_escape))
    throw std::runtime_error("route must be spine, lln, escape or all");

  if (want_spine) {
    if (set_opts.d != 5) throw std::runtime_error("the spine route needs d=5");
    BushField field(law, a, {.box_radius = box_radius});
    auto e = bcap_escape_spine(field, spine_len, replicas, SeedSpec{common.seed, 0},
                               common.workers);
    rc.results["spine"] = cl::estimate_json(e);
    rc.results["field"] = {{"kappa", field.kappa()},
                           {"kappa_spread", field.kappa_spread()},
                           {"rel_error", field.field_rel_error()},
                           {"sweeps", field.sweeps_used()},
                           {"box_radius", field.box_radius()}};
    std::vector<std::string> row = {"spine"};
    append(row, est_row(e));
    rc.trends.add_row(row);
    if (field.field_rel_error() > 0.1)
      rc.warnings.push_back("bush field relative error exceeds 0.1; raise box-radius");
  }
  if (want_lln) {
    auto e = bcap_lln(law, a, lln_n, lln_replicas, SeedSpec{common.seed, 1u << 20},
                      common.workers);
    rc.results["lln"] = cl::estimate_json(e);
    std::vector<std::string> row = {"lln"};
    append(row, est_row(e));
    rc.trends.add_row(row);
  }
  if (want_escape) {
    TreeLimits lim;
    lim.node_cap = node_cap;
    auto e = bcap_escape(law, a, spine_len, replicas, SeedSpec{common.seed, 2u << 20}, lim,
                         common.workers);
    rc.results["escape"] = cl::estimate_json(e);
    std::vector<std::string> row = {"escape"};
    append(row, est_row(e));
    rc.trends.add_row(row);
  }

  rc.wall = sw.secs();
  return finalize(rc);
}

int run_sausage(Binder& b, const CommonOpts& common, const SetOpts& set_opts, int N,
                const std::string& route, std::uint64_t n, std::uint64_t replicas,
                std::uint64_t dual_replicas, std::uint64_t horizon, const std::string& n_grid) {
  Stopwatch sw;
  RunContext rc{"sausage", b.resolve(), b.out_root(), common};
  PointSet a = load_set(set_opts);
  rc.trends.header = {"route", "n", "value", "se", "replicas", "bias_lo", "bias_hi"};

  bool want_lln = route == "lln" || route == "both";
  bool want_dual = route == "dual" || route == "both";
  if (!(want_lln || want_dual)) throw std::runtime_error("route must be lln, dual or both");

  if (want_lln) {
    std::vector<std::uint64_t> ns = n_grid.empty() ? std::vector<std::uint64_t>{n}
                                                   : cl::parse_u64_list(n_grid);
    json rows = json::array();
    std::uint64_t stream = 0;
    for (std::uint64_t ni : ns) {
      auto e = f_N_lln(set_opts.d, N, a, ni, replicas, SeedSpec{common.seed, stream},
                       common.workers);
      stream += replicas;
      rows.push_back({{"n", ni}, {"estimate", cl::estimate_json(e)}});
      std::vector<std::string> row = {"lln", std::to_string(ni)};
      append(row, est_row(e));
      rc.trends.add_row(row);
    }
    rc.results["lln"] = rows;
  }
  if (want_dual) {
    auto e = f_N_dual(set_opts.d, N, a, dual_replicas, SeedSpec{common.seed, 1u << 24}, horizon,
                      common.workers);
    rc.results["dual"] = cl::estimate_json(e);
    std::vector<std::string> row = {"dual", "0"};
    append(row, est_row(e));
    rc.trends.add_row(row);
  }

  rc.wall = sw.secs();
  return finalize(rc);
}

int run_hitting(Binder& b, const CommonOpts& common, const SetOpts& set_opts, int N,
                const std::string& shells_s, const std::string& replicas_s) {
  Stopwatch sw;
  RunContext rc{"hitting", b.resolve(), b.out_root(), common};
  PointSet a = load_set(set_opts);
  auto shells = cl::parse_double_list(shells_s);
  auto reps = broadcast(cl::parse_u64_list(replicas_s), shells.size(), "--replicas");

  auto res = ks_ratio_experiment(set_opts.d, N, a, shells, reps, SeedSpec{common.seed, 0},
                                 common.workers);
  rc.trends.header = {"shell", "prob", "se", "bias_hi", "ratio", "censored"};
  json rows = json::array();
  for (const auto& r : res.rows) {
    rc.trends.add_row({cl::fmt_double(r.shell), cl::fmt_double(r.prob.mean),
                       cl::fmt_double(r.prob.se), cl::fmt_double(r.prob.bias_hi),
                       cl::fmt_double(r.ratio), r.censored ? "1" : "0"});
    rows.push_back({{"shell", r.shell},
                    {"prob", cl::estimate_json(r.prob)},
                    {"ratio", r.ratio},
                    {"censored", r.censored}});
    if (r.censored)
      rc.warnings.push_back("censored shell |z|=" + std::to_string(std::lround(r.shell)) +
                            ": no hits observed");
  }
  rc.results["rows"] = rows;
  rc.results["cap_low"] = res.cap_low;
  rc.results["slope"] = res.slope;
  rc.results["band_max_over_min"] = res.band_max_over_min;

  rc.wall = sw.secs();
  return finalize(rc);
}

int run_iequiv(Binder& b, const CommonOpts& common, const SetOpts& set_opts,
               const std::string& law_name, const std::string& shells_s,
               const std::string& tree_reps_s, const std::string& walk_reps_s,
               double spine_scale) {
  Stopwatch sw;
  RunContext rc{"iequiv", b.resolve(), b.out_root(), common};
  if (set_opts.d != 5) throw std::runtime_error("iequiv needs d=5");
  OffspringLaw law = OffspringLaw::parse(law_name);
  PointSet a = load_set(set_opts);
  auto shells = cl::parse_double_list(shells_s);
  auto tree_reps = broadcast(cl::parse_u64_list(tree_reps_s), shells.size(), "--tree-replicas");
  auto walk_reps = broadcast(cl::parse_u64_list(walk_reps_s), shells.size(), "--walk-replicas");

  auto res = intersection_equivalence(law, a, shells, tree_reps, walk_reps,
                                      SeedSpec{common.seed, 0}, spine_scale, common.workers);
  rc.trends.header = {"shell", "tree_prob", "tree_se", "walk_prob", "walk_se", "ratio",
                      "censored"};
  json rows = json::array();
  for (const auto& r : res.rows) {
    rc.trends.add_row({cl::fmt_double(r.shell), cl::fmt_double(r.tree_prob.mean),
                       cl::fmt_double(r.tree_prob.se), cl::fmt_double(r.walk_prob.mean),
                       cl::fmt_double(r.walk_prob.se), cl::fmt_double(r.ratio),
                       r.censored ? "1" : "0"});
    rows.push_back({{"shell", r.shell},
                    {"tree_prob", cl::estimate_json(r.tree_prob)},
                    {"walk_prob", cl::estimate_json(r.walk_prob)},
                    {"tree_norm", r.tree_norm},
                    {"ratio", r.ratio},
                    {"censored", r.censored}});
    if (r.censored)
      rc.warnings.push_back("censored shell |x|=" + std::to_string(std::lround(r.shell)));
  }
  rc.results["rows"] = rows;
  rc.results["band_max_over_min"] = res.band_max_over_min;
  rc.results["field_rel_error"] = res.field_rel_error;
  if (res.band_max_over_min > 10.0)
    rc.warnings.push_back("tree/walk ratio band exceeds 10");

  rc.wall = sw.secs();
  return finalize(rc);
}

int run_d4rate(Binder& b, const CommonOpts& common, const SetOpts& set_opts,
               const std::string& ns_s, std::uint64_t replicas, std::uint64_t horizon,
               double site_fraction) {
  Stopwatch sw;
  RunContext rc{"d4rate", b.resolve(), b.out_root(), common};
  if (set_opts.d != 4) throw std::runtime_error("d4rate needs d=4");
  PointSet a = load_set(set_opts);
  auto ns = cl::parse_u64_list(ns_s);

  auto rows = d4_capacity_rate(a, ns, replicas, horizon, site_fraction, SeedSpec{common.seed, 0},
                               common.workers);
  const double ref = 1.2337005501361697;  // pi^2 / 8, the d=4 limit constant
  rc.trends.header = {"n", "rate", "se", "replicas", "bias_lo", "bias_hi", "rate_over_limit"};
  json jrows = json::array();
  for (const auto& r : rows) {
    std::vector<std::string> row = {std::to_string(r.n)};
    append(row, est_row(r.rate));
    row.push_back(cl::fmt_double(r.rate.mean / ref));
    rc.trends.add_row(row);
    jrows.push_back({{"n", r.n}, {"rate", cl::estimate_json(r.rate)}});
  }
  rc.results["rows"] = jrows;
  rc.results["limit_constant"] = ref;

  rc.wall = sw.secs();
  return finalize(rc);
}

int run_tree_chain(Binder& b, const CommonOpts& common, const SetOpts& set_opts,
                   const std::string& law_name, const ChainParams& params) {
  Stopwatch sw;
  RunContext rc{"tree-chain", b.resolve(), b.out_root(), common};
  if (set_opts.d != 5) throw std::runtime_error("tree-chain needs d=5");
  OffspringLaw law = OffspringLaw::parse(law_name);
  PointSet a = load_set(set_opts);

  auto res = tree_sausage_chain(law, a, params, SeedSpec{common.seed, 0}, common.workers);
  rc.results["bcap"] = cl::estimate_json(res.bcap);
  rc.results["cap_low"] = cl::capacity_json(res.cap_low);
  rc.results["f2_walks"] = cl::estimate_json(res.f2_walks);
  rc.results["f2_tree"] = cl::estimate_json(res.f2_tree);
  rc.results["ratio_bcap_cap"] = res.ratio_bcap_cap;
  rc.results["ratio_walks_cap"] = res.ratio_walks_cap;
  rc.results["ratio_tree_walks"] = res.ratio_tree_walks;
  rc.trends.header = {"quantity", "value"};
  rc.trends.add_row({"bcap", cl::fmt_double(res.bcap.mean)});
  rc.trends.add_row({"cap_low", cl::fmt_double(res.cap_low.value)});
  rc.trends.add_row({"f2_walks", cl::fmt_double(res.f2_walks.mean)});
  rc.trends.add_row({"f2_tree", cl::fmt_double(res.f2_tree.mean)});
  rc.trends.add_row({"ratio_bcap_cap", cl::fmt_double(res.ratio_bcap_cap)});
  rc.trends.add_row({"ratio_walks_cap", cl::fmt_double(res.ratio_walks_cap)});
  rc.trends.add_row({"ratio_tree_walks", cl::fmt_double(res.ratio_tree_walks)});

  rc.wall = sw.secs();
  return finalize(rc);
}

int run_verify(Binder& b, const CommonOpts& common, const std::string& ids_s, bool fast) {
  Stopwatch sw;
  RunContext rc{"verify", b.resolve(), b.out_root(), common};
  std::vector<int> ids;
  if (!ids_s.empty()) ids = cl::parse_int_list(ids_s);

  std::vector<CheckResult> checks;
  auto show = [&](const VerifyReport& rep) {
    for (const auto& c : rep.checks) {
      std::printf("%s %-44s %8.1fs  %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.seconds,
                  c.detail.c_str());
      std::fflush(stdout);
      checks.push_back(c);
    }
  };
  if (fast) {
    show(run_fast(common.seed, common.workers));
  } else {
    if (ids.empty())
      for (int i = 1; i <= 12; ++i) ids.push_back(i);
    for (int id : ids) show(run_full(common.seed, common.workers, {id}));
  }

  rc.trends.header = {"criterion", "pass", "seconds"};
  json jrows = json::array();
  bool all = !checks.empty();
  for (const auto& c : checks) {
    rc.trends.add_row({c.name, c.pass ? "1" : "0", cl::fmt_double(c.seconds)});
    jrows.push_back(
        {{"name", c.name}, {"pass", c.pass}, {"seconds", c.seconds}, {"detail", c.detail}});
    if (!c.pass) {
      all = false;
      rc.warnings.push_back("criterion failed: " + c.name);
    }
  }
  rc.results["criteria"] = jrows;
  rc.results["all_pass"] = all;

  rc.wall = sw.secs();
  return finalize(rc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation toolkit for walk capacities, branching capacities and "
               "range sausage volumes on Z^d"};
  app.require_subcommand(1);
  int exit_code = 0;

  // capacity
  {
    auto b = std::make_shared<Binder>(app.add_subcommand(
        "capacity", "capacity of a finite set: exact solve, simplex QP, escape MC"));
    auto common = std::make_shared<CommonOpts>();
    auto set_opts = std::make_shared<SetOpts>();
    auto kernel = std::make_shared<std::string>("green");
    auto N = std::make_shared<int>(1);
    auto gamma = std::make_shared<double>(1.0);
    auto route = std::make_shared<std::string>("all");
    auto replicas = std::make_shared<std::uint64_t>(4000);
    auto horizon = std::make_shared<std::uint64_t>(40000);
    auto site_fraction = std::make_shared<double>(1.0);
    auto qp_tol = std::make_shared<double>(1e-8);
    bind_common(*b, *common);
    bind_set(*b, *set_opts);
    b->bind("kernel", *kernel, "green | radial");
    b->bind("N", *N, "Green kernel convolution order (green kernel)");
    b->bind("gamma", *gamma, "radial kernel exponent (radial kernel)");
    b->bind("route", *route, "exact | qp | mc | all");
    b->bind("replicas", *replicas, "escape MC replicas");
    b->bind("horizon", *horizon, "escape MC walk horizon");
    b->bind("site-fraction", *site_fraction, "escape MC per-site subsampling");
    b->bind("qp-tol", *qp_tol, "QP duality gap tolerance");
    b->parent()->callback([=, &exit_code] {
      exit_code = run_capacity(*b, *common, *set_opts, *kernel, *N, *gamma, *route, *replicas,
                               *horizon, *site_fraction, *qp_tol);
    });
  }

  // bcap
  {
    auto b = std::make_shared<Binder>(app.add_subcommand(
        "bcap", "branching capacity: conditioned-spine, LLN and direct escape routes"));
    auto common = std::make_shared<CommonOpts>();
    auto set_opts = std::make_shared<SetOpts>();
    auto law = std::make_shared<std::string>("geometric_half");
    auto route = std::make_shared<std::string>("spine");
    auto spine_len = std::make_shared<std::uint64_t>(4000);
    auto replicas = std::make_shared<std::uint64_t>(20000);
    auto lln_n = std::make_shared<std::uint64_t>(200000);
    auto lln_replicas = std::make_shared<std::uint64_t>(64);
    auto box_radius = std::make_shared<int>(12);
    auto node_cap = std::make_shared<std::uint64_t>(10000000);
    bind_common(*b, *common);
    bind_set(*b, *set_opts);
    b->bind("law", *law, "offspring law: geometric_half | binary | poisson_trunc | delta_one");
    b->bind("route", *route, "spine | lln | escape | all");
    b->bind("spine-len", *spine_len, "spine truncation length");
    b->bind("replicas", *replicas, "spine/escape replicas");
    b->bind("lln-n", *lln_n, "tree prefix length for the LLN route");
    b->bind("lln-replicas", *lln_replicas, "LLN replicas");
    b->bind("box-radius", *box_radius, "bush-field box radius (spine route)");
    b->bind("node-cap", *node_cap, "tree node cap (escape route)");
    b->parent()->callback([=, &exit_code] {
      exit_code = run_bcap(*b, *common, *set_opts, *law, *route, *spine_len, *replicas, *lln_n,
                           *lln_replicas, *box_radius, *node_cap);
    });
  }

  // sausage
  {
    auto b = std::make_shared<Binder>(app.add_subcommand(
        "sausage", "sausage volume limits f_N: range LLN and escape-sum dual"));
    auto common = std::make_shared<CommonOpts>();
    auto set_opts = std::make_shared<SetOpts>();
    auto N = std::make_shared<int>(2);
    auto route = std::make_shared<std::string>("dual");
    auto n = std::make_shared<std::uint64_t>(20000);
    auto replicas = std::make_shared<std::uint64_t>(200);
    auto dual_replicas = std::make_shared<std::uint64_t>(4000);
    auto horizon = std::make_shared<std::uint64_t>(0);
    auto n_grid = std::make_shared<std::string>("");
    bind_common(*b, *common);
    bind_set(*b, *set_opts);
    b->bind("N", *N, "number of independent walk ranges");
    b->bind("route", *route, "lln | dual | both");
    b->bind("n", *n, "steps per walk (lln route)");
    b->bind("replicas", *replicas, "lln replicas");
    b->bind("dual-replicas", *dual_replicas, "dual route replicas");
    b->bind("horizon", *horizon, "dual route walk horizon (0 = auto)");
    b->bind("n-grid", *n_grid, "comma list of n values; overrides --n");
    b->parent()->callback([=, &exit_code] {
      exit_code = run_sausage(*b, *common, *set_opts, *N, *route, *n, *replicas, *dual_replicas,
                              *horizon, *n_grid);
    });
  }

  // hitting
  {
    auto b = std::make_shared<Binder>(app.add_subcommand(
        "hitting", "shell hitting probabilities of z + sum of walk ranges, ratio to Cap_{d-2N}"));
    auto common = std::make_shared<CommonOpts>();
    auto set_opts = std::make_shared<SetOpts>();
    auto N = std::make_shared<int>(2);
    auto shells = std::make_shared<std::string>("20,40,80");
    auto replicas = std::make_shared<std::string>("16000,8000,4000");
    bind_common(*b, *common);
    bind_set(*b, *set_opts);
    b->bind("N", *N, "number of walk ranges added to z");
    b->bind("shells", *shells, "comma list of |z| shells");
    b->bind("replicas", *replicas, "replicas per shell (1 value broadcasts)");
    b->parent()->callback([=, &exit_code] {
      exit_code = run_hitting(*b, *common, *set_opts, *N, *shells, *replicas);
    });
  }

  // iequiv
  {
    auto b = std::make_shared<Binder>(app.add_subcommand(
        "iequiv", "past-tree vs walk-pair hitting probabilities across |x| shells (d=5)"));
    auto common = std::make_shared<CommonOpts>();
    auto set_opts = std::make_shared<SetOpts>();
    auto law = std::make_shared<std::string>("geometric_half");
    auto shells = std::make_shared<std::string>("20,40,80");
    auto tree_reps = std::make_shared<std::string>("8000,6000,4000");
    auto walk_reps = std::make_shared<std::string>("16000,8000,4000");
    auto spine_scale = std::make_shared<double>(5.0);
    bind_common(*b, *common);
    bind_set(*b, *set_opts);
    b->bind("law", *law, "offspring law");
    b->bind("shells", *shells, "comma list of |x| shells");
    b->bind("tree-replicas", *tree_reps, "tree-side replicas per shell");
    b->bind("walk-replicas", *walk_reps, "walk-side replicas per shell");
    b->bind("spine-scale", *spine_scale, "spine length = (scale * |x|)^2");
    b->parent()->callback([=, &exit_code] {
      exit_code = run_iequiv(*b, *common, *set_opts, *law, *shells, *tree_reps, *walk_reps,
                             *spine_scale);
    });
  }

  // d4rate
  {
    auto b = std::make_shared<Binder>(app.add_subcommand(
        "d4rate", "d=4 log-corrected capacity rate (log n / n) E[cap(R_n + A)]"));
    auto common = std::make_shared<CommonOpts>();
    auto set_opts = std::make_shared<SetOpts>();
    auto ns = std::make_shared<std::string>("20000,50000,100000");
    auto replicas = std::make_shared<std::uint64_t>(30);
    auto horizon = std::make_shared<std::uint64_t>(40000);
    auto site_fraction = std::make_shared<double>(0.1);
    bind_common(*b, *common);
    bind_set(*b, *set_opts, 4, "0 0 0 0");
    b->bind("ns", *ns, "comma list of walk lengths n");
    b->bind("replicas", *replicas, "range replicas per n");
    b->bind("horizon", *horizon, "escape horizon inside the capacity estimator");
    b->bind("site-fraction", *site_fraction, "escape site subsampling");
    b->parent()->callback([=, &exit_code] {
      exit_code = run_d4rate(*b, *common, *set_opts, *ns, *replicas, *horizon, *site_fraction);
    });
  }

  // tree-chain
  {
    auto b = std::make_shared<Binder>(app.add_subcommand(
        "tree-chain", "comparability chain: BCap, Cap_{d-4}, f_2 via walks, tree LLN (d=5)"));
    auto common = std::make_shared<CommonOpts>();
    auto set_opts = std::make_shared<SetOpts>();
    auto law = std::make_shared<std::string>("geometric_half");
    auto params = std::make_shared<ChainParams>();
    bind_common(*b, *common);
    bind_set(*b, *set_opts);
    b->bind("law", *law, "offspring law");
    b->bind("escape-spine-len", params->escape_spine_len, "escape spine truncation");
    b->bind("escape-replicas", params->escape_replicas, "escape replicas");
    b->bind("lln-n", params->lln_n, "tree prefix length");
    b->bind("lln-replicas", params->lln_replicas, "tree LLN replicas");
    b->bind("dual-replicas", params->dual_replicas, "f_2 dual replicas");
    b->bind("qp-tol", params->qp_tol, "radial capacity QP tolerance");
    b->parent()->callback([=, &exit_code] {
      exit_code = run_tree_chain(*b, *common, *set_opts, *law, *params);
    });
  }

  // verify
  {
    auto b = std::make_shared<Binder>(app.add_subcommand(
        "verify", "run the acceptance criteria; one PASS/FAIL line per criterion"));
    auto common = std::make_shared<CommonOpts>();
    auto ids = std::make_shared<std::string>("");
    auto fast = std::make_shared<bool>(false);
    bind_common(*b, *common);
    b->bind("ids", *ids, "comma list of criterion ids (default: all)");
    b->bind_flag("fast", *fast, "run the quick smoke subset instead");
    b->parent()->callback(
        [=, &exit_code] { exit_code = run_verify(*b, *common, *ids, *fast); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return exit_code;
}
