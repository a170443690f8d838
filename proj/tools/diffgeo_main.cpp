// diffgeo: batch front end for the diffeomorphism-group toolkit.
// Subcommands: gen, metric, coords, factor, chain, ob, verify.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "diffgeo/config.hpp"
#include "diffgeo/geometry.hpp"
#include "diffgeo/serialization.hpp"
#include "diffgeo/verify.hpp"

namespace dg = diffgeo;

namespace {

struct RunConfig {
  int n = dg::DEFAULT_GRID_N;
  int k = 1;
  double tol = dg::TOL_NUM;
  bool tol_set = false;
  uint64_t seed = 20240817ULL;
  std::string out;
  int threads = 1;
};

void check_grid(const RunConfig& cfg) {
  if (cfg.n < 16 || cfg.n % 2 != 0)
    throw std::invalid_argument("grid size must be even and at least 16");
  if (cfg.k < 1 || cfg.k > dg::K_MAX)
    throw std::invalid_argument("order must lie in [1, " + std::to_string(dg::K_MAX) + "]");
}

int env_threads() {
  const char* raw = std::getenv("DIFFGEO_THREADS");
  if (!raw) return 1;
  int v = std::atoi(raw);
  return v >= 1 ? v : 1;
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty())
    std::cout << text;
  else
    dg::write_text_file(out, text);
}

std::string format_metric(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%#.12g", v);
  return std::string(buf);
}

int run_gen(const RunConfig& cfg, const std::string& family, double a, double t) {
  check_grid(cfg);
  dg::json j;
  if (family == "identity" || family == "exp") {
    j = dg::to_json(dg::from_family(family, {a}, cfg.k, cfg.n));
  } else if (family == "mobius") {
    j = dg::to_json(dg::from_family(family, {t}, cfg.k, cfg.n));
  } else if (family == "rotation") {
    j = dg::to_json(dg::rotation(t, cfg.k, cfg.n));
  } else if (family == "cosine") {
    j = dg::to_json(dg::cosine_circle(a, t, cfg.k, cfg.n));
  } else {
    throw std::invalid_argument("unknown family " + family);
  }
  emit(cfg.out, j.dump(2) + "\n");
  return 0;
}

int run_metric(const RunConfig& cfg, const std::string& kind, const std::string& file_a,
               const std::string& file_b) {
  dg::json ja = dg::load_json_file(file_a);
  dg::json jb = dg::load_json_file(file_b);
  if (dg::manifold_of(ja) != dg::manifold_of(jb))
    throw std::invalid_argument("manifold mismatch between inputs");
  double v = 0.0;
  if (dg::manifold_of(ja) == "interval") {
    dg::IntervalDiffeo f = dg::interval_from_json(ja);
    dg::IntervalDiffeo g = dg::interval_from_json(jb);
    if (kind == "rho")
      v = dg::rho(f, g, cfg.k);
    else if (kind == "dk")
      v = dg::dk(f, g, cfg.k);
    else
      throw std::invalid_argument("sigma1 requires circle diffeomorphisms");
  } else {
    dg::CircleDiffeo f = dg::circle_from_json(ja);
    dg::CircleDiffeo g = dg::circle_from_json(jb);
    if (kind == "rho") {
      v = dg::rho(f, g, cfg.k);
    } else if (kind == "dk") {
      v = dg::circle_dk(f, g, cfg.k);
      std::cerr << "note: d_k on the circle is a pseudometric, not a metric "
                   "(every rotation is at distance 0 from the identity)\n";
    } else if (kind == "sigma1") {
      v = dg::sigma1(f, g);
    } else {
      throw std::invalid_argument("unknown metric kind " + kind);
    }
  }
  std::cout << format_metric(v) << "\n";
  return 0;
}

int run_coords(const RunConfig& cfg, const std::string& file) {
  dg::json j = dg::load_json_file(file);
  dg::PhiCoords c;
  if (dg::manifold_of(j) == "interval")
    c = dg::Phi(dg::interval_from_json(j), cfg.k);
  else
    c = dg::circle_Phi(dg::circle_from_json(j), cfg.k);
  emit(cfg.out, dg::to_json(c).dump(2) + "\n");
  return 0;
}

template <typename D>
void write_factorization(const dg::FactorizationResult<D>& res, const std::string& outdir) {
  std::filesystem::create_directories(outdir);
  std::ostringstream csv;
  csv << "i,radius\n";
  for (size_t i = 0; i < res.factors.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "factor_%03zu.json", i);
    dg::write_text_file(outdir + "/" + name, dg::to_json(res.factors[i]).dump(2) + "\n");
    csv << i << "," << dg::fmt_double(res.radii[i]) << "\n";
  }
  dg::write_text_file(outdir + "/radii.csv", csv.str());
  std::cout << "factors " << res.factors.size() << " recomposition_error "
            << dg::fmt_double(res.recomposition_error) << "\n";
}

int run_factor(const RunConfig& cfg, const std::string& file, double eps,
               const std::string& outdir) {
  dg::json j = dg::load_json_file(file);
  if (dg::manifold_of(j) == "interval") {
    write_factorization(dg::factor_into_ball(dg::interval_from_json(j), cfg.k, eps), outdir);
  } else {
    write_factorization(dg::factor_into_ball(dg::circle_from_json(j), cfg.k, eps), outdir);
  }
  return 0;
}

int run_chain(const RunConfig& cfg, const std::string& file, const std::string& steps) {
  dg::CircleDiffeo f = dg::circle_from_json(dg::load_json_file(file));
  int n = 0;
  if (steps != "auto") {
    n = std::atoi(steps.c_str());
    if (n <= 0) throw std::domain_error("chain step count must be positive or 'auto'");
  }
  dg::ChainResult res = dg::geodesic_chain(f, n);
  std::ostringstream csv;
  csv << "i,step_cost\n";
  for (size_t i = 0; i < res.step_costs.size(); ++i)
    csv << (i + 1) << "," << dg::fmt_double(res.step_costs[i]) << "\n";
  emit(cfg.out, csv.str());
  std::cout << "steps " << res.step_costs.size() << " total_cost "
            << dg::fmt_double(res.total_cost) << "\n";
  return 0;
}

int run_ob(const RunConfig& cfg, const std::vector<std::string>& files) {
  if (files.empty()) throw std::invalid_argument("ob: no input files");
  std::vector<dg::json> docs;
  for (const std::string& f : files) docs.push_back(dg::load_json_file(f));
  std::string manifold = dg::manifold_of(docs.front());
  dg::ObReport rep;
  if (manifold == "interval") {
    std::vector<dg::IntervalDiffeo> family;
    for (const dg::json& d : docs) family.push_back(dg::interval_from_json(d));
    rep = dg::ob_bounds(family, cfg.k);
  } else {
    std::vector<dg::CircleDiffeo> family;
    for (const dg::json& d : docs) family.push_back(dg::circle_from_json(d));
    rep = dg::ob_bounds(family, cfg.k);
  }
  std::ostringstream csv;
  csv << "j,sup\n";
  csv << "1," << dg::fmt_double(rep.sup_log_deriv) << "\n";
  for (int j = 2; j <= rep.order; ++j)
    csv << j << "," << dg::fmt_double(rep.sup_higher[static_cast<size_t>(j) - 2]) << "\n";
  emit(cfg.out, csv.str());
  return 0;
}

int run_verify(const RunConfig& cfg, const std::string& suite) {
  check_grid(cfg);
  std::vector<dg::CheckRow> rows;
  if (suite == "identities" || suite == "all") {
    auto r = dg::verify_identities(std::max(cfg.k, 2), cfg.n);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  if (suite == "invariants" || suite == "all") {
    auto r = dg::verify_invariants(std::max(cfg.k, 2), cfg.n, cfg.seed);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  if (rows.empty()) throw std::invalid_argument("unknown suite " + suite);
  if (cfg.tol_set)
    for (dg::CheckRow& row : rows)
      if (row.tolerance == dg::TOL_NUM) row.tolerance = cfg.tol;
  std::ostringstream csv;
  csv << "kind,k,max_residual\n";
  bool ok = true;
  for (const dg::CheckRow& row : rows) {
    csv << row.kind << "," << row.k << "," << dg::fmt_double(row.residual) << "\n";
    if (!(row.residual <= row.tolerance)) ok = false;
  }
  emit(cfg.out, csv.str());
  if (cfg.out.empty()) std::cout.flush();
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical toolkit for diffeomorphism groups of the interval and circle"};
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.threads = env_threads();
  app.add_option("--n", cfg.n, "grid panels (even, >= 16)")->capture_default_str();
  app.add_option("--k", cfg.k, "jet order")->capture_default_str();
  app.add_option("--tol", cfg.tol, "override the numeric tolerance used by verify")
      ->each([&cfg](const std::string&) { cfg.tol_set = true; });
  app.add_option("--seed", cfg.seed, "seed for randomized sweeps")->capture_default_str();
  app.add_option("--out", cfg.out, "output path (stdout when omitted)");
  app.fallthrough();

  std::string family = "identity";
  double param_a = 0.0, param_t = 0.0;
  CLI::App* gen = app.add_subcommand("gen", "generate a diffeomorphism JSON");
  gen->add_option("--family", family, "identity|exp|mobius|rotation|cosine")->required();
  gen->add_option("--a", param_a, "exp/cosine amplitude parameter");
  gen->add_option("--t", param_t, "mobius/rotation parameter");

  std::string kind = "dk";
  std::string file_a, file_b;
  CLI::App* metric = app.add_subcommand("metric", "distance between two diffeomorphisms");
  metric->add_option("--kind", kind, "rho|dk|sigma1")->required();
  metric->add_option("--order", cfg.k, "metric order");
  metric->add_option("fileA", file_a)->required();
  metric->add_option("fileB", file_b)->required();

  std::string coords_file;
  CLI::App* coords = app.add_subcommand("coords", "Phi_k coordinates of a diffeomorphism");
  coords->add_option("--order", cfg.k, "coordinate order");
  coords->add_option("file", coords_file)->required();

  std::string factor_file, outdir = "factors";
  double eps = 0.5;
  CLI::App* factor = app.add_subcommand("factor", "epsilon-ball factorization");
  factor->add_option("--order", cfg.k, "phi-path order");
  factor->add_option("--eps", eps, "ball radius")->required();
  factor->add_option("--outdir", outdir, "directory for factor files");
  factor->add_option("file", factor_file)->required();

  std::string chain_file, steps = "auto";
  CLI::App* chain = app.add_subcommand("chain", "large-scale geodesic chain (circle)");
  chain->add_option("--steps", steps, "step count or 'auto'");
  chain->add_option("file", chain_file)->required();

  std::vector<std::string> ob_files;
  CLI::App* ob = app.add_subcommand("ob", "boundedness report for a family");
  ob->add_option("files", ob_files)->required();

  std::string suite = "identities";
  CLI::App* verify = app.add_subcommand("verify", "run identity/invariant suites");
  verify->add_option("--suite", suite, "identities|invariants|all");
  verify->add_option("--order", cfg.k, "highest order to verify");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen(cfg, family, param_a, param_t);
    if (metric->parsed()) return run_metric(cfg, kind, file_a, file_b);
    if (coords->parsed()) return run_coords(cfg, coords_file);
    if (factor->parsed()) return run_factor(cfg, factor_file, eps, outdir);
    if (chain->parsed()) return run_chain(cfg, chain_file, steps);
    if (ob->parsed()) return run_ob(cfg, ob_files);
    if (verify->parsed()) return run_verify(cfg, suite);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
