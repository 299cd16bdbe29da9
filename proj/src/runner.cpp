#include "geomlab/runner.hpp"

#include <cstdlib>

#include "geomlab/acceptance.hpp"
#include "geomlab/convex_interp.hpp"
#include "geomlab/curvature.hpp"
#include "geomlab/geodesics.hpp"
#include "geomlab/qift.hpp"
#include "geomlab/symplectic_polar.hpp"
#include "json.hpp"

namespace geomlab {

using nlohmann::ordered_json;

std::vector<VectorXd> sample_grid(const ChartDomain& domain, int per_axis, double fraction) {
  const int n = domain.dim();
  double r = domain.radius * fraction;
  std::vector<VectorXd> pts;
  std::vector<int> idx(n, 0);
  while (true) {
    VectorXd x = domain.center;
    for (int i = 0; i < n; ++i) x[i] += -r + 2.0 * r * idx[i] / (per_axis - 1);
    if ((x - domain.center).norm() <= r) pts.push_back(x);
    int i = 0;
    for (; i < n; ++i) {
      if (++idx[i] < per_axis) break;
      idx[i] = 0;
    }
    if (i == n) break;
  }
  return pts;
}

std::vector<VectorXd> sample_random(const ChartDomain& domain, int count, double fraction,
                                    uint64_t seed) {
  Rng rng(seed);
  std::vector<VectorXd> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) pts.push_back(rng.in_ball(domain.center, domain.radius * fraction));
  return pts;
}

namespace {

namespace fs = std::filesystem;

fs::path out_dir(const ExperimentConfig& c) {
  const char* env = std::getenv("GEOMLAB_OUT");
  fs::path base = env ? fs::path(env) : fs::path(c.out);
  return base / c.command;
}

ordered_json config_echo(const ExperimentConfig& c) {
  ordered_json j;
  j["version"] = kVersionStamp;
  j["config_text"] = c.to_text();
  return j;
}

MetricField field_from_config(const ExperimentConfig& c, const std::string& label) {
  std::optional<ChartDomain> dom;
  if (c.radius > 0.0) dom = ChartDomain(VectorXd::Zero(c.dim), c.radius);
  return gallery_field(label, c.dim, dom);
}

// Two gallery fields forced onto a shared chart (config radius or 1.0).
std::pair<MetricField, MetricField> field_pair(const ExperimentConfig& c) {
  double r = c.radius > 0.0 ? c.radius : 1.0;
  ChartDomain dom(VectorXd::Zero(c.dim), r);
  return {gallery_field(c.metric_a, c.dim, dom), gallery_field(c.metric_b, c.dim, dom)};
}

std::vector<double> linspace(int steps) {
  std::vector<double> g;
  for (int i = 0; i < steps; ++i) g.push_back(static_cast<double>(i) / (steps - 1));
  return g;
}

std::vector<VectorXd> base_points_from_config(const ExperimentConfig& c,
                                              const ChartDomain& dom) {
  // extras["points"] = "x0 x1;x0 x1;..." overrides the default trio
  auto it = c.extras.find("points");
  std::vector<VectorXd> pts;
  if (it != c.extras.end()) {
    std::istringstream is(it->second);
    std::string tok;
    while (std::getline(is, tok, ';')) {
      std::istringstream ps(tok);
      VectorXd x(dom.dim());
      for (int i = 0; i < dom.dim(); ++i) ps >> x[i];
      pts.push_back(x);
    }
    return pts;
  }
  pts.push_back(dom.center);
  VectorXd a = dom.center, b = dom.center;
  a[0] += 0.3 * dom.radius;
  b[dom.dim() - 1] -= 0.2 * dom.radius;
  pts.push_back(a);
  pts.push_back(b);
  return pts;
}

RunResult finish(const ExperimentConfig& c, ordered_json& j, bool pass,
                 const std::string& plot = "", const std::string& plot_name = "") {
  j["pass"] = pass;
  fs::path dir = out_dir(c);
  fs::create_directories(dir);
  write_text_file(dir / "summary.json", j.dump(2) + "\n");
  if (!plot.empty()) write_text_file(dir / plot_name, plot);
  RunResult r;
  r.pass = pass;
  r.summary_json = j.dump(2);
  return r;
}

RunResult run_curvature_scan(const ExperimentConfig& c) {
  MetricField field = field_from_config(c, c.metric_a);
  bool analytic = field.mode() == DerivMode::Analytic;
  double tol_sym = analytic ? 1e-8 : 1e-4;
  double tol_b2 = analytic ? 1e-6 : 1e-3;
  std::vector<VectorXd> samples = sample_grid(field.domain(), c.grid, 0.5);

  CsvWriter csv(std::vector<std::string>{});
  std::string header = curvature_csv_header(field.dim());
  std::vector<std::string> cols;
  {
    std::istringstream is(header);
    std::string t;
    while (std::getline(is, t, ',')) cols.push_back(t);
  }
  csv = CsvWriter(cols);

  double worst_sym = 0.0, worst_b1 = 0.0, worst_b2 = 0.0;
  NormEstimate norms;
  for (const auto& x : samples) {
    CurvatureSample s = curvature_sample(field, x);
    std::istringstream is(curvature_csv_row(s));
    std::vector<std::string> cells;
    std::string t;
    while (std::getline(is, t, ',')) cells.push_back(t);
    csv.add_row_mixed(cells);
    worst_sym = std::max(worst_sym, riemann_symmetry_residual(s.riemann));
    worst_b1 = std::max(worst_b1, first_bianchi_residual(s.riemann));
    worst_b2 = std::max(worst_b2, second_bianchi_residual(s.covd_riemann));
    norms.sup_R = std::max(norms.sup_R, s.norm_R);
    norms.sup_DR = std::max(norms.sup_DR, s.norm_DR);
    norms.sup_gamma = std::max(norms.sup_gamma, s.norm_gamma);
  }
  bool pass = worst_sym <= tol_sym && worst_b1 <= tol_sym && worst_b2 <= tol_b2;

  ordered_json j = config_echo(c);
  j["samples"] = samples.size();
  j["sup_R_estimate"] = norms.sup_R;
  j["sup_DR_estimate"] = norms.sup_DR;
  j["sup_gamma_estimate"] = norms.sup_gamma;
  j["worst_symmetry_residual"] = worst_sym;
  j["worst_first_bianchi"] = worst_b1;
  j["worst_second_bianchi"] = worst_b2;
  j["tolerance_symmetry"] = tol_sym;
  j["tolerance_second_bianchi"] = tol_b2;

  fs::path dir = out_dir(c);
  csv.write(dir / "curvature_samples.csv");
  return finish(c, j, pass);
}

RunResult run_convex_path(const ExperimentConfig& c) {
  auto [ga, gb] = field_pair(c);
  int points = c.extra_int_or("points_count", c.grid * c.grid);
  std::vector<VectorXd> samples = sample_random(ga.domain(), points, 0.5, c.seed);
  SweepOptions opts;
  opts.probe_pairs = c.extra_int_or("probe_pairs", 2);
  opts.workers = c.workers;
  ConvexPathSweep sweep =
      convex_path_sweep(ga, gb, linspace(c.s_steps), samples, c.seed + 1, opts);

  std::vector<std::string> cols{"s"};
  for (int i = 0; i < c.dim; ++i) cols.push_back("x" + std::to_string(i));
  for (const char* name :
       {"R_formula", "R_direct", "abs_err", "rel_err", "bound", "sup_norm_Rs"})
    cols.push_back(name);
  CsvWriter csv(cols);
  for (const auto& cell : sweep.cells) {
    size_t si = 0;
    for (; si < sweep.s_grid.size(); ++si)
      if (sweep.s_grid[si] == cell.s) break;
    std::vector<double> row{cell.s};
    for (int i = 0; i < c.dim; ++i) row.push_back(cell.x[i]);
    row.insert(row.end(), {cell.r_formula, cell.r_direct, cell.abs_err, cell.rel_err,
                           sweep.bound[si], sweep.sup_rs[si]});
    csv.add_row(row);
  }

  bool pass = sweep.max_rel_err <= c.tol && sweep.bound_ok;
  ordered_json j = config_echo(c);
  j["max_rel_err"] = sweep.max_rel_err;
  j["tolerance"] = c.tol;
  j["bound_ok"] = sweep.bound_ok;
  j["C0"] = sweep.c0;
  j["C1"] = sweep.c1;
  j["Cprime"] = sweep.cprime;
  j["lambda_P"] = sweep.lambda_p;
  j["max_sup_DRs"] = *std::max_element(sweep.sup_drs.begin(), sweep.sup_drs.end());

  fs::path dir = out_dir(c);
  csv.write(dir / "convex_path.csv");
  std::string plot = plot_script("formula vs direct residuals", "convex_path.csv",
                                 {{1, 2 + c.dim + 2}, {1, 2 + c.dim + 3}},
                                 {"abs_err", "rel_err"});
  return finish(c, j, pass, plot, "convex_path.gp");
}

RunResult run_inj_estimate(const ExperimentConfig& c) {
  double r_max = c.extra_or("r_max", 5.0);
  int conj_dirs = c.extra_int_or("conj_directions", 16);
  int loop_dirs = c.extra_int_or("loop_directions", 32);
  bool single = c.metric_b.empty();

  std::vector<double> s_grid = single ? std::vector<double>{0.0} : linspace(c.s_steps);
  MetricField ga = single ? field_from_config(c, c.metric_a) : field_pair(c).first;
  MetricField gb = single ? ga : field_pair(c).second;
  std::vector<VectorXd> points = base_points_from_config(c, ga.domain());

  std::vector<std::string> cols{"s"};
  for (int i = 0; i < c.dim; ++i) cols.push_back("p" + std::to_string(i));
  for (const char* name :
       {"conjugate_radius", "half_loop", "lower_bound", "conj_capped", "loop_capped"})
    cols.push_back(name);
  CsvWriter csv(cols);

  double table_min = std::numeric_limits<double>::infinity();
  ordered_json rows = ordered_json::array();
  const int cells = static_cast<int>(s_grid.size() * points.size());
  std::vector<InjectivityEstimate> results(cells);
  parallel_for(cells, c.workers, [&](int idx) {
    size_t si = idx / points.size(), pi = idx % points.size();
    MetricField gs = single ? ga : convex_sum(ga, gb, s_grid[si]);
    results[idx] = injectivity_radius_estimate(gs, points[pi], r_max, conj_dirs, loop_dirs);
  });
  for (int idx = 0; idx < cells; ++idx) {
    size_t si = idx / points.size();
    const InjectivityEstimate& e = results[idx];
    std::vector<double> row{s_grid[si]};
    for (int i = 0; i < c.dim; ++i) row.push_back(e.at[i]);
    row.insert(row.end(), {e.conjugate_radius, e.half_loop_length, e.lower_bound,
                           e.conjugate_capped ? 1.0 : 0.0, e.loop_capped ? 1.0 : 0.0});
    csv.add_row(row);
    rows.push_back(ordered_json::parse(injectivity_json(e)));
    table_min = std::min(table_min, e.lower_bound);
  }

  ordered_json j = config_echo(c);
  j["r_max"] = r_max;
  j["table_min"] = table_min;
  j["estimates"] = rows;
  fs::path dir = out_dir(c);
  csv.write(dir / "inj_estimates.csv");
  std::string plot = plot_script("injectivity estimate vs s", "inj_estimates.csv",
                                 {{1, 2 + c.dim + 2}}, {"lower_bound"});
  return finish(c, j, true, plot, "inj_estimates.gp");
}

RunResult run_ift_certify(const ExperimentConfig& c) {
  auto [ga, gb] = field_pair(c);
  std::vector<VectorXd> points = base_points_from_config(c, ga.domain());
  double ball = c.extra_or("ball_radius", 0.25);
  int pairs = c.extra_int_or("pair_samples", 1000);
  int lip_cap = c.extra_int_or("lipschitz_pairs", 200);

  std::vector<std::string> cols;
  for (int i = 0; i < c.dim; ++i) cols.push_back("p" + std::to_string(i));
  for (const char* name : {"L", "M", "K", "R1", "R2", "R3", "alt_R2", "collisions",
                           "lipschitz_failures", "worst_lipschitz_ratio"})
    cols.push_back(name);
  CsvWriter csv(cols);

  bool pass = true;
  ordered_json rows = ordered_json::array();
  for (const auto& p : points) {
    TransitionMap tm(ga, gb, p, orthonormal_frame(ga, p), orthonormal_frame(gb, p));
    MapFn f = [&tm](const VectorXd& x) { return tm(x); };
    SmoothMapSample sample = estimate_map_constants(f, VectorXd::Zero(c.dim), ball, c.grid);
    IFTBounds bounds = ift_bounds(sample.L, sample.M, std::max(sample.K, 1e-12), sample.R);
    InjectivityCertificate cert = certify_injectivity(sample, bounds, pairs, c.seed, lip_cap);
    pass = pass && cert.collisions_pass;

    std::vector<double> row;
    for (int i = 0; i < c.dim; ++i) row.push_back(p[i]);
    row.insert(row.end(),
               {sample.L, sample.M, sample.K, bounds.R1, bounds.R2, bounds.R3, bounds.alt_R2,
                static_cast<double>(cert.collisions),
                static_cast<double>(cert.lipschitz_failures), cert.worst_lipschitz_ratio});
    csv.add_row(row);

    ordered_json r;
    r["L"] = sample.L;
    r["M"] = sample.M;
    r["K"] = sample.K;
    r["R"] = sample.R;
    r["grid"] = sample.grid;
    r["R1"] = bounds.R1;
    r["R2"] = bounds.R2;
    r["R3"] = bounds.R3;
    r["alt_R2_diagnostic"] = bounds.alt_R2;
    r["pairs_tested"] = cert.pairs_tested;
    r["collisions"] = cert.collisions;
    if (cert.collisions > 0) {
      r["worst_collision_x1"] = std::vector<double>(
          cert.worst_collision.x1.data(),
          cert.worst_collision.x1.data() + cert.worst_collision.x1.size());
      r["worst_collision_x2"] = std::vector<double>(
          cert.worst_collision.x2.data(),
          cert.worst_collision.x2.data() + cert.worst_collision.x2.size());
    }
    r["inverse_lipschitz_2L_pass"] = cert.lipschitz_pass;
    r["worst_lipschitz_ratio"] = cert.worst_lipschitz_ratio;
    rows.push_back(r);
  }

  ordered_json j = config_echo(c);
  j["per_point"] = rows;
  j["note"] = "A-constants: quadratic-form level unless labeled norm-level";
  fs::path dir = out_dir(c);
  csv.write(dir / "ift_certificates.csv");
  return finish(c, j, pass);
}

MatrixXd polar_endpoint(const std::string& spec, int dim, uint64_t seed) {
  if (spec.empty() || spec == "identity") return MatrixXd::Identity(dim, dim);
  if (spec.rfind("diag:", 0) == 0) {
    VectorXd d(dim);
    std::istringstream is(spec.substr(5));
    std::string tok;
    int i = 0;
    while (std::getline(is, tok, ',') && i < dim) d[i++] = std::stod(tok);
    if (i != dim) throw ConfigError("polar endpoint diag: wrong entry count");
    return MatrixXd(d.asDiagonal());
  }
  if (spec.rfind("random:", 0) == 0) {
    Rng rng(seed + std::stoull(spec.substr(7)));
    MatrixXd omega = standard_symplectic_matrix<double>(dim);
    return random_compatible_structure(rng, omega).g;
  }
  throw ConfigError("polar endpoint: expected identity | diag:... | random:<seed>");
}

RunResult run_polar_path(const ExperimentConfig& c) {
  if (c.dim % 2 != 0) throw ConfigError("polar-path: dimension must be even");
  MatrixXd omega = standard_symplectic_matrix<double>(c.dim);
  MatrixXd g0 = polar_endpoint(c.extras.count("polar_a") ? c.extras.at("polar_a") : "identity",
                               c.dim, c.seed);
  MatrixXd g1 = polar_endpoint(c.extras.count("polar_b") ? c.extras.at("polar_b") : "identity",
                               c.dim, c.seed + 1);
  // endpoints must be compatible images; retract the diag/identity inputs
  auto retract = [&omega](const MatrixXd& g) {
    return metric_from_J(omega, polar_J(polar_A(omega, g), g));
  };
  g0 = retract(g0);
  g1 = retract(g1);

  InterpolationDiagnostics diag =
      interpolate_J_path(omega, g0, g1, linspace(c.s_steps), c.seed);

  CsvWriter csv({"t", "i", "lambda_measured", "lambda_predicted", "residual", "case_tag",
                 "bound_lo", "bound_hi"});
  for (const auto& row : diag.rows) {
    for (int i = 0; i < row.recip_measured.size(); ++i) {
      double predicted_lambda = 1.0 / row.recip_predicted[i];
      csv.add_row_mixed({format17(row.t), std::to_string(i), format17(row.lambda_measured[i]),
                         format17(predicted_lambda),
                         format17(std::fabs(row.recip_measured[i] - row.recip_predicted[i])),
                         row.tags[i] == EigenCase::Real ? "real" : "unit-modulus",
                         format17(diag.bounds.envelope_lo), format17(diag.bounds.envelope_hi)});
    }
  }

  const double tol = 1e-10;
  bool pass = diag.max_prediction_residual <= tol && diag.max_identity_residual <= tol &&
              diag.max_j_square_residual <= tol && diag.pinching_ok &&
              diag.worst_sandwich_violation >= -tol && diag.min_taming > 0.0 &&
              diag.endpoint_residual <= tol;

  ordered_json j = config_echo(c);
  j["C_quadratic"] = diag.C;
  j["bound_lo"] = diag.bounds.envelope_lo;
  j["bound_hi"] = diag.bounds.envelope_hi;
  j["max_prediction_residual"] = diag.max_prediction_residual;
  j["max_identity_residual"] = diag.max_identity_residual;
  j["max_j_square_residual"] = diag.max_j_square_residual;
  j["max_symplectic_residual"] = diag.max_symplectic_residual;
  j["min_taming"] = diag.min_taming;
  j["worst_sandwich_violation"] = diag.worst_sandwich_violation;
  j["endpoint_residual"] = diag.endpoint_residual;
  j["pinching_ok"] = diag.pinching_ok;
  j["skew_diagnostic_flag"] = diag.skew_diagnostic_flag;

  fs::path dir = out_dir(c);
  csv.write(dir / "polar_path.csv");
  std::string plot = plot_script("eigenvalue band along t", "polar_path.csv",
                                 {{1, 3}, {1, 4}}, {"measured", "predicted"});
  return finish(c, j, pass, plot, "polar_path.gp");
}

}  // namespace

RunResult run_command(const ExperimentConfig& config) {
  config.validate();
  if (config.command == "curvature-scan") return run_curvature_scan(config);
  if (config.command == "convex-path") return run_convex_path(config);
  if (config.command == "inj-estimate") return run_inj_estimate(config);
  if (config.command == "ift-certify") return run_ift_certify(config);
  if (config.command == "polar-path") return run_polar_path(config);
  if (config.command == "all") {
    const char* env = std::getenv("GEOMLAB_OUT");
    std::filesystem::path base = env ? std::filesystem::path(env) : std::filesystem::path(config.out);
    AcceptanceSummary sum = run_acceptance(base / "acceptance", config.workers);
    RunResult r;
    r.pass = sum.all_pass;
    r.summary_json = sum.report_json;
    return r;
  }
  throw ConfigError("unknown command: " + config.command);
}

}  // namespace geomlab
