#include "geomlab/acceptance.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "geomlab/convex_interp.hpp"
#include "geomlab/curvature.hpp"
#include "geomlab/geodesics.hpp"
#include "geomlab/qift.hpp"
#include "geomlab/report.hpp"
#include "geomlab/runner.hpp"
#include "geomlab/symplectic_polar.hpp"
#include "json.hpp"

namespace geomlab {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::vector<double> linspace01(int steps) {
  std::vector<double> g;
  for (int i = 0; i < steps; ++i) g.push_back(static_cast<double>(i) / (steps - 1));
  return g;
}

struct OracleOutcome {
  double max_rel_analytic = 0.0;
  double max_rel_fd = 0.0;
  bool bounds_ok = true;
  double max_sup_drs = 0.0;
  double seconds = 0.0;
  ordered_json per_pair = ordered_json::array();
  std::string pair0_csv;
};

// Criteria 1 and 2 share the sweep: 20 seeded 2D analytic pairs, 11 s-values,
// 50 points, formula vs direct curvature plus the explicit bound check.
OracleOutcome run_oracle_sweeps(int workers) {
  OracleOutcome out;
  auto t0 = std::chrono::steady_clock::now();
  ChartDomain dom(VectorXd::Zero(2), 1.0);
  std::vector<double> s_grid = linspace01(11);
  for (int k = 0; k < 20; ++k) {
    double amp_a = 0.04 + 0.005 * k;
    double amp_b = 0.14 - 0.004 * k;
    MetricField ga = gallery_field(
        "polyrand:" + std::to_string(101 + k) + ":" + format17(amp_a), 2, dom);
    MetricField gb = gallery_field(
        "polyrand:" + std::to_string(201 + k) + ":" + format17(amp_b), 2, dom);
    std::vector<VectorXd> samples = sample_random(dom, 50, 0.5, 4242 + k);

    SweepOptions opts;
    opts.probe_pairs = 1;
    opts.workers = workers;
    ConvexPathSweep sa = convex_path_sweep(ga, gb, s_grid, samples, 777 + k, opts);
    out.max_rel_analytic = std::max(out.max_rel_analytic, sa.max_rel_err);
    out.bounds_ok = out.bounds_ok && sa.bound_ok;
    for (double v : sa.sup_drs) out.max_sup_drs = std::max(out.max_sup_drs, v);

    SweepOptions fd_opts = opts;
    fd_opts.compute_drs = false;
    ConvexPathSweep sf =
        convex_path_sweep(ga.with_mode(DerivMode::FiniteDifference),
                          gb.with_mode(DerivMode::FiniteDifference), s_grid, samples, 777 + k,
                          fd_opts);
    out.max_rel_fd = std::max(out.max_rel_fd, sf.max_rel_err);

    ordered_json pj;
    pj["pair"] = k;
    pj["max_rel_analytic"] = sa.max_rel_err;
    pj["max_rel_fd"] = sf.max_rel_err;
    pj["bound_ok"] = sa.bound_ok;
    pj["C0"] = sa.c0;
    pj["C1"] = sa.c1;
    pj["Cprime"] = sa.cprime;
    pj["lambda_P"] = sa.lambda_p;
    out.per_pair.push_back(pj);

    if (k == 0) {
      CsvWriter csv({"s", "x0", "x1", "R_formula", "R_direct", "abs_err", "rel_err"});
      for (const auto& cell : sa.cells)
        csv.add_row({cell.s, cell.x[0], cell.x[1], cell.r_formula, cell.r_direct, cell.abs_err,
                     cell.rel_err});
      out.pair0_csv = csv.str();
    }
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

struct PolarOutcome {
  // diag(2, 1/2) worked example
  double example_residual = 0.0;
  double example_mid_recip = 0.0;
  double example_bound_hi = 0.0;
  bool example_pinching_ok = false;
  // 50 seeded pairs, dims 2/4/6
  double worst_prediction_residual = 0.0;
  double worst_identity_residual = 0.0;
  double worst_j_square = 0.0;
  double worst_symplectic = 0.0;
  double min_taming = std::numeric_limits<double>::infinity();
  double worst_sandwich = 0.0;
  bool pinching_ok = true;
  std::string example_csv;
};

PolarOutcome run_polar_pipelines() {
  PolarOutcome out;
  std::vector<double> t_grid = linspace01(11);

  {
    MatrixXd omega = standard_symplectic_matrix<double>(2);
    MatrixXd g0 = MatrixXd::Identity(2, 2);
    MatrixXd g1(2, 2);
    g1 << 2.0, 0.0, 0.0, 0.5;
    InterpolationDiagnostics d = interpolate_J_path(omega, g0, g1, t_grid, 321, 1000);
    out.example_residual = d.max_prediction_residual;
    out.example_bound_hi = d.bounds.envelope_hi;
    out.example_pinching_ok = d.pinching_ok;
    for (const auto& row : d.rows)
      if (row.t == 0.5) out.example_mid_recip = row.recip_measured.maxCoeff();
    out.worst_identity_residual = d.max_identity_residual;
    out.worst_j_square = d.max_j_square_residual;
    out.worst_symplectic = d.max_symplectic_residual;
    out.min_taming = d.min_taming;
    out.worst_sandwich = d.worst_sandwich_violation;

    CsvWriter csv({"t", "i", "recip_measured", "recip_predicted", "residual", "bound_lo",
                   "bound_hi"});
    for (const auto& row : d.rows)
      for (int i = 0; i < row.recip_measured.size(); ++i)
        csv.add_row({row.t, static_cast<double>(i), row.recip_measured[i],
                     row.recip_predicted[i],
                     std::fabs(row.recip_measured[i] - row.recip_predicted[i]),
                     d.bounds.envelope_lo, d.bounds.envelope_hi});
    out.example_csv = csv.str();
  }

  const int dims[3] = {2, 4, 6};
  for (int k = 0; k < 50; ++k) {
    int dim = dims[k % 3];
    MatrixXd omega = standard_symplectic_matrix<double>(dim);
    Rng rng(9000 + k);
    CompatiblePair a = random_compatible_structure(rng, omega);
    CompatiblePair b = random_compatible_structure(rng, omega);
    InterpolationDiagnostics d =
        interpolate_J_path(omega, a.g, b.g, t_grid, 5000 + k, 1000);
    out.worst_prediction_residual =
        std::max(out.worst_prediction_residual, d.max_prediction_residual);
    out.worst_identity_residual = std::max(out.worst_identity_residual, d.max_identity_residual);
    out.worst_j_square = std::max(out.worst_j_square, d.max_j_square_residual);
    out.worst_symplectic = std::max(out.worst_symplectic, d.max_symplectic_residual);
    out.min_taming = std::min(out.min_taming, d.min_taming);
    out.worst_sandwich = std::min(out.worst_sandwich, d.worst_sandwich_violation);
    out.pinching_ok = out.pinching_ok && d.pinching_ok;
  }
  return out;
}

struct GeodesicOutcome {
  double worst_energy_ratio = 0.0;  // max over fields of drift / (1e-8 * span)
  std::string worst_energy_field;
  double sphere_estimate = 0.0;
  double cylinder_estimate = 0.0;
  bool disk_capped = false;
  ordered_json detail;
};

GeodesicOutcome run_geodesic_checks(int workers) {
  GeodesicOutcome out;
  struct Spec {
    std::string label;
    VectorXd base;
  };
  auto pt = [](double a, double b) {
    VectorXd x(2);
    x << a, b;
    return x;
  };
  std::vector<Spec> fields = {
      {"flat", pt(0, 0)},          {"scaled:4", pt(0, 0)}, {"sphere:1", pt(1, 0)},
      {"poincare-disk", pt(0, 0)}, {"half-plane", pt(0, 2)}, {"cigar", pt(2, 0)},
      {"polyrand:11:0.05", pt(0, 0)}, {"cylinder:1", pt(0, 0)}};

  ordered_json energies = ordered_json::array();
  for (const auto& spec : fields) {
    MetricField f = gallery_field(spec.label, 2);
    Frame frame = orthonormal_frame(f, spec.base);
    VectorXd dir2 = (frame.E.col(0) + frame.E.col(1)) / std::sqrt(2.0);
    for (const VectorXd& v : {VectorXd(frame.E.col(0)), dir2}) {
      Trajectory tr = integrate_geodesic(f, GeodesicState(f, spec.base, v), 10.0,
                                         default_step(f));
      double span = tr.reach();
      double drift = energy_drift(f, tr);
      double ratio = span > 0.0 ? drift / (1e-8 * std::max(span, 1e-6)) : 0.0;
      if (ratio > out.worst_energy_ratio) {
        out.worst_energy_ratio = ratio;
        out.worst_energy_field = spec.label;
      }
      ordered_json e;
      e["field"] = spec.label;
      e["span"] = span;
      e["drift"] = drift;
      energies.push_back(e);
    }
  }
  out.detail["energy"] = energies;

  std::vector<InjectivityEstimate> est(3);
  parallel_for(3, workers, [&](int i) {
    if (i == 0) {
      MetricField sphere = gallery_field("sphere:1", 2);
      est[0] = injectivity_radius_estimate(sphere, pt(1, 0), 5.0, 16, 64);
    } else if (i == 1) {
      MetricField cyl = gallery_field("cylinder:1", 2);
      est[1] = injectivity_radius_estimate(cyl, pt(0, 0), 5.0, 16, 64);
    } else {
      MetricField disk = gallery_field("poincare-disk", 2);
      est[2] = injectivity_radius_estimate(disk, pt(0, 0), 5.0, 16, 64);
    }
  });
  out.sphere_estimate = est[0].lower_bound;
  out.cylinder_estimate = est[1].lower_bound;
  out.disk_capped = est[2].conjugate_capped && est[2].loop_capped;
  out.detail["sphere"] = ordered_json::parse(injectivity_json(est[0]));
  out.detail["cylinder"] = ordered_json::parse(injectivity_json(est[1]));
  out.detail["poincare_disk"] = ordered_json::parse(injectivity_json(est[2]));
  return out;
}

struct IftOutcome {
  bool plugins_exact = false;
  double r2_quadratic = 0.0;
  int collisions = -1;
  int pairs = 0;
  bool lipschitz_recorded = false;
  bool lipschitz_pass = false;
  double worst_ratio = 0.0;
};

IftOutcome run_ift_checks() {
  IftOutcome out;
  IFTBounds b1 = ift_bounds(1, 1, 0, 1);
  IFTBounds b2 = ift_bounds(2, 0.5, 0, 1);
  IFTBounds b3 = ift_bounds(1, 1, 1, 0.5);
  out.plugins_exact = b1.R1 == 1.0 && b1.R2 == 0.5 && b1.R3 == 0.25 && b2.R1 == 1.0 &&
                      b2.R2 == 0.5 && b2.R3 == 0.125 && b3.R1 == 0.5 && b3.R2 == 1.0 / 3.0 &&
                      b3.R3 == 1.0 / 6.0;

  MapFn quad = [](const VectorXd& x) {
    VectorXd y(1);
    y[0] = x[0] + 0.5 * x[0] * x[0];
    return y;
  };
  SmoothMapSample sample = estimate_map_constants(quad, VectorXd::Zero(1), 0.5, 9);
  IFTBounds qb = ift_bounds(sample.L, sample.M, sample.K, sample.R);
  out.r2_quadratic = qb.R2;
  InjectivityCertificate cert = certify_injectivity(sample, qb, 10000, 20240808);
  out.collisions = cert.collisions;
  out.pairs = cert.pairs_tested;
  out.lipschitz_recorded = cert.lipschitz_pairs > 0;
  out.lipschitz_pass = cert.lipschitz_pass;
  out.worst_ratio = cert.worst_lipschitz_ratio;
  return out;
}

struct PathInjOutcome {
  double max_adjacent_change = 0.0;  // relative
  double path_min = 0.0;
  double endpoint_min = 0.0;
  std::string csv;
};

PathInjOutcome run_inj_continuity(int workers) {
  PathInjOutcome out;
  ChartDomain dom(VectorXd::Zero(2), 1.0);
  MetricField ga = gallery_field("flat", 2, dom);
  MetricField gb = gallery_field("polyrand:13:0.05", 2, dom);
  std::vector<double> s_grid = linspace01(11);
  std::vector<VectorXd> points;
  {
    VectorXd a(2), b(2), c(2);
    a << 0.0, 0.0;
    b << 0.3, 0.0;
    c << 0.0, -0.2;
    points = {a, b, c};
  }

  const int cells = static_cast<int>(s_grid.size() * points.size());
  std::vector<InjectivityEstimate> table(cells);
  parallel_for(cells, workers, [&](int idx) {
    int si = idx / static_cast<int>(points.size());
    int pi = idx % static_cast<int>(points.size());
    MetricField gs = convex_sum(ga, gb, s_grid[si]);
    table[idx] = injectivity_radius_estimate(gs, points[pi], 5.0, 16, 32);
  });

  CsvWriter csv({"s", "p0", "p1", "lower_bound", "conjugate_radius", "half_loop"});
  out.path_min = std::numeric_limits<double>::infinity();
  out.endpoint_min = std::numeric_limits<double>::infinity();
  for (int idx = 0; idx < cells; ++idx) {
    int si = idx / static_cast<int>(points.size());
    const auto& e = table[idx];
    csv.add_row({s_grid[si], e.at[0], e.at[1], e.lower_bound, e.conjugate_radius,
                 e.half_loop_length});
    out.path_min = std::min(out.path_min, e.lower_bound);
    if (si == 0 || si + 1 == static_cast<int>(s_grid.size()))
      out.endpoint_min = std::min(out.endpoint_min, e.lower_bound);
  }
  for (size_t pi = 0; pi < points.size(); ++pi) {
    for (size_t si = 0; si + 1 < s_grid.size(); ++si) {
      double a = table[si * points.size() + pi].lower_bound;
      double b = table[(si + 1) * points.size() + pi].lower_bound;
      double rel = std::fabs(a - b) / std::max(1e-12, std::min(a, b));
      out.max_adjacent_change = std::max(out.max_adjacent_change, rel);
    }
  }
  out.csv = csv.str();
  return out;
}

struct Payload {
  OracleOutcome oracle;
  PolarOutcome polar;
  double retraction_worst = 0.0;
  double jordan_worst = 0.0;
  int jordan_count = 0;
  GeodesicOutcome geo;
  IftOutcome ift;
  SecondDerivativeReport d2f;
  PathInjOutcome inj;
};

Payload run_payload(const fs::path& dir, int workers) {
  Payload p;
  p.oracle = run_oracle_sweeps(workers);
  p.polar = run_polar_pipelines();

  // retraction round trips, 100 random compatible structures in dims 2..6
  const int dims[3] = {2, 4, 6};
  for (int k = 0; k < 100; ++k) {
    int dim = dims[k % 3];
    MatrixXd omega = standard_symplectic_matrix<double>(dim);
    Rng rng(11000 + k);
    CompatiblePair a = random_compatible_structure(rng, omega);
    p.retraction_worst = std::max(p.retraction_worst, retraction_check(omega, a.J));
  }

  // Jordan-sum lemma on 1000 seeded matrices, dims 2..8, with explicit
  // defective upper-triangular Jordan forms mixed in
  {
    MatrixXd j2(2, 2);
    j2 << 1, 1, 0, 1;
    JordanSumReport r = jordan_sum_eigenvalues(j2);
    p.jordan_worst = r.max_match_error;
    ++p.jordan_count;
  }
  for (int k = 0; k < 999; ++k) {
    int dim = 2 + (k % 7);
    Rng rng(7000 + k);
    MatrixXd m(dim, dim);
    if (k % 5 == 4) {
      // defective case: upper-triangular Jordan form (exactly representable)
      m.setZero();
      int pos = 0;
      while (pos < dim) {
        int block = std::min(dim - pos, 1 + static_cast<int>(rng.next_u64() % 3));
        double lam = rng.uniform(0.5, 2.0) * (rng.uniform01() < 0.5 ? -1.0 : 1.0);
        for (int i = 0; i < block; ++i) {
          m(pos + i, pos + i) = lam;
          if (i + 1 < block) m(pos + i, pos + i + 1) = 1.0;
        }
        pos += block;
      }
    } else {
      // diagonalizable case with separated spectrum (real values and complex
      // pairs) and a well-conditioned eigenbasis, so that the two independent
      // eigensolves stay far inside the 1e-8 matching tolerance
      std::vector<std::complex<double>> spectrum;
      auto separated = [&spectrum](std::complex<double> z) {
        for (auto w : spectrum)
          if (std::abs(z - w) < 0.05 || std::abs(std::conj(z) - w) < 0.05) return false;
        return true;
      };
      MatrixXd d = MatrixXd::Zero(dim, dim);
      int pos = 0;
      while (pos < dim) {
        bool complex_pair = (dim - pos >= 2) && rng.uniform01() < 0.5;
        if (complex_pair) {
          double r = rng.uniform(0.5, 2.0), th = rng.uniform(0.3, M_PI - 0.3);
          std::complex<double> z = std::polar(r, th);
          if (!separated(z)) continue;
          spectrum.push_back(z);
          spectrum.push_back(std::conj(z));
          d(pos, pos) = r * std::cos(th);
          d(pos, pos + 1) = -r * std::sin(th);
          d(pos + 1, pos) = r * std::sin(th);
          d(pos + 1, pos + 1) = r * std::cos(th);
          pos += 2;
        } else {
          double lam = rng.uniform(0.5, 2.0) * (rng.uniform01() < 0.5 ? -1.0 : 1.0);
          if (!separated({lam, 0.0})) continue;
          spectrum.push_back({lam, 0.0});
          d(pos, pos) = lam;
          pos += 1;
        }
      }
      MatrixXd basis = MatrixXd::Identity(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          basis(i, j) += 0.3 * rng.normal() / std::sqrt(static_cast<double>(dim));
      m = basis * d * basis.inverse();
    }
    JordanSumReport r = jordan_sum_eigenvalues(m);
    p.jordan_worst = std::max(p.jordan_worst, r.max_match_error);
    ++p.jordan_count;
  }

  p.geo = run_geodesic_checks(workers);
  p.ift = run_ift_checks();

  {
    ChartDomain dom(VectorXd::Zero(2), 1.0);
    MetricField ga = gallery_field("flat", 2, dom);
    MetricField gb = gallery_field("polyrand:5:0.05", 2, dom);
    std::vector<VectorXd> base = sample_random(dom, 4, 0.4, 606);
    base.insert(base.begin(), VectorXd::Zero(2));
    p.d2f = second_derivative_bound_check(ga, gb, base, 5.0, 10.0, 0.25, 5);
  }

  p.inj = run_inj_continuity(workers);

  // artifacts (every numeric output that the determinism criterion compares)
  write_text_file(dir / "c1_oracle_pair0.csv", p.oracle.pair0_csv);
  write_text_file(dir / "c3_polar_diag_example.csv", p.polar.example_csv);
  write_text_file(dir / "c11_inj_path.csv", p.inj.csv);
  ordered_json j;
  j["version"] = kVersionStamp;
  j["oracle_pairs"] = p.oracle.per_pair;
  j["retraction_worst"] = p.retraction_worst;
  j["jordan_worst"] = p.jordan_worst;
  j["geodesics"] = p.geo.detail;
  j["ift"]["plugins_exact"] = p.ift.plugins_exact;
  j["ift"]["r2_quadratic"] = p.ift.r2_quadratic;
  j["ift"]["collisions"] = p.ift.collisions;
  j["ift"]["inverse_lipschitz_2L_pass"] = p.ift.lipschitz_pass;
  j["ift"]["worst_lipschitz_ratio"] = p.ift.worst_ratio;
  j["d2f"]["sup_coarse"] = p.d2f.sup_coarse;
  j["d2f"]["sup_fine"] = p.d2f.sup_fine;
  j["d2f"]["relative_change"] = p.d2f.relative_change;
  write_text_file(dir / "payload_summary.json", j.dump(2) + "\n");
  return p;
}

bool compare_trees(const fs::path& a, const fs::path& b, std::string& mismatch) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(a))
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), a));
  std::sort(files.begin(), files.end());
  for (const auto& rel : files) {
    std::ifstream fa(a / rel, std::ios::binary), fb(b / rel, std::ios::binary);
    if (!fb) {
      mismatch = rel.string() + " missing in second run";
      return false;
    }
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    if (sa.str() != sb.str()) {
      mismatch = rel.string() + " differs";
      return false;
    }
  }
  return true;
}

std::string fmt(double v) { return format17(v); }

}  // namespace

AcceptanceSummary run_acceptance(const fs::path& outdir, int workers) {
  auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(outdir);

  Payload a = run_payload(outdir / "run_a", workers);
  run_payload(outdir / "run_b", workers);
  std::string mismatch;
  bool identical = compare_trees(outdir / "run_a", outdir / "run_b", mismatch);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  AcceptanceSummary sum;
  auto add = [&sum](int idx, const std::string& name, bool pass, const std::string& detail) {
    sum.results.push_back({idx, name, pass, detail});
  };

  add(1, "convex-sum curvature oracle",
      a.oracle.max_rel_analytic <= 1e-6 && a.oracle.max_rel_fd <= 5e-3 &&
          a.oracle.seconds <= 60.0,
      "max rel err analytic " + fmt(a.oracle.max_rel_analytic) + " (<= 1e-6), fd " +
          fmt(a.oracle.max_rel_fd) + " (<= 5e-3), runtime " + fmt(a.oracle.seconds) + " s");

  add(2, "explicit curvature bound", a.oracle.bounds_ok,
      std::string("sup||R_s|| <= (1-s)C0 + sC1 + 2s(1-s)C'^2/min{1,lambda_P} at every grid s: ") +
          (a.oracle.bounds_ok ? "holds on all 20 pairs" : "violated"));

  bool c3 = a.polar.example_residual <= 1e-10 && a.polar.example_pinching_ok &&
            std::fabs(a.polar.example_mid_recip - 1.125) <= 1e-9 &&
            std::fabs(a.polar.example_bound_hi - 1.125) <= 1e-12 &&
            a.polar.worst_prediction_residual <= 1e-10 && a.polar.pinching_ok;
  add(3, "eigenvalue pinching",
      c3,
      "diag(2,1/2): recip(t=1/2) " + fmt(a.polar.example_mid_recip) +
          " attains bound 1.125; worst prediction residual " +
          fmt(std::max(a.polar.example_residual, a.polar.worst_prediction_residual)) +
          " (<= 1e-10), envelope respected on 50 pairs dims 2/4/6");

  add(4, "matrix identity (A_t*)^{-1}A_t^{-1}", a.polar.worst_identity_residual <= 1e-10,
      "worst residual " + fmt(a.polar.worst_identity_residual) + " (<= 1e-10)");

  bool c5 = a.polar.worst_j_square <= 1e-10 && a.polar.worst_symplectic <= 1e-10 &&
            a.polar.min_taming > 0.0 && a.polar.worst_sandwich >= -1e-10;
  add(5, "J-path invariants", c5,
      "||J_t^2+Id|| " + fmt(a.polar.worst_j_square) + ", symplectic residual " +
          fmt(a.polar.worst_symplectic) + ", min taming " + fmt(a.polar.min_taming) +
          ", sandwich worst slack " + fmt(a.polar.worst_sandwich));

  add(6, "polar retraction", a.retraction_worst <= 1e-10,
      "worst round-trip residual " + fmt(a.retraction_worst) +
          " (<= 1e-10 on 100 structures, dims 2-6)");

  add(7, "Jordan-sum eigenvalue lemma", a.jordan_worst <= 1e-8,
      "worst multiset mismatch " + fmt(a.jordan_worst) + " (<= 1e-8 on " +
          std::to_string(a.jordan_count) + " matrices, dims 2-8, incl. defective)");

  bool c8 = a.geo.worst_energy_ratio <= 1.0 &&
            std::fabs(a.geo.sphere_estimate - M_PI) <= 0.02 * M_PI &&
            std::fabs(a.geo.cylinder_estimate - M_PI) <= 0.02 * M_PI && a.geo.disk_capped;
  add(8, "geodesics and injectivity estimates", c8,
      "worst energy drift ratio " + fmt(a.geo.worst_energy_ratio) + " (" +
          a.geo.worst_energy_field + "), sphere " + fmt(a.geo.sphere_estimate) +
          ", cylinder " + fmt(a.geo.cylinder_estimate) + " (pi +- 2%), disk capped " +
          (a.geo.disk_capped ? "yes" : "no"));

  bool c9 = a.ift.plugins_exact && std::fabs(a.ift.r2_quadratic - 1.0 / 3.0) <= 1e-5 &&
            a.ift.collisions == 0 && a.ift.lipschitz_recorded;
  add(9, "quantitative IFT constants and certification", c9,
      std::string("plug-ins exact: ") + (a.ift.plugins_exact ? "yes" : "no") +
          ", quadratic R2 " + fmt(a.ift.r2_quadratic) + ", collisions " +
          std::to_string(a.ift.collisions) + "/" + std::to_string(a.ift.pairs) +
          ", inverse-Lipschitz (2L as printed) recorded: " +
          (a.ift.lipschitz_pass ? "pass" : "fail") + " worst ratio " + fmt(a.ift.worst_ratio));

  add(10, "transition-map second derivatives", a.d2f.finite && a.d2f.stable,
      "grid-sup ||D2F|| " + fmt(a.d2f.sup_coarse) + " -> " + fmt(a.d2f.sup_fine) +
          " under 2x refinement, change " + fmt(100.0 * a.d2f.relative_change) + "% (<= 10%)");

  bool c11 = a.inj.max_adjacent_change <= 0.10 && a.inj.path_min >= 0.5 * a.inj.endpoint_min;
  add(11, "injectivity continuity along the path", c11,
      "max adjacent-s change " + fmt(100.0 * a.inj.max_adjacent_change) +
          "% (<= 10%), path min " + fmt(a.inj.path_min) + " vs endpoint min " +
          fmt(a.inj.endpoint_min));

  bool c12 = identical && wall <= 600.0;
  add(12, "determinism and runtime", c12,
      std::string("reports byte-identical: ") + (identical ? "yes" : ("no (" + mismatch + ")")) +
          ", total wall " + fmt(wall) + " s (<= 600)");

  sum.all_pass = true;
  for (const auto& r : sum.results) sum.all_pass = sum.all_pass && r.pass;
  sum.wall_seconds = wall;

  ordered_json rep;
  rep["version"] = kVersionStamp;
  rep["all_pass"] = sum.all_pass;
  for (const auto& r : sum.results) {
    ordered_json c;
    c["index"] = r.index;
    c["name"] = r.name;
    c["pass"] = r.pass;
    c["detail"] = r.detail;
    rep["criteria"].push_back(c);
  }
  sum.report_json = rep.dump(2);
  write_text_file(outdir / "acceptance_report.json", sum.report_json + "\n");
  return sum;
}

void print_acceptance(const AcceptanceSummary& summary, std::ostream& os) {
  for (const auto& r : summary.results) {
    os << "[" << (r.index < 10 ? " " : "") << r.index << "/12] "
       << (r.pass ? "PASS" : "FAIL") << " - " << r.name << " (" << r.detail << ")\n";
  }
  os << (summary.all_pass ? "ACCEPTANCE: all criteria pass" : "ACCEPTANCE: FAILURES present")
     << " [" << format17(summary.wall_seconds) << " s]\n";
}

}  // namespace geomlab
