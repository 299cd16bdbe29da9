#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "geomlab/convex_interp.hpp"
#include "geomlab/geodesics.hpp"

using namespace geomlab;

namespace {

VectorXd pt(double a, double b) {
  VectorXd x(2);
  x << a, b;
  return x;
}

MetricField constant_field(const MatrixXd& g, ChartDomain dom, const std::string& label) {
  int n = static_cast<int>(g.rows());
  return MetricField::analytic(
      n, label, std::move(dom), [g](const VectorXd&) { return g; },
      [n](const VectorXd&, int) { return MatrixXd::Zero(n, n); },
      [n](const VectorXd&, int, int) { return MatrixXd::Zero(n, n); },
      [n](const VectorXd&, int, int, int) { return MatrixXd::Zero(n, n); });
}

}  // namespace

TEST_CASE("endo_P on constant pairs") {
  ChartDomain dom(VectorXd::Zero(2), 1.0);
  MetricField id = constant_field(MatrixXd::Identity(2, 2), dom, "id");
  MetricField four = constant_field(4.0 * MatrixXd::Identity(2, 2), dom, "4id");
  MatrixXd dm(2, 2);
  dm << 2.0, 0.0, 0.0, 0.5;
  MetricField diag = constant_field(dm, dom, "diag");

  EndoP p = endo_P(id, four, pt(0, 0));
  CHECK(p.matrix.isApprox(4.0 * MatrixXd::Identity(2, 2), 1e-14));
  CHECK(p.lambda_min == doctest::Approx(4.0).epsilon(1e-14));

  EndoP q = endo_P(diag, diag, pt(0.1, 0.1));
  CHECK(q.matrix.isApprox(MatrixXd::Identity(2, 2), 1e-14));
  CHECK(q.lambda_min == doctest::Approx(1.0).epsilon(1e-14));

  EndoP r = endo_P(id, diag, pt(0, 0));
  CHECK(r.eigenvalues.minCoeff() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.eigenvalues.maxCoeff() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.lambda_min == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("connection difference: zero cases and half-plane values") {
  ChartDomain dom(pt(0.0, 1.0), 0.5);
  MetricField hp = gallery_field("half-plane", 2, dom);
  MetricField flat = gallery_field("flat", 2, dom);

  ConnectionDifference zero = connection_difference(hp, hp, pt(0.0, 1.0));
  CHECK(zero.components.max_abs() < 1e-14);
  CHECK(zero.norm < 1e-14);

  // constant scaling preserves the connection
  MetricField poly = gallery_field("polyrand:2:0.2", 2);
  ChartDomain pdom = poly.domain();
  MetricField poly3 = MetricField::analytic(
      2, "3poly", pdom, [poly](const VectorXd& x) { return MatrixXd(3.0 * poly.eval_raw(x)); },
      [poly](const VectorXd& x, int i) { return MatrixXd(3.0 * poly.partial1(x, i)); },
      [poly](const VectorXd& x, int i, int j) { return MatrixXd(3.0 * poly.partial2(x, i, j)); },
      [poly](const VectorXd& x, int i, int j, int k) {
        return MatrixXd(3.0 * poly.partial3(x, i, j, k));
      });
  CHECK(connection_difference(poly, poly3, pt(0.2, -0.1)).components.max_abs() < 1e-12);

  ConnectionDifference d = connection_difference(flat, hp, pt(0.0, 1.0));
  CHECK(d.components(0, 0, 1) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(d.components(1, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.components(1, 1, 1) == doctest::Approx(-1.0).epsilon(1e-12));
  // symmetric lower pair
  for (int k = 0; k < 2; ++k) CHECK(d.components(k, 0, 1) == d.components(k, 1, 0));

  // rescaling both metrics by the same constant leaves D unchanged
  MetricField flat3 = gallery_field("scaled:3", 2, dom);
  MetricField hp3 = MetricField::analytic(
      2, "3hp", dom, [hp](const VectorXd& x) { return MatrixXd(3.0 * hp.eval_raw(x)); },
      [hp](const VectorXd& x, int i) { return MatrixXd(3.0 * hp.partial1(x, i)); },
      [hp](const VectorXd& x, int i, int j) { return MatrixXd(3.0 * hp.partial2(x, i, j)); },
      [hp](const VectorXd& x, int i, int j, int k) {
        return MatrixXd(3.0 * hp.partial3(x, i, j, k));
      });
  ConnectionDifference d3 = connection_difference(flat3, hp3, pt(0.0, 1.0));
  for (size_t i = 0; i < d.components.data().size(); ++i)
    CHECK(d3.components.data()[i] == doctest::Approx(d.components.data()[i]).epsilon(1e-12));
}

TEST_CASE("curvature formula: trivial cases") {
  ChartDomain dom(VectorXd::Zero(2), 1.0);
  MetricField g = gallery_field("polyrand:6:0.2", 2, dom);
  VectorXd x = pt(0.2, 0.1), u = pt(1.0, 0.3), v = pt(-0.2, 1.0);

  // identical endpoints: D = 0 and the value is R0(u,v,v,u) for every s
  Tensor4 r0 = riemann_lowered(g, x);
  double expected = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) expected += r0(i, j, k, l) * u[i] * v[j] * v[k] * u[l];
  for (double s : {0.0, 0.3, 0.8}) {
    RsFormulaValue f = curvature_via_formula(g, g, s, x, u, v);
    CHECK(f.value == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::fabs(f.pair_uu_vv) < 1e-14);
    CHECK(std::fabs(f.pair_uv_vu) < 1e-14);
  }

  // flat pair of constant metrics: everything vanishes
  MetricField id = constant_field(MatrixXd::Identity(2, 2), dom, "id");
  MetricField four = constant_field(4.0 * MatrixXd::Identity(2, 2), dom, "4id");
  RsFormulaValue f = curvature_via_formula(id, four, 0.5, x, u, v);
  CHECK(std::fabs(f.value) < 1e-14);
}

TEST_CASE("oracle equivalence: formula matches direct curvature of the convex sum") {
  // The module's central property: analytic pairs at 1e-6 relative, finite
  // differences at 5e-3. Also record that the skew combination printed in the
  // formula vanishes identically for the symmetric tensor D.
  ChartDomain dom(VectorXd::Zero(2), 1.0);
  Rng rng(88);
  double worst_analytic = 0.0, worst_fd = 0.0, worst_skew = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    MetricField a = gallery_field("polyrand:" + std::to_string(50 + trial) + ":0.2", 2, dom);
    MetricField b = gallery_field("polyrand:" + std::to_string(60 + trial) + ":0.15", 2, dom);
    MetricField a_fd = a.with_mode(DerivMode::FiniteDifference);
    MetricField b_fd = b.with_mode(DerivMode::FiniteDifference);
    for (int k = 0; k < 8; ++k) {
      VectorXd x = rng.in_ball(VectorXd::Zero(2), 0.5);
      VectorXd u = rng.normal_vector(2), v = rng.normal_vector(2);
      double s = rng.uniform(0.0, 1.0);

      MetricField gs = convex_sum(a, b, s);
      Tensor4 rs = riemann_lowered(gs, x);
      double direct = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int p = 0; p < 2; ++p)
            for (int l = 0; l < 2; ++l) direct += rs(i, j, p, l) * u[i] * v[j] * v[p] * u[l];
      double scale = std::max(1e-8, std::fabs(direct));

      RsFormulaValue f = curvature_via_formula(a, b, s, x, u, v);
      worst_analytic = std::max(worst_analytic, std::fabs(f.value - direct) / scale);
      worst_skew = std::max(worst_skew, std::fabs(f.skew_residual));

      RsFormulaValue ffd = curvature_via_formula(a_fd, b_fd, s, x, u, v);
      MetricField gs_fd = convex_sum(a_fd, b_fd, s);
      Tensor4 rs_fd = riemann_lowered(gs_fd, x);
      double direct_fd = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int p = 0; p < 2; ++p)
            for (int l = 0; l < 2; ++l)
              direct_fd += rs_fd(i, j, p, l) * u[i] * v[j] * v[p] * u[l];
      worst_fd = std::max(worst_fd, std::fabs(ffd.value - direct_fd) / scale);
    }
  }
  CHECK(worst_analytic <= 1e-6);
  CHECK(worst_fd <= 5e-3);
  CHECK(worst_skew <= 1e-12);
}

TEST_CASE("inverse norm bound") {
  ChartDomain dom(VectorXd::Zero(2), 1.0);
  MetricField id = constant_field(MatrixXd::Identity(2, 2), dom, "id");
  MetricField four = constant_field(4.0 * MatrixXd::Identity(2, 2), dom, "4id");
  MatrixXd dm(2, 2);
  dm << 2.0, 0.0, 0.0, 0.5;
  MetricField diag = constant_field(dm, dom, "diag");

  EndoP p4 = endo_P(id, four, pt(0, 0));
  InverseNormBound b = inverse_norm_bound(p4, 0.5);
  CHECK(b.bound == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(b.ok);

  EndoP p1 = endo_P(id, id, pt(0, 0));
  for (double s : {0.0, 0.3, 1.0}) {
    InverseNormBound bb = inverse_norm_bound(p1, s);
    CHECK(bb.bound == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(bb.ok);
  }

  EndoP pd = endo_P(id, diag, pt(0, 0));
  InverseNormBound bd = inverse_norm_bound(pd, 0.5);
  CHECK(bd.measured <= 4.0 / 3.0 + 1e-12);
  CHECK(bd.bound == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(bd.cap == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(bd.ok);
}

TEST_CASE("rs_bound plug-ins") {
  CHECK(rs_bound(3.0, 7.0, 2.0, 0.5, 0.0) == doctest::Approx(3.0));
  CHECK(rs_bound(3.0, 7.0, 2.0, 0.5, 1.0) == doctest::Approx(7.0));
  CHECK(rs_bound(1.0, 1.0, 1.0, 1.0, 0.5) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK_THROWS_AS(rs_bound(1.0, 1.0, 1.0, 0.0, 0.5), NonPositiveInput);
}

TEST_CASE("quasi-isometric ratio and the M function") {
  ChartDomain dom(VectorXd::Zero(2), 1.0);
  MetricField id = constant_field(MatrixXd::Identity(2, 2), dom, "id");
  MetricField four = constant_field(4.0 * MatrixXd::Identity(2, 2), dom, "4id");
  MatrixXd dm(2, 2);
  dm << 2.0, 0.0, 0.0, 0.5;
  MetricField diag = constant_field(dm, dom, "diag");
  std::vector<VectorXd> pts = {pt(0, 0), pt(0.3, 0.2)};

  QuasiIsometryReport same = quasi_isometric_ratio(id, id, pts);
  CHECK(same.a == 1.0);
  CHECK(same.sup_m == 0.0);

  QuasiIsometryReport r4 = quasi_isometric_ratio(id, four, pts);
  CHECK(r4.a == doctest::Approx(2.0).epsilon(1e-14));
  for (const auto& s : r4.samples) CHECK(s.m_value == doctest::Approx(std::log(2.0)).epsilon(1e-13));

  QuasiIsometryReport rd = quasi_isometric_ratio(id, diag, pts);
  CHECK(rd.a == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  for (const auto& s : rd.samples)
    CHECK(s.m_value == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-13));

  // log A = sup M as computed from the same eigenvalue list
  CHECK(r4.log_identity_residual <= 1e-12);
  CHECK(rd.log_identity_residual <= 1e-12);
  // symmetry of the ratio
  CHECK(quasi_isometric_ratio(diag, id, pts).a == doctest::Approx(rd.a).epsilon(1e-13));
}

TEST_CASE("sweep: bound holds with constants measured on the same samples") {
  ChartDomain dom(VectorXd::Zero(2), 1.0);
  MetricField a = gallery_field("polyrand:71:0.15", 2, dom);
  MetricField b = gallery_field("polyrand:72:0.2", 2, dom);
  std::vector<double> s_grid;
  for (int i = 0; i <= 10; ++i) s_grid.push_back(i / 10.0);
  std::vector<VectorXd> samples;
  Rng rng(7);
  for (int i = 0; i < 12; ++i) samples.push_back(rng.in_ball(VectorXd::Zero(2), 0.5));

  ConvexPathSweep sweep = convex_path_sweep(a, b, s_grid, samples, 11);
  CHECK(sweep.max_rel_err <= 1e-6);
  CHECK(sweep.bound_ok);
  CHECK(sweep.lambda_p > 0.0);
  // endpoint bounds reduce to the measured endpoint constants
  CHECK(sweep.bound.front() == doctest::Approx(sweep.c0).epsilon(1e-14));
  CHECK(sweep.bound.back() == doctest::Approx(sweep.c1).epsilon(1e-14));
  // DR_s stays bounded along the grid when the endpoints are analytic
  for (double v : sweep.sup_drs) CHECK(std::isfinite(v));
}

TEST_CASE("sweep is deterministic and worker-count independent") {
  ChartDomain dom(VectorXd::Zero(2), 1.0);
  MetricField a = gallery_field("polyrand:81:0.1", 2, dom);
  MetricField b = gallery_field("polyrand:82:0.1", 2, dom);
  std::vector<double> s_grid = {0.0, 0.5, 1.0};
  std::vector<VectorXd> samples = {pt(0.1, 0.2), pt(-0.3, 0.1)};
  SweepOptions o1, o4;
  o4.workers = 4;
  ConvexPathSweep s1 = convex_path_sweep(a, b, s_grid, samples, 5, o1);
  ConvexPathSweep s4 = convex_path_sweep(a, b, s_grid, samples, 5, o4);
  REQUIRE(s1.cells.size() == s4.cells.size());
  for (size_t i = 0; i < s1.cells.size(); ++i) {
    CHECK(s1.cells[i].r_formula == s4.cells[i].r_formula);
    CHECK(s1.cells[i].r_direct == s4.cells[i].r_direct);
  }
}

TEST_CASE("distance convex bilipschitz check") {
  auto d_euclid = [](const VectorXd& p, const VectorXd& q) { return (p - q).norm(); };
  DistanceFn d0 = d_euclid;
  DistanceFn d1 = [&](const VectorXd& p, const VectorXd& q) { return 2.0 * (p - q).norm(); };
  std::vector<std::pair<VectorXd, VectorXd>> pairs = {{pt(0, 0), pt(1, 0)},
                                                      {pt(0.2, 0.4), pt(-0.3, 0.9)}};
  // d1 = d0: every inequality holds for any A >= 1
  CHECK(distance_convex_bilipschitz_check(d0, d0, 1.5, 0.3, pairs).pass);
  // d1 = 2 d0 with A = 2, s = 1/2: d_s = 1.5 d0 sits inside [1.25 d0, 1.5 d0]
  BilipschitzCheck c = distance_convex_bilipschitz_check(d0, d1, 2.0, 0.5, pairs);
  CHECK(c.pass);
  // understating A is reported as a violation
  BilipschitzCheck bad = distance_convex_bilipschitz_check(d0, d1, 1.2, 0.5, pairs);
  CHECK(!bad.pass);
  CHECK(bad.worst_violation < 0.0);
}

TEST_CASE("geodesic distances of flat vs Poincare disk pass the bilipschitz check") {
  ChartDomain dom(VectorXd::Zero(2), 0.5);
  MetricField flat = gallery_field("flat", 2, dom);
  MetricField disk = gallery_field("poincare-disk", 2, dom);
  std::vector<VectorXd> pts;
  Rng rng(21);
  for (int i = 0; i < 5; ++i) pts.push_back(rng.in_ball(VectorXd::Zero(2), 0.35));
  double a2 = quadratic_quasi_isometry_constant(flat, disk, pts);
  double a = std::sqrt(a2);  // norm-level constant controls distances

  DistanceFn d0 = [&flat](const VectorXd& p, const VectorXd& q) {
    return geodesic_distance(flat, p, q).distance;
  };
  DistanceFn d1 = [&disk](const VectorXd& p, const VectorXd& q) {
    return geodesic_distance(disk, p, q).distance;
  };
  std::vector<std::pair<VectorXd, VectorXd>> pairs;
  for (size_t i = 0; i + 1 < pts.size(); ++i) pairs.push_back({pts[i], pts[i + 1]});
  for (double s : {0.25, 0.75})
    CHECK(distance_convex_bilipschitz_check(d0, d1, a * 1.01, s, pairs).pass);
}
