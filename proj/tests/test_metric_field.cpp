#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "geomlab/curvature.hpp"
#include "geomlab/metric_field.hpp"

using namespace geomlab;

namespace {

VectorXd pt(double a, double b) {
  VectorXd x(2);
  x << a, b;
  return x;
}

std::vector<std::string> gallery_labels() {
  return {"flat",       "scaled:4", "sphere:1",         "poincare-disk",
          "half-plane", "cigar",    "polyrand:7:0.05",  "cylinder:1"};
}

}  // namespace

TEST_CASE("eval on the gallery closed forms") {
  MetricField flat = gallery_field("flat", 2);
  CHECK(flat.eval(pt(0.3, -0.2)).isApprox(MatrixXd::Identity(2, 2)));

  MetricField scaled = gallery_field("scaled:4", 2);
  CHECK(scaled.eval(pt(1.0, 2.0)).isApprox(4.0 * MatrixXd::Identity(2, 2)));

  // half-plane metric (dx^2+dy^2)/y^2 at (0,2) is diag(1/4, 1/4)
  MetricField hp = gallery_field("half-plane", 2);
  MatrixXd g = hp.eval(pt(0.0, 2.0));
  CHECK(g(0, 0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(g(1, 1) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(g(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("eval errors") {
  MetricField disk = gallery_field("poincare-disk", 2);
  CHECK_THROWS_AS(disk.eval(pt(0.95, 0.0)), OutOfDomain);

  // degenerate input field signals NotSPD
  ChartDomain dom(VectorXd::Zero(2), 1.0);
  MetricField bad = MetricField::finite_difference(2, "bad", dom, [](const VectorXd& x) {
    MatrixXd m(2, 2);
    m << x[0], 1.0, 1.0, 0.0;
    return m;
  });
  CHECK_THROWS_AS(bad.eval(pt(0.1, 0.1)), NotSPD);
}

TEST_CASE("partials: flat zero, half-plane closed form, Richardson order") {
  MetricField flat = gallery_field("flat", 2);
  CHECK(flat.partial1(pt(0.2, 0.4), 0).cwiseAbs().maxCoeff() == 0.0);

  // d g_11 / d y at (0,1) = d(y^-2)/dy = -2
  ChartDomain dom(pt(0.0, 1.0), 0.5);
  MetricField hp = gallery_field("half-plane", 2, dom);
  CHECK(hp.partial1(pt(0.0, 1.0), 1)(0, 0) == doctest::Approx(-2.0).epsilon(1e-12));

  // central differences converge at second order against the closed form
  MetricField poly = gallery_field("polyrand:3:0.2", 2);
  MetricField fd = poly.with_mode(DerivMode::FiniteDifference);
  VectorXd x = pt(0.21, -0.13);
  MatrixXd exact = poly.partial1(x, 0);
  fd.set_fd_steps(2e-3, 1e-3);
  double err_h = (fd.partial1(x, 0) - exact).cwiseAbs().maxCoeff();
  fd.set_fd_steps(1e-3, 1e-3);
  double err_h2 = (fd.partial1(x, 0) - exact).cwiseAbs().maxCoeff();
  CHECK(err_h / err_h2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("partials: margin errors in finite-difference mode") {
  MetricField poly = gallery_field("polyrand:3:0.1", 2).with_mode(DerivMode::FiniteDifference);
  double r = poly.domain().radius;
  VectorXd edge = pt(r - 1e-6, 0.0);
  CHECK_THROWS_AS(poly.partial1(edge, 0), StepTooLarge);
  CHECK_THROWS_AS(poly.partial1(pt(2.0 * r, 0.0), 0), OutOfDomain);
}

TEST_CASE("partials symmetric in differentiation indices") {
  MetricField poly = gallery_field("polyrand:9:0.15", 2);
  VectorXd x = pt(0.1, 0.2);
  CHECK((poly.partial2(x, 0, 1) - poly.partial2(x, 1, 0)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((poly.partial3(x, 0, 1, 1) - poly.partial3(x, 1, 1, 0)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("convex_sum endpoints and affinity") {
  MetricField g0 = gallery_field("flat", 2, ChartDomain(VectorXd::Zero(2), 1.0));
  MetricField g1 = gallery_field("polyrand:5:0.2", 2);
  VectorXd x = pt(0.3, 0.1);

  CHECK(convex_sum(g0, g1, 0.0).eval(x).isApprox(g0.eval(x), 1e-15));
  CHECK(convex_sum(g0, g1, 1.0).eval(x).isApprox(g1.eval(x), 1e-15));

  MetricField d = gallery_field("flat", 2);
  MetricField d4 = gallery_field("scaled:4", 2);
  CHECK(convex_sum(d, d4, 0.5).eval(pt(1, 1)).isApprox(2.5 * MatrixXd::Identity(2, 2), 1e-15));

  for (double s : {0.125, 0.4, 0.9}) {
    MatrixXd direct = (1.0 - s) * g0.eval(x) + s * g1.eval(x);
    CHECK((convex_sum(g0, g1, s).eval(x) - direct).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("convex_sum of flat and cigar stays SPD on a grid") {
  MetricField cigar = gallery_field("cigar", 2);
  MetricField flat = gallery_field("flat", 2, cigar.domain());
  MetricField mix = convex_sum(flat, cigar, 0.5);
  for (double u = -0.8; u <= 4.5; u += 0.53)
    for (double th = -1.5; th <= 1.5; th += 0.48) {
      VectorXd x = pt(u, th);
      if (!cigar.domain().contains(x)) continue;
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(mix.eval(x));
      CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
}

TEST_CASE("convex_sum rejects mismatched charts") {
  MetricField a = gallery_field("flat", 2, ChartDomain(VectorXd::Zero(2), 1.0));
  MetricField b = gallery_field("flat", 2, ChartDomain(VectorXd::Zero(2), 2.0));
  CHECK_THROWS_AS(convex_sum(a, b, 0.5), DimensionMismatch);
  MetricField c3 = gallery_field("flat", 3);
  CHECK_THROWS_AS(convex_sum(a, c3, 0.5), DimensionMismatch);
  CHECK_THROWS_AS(MetricPath(a, b), DimensionMismatch);
}

TEST_CASE("metric path endpoints") {
  ChartDomain dom(VectorXd::Zero(2), 1.0);
  MetricPath path(gallery_field("flat", 2, dom), gallery_field("polyrand:5:0.2", 2, dom));
  VectorXd x = pt(0.2, -0.4);
  CHECK(path.at(0.0).eval(x).isApprox(path.g0.eval(x), 1e-15));
  CHECK(path.at(1.0).eval(x).isApprox(path.g1.eval(x), 1e-15));
}

TEST_CASE("gallery invariants: symmetry and positivity at sampled points") {
  Rng rng(99);
  for (const auto& label : gallery_labels()) {
    MetricField f = gallery_field(label, 2);
    for (int k = 0; k < 25; ++k) {
      VectorXd x = rng.in_ball(f.domain().center, 0.75 * f.domain().radius);
      MatrixXd g = f.eval_raw(x);
      CHECK(sym_defect(g) <= 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff()));
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(g);
      CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
  }
}

TEST_CASE("seeded polyrand fields are reproducible and SPD") {
  MetricField a = gallery_field("polyrand:42:0.05", 2);
  MetricField b = gallery_field("polyrand:42:0.05", 2);
  MetricField c = gallery_field("polyrand:43:0.05", 2);
  VectorXd x = pt(0.4, -0.3);
  CHECK(a.eval(x).isApprox(b.eval(x)));
  CHECK(!a.eval(x).isApprox(c.eval(x)));
  Rng rng(3);
  for (int seed = 0; seed < 100; ++seed) {
    MetricField f = gallery_field("polyrand:" + std::to_string(seed) + ":0.05", 2);
    VectorXd y = rng.in_ball(VectorXd::Zero(2), 0.9);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(f.eval(y));
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("quadratic quasi-isometry constant") {
  MetricField d = gallery_field("flat", 2);
  MetricField d4 = gallery_field("scaled:4", 2, d.domain());
  std::vector<VectorXd> pts = {pt(0, 0), pt(0.5, 0.5), pt(-1, 2)};
  CHECK(quadratic_quasi_isometry_constant(d, d, pts) == 1.0);
  CHECK(quadratic_quasi_isometry_constant(d, d4, pts) == doctest::Approx(4.0).epsilon(1e-13));

  ChartDomain dom(VectorXd::Zero(2), 1.0);
  MetricField diag = MetricField::analytic(
      2, "diag(2,1/2)", dom,
      [](const VectorXd&) {
        MatrixXd m(2, 2);
        m << 2.0, 0.0, 0.0, 0.5;
        return m;
      },
      [](const VectorXd&, int) { return MatrixXd::Zero(2, 2); },
      [](const VectorXd&, int, int) { return MatrixXd::Zero(2, 2); },
      [](const VectorXd&, int, int, int) { return MatrixXd::Zero(2, 2); });
  MetricField flat1 = gallery_field("flat", 2, dom);
  std::vector<VectorXd> inside = {pt(0, 0), pt(0.2, 0.1)};
  CHECK(quadratic_quasi_isometry_constant(flat1, diag, inside) ==
        doctest::Approx(2.0).epsilon(1e-13));
  // symmetric in the pair, and 1 iff the fields agree
  CHECK(quadratic_quasi_isometry_constant(diag, flat1, inside) ==
        doctest::Approx(quadratic_quasi_isometry_constant(flat1, diag, inside)));
  CHECK(quadratic_quasi_isometry_constant(diag, diag, inside) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("convex sum quadratic-form pinching against the endpoint constant") {
  ChartDomain dom(VectorXd::Zero(2), 1.0);
  MetricField g0 = gallery_field("flat", 2, dom);
  MetricField g1 = gallery_field("polyrand:21:0.3", 2, dom);
  std::vector<VectorXd> pts = {pt(0, 0), pt(0.3, -0.2), pt(-0.4, 0.4)};
  double a = quadratic_quasi_isometry_constant(g0, g1, pts);
  Rng rng(17);
  for (double s : {0.25, 0.5, 0.75}) {
    MetricField gs = convex_sum(g0, g1, s);
    for (const auto& x : pts) {
      for (int k = 0; k < 10; ++k) {
        VectorXd u = rng.unit_vector(2);
        double q0 = u.dot(g0.eval(x) * u);
        double qs = u.dot(gs.eval(x) * u);
        CHECK(qs >= ((1.0 - s) + s / a) * q0 - 1e-12);
        CHECK(qs <= ((1.0 - s) + s * a) * q0 + 1e-12);
      }
    }
  }
}

TEST_CASE("taylor normal metric: flat, normality, curvature round trip") {
  Tensor4 zero4(2);
  Tensor5 zero5(2);
  Tensor6 zero6(2);
  MetricField flat = taylor_normal_metric(zero4, zero5, zero6, 1.0);
  CHECK(flat.eval(pt(0.3, 0.2)).isApprox(MatrixXd::Identity(2, 2)));

  // constant curvature K: R(1,2,2,1) = -K in the expansion's convention
  auto constant_curvature = [](double k) {
    Tensor4 r(2);
    r(0, 1, 1, 0) = -k;
    r(1, 0, 0, 1) = -k;
    r(0, 1, 0, 1) = k;
    r(1, 0, 1, 0) = k;
    return r;
  };
  MetricField sphere_like = taylor_normal_metric(constant_curvature(1.0), zero5, zero6, 0.5);
  Tensor3 gamma = christoffel(sphere_like, VectorXd::Zero(2));
  CHECK(gamma.max_abs() < 1e-14);

  VectorXd e0 = VectorXd::Zero(2), e1 = VectorXd::Zero(2);
  e0[0] = 1.0;
  e1[1] = 1.0;
  CHECK(sectional(sphere_like, VectorXd::Zero(2), e0, e1) ==
        doctest::Approx(1.0).epsilon(1e-6));

  // generic 3D input: riemann at the origin reproduces minus the input
  MetricField src = gallery_field("polyrand:77:0.3", 3);
  Tensor4 rsrc = riemann_lowered(src, VectorXd::Zero(3));
  Tensor4 rin(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) rin(i, j, k, l) = -rsrc(i, j, k, l);
  MetricField rebuilt = taylor_normal_metric(rin, Tensor5(3), Tensor6(3), 0.5);
  Tensor4 rback = riemann_lowered(rebuilt, VectorXd::Zero(3));
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          worst = std::max(worst, std::fabs(rback(i, j, k, l) + rin(i, j, k, l)));
  CHECK(worst < 1e-6);
}

TEST_CASE("taylor normal metric rejects bad symmetry") {
  Tensor4 bad(2);
  bad(0, 1, 1, 0) = 1.0;  // missing the partner entries
  CHECK_THROWS_AS(taylor_normal_metric(bad, Tensor5(2), Tensor6(2), 1.0), BadSymmetry);
}

TEST_CASE("gallery label parsing errors") {
  CHECK_THROWS_AS(gallery_field("nope", 2), ConfigError);
  CHECK_THROWS_AS(gallery_field("cigar", 3), ConfigError);
  CHECK_THROWS_AS(gallery_field("scaled:-1", 2), ConfigError);
}

TEST_CASE("periodic wrap difference") {
  MetricField cyl = gallery_field("cylinder:1", 2);
  VectorXd a = pt(3.1, 0.0), b = pt(-3.1, 0.0);
  VectorXd d = cyl.domain().wrap_difference(a, b);
  CHECK(std::fabs(d[0]) == doctest::Approx(2.0 * M_PI - 6.2).epsilon(1e-9));
}
