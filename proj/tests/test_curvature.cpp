#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "geomlab/curvature.hpp"

using namespace geomlab;

namespace {

VectorXd pt(double a, double b) {
  VectorXd x(2);
  x << a, b;
  return x;
}

// Spherical-coordinates chart of the radius-r sphere, g = diag(r^2, r^2 sin^2 th),
// used for the closed-form Christoffel checks.
MetricField sphere_polar(double r) {
  VectorXd c(2);
  c << M_PI / 2.0, 0.0;
  ChartDomain dom(c, 1.0);
  auto q = [r](double th, int order) {
    double s = std::sin(th), co = std::cos(th);
    switch (order) {
      case 0: return r * r * s * s;
      case 1: return r * r * 2.0 * s * co;
      case 2: return r * r * 2.0 * (co * co - s * s);
      default: return r * r * -8.0 * s * co;
    }
  };
  return MetricField::analytic(
      2, "sphere-polar", dom,
      [r, q](const VectorXd& x) {
        MatrixXd g = MatrixXd::Zero(2, 2);
        g(0, 0) = r * r;
        g(1, 1) = q(x[0], 0);
        return g;
      },
      [q](const VectorXd& x, int i) {
        MatrixXd g = MatrixXd::Zero(2, 2);
        if (i == 0) g(1, 1) = q(x[0], 1);
        return g;
      },
      [q](const VectorXd& x, int i, int j) {
        MatrixXd g = MatrixXd::Zero(2, 2);
        if (i == 0 && j == 0) g(1, 1) = q(x[0], 2);
        return g;
      },
      [q](const VectorXd& x, int i, int j, int k) {
        MatrixXd g = MatrixXd::Zero(2, 2);
        if (i == 0 && j == 0 && k == 0) g(1, 1) = q(x[0], 3);
        return g;
      });
}

}  // namespace

TEST_CASE("christoffel: flat and half-plane closed forms") {
  MetricField flat = gallery_field("flat", 2);
  CHECK(christoffel(flat, pt(1.0, -2.0)).max_abs() == 0.0);

  ChartDomain dom(pt(0.0, 1.0), 0.5);
  MetricField hp = gallery_field("half-plane", 2, dom);
  Tensor3 g = christoffel(hp, pt(0.0, 1.0));
  // Gamma^x_xy = -1/y, Gamma^y_xx = 1/y, Gamma^y_yy = -1/y at y = 1
  CHECK(g(0, 0, 1) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(g(0, 1, 0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(g(1, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g(1, 1, 1) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(g(0, 0, 0) == doctest::Approx(0.0));
  CHECK(g(1, 0, 1) == doctest::Approx(0.0));
}

TEST_CASE("christoffel: sphere polar chart at the equator") {
  MetricField sp = sphere_polar(1.0);
  Tensor3 g = christoffel(sp, pt(M_PI / 2.0, 0.0));
  // -sin th cos th and cot th both vanish at th = pi/2
  CHECK(std::fabs(g(0, 1, 1)) < 1e-12);
  CHECK(std::fabs(g(1, 0, 1)) < 1e-12);
}

TEST_CASE("christoffel symmetry in the lower pair") {
  MetricField poly = gallery_field("polyrand:31:0.2", 3);
  Tensor3 g = christoffel(poly, VectorXd::Constant(3, 0.1));
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(g(k, i, j) == g(k, j, i));
}

TEST_CASE("riemann: flat, constant negative and positive curvature") {
  MetricField flat = gallery_field("flat", 2);
  CHECK(riemann_lowered(flat, pt(0.5, 0.5)).max_abs() < 1e-14);

  MetricField hp = gallery_field("half-plane", 2);
  MetricField disk = gallery_field("poincare-disk", 2);
  VectorXd e0 = pt(1, 0), e1 = pt(0, 1);
  for (const auto& x : {pt(0.0, 2.0), pt(0.4, 1.6), pt(-0.5, 2.5)})
    CHECK(sectional(hp, x, e0, e1) == doctest::Approx(-1.0).epsilon(1e-10));
  for (const auto& x : {pt(0.0, 0.0), pt(0.3, 0.1), pt(-0.2, -0.5)})
    CHECK(sectional(disk, x, e0, e1) == doctest::Approx(-1.0).epsilon(1e-10));

  MetricField s2 = gallery_field("sphere:2", 2);
  for (const auto& x : {pt(0.0, 0.0), pt(1.0, 0.5)})
    CHECK(sectional(s2, x, e0, e1) == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("sectional: invariances and degenerate plane") {
  MetricField s1 = gallery_field("sphere:1", 2);
  VectorXd x = pt(0.3, -0.4);
  VectorXd u = pt(1.0, 0.2), v = pt(-0.3, 0.9);
  double k = sectional(s1, x, u, v);
  CHECK(k == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sectional(s1, x, u + v, v) == doctest::Approx(k).epsilon(1e-10));
  CHECK(sectional(s1, x, 2.0 * u, -3.0 * v) == doctest::Approx(k).epsilon(1e-10));
  CHECK_THROWS_AS(sectional(s1, x, u, 2.0 * u), DegeneratePlane);
}

TEST_CASE("riemann symmetries and first Bianchi on gallery and seeded fields") {
  Rng rng(5);
  std::vector<MetricField> fields;
  for (const char* label : {"sphere:1", "poincare-disk", "half-plane", "cigar"})
    fields.push_back(gallery_field(label, 2));
  for (int seed = 0; seed < 100; ++seed)
    fields.push_back(gallery_field("polyrand:" + std::to_string(seed) + ":0.1", 2));

  for (const auto& f : fields) {
    VectorXd x = rng.in_ball(f.domain().center, 0.5 * f.domain().radius);
    Tensor4 r = riemann_lowered(f, x);
    double scale = std::max(1.0, r.max_abs());
    CHECK(riemann_symmetry_residual(r) <= 1e-8 * scale);
    CHECK(first_bianchi_residual(r) <= 1e-8 * scale);
  }

  // finite-difference mode obeys the looser tolerance class
  MetricField fd = gallery_field("polyrand:4:0.1", 2).with_mode(DerivMode::FiniteDifference);
  Tensor4 r = riemann_lowered(fd, pt(0.2, 0.1));
  CHECK(riemann_symmetry_residual(r) <= 1e-4);
  CHECK(first_bianchi_residual(r) <= 1e-4);
}

TEST_CASE("covariant derivative of R: flat, parallel on space forms, second Bianchi") {
  MetricField flat = gallery_field("flat", 2);
  CHECK(covariant_derivative_R(flat, pt(0.1, 0.1)).max_abs() < 1e-14);

  for (const char* label : {"sphere:1", "poincare-disk", "half-plane"}) {
    MetricField f = gallery_field(label, 2);
    VectorXd x = f.domain().center + pt(0.05, 0.1);
    MatrixXd g = f.eval(x);
    CHECK(covd_riemann_norm(covariant_derivative_R(f, x), g) <= 1e-6);
  }

  MetricField poly = gallery_field("polyrand:12:0.15", 2);
  VectorXd x = pt(0.25, -0.2);
  Tensor5 covd = covariant_derivative_R(poly, x);
  CHECK(second_bianchi_residual(covd) <= 1e-6 * std::max(1.0, covd.max_abs()));

  // dual-mode oracle: finite differences track the closed-form values
  Tensor5 covd_fd = covariant_derivative_R(poly.with_mode(DerivMode::FiniteDifference), x);
  double worst = 0.0;
  for (size_t i = 0; i < covd.data().size(); ++i)
    worst = std::max(worst, std::fabs(covd.data()[i] - covd_fd.data()[i]));
  CHECK(worst <= 5e-3);
  CHECK(second_bianchi_residual(covd_fd) <= 1e-3);
}

TEST_CASE("norm estimates: flat zero, sphere scale, disk homogeneity") {
  MetricField flat = gallery_field("flat", 2);
  std::vector<VectorXd> pts = {pt(0, 0), pt(1, 1), pt(-2, 3)};
  NormEstimate e = curvature_norm_estimate(flat, pts);
  CHECK(e.sup_R == 0.0);
  CHECK(e.sup_DR == 0.0);
  CHECK(e.sup_gamma == 0.0);

  // 2D constant curvature K: orthonormal-frame Frobenius norm of R is 2|K|
  MetricField s1 = gallery_field("sphere:1", 2);
  std::vector<VectorXd> sp = {pt(0, 0), pt(0.5, 0.3), pt(-0.8, 0.1)};
  NormEstimate es = curvature_norm_estimate(s1, sp);
  CHECK(es.sup_R == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(es.sup_DR <= 1e-6);

  MetricField disk = gallery_field("poincare-disk", 2);
  for (const auto& x : {pt(0.0, 0.0), pt(0.4, 0.2), pt(-0.3, -0.6)})
    CHECK(sectional(disk, x, pt(1, 0), pt(0, 1)) == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("scaling law: c*g scales sectional by 1/c and keeps Christoffel") {
  ChartDomain dom(VectorXd::Zero(2), 1.0);
  MetricField g = gallery_field("polyrand:8:0.2", 2, dom);
  const double c = 3.7;
  MetricField cg = MetricField::analytic(
      2, "scaled-poly", dom,
      [g, c](const VectorXd& x) { return MatrixXd(c * g.eval_raw(x)); },
      [g, c](const VectorXd& x, int i) { return MatrixXd(c * g.partial1(x, i)); },
      [g, c](const VectorXd& x, int i, int j) { return MatrixXd(c * g.partial2(x, i, j)); },
      [g, c](const VectorXd& x, int i, int j, int k) {
        return MatrixXd(c * g.partial3(x, i, j, k));
      });
  VectorXd x = pt(0.2, 0.3);
  VectorXd u = pt(1.0, -0.5), v = pt(0.4, 1.0);
  CHECK(sectional(cg, x, u, v) == doctest::Approx(sectional(g, x, u, v) / c).epsilon(1e-10));
  Tensor3 ga = christoffel(g, x), gb = christoffel(cg, x);
  for (size_t i = 0; i < ga.data().size(); ++i)
    CHECK(gb.data()[i] == doctest::Approx(ga.data()[i]).epsilon(1e-12));
}

TEST_CASE("curvature sample serialization") {
  MetricField s1 = gallery_field("sphere:1", 2);
  CurvatureSample s = curvature_sample(s1, pt(0.2, 0.1));
  CHECK(s.sectional_values.size() == 1);
  CHECK(s.sectional_values[0] == doctest::Approx(1.0).epsilon(1e-8));

  std::string header = curvature_csv_header(2);
  std::string row = curvature_csv_row(s);
  auto count = [](const std::string& t) { return std::count(t.begin(), t.end(), ','); };
  CHECK(count(header) == count(row));
  // documented order: coords, then 8 Gamma entries, then 16 R entries, norms
  CHECK(count(header) == 2 + 8 + 16 + 3 - 1);

  std::string json = curvature_json(s);
  CHECK(json.find("\"norm_R\"") != std::string::npos);
  CHECK(json.find("\"sectional\"") != std::string::npos);
}
