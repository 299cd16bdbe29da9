#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "geomlab/geodesics.hpp"

using namespace geomlab;

namespace {

VectorXd pt(double a, double b) {
  VectorXd x(2);
  x << a, b;
  return x;
}

}  // namespace

TEST_CASE("flat geodesics are straight lines") {
  MetricField flat = gallery_field("flat", 2);
  GeodesicState s(flat, pt(0.5, -1.0), pt(1.0, 0.0));
  Trajectory tr = integrate_geodesic(flat, s, 1.0, default_step(flat));
  CHECK(!tr.truncated);
  CHECK((tr.x.back() - pt(1.5, -1.0)).norm() < 1e-12);
  CHECK(energy_drift(flat, tr) < 1e-15);
}

TEST_CASE("geodesic state recomputes its energy") {
  MetricField s4 = gallery_field("scaled:4", 2);
  GeodesicState s(s4, pt(0, 0), pt(1.0, 2.0));
  CHECK(s.energy == doctest::Approx(0.5 * 4.0 * 5.0).epsilon(1e-12));
}

TEST_CASE("step rejection and truncation") {
  MetricField poly = gallery_field("polyrand:3:0.05", 2);  // chart radius 1
  GeodesicState s(poly, pt(0, 0), pt(1.0, 0.0));
  CHECK_THROWS_AS(integrate_geodesic(poly, s, 1.0, 0.2), StepRejected);
  Trajectory tr = integrate_geodesic(poly, s, 5.0, default_step(poly));
  CHECK(tr.truncated);
  CHECK(tr.exit_time > 0.5);
  CHECK(tr.exit_time < 1.5);
  CHECK(std::fabs((tr.x.back() - poly.domain().center).norm() - poly.domain().radius) < 1e-6);
}

TEST_CASE("great circle returns to its start after one period") {
  MetricField sphere = gallery_field("sphere:1", 2);
  VectorXd p = pt(1.0, 0.0);
  Frame f = orthonormal_frame(sphere, p);
  // tangential direction: the unit circle |x| = 1 is a great circle
  VectorXd v = f.E.col(1);
  GeodesicState s(sphere, p, v);
  Trajectory tr = integrate_geodesic(sphere, s, 2.0 * M_PI, default_step(sphere));
  CHECK(!tr.truncated);
  CHECK((tr.position_at(2.0 * M_PI) - p).norm() < 1e-6);
  CHECK(energy_drift(sphere, tr) <= 1e-8 * 2.0 * M_PI);
}

TEST_CASE("Poincare disk geodesics through the origin stay on a diameter") {
  MetricField disk = gallery_field("poincare-disk", 2);
  VectorXd dir = pt(std::cos(0.7), std::sin(0.7));
  GeodesicState s(disk, pt(0, 0), dir);
  Trajectory tr = integrate_geodesic(disk, s, 2.0, default_step(disk));
  for (size_t i = 0; i < tr.size(); ++i) {
    double cross = tr.x[i][0] * dir[1] - tr.x[i][1] * dir[0];
    CHECK(std::fabs(cross) < 1e-8);
  }
}

TEST_CASE("energy conservation across the gallery") {
  for (const char* label : {"flat", "scaled:4", "sphere:1", "poincare-disk", "half-plane",
                            "cigar", "polyrand:11:0.05", "cylinder:1"}) {
    MetricField f = gallery_field(label, 2);
    VectorXd p = f.domain().center;
    Frame fr = orthonormal_frame(f, p);
    VectorXd v = (fr.E.col(0) + fr.E.col(1)).normalized();
    v = fr.E * VectorXd(v);  // generic unit direction
    // renormalize to unit g-speed
    double vg = std::sqrt(v.dot(f.eval(p) * v));
    GeodesicState s(f, p, v / vg);
    Trajectory tr = integrate_geodesic(f, s, 10.0, default_step(f));
    double span = tr.reach();
    if (span > 0.0) CHECK(energy_drift(f, tr) <= 1e-8 * std::max(span, 0.1));
  }
}

TEST_CASE("exp map basics") {
  MetricField flat = gallery_field("flat", 2);
  CHECK((exp_map(flat, pt(1, 2), VectorXd::Zero(2)) - pt(1, 2)).norm() == 0.0);
  CHECK((exp_map(flat, pt(0, 0), pt(0.3, -0.4)) - pt(0.3, -0.4)).norm() < 1e-12);

  MetricField sphere = gallery_field("sphere:1", 2);
  VectorXd p = pt(1.0, 0.0);
  Frame f = orthonormal_frame(sphere, p);
  // length-pi geodesic reaches the antipode, which is (-1, 0) in this chart
  VectorXd v = M_PI * f.E.col(1);
  CHECK((exp_map(sphere, p, v) - pt(-1.0, 0.0)).norm() < 1e-5);

  MetricField poly = gallery_field("polyrand:3:0.05", 2);
  CHECK_THROWS_AS(exp_map(poly, pt(0, 0), pt(5.0, 0.0)), LeftDomain);
}

TEST_CASE("exp time scaling reparametrization") {
  MetricField sphere = gallery_field("sphere:1", 2);
  VectorXd p = pt(0.5, -0.3);
  Frame f = orthonormal_frame(sphere, p);
  VectorXd v = f.E.col(0) * 0.9 + f.E.col(1) * 0.2;
  double t = 0.6;
  VectorXd via_exp = exp_map(sphere, p, t * v);
  GeodesicState s(sphere, p, v);
  Trajectory tr = integrate_geodesic(sphere, s, t, default_step(sphere));
  CHECK((via_exp - tr.position_at(t)).norm() < 1e-8);
}

TEST_CASE("frames are orthonormal and psi_map pulls back to the identity") {
  MetricField cigar = gallery_field("cigar", 2);
  VectorXd p = pt(1.5, 0.4);
  Frame f = orthonormal_frame(cigar, p);
  MatrixXd gram = f.E.transpose() * cigar.eval(p) * f.E;
  CHECK((gram - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);

  CHECK((psi_map(cigar, p, f, VectorXd::Zero(2)) - p).norm() == 0.0);

  MetricField flat = gallery_field("flat", 2);
  Frame id = orthonormal_frame(flat, pt(0, 0));
  VectorXd a = pt(0.7, -0.2);
  CHECK((psi_map(flat, pt(1, 1), id, a) - (pt(1, 1) + a)).norm() < 1e-12);

  // pullback metric of psi at 0 is the identity: finite-difference check
  MetricField poly = gallery_field("polyrand:17:0.1", 2);
  VectorXd q = pt(0.1, -0.2);
  Frame fq = orthonormal_frame(poly, q);
  double h = 1e-5;
  MatrixXd jac(2, 2);
  for (int i = 0; i < 2; ++i) {
    VectorXd e = VectorXd::Zero(2);
    e[i] = h;
    jac.col(i) = (psi_map(poly, q, fq, e) - psi_map(poly, q, fq, VectorXd(-e))) / (2.0 * h);
  }
  MatrixXd pullback = jac.transpose() * poly.eval(q) * jac;
  CHECK((pullback - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("conjugate radius: flat capped, sphere at pi, disk capped") {
  MetricField flat = gallery_field("flat", 2);
  ConjugateRadius cf = jacobi_conjugate_radius(flat, pt(0, 0), 8, 10.0);
  CHECK(cf.capped);
  CHECK(cf.value == doctest::Approx(10.0));

  MetricField sphere = gallery_field("sphere:1", 2);
  ConjugateRadius cs = jacobi_conjugate_radius(sphere, pt(1.0, 0.0), 16, 5.0);
  CHECK(!cs.capped);
  CHECK(cs.value == doctest::Approx(M_PI).epsilon(0.02));

  MetricField disk = gallery_field("poincare-disk", 2);
  ConjugateRadius cd = jacobi_conjugate_radius(disk, pt(0, 0), 8, 5.0);
  CHECK(cd.capped);
}

TEST_CASE("shortest loop: flat capped, cylinder and sphere at pi") {
  MetricField flat = gallery_field("flat", 2);
  LoopSearchResult lf = shortest_geodesic_loop(flat, pt(0, 0), 16, 10.0);
  CHECK(lf.capped);

  MetricField cyl = gallery_field("cylinder:1", 2);
  LoopSearchResult lc = shortest_geodesic_loop(cyl, pt(0, 0), 64, 5.0);
  CHECK(!lc.capped);
  CHECK(lc.half_length == doctest::Approx(M_PI).epsilon(0.02));

  MetricField sphere = gallery_field("sphere:1", 2);
  LoopSearchResult ls = shortest_geodesic_loop(sphere, pt(1.0, 0.0), 64, 5.0);
  CHECK(!ls.capped);
  CHECK(ls.half_length == doctest::Approx(M_PI).epsilon(0.02));
}

TEST_CASE("injectivity radius estimates") {
  MetricField flat = gallery_field("flat", 2);
  InjectivityEstimate ef = injectivity_radius_estimate(flat, pt(0, 0), 10.0, 8, 16);
  CHECK(ef.lower_bound == doctest::Approx(10.0));
  CHECK(ef.conjugate_capped);
  CHECK(ef.loop_capped);

  MetricField sphere = gallery_field("sphere:1", 2);
  InjectivityEstimate es = injectivity_radius_estimate(sphere, pt(1.0, 0.0), 5.0, 16, 64);
  CHECK(es.lower_bound == doctest::Approx(M_PI).epsilon(0.02));
  CHECK(es.lower_bound <= es.conjugate_radius + 1e-12);

  MetricField cyl = gallery_field("cylinder:1", 2);
  InjectivityEstimate ec = injectivity_radius_estimate(cyl, pt(0, 0), 5.0, 16, 64);
  CHECK(ec.lower_bound == doctest::Approx(M_PI).epsilon(0.02));

  std::string json = injectivity_json(ec);
  CHECK(json.find("\"lower_bound\"") != std::string::npos);
  CHECK(json.find("\"conjugate_capped\"") != std::string::npos);
}

TEST_CASE("injectivity estimate varies slowly along a convex path") {
  ChartDomain dom(VectorXd::Zero(2), 1.0);
  MetricField g0 = gallery_field("flat", 2, dom);
  MetricField g1 = gallery_field("polyrand:13:0.05", 2, dom);
  VectorXd p = pt(0.1, 0.0);
  double prev = -1.0;
  for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    MetricField gs = convex_sum(g0, g1, s);
    InjectivityEstimate e = injectivity_radius_estimate(gs, p, 5.0, 16, 32);
    if (prev > 0.0)
      CHECK(std::fabs(e.lower_bound - prev) / std::min(e.lower_bound, prev) <= 0.10);
    prev = e.lower_bound;
  }
}

TEST_CASE("geodesic distance: flat exact, disk closed form, symmetry") {
  MetricField flat = gallery_field("flat", 2);
  DistanceResult d = geodesic_distance(flat, pt(0.2, 0.3), pt(-1.0, 2.0));
  CHECK(d.method == "shooting");
  CHECK(d.distance == doctest::Approx((pt(0.2, 0.3) - pt(-1.0, 2.0)).norm()).epsilon(1e-10));

  MetricField disk = gallery_field("poincare-disk", 2);
  double r = 0.5;
  DistanceResult dd = geodesic_distance(disk, pt(0, 0), pt(r, 0.0));
  CHECK(dd.distance == doctest::Approx(std::log((1.0 + r) / (1.0 - r))).epsilon(1e-7));

  DistanceResult ab = geodesic_distance(disk, pt(0.2, 0.1), pt(-0.3, 0.4));
  DistanceResult ba = geodesic_distance(disk, pt(-0.3, 0.4), pt(0.2, 0.1));
  CHECK(std::fabs(ab.distance - ba.distance) < 1e-8);
}

TEST_CASE("geodesic distance wraps periodic charts") {
  MetricField cyl = gallery_field("cylinder:1", 2);
  // shortest representative goes the short way around
  DistanceResult d = geodesic_distance(cyl, pt(3.0, 0.0), pt(-3.0, 0.0));
  CHECK(d.distance == doctest::Approx(2.0 * M_PI - 6.0).epsilon(1e-8));
}

TEST_CASE("dijkstra fallback route carries its method tag and stays close") {
  MetricField disk = gallery_field("poincare-disk", 2);
  VectorXd p = pt(0.0, 0.0), q = pt(0.5, 0.0);
  DistanceResult d = geodesic_distance(disk, p, q, DistanceMethod::DijkstraOnly);
  CHECK(d.method == "dijkstra");
  double exact = std::log(1.5 / 0.5);
  CHECK(std::fabs(d.distance - exact) / exact < 0.03);  // grid-graph accuracy class
}

TEST_CASE("trajectory serialization") {
  MetricField flat = gallery_field("flat", 2);
  GeodesicState s(flat, pt(0, 0), pt(1, 0));
  Trajectory tr = integrate_geodesic(flat, s, 0.1, 0.01);
  std::string header = trajectory_csv_header(2);
  CHECK(header == "t,x0,x1,v0,v1,energy");
  std::string rows = trajectory_csv_rows(flat, tr);
  CHECK(std::count(rows.begin(), rows.end(), '\n') == static_cast<long>(tr.size()));
}
