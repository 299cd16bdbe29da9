#include "geomlab/qift.hpp"

#include <Eigen/SVD>

#include "geomlab/curvature.hpp"

namespace geomlab {

IFTBounds ift_bounds(double L, double M, double K, double R) {
  if (L <= 0.0 || M <= 0.0 || R <= 0.0 || K < 0.0)
    throw NonPositiveInput("ift_bounds: need L, M, R > 0 and K >= 0");
  IFTBounds b;
  b.L = L;
  b.M = M;
  b.K = K;
  b.R = R;
  double curvature_cap = (K == 0.0) ? std::numeric_limits<double>::infinity() : 1.0 / (2.0 * K * M);
  b.R1 = std::min(curvature_cap, R);
  double second = 1.0 / (2.0 * M * (L + K * b.R1));
  b.R2 = std::min(1.0 / b.R1, second);
  b.alt_R2 = std::min(b.R1, second);
  b.R3 = b.R2 / (2.0 * L);
  return b;
}

namespace {

// Full second-difference tensor D2F[e_i, e_j] via central stencils; reused to
// evaluate the bilinear norm over sampled direction pairs.
std::vector<MatrixXd> second_difference_tensor(const MapFn& F, const VectorXd& x, double h) {
  const int n = static_cast<int>(x.size());
  VectorXd f0 = F(x);
  const int out = static_cast<int>(f0.size());
  std::vector<MatrixXd> t(out, MatrixXd::Zero(n, n));  // t[c](i,j) = D2F^c[e_i,e_j]
  for (int i = 0; i < n; ++i) {
    VectorXd ei = VectorXd::Zero(n);
    ei[i] = h;
    VectorXd fp = F(x + ei), fm = F(x - ei);
    for (int c = 0; c < out; ++c) t[c](i, i) = (fp[c] - 2.0 * f0[c] + fm[c]) / (h * h);
    for (int j = i + 1; j < n; ++j) {
      VectorXd ej = VectorXd::Zero(n);
      ej[j] = h;
      VectorXd fpp = F(x + ei + ej), fpm = F(x + ei - ej), fmp = F(x - ei + ej),
               fmm = F(x - ei - ej);
      for (int c = 0; c < out; ++c) {
        double v = (fpp[c] - fpm[c] - fmp[c] + fmm[c]) / (4.0 * h * h);
        t[c](i, j) = v;
        t[c](j, i) = v;
      }
    }
  }
  return t;
}

double bilinear_norm(const std::vector<MatrixXd>& t, int dir_samples) {
  if (t.empty()) return 0.0;
  const int n = static_cast<int>(t[0].rows());
  auto dirs = unit_directions(n, dir_samples);
  // include the coordinate axes as well
  for (int i = 0; i < n; ++i) {
    VectorXd e = VectorXd::Zero(n);
    e[i] = 1.0;
    dirs.push_back(e);
  }
  double worst = 0.0;
  for (const auto& u : dirs)
    for (const auto& v : dirs) {
      double s = 0.0;
      for (const auto& tc : t) {
        double c = u.dot(tc * v);
        s += c * c;
      }
      worst = std::max(worst, std::sqrt(s));
    }
  return worst;
}

std::vector<VectorXd> ball_grid(const VectorXd& x0, double R, int grid) {
  const int n = static_cast<int>(x0.size());
  std::vector<VectorXd> pts;
  std::vector<int> idx(n, 0);
  while (true) {
    VectorXd x = x0;
    for (int i = 0; i < n; ++i) x[i] += -R + 2.0 * R * idx[i] / (grid - 1);
    if ((x - x0).norm() <= R) pts.push_back(x);
    int i = 0;
    for (; i < n; ++i) {
      if (++idx[i] < grid) break;
      idx[i] = 0;
    }
    if (i == n) break;
  }
  return pts;
}

}  // namespace

double second_derivative_norm(const MapFn& F, const VectorXd& x, double h, int dir_samples) {
  return bilinear_norm(second_difference_tensor(F, x, h), dir_samples);
}

SmoothMapSample estimate_map_constants(
    const MapFn& F, const VectorXd& x0, double R, int grid,
    const std::function<MatrixXd(const VectorXd&)>& analytic_jacobian) {
  if (R <= 0.0 || grid < 2) throw NonPositiveInput("estimate_map_constants: need R > 0, grid >= 2");
  const int n = static_cast<int>(x0.size());
  SmoothMapSample s;
  s.F = F;
  s.x0 = x0;
  s.R = R;
  s.grid = grid;
  if (analytic_jacobian) {
    s.DF = analytic_jacobian(x0);
  } else {
    double h = 1e-6 * std::max(1.0, R);
    s.DF = MatrixXd(n, n);
    for (int i = 0; i < n; ++i) {
      VectorXd e = VectorXd::Zero(n);
      e[i] = h;
      s.DF.col(i) = (F(x0 + e) - F(x0 - e)) / (2.0 * h);
    }
  }
  Eigen::JacobiSVD<MatrixXd> svd(s.DF, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double smin = svd.singularValues().minCoeff();
  if (smin < 1e-12) throw SingularJacobian("estimate_map_constants: DF(x0) nearly singular");
  s.L = svd.singularValues().maxCoeff();
  s.M = 1.0 / smin;
  s.DFinv = s.DF.inverse();

  double h2 = 1e-4 * std::max(1.0, R);
  double k = 0.0;
  for (const auto& x : ball_grid(x0, R, grid))
    k = std::max(k, second_derivative_norm(F, x, h2));
  s.K = k;
  return s;
}

TransitionMap::TransitionMap(MetricField g_a, MetricField g_b, VectorXd p, Frame frame_a,
                             Frame frame_b)
    : ga_(std::move(g_a)),
      gb_(std::move(g_b)),
      p_(std::move(p)),
      fa_(std::move(frame_a)),
      fb_(std::move(frame_b)) {
  fa_inv_ = fa_.E.inverse();
}

MatrixXd TransitionMap::frame_change() const { return fa_inv_ * fb_.E; }

VectorXd TransitionMap::operator()(const VectorXd& x) const {
  VectorXd target = psi_map(gb_, p_, fb_, x);
  if (!ga_.domain().contains(target))
    throw OutOfNormalBall("transition_map: psi_b image outside the g_a chart");
  // invert psi_a at the target by damped Newton, seeded with the frame change
  VectorXd y = frame_change() * x;
  double scale = 1.0 + target.norm();
  auto defect_of = [&](const VectorXd& yy) -> VectorXd {
    return psi_map(ga_, p_, fa_, yy) - target;
  };
  VectorXd d;
  try {
    d = defect_of(y);
  } catch (const LeftDomain&) {
    throw OutOfNormalBall("transition_map: Newton seed leaves the chart");
  }
  for (int iter = 0; iter < 50; ++iter) {
    if (d.norm() <= 1e-12 * scale) return y;
    ExpJacobian ej = exp_map_with_jacobian(ga_, p_, fa_.E * y);
    MatrixXd jac = ej.jacobian * fa_.E;  // d psi_a / d y
    Eigen::FullPivLU<MatrixXd> lu(jac);
    if (!lu.isInvertible())
      throw NoConvergence("transition_map: singular Jacobian in Newton solve");
    VectorXd dy = lu.solve(d);
    double eta = 1.0;
    bool improved = false;
    for (int k = 0; k < 20; ++k) {
      VectorXd trial = y - eta * dy;
      try {
        VectorXd dt = defect_of(trial);
        if (dt.norm() < d.norm()) {
          y = trial;
          d = dt;
          improved = true;
          break;
        }
      } catch (const LeftDomain&) {
        // damp further
      }
      eta *= 0.5;
    }
    if (!improved) throw NoConvergence("transition_map: Newton stalled, defect " +
                                       format17(d.norm()));
  }
  if (d.norm() <= 1e-9 * scale) return y;
  throw NoConvergence("transition_map: Newton did not converge, defect " + format17(d.norm()));
}

InjectivityCertificate certify_injectivity(const SmoothMapSample& sample, const IFTBounds& bounds,
                                           int pair_samples, uint64_t seed,
                                           int lipschitz_pair_cap) {
  InjectivityCertificate cert;
  Rng rng(seed);
  const double sep_tol = 1e-9 * std::max(1.0, bounds.L);
  const double min_dist = 1e-6;

  for (int k = 0; k < pair_samples; ++k) {
    VectorXd x1 = rng.in_ball(sample.x0, bounds.R2);
    VectorXd x2 = rng.in_ball(sample.x0, bounds.R2);
    if ((x1 - x2).norm() < min_dist) continue;
    ++cert.pairs_tested;
    double img = (sample.F(x1) - sample.F(x2)).norm();
    if (img < sep_tol) {
      ++cert.collisions;
      if (cert.collisions == 1 || img < cert.worst_collision.image_distance)
        cert.worst_collision = {x1, x2, img};
    }
  }
  cert.collisions_pass = cert.collisions == 0;

  // inverse-Lipschitz leg: pull back image pairs from the R3 ball by Newton
  VectorXd y0 = sample.F(sample.x0);
  auto inverse_of = [&](const VectorXd& y) -> VectorXd {
    VectorXd x = sample.x0 + sample.DFinv * (y - y0);
    for (int iter = 0; iter < 60; ++iter) {
      VectorXd d = sample.F(x) - y;
      if (d.norm() <= 1e-12 * (1.0 + y.norm())) return x;
      x -= sample.DFinv * d;  // chord Newton with the base Jacobian
    }
    throw NoConvergence("certify_injectivity: inverse Newton stalled");
  };
  int lip_pairs = std::min(pair_samples, lipschitz_pair_cap);
  for (int k = 0; k < lip_pairs; ++k) {
    VectorXd y1 = rng.in_ball(y0, bounds.R3);
    VectorXd y2 = rng.in_ball(y0, bounds.R3);
    if ((y1 - y2).norm() < 1e-12) continue;
    ++cert.lipschitz_pairs;
    try {
      VectorXd x1 = inverse_of(y1), x2 = inverse_of(y2);
      double ratio = (x1 - x2).norm() / (2.0 * bounds.L * (y1 - y2).norm());
      cert.worst_lipschitz_ratio = std::max(cert.worst_lipschitz_ratio, ratio);
      if (ratio > 1.0) ++cert.lipschitz_failures;
    } catch (const NoConvergence&) {
      ++cert.lipschitz_newton_failures;
    }
  }
  cert.lipschitz_pass = cert.lipschitz_failures == 0 && cert.lipschitz_newton_failures == 0;
  return cert;
}

SecondDerivativeReport second_derivative_bound_check(const MetricField& g_a,
                                                     const MetricField& g_b,
                                                     const std::vector<VectorXd>& base_points,
                                                     double S, double S1, double ball_radius,
                                                     int grid) {
  if (base_points.empty()) throw ConfigError("second_derivative_bound_check: no base points");
  // Precondition: measured curvature bounds stay below the given S, S1.
  NormEstimate ea = curvature_norm_estimate(g_a, base_points);
  NormEstimate eb = curvature_norm_estimate(g_b, base_points);
  if (std::max(ea.sup_R, eb.sup_R) >= S || std::max(ea.sup_DR, eb.sup_DR) >= S1)
    throw NonPositiveInput("second_derivative_bound_check: measured curvature exceeds S, S1");

  SecondDerivativeReport rep;
  double h2 = 1e-3 * std::max(1.0, ball_radius);
  for (const auto& p : base_points) {
    TransitionMap tm(g_a, g_b, p, orthonormal_frame(g_a, p), orthonormal_frame(g_b, p));
    MapFn f = [&tm](const VectorXd& x) { return tm(x); };
    double coarse = 0.0, fine = 0.0;
    for (const auto& x : ball_grid(VectorXd::Zero(g_a.dim()), ball_radius, grid))
      coarse = std::max(coarse, second_derivative_norm(f, x, h2));
    // refinement x2: interval halving keeps the coarse nodes nested
    for (const auto& x : ball_grid(VectorXd::Zero(g_a.dim()), ball_radius, 2 * (grid - 1) + 1))
      fine = std::max(fine, second_derivative_norm(f, x, h2));
    rep.per_point_sup.push_back(coarse);
    rep.per_point_fine.push_back(fine);
  }
  for (double v : rep.per_point_sup) rep.sup_coarse = std::max(rep.sup_coarse, v);
  for (double v : rep.per_point_fine) rep.sup_fine = std::max(rep.sup_fine, v);
  rep.finite = std::isfinite(rep.sup_fine) && std::isfinite(rep.sup_coarse);
  rep.relative_change =
      std::fabs(rep.sup_fine - rep.sup_coarse) / std::max(rep.sup_coarse, 1e-300);
  rep.stable = rep.finite && rep.relative_change <= 0.10;
  return rep;
}

}  // namespace geomlab
