#pragma once

#include <functional>

#include "geomlab/geodesics.hpp"

namespace geomlab {

/// Constants of the quantitative inverse function theorem. The formulas are
/// implemented exactly as stated, including R2's min with 1/R1; alt_R2 swaps
/// that branch to min{R1, ...} and is reported for comparison only.
struct IFTBounds {
  double L = 0.0, M = 0.0, K = 0.0, R = 0.0;
  double R1 = 0.0, R2 = 0.0, R3 = 0.0;
  double alt_R2 = 0.0;
};

IFTBounds ift_bounds(double L, double M, double K, double R);

using MapFn = std::function<VectorXd(const VectorXd&)>;

/// C^2 map sample on a ball: base point, Jacobian data and the grid-sup of the
/// second-derivative norm.
struct SmoothMapSample {
  MapFn F;
  VectorXd x0;
  double R = 0.0;
  MatrixXd DF;
  MatrixXd DFinv;
  double L = 0.0;  // ||DF(x0)||
  double M = 0.0;  // ||DF(x0)^{-1}||
  double K = 0.0;  // grid-sup ||D^2F||
  int grid = 0;
};

/// Measures L, M by extreme singular values of DF(x0) (central differences or
/// the provided analytic Jacobian) and K as the grid-sup over grid^n ball
/// points of the second-difference tensor norm, maximized over 32 sampled
/// unit direction pairs.
SmoothMapSample estimate_map_constants(
    const MapFn& F, const VectorXd& x0, double R, int grid,
    const std::function<MatrixXd(const VectorXd&)>& analytic_jacobian = nullptr);

/// Norm of the symmetric bilinear D^2F(x): max over sampled unit pairs (u,v)
/// of |D2F(x)[u,v]|.
double second_derivative_norm(const MapFn& F, const VectorXd& x, double h, int dir_samples = 32);

/// Transition map F(x) = (psi_p^{g_a})^{-1}(psi_p^{g_b}(x)) between the
/// geodesic normal coordinate systems of two metrics at the same base point.
/// The inverse leg is realized by damped-Newton shooting on g_a.
class TransitionMap {
 public:
  TransitionMap(MetricField g_a, MetricField g_b, VectorXd p, Frame frame_a, Frame frame_b);

  VectorXd operator()(const VectorXd& x) const;
  const VectorXd& base() const { return p_; }
  /// Frame-change matrix E_a^{-1} E_b = DF(0).
  MatrixXd frame_change() const;

 private:
  MetricField ga_, gb_;
  VectorXd p_;
  Frame fa_, fb_;
  MatrixXd fa_inv_;
};

struct CollisionWitness {
  VectorXd x1, x2;
  double image_distance = 0.0;
};

struct InjectivityCertificate {
  int pairs_tested = 0;
  int collisions = 0;
  CollisionWitness worst_collision;
  // inverse-Lipschitz check on the R3 ball, with the constant 2L as printed
  int lipschitz_pairs = 0;
  int lipschitz_failures = 0;
  int lipschitz_newton_failures = 0;
  double worst_lipschitz_ratio = 0.0;  // max |x1-x2| / (2L |y1-y2|)
  bool collisions_pass = true;
  bool lipschitz_pass = true;
};

/// Samples random pairs in the R2 ball asserting no collisions, and checks the
/// inverse-Lipschitz inequality |F^{-1}(y1)-F^{-1}(y2)| <= 2L |y1-y2| on image
/// pairs in the R3 ball (inverse evaluations are Newton solves, so their count
/// is capped separately). Failures are report content, not exceptions.
InjectivityCertificate certify_injectivity(const SmoothMapSample& sample, const IFTBounds& bounds,
                                           int pair_samples, uint64_t seed,
                                           int lipschitz_pair_cap = 2000);

struct SecondDerivativeReport {
  std::vector<double> per_point_sup;   // coarse grid
  std::vector<double> per_point_fine;  // 2x refined grid
  double sup_coarse = 0.0;
  double sup_fine = 0.0;
  double relative_change = 0.0;
  bool stable = false;  // within +-10% under refinement
  bool finite = false;
};

/// Grid-sup of ||D^2 F|| for the transition maps of (g_a, g_b) at the given
/// base points, with a 2x grid-refinement stability study. Requires measured
/// curvature bounds below S, S1 on the sampled region.
SecondDerivativeReport second_derivative_bound_check(const MetricField& g_a,
                                                     const MetricField& g_b,
                                                     const std::vector<VectorXd>& base_points,
                                                     double S, double S1, double ball_radius,
                                                     int grid = 5);

}  // namespace geomlab
