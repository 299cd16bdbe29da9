#pragma once

#include "geomlab/metric_field.hpp"

namespace geomlab {

/// Position-velocity pair on a chart; kinetic energy (1/2) g_ij v^i v^j is
/// fixed at construction.
struct GeodesicState {
  VectorXd x;
  VectorXd v;
  double energy = 0.0;

  GeodesicState() = default;
  GeodesicState(const MetricField& field, VectorXd x0, VectorXd v0)
      : x(std::move(x0)), v(std::move(v0)) {
    energy = 0.5 * v.dot(field.eval(x) * v);
  }
};

struct Trajectory {
  std::vector<double> t;
  std::vector<VectorXd> x;
  std::vector<VectorXd> v;
  bool truncated = false;
  double exit_time = 0.0;

  size_t size() const { return t.size(); }
  double reach() const { return t.empty() ? 0.0 : t.back(); }
  /// Cubic Hermite interpolation of the position (x' = v).
  VectorXd position_at(double s) const;
};

double default_step(const MetricField& field);

/// Classical fixed-step 4th-order integration of the geodesic flow
/// xdot = v, vdot^j = -Gamma^j_kl v^k v^l. Truncates (with flag and exit time)
/// when the trajectory leaves the chart ball.
Trajectory integrate_geodesic(const MetricField& field, const GeodesicState& start, double T,
                              double h);

/// Relative kinetic-energy drift max_t |K(t)-K(0)|/K(0) along a trajectory.
double energy_drift(const MetricField& field, const Trajectory& traj);

/// Endpoint of the unit-time geodesic from (p, v). Throws LeftDomain if the
/// geodesic exits the chart before t = 1.
VectorXd exp_map(const MetricField& field, const VectorXd& p, const VectorXd& v);

struct ExpJacobian {
  VectorXd endpoint;
  MatrixXd jacobian;  // d exp_p / d v
};
/// Endpoint and derivative with respect to the initial velocity, from the
/// variational (linearized flow) system integrated jointly.
ExpJacobian exp_map_with_jacobian(const MetricField& field, const VectorXd& p,
                                  const VectorXd& v);

/// Orthonormal frame of (T_p, g_p): columns E satisfy E^T g(p) E = Id.
struct Frame {
  MatrixXd E;
};
Frame orthonormal_frame(const MetricField& field, const VectorXd& p);

/// psi_p(a) = exp_p(E a); the pullback metric at a = 0 is the identity.
VectorXd psi_map(const MetricField& field, const VectorXd& p, const Frame& frame,
                 const VectorXd& a);

/// Unit direction set: uniform angles in 2D, Fibonacci sphere in 3D, seeded
/// uniform directions above.
std::vector<VectorXd> unit_directions(int dim, int count);

struct ConjugateRadius {
  double value = 0.0;
  bool capped = false;
  double min_reach = 0.0;  // smallest explored radius over directions
};

/// Smallest radius at which the Jacobi determinant along some sampled
/// unit-speed geodesic changes sign, bisection-refined to 1e-4 relative;
/// r_max (or the explored reach) with a cap flag when no sign change occurs.
ConjugateRadius jacobi_conjugate_radius(const MetricField& field, const VectorXd& p,
                                        int directions, double r_max);

struct LoopSearchResult {
  double half_length = 0.0;
  bool capped = false;
  double best_defect = std::numeric_limits<double>::infinity();
  double min_reach = 0.0;
};

/// Search over ordered pairs of sampled unit directions for a pair of
/// geodesics from p meeting again away from p (coordinate meeting defect
/// below 1e-6 after coordinate-descent refinement). Returns half the total
/// length of the best meeting, else the cap.
LoopSearchResult shortest_geodesic_loop(const MetricField& field, const VectorXd& p,
                                        int directions, double r_max);

struct InjectivityEstimate {
  VectorXd at;
  double conjugate_radius = 0.0;
  double half_loop_length = 0.0;
  double lower_bound = 0.0;
  double r_max = 0.0;
  bool conjugate_capped = false;
  bool loop_capped = false;
};

InjectivityEstimate injectivity_radius_estimate(const MetricField& field, const VectorXd& p,
                                                double r_max, int conj_directions = 16,
                                                int loop_directions = 64);

std::string injectivity_json(const InjectivityEstimate& e);
std::string trajectory_csv_header(int dim);
std::string trajectory_csv_rows(const MetricField& field, const Trajectory& traj);

struct DistanceResult {
  double distance = 0.0;
  std::string method;  // "shooting" or "dijkstra"
  double defect = 0.0;
};

enum class DistanceMethod { Auto, ShootingOnly, DijkstraOnly };

/// Numerical geodesic distance: damped-Newton shooting for exp_p(v) = q,
/// falling back to Dijkstra on a chart grid when shooting stalls. The method
/// can be forced for diagnostics.
DistanceResult geodesic_distance(const MetricField& field, const VectorXd& p, const VectorXd& q,
                                 DistanceMethod method = DistanceMethod::Auto);

}  // namespace geomlab
