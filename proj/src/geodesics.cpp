#include "geomlab/geodesics.hpp"

#include <algorithm>
#include <queue>

#include "geomlab/curvature.hpp"
#include "json.hpp"

namespace geomlab {

namespace {

// Unchecked Christoffel evaluation for integrator stages, which may poke
// slightly outside the chart ball during a step.
Tensor3 christoffel_raw(const MetricField& field, const VectorXd& x) {
  const int n = field.dim();
  MatrixXd g = field.eval_raw(x);
  Eigen::LLT<MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) throw NotSPD("geodesics: metric not SPD along trajectory");
  MatrixXd ginv = llt.solve(MatrixXd::Identity(n, n));
  Tensor3 gamma(n);
  std::vector<MatrixXd> dg(n);
  for (int i = 0; i < n; ++i) {
    VectorXd e = VectorXd::Zero(n);
    e[i] = field.fd_step1();
    dg[i] = field.has_analytic_partials() && field.mode() == DerivMode::Analytic
                ? field.partial1_raw(x, i)
                : (field.eval_raw(x + e) - field.eval_raw(x - e)) / (2.0 * field.fd_step1());
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double v = 0.0;
        for (int l = 0; l < n; ++l)
          v += 0.5 * ginv(k, l) * (dg[i](l, j) + dg[j](i, l) - dg[l](i, j));
        gamma(k, i, j) = v;
        gamma(k, j, i) = v;
      }
  return gamma;
}

VectorXd geodesic_acceleration(const Tensor3& gamma, const VectorXd& v) {
  const int n = static_cast<int>(v.size());
  VectorXd a = VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) s += gamma(j, k, l) * v[k] * v[l];
    a[j] = -s;
  }
  return a;
}

struct PlainState {
  VectorXd x, v;
};

PlainState rk4_step(const MetricField& field, const PlainState& s, double h) {
  auto rhs = [&field](const PlainState& st) -> PlainState {
    Tensor3 gamma = christoffel_raw(field, st.x);
    return {st.v, geodesic_acceleration(gamma, st.v)};
  };
  PlainState k1 = rhs(s);
  PlainState k2 = rhs({s.x + 0.5 * h * k1.x, s.v + 0.5 * h * k1.v});
  PlainState k3 = rhs({s.x + 0.5 * h * k2.x, s.v + 0.5 * h * k2.v});
  PlainState k4 = rhs({s.x + h * k3.x, s.v + h * k3.v});
  return {s.x + (h / 6.0) * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
          s.v + (h / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
}

// Geodesic plus linearized flow: columns of (Dx, Dv) evolve by
// d(Dx) = Dv, d(Dv) = -A Dx - 2 B Dv with A = dGamma contracted twice with v
// and B = Gamma contracted once.
struct VarState {
  VectorXd x, v;
  MatrixXd Dx, Dv;
};

VarState var_rhs(const MetricField& field, const VarState& s) {
  const int n = static_cast<int>(s.x.size());
  Tensor3 gamma = christoffel_raw(field, s.x);
  // dGamma, analytic or nested central differences of the raw coefficients.
  Tensor4 dgamma(n);
  if (field.has_analytic_partials() && field.mode() == DerivMode::Analytic) {
    MatrixXd g = field.eval_raw(s.x);
    MatrixXd ginv = Eigen::LLT<MatrixXd>(g).solve(MatrixXd::Identity(n, n));
    std::vector<MatrixXd> dg(n);
    std::vector<std::vector<MatrixXd>> d2g(n, std::vector<MatrixXd>(n));
    for (int i = 0; i < n; ++i) dg[i] = field.partial1_raw(s.x, i);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        d2g[i][j] = field.partial2_raw(s.x, i, j);
        if (i != j) d2g[j][i] = d2g[i][j];
      }
    std::vector<MatrixXd> dginv(n);
    for (int m = 0; m < n; ++m) dginv[m] = -ginv * dg[m] * ginv;
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j) {
            double val = 0.0;
            for (int l = 0; l < n; ++l) {
              double sv = dg[i](l, j) + dg[j](i, l) - dg[l](i, j);
              double ds = d2g[m][i](l, j) + d2g[m][j](i, l) - d2g[m][l](i, j);
              val += 0.5 * (dginv[m](k, l) * sv + ginv(k, l) * ds);
            }
            dgamma(m, k, i, j) = val;
            dgamma(m, k, j, i) = val;
          }
  } else {
    double h = field.fd_step23();
    for (int m = 0; m < n; ++m) {
      VectorXd e = VectorXd::Zero(n);
      e[m] = h;
      Tensor3 gp = christoffel_raw(field, s.x + e), gm = christoffel_raw(field, s.x - e);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            dgamma(m, k, i, j) = (gp(k, i, j) - gm(k, i, j)) / (2.0 * h);
    }
  }

  MatrixXd a(n, n), b(n, n);
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m) {
      double s1 = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s1 += dgamma(m, j, k, l) * s.v[k] * s.v[l];
      a(j, m) = s1;
    }
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      double s1 = 0.0;
      for (int k = 0; k < n; ++k) s1 += gamma(j, k, l) * s.v[k];
      b(j, l) = s1;
    }

  VarState d;
  d.x = s.v;
  d.v = geodesic_acceleration(gamma, s.v);
  d.Dx = s.Dv;
  d.Dv = -a * s.Dx - 2.0 * b * s.Dv;
  return d;
}

VarState var_rk4_step(const MetricField& field, const VarState& s, double h) {
  auto add = [](const VarState& a, const VarState& b, double c) -> VarState {
    return {a.x + c * b.x, a.v + c * b.v, a.Dx + c * b.Dx, a.Dv + c * b.Dv};
  };
  VarState k1 = var_rhs(field, s);
  VarState k2 = var_rhs(field, add(s, k1, 0.5 * h));
  VarState k3 = var_rhs(field, add(s, k2, 0.5 * h));
  VarState k4 = var_rhs(field, add(s, k3, h));
  VarState out = s;
  out.x += (h / 6.0) * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
  out.v += (h / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
  out.Dx += (h / 6.0) * (k1.Dx + 2.0 * k2.Dx + 2.0 * k3.Dx + k4.Dx);
  out.Dv += (h / 6.0) * (k1.Dv + 2.0 * k2.Dv + 2.0 * k3.Dv + k4.Dv);
  return out;
}

}  // namespace

double default_step(const MetricField& field) {
  return std::min(1e-2, field.domain().radius / 100.0);
}

VectorXd Trajectory::position_at(double s) const {
  if (t.empty()) throw Error("Trajectory::position_at: empty trajectory");
  if (s <= t.front()) return x.front();
  if (s >= t.back()) return x.back();
  auto it = std::upper_bound(t.begin(), t.end(), s);
  size_t i1 = static_cast<size_t>(it - t.begin());
  size_t i0 = i1 - 1;
  double h = t[i1] - t[i0];
  double u = (s - t[i0]) / h;
  double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * x[i0] + (u3 - 2 * u2 + u) * h * v[i0] +
         (-2 * u3 + 3 * u2) * x[i1] + (u3 - u2) * h * v[i1];
}

Trajectory integrate_geodesic(const MetricField& field, const GeodesicState& start, double T,
                              double h) {
  if (h <= 0.0 || T < 0.0) throw NonPositiveInput("integrate_geodesic: T, h must be positive");
  if (h > field.domain().radius / 10.0)
    throw StepRejected("integrate_geodesic: step exceeds domain radius / 10");
  if (!field.domain().contains(start.x))
    throw OutOfDomain("integrate_geodesic: start outside chart");

  Trajectory traj;
  PlainState s{start.x, start.v};
  traj.t.push_back(0.0);
  traj.x.push_back(s.x);
  traj.v.push_back(s.v);
  int nsteps = static_cast<int>(std::ceil(T / h));
  double step = (nsteps > 0) ? T / nsteps : 0.0;
  for (int i = 0; i < nsteps; ++i) {
    PlainState next = rk4_step(field, s, step);
    if (!field.domain().contains(next.x)) {
      // bisect the step fraction to land on the chart boundary
      double lo = 0.0, hi = 1.0;
      PlainState best = s;
      for (int it = 0; it < 40; ++it) {
        double mid = 0.5 * (lo + hi);
        PlainState trial = rk4_step(field, s, step * mid);
        if (field.domain().contains(trial.x)) {
          lo = mid;
          best = trial;
        } else {
          hi = mid;
        }
      }
      traj.truncated = true;
      traj.exit_time = traj.t.back() + step * lo;
      if (lo > 0.0) {
        traj.t.push_back(traj.exit_time);
        traj.x.push_back(best.x);
        traj.v.push_back(best.v);
      }
      return traj;
    }
    s = next;
    traj.t.push_back(step * (i + 1));
    traj.x.push_back(s.x);
    traj.v.push_back(s.v);
  }
  return traj;
}

double energy_drift(const MetricField& field, const Trajectory& traj) {
  if (traj.size() == 0) return 0.0;
  double k0 = 0.5 * traj.v[0].dot(field.eval_raw(traj.x[0]) * traj.v[0]);
  if (k0 <= 0.0) return 0.0;
  double worst = 0.0;
  for (size_t i = 0; i < traj.size(); ++i) {
    double k = 0.5 * traj.v[i].dot(field.eval_raw(traj.x[i]) * traj.v[i]);
    worst = std::max(worst, std::fabs(k - k0) / k0);
  }
  return worst;
}

VectorXd exp_map(const MetricField& field, const VectorXd& p, const VectorXd& v) {
  double vg = std::sqrt(v.dot(field.eval(p) * v));
  if (vg < 1e-300) return p;
  double h = default_step(field) / std::max(1.0, vg);
  Trajectory traj = integrate_geodesic(field, GeodesicState(field, p, v), 1.0, h);
  if (traj.truncated) throw LeftDomain(traj.exit_time);
  return traj.x.back();
}

ExpJacobian exp_map_with_jacobian(const MetricField& field, const VectorXd& p,
                                  const VectorXd& v) {
  const int n = field.dim();
  double vg = std::sqrt(v.dot(field.eval(p) * v));
  if (vg < 1e-300) {
    return {p, MatrixXd::Identity(n, n)};
  }
  double h = default_step(field) / std::max(1.0, vg);
  int nsteps = static_cast<int>(std::ceil(1.0 / h));
  double step = 1.0 / nsteps;
  VarState s{p, v, MatrixXd::Zero(n, n), MatrixXd::Identity(n, n)};
  for (int i = 0; i < nsteps; ++i) {
    s = var_rk4_step(field, s, step);
    if (!field.domain().contains(s.x)) throw LeftDomain(step * (i + 1));
  }
  return {s.x, s.Dx};
}

Frame orthonormal_frame(const MetricField& field, const VectorXd& p) {
  return {orthonormal_columns(field.eval(p))};
}

VectorXd psi_map(const MetricField& field, const VectorXd& p, const Frame& frame,
                 const VectorXd& a) {
  return exp_map(field, p, frame.E * a);
}

std::vector<VectorXd> unit_directions(int dim, int count) {
  std::vector<VectorXd> dirs;
  dirs.reserve(count);
  if (dim == 2) {
    for (int k = 0; k < count; ++k) {
      double th = 2.0 * M_PI * k / count;
      VectorXd d(2);
      d << std::cos(th), std::sin(th);
      dirs.push_back(d);
    }
  } else if (dim == 3) {
    const double ga = M_PI * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      double z = 1.0 - 2.0 * (k + 0.5) / count;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double th = ga * k;
      VectorXd d(3);
      d << r * std::cos(th), r * std::sin(th), z;
      dirs.push_back(d);
    }
  } else {
    Rng rng(0x5eedull + static_cast<uint64_t>(count));
    for (int k = 0; k < count; ++k) dirs.push_back(rng.unit_vector(dim));
  }
  return dirs;
}

ConjugateRadius jacobi_conjugate_radius(const MetricField& field, const VectorXd& p,
                                        int directions, double r_max) {
  if (directions < 8) throw ConfigError("jacobi_conjugate_radius: need directions >= 8");
  if (r_max <= 0.0) throw NonPositiveInput("jacobi_conjugate_radius: r_max must be positive");
  const int n = field.dim();
  double h = default_step(field);
  Frame frame = orthonormal_frame(field, p);
  double t_skip = 10.0 * h;

  double best_crossing = std::numeric_limits<double>::infinity();
  double min_reach = std::numeric_limits<double>::infinity();

  for (const auto& d : unit_directions(n, directions)) {
    VectorXd v = frame.E * d;
    VarState s{p, v, MatrixXd::Zero(n, n), MatrixXd::Identity(n, n)};
    double t = 0.0;
    double prev_det = 0.0;
    bool have_prev = false;
    VarState prev = s;
    double reach = 0.0;
    while (t < r_max) {
      double step = std::min(h, r_max - t);
      VarState next = var_rk4_step(field, s, step);
      double tn = t + step;
      if (!field.domain().contains(next.x)) {
        reach = t;
        break;
      }
      reach = tn;
      double det = next.Dx.determinant();
      if (tn > t_skip) {
        if (have_prev && prev_det > 0.0 && det <= 0.0) {
          // bisection on the crossing inside [t, tn]
          double lo = t, hi = tn;
          VarState base = prev;
          double tbase = t;
          auto det_at = [&](double target) {
            VarState w = base;
            double span = target - tbase;
            int m = std::max(1, static_cast<int>(std::ceil(span / h)));
            double sub = span / m;
            for (int i = 0; i < m; ++i) w = var_rk4_step(field, w, sub);
            return w.Dx.determinant();
          };
          while ((hi - lo) > 1e-4 * hi) {
            double mid = 0.5 * (lo + hi);
            if (det_at(mid) > 0.0)
              lo = mid;
            else
              hi = mid;
          }
          best_crossing = std::min(best_crossing, 0.5 * (lo + hi));
          break;
        }
        prev_det = det;
        prev = next;
        have_prev = true;
      } else {
        prev_det = det;
        prev = next;
        have_prev = tn > t_skip * 0.5;  // warm-up for the sign monitor
      }
      s = next;
      t = tn;
    }
    min_reach = std::min(min_reach, reach);
  }

  ConjugateRadius out;
  out.min_reach = min_reach;
  if (std::isfinite(best_crossing)) {
    out.value = best_crossing;
    out.capped = false;
  } else {
    out.value = std::min(r_max, min_reach);
    out.capped = true;
  }
  return out;
}

LoopSearchResult shortest_geodesic_loop(const MetricField& field, const VectorXd& p,
                                        int directions, double r_max) {
  if (directions < 16) throw ConfigError("shortest_geodesic_loop: need directions >= 16");
  if (r_max <= 0.0) throw NonPositiveInput("shortest_geodesic_loop: r_max must be positive");
  const int n = field.dim();
  double h = default_step(field);
  Frame frame = orthonormal_frame(field, p);
  const ChartDomain& dom = field.domain();

  std::vector<Trajectory> trajs;
  double min_reach = std::numeric_limits<double>::infinity();
  for (const auto& d : unit_directions(n, directions)) {
    Trajectory tr = integrate_geodesic(field, GeodesicState(field, p, frame.E * d), r_max, h);
    min_reach = std::min(min_reach, tr.reach());
    trajs.push_back(std::move(tr));
  }

  const double l_min = std::max(10.0 * h, 1e-3 * r_max);
  const double defect_tol = 1e-6;
  double best_half = std::numeric_limits<double>::infinity();
  double best_defect = std::numeric_limits<double>::infinity();

  auto defect = [&](const Trajectory& a, const Trajectory& b, double la, double lb) {
    return dom.wrap_difference(a.position_at(la), b.position_at(lb)).norm();
  };

  const double coarse = std::max(8.0 * h, r_max / 60.0);
  for (size_t i = 0; i < trajs.size(); ++i) {
    for (size_t j = i + 1; j < trajs.size(); ++j) {
      double li_max = trajs[i].reach(), lj_max = trajs[j].reach();
      if (li_max <= l_min || lj_max <= l_min) continue;
      double c_la = l_min, c_lb = l_min, c_def = std::numeric_limits<double>::infinity();
      for (double la = l_min; la <= li_max; la += coarse)
        for (double lb = l_min; lb <= lj_max; lb += coarse) {
          double de = defect(trajs[i], trajs[j], la, lb);
          if (de < c_def) {
            c_def = de;
            c_la = la;
            c_lb = lb;
          }
        }
      // coordinate descent with step halving
      double stepd = coarse;
      double la = c_la, lb = c_lb, de = c_def;
      for (int it = 0; it < 40; ++it) {
        bool improved = false;
        for (int axis = 0; axis < 2; ++axis) {
          for (double sign : {-1.0, 1.0}) {
            double ta = la + (axis == 0 ? sign * stepd : 0.0);
            double tb = lb + (axis == 1 ? sign * stepd : 0.0);
            ta = std::clamp(ta, l_min, li_max);
            tb = std::clamp(tb, l_min, lj_max);
            double dd = defect(trajs[i], trajs[j], ta, tb);
            if (dd < de) {
              de = dd;
              la = ta;
              lb = tb;
              improved = true;
            }
          }
        }
        if (!improved) stepd *= 0.5;
      }
      best_defect = std::min(best_defect, de);
      if (de <= defect_tol) best_half = std::min(best_half, 0.5 * (la + lb));
    }
  }

  LoopSearchResult out;
  out.best_defect = best_defect;
  out.min_reach = min_reach;
  if (std::isfinite(best_half)) {
    out.half_length = best_half;
    out.capped = false;
  } else {
    out.half_length = std::min(r_max, min_reach);
    out.capped = true;
  }
  return out;
}

InjectivityEstimate injectivity_radius_estimate(const MetricField& field, const VectorXd& p,
                                                double r_max, int conj_directions,
                                                int loop_directions) {
  ConjugateRadius cr = jacobi_conjugate_radius(field, p, conj_directions, r_max);
  LoopSearchResult lr = shortest_geodesic_loop(field, p, loop_directions, r_max);
  InjectivityEstimate e;
  e.at = p;
  e.conjugate_radius = cr.value;
  e.half_loop_length = lr.half_length;
  e.lower_bound = std::min(cr.value, lr.half_length);
  e.r_max = r_max;
  e.conjugate_capped = cr.capped;
  e.loop_capped = lr.capped;
  return e;
}

std::string injectivity_json(const InjectivityEstimate& e) {
  nlohmann::ordered_json j;
  j["at"] = std::vector<double>(e.at.data(), e.at.data() + e.at.size());
  j["conjugate_radius"] = e.conjugate_radius;
  j["half_loop_length"] = e.half_loop_length;
  j["lower_bound"] = e.lower_bound;
  j["r_max"] = e.r_max;
  j["conjugate_capped"] = e.conjugate_capped;
  j["loop_capped"] = e.loop_capped;
  return j.dump();
}

std::string trajectory_csv_header(int dim) {
  std::string s = "t";
  for (int i = 0; i < dim; ++i) s += ",x" + std::to_string(i);
  for (int i = 0; i < dim; ++i) s += ",v" + std::to_string(i);
  s += ",energy";
  return s;
}

std::string trajectory_csv_rows(const MetricField& field, const Trajectory& traj) {
  std::string out;
  for (size_t i = 0; i < traj.size(); ++i) {
    out += format17(traj.t[i]);
    for (int k = 0; k < field.dim(); ++k) out += "," + format17(traj.x[i][k]);
    for (int k = 0; k < field.dim(); ++k) out += "," + format17(traj.v[i][k]);
    double e = 0.5 * traj.v[i].dot(field.eval_raw(traj.x[i]) * traj.v[i]);
    out += "," + format17(e) + "\n";
  }
  return out;
}

namespace {

DistanceResult dijkstra_distance(const MetricField& field, const VectorXd& p, const VectorXd& q) {
  const int n = field.dim();
  if (n != 2) throw NoConvergence("geodesic_distance: grid fallback implemented for dim 2");
  const ChartDomain& dom = field.domain();
  const int N = 41;
  double R = dom.radius;
  auto node_pos = [&](int i, int j) {
    VectorXd x(2);
    x << dom.center[0] - R + 2.0 * R * i / (N - 1), dom.center[1] - R + 2.0 * R * j / (N - 1);
    return x;
  };
  auto inside = [&](int i, int j) { return dom.contains(node_pos(i, j)); };
  auto idx = [&](int i, int j) { return i * N + j; };

  auto seg_len = [&](const VectorXd& a, const VectorXd& b) {
    VectorXd d = b - a;
    double la = std::sqrt(d.dot(field.eval_raw(a) * d));
    double lb = std::sqrt(d.dot(field.eval_raw(b) * d));
    return 0.5 * (la + lb);
  };

  // snap endpoints to nearest inside nodes
  auto snap = [&](const VectorXd& x) {
    int bi = -1, bj = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        if (!inside(i, j)) continue;
        double d = (node_pos(i, j) - x).norm();
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) throw NoConvergence("geodesic_distance: no grid node inside domain");
    return std::make_pair(bi, bj);
  };
  auto [pi, pj] = snap(p);
  auto [qi, qj] = snap(q);

  const int offs[16][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1}, {1, 1},  {1, -1},
                           {-1, 1}, {-1, -1}, {1, 2},  {1, -2}, {-1, 2}, {-1, -2},
                           {2, 1},  {2, -1}, {-2, 1}, {-2, -1}};
  std::vector<double> dist(static_cast<size_t>(N) * N, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[idx(pi, pj)] = 0.0;
  pq.push({0.0, idx(pi, pj)});
  while (!pq.empty()) {
    auto [d0, u] = pq.top();
    pq.pop();
    if (d0 > dist[u]) continue;
    int ui = u / N, uj = u % N;
    for (auto& o : offs) {
      int vi = ui + o[0], vj = uj + o[1];
      if (vi < 0 || vi >= N || vj < 0 || vj >= N || !inside(vi, vj)) continue;
      double w = seg_len(node_pos(ui, uj), node_pos(vi, vj));
      double nd = d0 + w;
      if (nd < dist[idx(vi, vj)]) {
        dist[idx(vi, vj)] = nd;
        pq.push({nd, idx(vi, vj)});
      }
    }
  }
  double core = dist[idx(qi, qj)];
  if (!std::isfinite(core)) throw NoConvergence("geodesic_distance: grid components disconnected");
  DistanceResult r;
  r.distance = core + seg_len(p, node_pos(pi, pj)) + seg_len(q, node_pos(qi, qj));
  r.method = "dijkstra";
  r.defect = 0.0;
  return r;
}

}  // namespace

DistanceResult geodesic_distance(const MetricField& field, const VectorXd& p, const VectorXd& q,
                                 DistanceMethod method) {
  const ChartDomain& dom = field.domain();
  if (!dom.contains(p) || !dom.contains(q))
    throw OutOfDomain("geodesic_distance: endpoint outside chart");
  if (method == DistanceMethod::DijkstraOnly) return dijkstra_distance(field, p, q);
  const bool allow_fallback = method == DistanceMethod::Auto;
  VectorXd v = dom.wrap_difference(q, p);
  double target_scale = 1.0 + v.norm();
  double best_defect = std::numeric_limits<double>::infinity();

  auto defect_of = [&](const VectorXd& vel) -> double {
    try {
      VectorXd end = exp_map(field, p, vel);
      return dom.wrap_difference(end, q).norm();
    } catch (const LeftDomain&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  double cur = defect_of(v);
  bool stalled = !std::isfinite(cur);
  for (int iter = 0; iter < 50 && !stalled; ++iter) {
    best_defect = std::min(best_defect, cur);
    if (cur <= 1e-11 * target_scale) {
      DistanceResult r;
      r.distance = std::sqrt(v.dot(field.eval(p) * v));
      r.method = "shooting";
      r.defect = cur;
      return r;
    }
    MatrixXd jac;
    VectorXd defect_vec;
    try {
      ExpJacobian ej = exp_map_with_jacobian(field, p, v);
      defect_vec = dom.wrap_difference(ej.endpoint, q);
      jac = ej.jacobian;
    } catch (const LeftDomain&) {
      stalled = true;
      break;
    }
    Eigen::FullPivLU<MatrixXd> lu(jac);
    if (!lu.isInvertible()) {
      stalled = true;
      break;
    }
    VectorXd dv = lu.solve(defect_vec);
    double eta = 1.0;
    bool improved = false;
    for (int k = 0; k < 25; ++k) {
      VectorXd trial = v - eta * dv;
      double d = defect_of(trial);
      if (d < cur) {
        v = trial;
        cur = d;
        improved = true;
        break;
      }
      eta *= 0.5;
    }
    if (!improved) {
      stalled = true;
      break;
    }
  }
  if (!stalled && cur <= 1e-9 * target_scale) {
    DistanceResult r;
    r.distance = std::sqrt(v.dot(field.eval(p) * v));
    r.method = "shooting";
    r.defect = cur;
    return r;
  }
  if (allow_fallback) return dijkstra_distance(field, p, q);
  throw NoConvergence("geodesic_distance: shooting stalled, best defect " +
                      format17(best_defect));
}

}  // namespace geomlab
