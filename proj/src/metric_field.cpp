#include "geomlab/metric_field.hpp"

#include <Eigen/Eigenvalues>

#include "geomlab/polynomial.hpp"

namespace geomlab {

namespace {

// Scalar field with closed-form partials up to order three, the building
// block of the conformal gallery metrics.
struct ScalarField {
  std::function<double(const VectorXd&)> value;
  std::function<double(const VectorXd&, int)> d1;
  std::function<double(const VectorXd&, int, int)> d2;
  std::function<double(const VectorXd&, int, int, int)> d3;
};

MetricField conformal_field(int dim, std::string label, ChartDomain domain, ScalarField f) {
  auto id = MatrixXd::Identity(dim, dim);
  return MetricField::analytic(
      dim, std::move(label), std::move(domain),
      [f, id](const VectorXd& x) -> MatrixXd { return f.value(x) * id; },
      [f, id](const VectorXd& x, int i) -> MatrixXd { return f.d1(x, i) * id; },
      [f, id](const VectorXd& x, int i, int j) -> MatrixXd { return f.d2(x, i, j) * id; },
      [f, id](const VectorXd& x, int i, int j, int k) -> MatrixXd {
        return f.d3(x, i, j, k) * id;
      });
}

ScalarField constant_scalar(double c) {
  ScalarField f;
  f.value = [c](const VectorXd&) { return c; };
  f.d1 = [](const VectorXd&, int) { return 0.0; };
  f.d2 = [](const VectorXd&, int, int) { return 0.0; };
  f.d3 = [](const VectorXd&, int, int, int) { return 0.0; };
  return f;
}

// phi(x) = a (c0 + sigma |x|^2)^{-2}; sphere has sigma=+1, disk sigma=-1.
ScalarField radial_conformal_scalar(double a, double c0, double sigma) {
  auto u = [c0, sigma](const VectorXd& x) { return c0 + sigma * x.squaredNorm(); };
  ScalarField f;
  f.value = [a, u](const VectorXd& x) { return a / std::pow(u(x), 2); };
  f.d1 = [a, sigma, u](const VectorXd& x, int i) {
    return -4.0 * a * sigma * x[i] / std::pow(u(x), 3);
  };
  f.d2 = [a, sigma, u](const VectorXd& x, int i, int j) {
    double ui = u(x);
    double d = (i == j) ? 1.0 : 0.0;
    return -4.0 * a * sigma * d / std::pow(ui, 3) + 24.0 * a * x[i] * x[j] / std::pow(ui, 4);
  };
  f.d3 = [a, sigma, u](const VectorXd& x, int i, int j, int k) {
    double ui = u(x);
    double dij = (i == j) ? 1.0 : 0.0;
    double dik = (i == k) ? 1.0 : 0.0;
    double djk = (j == k) ? 1.0 : 0.0;
    double sym = dij * x[k] + dik * x[j] + djk * x[i];
    return 24.0 * a * sym / std::pow(ui, 4) -
           192.0 * a * sigma * x[i] * x[j] * x[k] / std::pow(ui, 5);
  };
  return f;
}

ScalarField half_plane_scalar(int dim) {
  int n = dim - 1;  // last coordinate plays the role of the height y
  ScalarField f;
  f.value = [n](const VectorXd& x) { return 1.0 / (x[n] * x[n]); };
  f.d1 = [n](const VectorXd& x, int i) {
    return (i == n) ? -2.0 / std::pow(x[n], 3) : 0.0;
  };
  f.d2 = [n](const VectorXd& x, int i, int j) {
    return (i == n && j == n) ? 6.0 / std::pow(x[n], 4) : 0.0;
  };
  f.d3 = [n](const VectorXd& x, int i, int j, int k) {
    return (i == n && j == n && k == n) ? -24.0 / std::pow(x[n], 5) : 0.0;
  };
  return f;
}

// Cigar profile rho(u): cylinder of radius one for u >= 0.1, unit-sphere
// meridian cos(u) for u <= -0.1, quintic smoothstep blend in between (C^2 at
// the seam). Returns rho and its first three derivatives.
void cigar_profile(double u, double& r0, double& r1, double& r2, double& r3) {
  if (u >= 0.1) {
    r0 = 1.0;
    r1 = r2 = r3 = 0.0;
    return;
  }
  double c = std::cos(u), s = std::sin(u);
  if (u <= -0.1) {
    r0 = c;
    r1 = -s;
    r2 = -c;
    r3 = s;
    return;
  }
  double t = (u + 0.1) / 0.2;
  double b = ((6 * t - 15) * t + 10) * t * t * t;
  double bt = ((30 * t - 60) * t + 30) * t * t;
  double btt = ((120 * t - 180) * t + 60) * t;
  double bttt = (360 * t - 360) * t + 60;
  double Bu = 5.0 * bt, Buu = 25.0 * btt, Buuu = 125.0 * bttt;
  double w = 1.0 - c;
  r0 = c + b * w;
  r1 = -s + Bu * w + b * s;
  r2 = -c + Buu * w + 2.0 * Bu * s + b * c;
  r3 = s + Buuu * w + 3.0 * Buu * s + 3.0 * Bu * c - b * s;
}

MetricField cigar_field(ChartDomain domain) {
  // Surface of revolution in (arclength u, angle theta): g = diag(1, rho(u)^2).
  auto q = [](const VectorXd& x, int order) {
    double r0, r1, r2, r3;
    cigar_profile(x[0], r0, r1, r2, r3);
    switch (order) {
      case 0: return r0 * r0;
      case 1: return 2.0 * r0 * r1;
      case 2: return 2.0 * (r1 * r1 + r0 * r2);
      default: return 2.0 * (3.0 * r1 * r2 + r0 * r3);
    }
  };
  auto entry = [q](const VectorXd& x, int nu) -> MatrixXd {
    MatrixXd g = MatrixXd::Zero(2, 2);
    if (nu == 0) g(0, 0) = 1.0;
    g(1, 1) = q(x, nu);
    return g;
  };
  return MetricField::analytic(
      2, "cigar", std::move(domain),
      [entry](const VectorXd& x) { return entry(x, 0); },
      [entry](const VectorXd& x, int i) -> MatrixXd {
        return i == 0 ? entry(x, 1) : MatrixXd::Zero(2, 2);
      },
      [entry](const VectorXd& x, int i, int j) -> MatrixXd {
        return (i == 0 && j == 0) ? entry(x, 2) : MatrixXd::Zero(2, 2);
      },
      [entry](const VectorXd& x, int i, int j, int k) -> MatrixXd {
        return (i == 0 && j == 0 && k == 0) ? entry(x, 3) : MatrixXd::Zero(2, 2);
      });
}

void enumerate_exponents(int nvars, int max_deg, int var, Eigen::VectorXi& cur,
                         std::vector<Eigen::VectorXi>& out) {
  if (var == nvars) {
    out.push_back(cur);
    return;
  }
  int used = cur.head(var).sum();
  for (int d = 0; d + used <= max_deg; ++d) {
    cur[var] = d;
    enumerate_exponents(nvars, max_deg, var + 1, cur, out);
  }
  cur[var] = 0;
}

std::vector<Eigen::VectorXi> all_exponents(int nvars, int max_deg) {
  std::vector<Eigen::VectorXi> out;
  Eigen::VectorXi cur = Eigen::VectorXi::Zero(nvars);
  enumerate_exponents(nvars, max_deg, 0, cur, out);
  return out;
}

MetricField polyrand_field(int dim, uint64_t seed, double amplitude, ChartDomain domain) {
  Rng rng(seed);
  auto exps = all_exponents(dim, 3);
  double scale = amplitude / static_cast<double>(exps.size());
  std::vector<std::vector<Polynomial>> entries(dim, std::vector<Polynomial>(dim, Polynomial(dim)));
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      Polynomial p(dim);
      for (const auto& e : exps) p.add_term(scale * rng.uniform(-1.0, 1.0), e);
      if (i == j) p.add_constant(1.0);
      entries[i][j] = p;
      entries[j][i] = p;
    }
  }
  std::string label = "polyrand:" + std::to_string(seed) + ":" + format17(amplitude);
  return polynomial_field(std::move(entries), label, std::move(domain));
}

struct PolyFieldData {
  int n;
  std::vector<std::vector<Polynomial>> p;                     // g_ij
  std::vector<std::vector<std::vector<Polynomial>>> p1;       // [i] -> d_i g
  std::vector<std::vector<std::vector<std::vector<Polynomial>>>> p2;
  std::vector<std::vector<std::vector<std::vector<std::vector<Polynomial>>>>> p3;

  MatrixXd eval(const std::vector<std::vector<Polynomial>>& m, const VectorXd& x) const {
    MatrixXd g(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) g(a, b) = m[a][b].eval(x);
    return g;
  }
};

}  // namespace

MetricField MetricField::analytic(int dim, std::string label, ChartDomain domain,
                                  CoeffFn coeff, D1Fn d1, D2Fn d2, D3Fn d3) {
  if (dim < 2) throw DimensionMismatch("MetricField: chart dimension must be >= 2");
  if (domain.dim() != dim) throw DimensionMismatch("MetricField: domain dimension mismatch");
  MetricField f;
  f.dim_ = dim;
  f.label_ = std::move(label);
  f.domain_ = std::move(domain);
  f.mode_ = DerivMode::Analytic;
  f.coeff_ = std::move(coeff);
  f.d1_ = std::move(d1);
  f.d2_ = std::move(d2);
  f.d3_ = std::move(d3);
  f.h1_ = 1e-4 * f.domain_.radius;
  f.h23_ = 1e-3 * f.domain_.radius;
  return f;
}

MetricField MetricField::finite_difference(int dim, std::string label, ChartDomain domain,
                                           CoeffFn coeff) {
  if (dim < 2) throw DimensionMismatch("MetricField: chart dimension must be >= 2");
  if (domain.dim() != dim) throw DimensionMismatch("MetricField: domain dimension mismatch");
  MetricField f;
  f.dim_ = dim;
  f.label_ = std::move(label);
  f.domain_ = std::move(domain);
  f.mode_ = DerivMode::FiniteDifference;
  f.coeff_ = std::move(coeff);
  f.h1_ = 1e-4 * f.domain_.radius;
  f.h23_ = 1e-3 * f.domain_.radius;
  return f;
}

void MetricField::set_fd_steps(double h1, double h23) {
  if (h1 <= 0.0 || h23 <= 0.0) throw NonPositiveInput("set_fd_steps: steps must be positive");
  h1_ = h1;
  h23_ = h23;
}

MetricField MetricField::with_mode(DerivMode mode) const {
  if (mode == DerivMode::Analytic && !has_analytic_partials())
    throw ConfigError("with_mode: field has no closed-form partials");
  MetricField f = *this;
  f.mode_ = mode;
  return f;
}

MatrixXd MetricField::eval(const VectorXd& x) const {
  if (x.size() != dim_) throw DimensionMismatch("eval: point dimension mismatch");
  if (!domain_.contains(x)) throw OutOfDomain("eval: point outside chart ball");
  MatrixXd g = coeff_(x);
  double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if (sym_defect(g) > 1e-12 * scale) throw NotSPD("eval: coefficient matrix not symmetric");
  Eigen::LLT<MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) throw NotSPD("eval: coefficient matrix not positive definite");
  return g;
}

void MetricField::require_margin(const VectorXd& x, int order) const {
  if (!domain_.contains(x)) throw OutOfDomain("partials: point outside chart ball");
  if (mode_ == DerivMode::Analytic) return;
  double h = (order == 1) ? h1_ : h23_;
  double margin = order * h;
  if (!domain_.contains(x, margin))
    throw StepTooLarge("partials: stencil of width " + std::to_string(margin) +
                       " exceeds domain margin");
}

MatrixXd MetricField::partial1(const VectorXd& x, int i) const {
  require_margin(x, 1);
  if (mode_ == DerivMode::Analytic) return d1_(x, i);
  VectorXd e = VectorXd::Zero(dim_);
  e[i] = h1_;
  return (coeff_(x + e) - coeff_(x - e)) / (2.0 * h1_);
}

MatrixXd MetricField::partial2(const VectorXd& x, int i, int j) const {
  require_margin(x, 2);
  if (mode_ == DerivMode::Analytic) return d2_(x, i, j);
  double h = h23_;
  VectorXd ei = VectorXd::Zero(dim_), ej = VectorXd::Zero(dim_);
  ei[i] = h;
  ej[j] = h;
  return (coeff_(x + ei + ej) - coeff_(x + ei - ej) - coeff_(x - ei + ej) +
          coeff_(x - ei - ej)) /
         (4.0 * h * h);
}

MatrixXd MetricField::partial3(const VectorXd& x, int i, int j, int k) const {
  require_margin(x, 3);
  if (mode_ == DerivMode::Analytic) return d3_(x, i, j, k);
  double h = h23_;
  VectorXd ek = VectorXd::Zero(dim_);
  ek[k] = h;
  // Outer central difference of the (i,j) second difference.
  auto second = [&](const VectorXd& y) -> MatrixXd {
    VectorXd ei = VectorXd::Zero(dim_), ej = VectorXd::Zero(dim_);
    ei[i] = h;
    ej[j] = h;
    return (coeff_(y + ei + ej) - coeff_(y + ei - ej) - coeff_(y - ei + ej) +
            coeff_(y - ei - ej)) /
           (4.0 * h * h);
  };
  return (second(x + ek) - second(x - ek)) / (2.0 * h);
}

MatrixXd MetricField::partial1_raw(const VectorXd& x, int i) const {
  if (mode_ == DerivMode::Analytic) return d1_(x, i);
  VectorXd e = VectorXd::Zero(dim_);
  e[i] = h1_;
  return (coeff_(x + e) - coeff_(x - e)) / (2.0 * h1_);
}

MatrixXd MetricField::partial2_raw(const VectorXd& x, int i, int j) const {
  if (mode_ == DerivMode::Analytic) return d2_(x, i, j);
  double h = h23_;
  VectorXd ei = VectorXd::Zero(dim_), ej = VectorXd::Zero(dim_);
  ei[i] = h;
  ej[j] = h;
  return (coeff_(x + ei + ej) - coeff_(x + ei - ej) - coeff_(x - ei + ej) +
          coeff_(x - ei - ej)) /
         (4.0 * h * h);
}

MatrixXd MetricField::partial3_raw(const VectorXd& x, int i, int j, int k) const {
  if (mode_ == DerivMode::Analytic) return d3_(x, i, j, k);
  double h = h23_;
  VectorXd ek = VectorXd::Zero(dim_);
  ek[k] = h;
  return (partial2_raw(x + ek, i, j) - partial2_raw(x - ek, i, j)) / (2.0 * h);
}

MetricField convex_sum(const MetricField& g0, const MetricField& g1, double s) {
  if (g0.dim() != g1.dim()) throw DimensionMismatch("convex_sum: dimension mismatch");
  if (!g0.domain().same_as(g1.domain()))
    throw DimensionMismatch("convex_sum: fields live on different charts");
  std::string label = "convex(" + g0.label() + "," + g1.label() + ";s=" + format17(s) + ")";
  if (g0.has_analytic_partials() && g1.has_analytic_partials() &&
      g0.mode() == DerivMode::Analytic && g1.mode() == DerivMode::Analytic) {
    // raw accessors here: the combined field applies its own domain checks
    return MetricField::analytic(
        g0.dim(), label, g0.domain(),
        [g0, g1, s](const VectorXd& x) -> MatrixXd {
          return (1.0 - s) * g0.eval_raw(x) + s * g1.eval_raw(x);
        },
        [g0, g1, s](const VectorXd& x, int i) -> MatrixXd {
          return (1.0 - s) * g0.partial1_raw(x, i) + s * g1.partial1_raw(x, i);
        },
        [g0, g1, s](const VectorXd& x, int i, int j) -> MatrixXd {
          return (1.0 - s) * g0.partial2_raw(x, i, j) + s * g1.partial2_raw(x, i, j);
        },
        [g0, g1, s](const VectorXd& x, int i, int j, int k) -> MatrixXd {
          return (1.0 - s) * g0.partial3_raw(x, i, j, k) + s * g1.partial3_raw(x, i, j, k);
        });
  }
  MetricField f = MetricField::finite_difference(
      g0.dim(), label, g0.domain(), [g0, g1, s](const VectorXd& x) -> MatrixXd {
        return (1.0 - s) * g0.eval_raw(x) + s * g1.eval_raw(x);
      });
  f.set_fd_steps(std::max(g0.fd_step1(), g1.fd_step1()),
                 std::max(g0.fd_step23(), g1.fd_step23()));
  return f;
}

MetricField polynomial_field(std::vector<std::vector<Polynomial>> entries, std::string label,
                             ChartDomain domain) {
  auto data = std::make_shared<PolyFieldData>();
  data->n = static_cast<int>(entries.size());
  int n = data->n;
  data->p = std::move(entries);
  data->p1.assign(n, data->p);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) data->p1[i][a][b] = data->p[a][b].derivative(i);
  data->p2.assign(n, data->p1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) data->p2[i][j][a][b] = data->p1[i][a][b].derivative(j);
  data->p3.assign(n, data->p2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            data->p3[i][j][k][a][b] = data->p2[i][j][a][b].derivative(k);

  return MetricField::analytic(
      n, std::move(label), std::move(domain),
      [data](const VectorXd& x) { return data->eval(data->p, x); },
      [data](const VectorXd& x, int i) { return data->eval(data->p1[i], x); },
      [data](const VectorXd& x, int i, int j) { return data->eval(data->p2[i][j], x); },
      [data](const VectorXd& x, int i, int j, int k) {
        return data->eval(data->p3[i][j][k], x);
      });
}

namespace {

void check_curvature_symmetries(const Tensor4& R) {
  int n = R.dim();
  double scale = 1.0 + R.max_abs();
  double tol = 1e-10 * scale;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          if (std::fabs(R(a, b, c, d) + R(b, a, c, d)) > tol ||
              std::fabs(R(a, b, c, d) + R(a, b, d, c)) > tol ||
              std::fabs(R(a, b, c, d) - R(c, d, a, b)) > tol)
            throw BadSymmetry("taylor_normal_metric: pair/antisymmetry violated");
          double bianchi = R(a, b, c, d) + R(a, c, d, b) + R(a, d, b, c);
          if (std::fabs(bianchi) > tol)
            throw BadSymmetry("taylor_normal_metric: first Bianchi identity violated");
        }
}

}  // namespace

MetricField taylor_normal_metric(const Tensor4& R, const Tensor5& DR, const Tensor6& D2R,
                                 double radius) {
  if (radius <= 0.0) throw NonPositiveInput("taylor_normal_metric: radius must be positive");
  int n = R.dim();
  if (n < 2 || DR.dim() != n || D2R.dim() != n)
    throw DimensionMismatch("taylor_normal_metric: tensor dimensions disagree");
  check_curvature_symmetries(R);

  auto mono = [n](std::initializer_list<int> vars) {
    Eigen::VectorXi e = Eigen::VectorXi::Zero(n);
    for (int v : vars) e[v] += 1;
    return e;
  };

  std::vector<std::vector<Polynomial>> entries(n, std::vector<Polynomial>(n, Polynomial(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Polynomial p(n);
      if (i == j) p.add_constant(1.0);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double c2 = R(i, k, l, j) / 3.0;
          if (c2 != 0.0) p.add_term(c2, mono({k, l}));
          for (int s = 0; s < n; ++s) {
            double c3 = DR(i, k, l, j, s) / 6.0;
            if (c3 != 0.0) p.add_term(c3, mono({k, l, s}));
            for (int t = 0; t < n; ++t) {
              double rr = 0.0;
              for (int m = 0; m < n; ++m) rr += R(i, k, l, m) * R(j, s, t, m);
              double c4 = D2R(i, k, l, j, s, t) / 20.0 + 2.0 * rr / 45.0;
              if (c4 != 0.0) p.add_term(c4, mono({k, l, s, t}));
            }
          }
        }
      entries[i][j] = p;
      entries[j][i] = p;
    }
  }
  ChartDomain domain(VectorXd::Zero(n), radius);
  return polynomial_field(std::move(entries), "taylor-normal", std::move(domain));
}

MetricField gallery_field(const std::string& label, int dim,
                          std::optional<ChartDomain> domain) {
  auto piece = [&label](size_t idx) -> std::string {
    size_t start = 0;
    for (size_t i = 0; i < idx; ++i) {
      start = label.find(':', start);
      if (start == std::string::npos) throw ConfigError("gallery label: missing field in " + label);
      ++start;
    }
    size_t end = label.find(':', start);
    return label.substr(start, end == std::string::npos ? std::string::npos : end - start);
  };
  std::string kind = piece(0);
  auto dom_or = [&](ChartDomain def) { return domain.value_or(std::move(def)); };
  VectorXd zero = VectorXd::Zero(dim);

  if (kind == "flat") {
    return conformal_field(dim, "flat", dom_or(ChartDomain(zero, 100.0)), constant_scalar(1.0));
  }
  if (kind == "scaled") {
    double c = std::stod(piece(1));
    if (c <= 0.0) throw ConfigError("gallery: scaled:<c> needs c > 0");
    return conformal_field(dim, label, dom_or(ChartDomain(zero, 100.0)), constant_scalar(c));
  }
  if (kind == "sphere") {
    double r = std::stod(piece(1));
    if (r <= 0.0) throw ConfigError("gallery: sphere:<r> needs r > 0");
    // Stereographic chart of the radius-r round sphere.
    return conformal_field(dim, label, dom_or(ChartDomain(zero, 2.0 * r)),
                           radial_conformal_scalar(4.0 * std::pow(r, 4), r * r, 1.0));
  }
  if (kind == "poincare-disk") {
    return conformal_field(dim, "poincare-disk", dom_or(ChartDomain(zero, 0.9)),
                           radial_conformal_scalar(4.0, 1.0, -1.0));
  }
  if (kind == "half-plane") {
    VectorXd c = zero;
    c[dim - 1] = 2.0;
    return conformal_field(dim, "half-plane", dom_or(ChartDomain(c, 1.5)),
                           half_plane_scalar(dim));
  }
  if (kind == "cigar") {
    if (dim != 2) throw ConfigError("gallery: cigar is a surface chart (dim 2)");
    VectorXd c(2);
    c << 2.0, 0.0;
    VectorXd per(2);
    per << 0.0, 2.0 * M_PI;
    return cigar_field(dom_or(ChartDomain(c, 3.0, per)));
  }
  if (kind == "cylinder") {
    double r = std::stod(piece(1));
    if (r <= 0.0) throw ConfigError("gallery: cylinder:<r> needs r > 0");
    if (dim != 2) throw ConfigError("gallery: cylinder is a surface chart (dim 2)");
    VectorXd per(2);
    per << 2.0 * M_PI * r, 0.0;
    return conformal_field(2, label, dom_or(ChartDomain(zero, 4.0, per)),
                           constant_scalar(1.0));
  }
  if (kind == "polyrand") {
    uint64_t seed = std::stoull(piece(1));
    double amp = std::stod(piece(2));
    if (amp < 0.0) throw ConfigError("gallery: polyrand amplitude must be >= 0");
    return polyrand_field(dim, seed, amp, dom_or(ChartDomain(zero, 1.0)));
  }
  throw ConfigError("gallery: unknown label " + label);
}

VectorXd generalized_metric_eigenvalues(const MetricField& g0, const MetricField& g1,
                                        const VectorXd& x) {
  MatrixXd a = g0.eval(x), b = g1.eval(x);
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(b, a);
  if (es.info() != Eigen::Success) throw NotSPD("generalized_metric_eigenvalues: solve failed");
  VectorXd mu = es.eigenvalues();
  if (mu.minCoeff() <= 0.0) throw NotSPD("generalized_metric_eigenvalues: nonpositive eigenvalue");
  return mu;
}

double quadratic_quasi_isometry_constant(const MetricField& g0, const MetricField& g1,
                                         const std::vector<VectorXd>& samples) {
  if (samples.empty()) throw ConfigError("quadratic_quasi_isometry_constant: empty sample set");
  double a = 1.0;
  for (const auto& x : samples) {
    VectorXd mu = generalized_metric_eigenvalues(g0, g1, x);
    a = std::max({a, mu.maxCoeff(), 1.0 / mu.minCoeff()});
  }
  return a;
}

}  // namespace geomlab
