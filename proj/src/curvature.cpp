#include "geomlab/curvature.hpp"

#include <sstream>

#include "json.hpp"

namespace geomlab {

namespace {

MatrixXd inverse_spd(const MatrixXd& g) {
  Eigen::LLT<MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) throw NotSPD("curvature: metric not SPD");
  return llt.solve(MatrixXd::Identity(g.rows(), g.cols()));
}

}  // namespace

Tensor3 christoffel(const MetricField& field, const VectorXd& x) {
  const int n = field.dim();
  MatrixXd g = field.eval(x);
  MatrixXd ginv = inverse_spd(g);
  std::vector<MatrixXd> dg(n);
  for (int i = 0; i < n; ++i) dg[i] = field.partial1(x, i);

  Tensor3 gamma(n);
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

Tensor4 christoffel_partial(const MetricField& field, const VectorXd& x) {
  const int n = field.dim();
  MatrixXd g = field.eval(x);
  MatrixXd ginv = inverse_spd(g);
  std::vector<MatrixXd> dg(n);
  for (int i = 0; i < n; ++i) dg[i] = field.partial1(x, i);
  std::vector<std::vector<MatrixXd>> d2g(n, std::vector<MatrixXd>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      d2g[i][j] = field.partial2(x, i, j);
      if (j != i) d2g[j][i] = d2g[i][j];
    }
  // d_m g^{kl} = -g^{ka} d_m g_{ab} g^{bl}
  std::vector<MatrixXd> dginv(n);
  for (int m = 0; m < n; ++m) dginv[m] = -ginv * dg[m] * ginv;

  Tensor4 dgamma(n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double v = 0.0;
          for (int l = 0; l < n; ++l) {
            double s = dg[i](l, j) + dg[j](i, l) - dg[l](i, j);
            double ds = d2g[m][i](l, j) + d2g[m][j](i, l) - d2g[m][l](i, j);
            v += 0.5 * (dginv[m](k, l) * s + ginv(k, l) * ds);
          }
          dgamma(m, k, i, j) = v;
          dgamma(m, k, j, i) = v;
        }
  return dgamma;
}

Tensor5 christoffel_second_partial(const MetricField& field, const VectorXd& x) {
  const int n = field.dim();
  MatrixXd g = field.eval(x);
  MatrixXd ginv = inverse_spd(g);
  std::vector<MatrixXd> dg(n);
  for (int i = 0; i < n; ++i) dg[i] = field.partial1(x, i);
  std::vector<std::vector<MatrixXd>> d2g(n, std::vector<MatrixXd>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d2g[i][j] = (j >= i) ? field.partial2(x, i, j) : d2g[j][i];
  std::vector<std::vector<std::vector<MatrixXd>>> d3g(
      n, std::vector<std::vector<MatrixXd>>(n, std::vector<MatrixXd>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        MatrixXd v = field.partial3(x, i, j, k);
        int idx[3] = {i, j, k};
        std::sort(idx, idx + 3);
        // assign to all permutations
        int p[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        for (auto& q : p) d3g[idx[q[0]]][idx[q[1]]][idx[q[2]]] = v;
      }

  std::vector<MatrixXd> dginv(n);
  for (int m = 0; m < n; ++m) dginv[m] = -ginv * dg[m] * ginv;
  std::vector<std::vector<MatrixXd>> d2ginv(n, std::vector<MatrixXd>(n));
  for (int m = 0; m < n; ++m)
    for (int q = 0; q < n; ++q)
      d2ginv[m][q] = -(dginv[q] * dg[m] * ginv + ginv * d2g[m][q] * ginv + ginv * dg[m] * dginv[q]);

  Tensor5 d2gamma(n);
  for (int q = 0; q < n; ++q)
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j) {
            double v = 0.0;
            for (int l = 0; l < n; ++l) {
              double s = dg[i](l, j) + dg[j](i, l) - dg[l](i, j);
              double sm = d2g[m][i](l, j) + d2g[m][j](i, l) - d2g[m][l](i, j);
              double sq = d2g[q][i](l, j) + d2g[q][j](i, l) - d2g[q][l](i, j);
              double smq = d3g[m][q][i](l, j) + d3g[m][q][j](i, l) - d3g[m][q][l](i, j);
              v += 0.5 * (d2ginv[m][q](k, l) * s + dginv[m](k, l) * sq + dginv[q](k, l) * sm +
                          ginv(k, l) * smq);
            }
            d2gamma(q, m, k, i, j) = v;
            d2gamma(q, m, k, j, i) = v;
          }
  return d2gamma;
}

namespace {

// R^l_{kij}: coefficient of d_l in R(d_i, d_j) d_k.
Tensor4 riemann_up(const Tensor3& gamma, const Tensor4& dgamma, int n) {
  Tensor4 up(n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = dgamma(i, l, j, k) - dgamma(j, l, i, k);
          for (int m = 0; m < n; ++m)
            v += gamma(l, i, m) * gamma(m, j, k) - gamma(l, j, m) * gamma(m, i, k);
          up(l, k, i, j) = v;
        }
  return up;
}

}  // namespace

Tensor4 riemann_lowered(const MetricField& field, const VectorXd& x) {
  const int n = field.dim();
  MatrixXd g = field.eval(x);
  Tensor3 gamma = christoffel(field, x);
  Tensor4 dgamma = christoffel_partial(field, x);
  Tensor4 up = riemann_up(gamma, dgamma, n);
  Tensor4 low(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = 0.0;
          for (int m = 0; m < n; ++m) v += g(m, l) * up(m, k, i, j);
          low(i, j, k, l) = v;
        }
  return low;
}

Tensor5 riemann_partial(const MetricField& field, const VectorXd& x) {
  const int n = field.dim();
  MatrixXd g = field.eval(x);
  std::vector<MatrixXd> dg(n);
  for (int i = 0; i < n; ++i) dg[i] = field.partial1(x, i);
  Tensor3 gamma = christoffel(field, x);
  Tensor4 dgamma = christoffel_partial(field, x);
  Tensor5 d2gamma = christoffel_second_partial(field, x);
  Tensor4 up = riemann_up(gamma, dgamma, n);

  Tensor5 dup(n);  // (m, l, k, i, j)
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double v = d2gamma(m, i, l, j, k) - d2gamma(m, j, l, i, k);
            for (int p = 0; p < n; ++p)
              v += dgamma(m, l, i, p) * gamma(p, j, k) + gamma(l, i, p) * dgamma(m, p, j, k) -
                   dgamma(m, l, j, p) * gamma(p, i, k) - gamma(l, j, p) * dgamma(m, p, i, k);
            dup(m, l, k, i, j) = v;
          }

  Tensor5 dlow(n);  // (m, i, j, k, l)
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double v = 0.0;
            for (int p = 0; p < n; ++p)
              v += dg[m](p, l) * up(p, k, i, j) + g(p, l) * dup(m, p, k, i, j);
            dlow(m, i, j, k, l) = v;
          }
  return dlow;
}

Tensor5 covariant_derivative_R(const MetricField& field, const VectorXd& x) {
  const int n = field.dim();
  Tensor3 gamma = christoffel(field, x);
  Tensor4 low = riemann_lowered(field, x);
  Tensor5 dlow = riemann_partial(field, x);
  Tensor5 covd(n);  // (i, j, k, l, m)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int m = 0; m < n; ++m) {
            double v = dlow(m, i, j, k, l);
            for (int p = 0; p < n; ++p)
              v -= gamma(p, m, i) * low(p, j, k, l) + gamma(p, m, j) * low(i, p, k, l) +
                   gamma(p, m, k) * low(i, j, p, l) + gamma(p, m, l) * low(i, j, k, p);
            covd(i, j, k, l, m) = v;
          }
  return covd;
}

double riemann_symmetry_residual(const Tensor4& R) {
  const int n = R.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          worst = std::max(worst, std::fabs(R(i, j, k, l) + R(j, i, k, l)));
          worst = std::max(worst, std::fabs(R(i, j, k, l) + R(i, j, l, k)));
          worst = std::max(worst, std::fabs(R(i, j, k, l) - R(k, l, i, j)));
        }
  return worst;
}

double first_bianchi_residual(const Tensor4& R) {
  const int n = R.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          worst = std::max(worst,
                           std::fabs(R(i, j, k, l) + R(i, k, l, j) + R(i, l, j, k)));
  return worst;
}

double second_bianchi_residual(const Tensor5& DR) {
  const int n = DR.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int m = 0; m < n; ++m)
            worst = std::max(worst, std::fabs(DR(i, j, k, l, m) + DR(i, j, l, m, k) +
                                              DR(i, j, m, k, l)));
  return worst;
}

double sectional_from_tensor(const Tensor4& R, const MatrixXd& g, const VectorXd& u,
                             const VectorXd& v) {
  const int n = static_cast<int>(g.rows());
  double num = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) num += R(i, j, k, l) * u[i] * v[j] * v[k] * u[l];
  double guu = u.dot(g * u), gvv = v.dot(g * v), guv = u.dot(g * v);
  double den = guu * gvv - guv * guv;
  double scale = std::max(1.0, guu * gvv);
  if (den <= 1e-12 * scale) throw DegeneratePlane("sectional: u, v nearly dependent");
  return num / den;
}

double sectional(const MetricField& field, const VectorXd& x, const VectorXd& u,
                 const VectorXd& v) {
  return sectional_from_tensor(riemann_lowered(field, x), field.eval(x), u, v);
}

double riemann_norm(const Tensor4& R, const MatrixXd& g) {
  const int n = static_cast<int>(g.rows());
  MatrixXd e = orthonormal_columns(g);
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double v = 0.0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                  v += R(i, j, k, l) * e(i, a) * e(j, b) * e(k, c) * e(l, d);
          s += v * v;
        }
  return std::sqrt(s);
}

double covd_riemann_norm(const Tensor5& DR, const MatrixXd& g) {
  const int n = static_cast<int>(g.rows());
  MatrixXd e = orthonormal_columns(g);
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          for (int f = 0; f < n; ++f) {
            double v = 0.0;
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                  for (int l = 0; l < n; ++l)
                    for (int m = 0; m < n; ++m)
                      v += DR(i, j, k, l, m) * e(i, a) * e(j, b) * e(k, c) * e(l, d) * e(m, f);
            s += v * v;
          }
  return std::sqrt(s);
}

double christoffel_norm(const Tensor3& gamma, const MatrixXd& g) {
  const int n = static_cast<int>(g.rows());
  MatrixXd e = orthonormal_columns(g);
  MatrixXd einv = e.inverse();
  double s = 0.0;
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double v = 0.0;
        for (int k = 0; k < n; ++k)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) v += einv(c, k) * gamma(k, i, j) * e(i, a) * e(j, b);
        s += v * v;
      }
  return std::sqrt(s);
}

CurvatureSample curvature_sample(const MetricField& field, const VectorXd& x) {
  CurvatureSample s;
  s.at = x;
  MatrixXd g = field.eval(x);
  s.gamma = christoffel(field, x);
  s.riemann = riemann_lowered(field, x);
  s.covd_riemann = covariant_derivative_R(field, x);
  const int n = field.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      VectorXd u = VectorXd::Zero(n), v = VectorXd::Zero(n);
      u[i] = 1.0;
      v[j] = 1.0;
      s.sectional_values.push_back(sectional_from_tensor(s.riemann, g, u, v));
    }
  s.norm_R = riemann_norm(s.riemann, g);
  s.norm_DR = covd_riemann_norm(s.covd_riemann, g);
  s.norm_gamma = christoffel_norm(s.gamma, g);
  return s;
}

std::string curvature_csv_header(int dim) {
  std::ostringstream os;
  for (int i = 0; i < dim; ++i) os << "x" << i << ",";
  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) os << "gamma_" << k << i << j << ",";
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) os << "R_" << i << j << k << l << ",";
  os << "norm_R,norm_DR,norm_gamma";
  return os.str();
}

std::string curvature_csv_row(const CurvatureSample& s) {
  std::ostringstream os;
  const int n = static_cast<int>(s.at.size());
  for (int i = 0; i < n; ++i) os << format17(s.at[i]) << ",";
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) os << format17(s.gamma(k, i, j)) << ",";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) os << format17(s.riemann(i, j, k, l)) << ",";
  os << format17(s.norm_R) << "," << format17(s.norm_DR) << "," << format17(s.norm_gamma);
  return os.str();
}

std::string curvature_json(const CurvatureSample& s) {
  nlohmann::ordered_json j;
  const int n = static_cast<int>(s.at.size());
  j["at"] = std::vector<double>(s.at.data(), s.at.data() + n);
  j["gamma"] = s.gamma.data();
  j["riemann"] = s.riemann.data();
  j["sectional"] = s.sectional_values;
  j["covd_riemann"] = s.covd_riemann.data();
  j["norm_R"] = s.norm_R;
  j["norm_DR"] = s.norm_DR;
  j["norm_gamma"] = s.norm_gamma;
  return j.dump();
}

NormEstimate curvature_norm_estimate(const MetricField& field,
                                     const std::vector<VectorXd>& samples) {
  if (samples.empty()) throw ConfigError("curvature_norm_estimate: empty sample set");
  NormEstimate e;
  for (const auto& x : samples) {
    MatrixXd g = field.eval(x);
    e.sup_R = std::max(e.sup_R, riemann_norm(riemann_lowered(field, x), g));
    e.sup_DR = std::max(e.sup_DR, covd_riemann_norm(covariant_derivative_R(field, x), g));
    e.sup_gamma = std::max(e.sup_gamma, christoffel_norm(christoffel(field, x), g));
  }
  return e;
}

}  // namespace geomlab
