#pragma once

#include "geomlab/common.hpp"

namespace geomlab {

/// Sparse multivariate polynomial with integer exponents. Used for the seeded
/// perturbation fields and the normal-coordinate Taylor metric, where every
/// derivative must be available in closed form.
class Polynomial {
 public:
  struct Term {
    double c;
    Eigen::VectorXi e;
  };

  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  int nvars() const { return nvars_; }
  bool empty() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

  void add_term(double c, const Eigen::VectorXi& e) {
    if (c == 0.0) return;
    for (auto& t : terms_) {
      if (t.e == e) {
        t.c += c;
        return;
      }
    }
    terms_.push_back({c, e});
  }
  void add_constant(double c) { add_term(c, Eigen::VectorXi::Zero(nvars_)); }

  double eval(const VectorXd& x) const {
    double s = 0.0;
    for (const auto& t : terms_) {
      double m = t.c;
      for (int i = 0; i < nvars_; ++i)
        for (int p = 0; p < t.e[i]; ++p) m *= x[i];
      s += m;
    }
    return s;
  }

  Polynomial derivative(int var) const {
    Polynomial d(nvars_);
    for (const auto& t : terms_) {
      if (t.e[var] == 0) continue;
      Eigen::VectorXi e = t.e;
      e[var] -= 1;
      d.add_term(t.c * t.e[var], e);
    }
    return d;
  }

 private:
  int nvars_ = 0;
  std::vector<Term> terms_;
};

}  // namespace geomlab
