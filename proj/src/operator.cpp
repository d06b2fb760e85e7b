#include "hierctrl/operator.hpp"

#include <cmath>

#include "hierctrl/errors.hpp"

namespace hierctrl {

namespace {

std::vector<double> face_values(const Grid& g, const DiffusionCoefficient& k, FaceRule rule) {
  std::vector<double> kf(g.n_x + 1);
  if (rule == FaceRule::Fitted && k.is_power_law()) {
    double a = k.alpha;
    if (a == 0.0) {
      for (auto& v : kf) v = 1.0;
    } else {
      double e = 2.0 - a;
      double dxa = std::pow(g.dx, a);
      for (int j = 0; j <= g.n_x; ++j) {
        double denom = std::pow(j + 1.0, e) - std::pow(static_cast<double>(j), e);
        kf[j] = e * (j + 0.5) * dxa / denom;
      }
    }
  } else {
    for (int j = 0; j <= g.n_x; ++j) kf[j] = k.k((j + 0.5) * g.dx);
  }
  return kf;
}

void fill_stencil(ParabolicOperator& op, const Grid& g, const std::vector<double>& kf,
                  std::vector<double>& diag0, std::vector<double>& off) {
  (void)op;
  double dx2 = g.dx * g.dx;
  diag0.resize(g.n_x);
  off.resize(g.n_x - 1);
  for (int i = 0; i < g.n_x; ++i) diag0[i] = (kf[i] + kf[i + 1]) / dx2;
  for (int i = 0; i + 1 < g.n_x; ++i) off[i] = -kf[i + 1] / dx2;
}

}  // namespace

double ParabolicOperator::a0_sup() const {
  if (!a0_field_) return std::abs(a0_const_);
  double m = 0.0;
  for (double v : a0_field_->data()) m = std::max(m, std::abs(v));
  return m;
}

double ParabolicOperator::a0_inf() const {
  if (!a0_field_) return a0_const_;
  double m = a0_const_;
  bool first = true;
  for (int n = 0; n <= grid_.n_t; ++n)
    for (int i = 1; i <= grid_.n_x; ++i) {
      double v = a0_field_->at(n, i);
      m = first ? v : std::min(m, v);
      first = false;
    }
  return m;
}

std::vector<double> ParabolicOperator::apply(int n, const std::vector<double>& z) const {
  std::vector<double> out(grid_.n_nodes(), 0.0);
  for (int i = 0; i < grid_.n_x; ++i) {
    double v = diag(n, i) * z[i + 1];
    if (i > 0) v += off_[i - 1] * z[i];
    if (i + 1 < grid_.n_x) v += off_[i] * z[i + 2];
    out[i + 1] = v;
  }
  return out;
}

ParabolicOperator assemble_operator(const Grid& g, const DiffusionCoefficient& k, double a0,
                                    FaceRule rule) {
  ParabolicOperator op;
  op.grid_ = g;
  op.k_faces_ = face_values(g, k, rule);
  fill_stencil(op, g, op.k_faces_, op.diag0_, op.off_);
  op.a0_const_ = a0;
  return op;
}

ParabolicOperator assemble_operator(const Grid& g, const DiffusionCoefficient& k, const Field& a0,
                                    FaceRule rule) {
  if (a0.n_t() != g.n_t || a0.n_x() != g.n_x)
    throw ConfigError("assemble_operator: a0 array shape does not match the grid");
  ParabolicOperator op;
  op.grid_ = g;
  op.k_faces_ = face_values(g, k, rule);
  fill_stencil(op, g, op.k_faces_, op.diag0_, op.off_);
  op.a0_field_ = a0;
  return op;
}

}  // namespace hierctrl
