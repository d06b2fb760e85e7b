#include "hierctrl/field.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "hierctrl/errors.hpp"

namespace hierctrl {

std::vector<double> Field::slice(int n) const {
  std::vector<double> s(nx_ + 2);
  for (int i = 0; i < nx_ + 2; ++i) s[i] = at(n, i);
  return s;
}

void Field::set_slice(int n, const std::vector<double>& s) {
  for (int i = 0; i < nx_ + 2; ++i) at(n, i) = s[i];
  at(n, 0) = 0.0;
  at(n, nx_ + 1) = 0.0;
}

void Field::zero_boundary() {
  for (int n = 0; n <= nt_; ++n) {
    at(n, 0) = 0.0;
    at(n, nx_ + 1) = 0.0;
  }
}

namespace {
void check_same(const Field& a, const Field& b) {
  if (a.n_t() != b.n_t() || a.n_x() != b.n_x())
    throw InternalError("field shape mismatch");
}
}  // namespace

Field operator+(const Field& a, const Field& b) {
  check_same(a, b);
  Field r = a;
  for (std::size_t k = 0; k < r.data().size(); ++k) r.data()[k] += b.data()[k];
  return r;
}

Field operator-(const Field& a, const Field& b) {
  check_same(a, b);
  Field r = a;
  for (std::size_t k = 0; k < r.data().size(); ++k) r.data()[k] -= b.data()[k];
  return r;
}

Field operator*(double c, const Field& a) {
  Field r = a;
  for (auto& v : r.data()) v *= c;
  return r;
}

Field masked(const Field& a, const RegionMask& m) {
  Field r = a;
  for (int n = 0; n <= a.n_t(); ++n)
    for (int i = 0; i < a.n_x() + 2; ++i)
      if (!m.indicator[i]) r.at(n, i) = 0.0;
  return r;
}

Field shift_down(const Field& a) {
  Field r = a;
  for (int n = 0; n < a.n_t(); ++n)
    for (int i = 0; i < a.n_x() + 2; ++i) r.at(n, i) = a.at(n + 1, i);
  for (int i = 0; i < a.n_x() + 2; ++i) r.at(a.n_t(), i) = 0.0;
  return r;
}

Field shift_up(const Field& a) {
  Field r = a;
  for (int n = a.n_t(); n >= 1; --n)
    for (int i = 0; i < a.n_x() + 2; ++i) r.at(n, i) = a.at(n - 1, i);
  for (int i = 0; i < a.n_x() + 2; ++i) r.at(0, i) = 0.0;
  return r;
}

Field reverse_time(const Field& a) {
  Field r = a;
  for (int n = 0; n <= a.n_t(); ++n)
    for (int i = 0; i < a.n_x() + 2; ++i) r.at(n, i) = a.at(a.n_t() - n, i);
  return r;
}

double ip_omega(const Grid& g, const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (int i = 1; i <= g.n_x; ++i) s += a[i] * b[i];
  return g.dx * s;
}

double norm_omega(const Grid& g, const std::vector<double>& a) {
  return std::sqrt(ip_omega(g, a, a));
}

double ip_fwd(const Grid& g, const Field& a, const Field& b, const RegionMask* m) {
  double s = 0.0;
  for (int n = 1; n <= g.n_t; ++n)
    for (int i = 1; i <= g.n_x; ++i) {
      if (m && !m->indicator[i]) continue;
      s += a.at(n, i) * b.at(n, i);
    }
  return g.dt * g.dx * s;
}

double norm_fwd(const Grid& g, const Field& a, const RegionMask* m) {
  return std::sqrt(ip_fwd(g, a, a, m));
}

double dual_pairing(const Grid& g, const Field& fwd, const Field& bwd, const RegionMask* m) {
  double s = 0.0;
  for (int n = 0; n < g.n_t; ++n)
    for (int i = 1; i <= g.n_x; ++i) {
      if (m && !m->indicator[i]) continue;
      s += fwd.at(n + 1, i) * bwd.at(n, i);
    }
  return g.dt * g.dx * s;
}

FieldNorms norms(const Grid& g, const Field& z, const std::vector<double>& k_faces) {
  FieldNorms out;
  out.l2_Q = norm_fwd(g, z);
  out.l2_final = norm_omega(g, z.slice(g.n_t));
  double acc = 0.0;
  for (int n = 1; n <= g.n_t; ++n) {
    double l2 = 0.0, grad = 0.0;
    for (int i = 1; i <= g.n_x; ++i) l2 += z.at(n, i) * z.at(n, i);
    for (int j = 0; j <= g.n_x; ++j) {
      double dzdx = (z.at(n, j + 1) - z.at(n, j)) / g.dx;
      grad += k_faces[j] * dzdx * dzdx;
    }
    acc += g.dt * (g.dx * l2 + g.dx * grad);
  }
  out.h1k = std::sqrt(acc);
  return out;
}

void write_field_csv(std::ostream& os, const Grid& g, const Field& f) {
  os << "t,x,value\n";
  char buf[96];
  for (int n = 0; n <= g.n_t; ++n)
    for (int i = 0; i <= g.n_x + 1; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", g.t(n), g.x(i), f.at(n, i));
      os << buf;
    }
}

}  // namespace hierctrl
