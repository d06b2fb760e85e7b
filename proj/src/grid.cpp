#include "hierctrl/grid.hpp"

#include <algorithm>
#include <cmath>

#include "hierctrl/errors.hpp"

namespace hierctrl {

Grid build_grid(int n_x, int n_t, double T) {
  if (n_x < 1 || n_t < 1) {
    throw ConfigError("build_grid: sizes must be positive, got n_x=" + std::to_string(n_x) +
                      ", n_t=" + std::to_string(n_t));
  }
  if (!(T > 0.0)) {
    throw ConfigError("build_grid: need T > 0");
  }
  Grid g;
  g.n_x = n_x;
  g.n_t = n_t;
  g.T = T;
  g.dx = 1.0 / (n_x + 1);
  g.dt = T / n_t;
  return g;
}

int RegionMask::count() const {
  int c = 0;
  for (auto b : indicator) c += (b != 0);
  return c;
}

int RegionMask::first() const {
  for (int i = 0; i < static_cast<int>(indicator.size()); ++i)
    if (indicator[i]) return i;
  return -1;
}

int RegionMask::last() const {
  for (int i = static_cast<int>(indicator.size()) - 1; i >= 0; --i)
    if (indicator[i]) return i;
  return -1;
}

RegionMask mask_from_interval(const Grid& g, double lo, double hi, const std::string& label) {
  if (!(lo < hi)) throw RegionError("region '" + label + "': need lo < hi");
  RegionMask m;
  m.label = label;
  m.indicator.assign(g.n_nodes(), 0);
  for (int i = 1; i <= g.n_x; ++i) {
    double x = g.x(i);
    if (x > lo && x < hi) m.indicator[i] = 1;
  }
  return m;
}

bool strict_subset(const RegionMask& a, const RegionMask& b) {
  bool proper = false;
  for (std::size_t i = 0; i < a.indicator.size(); ++i) {
    if (a.indicator[i] && !b.indicator[i]) return false;
    if (b.indicator[i] && !a.indicator[i]) proper = true;
  }
  return proper;
}

bool compact_subset(const RegionMask& a, const RegionMask& b, int margin) {
  if (a.count() == 0 || b.count() == 0) return false;
  return a.first() >= b.first() + margin && a.last() <= b.last() - margin &&
         a.first() <= a.last();
}

RegionMask intersect(const RegionMask& a, const RegionMask& b, const std::string& label) {
  RegionMask m;
  m.label = label;
  m.indicator.assign(a.indicator.size(), 0);
  for (std::size_t i = 0; i < a.indicator.size(); ++i)
    m.indicator[i] = (a.indicator[i] && b.indicator[i]) ? 1 : 0;
  return m;
}

RegionMask shrink(const RegionMask& m, int margin, const std::string& label) {
  RegionMask out;
  out.label = label;
  out.indicator.assign(m.indicator.size(), 0);
  int lo = m.first(), hi = m.last();
  if (lo < 0) return out;
  for (int i = lo + margin; i <= hi - margin; ++i) out.indicator[i] = m.indicator[i];
  return out;
}

}  // namespace hierctrl
