#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hierctrl {

// Uniform space-time grid on (0,T) x (0,1). Nodes 0..n_x+1 include the two
// boundary nodes x=0 and x=1; time levels 0..n_t.
struct Grid {
  int n_x = 0;
  int n_t = 0;
  double T = 0.0;
  double dx = 0.0;
  double dt = 0.0;

  double x(int i) const { return i * dx; }
  double t(int n) const { return n * dt; }
  int n_nodes() const { return n_x + 2; }
  int n_levels() const { return n_t + 1; }
};

Grid build_grid(int n_x, int n_t, double T);

// Node-index set on a Grid, boundary nodes always excluded.
struct RegionMask {
  std::vector<std::uint8_t> indicator;  // size n_x+2
  std::string label;

  bool contains(int i) const { return indicator[i] != 0; }
  int count() const;
  int first() const;  // -1 if empty
  int last() const;   // -1 if empty
};

RegionMask mask_from_interval(const Grid& g, double lo, double hi, const std::string& label);

// Strict index-set inclusion a ⊊ b.
bool strict_subset(const RegionMask& a, const RegionMask& b);
// a ⋐ b in the discrete sense: a ⊂ b with at least `margin` nodes of slack on
// both ends.
bool compact_subset(const RegionMask& a, const RegionMask& b, int margin = 1);
RegionMask intersect(const RegionMask& a, const RegionMask& b, const std::string& label);
// Drop `margin` nodes from each end of a contiguous mask.
RegionMask shrink(const RegionMask& m, int margin, const std::string& label);

}  // namespace hierctrl
