#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "hierctrl/grid.hpp"

namespace hierctrl {

// Scalar function sampled on the space-time grid, (n_t+1) x (n_x+2) row-major.
// The boundary columns i=0 and i=n_x+1 are kept identically zero (homogeneous
// Dirichlet); every mutating helper preserves that.
class Field {
 public:
  Field() = default;
  explicit Field(const Grid& g) : nt_(g.n_t), nx_(g.n_x), v_((g.n_t + 1) * (g.n_x + 2), 0.0) {}

  double& at(int n, int i) { return v_[static_cast<std::size_t>(n) * (nx_ + 2) + i]; }
  double at(int n, int i) const { return v_[static_cast<std::size_t>(n) * (nx_ + 2) + i]; }

  int n_t() const { return nt_; }
  int n_x() const { return nx_; }
  bool empty() const { return v_.empty(); }

  const std::vector<double>& data() const { return v_; }
  std::vector<double>& data() { return v_; }

  // Time slice as a node vector of length n_x+2.
  std::vector<double> slice(int n) const;
  void set_slice(int n, const std::vector<double>& s);

  void zero_boundary();

 private:
  int nt_ = 0;
  int nx_ = 0;
  std::vector<double> v_;
};

// -------- linear combinations --------
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double c, const Field& a);
Field masked(const Field& a, const RegionMask& m);

// Forward-to-backward source slot shift: out(n,.) = in(n+1,.), n=0..N-1.
Field shift_down(const Field& a);
// Backward-to-forward slot shift: out(m,.) = in(m-1,.), m=1..N.
Field shift_up(const Field& a);
Field reverse_time(const Field& a);

// -------- quadrature --------
// Slice inner product dx * sum over interior nodes.
double ip_omega(const Grid& g, const std::vector<double>& a, const std::vector<double>& b);
double norm_omega(const Grid& g, const std::vector<double>& a);

// Forward-indexed L2(Q) pairing: dt*dx * sum_{m=1..N} sum_i a(m,i) b(m,i),
// optionally restricted to a region. Controls, states and tracking targets
// live on the m=1..N slots.
double ip_fwd(const Grid& g, const Field& a, const Field& b, const RegionMask* m = nullptr);
double norm_fwd(const Grid& g, const Field& a, const RegionMask* m = nullptr);

// Discrete duality pairing between a forward-indexed field and a
// backward-indexed field: dt*dx * sum_{n=0..N-1} fwd(n+1,i) bwd(n,i). This is
// the pairing under which the backward solver is the exact transpose of the
// forward one.
double dual_pairing(const Grid& g, const Field& fwd, const Field& bwd,
                    const RegionMask* m = nullptr);

struct FieldNorms {
  double l2_Q = 0.0;      // forward-indexed L2(Q)
  double l2_final = 0.0;  // L2(Omega) of the last time slice
  double h1k = 0.0;       // sqrt( dt sum_m [ ||z^m||^2 + ||sqrt(k) z_x^m||^2 ] )
};

// k_faces: k sampled at the n_x+1 cell faces (same array the operator uses).
FieldNorms norms(const Grid& g, const Field& z, const std::vector<double>& k_faces);

// CSV export, columns t,x,value (one row per node per level).
void write_field_csv(std::ostream& os, const Grid& g, const Field& f);

}  // namespace hierctrl
