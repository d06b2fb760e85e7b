#pragma once

#include <optional>
#include <vector>

#include "hierctrl/diffusion.hpp"
#include "hierctrl/field.hpp"
#include "hierctrl/grid.hpp"

namespace hierctrl {

enum class FaceRule {
  // Face coefficient exact for the local mode x^{2-alpha} of power-law k:
  //   k_{j+1/2} = (2-a)(j+1/2) dx^a / ((j+1)^{2-a} - j^{2-a}).
  // Restores second-order convergence up to the degenerate endpoint; agrees
  // with the midpoint value away from it and equals it exactly for alpha=0.
  // Non-power-law coefficients fall back to midpoint sampling.
  Fitted,
  // k evaluated at the face midpoints x = (j+1/2) dx.
  Midpoint,
};

// Symmetric tridiagonal discretization of L z = -(k z_x)_x + a0 z on the
// interior nodes, flux form with face-sampled k. k(0) is never evaluated.
// a0 may be constant or a space-time array (then the per-level matrices
// differ and the solvers pick the right one per step).
class ParabolicOperator {
 public:
  ParabolicOperator() = default;

  const Grid& grid() const { return grid_; }
  const std::vector<double>& k_faces() const { return k_faces_; }

  // Interior stencil at level n (1..n_x indexing shifted to 0-based):
  // diag[i], off[i] couple nodes i+1 and i+2 of the full node numbering.
  double diag(int n, int i) const { return diag0_[i] + a0(n, i); }
  double off(int i) const { return off_[i]; }
  double a0(int n, int i) const {
    return a0_field_ ? a0_field_->at(n, i + 1) : a0_const_;
  }
  double a0_sup() const;
  double a0_inf() const;
  bool a0_time_dependent() const { return a0_field_.has_value(); }

  // Apply L to a node slice (length n_x+2, Dirichlet columns ignored).
  std::vector<double> apply(int n, const std::vector<double>& z) const;

  friend ParabolicOperator assemble_operator(const Grid&, const DiffusionCoefficient&, double,
                                             FaceRule);
  friend ParabolicOperator assemble_operator(const Grid&, const DiffusionCoefficient&,
                                             const Field&, FaceRule);

 private:
  Grid grid_;
  std::vector<double> k_faces_;  // n_x+1 values
  std::vector<double> diag0_;    // (k_{i-1/2}+k_{i+1/2})/dx^2, interior
  std::vector<double> off_;      // -k_{i+1/2}/dx^2 between interior neighbors
  double a0_const_ = 0.0;
  std::optional<Field> a0_field_;
};

ParabolicOperator assemble_operator(const Grid& g, const DiffusionCoefficient& k, double a0,
                                    FaceRule rule = FaceRule::Fitted);
ParabolicOperator assemble_operator(const Grid& g, const DiffusionCoefficient& k, const Field& a0,
                                    FaceRule rule = FaceRule::Fitted);

}  // namespace hierctrl
