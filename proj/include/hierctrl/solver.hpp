#pragma once

#include <vector>

#include "hierctrl/field.hpp"
#include "hierctrl/operator.hpp"

namespace hierctrl {

enum class Scheme {
  BackwardEuler,  // default; the adjoint pairing below is exact for it
  CrankNicolson,  // opt-in for plain trajectory solves
};

// Forward solve of z_t + L z = f, z(0)=g:
//   (I + dt L^{m}) z^m = z^{m-1} + dt f^m,  m = 1..N  (backward Euler).
// Source slots 1..N of f are consumed; slot 0 is ignored.
Field solve_forward(const ParabolicOperator& op, const std::vector<double>& g, const Field& f,
                    Scheme scheme = Scheme::BackwardEuler);

// Backward solve of -w_t + L w = s, w(T)=w_T, marching n = N-1..0 with
//   (I + dt L^{n+1}) w^n = w^{n+1} + dt s^n.
// Source slots 0..N-1 are consumed; slot N is ignored. For time-independent
// a0 this equals time reversal followed by solve_forward, and for any
// symmetric L it is the exact transpose of the forward chain:
//   <z(T), w_T>_Omega + dual_pairing(z, s) = <g, w(0)>_Omega + dual_pairing(f, w).
Field solve_backward(const ParabolicOperator& op, const std::vector<double>& w_T, const Field& s,
                     Scheme scheme = Scheme::BackwardEuler);

// |<z_f(T), w_T>_Omega - dual_pairing(f, w)| with z_f = solve_forward(0, f)
// and w = solve_backward(w_T, 0); machine-precision small by construction.
double duality_check(const ParabolicOperator& op, const Field& f, const std::vector<double>& w_T);

// Apply (I + dt L)^{-1} `steps` times to a node slice (level-1 matrix).
// Used to smooth rough Monte-Carlo data.
std::vector<double> implicit_smooth(const ParabolicOperator& op, const std::vector<double>& u,
                                    int steps);

}  // namespace hierctrl
