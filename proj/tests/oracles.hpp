#pragma once

// Monolithic space-time oracles: the same discrete equations the production
// solvers march through, assembled as one sparse linear system and handed to
// Eigen's SparseLU. Used to cross-check the sequential/CG/Picard paths.

#include <vector>

#include "hierctrl/field.hpp"
#include "hierctrl/follower.hpp"
#include "hierctrl/leader.hpp"

namespace oracle {

struct ChainFields {
  hierctrl::Field y, S, p, q;
};

// Block-triangular chain (y,S,p,q) for given v and h.
ChainFields monolithic_chain(const hierctrl::FollowerProblem& prob, const hierctrl::Field& v,
                             const hierctrl::Field& h);

struct FollowerKkt {
  hierctrl::Field v, y, S, p, q;
};

// Coupled optimality system with v = -(1/mu) q chi_O substituted.
FollowerKkt monolithic_follower_kkt(const hierctrl::FollowerProblem& prob,
                                    const hierctrl::Field& h);

struct QuartetFields {
  hierctrl::Field rho, psi, phi_adj, zeta;
};

QuartetFields monolithic_quartet(const hierctrl::FollowerProblem& prob,
                                 const std::vector<double>& rho_T);

struct LeaderKkt {
  hierctrl::Field h;
  ChainFields state;
  QuartetFields adjoint;
};

// Full eight-field optimality system of the penalized outer problem, with
// h = rho chi_omega and rho(T) = -(1/eps) y(T) closing the loop.
LeaderKkt monolithic_leader_kkt(const hierctrl::LeaderProblem& prob);

}  // namespace oracle
