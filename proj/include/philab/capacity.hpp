#pragma once
// Relative and Sobolev Phi-capacities by constrained energy minimization.

#include "philab/geometry.hpp"
#include "philab/solver.hpp"

namespace philab {

enum class CapacityMode { relative, sobolev };

struct CapacityProblem {
    DomainMask obstacle;    ///< the set E
    DomainMask environment; ///< Omega or the design box
    YoungFunction young;
    CapacityMode mode = CapacityMode::relative;
};

struct CapacityResult {
    double capacity = 0;
    int iterations = 0;
    double residual = 0;
    /// Optimal potential on the environment mesh (empty mesh pointer for an empty obstacle).
    Field potential;
    /// Relative mode: some obstacle node lies on the environment boundary and was held at 0.
    bool touches_boundary = false;
};

/// inf sum_T area Phi(|grad u|) over P1 fields with u = 1 on the nodes of obstacle
/// cells and u = 0 on the environment boundary (the boundary value wins where both apply).
CapacityResult relative_capacity(const CapacityProblem &p, const SolveOptions &opts = {});

/// inf sum_T area Phi(|grad u|) + sum_v w_v Phi(|u_v|) over P1 fields on the
/// environment with u = 1 on the obstacle dilated by one cell and natural
/// boundary conditions elsewhere. The environment must contain the obstacle's
/// bounding box padded on every side by the obstacle's diameter.
CapacityResult sobolev_capacity(const CapacityProblem &p, const SolveOptions &opts = {});

/// Relative capacity of the cell difference omega_k \ omega inside `box`; 0 when empty.
double hypothesis_capacity(const DomainMask &omega_k, const DomainMask &omega, const DomainMask &box,
                           const YoungFunction &y, const SolveOptions &opts = {});

} // namespace philab
