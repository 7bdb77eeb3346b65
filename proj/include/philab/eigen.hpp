#pragma once
// Variational eigenvalue
//   Lambda_mu = min { int Phi(|grad u|) / int Phi(|u|) : int Phi(|u|) = mu }
// over P1 fields vanishing on the mesh boundary.

#include "philab/solver.hpp"

namespace philab {

struct EigenOptions {
    /// Relative change of the quotient below which the iteration stops.
    double tol = 1e-12;
    int max_iterations = 2000;
    std::optional<double> grad_regularization;
};

struct EigenResult {
    double lambda = 0;
    /// Minimizer, normalized so that the vertex-quadrature modular equals mu.
    Field eigenfield;
    int iterations = 0;
};

class EigenConvergenceError : public std::runtime_error {
  public:
    EigenConvergenceError(const std::string &what, double last_quotient)
        : std::runtime_error(what), last_(last_quotient) {}
    double last_quotient() const { return last_; }

  private:
    double last_;
};

/// Projected preconditioned descent on the constraint surface. Each step moves
/// along the Newton-preconditioned tangential gradient and rescales back onto
/// sum_v w_v Phi(|u_v|) = mu.
EigenResult estimate_lambda_variational(std::shared_ptr<const Mesh> mesh, const YoungFunction &y, double mu,
                                        const EigenOptions &opts = {});

} // namespace philab
