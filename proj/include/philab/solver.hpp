#pragma once
// Dirichlet problem for the phi-Laplacian by minimization of
//   J(u) = int Phi(|grad u|) - int f u  [+ int d Phi(|u|)]
// over P1 fields vanishing on the mesh boundary.

#include "philab/mesh.hpp"
#include "philab/young.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace philab {

/// Nodal values on a mesh; boundary nodes carry exactly zero for solver output.
struct Field {
    std::shared_ptr<const Mesh> mesh;
    std::vector<double> values;
};

struct SolveOptions {
    /// eps in |g|_eps = sqrt(|g|^2 + eps^2); unset means 1e-8 * box diameter.
    std::optional<double> grad_regularization;
    double tol_energy = 1e-10;
    double tol_residual = 1e-8;
    int max_iterations = 200;
    /// Nonnegative per-node coefficient of the zero-order term d(x) Phi(|u|).
    std::optional<std::vector<double>> zero_order;
    /// Starting iterate (boundary entries are overwritten).
    std::optional<std::vector<double>> initial_guess;

    void validate(std::size_t num_nodes) const;
};

struct SolveReport {
    int iterations = 0;
    double energy = 0;
    double residual = 0;
    bool converged = false;
    int newton_failures = 0;
    int gradient_steps = 0;
    /// Energy after every accepted iteration (entry 0 is the initial guess).
    std::vector<double> energy_history;
};

struct Solution {
    Field field;
    SolveReport report;
};

/// Raised when the iteration cap is reached; carries the last iterate.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string &what, std::vector<double> last, double residual)
        : std::runtime_error(what), last_(std::move(last)), residual_(residual) {}
    const std::vector<double> &last_iterate() const { return last_; }
    double residual() const { return residual_; }

  private:
    std::vector<double> last_;
    double residual_;
};

/// J(u) with per-triangle exact gradient term and vertex quadrature for f u and d Phi(|u|).
/// With eps > 0 the gradient term is Phi(|g|_eps) - Phi(eps).
double energy(const YoungFunction &y, const Mesh &mesh, const std::vector<double> &f, const std::vector<double> &u,
              const std::vector<double> *d = nullptr, double eps = 0.0);

/// Derivative of energy() with respect to each nodal value; zero at boundary nodes.
std::vector<double> gradient(const YoungFunction &y, const Mesh &mesh, const std::vector<double> &f,
                             const std::vector<double> &u, const std::vector<double> *d = nullptr, double eps = 0.0);

/// max over free basis functions v of |<F'(u), v> - int f v|, divided by (1 + int |f|).
double weak_residual(const YoungFunction &y, const Mesh &mesh, const std::vector<double> &f,
                     const std::vector<double> &u, const std::vector<double> *d = nullptr);

/// Damped Newton with Levenberg shifts and Armijo backtracking.
/// Throws ValidationError when the mesh has no free node, ConvergenceError on failure.
Solution solve(const YoungFunction &y, std::shared_ptr<const Mesh> mesh, const std::vector<double> &f,
               const SolveOptions &opts = {});

/// Evaluate a source term at the mesh nodes.
template <class F>
std::vector<double> sample_nodes(const Mesh &mesh, F &&f) {
    std::vector<double> out(mesh.num_nodes());
    for (std::size_t n = 0; n < mesh.num_nodes(); ++n) out[n] = f(mesh.nodes[n]);
    return out;
}

} // namespace philab
