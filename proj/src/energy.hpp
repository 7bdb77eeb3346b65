#pragma once
// Discrete energy, its gradient and Hessian, and the constrained Newton minimizer
// shared by the solver, capacity and eigenvalue modules.

#include "philab/solver.hpp"

#include <Eigen/SparseCore>

#include <span>
#include <vector>

namespace philab::detail {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// J(u) = sum_T area Phi(|g|_eps) - Phi(eps)  -  sum_v w_v f_v u_v  +  sum_v w_v d_v Phi(|u_v|)
class EnergyModel {
  public:
    EnergyModel(const YoungFunction &y, const Mesh &mesh, std::span<const double> f, std::span<const double> d,
                double eps);

    double value(const std::vector<double> &u) const;
    /// Full-length derivative (entries at constrained nodes are left as computed).
    void gradient(const std::vector<double> &u, std::vector<double> &g) const;
    const YoungFunction &young() const { return y_; }
    const Mesh &mesh() const { return mesh_; }
    double eps() const { return eps_; }
    std::span<const double> load() const { return f_; }
    std::span<const double> zero_order() const { return d_; }

  private:
    const YoungFunction &y_;
    const Mesh &mesh_;
    std::span<const double> f_;
    std::span<const double> d_;
    double eps_;
};

/// Hessian of an EnergyModel restricted to free nodes, with a sparsity pattern built once.
class HessianAssembler {
  public:
    HessianAssembler(const Mesh &mesh, const std::vector<std::uint8_t> &fixed);

    int num_free() const { return nfree_; }
    const std::vector<int> &free_index() const { return free_index_; }

    /// Hessian of the model at u; the returned matrix stores both triangles.
    const SparseMatrix &assemble(const EnergyModel &model, const std::vector<double> &u);

  private:
    const Mesh &mesh_;
    std::vector<int> free_index_;
    int nfree_ = 0;
    SparseMatrix H_;
    std::vector<int> slot_;      // 9 per triangle, -1 when either node is fixed
    std::vector<int> diag_slot_; // per free node
};

/// Solves H d = rhs on the free nodes, with Levenberg shifts when H is not SPD.
class LinearSolver {
  public:
    LinearSolver();
    ~LinearSolver();
    LinearSolver(const LinearSolver &) = delete;
    LinearSolver &operator=(const LinearSolver &) = delete;
    /// Returns false if the shifted system could not be solved.
    bool solve(const SparseMatrix &H, double shift, const Eigen::VectorXd &rhs, Eigen::VectorXd &x);

  private:
    struct Impl;
    Impl *impl_;
};

struct MinimizeResult {
    std::vector<double> u;
    SolveReport report;
};

/// Minimize model over nodal fields with u fixed (to the entries of u0) where fixed[n] != 0.
/// Residual for the stopping rule uses `model`; the reported residual uses `exact`.
MinimizeResult minimize(const EnergyModel &model, const EnergyModel &exact, const std::vector<std::uint8_t> &fixed,
                        std::vector<double> u0, const SolveOptions &opts);

/// Normalized residual max_free |g_v| / (1 + sum w |f|).
double normalized_residual(const EnergyModel &model, const std::vector<std::uint8_t> &fixed,
                           const std::vector<double> &u);

double default_regularization(const Mesh &mesh);

} // namespace philab::detail
