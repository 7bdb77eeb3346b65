#include "philab/eigen.hpp"

#include "energy.hpp"

#include <algorithm>
#include <cmath>

namespace philab {

namespace {

double constraint_modular(const YoungFunction &y, const std::vector<double> &w, const std::vector<double> &u,
                          double c) {
    double m = 0;
    for (std::size_t n = 0; n < u.size(); ++n)
        if (u[n] != 0) m += w[n] * y.Phi(c * std::abs(u[n]));
    return m;
}

// Scale factor c with modular(c u) = mu, bracketed by the power bounds on Phi.
double rescale_factor(const YoungFunction &y, const std::vector<double> &w, const std::vector<double> &u, double mu) {
    const double m = constraint_modular(y, w, u, 1.0);
    if (!(m > 0) || !std::isfinite(m)) throw ValidationError("estimate_lambda_variational: degenerate iterate");
    const double r = mu / m;
    const double c1 = std::pow(r, 1.0 / (y.p_minus() + 1)), c2 = std::pow(r, 1.0 / (y.p_plus() + 1));
    double lo = std::min(c1, c2) * (1 - 1e-12), hi = std::max(c1, c2) * (1 + 1e-12);
    for (int i = 0; i < 200 && constraint_modular(y, w, u, lo) > mu; ++i) lo *= 0.5;
    for (int i = 0; i < 200 && constraint_modular(y, w, u, hi) < mu; ++i) hi *= 2;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (constraint_modular(y, w, u, mid) < mu)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

EigenResult estimate_lambda_variational(std::shared_ptr<const Mesh> mesh, const YoungFunction &y, double mu,
                                        const EigenOptions &opts) {
    if (!mesh) throw ValidationError("estimate_lambda_variational: null mesh");
    if (!(mu > 0) || !std::isfinite(mu)) throw ValidationError("estimate_lambda_variational: mu must be positive");
    if (!(opts.tol > 0) || opts.max_iterations < 1) throw ValidationError("estimate_lambda_variational: bad options");
    const Mesh &M = *mesh;
    if (M.num_free() == 0) throw ValidationError("estimate_lambda_variational: mesh has no free node");

    const std::vector<double> zero(M.num_nodes(), 0.0);
    const double eps = opts.grad_regularization.value_or(detail::default_regularization(M));
    const detail::EnergyModel G(y, M, zero, {}, eps);
    const detail::EnergyModel G_exact(y, M, zero, {}, 0.0);
    const auto &fixed = M.dirichlet;
    const auto &w = M.node_weights();
    detail::HessianAssembler hess(M, fixed);
    const auto &idx = hess.free_index();
    const int nf = hess.num_free();
    detail::LinearSolver lin;

    std::vector<double> u(M.num_nodes(), 0.0);
    for (std::size_t n = 0; n < M.num_nodes(); ++n)
        if (!fixed[n]) u[n] = 1.0;
    {
        const double c = rescale_factor(y, w, u, mu);
        for (double &v : u) v *= c;
    }

    std::vector<double> gG, trial(M.num_nodes());
    Eigen::VectorXd rG(nf), rM(nf), zG(nf), zM(nf), d(nf);
    double energy = G.value(u);
    double quotient = G_exact.value(u) / mu;
    int stable = 0;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        G.gradient(u, gG);
        for (std::size_t n = 0; n < M.num_nodes(); ++n) {
            const int i = idx[n];
            if (i < 0) continue;
            rG[i] = gG[n];
            rM[i] = u[n] == 0 ? 0.0 : w[n] * y.phi(std::abs(u[n])) * (u[n] > 0 ? 1.0 : -1.0);
        }
        const auto &H = hess.assemble(G, u);
        const double shift = 1e-12 * std::max(H.diagonal().cwiseAbs().maxCoeff(), 1e-300);
        if (!lin.solve(H, shift, rG, zG) || !lin.solve(H, shift, rM, zM)) {
            zG = rG;
            zM = rM;
        }
        const double nu = rM.dot(zG) / rM.dot(zM);
        d = -(zG - nu * zM);
        const double slope = (rG - nu * rM).dot(d);
        if (!(slope < 0)) {
            return {quotient, Field{mesh, u}, it};
        }

        bool accepted = false;
        double new_energy = energy;
        for (double alpha = 1.0; alpha > 1e-14; alpha *= 0.5) {
            trial = u;
            for (std::size_t n = 0; n < M.num_nodes(); ++n)
                if (idx[n] >= 0) trial[n] += alpha * d[idx[n]];
            const double c = rescale_factor(y, w, trial, mu);
            for (double &v : trial) v *= c;
            new_energy = G.value(trial);
            if (new_energy <= energy + 1e-4 * alpha * slope) {
                accepted = true;
                break;
            }
        }
        if (!accepted) return {quotient, Field{mesh, u}, it};

        u.swap(trial);
        energy = new_energy;
        const double q = G_exact.value(u) / mu;
        const double change = std::abs(q - quotient) / std::max(std::abs(q), 1e-300);
        quotient = q;
        stable = change < opts.tol ? stable + 1 : 0;
        if (stable >= 2) return {quotient, Field{mesh, u}, it};
    }
    throw EigenConvergenceError("estimate_lambda_variational: iteration cap reached", quotient);
}

} // namespace philab
