#include "energy.hpp"

#include <Eigen/CholmodSupport>

#include <algorithm>
#include <cmath>
#include <limits>

namespace philab {

namespace detail {

namespace {

// Flux tensor A = a I + (phi'(s) - a) g g^T / s^2 at the (regularized) gradient g.
struct FluxTensor {
    double xx, xy, yy;
};

FluxTensor flux_tensor(const YoungFunction &y, Point g, double eps) {
    const double s = std::sqrt(g.x * g.x + g.y * g.y + eps * eps);
    if (s == 0) {
        double a = y.phi_prime(0.0);
        if (!std::isfinite(a)) a = 1e30;
        return {a, 0, a};
    }
    const double a = y.phi(s) / s;
    const double b = (y.phi_prime(s) - a) / (s * s);
    return {a + b * g.x * g.x, b * g.x * g.y, a + b * g.y * g.y};
}

} // namespace

EnergyModel::EnergyModel(const YoungFunction &y, const Mesh &mesh, std::span<const double> f,
                         std::span<const double> d, double eps)
    : y_(y), mesh_(mesh), f_(f), d_(d), eps_(eps) {
    if (f.size() != mesh.num_nodes()) throw ValidationError("energy: source has wrong length");
    if (!d.empty() && d.size() != mesh.num_nodes()) throw ValidationError("energy: zero-order coefficient has wrong length");
}

double EnergyModel::value(const std::vector<double> &u) const {
    const double offset = eps_ > 0 ? y_.Phi(eps_) : 0.0;
    double grad_term = 0;
    for (std::size_t t = 0; t < mesh_.num_triangles(); ++t) {
        const Point g = triangle_gradient(mesh_, t, u);
        const double s = std::sqrt(g.x * g.x + g.y * g.y + eps_ * eps_);
        grad_term += mesh_.areas[t] * (y_.Phi(s) - offset);
    }
    const auto &w = mesh_.node_weights();
    double load = 0, zero_order = 0;
    for (std::size_t n = 0; n < mesh_.num_nodes(); ++n) {
        load += w[n] * f_[n] * u[n];
        if (!d_.empty() && d_[n] != 0 && u[n] != 0) zero_order += w[n] * d_[n] * y_.Phi(std::abs(u[n]));
    }
    return grad_term - load + zero_order;
}

void EnergyModel::gradient(const std::vector<double> &u, std::vector<double> &g) const {
    g.assign(mesh_.num_nodes(), 0.0);
    for (std::size_t t = 0; t < mesh_.num_triangles(); ++t) {
        const Point gr = triangle_gradient(mesh_, t, u);
        const double s = std::sqrt(gr.x * gr.x + gr.y * gr.y + eps_ * eps_);
        if (s == 0) continue;
        const double coef = mesh_.areas[t] * y_.phi(s) / s;
        const auto &tri = mesh_.triangles[t];
        const auto &gl = mesh_.grads[t];
        for (int v = 0; v < 3; ++v) g[tri[v]] += coef * (gr.x * gl[v].x + gr.y * gl[v].y);
    }
    const auto &w = mesh_.node_weights();
    for (std::size_t n = 0; n < mesh_.num_nodes(); ++n) {
        g[n] -= w[n] * f_[n];
        if (!d_.empty() && d_[n] != 0 && u[n] != 0)
            g[n] += w[n] * d_[n] * y_.phi(std::abs(u[n])) * (u[n] > 0 ? 1.0 : -1.0);
    }
}

HessianAssembler::HessianAssembler(const Mesh &mesh, const std::vector<std::uint8_t> &fixed) : mesh_(mesh) {
    free_index_.assign(mesh.num_nodes(), -1);
    for (std::size_t n = 0; n < mesh.num_nodes(); ++n)
        if (!fixed[n]) free_index_[n] = nfree_++;

    std::vector<Eigen::Triplet<double, int>> trips;
    trips.reserve(mesh.num_triangles() * 9 + nfree_);
    for (int i = 0; i < nfree_; ++i) trips.emplace_back(i, i, 0.0);
    for (const auto &tri : mesh.triangles)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                const int r = free_index_[tri[a]], c = free_index_[tri[b]];
                if (r >= 0 && c >= 0) trips.emplace_back(r, c, 0.0);
            }
    H_.resize(nfree_, nfree_);
    H_.setFromTriplets(trips.begin(), trips.end());
    H_.makeCompressed();

    auto slot_of = [&](int r, int c) {
        const int *outer = H_.outerIndexPtr();
        const int *inner = H_.innerIndexPtr();
        const int *pos = std::lower_bound(inner + outer[c], inner + outer[c + 1], r);
        return static_cast<int>(pos - inner);
    };
    slot_.assign(mesh.num_triangles() * 9, -1);
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const auto &tri = mesh.triangles[t];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                const int r = free_index_[tri[a]], c = free_index_[tri[b]];
                if (r >= 0 && c >= 0) slot_[t * 9 + a * 3 + b] = slot_of(r, c);
            }
    }
    diag_slot_.resize(nfree_);
    for (int i = 0; i < nfree_; ++i) diag_slot_[i] = slot_of(i, i);
}

const SparseMatrix &HessianAssembler::assemble(const EnergyModel &model, const std::vector<double> &u) {
    double *val = H_.valuePtr();
    std::fill(val, val + H_.nonZeros(), 0.0);
    const auto &y = model.young();
    for (std::size_t t = 0; t < mesh_.num_triangles(); ++t) {
        const int *slots = &slot_[t * 9];
        if (std::all_of(slots, slots + 9, [](int s) { return s < 0; })) continue;
        const FluxTensor A = flux_tensor(y, triangle_gradient(mesh_, t, u), model.eps());
        const auto &gl = mesh_.grads[t];
        const double area = mesh_.areas[t];
        for (int a = 0; a < 3; ++a) {
            const double ax = A.xx * gl[a].x + A.xy * gl[a].y;
            const double ay = A.xy * gl[a].x + A.yy * gl[a].y;
            for (int b = 0; b < 3; ++b) {
                const int s = slots[a * 3 + b];
                if (s >= 0) val[s] += area * (ax * gl[b].x + ay * gl[b].y);
            }
        }
    }
    const auto d = model.zero_order();
    if (!d.empty()) {
        const auto &w = mesh_.node_weights();
        const double floor = model.eps() > 0 ? model.eps() : 1e-12;
        for (std::size_t n = 0; n < mesh_.num_nodes(); ++n) {
            const int i = free_index_[n];
            if (i < 0 || d[n] == 0) continue;
            double curv = y.phi_prime(std::max(std::abs(u[n]), floor));
            if (!std::isfinite(curv)) curv = 1e30;
            val[diag_slot_[i]] += w[n] * d[n] * curv;
        }
    }
    return H_;
}

struct LinearSolver::Impl {
    bool analyzed = false;
    bool factorized = false;
    SparseMatrix shifted;
    std::vector<double> factored_values;
    Eigen::CholmodSupernodalLLT<SparseMatrix, Eigen::Lower> llt;
};

LinearSolver::LinearSolver() : impl_(new Impl) { impl_->llt.cholmod().print = 0; }

LinearSolver::~LinearSolver() { delete impl_; }

bool LinearSolver::solve(const SparseMatrix &H, double shift, const Eigen::VectorXd &rhs, Eigen::VectorXd &x) {
    Impl &s = *impl_;
    s.shifted = H;
    if (shift != 0) s.shifted.diagonal().array() += shift;
    if (!s.analyzed) {
        s.llt.analyzePattern(s.shifted);
        s.analyzed = true;
    }
    const double *v = s.shifted.valuePtr();
    const std::size_t nnz = static_cast<std::size_t>(s.shifted.nonZeros());
    // a linear problem hands over the same matrix at every step
    const bool same = s.factorized && s.factored_values.size() == nnz &&
                      std::equal(v, v + nnz, s.factored_values.begin());
    if (!same) {
        s.factorized = false;
        s.llt.factorize(s.shifted);
        if (s.llt.info() != Eigen::Success) return false;
        s.factored_values.assign(v, v + nnz);
        s.factorized = true;
    }
    x = s.llt.solve(rhs);
    return s.llt.info() == Eigen::Success && x.allFinite();
}

double normalized_residual(const EnergyModel &model, const std::vector<std::uint8_t> &fixed,
                           const std::vector<double> &u) {
    std::vector<double> g;
    model.gradient(u, g);
    const auto &w = model.mesh().node_weights();
    double load = 0;
    for (std::size_t n = 0; n < w.size(); ++n) load += w[n] * std::abs(model.load()[n]);
    double worst = 0;
    for (std::size_t n = 0; n < g.size(); ++n)
        if (!fixed[n]) worst = std::max(worst, std::abs(g[n]));
    return worst / (1.0 + load);
}

double default_regularization(const Mesh &mesh) { return 1e-8 * mesh.box.diameter(); }

MinimizeResult minimize(const EnergyModel &model, const EnergyModel &exact, const std::vector<std::uint8_t> &fixed,
                        std::vector<double> u, const SolveOptions &opts) {
    const Mesh &mesh = model.mesh();
    HessianAssembler hess(mesh, fixed);
    const int n = hess.num_free();
    if (n == 0) throw ValidationError("solve: mesh has no free node");
    const auto &fi = hess.free_index();
    LinearSolver linear;

    MinimizeResult out;
    SolveReport &rep = out.report;
    double E = model.value(u);
    rep.energy_history.push_back(E);

    const auto &w = mesh.node_weights();
    double load_norm = 0;
    for (std::size_t k = 0; k < w.size(); ++k) load_norm += w[k] * std::abs(model.load()[k]);

    std::vector<double> g, trial(u.size());
    Eigen::VectorXd rhs(n), dir(n);
    double last_rel = std::numeric_limits<double>::infinity();
    constexpr double armijo = 1e-4;

    auto free_dot = [&](const std::vector<double> &full, const Eigen::VectorXd &d) {
        double s = 0;
        for (std::size_t k = 0; k < full.size(); ++k)
            if (fi[k] >= 0) s += full[k] * d[fi[k]];
        return s;
    };
    // Backtracking from a unit step; on success u, E are updated.
    auto line_search = [&](const Eigen::VectorXd &d, double slope) {
        double alpha = 1;
        const double scale = std::max(std::abs(E), 1e-300);
        for (int k = 0; k < 60; ++k, alpha *= 0.5) {
            for (std::size_t m = 0; m < u.size(); ++m) trial[m] = fi[m] >= 0 ? u[m] + alpha * d[fi[m]] : u[m];
            const double Et = model.value(trial);
            if (!std::isfinite(Et)) continue;
            const bool sufficient = Et <= E + armijo * alpha * slope;
            // predicted decrease below round-off of E: accept any non-increasing step
            const bool roundoff = std::abs(armijo * alpha * slope) < 1e-15 * scale && Et <= E + 1e-15 * scale;
            if (sufficient || roundoff) {
                last_rel = (E - Et) / std::max({std::abs(E), std::abs(Et), 1e-300});
                u.swap(trial);
                E = Et;
                return true;
            }
        }
        return false;
    };

    for (int it = 0;; ++it) {
        model.gradient(u, g);
        double res = 0;
        for (std::size_t k = 0; k < g.size(); ++k)
            if (fi[k] >= 0) res = std::max(res, std::abs(g[k]));
        res /= (1.0 + load_norm);
        if (res < opts.tol_residual && (it == 0 || last_rel < opts.tol_energy)) {
            rep.converged = true;
            rep.iterations = it;
            break;
        }
        if (it >= opts.max_iterations)
            throw ConvergenceError("solve: no convergence after " + std::to_string(it) + " iterations (residual " +
                                       std::to_string(res) + ")",
                                   u, normalized_residual(exact, fixed, u));

        const SparseMatrix &H = hess.assemble(model, u);
        for (std::size_t k = 0; k < g.size(); ++k)
            if (fi[k] >= 0) rhs[fi[k]] = -g[k];
        const double diag_scale = std::max(H.diagonal().cwiseAbs().maxCoeff(), 1e-300);

        bool accepted = false;
        double shift = 0;
        int failures = 0;
        for (int attempt = 0; attempt < 40 && failures < 5; ++attempt) {
            if (!linear.solve(H, shift, rhs, dir)) {
                shift = shift == 0 ? 1e-10 * diag_scale : shift * 10;
                continue;
            }
            const double slope = free_dot(g, dir);
            if (!(slope < 0)) {
                shift = shift == 0 ? 1e-10 * diag_scale : shift * 10;
                continue;
            }
            if (line_search(dir, slope)) {
                accepted = true;
                break;
            }
            ++failures;
            ++rep.newton_failures;
            shift = shift == 0 ? 1e-6 * diag_scale : shift * 10;
        }
        if (!accepted) {
            ++rep.gradient_steps;
            dir = rhs / diag_scale;
            if (!line_search(dir, -rhs.squaredNorm() / diag_scale))
                throw ConvergenceError("solve: line search stalled (residual " + std::to_string(res) + ")", u,
                                       normalized_residual(exact, fixed, u));
        }
        rep.energy_history.push_back(E);
    }
    out.u = std::move(u);
    rep.energy = exact.value(out.u);
    rep.residual = normalized_residual(exact, fixed, out.u);
    return out;
}

} // namespace detail

void SolveOptions::validate(std::size_t num_nodes) const {
    if (!(tol_energy > 0) || !(tol_residual > 0)) throw ValidationError("SolveOptions: tolerances must be positive");
    if (max_iterations < 0) throw ValidationError("SolveOptions: max_iterations must be >= 0");
    if (grad_regularization && !(*grad_regularization >= 0))
        throw ValidationError("SolveOptions: regularization must be >= 0");
    if (zero_order) {
        if (zero_order->size() != num_nodes) throw ValidationError("SolveOptions: zero-order coefficient has wrong length");
        for (double v : *zero_order)
            if (!(v >= 0)) throw ValidationError("SolveOptions: zero-order coefficient must be nonnegative");
    }
    if (initial_guess && initial_guess->size() != num_nodes)
        throw ValidationError("SolveOptions: initial guess has wrong length");
}

namespace {

std::span<const double> optional_span(const std::vector<double> *d) {
    return d ? std::span<const double>(*d) : std::span<const double>();
}

void check_field(const Mesh &mesh, const std::vector<double> &f, const std::vector<double> &u) {
    if (f.size() != mesh.num_nodes() || u.size() != mesh.num_nodes())
        throw ValidationError("field length does not match the mesh");
}

} // namespace

double energy(const YoungFunction &y, const Mesh &mesh, const std::vector<double> &f, const std::vector<double> &u,
              const std::vector<double> *d, double eps) {
    check_field(mesh, f, u);
    return detail::EnergyModel(y, mesh, f, optional_span(d), eps).value(u);
}

std::vector<double> gradient(const YoungFunction &y, const Mesh &mesh, const std::vector<double> &f,
                             const std::vector<double> &u, const std::vector<double> *d, double eps) {
    check_field(mesh, f, u);
    std::vector<double> g;
    detail::EnergyModel(y, mesh, f, optional_span(d), eps).gradient(u, g);
    for (std::size_t n = 0; n < g.size(); ++n)
        if (mesh.dirichlet[n]) g[n] = 0;
    return g;
}

double weak_residual(const YoungFunction &y, const Mesh &mesh, const std::vector<double> &f,
                     const std::vector<double> &u, const std::vector<double> *d) {
    check_field(mesh, f, u);
    return detail::normalized_residual(detail::EnergyModel(y, mesh, f, optional_span(d), 0.0), mesh.dirichlet, u);
}

Solution solve(const YoungFunction &y, std::shared_ptr<const Mesh> mesh, const std::vector<double> &f,
               const SolveOptions &opts) {
    if (!mesh) throw ValidationError("solve: null mesh");
    opts.validate(mesh->num_nodes());
    if (f.size() != mesh->num_nodes()) throw ValidationError("solve: source has wrong length");
    if (mesh->num_free() == 0) throw ValidationError("solve: mesh has no free node");

    std::vector<double> u0 = opts.initial_guess ? *opts.initial_guess : std::vector<double>(mesh->num_nodes(), 0.0);
    for (std::size_t n = 0; n < u0.size(); ++n)
        if (mesh->dirichlet[n]) u0[n] = 0;

    const double eps = opts.grad_regularization.value_or(detail::default_regularization(*mesh));
    const auto d = opts.zero_order ? std::span<const double>(*opts.zero_order) : std::span<const double>();
    const detail::EnergyModel model(y, *mesh, f, d, eps);
    const detail::EnergyModel exact(y, *mesh, f, d, 0.0);
    auto res = detail::minimize(model, exact, mesh->dirichlet, std::move(u0), opts);
    return Solution{Field{std::move(mesh), std::move(res.u)}, std::move(res.report)};
}

} // namespace philab
