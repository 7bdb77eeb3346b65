#include "philab/capacity.hpp"

#include "energy.hpp"

#include <algorithm>

namespace philab {

namespace {

void check_problem(const CapacityProblem &p, CapacityMode expected) {
    if (p.mode != expected) throw ValidationError("capacity: problem mode does not match the requested capacity");
    if (!p.obstacle.same_grid(p.environment)) throw ValidationError("capacity: grid mismatch");
    if (!p.obstacle.subset_of(p.environment)) throw ValidationError("capacity: obstacle not inside environment");
}

// Mark every mesh node that is a corner of a true cell of `cells`.
std::vector<std::uint8_t> corner_nodes(const Mesh &mesh, const DomainMask &cells) {
    const int lx = mesh.lattice_nx + 1;
    std::vector<int> node_of(static_cast<std::size_t>(lx) * (mesh.lattice_ny + 1), -1);
    for (std::size_t n = 0; n < mesh.num_nodes(); ++n) node_of[mesh.grid_id[n]] = static_cast<int>(n);
    std::vector<std::uint8_t> mark(mesh.num_nodes(), 0);
    for (int j = 0; j < cells.ny(); ++j)
        for (int i = 0; i < cells.nx(); ++i) {
            if (!cells.inside(i, j)) continue;
            for (int dj = 0; dj <= 1; ++dj)
                for (int di = 0; di <= 1; ++di) {
                    const int n = node_of[static_cast<std::size_t>(j + dj) * lx + i + di];
                    if (n >= 0) mark[n] = 1;
                }
        }
    return mark;
}

CapacityResult minimize_potential(const YoungFunction &y, std::shared_ptr<const Mesh> mesh,
                                  const std::vector<std::uint8_t> &fixed, std::vector<double> u0,
                                  std::span<const double> zero_order, const SolveOptions &opts) {
    const std::vector<double> f(mesh->num_nodes(), 0.0);
    const double eps = opts.grad_regularization.value_or(detail::default_regularization(*mesh));
    const detail::EnergyModel model(y, *mesh, f, zero_order, eps);
    const detail::EnergyModel exact(y, *mesh, f, zero_order, 0.0);

    CapacityResult r;
    if (std::all_of(fixed.begin(), fixed.end(), [](std::uint8_t v) { return v != 0; })) {
        r.capacity = exact.value(u0);
        r.potential = Field{mesh, std::move(u0)};
        return r;
    }
    auto res = detail::minimize(model, exact, fixed, std::move(u0), opts);
    r.capacity = res.report.energy;
    r.iterations = res.report.iterations;
    r.residual = res.report.residual;
    r.potential = Field{std::move(mesh), std::move(res.u)};
    return r;
}

} // namespace

CapacityResult relative_capacity(const CapacityProblem &p, const SolveOptions &opts) {
    check_problem(p, CapacityMode::relative);
    if (p.obstacle.empty()) return {};
    auto mesh = std::make_shared<const Mesh>(triangulate(p.environment));
    const auto on_obstacle = corner_nodes(*mesh, p.obstacle);

    std::vector<std::uint8_t> fixed(mesh->num_nodes(), 0);
    std::vector<double> u0(mesh->num_nodes(), 0.0);
    bool touches = false;
    for (std::size_t n = 0; n < mesh->num_nodes(); ++n) {
        if (mesh->dirichlet[n]) {
            fixed[n] = 1;
            touches = touches || on_obstacle[n];
        } else if (on_obstacle[n]) {
            fixed[n] = 1;
            u0[n] = 1.0;
        }
    }
    auto r = minimize_potential(p.young, mesh, fixed, std::move(u0), {}, opts);
    r.touches_boundary = touches;
    return r;
}

CapacityResult sobolev_capacity(const CapacityProblem &p, const SolveOptions &opts) {
    check_problem(p, CapacityMode::sobolev);
    if (p.obstacle.empty()) return {};

    const DomainMask &E = p.obstacle;
    int i0 = E.nx(), i1 = -1, j0 = E.ny(), j1 = -1;
    for (int j = 0; j < E.ny(); ++j)
        for (int i = 0; i < E.nx(); ++i)
            if (E.inside(i, j)) {
                i0 = std::min(i0, i);
                i1 = std::max(i1, i);
                j0 = std::min(j0, j);
                j1 = std::max(j1, j);
            }
    const int pad = std::max(i1 - i0 + 1, j1 - j0 + 1) + 1;
    for (int j = j0 - pad; j <= j1 + pad; ++j)
        for (int i = i0 - pad; i <= i1 + pad; ++i)
            if (!p.environment.inside_or_false(i, j))
                throw ValidationError("sobolev_capacity: environment must contain the obstacle padded by its diameter");

    auto mesh = std::make_shared<const Mesh>(triangulate(p.environment));
    const auto fixed = corner_nodes(*mesh, dilate(E, 1) & p.environment);
    std::vector<double> u0(mesh->num_nodes(), 0.0);
    for (std::size_t n = 0; n < mesh->num_nodes(); ++n)
        if (fixed[n]) u0[n] = 1.0;
    const std::vector<double> ones(mesh->num_nodes(), 1.0);
    return minimize_potential(p.young, mesh, fixed, std::move(u0), ones, opts);
}

double hypothesis_capacity(const DomainMask &omega_k, const DomainMask &omega, const DomainMask &box,
                           const YoungFunction &y, const SolveOptions &opts) {
    if (!omega_k.same_grid(omega) || !omega.same_grid(box)) throw ValidationError("hypothesis_capacity: grid mismatch");
    const DomainMask diff = omega_k - omega;
    if (diff.empty()) return 0.0;
    return relative_capacity({diff & box, box, y, CapacityMode::relative}, opts).capacity;
}

} // namespace philab
