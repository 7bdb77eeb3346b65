#include "philab/mesh.hpp"

#include <algorithm>

namespace philab {

std::size_t Mesh::num_free() const {
    return static_cast<std::size_t>(std::count(dirichlet.begin(), dirichlet.end(), 0));
}

void Mesh::finalize() {
    areas.resize(triangles.size());
    grads.resize(triangles.size());
    node_weights_.assign(nodes.size(), 0.0);
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto &tri = triangles[t];
        const Point a = nodes[tri[0]], b = nodes[tri[1]], c = nodes[tri[2]];
        const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
        if (!(det > 0)) throw ValidationError("Mesh: triangle with non-positive orientation");
        areas[t] = 0.5 * det;
        // grad lambda_i = rot90(opposite edge) / det
        const Point p[3] = {a, b, c};
        for (int v = 0; v < 3; ++v) {
            const Point q = p[(v + 1) % 3], r = p[(v + 2) % 3];
            grads[t][v] = {(q.y - r.y) / det, (r.x - q.x) / det};
        }
        for (int v = 0; v < 3; ++v) node_weights_[tri[v]] += areas[t] / 3.0;
    }
}

Mesh triangulate(const DomainMask &mask) {
    if (mask.empty()) throw ValidationError("triangulate: mask has no true cells");
    const int nx = mask.nx(), ny = mask.ny();
    const int lx = nx + 1;
    std::vector<int> node_of(static_cast<std::size_t>(lx) * (ny + 1), -1);

    auto touches_true = [&](int I, int J) {
        return mask.inside_or_false(I - 1, J - 1) || mask.inside_or_false(I, J - 1) ||
               mask.inside_or_false(I - 1, J) || mask.inside_or_false(I, J);
    };
    auto touches_false = [&](int I, int J) {
        return !mask.inside_or_false(I - 1, J - 1) || !mask.inside_or_false(I, J - 1) ||
               !mask.inside_or_false(I - 1, J) || !mask.inside_or_false(I, J);
    };

    Mesh m;
    m.lattice_nx = nx;
    m.lattice_ny = ny;
    m.box = mask.box();
    for (int J = 0; J <= ny; ++J)
        for (int I = 0; I <= nx; ++I) {
            if (!touches_true(I, J)) continue;
            node_of[static_cast<std::size_t>(J) * lx + I] = static_cast<int>(m.nodes.size());
            m.nodes.push_back({mask.box().x0 + I * mask.hx(), mask.box().y0 + J * mask.hy()});
            m.grid_id.push_back(J * lx + I);
            // the box frame is exterior, so frame nodes always touch a false cell
            m.dirichlet.push_back(touches_false(I, J) ? 1 : 0);
        }

    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            if (!mask.inside(i, j)) continue;
            const int n00 = node_of[static_cast<std::size_t>(j) * lx + i];
            const int n10 = node_of[static_cast<std::size_t>(j) * lx + i + 1];
            const int n01 = node_of[static_cast<std::size_t>(j + 1) * lx + i];
            const int n11 = node_of[static_cast<std::size_t>(j + 1) * lx + i + 1];
            m.triangles.push_back({n00, n10, n11});
            m.triangles.push_back({n00, n11, n01});
        }
    m.finalize();
    return m;
}

Point triangle_gradient(const Mesh &mesh, std::size_t t, const std::vector<double> &u) {
    const auto &tri = mesh.triangles[t];
    const auto &g = mesh.grads[t];
    Point out{0, 0};
    for (int v = 0; v < 3; ++v) {
        out.x += u[tri[v]] * g[v].x;
        out.y += u[tri[v]] * g[v].y;
    }
    return out;
}

std::vector<double> to_lattice(const Mesh &mesh, const std::vector<double> &u) {
    std::vector<double> out(static_cast<std::size_t>(mesh.lattice_nx + 1) * (mesh.lattice_ny + 1), 0.0);
    for (std::size_t n = 0; n < mesh.num_nodes(); ++n) out[mesh.grid_id[n]] = u[n];
    return out;
}

std::vector<double> from_lattice(const Mesh &mesh, const std::vector<double> &lattice) {
    std::vector<double> out(mesh.num_nodes());
    for (std::size_t n = 0; n < mesh.num_nodes(); ++n) out[n] = lattice[mesh.grid_id[n]];
    return out;
}

} // namespace philab
