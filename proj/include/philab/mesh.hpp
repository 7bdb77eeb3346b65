#pragma once
// P1 triangulation of a rasterized domain.

#include "philab/geometry.hpp"

#include <array>
#include <vector>

namespace philab {

/// Triangle mesh built from the true cells of a DomainMask. Nodes are cell
/// corners; node (I, J) of the (nx+1) x (ny+1) corner lattice has grid id
/// J * (nx + 1) + I. Every cell is split along its lower-left/upper-right
/// diagonal into two counter-clockwise right triangles.
class Mesh {
  public:
    std::vector<Point> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::uint8_t> dirichlet;
    std::vector<double> areas;
    /// Corner-lattice id of each node.
    std::vector<int> grid_id;
    /// Barycentric gradients per triangle: grads[t][v] = grad of the hat function of vertex v.
    std::vector<std::array<Point, 3>> grads;

    int lattice_nx = 0; ///< cells in x of the source grid
    int lattice_ny = 0;
    Box box;

    std::size_t num_nodes() const { return nodes.size(); }
    std::size_t num_triangles() const { return triangles.size(); }
    std::size_t num_free() const;

    /// Lumped (vertex-quadrature) weights: sum over incident triangles of area/3.
    const std::vector<double> &node_weights() const { return node_weights_; }

    /// Recompute areas, gradients and node weights from nodes/triangles.
    void finalize();

  private:
    std::vector<double> node_weights_;
};

/// Throws ValidationError for an empty mask.
Mesh triangulate(const DomainMask &mask);

/// Per-triangle constant gradient of a nodal field.
Point triangle_gradient(const Mesh &mesh, std::size_t t, const std::vector<double> &u);

/// Scatter nodal values to the full corner lattice of the source grid (zero elsewhere).
std::vector<double> to_lattice(const Mesh &mesh, const std::vector<double> &u);

/// Gather lattice values onto the mesh nodes.
std::vector<double> from_lattice(const Mesh &mesh, const std::vector<double> &lattice);

} // namespace philab
