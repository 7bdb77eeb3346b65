#pragma once
// Open subsets of a rectangular design box, rasterized on a cell grid.

#include "philab/young.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace philab {

struct Point {
    double x = 0;
    double y = 0;
};

struct Box {
    double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double diameter() const;
    bool operator==(const Box &) const = default;
};

/// Membership predicate for a planar set, composable with set operations.
class Shape {
  public:
    using Predicate = std::function<bool(Point)>;

    explicit Shape(Predicate contains) : contains_(std::make_shared<Predicate>(std::move(contains))) {}

    bool contains(Point p) const { return (*contains_)(p); }

    static Shape everything();
    static Shape nothing();
    /// Open disk |x - c| < r.
    static Shape disk(Point center, double radius);
    /// Closed disk |x - c| <= r.
    static Shape closed_disk(Point center, double radius);
    /// Open axis-aligned rectangle.
    static Shape rectangle(const Box &b);
    /// Open polygon; vertices in either orientation (even-odd rule).
    static Shape polygon(std::vector<Point> vertices);
    /// Closed slab of the given width around the segment [a, b].
    static Shape thick_segment(Point a, Point b, double width);

    Shape operator|(const Shape &o) const;
    Shape operator&(const Shape &o) const;
    Shape operator-(const Shape &o) const;

  private:
    std::shared_ptr<const Predicate> contains_;
};

/// Regular k-gon inscribed in the circle of the given center/radius, first vertex at angle `phase`.
std::vector<Point> regular_polygon(Point center, double radius, int k, double phase = 0.0);

/// Boolean cell grid over a box. Cell (i, j) covers
/// [x0 + i hx, x0 + (i+1) hx] x [y0 + j hy, y0 + (j+1) hy]; storage is row-major in j.
class DomainMask {
  public:
    DomainMask(int nx, int ny, const Box &box, bool fill = false);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    const Box &box() const { return box_; }
    double hx() const { return box_.width() / nx_; }
    double hy() const { return box_.height() / ny_; }
    double cell_area() const { return hx() * hy(); }
    /// Largest cell side.
    double h() const;

    bool inside(int i, int j) const { return cells_[index(i, j)] != 0; }
    /// Out-of-grid cells are treated as exterior.
    bool inside_or_false(int i, int j) const;
    void set(int i, int j, bool v) { cells_[index(i, j)] = v ? 1 : 0; }
    Point cell_center(int i, int j) const;
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }

    std::size_t count() const;
    bool empty() const { return count() == 0; }
    bool same_grid(const DomainMask &o) const;
    /// Every true cell of *this is true in `o`.
    bool subset_of(const DomainMask &o) const;

    DomainMask operator&(const DomainMask &o) const;
    DomainMask operator|(const DomainMask &o) const;
    DomainMask operator-(const DomainMask &o) const;
    bool operator==(const DomainMask &o) const;

    const std::vector<std::uint8_t> &cells() const { return cells_; }

  private:
    int nx_, ny_;
    Box box_;
    std::vector<std::uint8_t> cells_;
};

/// Cell is true iff its center lies in the shape.
DomainMask rasterize(const Shape &shape, int nx, int ny, const Box &box);

/// Distance from every cell center to the nearest cell center of the complement
/// (false cells plus a one-cell exterior frame around the box). Exact Euclidean
/// distance transform; zero on false cells.
std::vector<double> distance_to_complement(const DomainMask &mask);

/// Hausdorff distance between the complements of two masks on the same grid.
double hausdorff_complement_distance(const DomainMask &a, const DomainMask &b);

/// Largest cell-center distance from the domain to its complement; approximates the inradius.
double inradius(const DomainMask &mask);

/// Cells whose center is at distance >= delta from the complement (a compact core).
DomainMask erode(const DomainMask &mask, double delta);

/// Grow the mask by `cells` cells in the 8-neighbourhood sense.
DomainMask dilate(const DomainMask &mask, int cells);

struct GridSpec {
    int nx = 64;
    int ny = 64;
    Box box{-1, -1, 1, 1};
    bool operator==(const GridSpec &) const = default;
};

enum class SequenceKind { inscribed_polygon, perforated, vanishing_bump, shrinking_crack, custom_list };

std::string to_string(SequenceKind k);
SequenceKind parse_sequence_kind(const std::string &s);

/// Description of a family of domains indexed by k.
struct DomainSequenceSpec {
    SequenceKind kind = SequenceKind::inscribed_polygon;
    std::vector<int> k_values;
    GridSpec grid;
    Point center{0, 0}; ///< disk center (polygon, bump, crack)
    double radius = 1;  ///< disk radius (polygon, bump, crack)
    double phase = 0;   ///< polygon vertex phase / bump direction / crack angle (radians)
    std::vector<DomainMask> custom; ///< custom_list masks, one per k
};

/// One mask per k. Throws ValidationError for invalid specs or when a feature
/// (hole radius, bump radius, crack width) falls below one cell.
std::vector<DomainMask> generate_sequence(const DomainSequenceSpec &spec);

/// The limit domain of a generated sequence: the disk for polygons, bumps and
/// cracks (crack: disk minus the segment), the empty mask for perforations.
DomainMask sequence_limit(const DomainSequenceSpec &spec);

/// First index i such that `core` is contained in masks[j] for all j >= i;
/// masks.size() if none.
std::size_t first_containing_index(const std::vector<DomainMask> &masks, const DomainMask &core);

} // namespace philab
