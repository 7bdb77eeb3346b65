#include "philab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace philab {

double Box::diameter() const { return std::hypot(width(), height()); }

Shape Shape::everything() {
    return Shape([](Point) { return true; });
}

Shape Shape::nothing() {
    return Shape([](Point) { return false; });
}

Shape Shape::disk(Point c, double r) {
    return Shape([c, r](Point p) { return std::hypot(p.x - c.x, p.y - c.y) < r; });
}

Shape Shape::closed_disk(Point c, double r) {
    return Shape([c, r](Point p) { return std::hypot(p.x - c.x, p.y - c.y) <= r; });
}

Shape Shape::rectangle(const Box &b) {
    return Shape([b](Point p) { return p.x > b.x0 && p.x < b.x1 && p.y > b.y0 && p.y < b.y1; });
}

Shape Shape::polygon(std::vector<Point> v) {
    return Shape([v = std::move(v)](Point p) {
        // even-odd ray casting; points on edges count as outside
        bool in = false;
        const std::size_t n = v.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const Point a = v[i], b = v[j];
            const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
            const bool within_x = std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x);
            const bool within_y = std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
            if (cross == 0 && within_x && within_y) return false;
            if ((a.y > p.y) != (b.y > p.y)) {
                const double xi = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if (p.x < xi) in = !in;
            }
        }
        return in;
    });
}

Shape Shape::thick_segment(Point a, Point b, double width) {
    return Shape([a, b, width](Point p) {
        const double dx = b.x - a.x, dy = b.y - a.y;
        const double len2 = dx * dx + dy * dy;
        double t = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const double qx = a.x + t * dx - p.x, qy = a.y + t * dy - p.y;
        return std::hypot(qx, qy) <= 0.5 * width;
    });
}

Shape Shape::operator|(const Shape &o) const {
    auto a = contains_, b = o.contains_;
    return Shape([a, b](Point p) { return (*a)(p) || (*b)(p); });
}

Shape Shape::operator&(const Shape &o) const {
    auto a = contains_, b = o.contains_;
    return Shape([a, b](Point p) { return (*a)(p) && (*b)(p); });
}

Shape Shape::operator-(const Shape &o) const {
    auto a = contains_, b = o.contains_;
    return Shape([a, b](Point p) { return (*a)(p) && !(*b)(p); });
}

std::vector<Point> regular_polygon(Point c, double r, int k, double phase) {
    if (k < 3) throw ValidationError("regular_polygon: need at least 3 vertices");
    std::vector<Point> v(k);
    for (int j = 0; j < k; ++j) {
        const double th = phase + 2 * std::numbers::pi * j / k;
        v[j] = {c.x + r * std::cos(th), c.y + r * std::sin(th)};
    }
    return v;
}

DomainMask::DomainMask(int nx, int ny, const Box &box, bool fill)
    : nx_(nx), ny_(ny), box_(box), cells_(static_cast<std::size_t>(std::max(nx, 0)) * std::max(ny, 0), fill ? 1 : 0) {
    if (nx < 2 || ny < 2) throw ValidationError("DomainMask: resolution must be at least 2x2");
    if (!(box.x1 > box.x0 && box.y1 > box.y0)) throw ValidationError("DomainMask: degenerate box");
}

double DomainMask::h() const { return std::max(hx(), hy()); }

bool DomainMask::inside_or_false(int i, int j) const {
    if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return false;
    return inside(i, j);
}

Point DomainMask::cell_center(int i, int j) const {
    return {box_.x0 + (i + 0.5) * hx(), box_.y0 + (j + 0.5) * hy()};
}

std::size_t DomainMask::count() const { return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1)); }

bool DomainMask::same_grid(const DomainMask &o) const { return nx_ == o.nx_ && ny_ == o.ny_ && box_ == o.box_; }

bool DomainMask::subset_of(const DomainMask &o) const {
    if (!same_grid(o)) throw ValidationError("DomainMask: grid mismatch");
    for (std::size_t c = 0; c < cells_.size(); ++c)
        if (cells_[c] && !o.cells_[c]) return false;
    return true;
}

namespace {

DomainMask combine(const DomainMask &a, const DomainMask &b, auto op) {
    if (!a.same_grid(b)) throw ValidationError("DomainMask: grid mismatch");
    DomainMask out(a.nx(), a.ny(), a.box());
    for (int j = 0; j < a.ny(); ++j)
        for (int i = 0; i < a.nx(); ++i) out.set(i, j, op(a.inside(i, j), b.inside(i, j)));
    return out;
}

} // namespace

DomainMask DomainMask::operator&(const DomainMask &o) const {
    return combine(*this, o, [](bool x, bool y) { return x && y; });
}
DomainMask DomainMask::operator|(const DomainMask &o) const {
    return combine(*this, o, [](bool x, bool y) { return x || y; });
}
DomainMask DomainMask::operator-(const DomainMask &o) const {
    return combine(*this, o, [](bool x, bool y) { return x && !y; });
}
bool DomainMask::operator==(const DomainMask &o) const { return same_grid(o) && cells_ == o.cells_; }

DomainMask rasterize(const Shape &shape, int nx, int ny, const Box &box) {
    DomainMask m(nx, ny, box);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) m.set(i, j, shape.contains(m.cell_center(i, j)));
    return m;
}

DomainMask erode(const DomainMask &mask, double delta) {
    const auto dist = distance_to_complement(mask);
    DomainMask out(mask.nx(), mask.ny(), mask.box());
    for (int j = 0; j < mask.ny(); ++j)
        for (int i = 0; i < mask.nx(); ++i) out.set(i, j, mask.inside(i, j) && dist[mask.index(i, j)] >= delta);
    return out;
}

DomainMask dilate(const DomainMask &mask, int cells) {
    DomainMask out = mask;
    for (int step = 0; step < cells; ++step) {
        DomainMask next = out;
        for (int j = 0; j < mask.ny(); ++j)
            for (int i = 0; i < mask.nx(); ++i) {
                if (out.inside(i, j)) continue;
                bool touch = false;
                for (int dj = -1; dj <= 1 && !touch; ++dj)
                    for (int di = -1; di <= 1 && !touch; ++di) touch = out.inside_or_false(i + di, j + dj);
                if (touch) next.set(i, j, true);
            }
        out = std::move(next);
    }
    return out;
}

std::string to_string(SequenceKind k) {
    switch (k) {
    case SequenceKind::inscribed_polygon: return "inscribed_polygon";
    case SequenceKind::perforated: return "perforated";
    case SequenceKind::vanishing_bump: return "vanishing_bump";
    case SequenceKind::shrinking_crack: return "shrinking_crack";
    case SequenceKind::custom_list: return "custom_list";
    }
    return "?";
}

SequenceKind parse_sequence_kind(const std::string &s) {
    for (auto k : {SequenceKind::inscribed_polygon, SequenceKind::perforated, SequenceKind::vanishing_bump,
                   SequenceKind::shrinking_crack, SequenceKind::custom_list})
        if (to_string(k) == s) return k;
    throw ValidationError("unknown sequence kind '" + s + "'");
}

namespace {

void require_resolved(double feature, double h, const std::string &what) {
    if (!(feature > h))
        throw ValidationError(what + " (" + std::to_string(feature) + ") does not exceed one cell (" +
                              std::to_string(h) + "); use a finer grid");
}

Point bump_center(const DomainSequenceSpec &s, double r) {
    const double dist = s.radius + r;
    return {s.center.x + dist * std::cos(s.phase), s.center.y + dist * std::sin(s.phase)};
}

Shape crack_slit(const DomainSequenceSpec &s, double width) {
    // radial slit from the center through the boundary circle
    const Point tip{s.center.x + 1.5 * s.radius * std::cos(s.phase), s.center.y + 1.5 * s.radius * std::sin(s.phase)};
    return Shape::thick_segment(s.center, tip, width);
}

} // namespace

std::vector<DomainMask> generate_sequence(const DomainSequenceSpec &spec) {
    if (spec.k_values.empty()) throw ValidationError("generate_sequence: no k values");
    for (std::size_t i = 1; i < spec.k_values.size(); ++i)
        if (spec.k_values[i] <= spec.k_values[i - 1])
            throw ValidationError("generate_sequence: k values must be strictly increasing");

    const auto &g = spec.grid;
    const DomainMask probe(g.nx, g.ny, g.box);
    const double h = probe.h();
    std::vector<DomainMask> out;
    out.reserve(spec.k_values.size());

    for (std::size_t idx = 0; idx < spec.k_values.size(); ++idx) {
        const int k = spec.k_values[idx];
        switch (spec.kind) {
        case SequenceKind::inscribed_polygon: {
            if (k < 3) throw ValidationError("inscribed_polygon: k must be >= 3");
            out.push_back(rasterize(Shape::polygon(regular_polygon(spec.center, spec.radius, k, spec.phase)), g.nx,
                                    g.ny, g.box));
            break;
        }
        case SequenceKind::perforated: {
            if (k < 2) throw ValidationError("perforated: k must be >= 2");
            const double L = g.box.width();
            const double r = L / (double(k) * k);
            require_resolved(r, h, "perforation radius");
            // closed balls at the interior lattice points (i/k, j/k), i, j = 1..k-1
            const Box b = g.box;
            Shape holes([b, k, r](Point p) {
                const double sx = b.width() / k, sy = b.height() / k;
                const int i = std::clamp(static_cast<int>(std::lround((p.x - b.x0) / sx)), 1, k - 1);
                const int j = std::clamp(static_cast<int>(std::lround((p.y - b.y0) / sy)), 1, k - 1);
                return std::hypot(p.x - (b.x0 + i * sx), p.y - (b.y0 + j * sy)) <= r;
            });
            out.push_back(rasterize(Shape::everything() - holes, g.nx, g.ny, g.box));
            break;
        }
        case SequenceKind::vanishing_bump: {
            if (k < 1) throw ValidationError("vanishing_bump: k must be >= 1");
            const double r = 1.0 / k;
            require_resolved(r, h, "bump radius");
            const Point c = bump_center(spec, r);
            if (c.x - r < g.box.x0 || c.x + r > g.box.x1 || c.y - r < g.box.y0 || c.y + r > g.box.y1)
                throw ValidationError("vanishing_bump: bump leaves the design box");
            out.push_back(rasterize(Shape::disk(spec.center, spec.radius) | Shape::disk(c, r), g.nx, g.ny, g.box));
            break;
        }
        case SequenceKind::shrinking_crack: {
            if (k < 1) throw ValidationError("shrinking_crack: k must be >= 1");
            const double w = 1.0 / k;
            require_resolved(w, h, "crack width");
            out.push_back(rasterize(Shape::disk(spec.center, spec.radius) - crack_slit(spec, w), g.nx, g.ny, g.box));
            break;
        }
        case SequenceKind::custom_list: {
            if (spec.custom.size() != spec.k_values.size())
                throw ValidationError("custom_list: one mask per k value required");
            const auto &m = spec.custom[idx];
            if (m.nx() != g.nx || m.ny() != g.ny || !(m.box() == g.box))
                throw ValidationError("custom_list: mask grid differs from the sequence grid");
            out.push_back(m);
            break;
        }
        }
    }
    return out;
}

DomainMask sequence_limit(const DomainSequenceSpec &spec) {
    const auto &g = spec.grid;
    switch (spec.kind) {
    case SequenceKind::perforated:
        return DomainMask(g.nx, g.ny, g.box, false);
    case SequenceKind::shrinking_crack:
        return rasterize(Shape::disk(spec.center, spec.radius) - crack_slit(spec, 0.0), g.nx, g.ny, g.box);
    case SequenceKind::custom_list:
        if (spec.custom.empty()) throw ValidationError("custom_list: no masks");
        return spec.custom.back();
    default:
        return rasterize(Shape::disk(spec.center, spec.radius), g.nx, g.ny, g.box);
    }
}

std::size_t first_containing_index(const std::vector<DomainMask> &masks, const DomainMask &core) {
    std::size_t first = masks.size();
    for (std::size_t i = masks.size(); i-- > 0;) {
        if (!core.subset_of(masks[i])) break;
        first = i;
    }
    return first;
}

} // namespace philab
