// Exact Euclidean distance transforms on cell grids (lower envelope of parabolas).

#include "philab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace philab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// d[q] = min_p ((q - p) s)^2 + f[p], in place, for samples spaced s apart.
void squared_distance_1d(std::vector<double> &f, double s, std::vector<int> &v, std::vector<double> &z,
                         std::vector<double> &out) {
    const int n = static_cast<int>(f.size());
    v.assign(n, 0);
    z.assign(n + 1, 0);
    out.assign(n, kInf);
    int k = -1;
    auto pos = [s](int q) { return q * s; };
    for (int q = 0; q < n; ++q) {
        if (f[q] == kInf) continue;
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -kInf;
            z[1] = kInf;
            continue;
        }
        double x;
        while (true) {
            const int p = v[k];
            x = ((f[q] + pos(q) * pos(q)) - (f[p] + pos(p) * pos(p))) / (2 * (pos(q) - pos(p)));
            if (x <= z[k] && k > 0)
                --k;
            else
                break;
        }
        if (x <= z[k]) {
            // k == 0 and the new parabola dominates everywhere
            v[0] = q;
            z[0] = -kInf;
            z[1] = kInf;
            continue;
        }
        ++k;
        v[k] = q;
        z[k] = x;
        z[k + 1] = kInf;
    }
    if (k < 0) return;
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[j + 1] < pos(q)) ++j;
        const double d = pos(q) - pos(v[j]);
        out[q] = d * d + f[v[j]];
    }
    f.swap(out);
}

// Squared distance to the complement on the frame-extended grid of size (nx+2) x (ny+2).
std::vector<double> extended_squared_distance(const DomainMask &m) {
    const int ex = m.nx() + 2, ey = m.ny() + 2;
    std::vector<double> g(static_cast<std::size_t>(ex) * ey);
    for (int j = 0; j < ey; ++j)
        for (int i = 0; i < ex; ++i) g[static_cast<std::size_t>(j) * ex + i] = m.inside_or_false(i - 1, j - 1) ? kInf : 0.0;

    std::vector<double> line, out, z;
    std::vector<int> v;
    for (int j = 0; j < ey; ++j) {
        line.assign(g.begin() + static_cast<std::ptrdiff_t>(j) * ex, g.begin() + static_cast<std::ptrdiff_t>(j + 1) * ex);
        squared_distance_1d(line, m.hx(), v, z, out);
        std::copy(line.begin(), line.end(), g.begin() + static_cast<std::ptrdiff_t>(j) * ex);
    }
    line.resize(ey);
    for (int i = 0; i < ex; ++i) {
        for (int j = 0; j < ey; ++j) line[j] = g[static_cast<std::size_t>(j) * ex + i];
        squared_distance_1d(line, m.hy(), v, z, out);
        for (int j = 0; j < ey; ++j) g[static_cast<std::size_t>(j) * ex + i] = line[j];
    }
    return g;
}

double directed(const DomainMask &from_complement_of, const std::vector<double> &sq_to, int ex) {
    double worst = 0;
    for (int j = 0; j < from_complement_of.ny(); ++j)
        for (int i = 0; i < from_complement_of.nx(); ++i)
            if (!from_complement_of.inside(i, j))
                worst = std::max(worst, sq_to[static_cast<std::size_t>(j + 1) * ex + (i + 1)]);
    return std::sqrt(worst);
}

} // namespace

std::vector<double> distance_to_complement(const DomainMask &mask) {
    const auto sq = extended_squared_distance(mask);
    const int ex = mask.nx() + 2;
    std::vector<double> out(static_cast<std::size_t>(mask.nx()) * mask.ny());
    for (int j = 0; j < mask.ny(); ++j)
        for (int i = 0; i < mask.nx(); ++i)
            out[mask.index(i, j)] = std::sqrt(sq[static_cast<std::size_t>(j + 1) * ex + (i + 1)]);
    return out;
}

double hausdorff_complement_distance(const DomainMask &a, const DomainMask &b) {
    if (!a.same_grid(b)) throw ValidationError("hausdorff_complement_distance: grid mismatch");
    const int ex = a.nx() + 2;
    const auto sa = extended_squared_distance(a);
    const auto sb = extended_squared_distance(b);
    // frame cells belong to both complements and contribute zero
    return std::max(directed(a, sb, ex), directed(b, sa, ex));
}

double inradius(const DomainMask &mask) {
    const auto d = distance_to_complement(mask);
    return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

} // namespace philab
