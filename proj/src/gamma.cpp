#include "philab/gamma.hpp"

#include "philab/orlicz.hpp"

#include <algorithm>
#include <cmath>

namespace philab {

namespace {

// Function and gradient-magnitude samples of a lattice field on the box mesh.
std::pair<WeightedSamples, WeightedSamples> samples(const Mesh &box, const std::vector<double> &lattice) {
    const auto u = from_lattice(box, lattice);
    std::vector<double> gv(box.num_triangles());
    for (std::size_t t = 0; t < box.num_triangles(); ++t) {
        const Point g = triangle_gradient(box, t, u);
        gv[t] = std::hypot(g.x, g.y);
    }
    return {WeightedSamples(u, box.node_weights()), WeightedSamples(std::move(gv), box.areas)};
}

double l2_norm(const Mesh &mesh, const std::vector<double> &u) {
    const auto &w = mesh.node_weights();
    double s = 0;
    for (std::size_t n = 0; n < u.size(); ++n) s += w[n] * u[n] * u[n];
    return std::sqrt(s);
}

} // namespace

std::string to_string(Theorem t) {
    switch (t) {
    case Theorem::main: return "main";
    case Theorem::main_2: return "main_2";
    case Theorem::none: return "none";
    }
    return "none";
}

std::string to_string(TrendKind t) {
    switch (t) {
    case TrendKind::zero: return "zero";
    case TrendKind::decaying: return "decaying";
    case TrendKind::persistent: return "persistent";
    }
    return "persistent";
}

GammaReport run_experiment(const DomainSequenceSpec &seq, const DomainMask &limit, const YoungFunction &y,
                           const SourceTerm &f, const ExperimentOptions &opts, GammaFields *fields) {
    const auto masks = generate_sequence(seq);
    if (limit.nx() != seq.grid.nx || limit.ny() != seq.grid.ny || !(limit.box() == seq.grid.box))
        throw ValidationError("run_experiment: limit mask is not on the sequence grid");

    GammaReport rep;
    rep.young = y.spec();
    rep.source = f.spec();
    rep.sequence = to_string(seq.kind);
    rep.grid = seq.grid;
    rep.dimension = opts.dimension;
    rep.morrey = morrey_integral(y, opts.dimension).verdict;
    {
        const auto g = verify_growth(y, log_grid(1e-3, 1e3, 241));
        rep.measured_p_minus = g.p_minus;
        rep.measured_p_plus = g.p_plus;
    }

    const DomainMask full(seq.grid.nx, seq.grid.ny, seq.grid.box, true);
    auto box_mesh = std::make_shared<const Mesh>(triangulate(full));
    const std::size_t lattice_size = static_cast<std::size_t>(seq.grid.nx + 1) * (seq.grid.ny + 1);

    auto solve_on = [&](const DomainMask &m, int k) {
        auto mesh = std::make_shared<const Mesh>(triangulate(m));
        const auto fv = sample_nodes(*mesh, f);
        try {
            auto sol = solve(y, mesh, fv, opts.solve);
            return std::make_pair(std::move(sol), mesh);
        } catch (const ConvergenceError &e) {
            throw ExperimentError(std::string("run_experiment: solve failed: ") + e.what(), rep, k);
        }
    };

    std::vector<double> u_lim(lattice_size, 0.0);
    if (!limit.empty()) {
        auto [sol, mesh] = solve_on(limit, 0);
        u_lim = to_lattice(*mesh, sol.field.values);
        rep.limit_energy = sol.report.energy;
        rep.limit_l2_norm = l2_norm(*mesh, sol.field.values);
        const auto [us, gs] = samples(*box_mesh, u_lim);
        rep.limit_sobolev_norm = sobolev_norm(y, us, gs);
        rep.limit_grad_modular = modular(y, gs);
    }
    if (fields) {
        fields->box_mesh = box_mesh;
        fields->limit = u_lim;
        fields->per_k.clear();
    }

    for (std::size_t i = 0; i < masks.size(); ++i) {
        const int k = seq.k_values[i];
        const DomainMask &m = masks[i];
        GammaRow row;
        row.k = k;
        row.d_hc = hausdorff_complement_distance(m, limit);
        if (opts.compute_capacity) row.cap_diff = hypothesis_capacity(m, limit, full, y, opts.solve);
        std::vector<double> u_k(lattice_size, 0.0);
        if (!m.empty()) {
            auto [sol, mesh] = solve_on(m, k);
            u_k = to_lattice(*mesh, sol.field.values);
            row.energy = sol.report.energy;
            row.l2_norm = l2_norm(*mesh, sol.field.values);
        }
        std::vector<double> diff(lattice_size);
        for (std::size_t n = 0; n < lattice_size; ++n) diff[n] = u_k[n] - u_lim[n];
        const auto [us, gs] = samples(*box_mesh, diff);
        row.sobolev_dist = sobolev_norm(y, us, gs);
        row.grad_modular_gap = modular(y, gs);
        rep.rows.push_back(row);
        if (fields) fields->per_k.push_back(std::move(u_k));
    }
    return rep;
}

Trend classify_trend(const std::vector<double> &values, double h) {
    Trend t;
    if (values.empty()) return t;
    t.first = values.front();
    t.last = values.back();
    if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; }))
        t.kind = TrendKind::zero;
    else if (t.last < t.first / 4 && t.last < 4 * h)
        t.kind = TrendKind::decaying;
    return t;
}

HypothesisVerdict classify_hypotheses(const std::vector<double> &d_hc, const std::vector<double> &cap, double h,
                                      const YoungFunction &y, int n) {
    HypothesisVerdict v;
    v.hc = classify_trend(d_hc, h);
    v.hc_converges = v.hc.converges();
    v.cap = classify_trend(cap, h);
    v.cap_vanishes = v.cap.kind == TrendKind::decaying;
    v.morrey_finite = morrey_integral(y, n).verdict == IntegralVerdict::finite;
    v.p_minus_ok = y.p_minus() > 1;
    if (v.hc_converges && v.p_minus_ok) {
        if (v.cap_vanishes)
            v.theorem_applicable = Theorem::main;
        else if (v.morrey_finite)
            v.theorem_applicable = Theorem::main_2;
        else if (v.cap.kind == TrendKind::zero)
            v.theorem_applicable = Theorem::main;
    }
    return v;
}

HypothesisVerdict check_hypotheses(const std::vector<DomainMask> &masks, const DomainMask &limit,
                                   const DomainMask &box, const YoungFunction &y, int n, const SolveOptions &opts) {
    if (n < 1) throw ValidationError("check_hypotheses: dimension must be >= 1");
    std::vector<double> hc, cap;
    for (const auto &m : masks) {
        if (!m.same_grid(limit) || !m.same_grid(box)) throw ValidationError("check_hypotheses: grid mismatch");
        hc.push_back(hausdorff_complement_distance(m, limit));
        cap.push_back(hypothesis_capacity(m, limit, box, y, opts));
    }
    return classify_hypotheses(hc, cap, limit.h(), y, n);
}

HypothesisVerdict check_hypotheses(const GammaReport &r, const YoungFunction &y) {
    std::vector<double> hc, cap;
    for (const auto &row : r.rows) {
        hc.push_back(row.d_hc);
        cap.push_back(row.cap_diff);
    }
    const double h = std::max(r.grid.box.width() / r.grid.nx, r.grid.box.height() / r.grid.ny);
    return classify_hypotheses(hc, cap, h, y, r.dimension);
}

bool sobolev_converges(const GammaReport &r) {
    if (r.rows.empty()) return true;
    const double last = r.rows.back().sobolev_dist;
    if (r.limit_sobolev_norm == 0) return last <= 1e-8;
    return last <= 0.05 * r.limit_sobolev_norm;
}

TorsionCheck reduction_to_torsion_check(const DomainSequenceSpec &seq, const DomainMask &limit,
                                        const YoungFunction &y, const SourceTerm &f,
                                        const ExperimentOptions &opts) {
    ExperimentOptions o = opts;
    o.compute_capacity = false;
    const auto a = run_experiment(seq, limit, y, f, o);
    const auto b = run_experiment(seq, limit, y, SourceTerm::constant(1.0), o);

    auto normalized = [](const GammaReport &r) {
        double scale = r.limit_sobolev_norm;
        if (scale == 0 && !r.rows.empty()) scale = r.rows.front().sobolev_dist;
        std::vector<double> out;
        for (const auto &row : r.rows) out.push_back(scale > 0 ? row.sobolev_dist / scale : 0.0);
        return out;
    };
    TorsionCheck c;
    c.converges_f = sobolev_converges(a);
    c.converges_one = sobolev_converges(b);
    c.agree = c.converges_f == c.converges_one;
    const auto na = normalized(a), nb = normalized(b);
    for (std::size_t i = 0; i < na.size(); ++i) c.max_deviation = std::max(c.max_deviation, std::abs(na[i] - nb[i]));
    return c;
}

} // namespace philab
