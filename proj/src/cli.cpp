#include "philab/cli.hpp"

#include "philab/capacity.hpp"
#include "philab/eigen.hpp"
#include "philab/gamma.hpp"
#include "philab/io.hpp"
#include "philab/orlicz.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace philab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<double> numbers(const std::string &body, const std::string &what) {
    std::vector<double> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != item.size() || !std::isfinite(v))
            throw ValidationError(what + ": bad number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

fs::path output_dir(const std::string &flag) {
    fs::path dir = flag;
    if (dir.empty()) {
        const char *env = std::getenv("PHILAB_OUT");
        dir = env && *env ? env : ".";
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir)) throw ValidationError("output directory not writable: " + dir.string());
    return dir;
}

std::ofstream open_out(const fs::path &p) {
    std::ofstream os(p);
    if (!os) throw ValidationError("cannot write " + p.string());
    return os;
}

struct GridFlags {
    int n = 64;
    std::string box = "-1,-1,1,1";
    GridSpec grid() const {
        if (n < 2) throw ValidationError("--n must be >= 2");
        return {n, n, parse_box(box)};
    }
};

void add_grid(CLI::App *sub, GridFlags &g) {
    sub->add_option("--n", g.n, "cells per side")->capture_default_str();
    sub->add_option("--box", g.box, "design box x0,y0,x1,y1")->capture_default_str();
}

struct SolveFlags {
    double tol_energy = 1e-10;
    double tol_residual = 1e-8;
    int max_iterations = 200;
    double eps = -1;
    SolveOptions options() const {
        SolveOptions o;
        o.tol_energy = tol_energy;
        o.tol_residual = tol_residual;
        o.max_iterations = max_iterations;
        if (eps >= 0) o.grad_regularization = eps;
        return o;
    }
};

void add_solve_flags(CLI::App *sub, SolveFlags &s) {
    sub->add_option("--tol-energy", s.tol_energy)->capture_default_str();
    sub->add_option("--tol-residual", s.tol_residual)->capture_default_str();
    sub->add_option("--max-iterations", s.max_iterations)->capture_default_str();
    sub->add_option("--eps", s.eps, "gradient regularization (default 1e-8 * box diameter)");
}

// Deterministic property samples over a log grid; counts violations beyond 1e-6 relative.
KeyValues property_samples(const YoungFunction &y, const std::vector<double> &grid) {
    const double pm = y.p_minus(), pp = y.p_plus();
    const double slack = 1e-6;
    int young = 0, phi1 = 0, phi2 = 0, conjugate = 0, curvature = 0, checked = 0;
    for (double a : grid)
        for (std::size_t j = 0; j < grid.size(); j += 7) {
            const double b = grid[j];
            ++checked;
            if (a * b > (y.Phi(a) + y.Phi_star(b)) * (1 + slack)) ++young;
            const double lo = std::min(std::pow(a, pm + 1), std::pow(a, pp + 1));
            const double hi = std::max(std::pow(a, pm + 1), std::pow(a, pp + 1));
            const double pab = y.Phi(a * b), pb = y.Phi(b);
            if (pab < lo * pb * (1 - slack) || pab > hi * pb * (1 + slack)) ++phi1;
            if (y.Phi(a + b) > std::pow(2.0, pp + 1) * (y.Phi(a) + pb) * (1 + slack)) ++phi2;
        }
    for (double t : grid) {
        if (y.Phi_star(y.phi(t)) > (pp + 1) * y.Phi(t) * (1 + slack)) ++conjugate;
        if (t * t * y.phi_prime(t) < pm * (pm + 1) * y.Phi(t) * (1 - slack)) ++curvature;
    }
    return {{"pair_samples", std::to_string(checked)},
            {"point_samples", std::to_string(grid.size())},
            {"young_inequality_violations", std::to_string(young)},
            {"phi1_violations", std::to_string(phi1)},
            {"phi2_violations", std::to_string(phi2)},
            {"conjugate_bound_violations", std::to_string(conjugate)},
            {"curvature_bound_violations", std::to_string(curvature)}};
}

int cmd_young_check(const std::string &spec, double lo, double hi, int samples, std::ostream &out) {
    const auto y = parse_young(spec);
    if (!(lo > 0) || !(hi > lo) || samples < 2) throw ValidationError("young-check: bad sample grid");
    const auto grid = log_grid(lo, hi, static_cast<std::size_t>(samples));
    const auto g = verify_growth(y, grid);
    KeyValues kv{{"young", y.spec()},
                 {"declared_p_minus", format_double(y.p_minus())},
                 {"declared_p_plus", format_double(y.p_plus())},
                 {"p_minus", format_double(g.p_minus)},
                 {"p_plus", format_double(g.p_plus)},
                 {"lprime_minus", format_double(g.lprime_minus)},
                 {"lprime_plus", format_double(g.lprime_plus)},
                 {"phi_convex", g.phi_convex ? "1" : "0"},
                 {"Phi_convex", g.Phi_convex ? "1" : "0"},
                 {"Phi_tilde_convex", g.Phi_tilde_convex ? "1" : "0"},
                 {"p_minus_violated", g.p_minus_violated ? "1" : "0"},
                 {"within_declared", g.within_declared ? "1" : "0"}};
    for (auto &e : property_samples(y, log_grid(lo, hi, std::min<std::size_t>(grid.size(), 121)))) kv.push_back(e);
    write_key_values(out, kv);
    return 0;
}

struct Inputs {
    std::string young = "power:3";
    std::string domain = "disk";
    std::string f = "const:1";
    std::string out;
};

int cmd_solve(const Inputs &in, const GridFlags &gf, const SolveFlags &sf, std::ostream &out) {
    const auto y = parse_young(in.young);
    const auto f = SourceTerm::parse(in.f);
    const auto grid = gf.grid();
    const auto dir = output_dir(in.out);
    auto mesh = std::make_shared<const Mesh>(triangulate(parse_domain(in.domain, grid)));
    const auto sol = solve(y, mesh, sample_nodes(*mesh, f), sf.options());
    auto fo = open_out(dir / "solution.field");
    write_field(fo, *mesh, sol.field.values);
    auto kv = to_key_values(sol.report);
    auto ro = open_out(dir / "solve_report.txt");
    write_key_values(ro, kv);
    write_key_values(out, kv);
    return 0;
}

int cmd_capacity(const Inputs &in, const std::string &obstacle, const std::string &environment,
                 const std::string &mode, const GridFlags &gf, const SolveFlags &sf, std::ostream &out) {
    const auto y = parse_young(in.young);
    const auto grid = gf.grid();
    CapacityProblem p{parse_domain(obstacle, grid), parse_domain(environment, grid), y, CapacityMode::relative};
    CapacityResult r;
    if (mode == "relative") {
        r = relative_capacity(p, sf.options());
    } else if (mode == "sobolev") {
        p.mode = CapacityMode::sobolev;
        r = sobolev_capacity(p, sf.options());
    } else {
        throw ValidationError("capacity: --mode must be relative or sobolev");
    }
    const auto line = capacity_line(r);
    out << line << '\n';
    if (!in.out.empty() || std::getenv("PHILAB_OUT")) {
        auto os = open_out(output_dir(in.out) / "capacity.txt");
        os << line << '\n';
    }
    return 0;
}

int cmd_hausdorff(const std::string &a, const std::string &b, const GridFlags &gf, std::ostream &out) {
    const auto grid = gf.grid();
    out << "d_hc " << format_double(hausdorff_complement_distance(parse_domain(a, grid), parse_domain(b, grid)))
        << '\n';
    return 0;
}

int cmd_eigen(const Inputs &in, double mu, const GridFlags &gf, std::ostream &out) {
    const auto y = parse_young(in.young);
    auto mesh = std::make_shared<const Mesh>(triangulate(parse_domain(in.domain, gf.grid())));
    const auto r = estimate_lambda_variational(mesh, y, mu);
    const auto dir = output_dir(in.out);
    auto fo = open_out(dir / "eigenfield.field");
    write_field(fo, *mesh, r.eigenfield.values);
    KeyValues kv{{"lambda", format_double(r.lambda)}, {"mu", format_double(mu)},
                 {"iterations", std::to_string(r.iterations)}};
    auto ro = open_out(dir / "eigen_report.txt");
    write_key_values(ro, kv);
    write_key_values(out, kv);
    return 0;
}

template <class T>
T get_or(const json &j, const char *key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

int cmd_gamma(const std::string &config_path, std::string out_flag, std::ostream &out) {
    std::ifstream is(config_path);
    if (!is) throw ValidationError("gamma: cannot read config " + config_path);
    json c;
    try {
        c = json::parse(is);
    } catch (const json::exception &e) {
        throw ValidationError(std::string("gamma: bad config: ") + e.what());
    }
    try {
        const auto y = parse_young(get_or<std::string>(c, "young", "power:3"));
        const auto f = SourceTerm::parse(get_or<std::string>(c, "f", "const:1"));
        DomainSequenceSpec seq;
        const json s = c.at("sequence");
        seq.kind = parse_sequence_kind(s.at("kind").get<std::string>());
        seq.k_values = s.at("k").get<std::vector<int>>();
        const int n = get_or<int>(c, "resolution", 64);
        if (n < 2) throw ValidationError("gamma: resolution must be >= 2");
        seq.grid = {n, n, parse_box(get_or<std::string>(c, "box", "-1,-1,1,1"))};
        if (s.contains("center")) {
            const auto cc = s.at("center").get<std::vector<double>>();
            if (cc.size() != 2) throw ValidationError("gamma: center needs two coordinates");
            seq.center = {cc[0], cc[1]};
        }
        seq.radius = get_or<double>(s, "radius", 1.0);
        seq.phase = get_or<double>(s, "phase", 0.0);
        if (seq.kind == SequenceKind::custom_list)
            for (const auto &p : s.at("masks").get<std::vector<std::string>>()) seq.custom.push_back(load_mask(p));

        ExperimentOptions o;
        if (c.contains("tolerances")) {
            const json &t = c.at("tolerances");
            o.solve.tol_energy = get_or<double>(t, "energy", o.solve.tol_energy);
            o.solve.tol_residual = get_or<double>(t, "residual", o.solve.tol_residual);
            o.solve.max_iterations = get_or<int>(t, "max_iterations", o.solve.max_iterations);
        }
        o.dimension = get_or<int>(c, "dimension", 2);
        o.compute_capacity = get_or<bool>(c, "compute_capacity", true);
        const DomainMask limit = c.contains("limit") ? parse_domain(c.at("limit").get<std::string>(), seq.grid)
                                                     : sequence_limit(seq);
        if (out_flag.empty()) out_flag = get_or<std::string>(c, "output", "");
        const auto dir = output_dir(out_flag);
        const bool dump = get_or<bool>(c, "dump_fields", false);

        GammaFields fields;
        const auto rep = run_experiment(seq, limit, y, f, o, dump ? &fields : nullptr);
        auto csv = open_out(dir / "gamma.csv");
        write_gamma_csv(csv, rep);
        if (dump) {
            const Mesh &bm = *fields.box_mesh;
            auto lo = open_out(dir / "limit.field");
            write_field(lo, bm, from_lattice(bm, fields.limit));
            for (std::size_t i = 0; i < fields.per_k.size(); ++i) {
                auto fo = open_out(dir / (to_string(seq.kind) + "_" + std::to_string(seq.k_values[i]) + ".field"));
                write_field(fo, bm, from_lattice(bm, fields.per_k[i]));
            }
        }
        const auto v = check_hypotheses(rep, y);
        write_gamma_csv(out, rep);
        write_key_values(out, {{"hc_trend", to_string(v.hc.kind)},
                               {"cap_trend", to_string(v.cap.kind)},
                               {"morrey_finite", v.morrey_finite ? "1" : "0"},
                               {"p_minus_ok", v.p_minus_ok ? "1" : "0"},
                               {"theorem_applicable", to_string(v.theorem_applicable)}});
    } catch (const json::exception &e) {
        throw ValidationError(std::string("gamma: bad config: ") + e.what());
    }
    return 0;
}

} // namespace

Box parse_box(const std::string &text) {
    const auto v = numbers(text, "box");
    if (v.size() != 4 || !(v[2] > v[0]) || !(v[3] > v[1])) throw ValidationError("box must be x0,y0,x1,y1 with x1>x0, y1>y0");
    return {v[0], v[1], v[2], v[3]};
}

DomainMask parse_domain(const std::string &text, const GridSpec &g) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "mask") {
        auto m = load_mask(body);
        if (m.nx() != g.nx || m.ny() != g.ny || !(m.box() == g.box))
            throw ValidationError("mask file " + body + " does not match the requested grid");
        return m;
    }
    const auto v = body.empty() ? std::vector<double>{} : numbers(body, "domain " + kind);
    if (kind == "square") {
        if (!v.empty()) throw ValidationError("square takes no parameters");
        return DomainMask(g.nx, g.ny, g.box, true);
    }
    if (kind == "disk") {
        if (!v.empty() && v.size() != 3) throw ValidationError("disk takes cx,cy,r");
        const Point c = v.empty() ? Point{0, 0} : Point{v[0], v[1]};
        const double r = v.empty() ? 1.0 : v[2];
        if (!(r > 0)) throw ValidationError("disk radius must be positive");
        return rasterize(Shape::disk(c, r), g.nx, g.ny, g.box);
    }
    if (kind == "polygon") {
        if (v.empty() || v.size() > 2 || v[0] != std::floor(v[0]) || v[0] < 3)
            throw ValidationError("polygon takes k[,r] with integer k >= 3");
        const double r = v.size() == 2 ? v[1] : 1.0;
        return rasterize(Shape::polygon(regular_polygon({0, 0}, r, static_cast<int>(v[0]))), g.nx, g.ny, g.box);
    }
    if (kind == "annulus") {
        if (v.size() != 2 || !(v[0] > 0) || !(v[1] > v[0])) throw ValidationError("annulus takes r_in,r_out");
        return rasterize(Shape::disk({0, 0}, v[1]) - Shape::closed_disk({0, 0}, v[0]), g.nx, g.ny, g.box);
    }
    throw ValidationError("unknown domain '" + text + "'");
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"philab: phi-Laplacian laboratory", "philab"};
    app.require_subcommand(1);

    Inputs in;
    GridFlags gf;
    SolveFlags sf;

    std::string young_spec = "power:3";
    double lo = 1e-3, hi = 1e3;
    int samples = 241;
    auto *yc = app.add_subcommand("young-check", "growth indices and property samples of a Young function");
    yc->add_option("--young", young_spec)->required();
    yc->add_option("--lo", lo)->capture_default_str();
    yc->add_option("--hi", hi)->capture_default_str();
    yc->add_option("--samples", samples)->capture_default_str();

    auto *so = app.add_subcommand("solve", "solve -div(phi(|du|) du/|du|) = f with zero boundary values");
    so->add_option("--young", in.young)->capture_default_str();
    so->add_option("--domain", in.domain)->capture_default_str();
    so->add_option("--f", in.f)->capture_default_str();
    so->add_option("--out", in.out);
    add_grid(so, gf);
    add_solve_flags(so, sf);

    std::string obstacle, environment = "square", mode = "relative";
    auto *ca = app.add_subcommand("capacity", "relative or Sobolev capacity of an obstacle");
    ca->add_option("--young", in.young)->capture_default_str();
    ca->add_option("--obstacle", obstacle)->required();
    ca->add_option("--environment", environment)->capture_default_str();
    ca->add_option("--mode", mode)->capture_default_str();
    ca->add_option("--out", in.out);
    add_grid(ca, gf);
    add_solve_flags(ca, sf);

    std::string da, db;
    auto *hd = app.add_subcommand("hausdorff", "Hausdorff distance between complements");
    hd->add_option("--a", da)->required();
    hd->add_option("--b", db)->required();
    add_grid(hd, gf);

    std::string config;
    auto *ga = app.add_subcommand("gamma", "domain-sequence experiment from a JSON config");
    ga->add_option("--config", config)->required();
    ga->add_option("--out", in.out);

    double mu = 1.0;
    auto *ei = app.add_subcommand("eigen", "variational eigenvalue");
    ei->add_option("--young", in.young)->capture_default_str();
    ei->add_option("--domain", in.domain)->capture_default_str();
    ei->add_option("--mu", mu)->capture_default_str();
    ei->add_option("--out", in.out);
    add_grid(ei, gf);

    std::vector<std::string> argv_store{"philab"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char *> argv;
    for (const auto &a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError &e) {
        err << e.what() << '\n' << app.help();
        return 1;
    }

    try {
        if (*yc) return cmd_young_check(young_spec, lo, hi, samples, out);
        if (*so) return cmd_solve(in, gf, sf, out);
        if (*ca) return cmd_capacity(in, obstacle, environment, mode, gf, sf, out);
        if (*hd) return cmd_hausdorff(da, db, gf, out);
        if (*ga) return cmd_gamma(config, in.out, out);
        if (*ei) return cmd_eigen(in, mu, gf, out);
    } catch (const ConvergenceError &e) {
        err << "error: " << e.what() << " (residual " << format_double(e.residual()) << ")\n";
        return 2;
    } catch (const EigenConvergenceError &e) {
        err << "error: " << e.what() << " (last quotient " << format_double(e.last_quotient()) << ")\n";
        return 2;
    } catch (const ExperimentError &e) {
        err << "error: " << e.what() << " at k=" << e.k() << '\n';
        return 2;
    } catch (const ValidationError &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const FormatError &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const BracketError &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    err << app.help();
    return 1;
}

} // namespace philab
