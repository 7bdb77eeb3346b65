#include "philab/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace philab {

namespace {

double parse_double(const std::string &s) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw FormatError("expected a number, got '" + s + "'");
    return v;
}

int parse_int(const std::string &s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw FormatError("expected an integer, got '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

IntegralVerdict parse_verdict(const std::string &s) {
    for (auto v : {IntegralVerdict::finite, IntegralVerdict::divergent, IntegralVerdict::inconclusive})
        if (to_string(v) == s) return v;
    throw FormatError("unknown integrability verdict '" + s + "'");
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_mask(std::ostream &os, const DomainMask &m) {
    const Box &b = m.box();
    os << m.nx() << ' ' << m.ny() << ' ' << format_double(b.x0) << ' ' << format_double(b.y0) << ' '
       << format_double(b.x1) << ' ' << format_double(b.y1) << '\n';
    std::string row(m.nx(), '0');
    for (int j = m.ny() - 1; j >= 0; --j) {
        for (int i = 0; i < m.nx(); ++i) row[i] = m.inside(i, j) ? '1' : '0';
        os << row << '\n';
    }
}

DomainMask read_mask(std::istream &is) {
    std::string line;
    if (!std::getline(is, line)) throw FormatError("mask: missing header");
    std::istringstream hs(line);
    std::string tok[6];
    for (auto &t : tok)
        if (!(hs >> t)) throw FormatError("mask: header needs 'nx ny x0 y0 x1 y1'");
    const int nx = parse_int(tok[0]), ny = parse_int(tok[1]);
    const Box b{parse_double(tok[2]), parse_double(tok[3]), parse_double(tok[4]), parse_double(tok[5])};
    if (!(b.x1 > b.x0) || !(b.y1 > b.y0)) throw FormatError("mask: degenerate box");
    DomainMask m(nx, ny, b);
    for (int j = ny - 1; j >= 0; --j) {
        if (!std::getline(is, line)) throw FormatError("mask: missing rows");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (static_cast<int>(line.size()) != nx) throw FormatError("mask: row has wrong length");
        for (int i = 0; i < nx; ++i) {
            if (line[i] != '0' && line[i] != '1') throw FormatError("mask: rows must contain only '0' and '1'");
            m.set(i, j, line[i] == '1');
        }
    }
    return m;
}

void save_mask(const std::filesystem::path &p, const DomainMask &m) {
    std::ofstream os(p);
    if (!os) throw FormatError("cannot write " + p.string());
    write_mask(os, m);
}

DomainMask load_mask(const std::filesystem::path &p) {
    std::ifstream is(p);
    if (!is) throw FormatError("cannot read " + p.string());
    return read_mask(is);
}

void write_field(std::ostream &os, const Mesh &mesh, const std::vector<double> &values) {
    if (values.size() != mesh.num_nodes()) throw ValidationError("write_field: length mismatch");
    for (std::size_t n = 0; n < mesh.num_nodes(); ++n)
        os << format_double(mesh.nodes[n].x) << ' ' << format_double(mesh.nodes[n].y) << ' '
           << format_double(values[n]) << '\n';
}

FieldRecord read_field(std::istream &is) {
    FieldRecord r;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string a, b, c, extra;
        if (!(ls >> a)) continue;
        if (!(ls >> b >> c) || (ls >> extra)) throw FormatError("field: expected 'x y value'");
        r.nodes.push_back({parse_double(a), parse_double(b)});
        r.values.push_back(parse_double(c));
    }
    return r;
}

void write_key_values(std::ostream &os, const KeyValues &kv) {
    for (const auto &[k, v] : kv) os << k << ' ' << v << '\n';
}

std::map<std::string, std::string> read_key_values(std::istream &is) {
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto sp = line.find(' ');
        if (sp == std::string::npos) throw FormatError("key-value: expected 'key value'");
        out[line.substr(0, sp)] = line.substr(sp + 1);
    }
    return out;
}

KeyValues to_key_values(const SolveReport &r) {
    return {{"iterations", std::to_string(r.iterations)},
            {"energy", format_double(r.energy)},
            {"residual", format_double(r.residual)},
            {"converged", r.converged ? "1" : "0"},
            {"newton_failures", std::to_string(r.newton_failures)},
            {"gradient_steps", std::to_string(r.gradient_steps)}};
}

std::string capacity_line(const CapacityResult &r) {
    return "capacity " + format_double(r.capacity) + " iterations " + std::to_string(r.iterations) + " residual " +
           format_double(r.residual);
}

namespace {
const char *const kGammaColumns = "k,d_hc,cap_diff,sobolev_dist,grad_modular_gap,energy,l2_norm";
}

void write_gamma_csv(std::ostream &os, const GammaReport &r) {
    const Box &b = r.grid.box;
    os << "# young " << r.young << '\n'
       << "# source " << r.source << '\n'
       << "# sequence " << r.sequence << '\n'
       << "# grid " << r.grid.nx << ' ' << r.grid.ny << ' ' << format_double(b.x0) << ' ' << format_double(b.y0)
       << ' ' << format_double(b.x1) << ' ' << format_double(b.y1) << '\n'
       << "# dimension " << r.dimension << '\n'
       << "# morrey " << to_string(r.morrey) << '\n'
       << "# measured_p_minus " << format_double(r.measured_p_minus) << '\n'
       << "# measured_p_plus " << format_double(r.measured_p_plus) << '\n'
       << "# limit_sobolev_norm " << format_double(r.limit_sobolev_norm) << '\n'
       << "# limit_grad_modular " << format_double(r.limit_grad_modular) << '\n'
       << "# limit_l2_norm " << format_double(r.limit_l2_norm) << '\n'
       << "# limit_energy " << format_double(r.limit_energy) << '\n'
       << kGammaColumns << '\n';
    for (const auto &row : r.rows)
        os << row.k << ',' << format_double(row.d_hc) << ',' << format_double(row.cap_diff) << ','
           << format_double(row.sobolev_dist) << ',' << format_double(row.grad_modular_gap) << ','
           << format_double(row.energy) << ',' << format_double(row.l2_norm) << '\n';
}

GammaReport read_gamma_csv(std::istream &is) {
    GammaReport r;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string key;
            ls >> key;
            std::string value;
            std::getline(ls >> std::ws, value);
            if (key == "young") r.young = value;
            else if (key == "source") r.source = value;
            else if (key == "sequence") r.sequence = value;
            else if (key == "grid") {
                std::istringstream gs(value);
                std::string t[6];
                for (auto &s : t)
                    if (!(gs >> s)) throw FormatError("gamma csv: bad grid line");
                r.grid.nx = parse_int(t[0]);
                r.grid.ny = parse_int(t[1]);
                r.grid.box = {parse_double(t[2]), parse_double(t[3]), parse_double(t[4]), parse_double(t[5])};
            } else if (key == "dimension") r.dimension = parse_int(value);
            else if (key == "morrey") r.morrey = parse_verdict(value);
            else if (key == "measured_p_minus") r.measured_p_minus = parse_double(value);
            else if (key == "measured_p_plus") r.measured_p_plus = parse_double(value);
            else if (key == "limit_sobolev_norm") r.limit_sobolev_norm = parse_double(value);
            else if (key == "limit_grad_modular") r.limit_grad_modular = parse_double(value);
            else if (key == "limit_l2_norm") r.limit_l2_norm = parse_double(value);
            else if (key == "limit_energy") r.limit_energy = parse_double(value);
            else throw FormatError("gamma csv: unknown header key '" + key + "'");
            continue;
        }
        if (!header_seen) {
            if (line != kGammaColumns) throw FormatError("gamma csv: unexpected column header");
            header_seen = true;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 7) throw FormatError("gamma csv: row needs 7 fields");
        GammaRow row;
        row.k = parse_int(f[0]);
        row.d_hc = parse_double(f[1]);
        row.cap_diff = parse_double(f[2]);
        row.sobolev_dist = parse_double(f[3]);
        row.grad_modular_gap = parse_double(f[4]);
        row.energy = parse_double(f[5]);
        row.l2_norm = parse_double(f[6]);
        r.rows.push_back(row);
    }
    if (!header_seen) throw FormatError("gamma csv: missing column header");
    return r;
}

} // namespace philab
