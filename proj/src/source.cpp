#include "philab/source.hpp"

#include <charconv>
#include <cmath>
#include <vector>

namespace philab {

namespace {

std::vector<double> parse_numbers(const std::string &body, const std::string &text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        const std::size_t comma = std::min(body.find(',', pos), body.size());
        double v = 0;
        const char *b = body.data() + pos, *e = body.data() + comma;
        auto [ptr, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || ptr != e || !std::isfinite(v))
            throw ValidationError("source term: bad number in '" + text + "'");
        out.push_back(v);
        pos = comma + 1;
    }
    return out;
}

std::string fmt(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace

SourceTerm SourceTerm::constant(double c) {
    if (!std::isfinite(c)) throw ValidationError("source term: constant must be finite");
    return SourceTerm("const:" + fmt(c), [c](Point) { return c; });
}

SourceTerm SourceTerm::parse(const std::string &text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ValidationError("source term: expected kind:params, got '" + text + "'");
    const std::string kind = text.substr(0, colon);
    const auto v = parse_numbers(text.substr(colon + 1), text);
    if (kind == "const") {
        if (v.size() != 1) throw ValidationError("source term: const takes one value");
        return constant(v[0]);
    }
    if (v.size() != 3) throw ValidationError("source term: " + kind + " takes three values");
    const std::string spec = kind + ":" + fmt(v[0]) + "," + fmt(v[1]) + "," + fmt(v[2]);
    if (kind == "affine")
        return SourceTerm(spec, [a = v[0], b = v[1], c = v[2]](Point p) { return a + b * p.x + c * p.y; });
    if (kind == "quad")
        return SourceTerm(spec, [a = v[0], b = v[1], c = v[2]](Point p) { return a + b * p.x * p.x + c * p.y * p.y; });
    throw ValidationError("source term: unknown kind '" + kind + "'");
}

} // namespace philab
