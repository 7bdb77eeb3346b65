#pragma once
// Plain-text formats for masks, fields, key-value reports and gamma reports.
// Numbers are written with 17 significant digits so files round-trip exactly.

#include "philab/gamma.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

namespace philab {

/// Malformed input file.
class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// "nx ny x0 y0 x1 y1", then ny rows of '0'/'1', top row (largest y) first.
void write_mask(std::ostream &os, const DomainMask &m);
DomainMask read_mask(std::istream &is);
void save_mask(const std::filesystem::path &p, const DomainMask &m);
DomainMask load_mask(const std::filesystem::path &p);

/// One "x y value" line per node.
struct FieldRecord {
    std::vector<Point> nodes;
    std::vector<double> values;
};
void write_field(std::ostream &os, const Mesh &mesh, const std::vector<double> &values);
FieldRecord read_field(std::istream &is);

/// "key value" lines; keys are single words.
using KeyValues = std::vector<std::pair<std::string, std::string>>;
void write_key_values(std::ostream &os, const KeyValues &kv);
std::map<std::string, std::string> read_key_values(std::istream &is);

KeyValues to_key_values(const SolveReport &r);

/// "capacity <value> iterations <n> residual <r>"
std::string capacity_line(const CapacityResult &r);

/// '#'-prefixed header block followed by a CSV table with one row per k.
void write_gamma_csv(std::ostream &os, const GammaReport &r);
GammaReport read_gamma_csv(std::istream &is);

std::string format_double(double v);

} // namespace philab
