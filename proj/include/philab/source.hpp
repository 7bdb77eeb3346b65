#pragma once
// Right-hand sides f(x, y) described by short strings.

#include "philab/geometry.hpp"

#include <functional>
#include <string>

namespace philab {

/// "const:c", "affine:c0,cx,cy" (c0 + cx x + cy y) or "quad:c0,cxx,cyy" (c0 + cxx x^2 + cyy y^2).
class SourceTerm {
  public:
    static SourceTerm parse(const std::string &text);
    static SourceTerm constant(double c);

    double operator()(Point p) const { return eval_(p); }
    const std::string &spec() const { return spec_; }

  private:
    SourceTerm(std::string spec, std::function<double(Point)> eval) : spec_(std::move(spec)), eval_(std::move(eval)) {}
    std::string spec_;
    std::function<double(Point)> eval_;
};

} // namespace philab
