#pragma once
// Modulars and Luxemburg norms of sampled functions.

#include "philab/young.hpp"

#include <vector>

namespace philab {

/// Values paired with positive quadrature weights (units of area).
class WeightedSamples {
  public:
    WeightedSamples() = default;
    /// Throws ValidationError on length mismatch or non-positive weights.
    WeightedSamples(std::vector<double> values, std::vector<double> weights);

    const std::vector<double> &values() const { return values_; }
    const std::vector<double> &weights() const { return weights_; }
    std::size_t size() const { return values_.size(); }

    WeightedSamples scaled(double factor) const;

  private:
    std::vector<double> values_;
    std::vector<double> weights_;
};

/// sum_i w_i Phi(|v_i|)
double modular(const YoungFunction &y, const WeightedSamples &s);

/// inf { lambda > 0 : modular(s / lambda) <= 1 }, zero for the zero field.
double luxemburg_norm(const YoungFunction &y, const WeightedSamples &s);

/// Luxemburg norm of the function plus Luxemburg norm of its gradient magnitude.
double sobolev_norm(const YoungFunction &y, const WeightedSamples &u, const WeightedSamples &grad);

/// Same as luxemburg_norm() but measured with the complementary function Phi*.
double conjugate_luxemburg_norm(const YoungFunction &y, const WeightedSamples &s);

} // namespace philab
