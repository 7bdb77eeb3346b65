#pragma once
// Young functions Phi(t) = int_0^t phi, the growth laws of the phi-Laplacian.

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace philab {

/// Thrown for inputs that violate a documented precondition.
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a monotone root bracket cannot be established.
class BracketError : public std::runtime_error {
  public:
    BracketError(const std::string &what, double lo, double hi)
        : std::runtime_error(what), lo_(lo), hi_(hi) {}
    double lo() const { return lo_; }
    double hi() const { return hi_; }

  private:
    double lo_, hi_;
};

enum class YoungFamily { power, power_log, spliced, sum, product, composition };

enum class YoungQuantity { phi, phi_prime, Phi, Phi_star, Phi_inv, phi_inv };

/// Immutable handle to a Young function. Copies share the underlying node.
///
/// p_minus()/p_plus() are the declared indices of the two-sided bound
/// p- <= t phi'(t)/phi(t) <= p+. For Phi(t) = t^p/p this gives p- = p+ = p-1.
/// Composite families derive their indices from the operands:
///   sum         -> componentwise extrema over operands with positive weight
///   product     -> p-  = p1- + p2-,  p+ = p1+ + p2+
///   composition -> p-  = p1- * p2-,  p+ = p1+ * p2+
class YoungFunction {
  public:
    /// phi(t) = t^(p-1), Phi(t) = t^p/p. Requires p > 1.
    static YoungFunction power(double p);
    /// phi(t) = t^a log(b + c t). Requires a, c > 0 and b >= 1 so phi > 0 on (0, inf).
    static YoungFunction power_log(double a, double b, double c);
    /// phi(t) = t^a1 on [0, t0] and c2 t^a2 + d beyond, with c2 and d chosen
    /// so that phi and phi' are continuous at t0. Requires a1, a2 > 1, t0 > 0.
    static YoungFunction spliced(double a1, double a2, double t0);
    /// phi = w1 phi1 + w2 phi2 with w1, w2 >= 0 and w1 + w2 > 0.
    static YoungFunction sum(double w1, const YoungFunction &y1, double w2, const YoungFunction &y2);
    /// phi = phi1 * phi2.
    static YoungFunction product(const YoungFunction &y1, const YoungFunction &y2);
    /// phi = phi_outer o phi_inner.
    static YoungFunction composition(const YoungFunction &outer, const YoungFunction &inner);

    YoungFamily family() const;
    /// Family parameters (empty for composite families).
    std::span<const double> params() const;
    /// Operands of a composite family (empty for leaves).
    std::vector<YoungFunction> operands() const;
    /// Weights of a sum (empty otherwise).
    std::span<const double> weights() const;

    double p_minus() const;
    double p_plus() const;

    double phi(double t) const;
    double phi_prime(double t) const;
    double Phi(double t) const;
    /// Complementary function Phi*(s) = int_0^s phi^{-1}, evaluated as
    /// s phi^{-1}(s) - Phi(phi^{-1}(s)) (closed form for powers).
    double Phi_star(double s) const;
    double Phi_inv(double s) const;
    double phi_inv(double s) const;

    /// Phi* by quadrature of phi^{-1}, regardless of any closed form.
    double Phi_star_quadrature(double s) const;

    /// Dispatching evaluation; throws ValidationError for t < 0.
    double evaluate(YoungQuantity which, double t) const;

    /// Canonical textual description, parseable by parse_young().
    std::string spec() const;

    struct Node;

  private:
    explicit YoungFunction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Parse "power:3", "powerlog:1,1,1", "spliced:a1,a2,t0", "product(A,B)",
/// "compose(A,B)" or "sum(w1*A,w2*B)".
YoungFunction parse_young(const std::string &text);

/// Result of sampling the growth ratios of a Young function on a grid.
struct GrowthReport {
    double p_minus = 0;      ///< inf of t phi'(t)/phi(t)
    double p_plus = 0;       ///< sup of t phi'(t)/phi(t)
    double lprime_minus = 0; ///< inf of t phi(t)/Phi(t)
    double lprime_plus = 0;  ///< sup of t phi(t)/Phi(t)
    bool phi_convex = false;       ///< convexity of phi = Phi'
    bool Phi_convex = false;
    bool Phi_tilde_convex = false; ///< convexity of t -> Phi(sqrt t)
    bool p_minus_violated = false; ///< measured p- <= 1
    bool within_declared = false;  ///< measured indices inside the declared [p-, p+]
};

/// Growth ratios use central differences for phi' (step 1e-6 t); convexity
/// flags use second central differences.
GrowthReport verify_growth(const YoungFunction &y, std::span<const double> grid);

/// n log-spaced points in [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// Constant of the refined monotonicity inequality,
///   p(p+1) / (9 * 12^((p+1)/2)).
double monotonicity_constant(double p_minus);

/// (phi(|a|) a/|a| - phi(|b|) b/|b|) . (a - b), with the flux of a zero vector
/// taken as zero.
double monotonicity_gap(const YoungFunction &y, std::span<const double> a, std::span<const double> b);

enum class IntegralVerdict { finite, divergent, inconclusive };

struct MorreyResult {
    IntegralVerdict verdict = IntegralVerdict::inconclusive;
    double value = 0;      ///< integral over [1, upper] (full value when finite)
    double upper = 1;      ///< last truncation point reached
    double tail_bound = 0; ///< analytic bound on the remaining tail (finite case)
};

/// Classify int_1^inf Phi^{-1}(t) / t^(1 + 1/n) dt.
MorreyResult morrey_integral(const YoungFunction &y, int n);

std::string to_string(IntegralVerdict v);

} // namespace philab
