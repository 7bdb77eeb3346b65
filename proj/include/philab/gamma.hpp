#pragma once
// Domain-perturbation experiments: solve on a sequence of domains and on the
// limit, and measure how the solutions approach each other.

#include "philab/capacity.hpp"
#include "philab/geometry.hpp"
#include "philab/solver.hpp"
#include "philab/source.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace philab {

struct GammaRow {
    int k = 0;
    double d_hc = 0;
    double cap_diff = 0;
    double sobolev_dist = 0;     ///< ||u_k - u||, Luxemburg W^{1,Phi} norm on D
    double grad_modular_gap = 0; ///< int_D Phi(|grad(u_k - u)|)
    double energy = 0;           ///< J(u_k) on Omega_k
    double l2_norm = 0;          ///< ||u_k||_{L^2}

    bool operator==(const GammaRow &) const = default;
};

struct GammaReport {
    std::string young;
    std::string source;
    std::string sequence;
    GridSpec grid;
    int dimension = 2;
    IntegralVerdict morrey = IntegralVerdict::inconclusive;
    double measured_p_minus = 0;
    double measured_p_plus = 0;
    /// Norms of the limit solution (all zero for an empty limit).
    double limit_sobolev_norm = 0;
    double limit_grad_modular = 0;
    double limit_l2_norm = 0;
    double limit_energy = 0;
    std::vector<GammaRow> rows;

    bool operator==(const GammaReport &) const = default;
};

struct ExperimentOptions {
    SolveOptions solve;
    /// Dimension used for the integrability verdict in the header.
    int dimension = 2;
    bool compute_capacity = true;
};

/// Solutions behind a report, on the full-box corner lattice.
struct GammaFields {
    std::shared_ptr<const Mesh> box_mesh;
    std::vector<double> limit;
    std::vector<std::vector<double>> per_k;
};

/// Thrown when a solve fails; carries the rows computed so far and the failing k.
class ExperimentError : public std::runtime_error {
  public:
    ExperimentError(const std::string &what, GammaReport partial, int k)
        : std::runtime_error(what), partial_(std::move(partial)), k_(k) {}
    const GammaReport &partial() const { return partial_; }
    int k() const { return k_; }

  private:
    GammaReport partial_;
    int k_;
};

/// Run a sequence experiment. The limit must share the sequence grid; an empty
/// limit stands for the void domain and its solution is the zero field.
GammaReport run_experiment(const DomainSequenceSpec &seq, const DomainMask &limit, const YoungFunction &y,
                           const SourceTerm &f, const ExperimentOptions &opts = {}, GammaFields *fields = nullptr);

enum class Theorem { main, main_2, none };
std::string to_string(Theorem t);

enum class TrendKind { zero, decaying, persistent };
std::string to_string(TrendKind t);

struct Trend {
    TrendKind kind = TrendKind::persistent;
    double first = 0;
    double last = 0;
    /// Decaying: last < first/4 and last < 4h.
    bool converges() const { return kind != TrendKind::persistent; }
};

/// Identically zero series are reported as TrendKind::zero.
Trend classify_trend(const std::vector<double> &values, double h);

struct HypothesisVerdict {
    bool hc_converges = false;
    Trend hc;
    bool cap_vanishes = false; ///< capacity series decays (a zero series does not count)
    Trend cap;
    bool morrey_finite = false;
    bool p_minus_ok = false;
    Theorem theorem_applicable = Theorem::none;
};

/// Combine the series into a verdict. main needs a decaying capacity series;
/// main_2 needs a finite integrability verdict; an identically zero capacity
/// series (Omega_k inside Omega) falls back to main when main_2 does not apply.
HypothesisVerdict classify_hypotheses(const std::vector<double> &d_hc, const std::vector<double> &cap, double h,
                                      const YoungFunction &y, int n);

HypothesisVerdict check_hypotheses(const std::vector<DomainMask> &masks, const DomainMask &limit,
                                   const DomainMask &box, const YoungFunction &y, int n,
                                   const SolveOptions &opts = {});

/// Verdict from the columns of an existing report.
HypothesisVerdict check_hypotheses(const GammaReport &report, const YoungFunction &y);

struct TorsionCheck {
    bool agree = false;
    bool converges_f = false;
    bool converges_one = false;
    /// max over k of the difference between the two normalized distance series.
    double max_deviation = 0;
};

/// Convergence verdict of a report: final sobolev_dist <= 0.05 of the limit norm
/// (or <= 1e-8 when the limit is void).
bool sobolev_converges(const GammaReport &r);

/// Compare the verdict for f with the verdict for the torsion problem f = 1.
TorsionCheck reduction_to_torsion_check(const DomainSequenceSpec &seq, const DomainMask &limit,
                                        const YoungFunction &y, const SourceTerm &f,
                                        const ExperimentOptions &opts = {});

} // namespace philab
