#pragma once

#include "ftcons/comparison_system.hpp"
#include "ftcons/dynamics.hpp"
#include "ftcons/graph.hpp"
#include "ftcons/simulator.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ftcons {

/// Sum over consecutive gaps d of the integral of tau^alpha(tau) from 0 to d.
/// xi must be sorted ascending; throws std::invalid_argument otherwise.
Real lyapunov_g_tilde(std::span<const Real> xi, Real alpha_star);

/// Same quantity in the form valid once every gap is below 1:
/// sum d^(1 + alpha*) / (1 + alpha*). Rejects unsorted input and gaps >= 1.
Real lyapunov_g_tilde_small(std::span<const Real> xi, Real alpha_star);

/// Inputs of the finite-time bound mu' = -c mu^(2a / (1 + a)).
struct BoundParams {
    Real alpha_star = 0.8;
    Real a_lower = 1.0;
    Real q = 0.0;
    Real epsilon2 = 0.0;
    Real g_tilde_at_tbar = 0.0;

    void validate() const;
    /// c = a_lower * q * epsilon2 * (1 + a)^(2a / (1 + a))
    Real rate() const;
};

/// Closed-form mu at time s after t_bar; exactly 0 from the extinction time on.
Real mu_trajectory(const BoundParams& p, Real t_minus_tbar);

/// Extinction time of mu measured from t_bar.
Real settling_bound(const BoundParams& p);

/// Per-sample G-tilde of a scalar trace, states sorted before evaluation.
std::vector<Real> g_tilde_series(const Trace& trace, Real alpha_star);

/// First sample from which the largest sorted gap stays below 1 - 1e-9.
std::optional<std::size_t> find_tbar_index(const Trace& trace);

struct DominanceViolation {
    std::size_t index;
    Real t;
    Real g;  // primary disagreement
    Real f;  // comparison spread
};

struct DominanceReport {
    Real tol = 0.0;
    std::size_t samples = 0;
    std::vector<DominanceViolation> violations;
    /// Largest G - F over all samples (may be negative).
    Real max_excess = 0.0;

    bool holds() const noexcept { return violations.empty(); }
};

/// Lists every sample where G(r) > F(xi) + tol. Both traces must share the
/// time grid exactly; throws std::invalid_argument otherwise.
DominanceReport dominance_audit(const Trace& primary, const Trace& comparison, Real tol = 1e-8);

struct CompareOptions {
    /// gamma + epsilon1 by default.
    std::optional<Real> gamma_hat;
    Real epsilon1 = 0.01;
    /// The controller's beta unless set.
    std::optional<Real> beta;
    Real merge_tol = 1e-10;
    /// Restart the comparison state from r at every schedule switch.
    bool reanchor = false;
    Real dominance_tol = 1e-8;
    /// Explicit kind sequence; when absent the kind follows the graph schedule.
    std::optional<ComparisonScript> script;
};

struct CompareResult {
    Trace primary;
    Trace comparison;
    ComparisonParams params;
    DominanceReport dominance;
    std::vector<Real> g_tilde;
    bool g_tilde_monotone = false;
    std::optional<std::size_t> tbar_index;
    /// Present when beta * a_lower * q exceeds gamma_hat, i.e. the decay rate is positive.
    std::optional<BoundParams> bound;
    std::optional<Real> settling_bound;
    /// mu(t - t_bar) on the comparison grid from t_bar on; empty without a bound.
    std::vector<Real> mu;
};

/// Runs the closed loop and its comparison system on the same grid and audits
/// dominance. Scalar agents only (m = 1). The comparison uses the controller's
/// beta, the schedule's lower weight bound and alpha_star.
CompareResult run_comparison(const ControllerSpec& spec, const InherentDynamics& dyn,
                             const SwitchingSchedule& schedule, const Matrix& r0,
                             const IntegratorConfig& cfg, const CompareOptions& options = {});

}  // namespace ftcons
