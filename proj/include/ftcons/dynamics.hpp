#pragma once

#include "ftcons/graph.hpp"
#include "ftcons/matrix.hpp"

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ftcons {

/// sign(x) * |x|^alpha, with sig_pow(0, alpha) = 0.
Real sig_pow(Real x, Real alpha);

/// Exponent used for a pair at distance d: alpha_star below unit distance, 1 from there on.
Real exponent_schedule(Real distance, Real alpha_star);

enum class DynamicsKind { Zero, Sine, Linear, Custom };

/// Per-agent drift phi(t, x), applied independently to every state component.
/// gamma is the declared Lipschitz constant; it is a claim, audited separately.
class InherentDynamics {
public:
    using ScalarFn = std::function<Real(Real t, Real x)>;

    static InherentDynamics zero(Real gamma = 0.0);
    static InherentDynamics sine(Real gamma = 1.0);
    static InherentDynamics linear(Real slope, Real gamma);
    static InherentDynamics custom(ScalarFn fn, Real gamma, std::string label = "custom");

    Real operator()(Real t, Real x) const;

    DynamicsKind kind() const noexcept { return kind_; }
    Real gamma() const noexcept { return gamma_; }
    Real slope() const noexcept { return slope_; }
    const std::string& label() const noexcept { return label_; }

private:
    InherentDynamics(DynamicsKind kind, Real gamma, Real slope, ScalarFn fn, std::string label);

    DynamicsKind kind_;
    Real gamma_;
    Real slope_;
    ScalarFn fn_;
    std::string label_;
};

enum class ControllerFamily {
    VariableExponent,  ///< -beta sum a_ij sig(r_i - r_j)^alpha(|r_i - r_j|)
    PureSig,           ///< -beta sum a_ij sig(r_i - r_j)^alpha_star
    SignedAggregate,   ///< -beta sig(sum a_ij (r_i - r_j))^alpha_star
    Combined,          ///< -k sum a_ij (r_i - r_j) - beta sum a_ij sig(r_i - r_j)^alpha_star
    Linear,            ///< -k sum a_ij (r_i - r_j)
};

/// How the variable exponent is picked when m > 1.
enum class ExponentMode {
    PairNorm,      ///< one exponent per pair, from the 2-norm of r_i - r_j
    PerComponent,  ///< one exponent per component, from |r_i^(k) - r_j^(k)|
};

struct ControllerSpec {
    ControllerFamily family = ControllerFamily::VariableExponent;
    /// beta; doubles as the gain epsilon of PureSig and SignedAggregate.
    Real beta = 1.0;
    /// Linear-term gain, used by Combined and Linear only.
    Real k = 0.0;
    Real alpha_star = 0.8;
    ExponentMode exponent_mode = ExponentMode::PairNorm;

    /// Throws std::invalid_argument on negative gains or alpha_star outside (0, 1).
    void validate() const;
};

std::string_view to_string(ControllerFamily family);
ControllerFamily parse_controller_family(std::string_view name);
std::string_view to_string(DynamicsKind kind);

/// Control input u_i of agent i under the active graph, written into out (size m).
void control_input(const ControllerSpec& spec, const DirectedGraph& g, const Matrix& r,
                   std::size_t i, std::span<Real> out);
std::vector<Real> control_input(const ControllerSpec& spec, const DirectedGraph& g, const Matrix& r,
                                std::size_t i);

/// phi applied componentwise to every agent.
Matrix inherent_rhs(const InherentDynamics& dyn, Real t, const Matrix& r);

/// Closed-loop derivative: phi(t, r_i) + u_i for every agent.
Matrix closed_loop_rhs(const ControllerSpec& spec, const InherentDynamics& dyn,
                       const DirectedGraph& g, Real t, const Matrix& r);

}  // namespace ftcons
