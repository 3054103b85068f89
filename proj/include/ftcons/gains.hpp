#pragma once

#include "ftcons/dynamics.hpp"
#include "ftcons/graph.hpp"

#include <cstddef>
#include <optional>
#include <string>

namespace ftcons {

/// Largest q with -sum x_i^2 + sum x_i x_{i-1} <= -q sum x_i^2 for all x in R^n:
/// the smallest eigenvalue of tridiag(-1/2, 1, -1/2), equal to 1 - cos(pi / (n + 1)).
Real chain_constant(std::size_t n);

/// Value of the chain constant quoted with the published simulation (n = 3 only).
std::optional<Real> published_chain_constant(std::size_t n);

/// (gamma + epsilon1) / (a_lower * q) + epsilon2.
Real gain_threshold(Real gamma, Real a_lower, Real q, Real epsilon1, Real epsilon2);

/// gain_threshold with q = chain_constant(n - 1). Throws for n < 2.
Real beta_threshold(Real gamma, Real a_lower, std::size_t n, Real epsilon1, Real epsilon2);

enum class QConvention { Tight, Paper };

QConvention parse_q_convention(const std::string& name);

struct GainSlack {
    Real epsilon1 = 0.01;
    Real epsilon2 = 0.01;
};

/// Outcome of checking a controller's gain against its sufficient condition,
/// reported under both chain-constant conventions.
struct GainCertificate {
    bool applicable = true;
    ControllerFamily family = ControllerFamily::VariableExponent;
    std::string gain_name;  // "beta" or "k"
    Real gain = 0.0;
    std::size_t n = 0;
    Real gamma = 0.0;
    Real a_lower = 0.0;
    Real epsilon1 = 0.0;
    Real epsilon2 = 0.0;
    /// True when the condition is gain > threshold rather than gain >= threshold.
    bool strict = false;

    Real q_value = 0.0;  // chain_constant(n - 1)
    Real threshold = 0.0;
    bool satisfied = false;

    std::optional<Real> q_paper;
    std::optional<Real> threshold_paper;
    std::optional<bool> satisfied_paper;

    std::string note;

    /// Verdict under the chosen convention. Throws std::runtime_error when the
    /// paper convention has no value for this n.
    bool satisfied_under(QConvention convention) const;
};

/// Checks the family's gain condition for the schedule's agent count and lower
/// weight bound. Families without a quantitative condition come back with
/// applicable = false.
GainCertificate check_gain(const ControllerSpec& spec, const InherentDynamics& dyn,
                           const SwitchingSchedule& schedule, GainSlack slack = {},
                           std::optional<Real> q_paper_override = std::nullopt);

/// key = value rendering of a certificate.
std::string format_certificate(const GainCertificate& cert);

}  // namespace ftcons
