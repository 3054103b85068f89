#include "ftcons/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ftcons {

Real sig_pow(Real x, Real alpha) {
    if (x == 0.0) {
        return 0.0;
    }
    if (alpha == 1.0) {
        return x;
    }
    const Real mag = std::pow(std::abs(x), alpha);
    return x > 0.0 ? mag : -mag;
}

Real exponent_schedule(Real distance, Real alpha_star) { return distance < 1.0 ? alpha_star : 1.0; }

InherentDynamics::InherentDynamics(DynamicsKind kind, Real gamma, Real slope, ScalarFn fn,
                                   std::string label)
    : kind_(kind), gamma_(gamma), slope_(slope), fn_(std::move(fn)), label_(std::move(label)) {
    if (!(gamma_ >= 0.0) || !std::isfinite(gamma_)) {
        throw std::invalid_argument("Lipschitz constant gamma must be finite and nonnegative");
    }
}

InherentDynamics InherentDynamics::zero(Real gamma) {
    return {DynamicsKind::Zero, gamma, 0.0, nullptr, "zero"};
}

InherentDynamics InherentDynamics::sine(Real gamma) {
    return {DynamicsKind::Sine, gamma, 0.0, nullptr, "sine"};
}

InherentDynamics InherentDynamics::linear(Real slope, Real gamma) {
    return {DynamicsKind::Linear, gamma, slope, nullptr, "linear"};
}

InherentDynamics InherentDynamics::custom(ScalarFn fn, Real gamma, std::string label) {
    if (!fn) {
        throw std::invalid_argument("custom dynamics needs a callable");
    }
    return {DynamicsKind::Custom, gamma, 0.0, std::move(fn), std::move(label)};
}

Real InherentDynamics::operator()(Real t, Real x) const {
    switch (kind_) {
        case DynamicsKind::Zero:
            return 0.0;
        case DynamicsKind::Sine:
            return std::sin(x);
        case DynamicsKind::Linear:
            return slope_ * x;
        case DynamicsKind::Custom:
            return fn_(t, x);
    }
    return 0.0;
}

void ControllerSpec::validate() const {
    if (!(alpha_star > 0.0 && alpha_star < 1.0)) {
        throw std::invalid_argument("alpha_star must lie strictly inside (0, 1), got " +
                                    std::to_string(alpha_star));
    }
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("beta must be finite and nonnegative");
    }
    if (!(k >= 0.0) || !std::isfinite(k)) {
        throw std::invalid_argument("k must be finite and nonnegative");
    }
}

std::string_view to_string(ControllerFamily family) {
    switch (family) {
        case ControllerFamily::VariableExponent:
            return "variable_exponent";
        case ControllerFamily::PureSig:
            return "pure_sig";
        case ControllerFamily::SignedAggregate:
            return "signed_aggregate";
        case ControllerFamily::Combined:
            return "combined";
        case ControllerFamily::Linear:
            return "linear";
    }
    return "unknown";
}

ControllerFamily parse_controller_family(std::string_view name) {
    for (auto f : {ControllerFamily::VariableExponent, ControllerFamily::PureSig,
                   ControllerFamily::SignedAggregate, ControllerFamily::Combined,
                   ControllerFamily::Linear}) {
        if (to_string(f) == name) {
            return f;
        }
    }
    throw std::invalid_argument("unknown controller family '" + std::string(name) + "'");
}

std::string_view to_string(DynamicsKind kind) {
    switch (kind) {
        case DynamicsKind::Zero:
            return "zero";
        case DynamicsKind::Sine:
            return "sine";
        case DynamicsKind::Linear:
            return "linear";
        case DynamicsKind::Custom:
            return "custom";
    }
    return "unknown";
}

void control_input(const ControllerSpec& spec, const DirectedGraph& g, const Matrix& r,
                   std::size_t i, std::span<Real> out) {
    const std::size_t m = r.cols();
    if (out.size() != m) {
        throw std::invalid_argument("control_input: output has the wrong dimension");
    }
    std::fill(out.begin(), out.end(), 0.0);
    const auto ri = r.row(i);

    switch (spec.family) {
        case ControllerFamily::VariableExponent:
            for (const auto& nb : g.neighbors(i)) {
                const auto rj = r.row(nb.agent);
                Real norm2 = 0.0;
                for (std::size_t c = 0; c < m; ++c) {
                    norm2 += (ri[c] - rj[c]) * (ri[c] - rj[c]);
                }
                const Real pair_alpha = exponent_schedule(std::sqrt(norm2), spec.alpha_star);
                for (std::size_t c = 0; c < m; ++c) {
                    const Real diff = ri[c] - rj[c];
                    const Real alpha = spec.exponent_mode == ExponentMode::PairNorm
                                           ? pair_alpha
                                           : exponent_schedule(std::abs(diff), spec.alpha_star);
                    out[c] -= spec.beta * nb.weight * sig_pow(diff, alpha);
                }
            }
            break;
        case ControllerFamily::PureSig:
            for (const auto& nb : g.neighbors(i)) {
                const auto rj = r.row(nb.agent);
                for (std::size_t c = 0; c < m; ++c) {
                    out[c] -= spec.beta * nb.weight * sig_pow(ri[c] - rj[c], spec.alpha_star);
                }
            }
            break;
        case ControllerFamily::SignedAggregate: {
            if (g.neighbors(i).empty()) {
                break;
            }
            for (const auto& nb : g.neighbors(i)) {
                const auto rj = r.row(nb.agent);
                for (std::size_t c = 0; c < m; ++c) {
                    out[c] += nb.weight * (ri[c] - rj[c]);
                }
            }
            for (std::size_t c = 0; c < m; ++c) {
                out[c] = -spec.beta * sig_pow(out[c], spec.alpha_star);
            }
            break;
        }
        case ControllerFamily::Combined:
        case ControllerFamily::Linear: {
            const bool with_sig = spec.family == ControllerFamily::Combined;
            for (const auto& nb : g.neighbors(i)) {
                const auto rj = r.row(nb.agent);
                for (std::size_t c = 0; c < m; ++c) {
                    const Real diff = ri[c] - rj[c];
                    out[c] -= spec.k * nb.weight * diff;
                    if (with_sig) {
                        out[c] -= spec.beta * nb.weight * sig_pow(diff, spec.alpha_star);
                    }
                }
            }
            break;
        }
    }
}

std::vector<Real> control_input(const ControllerSpec& spec, const DirectedGraph& g, const Matrix& r,
                                std::size_t i) {
    std::vector<Real> out(r.cols());
    control_input(spec, g, r, i, out);
    return out;
}

Matrix inherent_rhs(const InherentDynamics& dyn, Real t, const Matrix& r) {
    Matrix out(r.rows(), r.cols());
    if (dyn.kind() == DynamicsKind::Zero) {
        return out;
    }
    auto src = r.data();
    auto dst = out.data();
    for (std::size_t k = 0; k < src.size(); ++k) {
        dst[k] = dyn(t, src[k]);
    }
    return out;
}

Matrix closed_loop_rhs(const ControllerSpec& spec, const InherentDynamics& dyn,
                       const DirectedGraph& g, Real t, const Matrix& r) {
    if (g.size() != r.rows()) {
        throw std::invalid_argument("closed_loop_rhs: graph and state disagree on agent count");
    }
    Matrix out = inherent_rhs(dyn, t, r);
    std::vector<Real> u(r.cols());
    for (std::size_t i = 0; i < r.rows(); ++i) {
        control_input(spec, g, r, i, u);
        auto row = out.row(i);
        for (std::size_t c = 0; c < u.size(); ++c) {
            row[c] += u[c];
        }
    }
    return out;
}

}  // namespace ftcons
