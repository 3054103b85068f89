#pragma once

#include "ftcons/dynamics.hpp"
#include "ftcons/graph.hpp"
#include "ftcons/matrix.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ftcons {

/// Raised when a step produces a non-finite state.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Scheme { Euler, RK4 };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);

struct IntegratorConfig {
    Real dt = 1e-3;
    Real horizon = 10.0;
    /// Agents are snapped together once max - min drops below this in every component.
    Real consensus_tol = 1e-9;
    Scheme scheme = Scheme::RK4;
    bool record_controls = false;

    void validate() const;
};

enum class EventKind { Switch, ConsensusSnap, Merge };

std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view name);

struct TraceEvent {
    Real t;
    EventKind kind;

    bool operator==(const TraceEvent&) const = default;
};

/// Time-indexed record of a run. Samples are taken at every integration step.
struct Trace {
    std::vector<Real> times;
    std::vector<Matrix> states;
    /// Max over components of max_i r_i - min_i r_i, per sample.
    std::vector<Real> disagreement;
    /// Per-agent control inputs per sample; empty unless requested.
    std::vector<Matrix> controls;
    std::vector<TraceEvent> events;

    std::size_t size() const noexcept { return times.size(); }
    std::size_t agents() const noexcept { return states.empty() ? 0 : states.front().rows(); }
    std::size_t dims() const noexcept { return states.empty() ? 0 : states.front().cols(); }
    std::optional<Real> first_event(EventKind kind) const;
    std::vector<Real> event_times(EventKind kind) const;
};

using RightHandSide = std::function<Matrix(Real t, const Matrix& state)>;

/// One explicit step of the chosen scheme from state.t to state.t + dt.
AgentState step(const RightHandSide& rhs, const AgentState& state, Real dt, Scheme scheme);

/// Fixed-step integration of the closed loop over [0, cfg.horizon].
///
/// Steps never straddle a schedule switch: each inter-switch window is cut into
/// equal steps no longer than cfg.dt, and the window's graph is used
/// throughout. Once every component's spread falls below cfg.consensus_tol
/// the agents are moved to the midpoint of max and min, a ConsensusSnap event
/// is recorded, and from then on all agents evolve under phi alone.
Trace simulate(const ControllerSpec& spec, const InherentDynamics& dyn,
               const SwitchingSchedule& schedule, const Matrix& r0, const IntegratorConfig& cfg);

}  // namespace ftcons
