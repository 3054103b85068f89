#pragma once

#include "ftcons/comparison.hpp"
#include "ftcons/dynamics.hpp"
#include "ftcons/gains.hpp"
#include "ftcons/graph.hpp"
#include "ftcons/simulator.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ftcons {

/// Config problem; what() starts with the dotted path of the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct AnalysisSettings {
    Real settling_tol = 1e-3;
    bool lipschitz_audit = true;
    Real lipschitz_lo = -10.0;
    Real lipschitz_hi = 10.0;
    std::size_t lipschitz_samples = 4000;
    GainSlack slack;
    std::optional<Real> q_paper;
};

struct ScenarioConfig {
    Matrix r0;
    InherentDynamics dynamics = InherentDynamics::zero();
    ControllerSpec controller;
    std::optional<SwitchingSchedule> schedule;  // always set after loading
    IntegratorConfig integrator;
    AnalysisSettings analysis;
    std::optional<CompareOptions> comparison;
    std::uint64_t seed = 0;

    const SwitchingSchedule& sched() const { return schedule.value(); }
};

/// Parses and cross-validates a JSON scenario. Numbers may be given as
/// strings holding constant expressions such as "pi/2".
ScenarioConfig parse_scenario(std::string_view json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

}  // namespace ftcons
