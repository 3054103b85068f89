#include "ftcons/gains.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ftcons {

Real chain_constant(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("chain constant is defined for n >= 1");
    }
    // cos(pi/2) and cos(pi/3) are exact; the library cosine is not.
    if (n == 1) {
        return 1.0;
    }
    if (n == 2) {
        return 0.5;
    }
    return 1.0 - std::cos(std::numbers::pi / static_cast<Real>(n + 1));
}

std::optional<Real> published_chain_constant(std::size_t n) {
    if (n == 3) {
        return 0.6910;
    }
    return std::nullopt;
}

Real gain_threshold(Real gamma, Real a_lower, Real q, Real epsilon1, Real epsilon2) {
    if (!(a_lower > 0.0) || !(q > 0.0)) {
        throw std::invalid_argument("gain_threshold needs a_lower > 0 and q > 0");
    }
    return (gamma + epsilon1) / (a_lower * q) + epsilon2;
}

Real beta_threshold(Real gamma, Real a_lower, std::size_t n, Real epsilon1, Real epsilon2) {
    if (n < 2) {
        throw std::invalid_argument("beta threshold needs at least two agents");
    }
    if (!(gamma >= 0.0) || !(epsilon1 > 0.0) || !(epsilon2 > 0.0)) {
        throw std::invalid_argument("beta threshold needs gamma >= 0 and positive slack");
    }
    return gain_threshold(gamma, a_lower, chain_constant(n - 1), epsilon1, epsilon2);
}

QConvention parse_q_convention(const std::string& name) {
    if (name == "tight") {
        return QConvention::Tight;
    }
    if (name == "paper") {
        return QConvention::Paper;
    }
    throw std::invalid_argument("unknown q convention '" + name + "' (expected tight or paper)");
}

bool GainCertificate::satisfied_under(QConvention convention) const {
    if (!applicable) {
        return true;
    }
    if (convention == QConvention::Tight) {
        return satisfied;
    }
    if (!satisfied_paper) {
        throw std::runtime_error("no published chain constant for n - 1 = " +
                                 std::to_string(n - 1));
    }
    return *satisfied_paper;
}

GainCertificate check_gain(const ControllerSpec& spec, const InherentDynamics& dyn,
                           const SwitchingSchedule& schedule, GainSlack slack,
                           std::optional<Real> q_paper_override) {
    GainCertificate cert;
    cert.family = spec.family;
    cert.n = schedule.agents();
    cert.gamma = dyn.gamma();
    cert.a_lower = schedule.bounds().lower;
    cert.epsilon1 = slack.epsilon1;
    cert.epsilon2 = slack.epsilon2;

    if (cert.n < 2) {
        cert.applicable = false;
        cert.note = "a single agent is trivially at consensus";
        return cert;
    }
    cert.q_value = chain_constant(cert.n - 1);
    cert.q_paper = q_paper_override ? q_paper_override : published_chain_constant(cert.n - 1);

    // Each branch fills threshold_for(q) and the gain it applies to.
    std::function<Real(Real)> threshold_for;
    bool extra_ok = true;
    switch (spec.family) {
        case ControllerFamily::VariableExponent:
            cert.gain_name = "beta";
            cert.gain = spec.beta;
            threshold_for = [&](Real q) {
                return gain_threshold(cert.gamma, cert.a_lower, q, cert.epsilon1, cert.epsilon2);
            };
            break;
        case ControllerFamily::Linear:
            cert.gain_name = "k";
            cert.gain = spec.k;
            threshold_for = [&](Real q) {
                return gain_threshold(cert.gamma, cert.a_lower, q, cert.epsilon1, cert.epsilon2);
            };
            break;
        case ControllerFamily::Combined:
            cert.gain_name = "k";
            cert.gain = spec.k;
            cert.strict = true;
            threshold_for = [&](Real q) { return cert.gamma / (cert.a_lower * q); };
            extra_ok = spec.beta > 0.0;
            cert.note = "also requires beta > 0";
            break;
        case ControllerFamily::PureSig:
            cert.gain_name = "beta";
            cert.gain = spec.beta;
            if (cert.gamma > 0.0) {
                cert.applicable = false;
                cert.note = "pure sig protocol is only covered without inherent dynamics (gamma = 0)";
                return cert;
            }
            cert.strict = true;
            threshold_for = [](Real) { return 0.0; };
            cert.note = "any positive gain suffices without inherent dynamics";
            break;
        case ControllerFamily::SignedAggregate:
            cert.gain_name = "beta";
            cert.gain = spec.beta;
            cert.applicable = false;
            cert.note = "no quantitative gain condition for the signed aggregate protocol";
            return cert;
    }

    const auto meets = [&](Real threshold) {
        return extra_ok && (cert.strict ? cert.gain > threshold : cert.gain >= threshold);
    };
    cert.threshold = threshold_for(cert.q_value);
    cert.satisfied = meets(cert.threshold);
    if (cert.q_paper) {
        cert.threshold_paper = threshold_for(*cert.q_paper);
        cert.satisfied_paper = meets(*cert.threshold_paper);
    }
    return cert;
}

std::string format_certificate(const GainCertificate& cert) {
    std::ostringstream os;
    os.precision(10);
    os << "family = " << to_string(cert.family) << '\n';
    if (!cert.applicable) {
        os << "applicable = false\n";
        os << "status = not applicable\n";
        if (!cert.note.empty()) {
            os << "note = " << cert.note << '\n';
        }
        return os.str();
    }
    os << "applicable = true\n";
    os << "gain = " << cert.gain_name << '\n';
    os << "gain_value = " << cert.gain << '\n';
    os << "n = " << cert.n << '\n';
    os << "gamma = " << cert.gamma << '\n';
    os << "a_lower = " << cert.a_lower << '\n';
    os << "epsilon1 = " << cert.epsilon1 << '\n';
    os << "epsilon2 = " << cert.epsilon2 << '\n';
    os << "comparison = " << (cert.strict ? ">" : ">=") << '\n';
    os << "q_tight = " << cert.q_value << '\n';
    os << "threshold_tight = " << cert.threshold << '\n';
    os << "satisfied_tight = " << (cert.satisfied ? "true" : "false") << '\n';
    if (cert.q_paper) {
        os << "q_paper = " << *cert.q_paper << '\n';
        os << "threshold_paper = " << *cert.threshold_paper << '\n';
        os << "satisfied_paper = " << (*cert.satisfied_paper ? "true" : "false") << '\n';
    } else {
        os << "q_paper = none\n";
    }
    if (!cert.note.empty()) {
        os << "note = " << cert.note << '\n';
    }
    return os.str();
}

}  // namespace ftcons
