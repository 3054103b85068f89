#include "ftcons/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ftcons {

std::string format_real(Real v) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(len));
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
    const std::size_t width = trace.agents() * trace.dims();
    out << 't';
    for (std::size_t c = 0; c < width; ++c) {
        out << ",r_" << (c + 1);
    }
    out << ",G,event\n";

    std::size_t e = 0;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        out << format_real(trace.times[k]);
        for (Real v : trace.states[k].data()) {
            out << ',' << format_real(v);
        }
        out << ',' << format_real(trace.disagreement[k]) << ',';
        // An event belongs to the first sample at or after its time.
        bool first = true;
        while (e < trace.events.size() &&
               (trace.events[e].t <= trace.times[k] || k + 1 == trace.size())) {
            out << (first ? "" : ";") << to_string(trace.events[e].kind);
            first = false;
            ++e;
        }
        out << '\n';
    }
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep)) {
        out.push_back(cur);
    }
    if (!line.empty() && line.back() == sep) {
        out.emplace_back();
    }
    return out;
}

Real parse_real(const std::string& s, std::size_t line) {
    Real v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) {
        throw std::runtime_error("trace csv line " + std::to_string(line) + ": bad number '" + s +
                                 "'");
    }
    return v;
}

}  // namespace

Trace read_trace_csv(std::istream& in, std::size_t dims) {
    if (dims == 0) {
        throw std::invalid_argument("dims must be positive");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("trace csv is empty");
    }
    const auto header = split(line, ',');
    if (header.size() < 4 || header.front() != "t" || header[header.size() - 2] != "G" ||
        header.back() != "event") {
        throw std::runtime_error("trace csv header must be t,r_1..r_k,G,event");
    }
    const std::size_t width = header.size() - 3;
    if (width % dims != 0) {
        throw std::runtime_error("state columns do not divide into agents of the given dimension");
    }
    const std::size_t agents = width / dims;

    Trace trace;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != header.size()) {
            throw std::runtime_error("trace csv line " + std::to_string(lineno) + ": expected " +
                                     std::to_string(header.size()) + " cells");
        }
        const Real t = parse_real(cells[0], lineno);
        Matrix r(agents, dims);
        for (std::size_t c = 0; c < width; ++c) {
            r.data()[c] = parse_real(cells[1 + c], lineno);
        }
        trace.times.push_back(t);
        trace.states.push_back(std::move(r));
        trace.disagreement.push_back(parse_real(cells[1 + width], lineno));
        if (!cells.back().empty()) {
            for (const auto& name : split(cells.back(), ';')) {
                trace.events.push_back({t, parse_event_kind(name)});
            }
        }
    }
    return trace;
}

}  // namespace ftcons
