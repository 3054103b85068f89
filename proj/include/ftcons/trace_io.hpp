#pragma once

#include "ftcons/simulator.hpp"

#include <iosfwd>
#include <string>

namespace ftcons {

/// 17 significant digits, enough to read back the same double.
std::string format_real(Real v);

/// Columns: t, r_1 .. r_{n*m} (agent-major), G, event. Events at a sample
/// time are joined with ';'.
void write_trace_csv(std::ostream& out, const Trace& trace);

/// Inverse of write_trace_csv; dims is the per-agent dimension m. Controls
/// are not part of the format. Throws std::runtime_error on malformed input.
Trace read_trace_csv(std::istream& in, std::size_t dims = 1);

}  // namespace ftcons
