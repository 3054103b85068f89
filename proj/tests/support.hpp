#pragma once

#include "ftcons/graph.hpp"

#include <string>

namespace fixtures {

// The two four-agent graphs of the bundled demo: a chain rooted at agent 4
// and its reverse rooted at agent 1 (0-based storage).
inline ftcons::DirectedGraph chain_to_front() {
    ftcons::DirectedGraph g(4);
    g.add_neighbor(0, 1).add_neighbor(1, 2).add_neighbor(2, 3);
    return g;
}

inline ftcons::DirectedGraph chain_to_back() {
    ftcons::DirectedGraph g(4);
    g.add_neighbor(1, 0).add_neighbor(2, 1).add_neighbor(3, 2);
    return g;
}

inline ftcons::SwitchingSchedule demo_schedule() {
    return ftcons::SwitchingSchedule({{0.5, chain_to_front()}, {0.5, chain_to_back()}}, true, 0.5,
                                     ftcons::WeightBounds{1.0, 1.0});
}

inline std::string config_path(const char* name) {
    return std::string(FTCONS_CONFIG_DIR) + "/" + name;
}

}  // namespace fixtures
