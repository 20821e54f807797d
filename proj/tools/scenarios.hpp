#pragma once

// Built-in reproduction scenarios. All three share system A, its partner B
// (constants k = (1, -2, 0)) and the simulation protocol: input
// 40 sin(10 pi t), fixed step 0.02, t in [0, 10].
//
//   fig2: C from B with m = (1, 3, 3); every stage starts at (1, -1.5).
//   fig3: C from B with m = (1, -1, 3); every stage relaxed.
//   fig4: C from B with m = (1, 3, 3); arbitrary states that break the
//         initial-state conditions.

#include "ltvcomm/commute.hpp"
#include "ltvcomm/sim.hpp"
#include "ltvcomm/system.hpp"

#include <string>
#include <vector>

namespace ltvcomm::cli {

struct ScenarioSpec {
    std::string name;
    LTVSystem a;
    LTVSystem b;
    LTVSystem c;
    PairConstants k;
    PairConstants m;
    SimulationConfig sim;
    std::vector<Window> windows;
};

inline constexpr const char* kSystemA2 = "1";
inline constexpr const char* kSystemA1 = "3 + sin(t)";
inline constexpr const char* kSystemA0 = "3.25 + 0.25*sin(t)^2 + 1.5*sin(t) + 0.5*cos(t)";
inline constexpr const char* kExampleInput = "40*sin(10*pi*t)";

/// System A of the worked example, relaxed.
LTVSystem example_system_a();

/// figure in {2, 3, 4}; throws std::invalid_argument otherwise.
const ScenarioSpec& builtin_scenario(int figure);

}  // namespace ltvcomm::cli
