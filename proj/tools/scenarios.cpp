#include "scenarios.hpp"

#include <array>
#include <stdexcept>

namespace ltvcomm::cli {
namespace {

ScenarioSpec build(int figure) {
    ScenarioSpec s;
    s.name = "fig" + std::to_string(figure);
    s.k = {1.0, -2.0, 0.0};
    s.m = figure == 3 ? PairConstants{1.0, -1.0, 3.0} : PairConstants{1.0, 3.0, 3.0};
    s.a = example_system_a();
    s.b = synthesize_pair(s.a, s.k);
    s.c = synthesize_pair(s.b, s.m);

    switch (figure) {
        case 2:
            s.a.ic = s.b.ic = s.c.ic = InitialState{1.0, -1.5};
            break;
        case 3:
            s.a.ic = s.b.ic = s.c.ic = InitialState{0.0, 0.0};
            break;
        case 4:
            s.a.ic = InitialState{0.4, -0.3};
            s.b.ic = InitialState{0.2, -0.4};
            s.c.ic = InitialState{-0.5, 0.5};
            break;
        default: throw std::invalid_argument("no built-in scenario for figure " + std::to_string(figure));
    }

    s.sim.t0 = 0.0;
    s.sim.tf = 10.0;
    s.sim.step = 0.02;
    s.sim.integrator = Integrator::BS3;
    s.sim.input = parse(kExampleInput);
    s.windows = {{0.0, 1.0}, {9.0, 10.0}};
    return s;
}

}  // namespace

LTVSystem example_system_a() { return make_system(kSystemA2, kSystemA1, kSystemA0, 0.0); }

const ScenarioSpec& builtin_scenario(int figure) {
    if (figure < 2 || figure > 4) {
        throw std::invalid_argument("no built-in scenario for figure " + std::to_string(figure));
    }
    static const std::array<ScenarioSpec, 3> scenarios{build(2), build(3), build(4)};
    return scenarios[static_cast<std::size_t>(figure - 2)];
}

}  // namespace ltvcomm::cli
