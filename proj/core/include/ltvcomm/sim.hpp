#pragma once

// Fixed-step simulation of cascaded second-order LTV systems.
//
// A chain [S1, S2, ..., Sn] is integrated as one coupled state vector
// (y1, y1', y2, y2', ...): the external input drives S1 and the output of
// stage i is the input of stage i+1. The leftmost system receives the
// external input.

#include "ltvcomm/expr.hpp"
#include "ltvcomm/system.hpp"

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

namespace ltvcomm {

enum class Integrator {
    BS3,           // Bogacki-Shampine 3rd order, fixed step
    RK4Reference,  // classical 4th-order Runge-Kutta
};

const char* to_string(Integrator m) noexcept;
[[nodiscard]] constexpr int method_order(Integrator m) noexcept { return m == Integrator::BS3 ? 3 : 4; }

class SimulationError : public std::runtime_error {
public:
    SimulationError(const std::string& what, std::size_t step)
        : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}

    [[nodiscard]] std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

struct SimulationConfig {
    double t0 = 0.0;
    double tf = 10.0;
    double step = 0.02;
    Integrator integrator = Integrator::BS3;
    CoeffExpr input;

    /// Number of steps; throws std::invalid_argument unless step > 0, tf > t0
    /// and (tf - t0)/step is within one ulp of an integer.
    [[nodiscard]] std::size_t steps() const;
};

struct Trajectory {
    std::vector<double> times;
    /// Output of the last stage.
    std::vector<double> values;
    /// Output of every stage, stages[i][j] at times[j].
    std::vector<std::vector<double>> stages;
    SimulationConfig config;
    /// Integration steps per stored sample (1 unless decimated).
    std::size_t substeps = 1;
};

/// Right-hand side of one second-order system in state-space form:
/// state (y, y') -> (y', (u - a1 y' - a0 y) / a2).
class StateSpace {
public:
    explicit StateSpace(LTVSystem s) : sys_(std::move(s)) {}

    [[nodiscard]] std::array<double, 2> derivative(double t, const std::array<double, 2>& state, double u) const;

private:
    LTVSystem sys_;
};

StateSpace to_state_space(const LTVSystem& s);

/// Integrates the cascade from each stage's own initial state (zero when
/// unset). Throws SimulationError with the step index on non-finite state.
Trajectory simulate_chain(std::span<const LTVSystem> chain, const SimulationConfig& cfg);

/// RK4 at cfg.step / refine, sampled back onto cfg's grid. Used as the
/// integration-error oracle for BS3 runs.
Trajectory reference_run(std::span<const LTVSystem> chain, const SimulationConfig& cfg, std::size_t refine = 20);

struct Window {
    double lo = 0.0;
    double hi = 0.0;
};

struct WindowMetric {
    Window window;
    double max_abs_diff = 0.0;
};

struct ComparisonMetrics {
    double max_abs_diff = 0.0;
    double rms_diff = 0.0;
    std::vector<WindowMetric> windows;
};

/// Throws std::invalid_argument when the trajectories are not on the same grid.
ComparisonMetrics compare(const Trajectory& first, const Trajectory& second, std::span<const Window> windows = {});

/// CSV with header `t,y`.
void write_csv(std::ostream& os, const Trajectory& traj);

/// CSV with header `t,y_first,y_second,abs_diff`.
void write_comparison_csv(std::ostream& os, const Trajectory& first, const Trajectory& second);

}  // namespace ltvcomm
