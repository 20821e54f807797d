#include "ltvcomm/sim.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace ltvcomm {
namespace {

using State = std::vector<double>;

class Cascade {
public:
    Cascade(std::span<const LTVSystem> chain, CoeffExpr input) : input_(std::move(input)) {
        stages_.reserve(chain.size());
        for (const auto& s : chain) stages_.push_back(s);
    }

    [[nodiscard]] std::size_t size() const { return 2 * stages_.size(); }

    State initial_state() const {
        State x(size());
        for (std::size_t i = 0; i < stages_.size(); ++i) {
            const InitialState ic = stages_[i].state_or_zero();
            x[2 * i] = ic.y0;
            x[2 * i + 1] = ic.dy0;
        }
        return x;
    }

    void rhs(double t, const State& x, State& dx) const {
        double u = input_.eval(t);
        for (std::size_t i = 0; i < stages_.size(); ++i) {
            const LTVSystem& s = stages_[i];
            const double y = x[2 * i];
            const double v = x[2 * i + 1];
            dx[2 * i] = v;
            dx[2 * i + 1] = (u - s.a1.eval(t) * v - s.a0.eval(t) * y) / s.a2.eval(t);
            u = y;
        }
    }

private:
    std::vector<LTVSystem> stages_;
    CoeffExpr input_;
};

// Scratch buffers reused across steps.
struct Workspace {
    explicit Workspace(std::size_t n) : k1(n), k2(n), k3(n), k4(n), tmp(n) {}
    State k1, k2, k3, k4, tmp;
};

void axpy(State& out, const State& x, double h, const State& k) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + h * k[i];
}

// Bogacki-Shampine third-order step (the embedded error estimate is not used).
void bs3_step(const Cascade& c, double t, double h, State& x, Workspace& w) {
    c.rhs(t, x, w.k1);
    axpy(w.tmp, x, 0.5 * h, w.k1);
    c.rhs(t + 0.5 * h, w.tmp, w.k2);
    axpy(w.tmp, x, 0.75 * h, w.k2);
    c.rhs(t + 0.75 * h, w.tmp, w.k3);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += h * (2.0 * w.k1[i] + 3.0 * w.k2[i] + 4.0 * w.k3[i]) / 9.0;
}

void rk4_step(const Cascade& c, double t, double h, State& x, Workspace& w) {
    c.rhs(t, x, w.k1);
    axpy(w.tmp, x, 0.5 * h, w.k1);
    c.rhs(t + 0.5 * h, w.tmp, w.k2);
    axpy(w.tmp, x, 0.5 * h, w.k2);
    c.rhs(t + 0.5 * h, w.tmp, w.k3);
    axpy(w.tmp, x, h, w.k3);
    c.rhs(t + h, w.tmp, w.k4);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] += h * (w.k1[i] + 2.0 * w.k2[i] + 2.0 * w.k3[i] + w.k4[i]) / 6.0;
    }
}

bool within_one_ulp(double r, double target) {
    return r == target || std::nextafter(r, target) == target;
}

void record(Trajectory& out, double t, const State& x) {
    out.times.push_back(t);
    for (std::size_t i = 0; i < out.stages.size(); ++i) out.stages[i].push_back(x[2 * i]);
    out.values.push_back(x[x.size() - 2]);
}

Trajectory integrate(std::span<const LTVSystem> chain, const SimulationConfig& cfg, std::size_t keep_every) {
    if (chain.empty()) throw std::invalid_argument("simulation chain is empty");
    const std::size_t n = cfg.steps();
    const TimeGrid span{cfg.t0, cfg.tf, n + 1};
    for (const auto& s : chain) validate(s, span);

    const Cascade cascade(chain, cfg.input);
    State x = cascade.initial_state();
    Workspace w(x.size());

    Trajectory out;
    out.config = cfg;
    out.substeps = keep_every;
    out.stages.resize(chain.size());
    const std::size_t samples = n / keep_every + 1;
    out.times.reserve(samples);
    out.values.reserve(samples);
    for (auto& s : out.stages) s.reserve(samples);

    record(out, cfg.t0, x);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = cfg.t0 + static_cast<double>(i) * cfg.step;
        if (cfg.integrator == Integrator::BS3) {
            bs3_step(cascade, t, cfg.step, x, w);
        } else {
            rk4_step(cascade, t, cfg.step, x, w);
        }
        for (double v : x) {
            if (!std::isfinite(v)) throw SimulationError("non-finite state", i + 1);
        }
        if ((i + 1) % keep_every == 0) {
            const double t_next = (i + 1 == n) ? cfg.tf : cfg.t0 + static_cast<double>(i + 1) * cfg.step;
            record(out, t_next, x);
        }
    }
    return out;
}

void put(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15e", v);
    os << buf;
}

void require_same_grid(const Trajectory& a, const Trajectory& b) {
    if (a.times.size() != b.times.size()) throw std::invalid_argument("trajectory grids differ in length");
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        const double scale = std::max({1.0, std::abs(a.times[i]), std::abs(b.times[i])});
        if (std::abs(a.times[i] - b.times[i]) > 1e-12 * scale) {
            throw std::invalid_argument("trajectory grids differ at sample " + std::to_string(i));
        }
    }
}

}  // namespace

const char* to_string(Integrator m) noexcept {
    return m == Integrator::BS3 ? "bs3" : "rk4";
}

std::size_t SimulationConfig::steps() const {
    if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("step must be positive");
    if (!(tf > t0)) throw std::invalid_argument("tf must exceed t0");
    const double r = (tf - t0) / step;
    const double n = std::round(r);
    if (n < 1.0 || !within_one_ulp(r, n)) {
        throw std::invalid_argument("span is not an integer multiple of the step");
    }
    return static_cast<std::size_t>(n);
}

std::array<double, 2> StateSpace::derivative(double t, const std::array<double, 2>& state, double u) const {
    return {state[1], (u - sys_.a1.eval(t) * state[1] - sys_.a0.eval(t) * state[0]) / sys_.a2.eval(t)};
}

StateSpace to_state_space(const LTVSystem& s) { return StateSpace(s); }

Trajectory simulate_chain(std::span<const LTVSystem> chain, const SimulationConfig& cfg) {
    return integrate(chain, cfg, 1);
}

Trajectory reference_run(std::span<const LTVSystem> chain, const SimulationConfig& cfg, std::size_t refine) {
    if (refine == 0) throw std::invalid_argument("refine must be positive");
    SimulationConfig fine = cfg;
    fine.step = cfg.step / static_cast<double>(refine);
    fine.integrator = Integrator::RK4Reference;
    const std::size_t coarse = cfg.steps();
    if (fine.steps() != coarse * refine) throw std::invalid_argument("refined step does not tile the span");
    return integrate(chain, fine, refine);
}

ComparisonMetrics compare(const Trajectory& first, const Trajectory& second, std::span<const Window> windows) {
    require_same_grid(first, second);
    ComparisonMetrics m;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < first.values.size(); ++i) {
        const double d = std::abs(first.values[i] - second.values[i]);
        m.max_abs_diff = std::max(m.max_abs_diff, d);
        sum_sq += d * d;
    }
    if (!first.values.empty()) m.rms_diff = std::sqrt(sum_sq / static_cast<double>(first.values.size()));

    for (const Window& w : windows) {
        WindowMetric wm{w, 0.0};
        const double eps = 1e-9 * std::max(1.0, std::abs(w.hi));
        for (std::size_t i = 0; i < first.times.size(); ++i) {
            const double t = first.times[i];
            if (t < w.lo - eps || t > w.hi + eps) continue;
            wm.max_abs_diff = std::max(wm.max_abs_diff, std::abs(first.values[i] - second.values[i]));
        }
        m.windows.push_back(wm);
    }
    return m;
}

void write_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,y\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        put(os, traj.times[i]);
        os << ',';
        put(os, traj.values[i]);
        os << '\n';
    }
}

void write_comparison_csv(std::ostream& os, const Trajectory& first, const Trajectory& second) {
    require_same_grid(first, second);
    os << "t,y_first,y_second,abs_diff\n";
    for (std::size_t i = 0; i < first.times.size(); ++i) {
        put(os, first.times[i]);
        os << ',';
        put(os, first.values[i]);
        os << ',';
        put(os, second.values[i]);
        os << ',';
        put(os, std::abs(first.values[i] - second.values[i]));
        os << '\n';
    }
}

}  // namespace ltvcomm
