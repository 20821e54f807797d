#pragma once

// Test-only oracles and random generators. Nothing here calls into the
// library's differentiation or pair algebra, so the checks built on it stay
// independent of the code under test.

#include "ltvcomm/commute.hpp"
#include "ltvcomm/expr.hpp"
#include "ltvcomm/system.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

namespace ltvcomm::testing {

/// Central difference with step h.
inline double central_difference(const std::function<double(double)>& f, double t, double h = 1e-6) {
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

inline double central_difference(const CoeffExpr& e, double t, double h = 1e-6) {
    return central_difference([&e](double x) { return e.eval(x); }, t, h);
}

// Closed forms of the worked example, written out by hand.
namespace example {
inline double a1(double t) { return 3.0 + std::sin(t); }
inline double a0(double t) {
    const double s = std::sin(t);
    return 3.25 + 0.25 * s * s + 1.5 * s + 0.5 * std::cos(t);
}
inline double b1(double t) { return 1.0 + std::sin(t); }
inline double b0(double t) {
    const double s = std::sin(t);
    return 0.25 + 0.25 * s * s + 0.5 * s + 0.5 * std::cos(t);
}
inline double f_a(double t) { return 1.5 + 0.5 * std::sin(t); }
inline double f_b(double t) { return 0.5 + 0.5 * std::sin(t); }
}  // namespace example

class Random {
public:
    explicit Random(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }

    /// Nonzero value with magnitude in [lo, hi] and random sign.
    double signed_magnitude(double lo, double hi) { return (coin() ? 1.0 : -1.0) * uniform(lo, hi); }

    /// Valid pair constants: c2 in [0.25, 4], |c1| in [0.2, 3], c0 in [-3, 3].
    PairConstants constants() { return {uniform(0.25, 4.0), signed_magnitude(0.2, 3.0), uniform(-3.0, 3.0)}; }

    /// Strictly positive leading coefficient on [0, 10].
    CoeffExpr leading() {
        switch (integer(0, 4)) {
            case 0: return CoeffExpr::constant(uniform(0.5, 3.0));
            case 1: return parse(fmt("%g + %g*sin(%g*t)", uniform(1.5, 3.0), uniform(0.1, 1.0), uniform(0.2, 2.0)));
            case 2: return parse(fmt("exp(%g*t)", uniform(-0.1, 0.1)));
            case 3: return parse(fmt("(1 + %g*t)^2", uniform(0.0, 0.2)));
            default: return parse(fmt("%g + %g*cos(%g*t)^2", uniform(0.5, 2.0), uniform(0.0, 1.0), uniform(0.2, 2.0)));
        }
    }

    /// Smooth structure function.
    CoeffExpr structure() {
        return parse(fmt("%g + %g*sin(%g*t) + %g*cos(%g*t)", uniform(-2.0, 2.0), uniform(-1.0, 1.0),
                         uniform(0.1, 3.0), uniform(-1.0, 1.0), uniform(0.1, 3.0)));
    }

    /// Eligible system with invariant drawn from [lo, hi].
    LTVSystem eligible_system(double lo = -2.0, double hi = 1.0) {
        return generate(leading(), structure(), uniform(lo, hi), 0.0);
    }

    /// Random expression tree over t with well-defined values on [0, 3].
    CoeffExpr expression(int depth) {
        if (depth == 0) {
            return coin() ? CoeffExpr::time() : CoeffExpr::constant(uniform(-2.0, 2.0));
        }
        const CoeffExpr a = expression(depth - 1);
        switch (integer(0, 9)) {
            case 0: return a + expression(depth - 1);
            case 1: return a - expression(depth - 1);
            case 2: return a * expression(depth - 1);
            case 3: return a / (2.5 + sin(expression(depth - 1)));
            case 4: return sin(a);
            case 5: return cos(a);
            case 6: return exp(0.3 * sin(a));
            case 7: return sqrt(1.0 + pow(a, {2, 1}));
            case 8: return pow(1.5 + cos(a), {integer(-3, 3), 2});
            default: return -a;
        }
    }

    std::mt19937_64& engine() { return rng_; }

private:
    template <typename... Args>
    static std::string fmt(const char* f, Args... args) {
        char buf[256];
        std::snprintf(buf, sizeof(buf), f, args...);
        return buf;
    }

    std::mt19937_64 rng_;
};

}  // namespace ltvcomm::testing
