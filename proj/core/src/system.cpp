#include "ltvcomm/system.hpp"

#include <cmath>
#include <sstream>

namespace ltvcomm {
namespace {

const Rational kHalf{1, 2};
const Rational kMinusHalf{-1, 2};

std::string at_time(double t) {
    std::ostringstream os;
    os.precision(12);
    os << t;
    return os.str();
}

void check_finite(const CoeffExpr& e, const char* name, double t) {
    double v;
    try {
        v = e.eval(t);
    } catch (const EvalError& err) {
        throw SystemError(std::string(name) + " cannot be evaluated: " + err.what());
    }
    if (!std::isfinite(v)) throw SystemError(std::string(name) + " not finite at t=" + at_time(t));
}

}  // namespace

void validate(const LTVSystem& s, const TimeGrid& grid) {
    if (!std::isfinite(s.t0)) throw SystemError("t0 must be finite");
    if (s.ic && !(std::isfinite(s.ic->y0) && std::isfinite(s.ic->dy0))) {
        throw SystemError("initial state must be finite");
    }
    for (std::size_t i = 0; i < grid.points; ++i) {
        const double t = grid.at(i);
        check_finite(s.a2, "a2", t);
        check_finite(s.a1, "a1", t);
        check_finite(s.a0, "a0", t);
        if (!(s.a2.eval(t) > 0.0)) throw SystemError("a2 not strictly positive at t=" + at_time(t));
    }
}

LTVSystem make_system(std::string_view a2, std::string_view a1, std::string_view a0, double t0,
                      std::optional<InitialState> ic) {
    LTVSystem s{parse(a2), parse(a1), parse(a0), t0, ic};
    validate(s, default_grid(t0));
    return s;
}

CoeffExpr structure_function(const LTVSystem& s) {
    return pow(s.a2, kMinusHalf) * (2.0 * s.a1 - s.a2.derivative()) / 4.0;
}

CoeffExpr invariant_expr(const LTVSystem& s) {
    const CoeffExpr f = structure_function(s);
    return s.a0 - pow(f, {2, 1}) - pow(s.a2, kHalf) * f.derivative();
}

Constancy commutativity_invariant(const LTVSystem& s, const TimeGrid& grid, double tol) {
    return is_constant(invariant_expr(s), grid, tol);
}

LTVSystem generate(const CoeffExpr& a2, const CoeffExpr& f, double invariant, double t0) {
    const CoeffExpr root = pow(a2, kHalf);
    LTVSystem s;
    s.a2 = a2;
    s.a1 = 2.0 * root * f + a2.derivative() / 2.0;
    s.a0 = invariant + pow(f, {2, 1}) + root * f.derivative();
    s.t0 = t0;
    validate(s, default_grid(t0));
    return s;
}

}  // namespace ltvcomm
