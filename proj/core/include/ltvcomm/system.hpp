#pragma once

// Second-order linear time-varying system
//
//     a2(t) y'' + a1(t) y' + a0(t) y = x(t),   t >= t0,
//
// with an optional initial state (y(t0), y'(t0)).

#include "ltvcomm/expr.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace ltvcomm {

/// Structural problem with a system: non-positive leading coefficient,
/// non-finite coefficients or initial state, or a malformed system file.
class SystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct InitialState {
    double y0 = 0.0;
    double dy0 = 0.0;

    [[nodiscard]] bool is_zero() const noexcept { return y0 == 0.0 && dy0 == 0.0; }
    friend bool operator==(const InitialState&, const InitialState&) = default;
};

struct LTVSystem {
    CoeffExpr a2 = CoeffExpr::constant(1.0);
    CoeffExpr a1;
    CoeffExpr a0;
    double t0 = 0.0;
    std::optional<InitialState> ic;

    /// The initial state, or the relaxed state when none is set.
    [[nodiscard]] InitialState state_or_zero() const noexcept { return ic.value_or(InitialState{}); }
};

/// Checks a2 > 0 and finite coefficients at every grid point, and a finite
/// initial state. Throws SystemError naming the first failing time.
void validate(const LTVSystem& s, const TimeGrid& grid);

/// Builds and validates a system on the default grid [t0, t0 + 10].
LTVSystem make_system(std::string_view a2, std::string_view a1, std::string_view a0, double t0 = 0.0,
                      std::optional<InitialState> ic = std::nullopt);

/// f = a2^(-1/2) (2 a1 - a2') / 4
CoeffExpr structure_function(const LTVSystem& s);

/// a0 - f^2 - a2^(1/2) f', the quantity whose constancy makes a system
/// eligible for a non-trivial commutative partner.
CoeffExpr invariant_expr(const LTVSystem& s);

/// Constancy of invariant_expr() on grid. value is the invariant (A0) and
/// constant tells whether the system is commutativity-eligible.
Constancy commutativity_invariant(const LTVSystem& s, const TimeGrid& grid, double tol = kDefaultConstancyTol);

/// Inverse of structure_function / invariant_expr: returns the system with
/// leading coefficient a2, structure function f and invariant A0, i.e.
///   a1 = 2 a2^(1/2) f + a2'/2,   a0 = A0 + f^2 + a2^(1/2) f'.
/// Throws SystemError if a2 is not strictly positive on the default grid.
LTVSystem generate(const CoeffExpr& a2, const CoeffExpr& f, double invariant, double t0 = 0.0);

// System file I/O. The format is a JSON object
//   {"a2": "...", "a1": "...", "a0": "...", "t0": 0, "ic": {"y0": 1, "dy0": -1.5}}
// with "ic" optional. Loaded systems are validated on the default grid.

LTVSystem system_from_json_text(std::string_view text);
std::string system_to_json_text(const LTVSystem& s);
LTVSystem load_system(const std::filesystem::path& path);
void save_system(const LTVSystem& s, const std::filesystem::path& path);

}  // namespace ltvcomm
