#pragma once

// Commutativity and transitivity algebra for cascaded second-order LTV
// systems.
//
// Two systems A and B commute (zero initial states) iff A's invariant
// a0 - f_A^2 - a2^(1/2) f_A' is a constant A0 and
//
//     b2 = c2 a2
//     b1 = c2 a1 + c1 a2^(1/2)
//     b0 = c2 a0 + c1 f_A + c0
//
// for constants (c2, c1, c0) with c2 > 0 and c1 != 0 (c1 = 0 would make B a
// constant-gain feed-forward/feedback variant of A, which is excluded).
// Nonzero initial states additionally need equal states at t0,
// (c2 + c0 - 1)^2 = c1^2 (1 - A0), and y'(t0) = rho * y(t0) with
// rho = -a2(t0)^(-1/2) [(c2 + c0 - 1)/c1 + f_A(t0)].
//
// The same triple type carries the forward constants (A -> B), the inverse
// constants (B -> A), and the composed constants of a chain A -> B -> C.

#include "ltvcomm/expr.hpp"
#include "ltvcomm/system.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace ltvcomm {

/// Constants are outside the admissible set (c2 <= 0, c1 == 0, non-finite).
class ConstantsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A system fails the eligibility (constant invariant) precondition.
class EligibilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No nonzero initial state makes the pair commute for these constants.
class InitialStateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PairConstants {
    double c2 = 1.0;
    double c1 = 0.0;
    double c0 = 0.0;

    friend bool operator==(const PairConstants&, const PairConstants&) = default;
};

/// Throws ConstantsError unless c2 > 0, c1 != 0 and all entries are finite.
void validate(const PairConstants& k);

enum class Verdict { CommutativeZeroIC, CommutativeNonzeroIC, NotCommutative };

const char* to_string(Verdict v) noexcept;

/// Failure labels used in CommutativityReport::failed_condition.
namespace condition {
inline constexpr const char* kK2NotConstant = "k2 not constant";
inline constexpr const char* kK2NotPositive = "k2 not positive";
inline constexpr const char* kK1NotConstant = "k1 not constant";
inline constexpr const char* kFeedthrough = "feedthrough-derivable pair, excluded";
inline constexpr const char* kK0NotConstant = "k0 not constant";
inline constexpr const char* kInvariantNotConstant = "invariant of first system not constant";
inline constexpr const char* kInitialStatesDiffer = "initial states differ";
inline constexpr const char* kNoRealSolution = "no real solution to the initial-state condition (A0 > 1)";
inline constexpr const char* kQuadraticViolated = "initial-state constant condition violated";
inline constexpr const char* kDerivativeRatioViolated = "initial derivative ratio violated";
inline constexpr const char* kEvaluationError = "coefficient evaluation error";
}  // namespace condition

struct PairResiduals {
    double k2 = 0.0;
    double k1 = 0.0;
    double k0 = 0.0;
    double invariant_a = 0.0;
    double invariant_b = 0.0;
    std::optional<double> state_gap;         // max(|y_A - y_B|, |y'_A - y'_B|) at t0
    std::optional<double> quadratic_gap;     // |(c2+c0-1)^2 - c1^2 (1 - A0)|
    std::optional<double> derivative_gap;    // |y'_B(t0) - rho y_B(t0)|
};

struct CommutativityReport {
    Verdict verdict = Verdict::NotCommutative;
    std::optional<PairConstants> constants;
    double invariant_a = 0.0;
    double invariant_b = 0.0;
    PairResiduals residuals;
    std::optional<std::string> failed_condition;
    /// True when the zero-initial-state conditions hold, whatever the states.
    bool zero_ic_commutative = false;

    [[nodiscard]] bool commutative() const noexcept { return verdict != Verdict::NotCommutative; }
};

/// B with b2 = k2 a2, b1 = k2 a1 + k1 a2^(1/2), b0 = k2 a0 + k1 f_A + k0.
/// B's initial state is left unset (see required_ic).
/// Throws ConstantsError for invalid k, EligibilityError when A's invariant
/// is not constant on the default grid.
LTVSystem synthesize_pair(const LTVSystem& a, const PairConstants& k, double tol = kDefaultConstancyTol);

/// Recovers (k2, k1, k0) pointwise from the coefficients, checks each is
/// constant, checks A's invariant, and when either system carries a nonzero
/// initial state, checks the initial-state conditions. Never throws for
/// non-commuting inputs; failures are reported in the verdict.
CommutativityReport check_pair(const LTVSystem& a, const LTVSystem& b, const TimeGrid& grid,
                               double tol = kDefaultConstancyTol);

/// rho = -a2(t0)^(-1/2) [(k2 + k0 - 1)/k1 + f_A(t0)], the required ratio
/// y'(t0) / y(t0) for a commuting unrelaxed pair.
double derivative_ratio(const LTVSystem& a, const PairConstants& k);

/// (k2 + k0 - 1)^2 - k1^2 (1 - A0); zero when a nonzero initial state can
/// make the pair commute.
double quadratic_condition(double invariant_a, const PairConstants& k);

/// The initial state (y0, rho * y0). Throws InitialStateError when the
/// quadratic condition fails for A's invariant, EligibilityError when A is not
/// eligible.
InitialState required_ic(const LTVSystem& a, const PairConstants& k, double y0,
                         double tol = kDefaultConstancyTol);

/// Constants of the reverse direction (B -> A):
/// l = (1/k2, -k1/k2^(3/2), k1^2/(2 k2^2) - k0/k2). An involution.
PairConstants invert_constants(const PairConstants& k);

/// B0 = k2 A0 + k0 - k1^2/(4 k2).
double transform_invariant(double invariant_a, const PairConstants& k);

/// A0 = (B0 - k0)/k2 + k1^2/(4 k2^2), the inverse of transform_invariant.
double inverse_transform_invariant(double invariant_b, const PairConstants& k);

/// f_B = k2^(1/2) f_A + k1/(2 k2^(1/2)).
CoeffExpr transform_structure(const CoeffExpr& f_a, const PairConstants& k);

/// f_A = k2^(-1/2) f_B - k1/(2 k2), the inverse of transform_structure.
CoeffExpr inverse_transform_structure(const CoeffExpr& f_b, const PairConstants& k);

struct Composition {
    PairConstants p;
    /// |p1| <= tol: A and C differ only by constant gains.
    bool degenerate = false;
};

/// Constants linking A to C when k links A to B and m links B to C:
/// p = (m2 k2, m2 k1 + m1 k2^(1/2), m2 k0 + m1 k1/(2 k2^(1/2)) + m0).
Composition compose_constants(const PairConstants& k, const PairConstants& m, double tol = kDefaultConstancyTol);

/// |(m2 + m0 - 1)/m1 - k2^(1/2) [(k2 + k0 - 1)/k1 - k1/(2 k2)]|. Vanishes when
/// (A, B) and (B, C) commute with a shared nonzero initial state, and for
/// m = invert_constants(k).
double ratio_consistency_residual(const PairConstants& k, const PairConstants& m);

/// |(p2 + p0 - 1)/p1 - (k2 + k0 - 1)/k1|, the composed constants preserving
/// the initial-state ratio term.
double composed_ratio_residual(const PairConstants& k, const PairConstants& p);

/// Solves ratio_consistency_residual for m1 given k, m2 and m0.
double solve_m1(const PairConstants& k, double m2, double m0);

struct TransitivityReport {
    CommutativityReport ab;
    CommutativityReport bc;
    CommutativityReport ac;
    std::optional<Composition> composed;
    /// max_i |p_i - recovered (A,C) constant_i| when both are available.
    std::optional<double> composition_gap;
    bool constants_match = false;
    /// Present when the chain runs with nonzero initial states.
    std::optional<double> ratio_consistency_residual;
    std::optional<double> composed_ratio_residual;

    /// (A,B), (B,C), (A,C) all commute and the composed constants match.
    [[nodiscard]] bool holds() const noexcept {
        return ab.commutative() && bc.commutative() && ac.commutative() && constants_match;
    }
};

TransitivityReport check_transitivity(const LTVSystem& a, const LTVSystem& b, const LTVSystem& c,
                                      const TimeGrid& grid, double tol = kDefaultConstancyTol);

}  // namespace ltvcomm
