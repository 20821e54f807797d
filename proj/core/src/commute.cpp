#include "ltvcomm/commute.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ltvcomm {
namespace {

bool within(double residual, double tol, double scale) { return residual <= tol * (1.0 + scale); }

struct Series {
    double first = 0.0;
    double max_residual = 0.0;
};

Series spread(const std::vector<double>& v) {
    Series s{v.front(), 0.0};
    for (double x : v) s.max_residual = std::max(s.max_residual, std::abs(x - s.first));
    return s;
}

Constancy require_eligible(const LTVSystem& a, double tol) {
    const Constancy inv = commutativity_invariant(a, default_grid(a.t0), tol);
    if (!inv.constant) {
        throw EligibilityError("system not commutativity-eligible: invariant varies by " +
                               std::to_string(inv.max_residual));
    }
    return inv;
}

}  // namespace

void validate(const PairConstants& k) {
    if (!(std::isfinite(k.c2) && std::isfinite(k.c1) && std::isfinite(k.c0))) {
        throw ConstantsError("pair constants must be finite");
    }
    if (!(k.c2 > 0.0)) throw ConstantsError("c2 must be positive");
    if (k.c1 == 0.0) throw ConstantsError("c1 must be nonzero (feedthrough-derivable pair, excluded)");
}

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::CommutativeZeroIC: return "CommutativeZeroIC";
        case Verdict::CommutativeNonzeroIC: return "CommutativeNonzeroIC";
        case Verdict::NotCommutative: return "NotCommutative";
    }
    return "NotCommutative";
}

LTVSystem synthesize_pair(const LTVSystem& a, const PairConstants& k, double tol) {
    validate(k);
    require_eligible(a, tol);
    const CoeffExpr f = structure_function(a);
    LTVSystem b;
    b.a2 = k.c2 * a.a2;
    b.a1 = k.c2 * a.a1 + k.c1 * pow(a.a2, {1, 2});
    b.a0 = k.c2 * a.a0 + k.c1 * f + k.c0;
    b.t0 = a.t0;
    validate(b, default_grid(b.t0));
    return b;
}

CommutativityReport check_pair(const LTVSystem& a, const LTVSystem& b, const TimeGrid& grid, double tol) {
    CommutativityReport r;
    auto fail = [&r](const char* what) {
        r.verdict = Verdict::NotCommutative;
        r.failed_condition = what;
        return r;
    };

    std::vector<double> a2, a1, a0, b2, b1, b0, fa;
    Constancy inv_a, inv_b;
    try {
        a2 = sample(a.a2, grid);
        a1 = sample(a.a1, grid);
        a0 = sample(a.a0, grid);
        b2 = sample(b.a2, grid);
        b1 = sample(b.a1, grid);
        b0 = sample(b.a0, grid);
        fa = sample(structure_function(a), grid);
        inv_a = is_constant(invariant_expr(a), grid, tol);
        inv_b = is_constant(invariant_expr(b), grid, tol);
    } catch (const EvalError&) {
        return fail(condition::kEvaluationError);
    }
    r.invariant_a = inv_a.value;
    r.invariant_b = inv_b.value;
    r.residuals.invariant_a = inv_a.max_residual;
    r.residuals.invariant_b = inv_b.max_residual;

    const std::size_t n = grid.points;
    std::vector<double> row(n);

    for (std::size_t i = 0; i < n; ++i) row[i] = b2[i] / a2[i];
    const Series k2 = spread(row);
    r.residuals.k2 = k2.max_residual;
    if (!within(k2.max_residual, tol, std::abs(k2.first))) return fail(condition::kK2NotConstant);
    if (!(k2.first > 0.0)) return fail(condition::kK2NotPositive);

    for (std::size_t i = 0; i < n; ++i) row[i] = (b1[i] - k2.first * a1[i]) / std::sqrt(a2[i]);
    const Series k1 = spread(row);
    r.residuals.k1 = k1.max_residual;
    if (!within(k1.max_residual, tol, std::abs(k1.first))) return fail(condition::kK1NotConstant);
    if (std::abs(k1.first) <= tol) return fail(condition::kFeedthrough);

    for (std::size_t i = 0; i < n; ++i) row[i] = b0[i] - k2.first * a0[i] - k1.first * fa[i];
    const Series k0 = spread(row);
    r.residuals.k0 = k0.max_residual;
    if (!within(k0.max_residual, tol, std::abs(k0.first))) return fail(condition::kK0NotConstant);

    const PairConstants k{k2.first, k1.first, k0.first};
    r.constants = k;
    if (!inv_a.constant) return fail(condition::kInvariantNotConstant);
    r.zero_ic_commutative = true;

    const InitialState sa = a.state_or_zero();
    const InitialState sb = b.state_or_zero();
    if (sa.is_zero() && sb.is_zero()) {
        r.verdict = Verdict::CommutativeZeroIC;
        return r;
    }

    const double state_gap = std::max(std::abs(sa.y0 - sb.y0), std::abs(sa.dy0 - sb.dy0));
    r.residuals.state_gap = state_gap;
    const double state_scale = std::max({std::abs(sa.y0), std::abs(sa.dy0), std::abs(sb.y0), std::abs(sb.dy0)});
    if (a.t0 != b.t0 || !within(state_gap, tol, state_scale)) return fail(condition::kInitialStatesDiffer);

    const double lhs = std::pow(k.c2 + k.c0 - 1.0, 2);
    const double rhs = k.c1 * k.c1 * (1.0 - inv_a.value);
    r.residuals.quadratic_gap = std::abs(lhs - rhs);
    if (!within(*r.residuals.quadratic_gap, tol, std::abs(lhs) + std::abs(rhs))) {
        return fail(inv_a.value > 1.0 + tol ? condition::kNoRealSolution : condition::kQuadraticViolated);
    }

    double rho;
    try {
        rho = derivative_ratio(a, k);
    } catch (const EvalError&) {
        return fail(condition::kEvaluationError);
    }
    r.residuals.derivative_gap = std::abs(sb.dy0 - rho * sb.y0);
    if (!within(*r.residuals.derivative_gap, tol, std::abs(sb.dy0) + std::abs(rho * sb.y0))) {
        return fail(condition::kDerivativeRatioViolated);
    }

    r.verdict = Verdict::CommutativeNonzeroIC;
    return r;
}

double derivative_ratio(const LTVSystem& a, const PairConstants& k) {
    const double a2 = a.a2.eval(a.t0);
    const double f = structure_function(a).eval(a.t0);
    return -((k.c2 + k.c0 - 1.0) / k.c1 + f) / std::sqrt(a2);
}

double quadratic_condition(double invariant_a, const PairConstants& k) {
    return std::pow(k.c2 + k.c0 - 1.0, 2) - k.c1 * k.c1 * (1.0 - invariant_a);
}

InitialState required_ic(const LTVSystem& a, const PairConstants& k, double y0, double tol) {
    validate(k);
    const Constancy inv = require_eligible(a, tol);
    if (y0 == 0.0) return {0.0, 0.0};

    const double lhs = std::pow(k.c2 + k.c0 - 1.0, 2);
    const double rhs = k.c1 * k.c1 * (1.0 - inv.value);
    if (!within(std::abs(lhs - rhs), tol, std::abs(lhs) + std::abs(rhs))) {
        throw InitialStateError("no commuting nonzero initial state exists for these constants");
    }
    return {y0, derivative_ratio(a, k) * y0};
}

PairConstants invert_constants(const PairConstants& k) {
    validate(k);
    return {1.0 / k.c2, -k.c1 / std::pow(k.c2, 1.5), k.c1 * k.c1 / (2.0 * k.c2 * k.c2) - k.c0 / k.c2};
}

double transform_invariant(double invariant_a, const PairConstants& k) {
    return k.c2 * invariant_a + k.c0 - k.c1 * k.c1 / (4.0 * k.c2);
}

double inverse_transform_invariant(double invariant_b, const PairConstants& k) {
    return (invariant_b - k.c0) / k.c2 + k.c1 * k.c1 / (4.0 * k.c2 * k.c2);
}

CoeffExpr transform_structure(const CoeffExpr& f_a, const PairConstants& k) {
    const double root = std::sqrt(k.c2);
    return root * f_a + k.c1 / (2.0 * root);
}

CoeffExpr inverse_transform_structure(const CoeffExpr& f_b, const PairConstants& k) {
    return f_b / std::sqrt(k.c2) - k.c1 / (2.0 * k.c2);
}

Composition compose_constants(const PairConstants& k, const PairConstants& m, double tol) {
    const double root = std::sqrt(k.c2);
    Composition c;
    c.p = {m.c2 * k.c2, m.c2 * k.c1 + m.c1 * root, m.c2 * k.c0 + m.c1 * k.c1 / (2.0 * root) + m.c0};
    c.degenerate = std::abs(c.p.c1) <= tol;
    return c;
}

double ratio_consistency_residual(const PairConstants& k, const PairConstants& m) {
    const double lhs = (m.c2 + m.c0 - 1.0) / m.c1;
    const double rhs = std::sqrt(k.c2) * ((k.c2 + k.c0 - 1.0) / k.c1 - k.c1 / (2.0 * k.c2));
    return std::abs(lhs - rhs);
}

double composed_ratio_residual(const PairConstants& k, const PairConstants& p) {
    return std::abs((p.c2 + p.c0 - 1.0) / p.c1 - (k.c2 + k.c0 - 1.0) / k.c1);
}

double solve_m1(const PairConstants& k, double m2, double m0) {
    const double q = std::sqrt(k.c2) * ((k.c2 + k.c0 - 1.0) / k.c1 - k.c1 / (2.0 * k.c2));
    if (q == 0.0) throw std::domain_error("identity cannot be solved for m1: ratio term is zero");
    return (m2 + m0 - 1.0) / q;
}

TransitivityReport check_transitivity(const LTVSystem& a, const LTVSystem& b, const LTVSystem& c,
                                      const TimeGrid& grid, double tol) {
    TransitivityReport r;
    r.ab = check_pair(a, b, grid, tol);
    r.bc = check_pair(b, c, grid, tol);
    r.ac = check_pair(a, c, grid, tol);

    if (!(r.ab.constants && r.bc.constants)) return r;
    const PairConstants& k = *r.ab.constants;
    const PairConstants& m = *r.bc.constants;
    r.composed = compose_constants(k, m, tol);
    const PairConstants& p = r.composed->p;

    if (r.ac.constants) {
        const PairConstants& q = *r.ac.constants;
        const double g2 = std::abs(p.c2 - q.c2);
        const double g1 = std::abs(p.c1 - q.c1);
        const double g0 = std::abs(p.c0 - q.c0);
        r.composition_gap = std::max({g2, g1, g0});
        r.constants_match = within(g2, tol, std::abs(p.c2)) && within(g1, tol, std::abs(p.c1)) &&
                            within(g0, tol, std::abs(p.c0));
    }

    const bool unrelaxed = !(a.state_or_zero().is_zero() && b.state_or_zero().is_zero() &&
                             c.state_or_zero().is_zero());
    if (unrelaxed) {
        r.ratio_consistency_residual = ratio_consistency_residual(k, m);
        if (!r.composed->degenerate) r.composed_ratio_residual = composed_ratio_residual(k, p);
    }
    return r;
}

}  // namespace ltvcomm
