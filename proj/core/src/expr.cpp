#include "ltvcomm/expr.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <system_error>

namespace ltvcomm {

Rational make_rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return {num, den};
}

namespace {

std::shared_ptr<Node> new_node(NodeKind kind, std::vector<CoeffExpr> args = {}) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->depends_on_time = (kind == NodeKind::Time);
    for (const auto& a : args) n->depends_on_time = n->depends_on_time || a.node().depends_on_time;
    n->args = std::move(args);
    return n;
}

bool is_zero(const CoeffExpr& e) {
    return e.kind() == NodeKind::Constant && e.constant_value() == 0.0;
}

bool is_one(const CoeffExpr& e) {
    return e.kind() == NodeKind::Constant && e.constant_value() == 1.0;
}

// Collapses a time-independent tree to a literal when it evaluates cleanly.
// Trees that fail evaluation (e.g. sqrt(-1)) are kept so the error surfaces
// at eval time with the offending subexpression.
CoeffExpr fold(const CoeffExpr& e) {
    if (e.is_time_independent() && !e.is_constant_node()) {
        try {
            return CoeffExpr::constant(e.eval(0.0));
        } catch (const EvalError&) {
        }
    }
    return e;
}

int precedence(const CoeffExpr& e) {
    switch (e.kind()) {
        case NodeKind::Add:
        case NodeKind::Sub: return 1;
        case NodeKind::Mul:
        case NodeKind::Div: return 2;
        case NodeKind::Neg: return 3;
        case NodeKind::Constant: return e.constant_value() < 0.0 || std::signbit(e.constant_value()) ? 3 : 5;
        case NodeKind::Pow: return 4;
        default: return 5;
    }
}

std::string format_number(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("cannot format number");
    return {buf, end};
}

std::string wrap(const CoeffExpr& e, int min_prec) {
    std::string s = e.render();
    if (precedence(e) < min_prec) return "(" + s + ")";
    return s;
}

[[noreturn]] void fail(const char* what, const CoeffExpr& e, double t) {
    throw EvalError(what, e.render(), t);
}

}  // namespace

CoeffExpr::CoeffExpr() : CoeffExpr(constant(0.0)) {}

CoeffExpr CoeffExpr::constant(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("constant must be finite");
    auto n = new_node(NodeKind::Constant);
    n->value = value;
    return CoeffExpr(std::move(n));
}

CoeffExpr CoeffExpr::time() { return CoeffExpr(new_node(NodeKind::Time)); }

CoeffExpr CoeffExpr::pi() {
    auto n = new_node(NodeKind::Pi);
    n->value = std::numbers::pi;
    return CoeffExpr(std::move(n));
}

NodeKind CoeffExpr::kind() const noexcept { return node_->kind; }

bool CoeffExpr::is_constant_node() const noexcept {
    return node_->kind == NodeKind::Constant || node_->kind == NodeKind::Pi;
}

double CoeffExpr::constant_value() const noexcept { return node_->value; }

bool CoeffExpr::is_time_independent() const noexcept { return !node_->depends_on_time; }

double CoeffExpr::eval(double t) const {
    const Node& n = *node_;
    switch (n.kind) {
        case NodeKind::Constant:
        case NodeKind::Pi: return n.value;
        case NodeKind::Time: return t;
        case NodeKind::Neg: return -n.args[0].eval(t);
        case NodeKind::Sin: return std::sin(n.args[0].eval(t));
        case NodeKind::Cos: return std::cos(n.args[0].eval(t));
        case NodeKind::Exp: {
            const double r = std::exp(n.args[0].eval(t));
            if (!std::isfinite(r)) fail("overflow", *this, t);
            return r;
        }
        case NodeKind::Sqrt: {
            const double u = n.args[0].eval(t);
            if (u < 0.0) fail("sqrt of negative", *this, t);
            return std::sqrt(u);
        }
        case NodeKind::Add: return n.args[0].eval(t) + n.args[1].eval(t);
        case NodeKind::Sub: return n.args[0].eval(t) - n.args[1].eval(t);
        case NodeKind::Mul: return n.args[0].eval(t) * n.args[1].eval(t);
        case NodeKind::Div: {
            const double num = n.args[0].eval(t);
            const double den = n.args[1].eval(t);
            if (den == 0.0) fail("division by zero", *this, t);
            const double r = num / den;
            if (!std::isfinite(r)) fail("overflow", *this, t);
            return r;
        }
        case NodeKind::Pow: {
            const double b = n.args[0].eval(t);
            const Rational& r = n.exponent;
            if (b == 0.0 && r.num < 0) fail("division by zero", *this, t);
            double out;
            if (r.is_integer()) {
                out = std::pow(b, static_cast<double>(r.num));
            } else {
                if (b < 0.0) fail("non-integer power of negative", *this, t);
                out = r.den == 2 ? std::pow(std::sqrt(b), static_cast<double>(r.num)) : std::pow(b, r.value());
            }
            if (!std::isfinite(out)) fail("overflow", *this, t);
            return out;
        }
    }
    return 0.0;
}

CoeffExpr CoeffExpr::derivative() const {
    const Node& n = *node_;
    if (!n.depends_on_time) return constant(0.0);
    const auto& args = n.args;
    switch (n.kind) {
        case NodeKind::Time: return constant(1.0);
        case NodeKind::Neg: return -args[0].derivative();
        case NodeKind::Sin: return cos(args[0]) * args[0].derivative();
        case NodeKind::Cos: return -(sin(args[0]) * args[0].derivative());
        case NodeKind::Exp: return *this * args[0].derivative();
        case NodeKind::Sqrt: return args[0].derivative() / (2.0 * *this);
        case NodeKind::Add: return args[0].derivative() + args[1].derivative();
        case NodeKind::Sub: return args[0].derivative() - args[1].derivative();
        case NodeKind::Mul:
            return args[0].derivative() * args[1] + args[0] * args[1].derivative();
        case NodeKind::Div: {
            const CoeffExpr& u = args[0];
            const CoeffExpr& v = args[1];
            if (v.is_time_independent()) return u.derivative() / v;
            return (u.derivative() * v - u * v.derivative()) / pow(v, make_rational(2, 1));
        }
        case NodeKind::Pow: {
            const Rational& r = n.exponent;
            const Rational lowered = make_rational(r.num - r.den, r.den);
            return constant(r.value()) * pow(args[0], lowered) * args[0].derivative();
        }
        default: return constant(0.0);
    }
}

std::string CoeffExpr::render() const {
    const Node& n = *node_;
    switch (n.kind) {
        case NodeKind::Constant: return format_number(n.value);
        case NodeKind::Time: return "t";
        case NodeKind::Pi: return "pi";
        case NodeKind::Neg: return "-" + wrap(n.args[0], 4);
        case NodeKind::Sin: return "sin(" + n.args[0].render() + ")";
        case NodeKind::Cos: return "cos(" + n.args[0].render() + ")";
        case NodeKind::Exp: return "exp(" + n.args[0].render() + ")";
        case NodeKind::Sqrt: return "sqrt(" + n.args[0].render() + ")";
        case NodeKind::Add: return wrap(n.args[0], 1) + " + " + wrap(n.args[1], 2);
        case NodeKind::Sub: return wrap(n.args[0], 1) + " - " + wrap(n.args[1], 2);
        case NodeKind::Mul: return wrap(n.args[0], 2) + "*" + wrap(n.args[1], 3);
        case NodeKind::Div: return wrap(n.args[0], 2) + "/" + wrap(n.args[1], 4);
        case NodeKind::Pow: {
            std::string e = std::to_string(n.exponent.num);
            if (!n.exponent.is_integer()) e += "/" + std::to_string(n.exponent.den);
            if (!n.exponent.is_integer() || n.exponent.num < 0) e = "(" + e + ")";
            return wrap(n.args[0], 5) + "^" + e;
        }
    }
    return {};
}

CoeffExpr operator+(const CoeffExpr& a, const CoeffExpr& b) {
    if (is_zero(a)) return b;
    if (is_zero(b)) return a;
    // a + (-c) and a + (-c)*x read better as subtractions; negation is exact.
    if (b.kind() == NodeKind::Constant && b.constant_value() < 0.0) return a - (-b);
    if (b.kind() == NodeKind::Mul) {
        const CoeffExpr& lead = b.node().args[0];
        if (lead.kind() == NodeKind::Constant && lead.constant_value() < 0.0) {
            return a - (-lead) * b.node().args[1];
        }
    }
    return fold(CoeffExpr(new_node(NodeKind::Add, {a, b})));
}

CoeffExpr operator-(const CoeffExpr& a, const CoeffExpr& b) {
    if (is_zero(b)) return a;
    if (is_zero(a)) return -b;
    return fold(CoeffExpr(new_node(NodeKind::Sub, {a, b})));
}

CoeffExpr operator*(const CoeffExpr& a, const CoeffExpr& b) {
    if (is_zero(a) || is_zero(b)) return CoeffExpr::constant(0.0);
    if (is_one(a)) return b;
    if (is_one(b)) return a;
    return fold(CoeffExpr(new_node(NodeKind::Mul, {a, b})));
}

CoeffExpr operator/(const CoeffExpr& a, const CoeffExpr& b) {
    if (is_one(b)) return a;
    if (is_zero(a) && !is_zero(b)) return CoeffExpr::constant(0.0);
    return fold(CoeffExpr(new_node(NodeKind::Div, {a, b})));
}

CoeffExpr operator-(const CoeffExpr& a) {
    if (a.kind() == NodeKind::Constant) return CoeffExpr::constant(-a.constant_value());
    if (a.kind() == NodeKind::Neg) return a.node().args[0];
    return CoeffExpr(new_node(NodeKind::Neg, {a}));
}

CoeffExpr sin(const CoeffExpr& a) { return fold(CoeffExpr(new_node(NodeKind::Sin, {a}))); }
CoeffExpr cos(const CoeffExpr& a) { return fold(CoeffExpr(new_node(NodeKind::Cos, {a}))); }
CoeffExpr exp(const CoeffExpr& a) { return fold(CoeffExpr(new_node(NodeKind::Exp, {a}))); }
CoeffExpr sqrt(const CoeffExpr& a) { return fold(CoeffExpr(new_node(NodeKind::Sqrt, {a}))); }

CoeffExpr pow(const CoeffExpr& base, Rational exponent) {
    exponent = make_rational(exponent.num, exponent.den);
    if (exponent.num == 0) return CoeffExpr::constant(1.0);
    if (exponent == Rational{1, 1}) return base;
    if (is_one(base)) return base;
    auto n = new_node(NodeKind::Pow, {base});
    n->exponent = exponent;
    return fold(CoeffExpr(std::move(n)));
}

TimeGrid default_grid(double t0) { return {t0, t0 + kDefaultSpan, kDefaultGridPoints}; }

std::vector<double> sample(const CoeffExpr& e, const TimeGrid& grid) {
    std::vector<double> out(grid.points);
    for (std::size_t i = 0; i < grid.points; ++i) out[i] = e.eval(grid.at(i));
    return out;
}

Constancy is_constant(const CoeffExpr& e, const TimeGrid& grid, double tol) {
    if (grid.points < 2) throw std::invalid_argument("constancy grid needs at least two points");
    if (!(tol > 0.0)) throw std::invalid_argument("constancy tolerance must be positive");
    Constancy c;
    c.value = e.eval(grid.at(0));
    for (std::size_t i = 1; i < grid.points; ++i) {
        c.max_residual = std::max(c.max_residual, std::abs(e.eval(grid.at(i)) - c.value));
    }
    c.constant = c.max_residual <= tol * (1.0 + std::abs(c.value));
    return c;
}

}  // namespace ltvcomm
