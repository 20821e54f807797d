#pragma once

// Closed-form time functions: coefficients, structure functions and input
// signals. Expressions are immutable trees shared by reference, so copies are
// cheap and concurrent evaluation needs no locking.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ltvcomm {

/// Thrown by parse() for malformed text. offset() is the byte position of the
/// offending token in the input.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Thrown when an expression has no finite real value at the requested time.
/// subexpression() is the rendered node that failed.
class EvalError : public std::runtime_error {
public:
    EvalError(const std::string& what, std::string subexpression, double t)
        : std::runtime_error(what + " in '" + subexpression + "' at t=" + std::to_string(t)),
          subexpression_(std::move(subexpression)), t_(t) {}

    [[nodiscard]] const std::string& subexpression() const noexcept { return subexpression_; }
    [[nodiscard]] double time() const noexcept { return t_; }

private:
    std::string subexpression_;
    double t_;
};

/// Exact rational exponent num/den with den > 0 and gcd(num, den) == 1.
struct Rational {
    std::int64_t num = 1;
    std::int64_t den = 1;

    [[nodiscard]] double value() const noexcept {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    [[nodiscard]] bool is_integer() const noexcept { return den == 1; }

    friend bool operator==(const Rational&, const Rational&) = default;
};

/// Reduces num/den to lowest terms with a positive denominator.
Rational make_rational(std::int64_t num, std::int64_t den);

enum class NodeKind {
    Constant,
    Time,
    Pi,
    Neg,
    Sin,
    Cos,
    Exp,
    Sqrt,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
};

struct Node;

class CoeffExpr {
public:
    /// The constant zero.
    CoeffExpr();

    static CoeffExpr constant(double value);
    static CoeffExpr time();
    static CoeffExpr pi();

    [[nodiscard]] double eval(double t) const;
    [[nodiscard]] CoeffExpr derivative() const;

    /// Text in the same grammar parse() accepts.
    [[nodiscard]] std::string render() const;

    [[nodiscard]] NodeKind kind() const noexcept;
    [[nodiscard]] bool is_constant_node() const noexcept;
    /// Value of a Constant or Pi node; only meaningful when is_constant_node().
    [[nodiscard]] double constant_value() const noexcept;
    /// True when the tree does not reference t anywhere.
    [[nodiscard]] bool is_time_independent() const noexcept;

    [[nodiscard]] const Node& node() const noexcept { return *node_; }

    friend CoeffExpr operator+(const CoeffExpr& a, const CoeffExpr& b);
    friend CoeffExpr operator-(const CoeffExpr& a, const CoeffExpr& b);
    friend CoeffExpr operator*(const CoeffExpr& a, const CoeffExpr& b);
    friend CoeffExpr operator/(const CoeffExpr& a, const CoeffExpr& b);
    friend CoeffExpr operator-(const CoeffExpr& a);

    friend CoeffExpr operator+(const CoeffExpr& a, double b) { return a + constant(b); }
    friend CoeffExpr operator+(double a, const CoeffExpr& b) { return constant(a) + b; }
    friend CoeffExpr operator-(const CoeffExpr& a, double b) { return a - constant(b); }
    friend CoeffExpr operator-(double a, const CoeffExpr& b) { return constant(a) - b; }
    friend CoeffExpr operator*(const CoeffExpr& a, double b) { return a * constant(b); }
    friend CoeffExpr operator*(double a, const CoeffExpr& b) { return constant(a) * b; }
    friend CoeffExpr operator/(const CoeffExpr& a, double b) { return a / constant(b); }
    friend CoeffExpr operator/(double a, const CoeffExpr& b) { return constant(a) / b; }

    friend CoeffExpr sin(const CoeffExpr& a);
    friend CoeffExpr cos(const CoeffExpr& a);
    friend CoeffExpr exp(const CoeffExpr& a);
    friend CoeffExpr sqrt(const CoeffExpr& a);
    friend CoeffExpr pow(const CoeffExpr& base, Rational exponent);

private:
    explicit CoeffExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

struct Node {
    NodeKind kind = NodeKind::Constant;
    double value = 0.0;     // Constant
    Rational exponent;      // Pow
    std::vector<CoeffExpr> args;
    bool depends_on_time = false;
};

/// Parses the coefficient grammar: decimal literals, t, pi, sin cos exp sqrt,
/// + - * /, ^ with a rational constant exponent, and parentheses.
/// Precedence: ^ binds tightest, then unary minus, then * /, then + -.
CoeffExpr parse(std::string_view text);

/// Uniformly spaced sample times t0, ..., tf (inclusive).
struct TimeGrid {
    double t0 = 0.0;
    double tf = 10.0;
    std::size_t points = 1001;

    [[nodiscard]] double at(std::size_t i) const noexcept {
        if (points < 2) return t0;
        // Last point is pinned to tf so the span is hit exactly.
        if (i + 1 == points) return tf;
        return t0 + (tf - t0) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
};

inline constexpr double kDefaultConstancyTol = 1e-9;
inline constexpr std::size_t kDefaultGridPoints = 1001;
inline constexpr double kDefaultSpan = 10.0;

/// Default working grid [t0, t0+10] with 1001 points.
TimeGrid default_grid(double t0);

struct Constancy {
    bool constant = false;
    double value = 0.0;         // e(t) at the first grid point
    double max_residual = 0.0;  // max |e(t_i) - e(t_0)|
};

/// Samples e on grid. Constant iff max|e(t_i) - e(t_0)| <= tol * (1 + |e(t_0)|).
/// Throws std::invalid_argument for grids with fewer than two points or tol <= 0.
Constancy is_constant(const CoeffExpr& e, const TimeGrid& grid, double tol = kDefaultConstancyTol);

/// Samples e at every grid point.
std::vector<double> sample(const CoeffExpr& e, const TimeGrid& grid);

}  // namespace ltvcomm
