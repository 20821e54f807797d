// Recursive-descent parser for the coefficient grammar.
//
//   expr     := term (('+' | '-') term)*
//   term     := unary (('*' | '/') unary)*
//   unary    := '-' unary | power
//   power    := primary ('^' exponent)?
//   exponent := '-' exponent | power        (must not depend on t)
//   primary  := number | 't' | 'pi' | func '(' expr ')' | '(' expr ')'
//   func     := 'sin' | 'cos' | 'exp' | 'sqrt'

#include "ltvcomm/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

namespace ltvcomm {
namespace {

constexpr std::int64_t kMaxExponentDenominator = 1000;

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    CoeffExpr run() {
        skip_ws();
        if (at_end()) throw ParseError("empty expression", pos_);
        CoeffExpr e = expr();
        skip_ws();
        if (!at_end()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        return e;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (!at_end() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (at_end()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
    }

    CoeffExpr expr() {
        CoeffExpr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = lhs + term();
            } else if (accept('-')) {
                lhs = lhs - term();
            } else {
                return lhs;
            }
        }
    }

    CoeffExpr term() {
        CoeffExpr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = lhs * unary();
            } else if (accept('/')) {
                lhs = lhs / unary();
            } else {
                return lhs;
            }
        }
    }

    CoeffExpr unary() {
        if (accept('-')) return -unary();
        return power();
    }

    CoeffExpr power() {
        CoeffExpr base = primary();
        skip_ws();
        if (!accept('^')) return base;
        skip_ws();
        const std::size_t at = pos_;
        CoeffExpr e = exponent();
        if (!e.is_time_independent()) throw ParseError("exponent must be constant", at);
        return pow(base, to_rational(e.eval(0.0), at));
    }

    CoeffExpr exponent() {
        if (accept('-')) return -exponent();
        return power();
    }

    static Rational to_rational(double v, std::size_t at) {
        for (std::int64_t den = 1; den <= kMaxExponentDenominator; ++den) {
            const double scaled = v * static_cast<double>(den);
            const double num = std::round(scaled);
            if (std::abs(num) > 1e12) break;
            if (std::abs(num / static_cast<double>(den) - v) <= 1e-12 * std::max(1.0, std::abs(v))) {
                return make_rational(static_cast<std::int64_t>(num), den);
            }
        }
        throw ParseError("exponent must be a rational constant", at);
    }

    CoeffExpr primary() {
        skip_ws();
        if (at_end()) throw ParseError("unexpected end of input", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            CoeffExpr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    CoeffExpr number() {
        const std::size_t start = pos_;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v,
                                         std::chars_format::general);
        if (ec != std::errc{} || !std::isfinite(v)) throw ParseError("malformed number", start);
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return CoeffExpr::constant(v);
    }

    CoeffExpr identifier() {
        const std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "t") return CoeffExpr::time();
        if (name == "pi") return CoeffExpr::pi();

        CoeffExpr (*fn)(const CoeffExpr&) = nullptr;
        if (name == "sin") fn = [](const CoeffExpr& a) { return sin(a); };
        else if (name == "cos") fn = [](const CoeffExpr& a) { return cos(a); };
        else if (name == "exp") fn = [](const CoeffExpr& a) { return exp(a); };
        else if (name == "sqrt") fn = [](const CoeffExpr& a) { return sqrt(a); };
        if (fn == nullptr) throw ParseError("unknown identifier '" + std::string(name) + "'", start);

        expect('(');
        CoeffExpr arg = expr();
        expect(')');
        return fn(arg);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

CoeffExpr parse(std::string_view text) { return Parser(text).run(); }

}  // namespace ltvcomm
