#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "certify/expr.hpp"

namespace certify {
namespace {

class Parser {
public:
    Parser(std::string_view text, VarSpace space) : text_(text), space_(space) {}

    Expr parse() {
        skip_ws();
        if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
        Expr e = expr();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        return e;
    }

private:
    Expr expr() {
        Expr lhs = term();
        for (;;) {
            skip_ws();
            if (accept('+')) {
                lhs = lhs + term();
            } else if (accept('-')) {
                lhs = lhs - term();
            } else {
                return lhs;
            }
        }
    }

    Expr term() {
        Expr lhs = factor();
        for (;;) {
            skip_ws();
            if (accept('*')) {
                lhs = lhs * factor();
            } else if (accept('/')) {
                lhs = lhs / factor();
            } else {
                return lhs;
            }
        }
    }

    // Unary minus binds looser than '^' so that -x^2 reads as -(x^2).
    Expr factor() {
        skip_ws();
        if (accept('-')) return -factor();
        Expr b = base();
        skip_ws();
        if (accept('^')) {
            skip_ws();
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (start == pos_) throw ParseError("expected non-negative integer exponent", start);
            const std::string digits(text_.substr(start, pos_ - start));
            if (digits.size() > 4) throw ParseError("exponent too large", start);
            b = pow(b, std::stoi(digits));
        }
        return b;
    }

    Expr base() {
        skip_ws();
        if (pos_ == text_.size()) throw ParseError("unexpected end of expression", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    Expr number() {
        const std::size_t start = pos_;
        bool digits = false;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
            digits = true;
        }
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                digits = true;
            }
        }
        if (!digits) throw ParseError("malformed number", start);
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
                while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) ++p;
                pos_ = p;
            }
        }
        const std::string literal(text_.substr(start, pos_ - start));
        return Expr::constant(std::strtod(literal.c_str(), nullptr));
    }

    Expr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "pi") return Expr::constant(std::numbers::pi);
        if (name == "ln" || name == "sin" || name == "cos") {
            skip_ws();
            if (!accept('(')) throw ParseError("expected '(' after " + std::string(name), pos_);
            Expr arg = expr();
            expect(')');
            if (name == "ln") return ln(arg);
            if (name == "sin") return sin(arg);
            return cos(arg);
        }
        Var v{};
        if (name == "x") {
            v = Var::x;
        } else if (name == "r") {
            v = Var::r;
        } else if (name == "theta") {
            v = Var::theta;
        } else {
            throw ParseError("unknown identifier '" + std::string(name) + "'", start);
        }
        if (!allows(space_, v)) {
            throw ParseError("variable '" + std::string(name) + "' not allowed in this context", start);
        }
        return Expr::variable(v);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        skip_ws();
        if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
    }

    std::string_view text_;
    VarSpace space_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, VarSpace space) { return Parser(text, space).parse(); }

}  // namespace certify
