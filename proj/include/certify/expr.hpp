#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace certify {

/// Independent variables an expression may reference.
enum class Var : std::uint8_t { x = 0, r = 1, theta = 2 };

/// Variable space an expression is parsed in: {x} for intervals, {r, theta} for disks.
enum class VarSpace : std::uint8_t { line, polar };

const char* to_string(Var v);
bool allows(VarSpace space, Var v);

/// Evaluation point. Only the coordinates of the expression's variable space are read.
struct Coords {
    double x = 0.0;
    double r = 0.0;
    double theta = 0.0;

    double operator[](Var v) const {
        switch (v) {
        case Var::x: return x;
        case Var::r: return r;
        case Var::theta: return theta;
        }
        return 0.0;
    }
    static Coords line(double x) { return {x, 0.0, 0.0}; }
    static Coords polar(double r, double theta) { return {0.0, r, theta}; }
};

/// Raised on log of a non-positive number or division by zero.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t position);
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

enum class Op : std::uint8_t { constant, variable, add, sub, mul, div, neg, pow, ln, sin, cos };

struct ExprNode;

/// Immutable symbolic expression over {x} or {r, theta}.
///
/// Nodes are shared between expressions, so derivatives reuse the subtrees of
/// their source. Construction folds constants and drops additive/multiplicative
/// identities; nothing beyond that is simplified.
class Expr {
public:
    Expr();  // constant zero
    Expr(double value);  // NOLINT(google-explicit-constructor): numeric literals read naturally

    static Expr constant(double value);
    static Expr variable(Var v);

    Op op() const;
    bool is_constant() const;
    bool is_constant(double value) const;
    double constant_value() const;  // precondition: is_constant()
    bool depends_on(Var v) const;
    std::size_t node_count() const;  // distinct nodes reachable

    double evaluate(const Coords& p) const;
    Expr differentiate(Var v) const;
    Expr differentiate(Var v, int order) const;

    /// Fully parenthesised text that parse_expr reads back to the same tree values.
    std::string to_string() const;
    bool structurally_equal(const Expr& other) const;

    const ExprNode& node() const { return *node_; }
    const std::shared_ptr<const ExprNode>& node_ptr() const { return node_; }

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    friend Expr pow(const Expr& base, int exponent);
    friend Expr ln(const Expr& a);
    friend Expr sin(const Expr& a);
    friend Expr cos(const Expr& a);

    explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

private:
    std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
    Op op = Op::constant;
    double value = 0.0;
    Var var = Var::x;
    int exponent = 0;
    std::uint8_t var_mask = 0;
    std::shared_ptr<const ExprNode> lhs;
    std::shared_ptr<const ExprNode> rhs;
};

Expr pow(const Expr& base, int exponent);
Expr ln(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);

/// Parses the expression grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | base ('^' uint)?
///   base   := number | ident | 'pi' | func '(' expr ')' | '(' expr ')'
/// with func in {ln, sin, cos} and ident restricted by `space`.
Expr parse_expr(std::string_view text, VarSpace space);

/// Flattened, common-subexpression-eliminated form of an Expr for hot loops.
class CompiledExpr {
public:
    CompiledExpr() = default;
    explicit CompiledExpr(const Expr& e);

    double operator()(const Coords& p) const;
    std::size_t size() const { return tape_.size(); }

private:
    struct Instr {
        Op op;
        Var var;
        int exponent;
        std::uint32_t a;
        std::uint32_t b;
        double value;
    };
    std::vector<Instr> tape_;
    std::uint32_t root_ = 0;
};

}  // namespace certify
