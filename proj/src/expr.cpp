#include "certify/expr.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace certify {

const char* to_string(Var v) {
    switch (v) {
    case Var::x: return "x";
    case Var::r: return "r";
    case Var::theta: return "theta";
    }
    return "?";
}

bool allows(VarSpace space, Var v) {
    return space == VarSpace::line ? v == Var::x : (v == Var::r || v == Var::theta);
}

ParseError::ParseError(const std::string& msg, std::size_t position)
    : std::runtime_error(msg + " (at position " + std::to_string(position) + ")"), position_(position) {}

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

std::uint8_t mask_of(Var v) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(v)); }

NodePtr make_constant(double value) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::constant;
    n->value = value;
    return n;
}

NodePtr make_node(Op op, NodePtr lhs, NodePtr rhs = nullptr, int exponent = 0) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->exponent = exponent;
    n->var_mask = static_cast<std::uint8_t>(lhs->var_mask | (rhs ? rhs->var_mask : 0));
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

bool is_const(const NodePtr& n) { return n->op == Op::constant; }
bool is_const(const NodePtr& n, double v) { return n->op == Op::constant && n->value == v; }

double ipow(double base, int exponent) {
    double result = 1.0;
    double b = base;
    unsigned e = static_cast<unsigned>(exponent);
    while (e != 0) {
        if (e & 1u) result *= b;
        b *= b;
        e >>= 1u;
    }
    return result;
}

double checked_div(double a, double b) {
    if (b == 0.0) throw DomainError("division by zero");
    return a / b;
}

double checked_ln(double a) {
    if (!(a > 0.0)) throw DomainError("logarithm of non-positive value " + std::to_string(a));
    return std::log(a);
}

double apply(Op op, double a, double b, int exponent) {
    switch (op) {
    case Op::add: return a + b;
    case Op::sub: return a - b;
    case Op::mul: return a * b;
    case Op::div: return checked_div(a, b);
    case Op::neg: return -a;
    case Op::pow: return ipow(a, exponent);
    case Op::ln: return checked_ln(a);
    case Op::sin: return std::sin(a);
    case Op::cos: return std::cos(a);
    case Op::constant:
    case Op::variable: break;
    }
    return 0.0;
}

NodePtr add(const NodePtr& a, const NodePtr& b);
NodePtr sub(const NodePtr& a, const NodePtr& b);
NodePtr mul(const NodePtr& a, const NodePtr& b);
NodePtr divide(const NodePtr& a, const NodePtr& b);
NodePtr neg(const NodePtr& a);
NodePtr power(const NodePtr& a, int exponent);

NodePtr add(const NodePtr& a, const NodePtr& b) {
    if (is_const(a) && is_const(b)) return make_constant(a->value + b->value);
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (b->op == Op::neg) return sub(a, b->lhs);
    return make_node(Op::add, a, b);
}

NodePtr sub(const NodePtr& a, const NodePtr& b) {
    if (is_const(a) && is_const(b)) return make_constant(a->value - b->value);
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return neg(b);
    if (b->op == Op::neg) return add(a, b->lhs);
    return make_node(Op::sub, a, b);
}

NodePtr mul(const NodePtr& a, const NodePtr& b) {
    if (is_const(a) && is_const(b)) return make_constant(a->value * b->value);
    if (is_const(a, 0.0) || is_const(b, 0.0)) return make_constant(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (is_const(a, -1.0)) return neg(b);
    if (is_const(b, -1.0)) return neg(a);
    return make_node(Op::mul, a, b);
}

NodePtr divide(const NodePtr& a, const NodePtr& b) {
    if (is_const(a) && is_const(b) && b->value != 0.0) return make_constant(a->value / b->value);
    if (is_const(a, 0.0) && !is_const(b, 0.0)) return make_constant(0.0);
    if (is_const(b, 1.0)) return a;
    return make_node(Op::div, a, b);
}

NodePtr neg(const NodePtr& a) {
    if (is_const(a)) return make_constant(-a->value);
    if (a->op == Op::neg) return a->lhs;
    return make_node(Op::neg, a);
}

NodePtr power(const NodePtr& a, int exponent) {
    if (exponent < 0) throw std::invalid_argument("negative exponents are not supported; use division");
    if (exponent == 0) return make_constant(1.0);
    if (exponent == 1) return a;
    if (is_const(a)) return make_constant(ipow(a->value, exponent));
    return make_node(Op::pow, a, nullptr, exponent);
}

NodePtr unary(Op op, const NodePtr& a) {
    if (is_const(a)) {
        if (op == Op::ln && !(a->value > 0.0)) return make_node(op, a);  // deferred domain error
        return make_constant(apply(op, a->value, 0.0, 0));
    }
    return make_node(op, a);
}

class Differentiator {
public:
    explicit Differentiator(Var v) : var_(v) {}

    NodePtr operator()(const NodePtr& n) {
        if ((n->var_mask & mask_of(var_)) == 0) return zero_;
        if (auto it = memo_.find(n.get()); it != memo_.end()) return it->second;
        NodePtr d = rule(n);
        memo_.emplace(n.get(), d);
        return d;
    }

private:
    NodePtr rule(const NodePtr& n) {
        const NodePtr& a = n->lhs;
        const NodePtr& b = n->rhs;
        switch (n->op) {
        case Op::constant: return zero_;
        case Op::variable: return make_constant(n->var == var_ ? 1.0 : 0.0);
        case Op::add: return add((*this)(a), (*this)(b));
        case Op::sub: return sub((*this)(a), (*this)(b));
        case Op::neg: return neg((*this)(a));
        case Op::mul: return add(mul((*this)(a), b), mul(a, (*this)(b)));
        case Op::div: {
            NodePtr da = (*this)(a);
            NodePtr db = (*this)(b);
            if (is_const(db, 0.0)) return divide(da, b);
            return divide(sub(mul(da, b), mul(a, db)), power(b, 2));
        }
        case Op::pow:
            return mul(mul(make_constant(n->exponent), power(a, n->exponent - 1)), (*this)(a));
        case Op::ln: return divide((*this)(a), a);
        case Op::sin: return mul(unary(Op::cos, a), (*this)(a));
        case Op::cos: return neg(mul(unary(Op::sin, a), (*this)(a)));
        }
        return zero_;
    }

    Var var_;
    NodePtr zero_ = make_constant(0.0);
    std::unordered_map<const ExprNode*, NodePtr> memo_;
};

double eval_node(const ExprNode& n, const Coords& p) {
    switch (n.op) {
    case Op::constant: return n.value;
    case Op::variable: return p[n.var];
    default: break;
    }
    const double a = eval_node(*n.lhs, p);
    const double b = n.rhs ? eval_node(*n.rhs, p) : 0.0;
    return apply(n.op, a, b, n.exponent);
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    if (v < 0.0 || s.find_first_of("ni") != std::string::npos) return "(" + s + ")";
    return s;
}

void print(const ExprNode& n, std::string& out) {
    auto binary = [&](const char* sym) {
        out += '(';
        print(*n.lhs, out);
        out += sym;
        print(*n.rhs, out);
        out += ')';
    };
    auto call = [&](const char* name) {
        out += name;
        out += '(';
        print(*n.lhs, out);
        out += ')';
    };
    switch (n.op) {
    case Op::constant: out += format_number(n.value); break;
    case Op::variable: out += to_string(n.var); break;
    case Op::add: binary(" + "); break;
    case Op::sub: binary(" - "); break;
    case Op::mul: binary("*"); break;
    case Op::div: binary("/"); break;
    case Op::neg:
        out += "(-";
        print(*n.lhs, out);
        out += ')';
        break;
    case Op::pow:
        out += '(';
        print(*n.lhs, out);
        out += ")^" + std::to_string(n.exponent);
        break;
    case Op::ln: call("ln"); break;
    case Op::sin: call("sin"); break;
    case Op::cos: call("cos"); break;
    }
}

bool equal_nodes(const ExprNode* a, const ExprNode* b) {
    if (a == b) return true;
    if (a == nullptr || b == nullptr) return false;
    if (a->op != b->op) return false;
    switch (a->op) {
    case Op::constant: return a->value == b->value;
    case Op::variable: return a->var == b->var;
    case Op::pow:
        if (a->exponent != b->exponent) return false;
        break;
    default: break;
    }
    return equal_nodes(a->lhs.get(), b->lhs.get()) && equal_nodes(a->rhs.get(), b->rhs.get());
}

}  // namespace

Expr::Expr() : node_(make_constant(0.0)) {}
Expr::Expr(double value) : node_(make_constant(value)) {}

Expr Expr::constant(double value) { return Expr(make_constant(value)); }

Expr Expr::variable(Var v) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::variable;
    n->var = v;
    n->var_mask = mask_of(v);
    return Expr(NodePtr(std::move(n)));
}

Op Expr::op() const { return node_->op; }
bool Expr::is_constant() const { return node_->op == Op::constant; }
bool Expr::is_constant(double value) const { return is_const(node_, value); }
double Expr::constant_value() const { return node_->value; }
bool Expr::depends_on(Var v) const { return (node_->var_mask & mask_of(v)) != 0; }

std::size_t Expr::node_count() const {
    std::unordered_set<const ExprNode*> seen;
    std::vector<const ExprNode*> stack{node_.get()};
    while (!stack.empty()) {
        const ExprNode* n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        if (n->lhs) stack.push_back(n->lhs.get());
        if (n->rhs) stack.push_back(n->rhs.get());
    }
    return seen.size();
}

double Expr::evaluate(const Coords& p) const { return eval_node(*node_, p); }

Expr Expr::differentiate(Var v) const {
    Differentiator d(v);
    return Expr(d(node_));
}

Expr Expr::differentiate(Var v, int order) const {
    Expr e = *this;
    for (int i = 0; i < order; ++i) e = e.differentiate(v);
    return e;
}

std::string Expr::to_string() const {
    std::string out;
    print(*node_, out);
    return out;
}

bool Expr::structurally_equal(const Expr& other) const { return equal_nodes(node_.get(), other.node_.get()); }

Expr operator+(const Expr& a, const Expr& b) { return Expr(add(a.node_, b.node_)); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(sub(a.node_, b.node_)); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(mul(a.node_, b.node_)); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(divide(a.node_, b.node_)); }
Expr operator-(const Expr& a) { return Expr(neg(a.node_)); }
Expr pow(const Expr& base, int exponent) { return Expr(power(base.node_, exponent)); }
Expr ln(const Expr& a) { return Expr(unary(Op::ln, a.node_)); }
Expr sin(const Expr& a) { return Expr(unary(Op::sin, a.node_)); }
Expr cos(const Expr& a) { return Expr(unary(Op::cos, a.node_)); }

// CompiledExpr

namespace {

struct InstrKey {
    Op op;
    Var var;
    int exponent;
    std::uint32_t a;
    std::uint32_t b;
    std::uint64_t value_bits;
    bool operator==(const InstrKey&) const = default;
};

struct InstrKeyHash {
    std::size_t operator()(const InstrKey& k) const {
        std::size_t h = std::hash<std::uint64_t>{}(k.value_bits);
        auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
        mix(static_cast<std::size_t>(k.op));
        mix(static_cast<std::size_t>(k.var));
        mix(static_cast<std::size_t>(k.exponent));
        mix(k.a);
        mix(k.b);
        return h;
    }
};

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e) {
    std::unordered_map<const ExprNode*, std::uint32_t> slot_of;
    std::unordered_map<InstrKey, std::uint32_t, InstrKeyHash> interned;

    // Iterative post-order so that deep derivative trees cannot overflow the stack.
    std::vector<std::pair<const ExprNode*, bool>> stack{{&e.node(), false}};
    while (!stack.empty()) {
        auto [n, expanded] = stack.back();
        stack.pop_back();
        if (slot_of.count(n) != 0) continue;
        if (!expanded) {
            stack.emplace_back(n, true);
            if (n->rhs) stack.emplace_back(n->rhs.get(), false);
            if (n->lhs) stack.emplace_back(n->lhs.get(), false);
            continue;
        }
        Instr ins{n->op, n->var, n->exponent, 0, 0, n->value};
        if (n->lhs) ins.a = slot_of.at(n->lhs.get());
        if (n->rhs) ins.b = slot_of.at(n->rhs.get());
        InstrKey key{ins.op, ins.op == Op::variable ? ins.var : Var::x, ins.exponent, ins.a, ins.b,
                     ins.op == Op::constant ? std::bit_cast<std::uint64_t>(ins.value) : 0};
        auto [it, inserted] = interned.emplace(key, static_cast<std::uint32_t>(tape_.size()));
        if (inserted) tape_.push_back(ins);
        slot_of.emplace(n, it->second);
    }
    root_ = slot_of.at(&e.node());
}

double CompiledExpr::operator()(const Coords& p) const {
    thread_local std::vector<double> regs;
    if (tape_.empty()) return 0.0;
    regs.resize(tape_.size());
    for (std::size_t i = 0; i < tape_.size(); ++i) {
        const Instr& ins = tape_[i];
        switch (ins.op) {
        case Op::constant: regs[i] = ins.value; break;
        case Op::variable: regs[i] = p[ins.var]; break;
        default: regs[i] = apply(ins.op, regs[ins.a], regs[ins.b], ins.exponent); break;
        }
    }
    return regs[root_];
}

}  // namespace certify
