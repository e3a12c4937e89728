#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "certify/expr.hpp"

namespace certify::testing {

inline bool close_rel(double a, double b, double rel, double abs_floor = 0.0) {
    return std::abs(a - b) <= std::max(rel * std::max(std::abs(a), std::abs(b)), abs_floor);
}

/// Random expression over x, restricted so that evaluation on [-0.9, 0.9] stays finite:
/// divisions are by (2 + x^2) style positive denominators and logs take (1.5 + sin(...)).
class RandomExprGen {
public:
    explicit RandomExprGen(unsigned seed) : rng_(seed) {}

    Expr make(int depth) {
        std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 8);
        const Expr x = Expr::variable(Var::x);
        switch (pick(rng_)) {
        case 0: return Expr::constant(coef());
        case 1: return x;
        case 2: return make(depth - 1) + make(depth - 1);
        case 3: return make(depth - 1) - make(depth - 1);
        case 4: return make(depth - 1) * make(depth - 1);
        case 5: return make(depth - 1) / (Expr(2.0) + pow(make(depth - 1), 2));
        case 6: return pow(make(depth - 1), small_exponent());
        case 7: return sin(make(depth - 1)) + cos(make(depth - 1));
        default: return ln(Expr(1.5) + sin(make(depth - 1)));
        }
    }

    double coef() { return std::uniform_real_distribution<double>(-3.0, 3.0)(rng_); }
    double point() { return std::uniform_real_distribution<double>(-0.9, 0.9)(rng_); }
    int small_exponent() { return std::uniform_int_distribution<int>(0, 3)(rng_); }

private:
    std::mt19937 rng_;
};

/// Dense polynomial with coefficients in increasing degree; independent of Expr.
struct Poly {
    std::vector<double> c;

    Poly operator*(const Poly& o) const {
        Poly p{std::vector<double>(c.size() + o.c.size() - 1, 0.0)};
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < o.c.size(); ++j) p.c[i + j] += c[i] * o.c[j];
        return p;
    }
    Poly derivative() const {
        if (c.size() <= 1) return Poly{{0.0}};
        Poly d{std::vector<double>(c.size() - 1)};
        for (std::size_t i = 1; i < c.size(); ++i) d.c[i - 1] = c[i] * static_cast<double>(i);
        return d;
    }
    double operator()(double x) const {
        double v = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
        return v;
    }
};

/// Polynomial sum a_ij x^i y^j with Cartesian derivatives; independent of Expr
/// except for the conversion to a polar expression.
struct Poly2 {
    static constexpr int N = 7;
    double a[N][N] = {};

    double operator()(double x, double y) const {
        double s = 0.0;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) s += a[i][j] * std::pow(x, i) * std::pow(y, j);
        return s;
    }
    Poly2 dx() const {
        Poly2 d;
        for (int i = 1; i < N; ++i)
            for (int j = 0; j < N; ++j) d.a[i - 1][j] = a[i][j] * i;
        return d;
    }
    Poly2 dy() const {
        Poly2 d;
        for (int i = 0; i < N; ++i)
            for (int j = 1; j < N; ++j) d.a[i][j - 1] = a[i][j] * j;
        return d;
    }
    Poly2 operator+(const Poly2& o) const {
        Poly2 s;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) s.a[i][j] = a[i][j] + o.a[i][j];
        return s;
    }
    Expr to_polar() const {
        const Expr x = Expr::variable(Var::r) * cos(Expr::variable(Var::theta));
        const Expr y = Expr::variable(Var::r) * sin(Expr::variable(Var::theta));
        Expr e;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                if (a[i][j] != 0.0) e = e + Expr(a[i][j]) * pow(x, i) * pow(y, j);
        return e;
    }
};

}  // namespace certify::testing
