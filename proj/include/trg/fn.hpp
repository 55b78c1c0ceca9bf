#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trg/expr.hpp"

namespace trg {

// Elementary function of t (plus bound symbols). Used where coefficients
// are not quasi-trigonometric: variable-coefficient kernels, quadrature
// weights of flow equations.
class Fn {
public:
    enum class Op { Const, Var, Sym, Add, Mul, Div, Pow, Exp, Log, Sin, Cos, Integral };

    Fn() : Fn(constant(0.0)) {}
    static Fn constant(double v);
    static Fn var();
    static Fn symbol(const std::string& name);
    // integral from `lower` to t of integrand(s) ds
    static Fn integral(const Fn& integrand, double lower);

    friend Fn operator+(const Fn& a, const Fn& b);
    friend Fn operator-(const Fn& a, const Fn& b);
    friend Fn operator*(const Fn& a, const Fn& b);
    friend Fn operator/(const Fn& a, const Fn& b);
    Fn operator-() const;
    Fn pow(int n) const;
    static Fn exp(const Fn& a);
    static Fn log(const Fn& a);
    static Fn sin(const Fn& a);
    static Fn cos(const Fn& a);

    Op op() const { return node_->op; }
    bool is_const(double v) const { return node_->op == Op::Const && node_->value == v; }
    std::optional<double> const_value() const;

    double eval(double t, const Bindings& b) const;
    Fn diff() const;  // d/dt
    bool depends_on_t() const;
    std::string render(const std::string& var = "t") const;
    std::set<std::string> symbols() const;

    // sum c_k t^k if the function is a Laurent polynomial in t with
    // numeric coefficients
    std::optional<std::map<int, double>> as_laurent() const;

    friend bool operator==(const Fn& a, const Fn& b);

private:
    struct Node {
        Op op = Op::Const;
        double value = 0.0;  // Const value, Pow exponent, Integral lower limit
        std::string name;
        std::vector<std::shared_ptr<const Node>> kids;
    };
    explicit Fn(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Fn make(Op op, std::vector<Fn> kids, double value = 0.0);
    std::shared_ptr<const Node> node_;
};

struct Kernel {
    Fn phi;        // exp of the antiderivative of p
    Fn antideriv;  // integral of p
};

// Exact kernel of y' = p(t) y for Laurent-polynomial p; throws otherwise.
Kernel first_order_kernel(const Fn& p);

}  // namespace trg
