#include "trg/fn.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "trg/oracle.hpp"

namespace trg {

namespace {

std::string num_str(double v) {
    if (auto r = Rational::from_double(v, 1e-14, 10000); r) {
        if (r->is_integer()) return r->str();
        return "(" + r->str() + ")";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

}  // namespace

Fn Fn::make(Op op, std::vector<Fn> kids, double value) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->value = value;
    for (auto& k : kids) n->kids.push_back(k.node_);
    return Fn(n);
}

Fn Fn::constant(double v) {
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->value = v;
    return Fn(n);
}

Fn Fn::var() {
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    return Fn(n);
}

Fn Fn::symbol(const std::string& name) {
    auto n = std::make_shared<Node>();
    n->op = Op::Sym;
    n->name = name;
    return Fn(n);
}

Fn Fn::integral(const Fn& integrand, double lower) { return make(Op::Integral, {integrand}, lower); }

std::optional<double> Fn::const_value() const {
    if (node_->op == Op::Const) return node_->value;
    return std::nullopt;
}

Fn operator+(const Fn& a, const Fn& b) {
    if (a.is_const(0)) return b;
    if (b.is_const(0)) return a;
    if (a.const_value() && b.const_value()) return Fn::constant(*a.const_value() + *b.const_value());
    return Fn::make(Fn::Op::Add, {a, b});
}

Fn operator-(const Fn& a, const Fn& b) { return a + (-b); }

Fn operator*(const Fn& a, const Fn& b) {
    if (a.is_const(0) || b.is_const(0)) return Fn::constant(0);
    if (a.is_const(1)) return b;
    if (b.is_const(1)) return a;
    if (a.const_value() && b.const_value()) return Fn::constant(*a.const_value() * *b.const_value());
    if (b.const_value() && !a.const_value()) return Fn::make(Fn::Op::Mul, {b, a});
    return Fn::make(Fn::Op::Mul, {a, b});
}

Fn operator/(const Fn& a, const Fn& b) {
    if (b.is_const(0)) throw std::domain_error("division by the zero function");
    if (b.is_const(1)) return a;
    if (a.is_const(0)) return a;
    if (a.const_value() && b.const_value()) return Fn::constant(*a.const_value() / *b.const_value());
    return Fn::make(Fn::Op::Div, {a, b});
}

Fn Fn::operator-() const {
    if (auto v = const_value()) return constant(-*v);
    return constant(-1) * *this;
}

Fn Fn::pow(int n) const {
    if (n == 0) return constant(1);
    if (n == 1) return *this;
    if (auto v = const_value()) return constant(std::pow(*v, n));
    return make(Op::Pow, {*this}, n);
}

Fn Fn::exp(const Fn& a) {
    if (a.is_const(0)) return constant(1);
    return make(Op::Exp, {a});
}

Fn Fn::log(const Fn& a) { return make(Op::Log, {a}); }
Fn Fn::sin(const Fn& a) { return make(Op::Sin, {a}); }
Fn Fn::cos(const Fn& a) { return make(Op::Cos, {a}); }

double Fn::eval(double t, const Bindings& b) const {
    const Node& n = *node_;
    auto kid = [&](int i) { return Fn(n.kids[i]).eval(t, b); };
    switch (n.op) {
        case Op::Const: return n.value;
        case Op::Var: return t;
        case Op::Sym: {
            auto it = b.find(n.name);
            if (it == b.end()) throw std::out_of_range("unbound symbol '" + n.name + "'");
            return it->second;
        }
        case Op::Add: return kid(0) + kid(1);
        case Op::Mul: return kid(0) * kid(1);
        case Op::Div: return kid(0) / kid(1);
        case Op::Pow: return std::pow(kid(0), n.value);
        case Op::Exp: return std::exp(kid(0));
        case Op::Log: return std::log(kid(0));
        case Op::Sin: return std::sin(kid(0));
        case Op::Cos: return std::cos(kid(0));
        case Op::Integral: {
            Fn f(n.kids[0]);
            return oracle::quad([&](double s) { return f.eval(s, b); }, n.value, t, 1e-13);
        }
    }
    return 0.0;
}

Fn Fn::diff() const {
    const Node& n = *node_;
    auto kid = [&](int i) { return Fn(n.kids[i]); };
    switch (n.op) {
        case Op::Const:
        case Op::Sym: return constant(0);
        case Op::Var: return constant(1);
        case Op::Add: return kid(0).diff() + kid(1).diff();
        case Op::Mul: return kid(0).diff() * kid(1) + kid(0) * kid(1).diff();
        case Op::Div: return (kid(0).diff() * kid(1) - kid(0) * kid(1).diff()) / kid(1).pow(2);
        case Op::Pow: return constant(n.value) * kid(0).pow(static_cast<int>(n.value) - 1) * kid(0).diff();
        case Op::Exp: return *this * kid(0).diff();
        case Op::Log: return kid(0).diff() / kid(0);
        case Op::Sin: return cos(kid(0)) * kid(0).diff();
        case Op::Cos: return -(sin(kid(0)) * kid(0).diff());
        case Op::Integral: return kid(0);
    }
    return constant(0);
}

bool Fn::depends_on_t() const {
    const Node& n = *node_;
    if (n.op == Op::Var || n.op == Op::Integral) return true;
    for (const auto& k : n.kids)
        if (Fn(k).depends_on_t()) return true;
    return false;
}

std::set<std::string> Fn::symbols() const {
    std::set<std::string> s;
    if (node_->op == Op::Sym) s.insert(node_->name);
    for (const auto& k : node_->kids) {
        auto ks = Fn(k).symbols();
        s.insert(ks.begin(), ks.end());
    }
    return s;
}

std::string Fn::render(const std::string& var) const {
    const Node& n = *node_;
    auto kid = [&](int i) { return Fn(n.kids[i]); };
    auto wrap = [&](const Fn& f) {
        Op o = f.op();
        std::string s = f.render(var);
        if (o == Op::Add || s[0] == '-') return "(" + s + ")";
        return s;
    };
    switch (n.op) {
        case Op::Const: return num_str(n.value);
        case Op::Var: return var;
        case Op::Sym: return n.name;
        case Op::Add: {
            std::string r = kid(1).render(var);
            if (r[0] == '-') return kid(0).render(var) + " - " + r.substr(1);
            return kid(0).render(var) + " + " + r;
        }
        case Op::Mul: {
            if (kid(0).is_const(-1)) return "-" + wrap(kid(1));
            return wrap(kid(0)) + "*" + wrap(kid(1));
        }
        case Op::Div: {
            std::string d = kid(1).render(var);
            Op o = kid(1).op();
            if (o != Op::Var && o != Op::Sym && !(o == Op::Const && d[0] != '-' && d[0] != '(')) d = "(" + d + ")";
            return wrap(kid(0)) + "/" + d;
        }
        case Op::Pow: {
            std::string b = kid(0).render(var);
            Op o = kid(0).op();
            if (o != Op::Var && o != Op::Sym) b = "(" + b + ")";
            int e = static_cast<int>(n.value);
            return b + "^" + (e < 0 ? "(" + std::to_string(e) + ")" : std::to_string(e));
        }
        case Op::Exp: return "exp(" + kid(0).render(var) + ")";
        case Op::Log: return "log(" + kid(0).render(var) + ")";
        case Op::Sin: return "sin(" + kid(0).render(var) + ")";
        case Op::Cos: return "cos(" + kid(0).render(var) + ")";
        case Op::Integral: return "int(" + num_str(n.value) + ", " + var + ", " + kid(0).render("r") + ")";
    }
    return "?";
}

bool operator==(const Fn& a, const Fn& b) {
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.op != y.op || x.value != y.value || x.name != y.name || x.kids.size() != y.kids.size()) return false;
    for (std::size_t i = 0; i < x.kids.size(); ++i)
        if (!(Fn(x.kids[i]) == Fn(y.kids[i]))) return false;
    return true;
}

std::optional<std::map<int, double>> Fn::as_laurent() const {
    using L = std::map<int, double>;
    const Node& n = *node_;
    auto kid = [&](int i) { return Fn(n.kids[i]).as_laurent(); };
    auto clean = [](L m) {
        for (auto it = m.begin(); it != m.end();) it = it->second == 0.0 ? m.erase(it) : std::next(it);
        return m;
    };
    switch (n.op) {
        case Op::Const: return clean(L{{0, n.value}});
        case Op::Var: return L{{1, 1.0}};
        case Op::Add: {
            auto a = kid(0), b = kid(1);
            if (!a || !b) return std::nullopt;
            for (auto [k, v] : *b) (*a)[k] += v;
            return clean(*a);
        }
        case Op::Mul: {
            auto a = kid(0), b = kid(1);
            if (!a || !b) return std::nullopt;
            L r;
            for (auto [i, u] : *a)
                for (auto [j, v] : *b) r[i + j] += u * v;
            return clean(r);
        }
        case Op::Div: {
            auto a = kid(0), b = kid(1);
            if (!a || !b || b->size() != 1) return std::nullopt;
            auto [j, v] = *b->begin();
            L r;
            for (auto [i, u] : *a) r[i - j] = u / v;
            return clean(r);
        }
        case Op::Pow: {
            auto a = kid(0);
            if (!a) return std::nullopt;
            int e = static_cast<int>(n.value);
            if (e < 0 && a->size() != 1) return std::nullopt;
            if (e < 0) {
                auto [j, v] = *a->begin();
                return L{{j * e, std::pow(v, e)}};
            }
            L r{{0, 1.0}};
            for (int i = 0; i < e; ++i) {
                L nr;
                for (auto [p, u] : r)
                    for (auto [q, v] : *a) nr[p + q] += u * v;
                r = nr;
            }
            return clean(r);
        }
        default: return std::nullopt;
    }
}

Kernel first_order_kernel(const Fn& p) {
    auto lp = p.as_laurent();
    if (!lp) throw std::invalid_argument("kernel needs a Laurent-polynomial coefficient, got " + p.render());
    Fn expo = Fn::constant(0);
    Fn anti = Fn::constant(0);
    Fn prefactor = Fn::constant(1);
    for (auto [k, c] : *lp) {
        if (k == -1) {
            anti = anti + Fn::constant(c) * Fn::log(Fn::var());
            double r = std::round(c);
            if (std::fabs(r - c) < 1e-14)
                prefactor = prefactor * Fn::var().pow(static_cast<int>(r));
            else
                expo = expo + Fn::constant(c) * Fn::log(Fn::var());
        } else {
            Fn term = Fn::constant(c / (k + 1)) * (k + 1 == 1 ? Fn::var() : Fn::var().pow(k + 1));
            anti = anti + term;
            expo = expo + term;
        }
    }
    return {prefactor * Fn::exp(expo), anti};
}

}  // namespace trg
