#include "trg/parse.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

namespace trg {

ParseError::ParseError(int line, int col, const std::string& msg, std::set<std::string> expected)
    : std::runtime_error([&] {
          std::string s = "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg;
          if (!expected.empty()) {
              s += " (expected one of:";
              for (const auto& e : expected) s += " " + e;
              s += ")";
          }
          return s;
      }()),
      line_(line),
      col_(col),
      expected_(std::move(expected)) {}

namespace {

enum class Tok { Num, Ident, Punct, Newline, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int line = 1, col = 1;
};

std::string describe(const Token& t) {
    switch (t.kind) {
        case Tok::Num: return "number '" + t.text + "'";
        case Tok::Ident: return "identifier '" + t.text + "'";
        case Tok::Punct: return "'" + t.text + "'";
        case Tok::Newline: return "end of line";
        case Tok::End: return "end of input";
    }
    return "?";
}

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (c == '\n' || c == ';') {
            out.push_back({Tok::Newline, std::string(1, c), line, col});
            advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        Token t{Tok::End, "", line, col};
        std::size_t j = i;
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && j + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[j + 1])))) {
            while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.')) ++j;
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
                if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
                    j = k;
                    while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
                }
            }
            t.kind = Tok::Num;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            t.kind = Tok::Ident;
        } else if (std::string("+-*/^(),:='").find(c) != std::string::npos) {
            j = i + 1;
            t.kind = Tok::Punct;
        } else {
            throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        }
        t.text = src.substr(i, j - i);
        out.push_back(t);
        advance(j - i);
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

// ---- syntax tree

struct Node {
    enum class K { Num, Ident, Prime, Add, Sub, Mul, Div, Neg, Pow, Call } k;
    std::string text;  // number text, identifier or function name
    int primes = 0;    // Prime
    int power = 0;     // Pow
    std::vector<std::shared_ptr<Node>> kids;
    int line = 1, col = 1;
};
using NodeP = std::shared_ptr<Node>;

const std::set<std::string> kStartExpr = {"number", "identifier", "'('", "'-'"};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    const Token& peek() const { return toks_[pos_]; }
    Token take() { return toks_[pos_++]; }
    bool at_punct(const std::string& p) const { return peek().kind == Tok::Punct && peek().text == p; }
    bool at_ident(const std::string& s) const { return peek().kind == Tok::Ident && peek().text == s; }
    [[noreturn]] void fail(const std::string& what, std::set<std::string> expected) const {
        throw ParseError(peek().line, peek().col, what + ", found " + describe(peek()), std::move(expected));
    }
    void expect_punct(const std::string& p) {
        if (!at_punct(p)) fail("expected '" + p + "'", {"'" + p + "'"});
        take();
    }
    std::string expect_ident() {
        if (peek().kind != Tok::Ident) fail("expected identifier", {"identifier"});
        return take().text;
    }
    bool at_end_of_statement() const { return peek().kind == Tok::Newline || peek().kind == Tok::End; }
    bool next_ends_statement() const {
        const Token& n = toks_[std::min(pos_ + 1, toks_.size() - 1)];
        return n.kind == Tok::Newline || n.kind == Tok::End;
    }

    NodeP expr(const std::set<std::string>& stops = {}) {
        NodeP a = term(stops);
        while (at_punct("+") || at_punct("-")) {
            Token op = take();
            NodeP b = term(stops);
            a = make(op.text == "+" ? Node::K::Add : Node::K::Sub, op, {a, b});
        }
        return a;
    }

private:
    NodeP make(Node::K k, const Token& at, std::vector<NodeP> kids) {
        auto n = std::make_shared<Node>();
        n->k = k;
        n->kids = std::move(kids);
        n->line = at.line;
        n->col = at.col;
        return n;
    }

    NodeP term(const std::set<std::string>& stops) {
        NodeP a = unary(stops);
        while (at_punct("*") || at_punct("/")) {
            Token op = take();
            NodeP b = unary(stops);
            a = make(op.text == "*" ? Node::K::Mul : Node::K::Div, op, {a, b});
        }
        return a;
    }

    NodeP unary(const std::set<std::string>& stops) {
        if (at_punct("-")) {
            Token op = take();
            return make(Node::K::Neg, op, {unary(stops)});
        }
        if (at_punct("+")) take();
        return power(stops);
    }

    NodeP power(const std::set<std::string>& stops) {
        NodeP a = postfix(stops);
        if (at_punct("^")) {
            Token op = take();
            int sign = 1;
            bool paren = false;
            if (at_punct("(")) {
                take();
                paren = true;
                if (at_punct("-")) {
                    take();
                    sign = -1;
                }
            }
            if (peek().kind != Tok::Num || peek().text.find_first_not_of("0123456789") != std::string::npos)
                fail("expected integer exponent", {"integer"});
            int p = sign * std::stoi(take().text);
            if (paren) expect_punct(")");
            NodeP n = make(Node::K::Pow, op, {a});
            n->power = p;
            return n;
        }
        return a;
    }

    NodeP postfix(const std::set<std::string>& stops) {
        NodeP a = primary(stops);
        if (at_punct("'")) {
            if (a->k != Node::K::Ident) fail("primes apply to unknowns only", {});
            int n = 0;
            while (at_punct("'")) {
                take();
                ++n;
            }
            a->k = Node::K::Prime;
            a->primes = n;
        }
        return a;
    }

    NodeP primary(const std::set<std::string>& stops) {
        const Token& t = peek();
        if (t.kind == Tok::Num) {
            Token n = take();
            NodeP p = make(Node::K::Num, n, {});
            p->text = n.text;
            return p;
        }
        if (t.kind == Tok::Ident && !stops.count(t.text)) {
            Token n = take();
            if (at_punct("(")) {
                take();
                NodeP arg = expr();
                expect_punct(")");
                NodeP p = make(Node::K::Call, n, {arg});
                p->text = n.text;
                return p;
            }
            NodeP p = make(Node::K::Ident, n, {});
            p->text = n.text;
            return p;
        }
        if (at_punct("(")) {
            take();
            NodeP e = expr();
            expect_punct(")");
            return e;
        }
        fail("expected expression", kStartExpr);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

// ---- lowering

using Vars = std::vector<std::pair<VarRef, int>>;
using Poly = std::map<Vars, Expr>;

Poly poly_const(const Expr& e) {
    Poly p;
    if (!e.is_zero()) p[{}] = e;
    return p;
}

void poly_add(Poly& a, const Poly& b, int sign = 1) {
    for (const auto& [v, c] : b) {
        Expr& slot = a[v];
        slot = sign > 0 ? slot + c : slot - c;
        if (slot.is_zero()) a.erase(v);
    }
}

Vars merge_vars(const Vars& a, const Vars& b) {
    std::map<VarRef, int> m;
    for (const auto& [v, p] : a) m[v] += p;
    for (const auto& [v, p] : b) m[v] += p;
    return Vars(m.begin(), m.end());
}

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [va, ca] : a)
        for (const auto& [vb, cb] : b) poly_add(out, {{merge_vars(va, vb), ca * cb}});
    return out;
}

Rational parse_decimal(const std::string& s, bool& exact) {
    exact = false;
    if (s.find_first_of("eE") != std::string::npos) return Rational(0);
    auto dot = s.find('.');
    std::string digits = s;
    std::int64_t den = 1;
    if (dot != std::string::npos) {
        std::string frac = s.substr(dot + 1);
        if (frac.find('.') != std::string::npos) return Rational(0);
        digits = s.substr(0, dot) + frac;
        if (frac.size() > 15) return Rational(0);
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    }
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
    if (digits.empty()) digits = "0";
    if (digits.size() > 17) return Rational(0);
    exact = true;
    return Rational(std::stoll(digits), den);
}

// Affine phase: t-rate, frequency symbols times t, bare frequency symbols
// (legal only before "*t" or in relations), phase symbols and a constant.
struct Linear {
    Rational t;
    std::map<std::string, Rational> ft, fraw, ph;
    Rational c;
    double cd = 0.0;
    bool exact = true;

    bool number() const { return t.is_zero() && ft.empty() && fraw.empty() && ph.empty(); }
    bool pure_t() const { return t == Rational(1) && ft.empty() && fraw.empty() && ph.empty() && cd == 0.0; }
};

void add_into(std::map<std::string, Rational>& a, const std::map<std::string, Rational>& b, const Rational& s) {
    for (const auto& [k, v] : b) {
        a[k] = a[k] + v * s;
        if (a[k].is_zero()) a.erase(k);
    }
}

Linear lin_add(Linear a, const Linear& b, int sign) {
    Rational s(sign);
    a.t = a.t + b.t * s;
    add_into(a.ft, b.ft, s);
    add_into(a.fraw, b.fraw, s);
    add_into(a.ph, b.ph, s);
    a.c = a.c + b.c * s;
    a.cd += sign * b.cd;
    a.exact = a.exact && b.exact;
    return a;
}

Linear lin_scale(Linear a, const Rational& r) {
    a.t = a.t * r;
    for (auto* m : {&a.ft, &a.fraw, &a.ph})
        for (auto& [k, v] : *m) v = v * r;
    a.c = a.c * r;
    a.cd *= r.to_double();
    return a;
}

class Lowerer {
public:
    Lowerer(ParamRegistry& reg, std::vector<std::string>& unknowns, std::set<std::string>& declared_unknowns)
        : reg_(reg), unknowns_(unknowns), declared_(declared_unknowns) {}

    [[noreturn]] static void fail(const Node& n, const std::string& msg) { throw ParseError(n.line, n.col, msg); }

    bool is_unknown_name(const std::string& s) const {
        if (declared_.count(s)) return true;
        if (s == "y") return true;
        return s.size() >= 2 && s[0] == 'x' && s.find_first_not_of("0123456789", 1) == std::string::npos;
    }

    int unknown_index(const std::string& s) {
        auto it = std::find(unknowns_.begin(), unknowns_.end(), s);
        if (it != unknowns_.end()) return static_cast<int>(it - unknowns_.begin());
        unknowns_.push_back(s);
        return static_cast<int>(unknowns_.size()) - 1;
    }

    Poly poly(const Node& n) {
        switch (n.k) {
            case Node::K::Num: {
                bool exact;
                Rational r = parse_decimal(n.text, exact);
                return poly_const(exact ? Expr(r) : Expr::number(std::stod(n.text)));
            }
            case Node::K::Ident: {
                if (is_unknown_name(n.text)) return {{{{{unknown_index(n.text), 0}, 1}}, Expr(1)}};
                if (n.text == "t") fail(n, "'t' may appear only inside cos, sin or exp");
                if (!reg_.has(n.text)) fail(n, "undeclared symbol '" + n.text + "'");
                return poly_const(reg_.sym(n.text));
            }
            case Node::K::Prime:
                if (!is_unknown_name(n.text)) fail(n, "'" + n.text + "' is not an unknown");
                if (n.primes > 4) fail(n, "derivative order above 4 is not supported");
                return {{{{{unknown_index(n.text), n.primes}, 1}}, Expr(1)}};
            case Node::K::Add: {
                Poly a = poly(*n.kids[0]);
                poly_add(a, poly(*n.kids[1]));
                return a;
            }
            case Node::K::Sub: {
                Poly a = poly(*n.kids[0]);
                poly_add(a, poly(*n.kids[1]), -1);
                return a;
            }
            case Node::K::Neg: {
                Poly a;
                poly_add(a, poly(*n.kids[0]), -1);
                return a;
            }
            case Node::K::Mul: return poly_mul(poly(*n.kids[0]), poly(*n.kids[1]));
            case Node::K::Div: {
                Poly d = poly(*n.kids[1]);
                if (d.size() != 1 || !d.begin()->first.empty() || !is_monomial(d.begin()->second))
                    fail(n, "division only by a number or a parameter monomial");
                const QuasiTerm& q = d.begin()->second.terms()[0];
                Expr inv = Expr::from_mono(inverse(q.mono));
                return poly_mul(poly(*n.kids[0]), poly_const(inv));
            }
            case Node::K::Pow: {
                Poly base = poly(*n.kids[0]);
                int p = n.power;
                if (p < 0) {
                    if (base.size() != 1 || !base.begin()->first.empty() || !is_monomial(base.begin()->second))
                        fail(n, "negative powers only of parameter monomials");
                    Expr inv = Expr::from_mono(inverse(base.begin()->second.terms()[0].mono));
                    base = poly_const(inv);
                    p = -p;
                }
                if (p > 4 && !(base.size() == 1 && base.begin()->first.empty())) fail(n, "degree above 4 is not supported");
                Poly out = poly_const(Expr(1));
                for (int i = 0; i < p; ++i) out = poly_mul(out, base);
                return out;
            }
            case Node::K::Call: {
                const Node& arg = *n.kids[0];
                if (n.text == "cos" || n.text == "sin") {
                    PhaseForm ph = phase_form(arg);
                    if (ph.is_zero()) return poly_const(Expr(n.text == "cos" ? 1 : 0));
                    return poly_const(n.text == "cos" ? Expr::cosine(ph) : Expr::sine(ph));
                }
                if (n.text == "exp") {
                    Linear l = linear(arg);
                    if (!l.ft.empty() || !l.fraw.empty() || !l.ph.empty())
                        fail(arg, "exp needs a rational multiple of t plus a number");
                    Expr e = l.t.is_zero() ? Expr(1) : Expr::exponential(l.t);
                    if (l.cd != 0.0) e = e.scaled(std::exp(l.cd));
                    return poly_const(e);
                }
                fail(n, "unknown function '" + n.text + "' (cos, sin, exp)");
            }
        }
        fail(n, "unsupported expression");
    }

    static int integer(const Node& at, const Rational& r) {
        if (r.den() != 1) fail(at, "frequency and phase symbols need integer multiples");
        return static_cast<int>(r.num());
    }

    Linear linear(const Node& n) {
        Linear out;
        switch (n.k) {
            case Node::K::Num: {
                bool exact;
                Rational r = parse_decimal(n.text, exact);
                out.exact = exact;
                out.c = exact ? r : Rational(0);
                out.cd = exact ? r.to_double() : std::stod(n.text);
                return out;
            }
            case Node::K::Ident: {
                if (n.text == "t") {
                    out.t = Rational(1);
                    return out;
                }
                if (!reg_.has(n.text)) fail(n, "undeclared symbol '" + n.text + "'");
                SymbolKind k = reg_.kind(n.text);
                if (k == SymbolKind::Frequency) {
                    out.fraw[n.text] = Rational(1);
                    return out;
                }
                if (k == SymbolKind::Phase) {
                    out.ph[n.text] = Rational(1);
                    return out;
                }
                fail(n, "'" + n.text + "' cannot appear in a phase (declare it with 'phase' or 'freq')");
            }
            case Node::K::Add: return lin_add(linear(*n.kids[0]), linear(*n.kids[1]), 1);
            case Node::K::Sub: return lin_add(linear(*n.kids[0]), linear(*n.kids[1]), -1);
            case Node::K::Neg: return lin_add(Linear{}, linear(*n.kids[0]), -1);
            case Node::K::Mul: {
                Linear a = linear(*n.kids[0]);
                Linear b = linear(*n.kids[1]);
                if (b.number() && !a.number()) std::swap(a, b);
                if (a.number()) {
                    if (b.number()) {
                        b.c = b.c * a.c;
                        b.cd *= a.cd;
                        b.exact = a.exact && b.exact;
                        return b;
                    }
                    if (!a.exact) fail(n, "inexact multiple of t or of a symbol");
                    return lin_scale(b, a.c);
                }
                if (b.pure_t()) std::swap(a, b);
                if (a.pure_t() && b.t.is_zero() && b.ft.empty() && b.ph.empty()) {
                    if (!b.exact) fail(n, "inexact multiple of t");
                    Linear r;
                    r.t = b.c;
                    r.ft = b.fraw;
                    return r;
                }
                fail(n, "phase must be linear in t");
            }
            case Node::K::Div: {
                Linear a = linear(*n.kids[0]);
                Linear b = linear(*n.kids[1]);
                if (!b.number() || b.cd == 0.0) fail(n, "phase divided by something other than a nonzero number");
                if (a.number()) {
                    a.cd /= b.cd;
                    if (a.exact && b.exact) a.c = a.c / b.c;
                    a.exact = a.exact && b.exact;
                    return a;
                }
                if (!b.exact) fail(n, "phase divided by an inexact number");
                return lin_scale(a, Rational(1) / b.c);
            }
            default: fail(n, "phase must be linear in t with frequency and phase symbols");
        }
    }

    PhaseForm phase_form(const Node& n) {
        Linear l = linear(n);
        if (!l.fraw.empty()) fail(n, "frequency symbol must multiply t");
        PhaseForm ph;
        ph.freq.rate = l.t;
        for (const auto& [s, r] : l.ft) ph.freq.syms.push_back({s, integer(n, r)});
        for (const auto& [s, r] : l.ph) ph.phases.push_back({s, integer(n, r)});
        ph.shift = l.cd;
        return ph;
    }

    // plain linear combination of frequency symbols, for relations
    FreqCombo combo(const Node& n) {
        Linear l = linear(n);
        if (!l.t.is_zero() || !l.ft.empty() || !l.ph.empty() || l.cd != 0.0)
            fail(n, "relations combine frequency symbols only");
        FreqCombo f;
        for (const auto& [s, r] : l.fraw) f.syms.push_back({s, integer(n, r)});
        return f;
    }

private:
    ParamRegistry& reg_;
    std::vector<std::string>& unknowns_;
    std::set<std::string>& declared_;
};

// ---- statements

struct Equation {
    Poly poly;  // lhs - rhs
    int line = 1, col = 1;
};

bool constant_coeff(const Expr& e) {
    if (e.size() != 1) return false;
    const QuasiTerm& q = e.terms()[0];
    return q.k == 0 && q.rho.is_zero() && q.harm == Harmonic::One && eps_power(q) == 0;
}

// Linear constant-coefficient eps-free part in unknown c; removed from p.
LinOp take_operator(Poly& p, int c, int line, int col) {
    auto linear_in_c = [c](const Vars& v) { return v.size() == 1 && v[0].first.comp == c && v[0].second == 1; };
    int order = 0;
    for (const auto& [v, e] : p)
        if (linear_in_c(v) && constant_coeff(eps_part(e, 0))) order = std::max(order, v[0].first.deriv);
    std::vector<ParamMono> coeffs(order + 1, ParamMono{Rational(0), 1.0, {}});
    for (auto it = p.begin(); it != p.end();) {
        const auto& [v, e] = *it;
        Expr free = eps_part(e, 0);
        if (linear_in_c(v) && constant_coeff(free)) {
            coeffs[v[0].first.deriv] = free.terms()[0].mono;
            Expr rest = e - free;
            if (rest.is_zero()) {
                it = p.erase(it);
                continue;
            }
            it->second = rest;
        }
        ++it;
    }
    if (order == 0) throw ParseError(line, col, "equation has no derivative of its unknown");
    try {
        return LinOp(coeffs);
    } catch (const std::exception& ex) {
        throw ParseError(line, col, ex.what());
    }
}

// the unknown whose highest eps-free linear derivative appears in p
int owner(const Poly& p, int line, int col) {
    int best = -1, order = 0;
    bool tie = false;
    for (const auto& [v, e] : p) {
        if (v.size() != 1 || v[0].second != 1 || eps_part(e, 0).is_zero()) continue;
        int d = v[0].first.deriv;
        if (d > order) {
            order = d;
            best = v[0].first.comp;
            tie = false;
        } else if (d == order && d > 0 && v[0].first.comp != best) {
            tie = true;
        }
    }
    if (best < 0) throw ParseError(line, col, "equation has no derivative of an unknown");
    if (tie) throw ParseError(line, col, "two unknowns share the leading derivative order");
    return best;
}

}  // namespace

ParsedSpec parse_equation(const std::string& src) {
    Parser ps(lex(src));
    ParsedSpec out;
    ParamRegistry reg;
    std::vector<std::string> unknowns;
    std::set<std::string> declared_unknowns;
    Lowerer low(reg, unknowns, declared_unknowns);
    std::vector<Equation> eqs;
    std::map<std::string, KernelStyle> kernels;
    std::optional<std::pair<Poly, Poly>> homotopy;  // (L side, target)
    Poly homotopy_forcing;
    int h_line = 1, h_col = 1;
    const std::set<std::string> statement_start = {"'param'", "'freq'", "'phase'", "'unknown'", "'relation'",
                                                   "'kernel'", "'homotopy'", "equation"};

    auto end_statement = [&] {
        if (!ps.at_end_of_statement()) ps.fail("unexpected input after statement", {"end of line"});
        if (ps.peek().kind == Tok::Newline) ps.take();
    };

    while (ps.peek().kind != Tok::End) {
        if (ps.peek().kind == Tok::Newline) {
            ps.take();
            continue;
        }
        const Token head = ps.peek();
        if (ps.at_ident("param") || ps.at_ident("freq") || ps.at_ident("phase") || ps.at_ident("unknown")) {
            std::string what = ps.take().text;
            while (true) {
                Token nt = ps.peek();
                std::string name = ps.expect_ident();
                if (name == kEps || name == "t" || name == "t0")
                    throw ParseError(nt.line, nt.col, "'" + name + "' is reserved");
                std::optional<double> v;
                if (ps.at_punct("=")) {
                    ps.take();
                    double sign = 1;
                    if (ps.at_punct("-")) {
                        ps.take();
                        sign = -1;
                    }
                    if (ps.peek().kind != Tok::Num) ps.fail("expected number", {"number"});
                    v = sign * std::stod(ps.take().text);
                }
                if (reg.has(name)) throw ParseError(nt.line, nt.col, "symbol '" + name + "' declared twice");
                if (what == "unknown") {
                    declared_unknowns.insert(name);
                } else {
                    SymbolKind k = what == "param" ? SymbolKind::Constant
                                 : what == "freq"  ? SymbolKind::Frequency
                                                   : SymbolKind::Phase;
                    reg.add(name, k, v);
                }
                if (!ps.at_punct(",")) break;
                ps.take();
            }
            end_statement();
        } else if (ps.at_ident("eps") && ps.next_ends_statement()) {
            // a bare declaration; eps is always available
            ps.take();
            end_statement();
        } else if (ps.at_ident("relation")) {
            ps.take();
            NodeP a = ps.expr();
            ps.expect_punct("=");
            NodeP b = ps.expr();
            FreqCombo f = low.combo(*a) - low.combo(*b);
            try {
                reg.add_relation(f);
            } catch (const std::exception& ex) {
                throw ParseError(head.line, head.col, ex.what());
            }
            end_statement();
        } else if (ps.at_ident("kernel")) {
            ps.take();
            std::string comp = ps.expect_ident();
            ps.expect_punct(":");
            KernelStyle k;
            if (ps.at_ident("sin") || ps.at_ident("cos")) k.use_sin = ps.take().text == "sin";
            while (ps.at_punct("(")) {
                ps.take();
                k.amplitudes.push_back(ps.expect_ident());
                ps.expect_punct(",");
                k.phases.push_back(ps.expect_ident());
                ps.expect_punct(")");
            }
            if (ps.at_ident("const")) {
                ps.take();
                while (ps.peek().kind == Tok::Ident) k.constants.push_back(ps.take().text);
            }
            if (!ps.at_end_of_statement()) ps.fail("unexpected input in kernel statement", {"'('", "'const'", "end of line"});
            kernels[comp] = k;
            end_statement();
        } else if (ps.at_ident("homotopy")) {
            ps.take();
            h_line = head.line;
            h_col = head.col;
            Token l = ps.peek();
            if (ps.expect_ident() != "L") throw ParseError(l.line, l.col, "expected 'L'", {"'L'"});
            ps.expect_punct(":");
            NodeP lo = ps.expr({"target"});
            Poly lp = low.poly(*lo);
            if (ps.at_punct("=")) {
                ps.take();
                homotopy_forcing = low.poly(*ps.expr({"target"}));
            }
            if (!ps.at_ident("target")) ps.fail("expected 'target:'", {"'target'", "'='"});
            ps.take();
            ps.expect_punct(":");
            NodeP tg = ps.expr();
            homotopy = std::make_pair(lp, low.poly(*tg));
            end_statement();
        } else {
            if (ps.peek().kind != Tok::Ident && ps.peek().kind != Tok::Num && !ps.at_punct("(") && !ps.at_punct("-"))
                ps.fail("expected statement", statement_start);
            NodeP lhs = ps.expr();
            if (!ps.at_punct("=")) ps.fail("expected '='", {"'='", "'+'", "'-'", "'*'", "'/'"});
            ps.take();
            NodeP rhs = ps.expr();
            Equation e;
            e.poly = low.poly(*lhs);
            poly_add(e.poly, low.poly(*rhs), -1);
            e.line = head.line;
            e.col = head.col;
            eqs.push_back(std::move(e));
            end_statement();
        }
    }

    auto apply_kernel = [&](const std::string& name, KernelStyle& k) {
        auto it = kernels.find(name);
        if (it == kernels.end()) return;
        k = it->second;
        for (const auto& s : k.amplitudes)
            if (reg.has(s)) throw ParseError(1, 1, "kernel symbol '" + s + "' already declared");
    };

    if (homotopy) {
        if (!eqs.empty()) throw ParseError(eqs[0].line, eqs[0].col, "a homotopy takes no further equations");
        if (unknowns.size() != 1) throw ParseError(h_line, h_col, "a homotopy has exactly one unknown");
        out.homotopy = true;
        HomotopySpec& h = out.htr;
        h.name = unknowns[0];
        Poly lp = homotopy->first;
        for (const auto& [v, e] : lp)
            if (max_eps(e) > 0) throw ParseError(h_line, h_col, "the operator L must not contain eps");
        h.op = take_operator(lp, 0, h_line, h_col);
        if (!lp.empty()) throw ParseError(h_line, h_col, "L must be linear with constant coefficients");
        for (const auto& [v, e] : homotopy_forcing)
            if (!v.empty()) throw ParseError(h_line, h_col, "the right side of L must not contain the unknown");
        h.forcing = homotopy_forcing.count({}) ? homotopy_forcing.at({}) : Expr();
        for (const auto& [v, e] : homotopy->second) {
            if (max_eps(e) > 0) throw ParseError(h_line, h_col, "the target must not contain eps");
            h.target.push_back({e, v});
        }
        apply_kernel(h.name, h.kernel);
        h.registry = reg;
        try {
            build_homotopy(h);
        } catch (const std::exception& ex) {
            throw ParseError(h_line, h_col, ex.what());
        }
        return out;
    }

    if (eqs.empty()) throw ParseError(ps.peek().line, ps.peek().col, "no equation given", statement_start);
    OdeSpec& s = out.ode;
    std::vector<int> owners;
    for (const auto& e : eqs) owners.push_back(owner(e.poly, e.line, e.col));
    if (eqs.size() != unknowns.size())
        throw ParseError(eqs.back().line, eqs.back().col,
                         std::to_string(unknowns.size()) + " unknowns but " + std::to_string(eqs.size()) + " equations");
    s.comps.resize(unknowns.size());
    std::vector<bool> seen(unknowns.size(), false);
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        int c = owners[i];
        if (seen[c]) throw ParseError(eqs[i].line, eqs[i].col, "second equation for '" + unknowns[c] + "'");
        seen[c] = true;
        Poly p = eqs[i].poly;
        Component& comp = s.comps[c];
        comp.name = unknowns[c];
        comp.op = take_operator(p, c, eqs[i].line, eqs[i].col);
        // everything left moves to the right side
        for (const auto& [v, e] : p) {
            Expr rhs = -e;
            Expr free = eps_part(rhs, 0);
            Expr carried = rhs - free;
            if (!free.is_zero()) {
                if (!v.empty())
                    throw ParseError(eqs[i].line, eqs[i].col,
                                     "terms without eps must be linear in '" + comp.name + "' with constant coefficients");
                comp.forcing0 += free;
            }
            if (!carried.is_zero()) comp.pert.push_back({carried, v});
        }
        apply_kernel(comp.name, comp.kernel);
    }
    // a component's equation order fixes the component order of appearance
    std::vector<Component> ordered;
    for (int c : owners) ordered.push_back(s.comps[c]);
    std::vector<int> remap(unknowns.size());
    for (std::size_t i = 0; i < owners.size(); ++i) remap[owners[i]] = static_cast<int>(i);
    for (auto& comp : ordered)
        for (auto& t : comp.pert)
            for (auto& [v, p] : t.vars) v.comp = remap[v.comp];
    s.comps = ordered;
    s.registry = reg;
    try {
        s.validate();
    } catch (const std::exception& ex) {
        throw ParseError(eqs[0].line, eqs[0].col, ex.what());
    }
    return out;
}

// ---- rendering

namespace {

std::string var_text(const std::vector<std::string>& names, const VarRef& v, int p) {
    std::string s = names.at(v.comp) + std::string(v.deriv, '\'');
    if (p != 1) s += "^" + std::to_string(p);
    return s;
}

std::string term_text(const std::vector<std::string>& names, const Expr& coeff, const Vars& vars) {
    std::string vs;
    for (const auto& [v, p] : vars) vs += (vs.empty() ? "" : "*") + var_text(names, v, p);
    if (vs.empty()) return "(" + render(coeff) + ")";
    if (coeff == Expr(1)) return vs;
    return "(" + render(coeff) + ")*" + vs;
}

// shortest decimal that reads back exactly
std::string number_text(double v) {
    for (int prec = 6; prec <= 17; ++prec) {
        std::ostringstream o;
        o.precision(prec);
        o << v;
        if (std::stod(o.str()) == v) return o.str();
    }
    return std::to_string(v);
}

void declarations(std::ostringstream& o, const ParamRegistry& reg, const std::set<std::string>& used) {
    for (const auto& s : reg.all()) {
        if (s.kind != SymbolKind::Constant && s.kind != SymbolKind::Frequency && s.kind != SymbolKind::Phase) continue;
        if (!used.count(s.name)) continue;
        o << (s.kind == SymbolKind::Constant ? "param " : s.kind == SymbolKind::Frequency ? "freq " : "phase ") << s.name;
        if (s.value) o << "=" << number_text(*s.value);
        o << "\n";
    }
    for (const auto& r : reg.relations()) {
        std::string lhs;
        for (const auto& [n, m] : r.syms) {
            std::string t = (std::abs(m) == 1 ? "" : std::to_string(std::abs(m)) + "*") + n;
            lhs += lhs.empty() ? (m < 0 ? "-" + t : t) : (m < 0 ? " - " + t : " + " + t);
        }
        o << "relation " << lhs << " = 0\n";
    }
}

void kernel_line(std::ostringstream& o, const std::string& name, const KernelStyle& k) {
    if (k.amplitudes.empty() && k.constants.empty() && !k.use_sin) return;
    o << "kernel " << name << ":";
    if (k.use_sin) o << " sin";
    for (std::size_t i = 0; i < k.amplitudes.size(); ++i) o << " (" << k.amplitudes[i] << ", " << k.phases.at(i) << ")";
    if (!k.constants.empty()) {
        o << " const";
        for (const auto& c : k.constants) o << " " << c;
    }
    o << "\n";
}

void collect(std::set<std::string>& used, const Expr& e) {
    for (const auto& s : symbols(e)) used.insert(s);
}

void collect(std::set<std::string>& used, const LinOp& op) {
    for (const auto& m : op.coeffs()) collect(used, Expr::from_mono(m));
}

bool is_default_unknown(const std::string& s) {
    return s == "y" || (s.size() >= 2 && s[0] == 'x' && s.find_first_not_of("0123456789", 1) == std::string::npos);
}

}  // namespace

std::string render_spec(const OdeSpec& s) {
    std::ostringstream o;
    std::vector<std::string> names;
    std::set<std::string> used;
    for (const auto& c : s.comps) {
        names.push_back(c.name);
        collect(used, c.op);
        collect(used, c.forcing0);
        for (const auto& t : c.pert) collect(used, t.coeff);
    }
    for (const auto& r : s.registry.relations())
        for (const auto& [n, m] : r.syms) used.insert(n);
    declarations(o, s.registry, used);
    for (const auto& n : names)
        if (!is_default_unknown(n)) o << "unknown " << n << "\n";
    for (const auto& c : s.comps) kernel_line(o, c.name, c.kernel);
    for (const auto& c : s.comps) {
        std::string rhs = c.forcing0.is_zero() ? "" : "(" + render(c.forcing0) + ")";
        for (const auto& t : c.pert) rhs += (rhs.empty() ? "" : " + ") + term_text(names, t.coeff, t.vars);
        if (rhs.empty()) rhs = "0";
        o << c.op.render(c.name) << " = " << rhs << "\n";
    }
    return o.str();
}

std::string render_spec(const HomotopySpec& h) {
    std::ostringstream o;
    std::set<std::string> used;
    collect(used, h.op);
    collect(used, h.forcing);
    for (const auto& t : h.target) collect(used, t.coeff);
    declarations(o, h.registry, used);
    if (!is_default_unknown(h.name)) o << "unknown " << h.name << "\n";
    kernel_line(o, h.name, h.kernel);
    std::string target;
    for (const auto& t : h.target) target += (target.empty() ? "" : " + ") + term_text({h.name}, t.coeff, t.vars);
    if (target.empty()) target = "0";
    o << "homotopy L: " << h.op.render(h.name);
    if (!h.forcing.is_zero()) o << " = (" << render(h.forcing) << ")";
    o << " target: " << target << "\n";
    return o.str();
}

std::string render_spec(const ParsedSpec& p) { return p.homotopy ? render_spec(p.htr) : render_spec(p.ode); }

namespace {

bool same_terms(std::vector<PolyTerm> a, std::vector<PolyTerm> b) {
    // merge equal variable lists first; term lists are sums
    auto merged = [](const std::vector<PolyTerm>& v) {
        Poly p;
        for (const auto& t : v) {
            Vars vs = t.vars;
            std::sort(vs.begin(), vs.end());
            poly_add(p, {{vs, t.coeff}});
        }
        return p;
    };
    Poly pa = merged(a), pb = merged(b);
    if (pa.size() != pb.size()) return false;
    for (const auto& [v, c] : pa) {
        auto it = pb.find(v);
        if (it == pb.end() || !(it->second == c)) return false;
    }
    return true;
}

bool same_kernel(const KernelStyle& a, const KernelStyle& b) {
    return a.use_sin == b.use_sin && a.amplitudes == b.amplitudes && a.phases == b.phases && a.constants == b.constants;
}

bool same_registry(const ParamRegistry& a, const ParamRegistry& b, const std::set<std::string>& used) {
    for (const auto& n : used) {
        if (n == kEps) continue;
        if (!a.has(n) || !b.has(n)) return false;
        const SymbolInfo &x = a.info(n), &y = b.info(n);
        if (x.kind != y.kind || x.value.has_value() != y.value.has_value()) return false;
        if (x.value && std::fabs(*x.value - *y.value) > 1e-15 * std::max(1.0, std::fabs(*x.value))) return false;
    }
    return a.relations().size() == b.relations().size();
}

}  // namespace

bool same_spec(const OdeSpec& a, const OdeSpec& b) {
    if (a.comps.size() != b.comps.size()) return false;
    std::set<std::string> used;
    for (std::size_t i = 0; i < a.comps.size(); ++i) {
        const Component &x = a.comps[i], &y = b.comps[i];
        if (x.name != y.name || !(x.op == y.op) || !(x.forcing0 == y.forcing0)) return false;
        if (!same_terms(x.pert, y.pert) || !same_kernel(x.kernel, y.kernel)) return false;
        collect(used, x.op);
        collect(used, x.forcing0);
        for (const auto& t : x.pert) collect(used, t.coeff);
    }
    return same_registry(a.registry, b.registry, used);
}

bool same_spec(const HomotopySpec& a, const HomotopySpec& b) {
    if (a.name != b.name || !(a.op == b.op) || !(a.forcing == b.forcing)) return false;
    if (!same_terms(a.target, b.target) || !same_kernel(a.kernel, b.kernel)) return false;
    std::set<std::string> used;
    collect(used, a.op);
    collect(used, a.forcing);
    for (const auto& t : a.target) collect(used, t.coeff);
    return same_registry(a.registry, b.registry, used);
}

}  // namespace trg
