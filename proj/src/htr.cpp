#include "trg/htr.hpp"

#include <stdexcept>

namespace trg {

namespace {

void add_term(std::vector<PolyTerm>& terms, const Expr& coeff, std::vector<std::pair<VarRef, int>> vars) {
    std::sort(vars.begin(), vars.end());
    for (auto& t : terms) {
        if (t.vars == vars) {
            t.coeff += coeff;
            return;
        }
    }
    terms.push_back({coeff, vars});
}

}  // namespace

OdeSpec build_homotopy(const HomotopySpec& h) {
    int order = 0;
    for (const auto& t : h.target) {
        if (max_eps(t.coeff) > 0) throw std::invalid_argument("target equation must not contain eps");
        for (const auto& [v, p] : t.vars) {
            if (v.comp != 0) throw std::invalid_argument("homotopy targets have a single unknown");
            order = std::max(order, v.deriv);
        }
    }
    if (order != h.op.order())
        throw std::invalid_argument("chosen operator has order " + std::to_string(h.op.order()) +
                                    " but the target has order " + std::to_string(order));
    OdeSpec s;
    s.registry = h.registry;
    Component c;
    c.name = h.name;
    c.op = h.op;
    c.forcing0 = h.forcing;
    c.kernel = h.kernel;
    Expr eps = s.registry.eps();
    std::vector<PolyTerm> rhs;
    for (int j = 0; j <= h.op.order(); ++j) {
        const ParamMono& a = h.op.coeffs()[j];
        if (!a.is_zero()) add_term(rhs, eps * Expr::from_mono(a), {{{0, j}, 1}});
    }
    if (!h.forcing.is_zero()) add_term(rhs, -(eps * h.forcing), {});
    for (const auto& t : h.target) add_term(rhs, -(eps * t.coeff), t.vars);
    for (auto& t : rhs)
        if (!t.coeff.is_zero()) c.pert.push_back(t);
    s.comps.push_back(c);
    s.validate();
    return s;
}

double eval_target(const HomotopySpec& h, double t, const std::vector<double>& vals, const Bindings& b) {
    double r = 0;
    for (const auto& term : h.target) {
        double v = eval(term.coeff, t, b);
        for (const auto& [var, p] : term.vars)
            for (int i = 0; i < p; ++i) v *= vals.at(var.deriv);
        r += v;
    }
    return r;
}

namespace {

Expr at_one(const Expr& e) { return substitute(e, kEps, Expr(1)); }

}  // namespace

RenormalizedSolution finalize(const RenormalizedSolution& s) {
    RenormalizedSolution r = s;
    bool had_eps = false;
    for (auto& y : r.Y0) {
        had_eps = had_eps || contains(y, kEps);
        y = at_one(y);
    }
    FlowSystem fs = s.flow.system;
    for (auto& e : fs.eqs) {
        had_eps = had_eps || contains(e.denom, kEps);
        e.denom = at_one(e.denom);
        e.kinematic = at_one(e.kinematic);
        for (auto& p : e.parts) {
            had_eps = had_eps || contains(p.numer, kEps);
            p.numer = at_one(p.numer);
        }
    }
    if (!had_eps) return r;
    for (auto& d : fs.ledger) d.term = at_one(d.term);
    r.flow = solve_flow(fs);
    r.registry = r.flow.system.registry;
    r.free_constants = r.flow.constants;
    r.notes.push_back("finalized at eps = 1; dropped terms were classified by eps order before substitution");
    return r;
}

}  // namespace trg
