#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trg/expr.hpp"
#include "trg/linode.hpp"
#include "trg/registry.hpp"

namespace trg {

// y_comp^(deriv)
struct VarRef {
    int comp = 0;
    int deriv = 0;
    friend auto operator<=>(const VarRef&, const VarRef&) = default;
};

// coeff * prod var^power; coeff carries its eps powers
struct PolyTerm {
    Expr coeff;
    std::vector<std::pair<VarRef, int>> vars;
};

// Names and shape of the order-0 kernel of one component.
struct KernelStyle {
    bool use_sin = false;                 // A*sin(...) instead of A*cos(...)
    std::vector<std::string> amplitudes;  // one per oscillatory mode
    std::vector<std::string> phases;
    std::vector<std::string> constants;   // real modes, highest (t-t0) power first
};

struct Component {
    std::string name = "y";
    LinOp op;
    Expr forcing0;               // eps-free, variable-free part of the right side
    std::vector<PolyTerm> pert;  // eps-carrying right-side terms
    KernelStyle kernel;
};

// op_c[y_c] = forcing0_c + sum pert_c for every component c.
struct OdeSpec {
    std::vector<Component> comps;
    ParamRegistry registry;

    int index_of(const std::string& comp) const;
    void validate() const;
};

struct HierVar {
    int comp = 0;
    int order = 0;
    int deriv = 0;
    friend auto operator<=>(const HierVar&, const HierVar&) = default;
};

struct HierTerm {
    Expr coeff;
    std::vector<std::pair<HierVar, int>> vars;
};

// Right sides of L[y_k] = RHS_k in terms of lower-order unknowns.
struct Hierarchy {
    int K = 0;
    std::vector<std::vector<std::vector<HierTerm>>> rhs;  // [order][comp]
    std::string render(const OdeSpec& spec, int order, int comp) const;
};

Hierarchy build_hierarchy(const OdeSpec& spec, int K);

enum class ModeKind { Oscillatory, Real };

struct KernelMode {
    int comp = 0;
    Rational rho;
    FreqCombo nu;
    ModeKind kind = ModeKind::Oscillatory;
    bool use_sin = false;
    std::string amplitude, phase;        // oscillatory
    std::vector<std::string> constants;  // real: constants[j] multiplies (t-t0)^j
};

struct SeriesOptions {
    // extra homogeneous pieces added at (comp, order) before later orders
    std::map<std::pair<int, int>, Expr> admixture;
    // complete replacement of the perturbation series [comp][order]
    std::optional<std::vector<std::vector<Expr>>> printed;
};

struct SeriesSolution {
    ParamRegistry registry;
    std::vector<std::vector<Expr>> y;  // [comp][order]
    std::vector<KernelMode> modes;
    std::vector<std::string> params;   // t0-dependent order-0 symbols
    std::vector<Resonance> resonances;
    std::vector<std::string> warnings;
    bool printed = false;
    int K = 0;
};

SeriesSolution solve_hierarchy(const OdeSpec& spec, int K, const SeriesOptions& opts = {});

// Replace every y_k by its d-th time derivative (observing y^(d) instead of y).
SeriesSolution observe_derivative(const SeriesSolution& s, int d);

// Y_n(t0) for n = 0..M per component, eps-truncated at K.
struct TaylorFrame {
    int K = 0, M = 1;
    std::vector<std::vector<Expr>> Y;   // [comp][n], variable stands for t0
    std::vector<Expr> S1;               // coefficient of (t-t0) at t = t0
    std::vector<std::string> params;
};

TaylorFrame reassemble(const SeriesSolution& s, int M);

// Evaluates the right side of component c at explicit derivative values
// vals[comp][deriv]; used by the oracle and diagnostics.
double eval_rhs(const OdeSpec& spec, int c, double t, const std::vector<std::vector<double>>& vals, const Bindings& b);
// Full-strength operator part: sum a_j y^(j).
double eval_lhs(const OdeSpec& spec, int c, const std::vector<std::vector<double>>& vals, const Bindings& b);

}  // namespace trg
