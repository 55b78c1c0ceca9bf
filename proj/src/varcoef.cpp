#include "trg/varcoef.hpp"

namespace trg {

FirstOrderRun renormalize_first_order(const FirstOrderSpec& s, const Policy& pol) {
    FirstOrderRun run;
    run.kernel = first_order_kernel(s.p);
    const Fn& phi = run.kernel.phi;
    const Fn dphi = phi.diff();
    FlowSystem& fs = run.flow;
    fs.policy = pol.name;
    fs.registry.add(s.amplitude, SymbolKind::Amplitude);
    Expr A = fs.registry.sym(s.amplitude);
    Expr eps = fs.registry.eps();
    // Y0 = A phi, Y1 = A phi' + f - eps q A phi (A phi' + f) at t = t0
    FlowEquation eq;
    eq.param = s.amplitude;
    eq.parts.push_back({-(eps * A * A), s.q * dphi});
    bool forced = !s.f.is_const(0);
    if (forced) {
        FlowTerm direct{Expr(1), s.f / phi};
        FlowTerm cross{-(eps * A), s.q * s.f};
        if (pol.drop_inhomogeneous) {
            // the ledger keeps the numerator; the weight goes into the reason
            fs.ledger.push_back({0, "inhomogeneous term, weight " + direct.weight.render("t0"), direct.numer});
            fs.ledger.push_back({0, "inhomogeneous term, weight " + cross.weight.render("t0"), cross.numer});
        } else {
            eq.parts.insert(eq.parts.begin(), direct);
            eq.parts.push_back(cross);
        }
    }
    fs.eqs.push_back(eq);
    run.solution = solve_flow(fs);
    RenormalizedSolution& r = run.result;
    r.comps = {s.name};
    r.Y0 = {A};
    r.envelope = {phi};
    r.flow = run.solution;
    r.registry = run.solution.system.registry;
    r.free_constants = run.solution.constants;
    r.notes.push_back("order-0 kernel phi = " + phi.render());
    return run;
}

}  // namespace trg
