#pragma once

#include <string>
#include <vector>

#include "trg/perturb.hpp"
#include "trg/renorm.hpp"

namespace trg {

// Target N(t, y, y', ...) = 0 embedded as
//   L(y) = eps*(L(y) - N(y)),  L(y) = op[y] - forcing,
// which is the target itself at eps = 1.
struct HomotopySpec {
    std::string name = "y";
    std::vector<PolyTerm> target;  // N as a sum of terms; eps-free coefficients
    LinOp op;
    Expr forcing;                  // eps-free, variable-free
    KernelStyle kernel;
    ParamRegistry registry;
};

OdeSpec build_homotopy(const HomotopySpec& h);

// N evaluated at explicit derivative values vals[deriv].
double eval_target(const HomotopySpec& h, double t, const std::vector<double>& vals, const Bindings& b);

// eps := 1 throughout; the flow is re-solved with eps removed.
RenormalizedSolution finalize(const RenormalizedSolution& s);

}  // namespace trg
