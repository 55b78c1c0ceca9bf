#pragma once

#include <string>

#include "trg/fn.hpp"
#include "trg/renorm.hpp"

namespace trg {

// y' = p(t) y + f(t) - eps q(t) y y'
// Order 0 is A*phi(t) plus the anchored particular part, phi the exact
// kernel of y' = p y.
struct FirstOrderSpec {
    std::string name = "y";
    std::string amplitude = "A";
    Fn p, f, q;
};

struct FirstOrderRun {
    Kernel kernel;
    FlowSystem flow;
    FlowSolution solution;
    RenormalizedSolution result;
};

FirstOrderRun renormalize_first_order(const FirstOrderSpec& s, const Policy& pol);

}  // namespace trg
