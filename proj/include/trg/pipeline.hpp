#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "trg/oracle.hpp"
#include "trg/perturb.hpp"
#include "trg/renorm.hpp"

namespace trg {

struct TrConfig {
    int K = 1, M = 1;
    Policy policy;
    SeriesOptions series;
    int observe = 0;  // renormalize y^(observe) instead of y
    std::optional<double> expected_limit;
    unsigned seed = 42;
};

struct TrRun {
    OdeSpec spec;
    SeriesSolution series;
    TaylorFrame frame;
    Residual res;
    FlowSystem flow;
    FlowSolution sol;
    RenormalizedSolution result;
    Diagnosis diagnosis;
};

// `edit` may adjust the series (extra t0-dependent symbols) before reassembly.
TrRun run_tr(const OdeSpec& spec, const TrConfig& cfg, const std::function<void(SeriesSolution&)>& edit = {});

// First-order system for the oracle; state is [comp][0..order-1] flattened.
oracle::Rhs ode_rhs(const OdeSpec& spec, const Bindings& b);
std::size_t state_offset(const OdeSpec& spec, int comp);
std::size_t state_size(const OdeSpec& spec);

// Naive order-K series with its parameters frozen at their t = 0 values.
double naive_series(const SeriesSolution& s, int comp, double t, const Bindings& b);

// State vector of the renormalized solution at t (derivatives above the
// first by central differences).
oracle::State asymptotic_state(const OdeSpec& spec, const class SolutionEvaluator& ev, double t);

}  // namespace trg
