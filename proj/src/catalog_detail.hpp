#pragma once

// Shared plumbing of the catalog entries; not part of the public headers.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "trg/catalog.hpp"
#include "trg/parse.hpp"
#include "trg/pipeline.hpp"
#include "trg/renorm.hpp"

namespace trg::detail {

void tr_entries(std::vector<CatalogEntry>& out);
void layer_entries(std::vector<CatalogEntry>& out);
void modal_entries(std::vector<CatalogEntry>& out);
void htr_entries(std::vector<CatalogEntry>& out);

// Policy requested by the options; `paper` is the entry's grouping variant.
Policy choose_policy(const RunOptions& o, const std::string& entry_default, const Policy& paper);

TrConfig tr_config(const RunOptions& o, int K, int M, const Policy& pol);
oracle::IntegrateOptions integrate_options(const RunOptions& o);

// formulas, flow, flow solution, ledger and notes
void record(EntryReport& rep, const RenormalizedSolution& s, const FlowSystem& fs);
void record(EntryReport& rep, const TrRun& r);

// registry values plus the given extras
Bindings bindings_with(const ParamRegistry& reg, const Bindings& extra);

std::string fmt(double v);

// |a - b| / max(|b|, floor)
double rel_err(double a, double b, double floor = 1e-300);

// max over samples of |f(s) - g(s)| / max(1, |g(s)|)
double sampled_gap(const std::function<double(const Bindings&)>& f, const std::function<double(const Bindings&)>& g,
                   const std::vector<Bindings>& samples);

// Uniform samples of the named ranges.
std::vector<Bindings> random_bindings(std::mt19937& rng, const std::vector<std::tuple<std::string, double, double>>& ranges,
                                      int n, const Bindings& fixed = {});

// Reference trajectory of the spec from the asymptotic state at t = 0.
oracle::DenseSolution reference_from(const OdeSpec& spec, const Bindings& b, const oracle::State& y0, double t1,
                                     const RunOptions& o);

// Frequency of component i measured on [a, b] around its mean level.
double measured_frequency(const oracle::DenseSolution& sol, std::size_t i, double a, double b);

}  // namespace trg::detail
