#include "trg/catalog.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "catalog_detail.hpp"

namespace trg {

bool EntryReport::passed() const {
    if (!failure.empty()) return false;
    bool any = false;
    for (const auto& c : checks) {
        if (!c.gating) continue;
        any = true;
        if (!c.passed) return false;
    }
    return any;
}

const Check* EntryReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

Check& EntryReport::add(const std::string& name, bool ok, double value, double threshold, const std::string& detail) {
    // NaN never passes
    if (std::isnan(value)) ok = false;
    checks.push_back({name, ok, value, threshold, detail, true});
    return checks.back();
}

Check& EntryReport::inform(const std::string& name, bool ok, double value, double threshold, const std::string& detail) {
    Check& c = add(name, ok, value, threshold, detail);
    c.gating = false;
    return c;
}

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> v;
        detail::tr_entries(v);
        detail::layer_entries(v);
        detail::modal_entries(v);
        detail::htr_entries(v);
        std::sort(v.begin(), v.end(), [](const CatalogEntry& a, const CatalogEntry& b) { return a.id < b.id; });
        return v;
    }();
    return entries;
}

const CatalogEntry& get_entry(const std::string& id, RunOptions* opts) {
    for (const auto& e : catalog())
        if (e.id == id) return e;
    // rod_modes_3 -> rod_modes_N with 3 modes
    for (const char* stem : {"rod_modes_", "beam_modes_"}) {
        std::string s(stem);
        if (id.rfind(s, 0) != 0 || id.size() == s.size()) continue;
        std::string n = id.substr(s.size());
        if (!std::all_of(n.begin(), n.end(), [](char c) { return c >= '0' && c <= '9'; }) || n.size() > 2) continue;
        int modes = std::stoi(n);
        if (modes < 1 || modes > 4) throw std::invalid_argument("mode count for '" + id + "' must be 1..4");
        if (opts) opts->modes = modes;
        return get_entry(s + "N");
    }
    throw std::invalid_argument("unknown catalog entry '" + id + "'");
}

EntryReport verify_entry(const CatalogEntry& e, const RunOptions& opts) {
    auto start = std::chrono::steady_clock::now();
    EntryReport rep;
    try {
        rep = e.run(opts);
    } catch (const std::exception& ex) {
        rep.failure = ex.what();
    }
    rep.id = e.id;
    if (e.id.find("_N") != std::string::npos) rep.id = e.id.substr(0, e.id.size() - 1) + std::to_string(opts.modes);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

namespace detail {

Policy choose_policy(const RunOptions& o, const std::string& entry_default, const Policy& paper) {
    std::string want = o.policy.value_or(entry_default);
    if (want == "paper-grouping") return paper;
    if (want == "fundamental") return Policy{};
    throw std::invalid_argument("unknown policy '" + want + "' (expected fundamental or paper-grouping)");
}

TrConfig tr_config(const RunOptions& o, int K, int M, const Policy& pol) {
    TrConfig cfg;
    cfg.K = o.order_k.value_or(K);
    cfg.M = o.order_m.value_or(M);
    if (cfg.K < 1 || cfg.K > 3) throw std::invalid_argument("order K must be in [1, 3]");
    if (cfg.M < 1 || cfg.M > 2) throw std::invalid_argument("order M must be in [1, 2]");
    cfg.policy = pol;
    cfg.seed = o.seed;
    return cfg;
}

oracle::IntegrateOptions integrate_options(const RunOptions& o) {
    oracle::IntegrateOptions io;
    io.rtol = o.rtol;
    io.atol = o.atol;
    return io;
}

void record(EntryReport& rep, const RenormalizedSolution& s, const FlowSystem& fs) {
    for (std::size_t c = 0; c < s.comps.size(); ++c) rep.formulas.emplace_back(s.comps[c], s.render(static_cast<int>(c)));
    rep.flow = fs.render();
    rep.flow_solution.clear();
    for (const auto& d : s.flow.desc)
        rep.flow_solution += d.param + ": " + flow_kind_name(d.kind) + ", " + d.text + "\n";
    for (const auto& d : fs.ledger) rep.ledger.push_back(d.reason + ": " + render(d.term, "t0"));
    for (const auto& n : s.notes) rep.notes.push_back(n);
    for (const auto& u : fs.unresolved) rep.notes.push_back("unresolved: " + u);
    for (const auto& a : fs.algebraic) rep.notes.push_back("closure: " + render(a, "t0") + " = 0");
}

void record(EntryReport& rep, const TrRun& r) {
    record(rep, r.result, r.flow);
    rep.diagnosis = std::string(verdict_name(r.diagnosis.verdict));
    if (!r.diagnosis.detail.empty()) rep.diagnosis += " (" + r.diagnosis.detail + ")";
    for (const auto& n : r.diagnosis.notes) rep.notes.push_back(n);
    for (const auto& w : r.series.warnings) rep.notes.push_back("warning: " + w);
}

Bindings bindings_with(const ParamRegistry& reg, const Bindings& extra) {
    Bindings b = reg.bindings();
    for (const auto& [k, v] : extra) b[k] = v;
    return b;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double rel_err(double a, double b, double floor) { return std::fabs(a - b) / std::max(std::fabs(b), floor); }

double sampled_gap(const std::function<double(const Bindings&)>& f, const std::function<double(const Bindings&)>& g,
                   const std::vector<Bindings>& samples) {
    double worst = 0.0;
    for (const auto& b : samples) {
        double x = f(b), y = g(b);
        double d = std::fabs(x - y) / std::max(1.0, std::fabs(y));
        if (std::isnan(d)) return d;
        worst = std::max(worst, d);
    }
    return worst;
}

std::vector<Bindings> random_bindings(std::mt19937& rng, const std::vector<std::tuple<std::string, double, double>>& ranges,
                                      int n, const Bindings& fixed) {
    std::vector<Bindings> out;
    for (int i = 0; i < n; ++i) {
        Bindings b = fixed;
        for (const auto& [name, lo, hi] : ranges) b[name] = std::uniform_real_distribution<double>(lo, hi)(rng);
        out.push_back(b);
    }
    return out;
}

oracle::DenseSolution reference_from(const OdeSpec& spec, const Bindings& b, const oracle::State& y0, double t1,
                                     const RunOptions& o) {
    return oracle::integrate(ode_rhs(spec, b), 0.0, y0, t1, integrate_options(o));
}

double measured_frequency(const oracle::DenseSolution& sol, std::size_t i, double a, double b) {
    double level = oracle::mid_level(sol, i, a, b);
    return 2 * M_PI / oracle::measure_period(sol, i, a, b, level);
}

}  // namespace detail
}  // namespace trg
