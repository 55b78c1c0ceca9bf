#include "trg/registry.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

namespace trg {

const char* kind_name(SymbolKind k) {
    switch (k) {
        case SymbolKind::Epsilon: return "epsilon";
        case SymbolKind::Frequency: return "frequency";
        case SymbolKind::Amplitude: return "amplitude";
        case SymbolKind::Phase: return "phase";
        case SymbolKind::Constant: return "constant";
        case SymbolKind::IntegrationConstant: return "integration_constant";
        case SymbolKind::Derivative: return "derivative";
    }
    return "?";
}

namespace {
std::atomic<std::uint64_t> next_domain{1};
}

ParamRegistry::ParamRegistry() : domain_(next_domain++) { add(kEps, SymbolKind::Epsilon); }

void ParamRegistry::add(const std::string& name, SymbolKind kind, std::optional<double> value) {
    if (name.empty()) throw std::invalid_argument("empty symbol name");
    if (name == kT0 || name == "t") throw std::invalid_argument("'" + name + "' is reserved");
    for (auto& s : symbols_) {
        if (s.name == name) {
            if (s.kind != kind)
                throw std::invalid_argument("symbol '" + name + "' already declared as " + kind_name(s.kind));
            if (value) s.value = value;
            return;
        }
    }
    symbols_.push_back({name, kind, value, "", false});
}

std::string ParamRegistry::fresh(const std::string& stem, SymbolKind kind) {
    std::string name = stem;
    for (int i = 1; has(name); ++i) name = stem + "_" + std::to_string(i);
    add(name, kind);
    return name;
}

std::string ParamRegistry::derivative(const std::string& name) {
    std::string d = derivative_name(name);
    if (!has(d)) {
        info(name);  // must exist
        add(d, SymbolKind::Derivative);
        info(d).base = name;
    }
    return d;
}

bool ParamRegistry::has(const std::string& name) const {
    return std::any_of(symbols_.begin(), symbols_.end(), [&](const SymbolInfo& s) { return s.name == name; });
}

const SymbolInfo& ParamRegistry::info(const std::string& name) const {
    for (const auto& s : symbols_)
        if (s.name == name) return s;
    throw std::out_of_range("unknown symbol '" + name + "'");
}

SymbolInfo& ParamRegistry::info(const std::string& name) {
    for (auto& s : symbols_)
        if (s.name == name) return s;
    throw std::out_of_range("unknown symbol '" + name + "'");
}

void ParamRegistry::bind(const std::string& name, double v) { info(name).value = v; }

Bindings ParamRegistry::bindings() const {
    Bindings b;
    for (const auto& s : symbols_)
        if (s.value) b[s.name] = *s.value;
    return b;
}

Expr ParamRegistry::sym(const std::string& name, int power) const {
    info(name);
    Expr e = Expr::symbol(name, power);
    e.with_domain(domain_);
    return e;
}

void ParamRegistry::add_relation(const FreqCombo& combo) {
    for (const auto& [n, m] : combo.syms)
        if (kind(n) != SymbolKind::Frequency) throw std::invalid_argument("relation uses non-frequency symbol '" + n + "'");
    if (combo.is_zero()) throw std::invalid_argument("empty relation");
    relations_.push_back(combo);
}

bool ParamRegistry::in_relation_span(const FreqCombo& f) const { return in_span(f, relations_); }

bool in_span(const FreqCombo& f, const std::vector<FreqCombo>& basis) {
    if (f.is_zero()) return true;
    if (basis.empty()) return false;
    // coordinates: rate, then one per symbol name
    std::vector<std::string> names;
    auto collect = [&](const FreqCombo& c) {
        for (const auto& s : c.syms)
            if (std::find(names.begin(), names.end(), s.first) == names.end()) names.push_back(s.first);
    };
    collect(f);
    for (const auto& b : basis) collect(b);
    auto vec = [&](const FreqCombo& c) {
        std::vector<Rational> v(names.size() + 1);
        v[0] = c.rate;
        for (const auto& s : c.syms) {
            auto idx = std::find(names.begin(), names.end(), s.first) - names.begin();
            v[idx + 1] = Rational(s.second);
        }
        return v;
    };
    // row-reduce the basis, then reduce f against it
    std::vector<std::vector<Rational>> rows;
    for (const auto& b : basis) rows.push_back(vec(b));
    std::size_t ncol = names.size() + 1;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncol && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][c].is_zero()) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[r]);
        Rational inv = Rational(1) / rows[r][c];
        for (auto& x : rows[r]) x *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c].is_zero()) continue;
            Rational m = rows[i][c];
            for (std::size_t j = 0; j < ncol; ++j) rows[i][j] -= m * rows[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    auto v = vec(f);
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        Rational m = v[pivots[i]];
        if (m.is_zero()) continue;
        for (std::size_t j = 0; j < ncol; ++j) v[j] -= m * rows[i][j];
    }
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x.is_zero(); });
}

}  // namespace trg
