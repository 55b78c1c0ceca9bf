#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trg/expr.hpp"

namespace trg {

enum class SymbolKind { Epsilon, Frequency, Amplitude, Phase, Constant, IntegrationConstant, Derivative };

const char* kind_name(SymbolKind k);

struct SymbolInfo {
    std::string name;
    SymbolKind kind = SymbolKind::Constant;
    std::optional<double> value;
    std::string base;          // for Derivative: the differentiated symbol
    bool t0_dependent = false; // renormalizable order-0 parameter
};

// Symbol table shared by every expression of one problem. Relations are
// linear identities among frequency symbols, stored as combos equal to 0.
class ParamRegistry {
public:
    ParamRegistry();

    std::uint64_t domain() const { return domain_; }

    void add(const std::string& name, SymbolKind kind, std::optional<double> value = std::nullopt);
    std::string fresh(const std::string& stem, SymbolKind kind);
    // name of the derivative symbol, registering it on first use
    std::string derivative(const std::string& name);
    static std::string derivative_name(const std::string& name) { return name + "'"; }

    bool has(const std::string& name) const;
    const SymbolInfo& info(const std::string& name) const;
    SymbolInfo& info(const std::string& name);
    SymbolKind kind(const std::string& name) const { return info(name).kind; }
    void bind(const std::string& name, double v);
    Bindings bindings() const;
    const std::vector<SymbolInfo>& all() const { return symbols_; }

    Expr sym(const std::string& name, int power = 1) const;
    Expr eps() const { return sym(kEps); }

    void add_relation(const FreqCombo& combo_equal_zero);
    const std::vector<FreqCombo>& relations() const { return relations_; }
    bool in_relation_span(const FreqCombo& f) const;

private:
    std::uint64_t domain_;
    std::vector<SymbolInfo> symbols_;
    std::vector<FreqCombo> relations_;
};

// Exact test: is f a rational combination of the given combos?
bool in_span(const FreqCombo& f, const std::vector<FreqCombo>& basis);

}  // namespace trg
