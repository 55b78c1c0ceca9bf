#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trg/oracle.hpp"

namespace trg {

struct RunOptions {
    std::optional<double> eps;
    std::optional<int> order_k, order_m;
    std::optional<std::string> policy;  // fundamental | paper-grouping
    std::optional<double> horizon;
    double rtol = 1e-10, atol = 1e-12;
    unsigned seed = 42;
    int modes = 2;  // rod/beam truncation
};

struct Check {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
    bool gating = true;  // informational checks never fail an entry
};

struct EntryReport {
    std::string id;
    std::vector<std::pair<std::string, std::string>> formulas;
    std::string flow;
    std::string flow_solution;
    std::string diagnosis;
    std::vector<std::string> ledger;
    std::vector<std::string> notes;
    std::vector<Check> checks;
    std::optional<oracle::ErrorReport> errors;  // asymptotic vs reference samples
    std::string failure;                         // pipeline exception, if any
    double seconds = 0.0;

    bool passed() const;
    const Check* find(const std::string& name) const;
    Check& add(const std::string& name, bool ok, double value, double threshold, const std::string& detail = "");
    Check& inform(const std::string& name, bool ok, double value, double threshold, const std::string& detail = "");
};

struct CatalogEntry {
    std::string id;
    std::string title;
    std::string source;    // where the example comes from
    std::string equation;  // mini-language text
    std::string pipeline;  // TR | HTR | first-order | modal
    std::string policy;    // default projection policy
    std::vector<std::string> expectations;
    std::vector<std::string> notes;
    std::function<EntryReport(const RunOptions&)> run;
};

const std::vector<CatalogEntry>& catalog();
// Accepts rod_modes_3 style ids for the parameterized entries (sets modes).
const CatalogEntry& get_entry(const std::string& id, RunOptions* opts = nullptr);
// Never throws: pipeline errors become a failed check.
EntryReport verify_entry(const CatalogEntry& e, const RunOptions& opts);

}  // namespace trg
