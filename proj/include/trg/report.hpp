#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trg/catalog.hpp"

namespace trg {

inline constexpr const char* kVersion = "0.1.0";

// Self-contained: the configuration that produced the entries travels with them.
struct Report {
    std::string tool = "trg";
    std::string version = kVersion;
    std::string command;
    std::map<std::string, std::string> config;  // flag -> value as given
    std::vector<EntryReport> entries;

    bool passed() const;
};

// Timings are left out so that repeated runs serialize identically.
std::string to_json(const Report& r);
Report report_from_json(const std::string& text);

std::string render_text(const EntryReport& e);
std::string render_text(const Report& r);
// One line per entry, failing checks listed under it.
std::string pass_fail_table(const Report& r);

// t,y_asym,y_ref,abs_err; empty header only when no comparison was made.
std::string error_csv(const EntryReport& e);

}  // namespace trg
