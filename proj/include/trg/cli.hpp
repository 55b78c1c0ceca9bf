#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trg/catalog.hpp"
#include "trg/report.hpp"

namespace trg {

struct RunConfig {
    std::string command;               // run | verify | list | report
    std::vector<std::string> entries;  // verify: names (empty = all); run: at most one
    std::optional<std::string> equation;  // file path or inline text
    std::optional<std::string> report_file;
    RunOptions opts;
    std::optional<std::string> out_dir;
    bool json = false, csv = false;
};

// Throws std::invalid_argument when a value is out of range.
void validate(const RunConfig& cfg);

// Mini-language text, or the contents of the file it names.
std::string equation_text(const std::string& arg);

// Pipeline on an ad-hoc spec: TR for ordinary specs, HTR (finalized at eps = 1)
// for homotopies, with an informational comparison against the oracle.
EntryReport run_equation(const std::string& text, const RunOptions& o);

std::string list_json();

// 0 iff every check passed; 1 on failed checks; 2 on usage or I/O errors.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace trg
