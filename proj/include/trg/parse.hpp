#pragma once

#include <set>
#include <stdexcept>
#include <string>

#include "trg/htr.hpp"
#include "trg/perturb.hpp"

namespace trg {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int col, const std::string& msg, std::set<std::string> expected = {});
    int line() const { return line_; }
    int column() const { return col_; }
    const std::set<std::string>& expected() const { return expected_; }

private:
    int line_, col_;
    std::set<std::string> expected_;
};

// Either an ordinary spec (op y = forcing + eps terms) or a homotopy.
struct ParsedSpec {
    bool homotopy = false;
    OdeSpec ode;
    HomotopySpec htr;
};

// Statements, one per line (or separated by ';'):
//   param a=1.0, b        freq w=2.0        phase th        unknown u
//   relation w2 + w3 - w1 = 0
//   kernel y: sin (R, theta) const B A
//   y'' + y = eps*(y' - (1/3)*y'^3)
//   homotopy L: y' + y = 1 target: y' - 1 + y^2
// '#' starts a comment.
ParsedSpec parse_equation(const std::string& src);

std::string render_spec(const OdeSpec& s);
std::string render_spec(const HomotopySpec& h);
std::string render_spec(const ParsedSpec& p);

// Structural comparison used by the round-trip property.
bool same_spec(const OdeSpec& a, const OdeSpec& b);
bool same_spec(const HomotopySpec& a, const HomotopySpec& b);

}  // namespace trg
