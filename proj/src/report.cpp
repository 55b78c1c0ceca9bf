#include "trg/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"

namespace trg {

using nlohmann::ordered_json;

namespace {

// NaN and infinities have no JSON spelling; null reads back as NaN
ordered_json number(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

double number(const ordered_json& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return j.get<double>();
}

ordered_json entry_json(const EntryReport& e) {
    ordered_json j;
    j["id"] = e.id;
    j["passed"] = e.passed();
    j["failure"] = e.failure;
    j["diagnosis"] = e.diagnosis;
    j["flow"] = e.flow;
    j["flow_solution"] = e.flow_solution;
    ordered_json f = ordered_json::array();
    for (const auto& [name, text] : e.formulas) f.push_back({{"name", name}, {"text", text}});
    j["formulas"] = f;
    j["ledger"] = e.ledger;
    j["notes"] = e.notes;
    ordered_json cs = ordered_json::array();
    for (const auto& c : e.checks)
        cs.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"gating", c.gating},
                      {"value", number(c.value)},
                      {"threshold", number(c.threshold)},
                      {"detail", c.detail}});
    j["checks"] = cs;
    if (e.errors) {
        const auto& er = *e.errors;
        ordered_json rows = ordered_json::array();
        for (std::size_t i = 0; i < er.t.size(); ++i)
            rows.push_back({number(er.t[i]), number(er.asym[i]), number(er.ref[i]), number(er.err[i])});
        j["errors"] = {{"sup_abs", number(er.sup_abs)},
                       {"sup_rel", number(er.sup_rel)},
                       {"rms", number(er.rms)},
                       {"t_at_sup", number(er.t_at_sup)},
                       {"columns", {"t", "y_asym", "y_ref", "abs_err"}},
                       {"rows", rows}};
    } else {
        j["errors"] = nullptr;
    }
    return j;
}

EntryReport entry_from(const ordered_json& j) {
    EntryReport e;
    e.id = j.at("id").get<std::string>();
    e.failure = j.value("failure", "");
    e.diagnosis = j.value("diagnosis", "");
    e.flow = j.value("flow", "");
    e.flow_solution = j.value("flow_solution", "");
    for (const auto& f : j.at("formulas")) e.formulas.emplace_back(f.at("name"), f.at("text"));
    e.ledger = j.at("ledger").get<std::vector<std::string>>();
    e.notes = j.at("notes").get<std::vector<std::string>>();
    for (const auto& c : j.at("checks")) {
        Check k;
        k.name = c.at("name");
        k.passed = c.at("passed");
        k.gating = c.at("gating");
        k.value = number(c.at("value"));
        k.threshold = number(c.at("threshold"));
        k.detail = c.at("detail");
        e.checks.push_back(k);
    }
    const auto& er = j.at("errors");
    if (!er.is_null()) {
        oracle::ErrorReport r;
        r.sup_abs = number(er.at("sup_abs"));
        r.sup_rel = number(er.at("sup_rel"));
        r.rms = number(er.at("rms"));
        r.t_at_sup = number(er.at("t_at_sup"));
        for (const auto& row : er.at("rows")) {
            r.t.push_back(number(row.at(0)));
            r.asym.push_back(number(row.at(1)));
            r.ref.push_back(number(row.at(2)));
            r.err.push_back(number(row.at(3)));
        }
        e.errors = r;
    }
    return e;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string indent(const std::string& block) {
    std::string out, line;
    for (char c : block) {
        if (c == '\n') {
            out += "  " + line + "\n";
            line.clear();
        } else {
            line += c;
        }
    }
    if (!line.empty()) out += "  " + line + "\n";
    return out;
}

std::size_t failed_checks(const EntryReport& e) {
    std::size_t n = 0;
    for (const auto& c : e.checks) n += c.gating && !c.passed;
    return n;
}

}  // namespace

bool Report::passed() const {
    if (entries.empty()) return false;
    for (const auto& e : entries)
        if (!e.passed()) return false;
    return true;
}

std::string to_json(const Report& r) {
    ordered_json j;
    j["tool"] = r.tool;
    j["version"] = r.version;
    j["command"] = r.command;
    j["config"] = r.config;
    j["passed"] = r.passed();
    ordered_json es = ordered_json::array();
    for (const auto& e : r.entries) es.push_back(entry_json(e));
    j["entries"] = es;
    return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw std::runtime_error(std::string("report is not valid JSON: ") + e.what());
    }
    Report r;
    try {
        r.tool = j.at("tool");
        r.version = j.at("version");
        r.command = j.value("command", "");
        for (const auto& [k, v] : j.at("config").items()) r.config[k] = v.get<std::string>();
        for (const auto& e : j.at("entries")) r.entries.push_back(entry_from(e));
    } catch (const ordered_json::exception& e) {
        throw std::runtime_error(std::string("malformed report: ") + e.what());
    }
    return r;
}

std::string render_text(const EntryReport& e) {
    std::string s = "== " + e.id + ": " + (e.passed() ? "PASS" : "FAIL") + "\n";
    if (!e.failure.empty()) s += "error: " + e.failure + "\n";
    if (!e.diagnosis.empty()) s += "diagnosis: " + e.diagnosis + "\n";
    if (!e.flow.empty()) s += "flow:\n" + indent(e.flow);
    if (!e.flow_solution.empty()) s += "flow solution:\n" + indent(e.flow_solution);
    if (!e.formulas.empty()) {
        s += "formulas:\n";
        for (const auto& [name, text] : e.formulas) s += "  " + name + ": " + text + "\n";
    }
    if (!e.ledger.empty()) {
        s += "dropped terms:\n";
        for (const auto& l : e.ledger) s += "  " + l + "\n";
    }
    if (!e.notes.empty()) {
        s += "notes:\n";
        for (const auto& n : e.notes) s += "  " + n + "\n";
    }
    if (!e.checks.empty()) {
        s += "checks:\n";
        for (const auto& c : e.checks) {
            std::string tag = c.gating ? (c.passed ? "PASS" : "FAIL") : (c.passed ? "info" : "info-miss");
            s += "  [" + tag + "] " + c.name + ": " + num(c.value) + " (limit " + num(c.threshold) + ")";
            if (!c.detail.empty()) s += "; " + c.detail;
            s += "\n";
        }
    }
    if (e.errors)
        s += "error vs reference: sup abs " + num(e.errors->sup_abs) + " at t = " + num(e.errors->t_at_sup) + ", sup rel " +
             num(e.errors->sup_rel) + ", rms " + num(e.errors->rms) + " over " + std::to_string(e.errors->t.size()) +
             " samples\n";
    return s;
}

std::string render_text(const Report& r) {
    std::string s = r.tool + " " + r.version + " " + r.command + "\n";
    for (const auto& [k, v] : r.config) s += "  " + k + " = " + v + "\n";
    for (const auto& e : r.entries) s += "\n" + render_text(e);
    s += "\n" + pass_fail_table(r);
    return s;
}

std::string pass_fail_table(const Report& r) {
    std::string s;
    std::size_t passed = 0;
    for (const auto& e : r.entries) {
        std::size_t gating = 0;
        for (const auto& c : e.checks) gating += c.gating;
        std::size_t bad = failed_checks(e);
        passed += e.passed();
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-4s %-30s %zu/%zu checks\n", e.passed() ? "PASS" : "FAIL", e.id.c_str(),
                      gating - bad, gating);
        s += buf;
        if (!e.failure.empty()) s += "       error: " + e.failure + "\n";
        for (const auto& c : e.checks)
            if (c.gating && !c.passed) s += "       failed: " + c.name + " (" + num(c.value) + " vs " + num(c.threshold) + ")\n";
    }
    s += std::to_string(passed) + " of " + std::to_string(r.entries.size()) + " entries passed\n";
    return s;
}

std::string error_csv(const EntryReport& e) {
    if (!e.errors) return "t,y_asym,y_ref,abs_err\n";
    return e.errors->csv();
}

}  // namespace trg
