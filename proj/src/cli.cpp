#include "trg/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "catalog_detail.hpp"
#include "json.hpp"
#include "trg/htr.hpp"

namespace trg {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw std::runtime_error("cannot write '" + path.string() + "'");
}

// shortest %g spelling that reads back exactly
std::string num(double v) {
    char buf[64];
    for (int p = 15; p <= 17; ++p) {
        std::snprintf(buf, sizeof buf, "%.*g", p, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::map<std::string, std::string> config_map(const RunConfig& cfg) {
    std::map<std::string, std::string> m;
    const RunOptions& o = cfg.opts;
    if (o.eps) m["eps"] = num(*o.eps);
    if (o.order_k) m["order-k"] = std::to_string(*o.order_k);
    if (o.order_m) m["order-m"] = std::to_string(*o.order_m);
    if (o.policy) m["policy"] = *o.policy;
    if (o.horizon) m["horizon"] = num(*o.horizon);
    m["rel-tol"] = num(o.rtol);
    m["abs-tol"] = num(o.atol);
    m["seed"] = std::to_string(o.seed);
    if (!cfg.entries.empty()) {
        std::string s;
        for (const auto& e : cfg.entries) s += (s.empty() ? "" : ",") + e;
        m["entry"] = s;
    }
    if (cfg.equation) m["equation"] = equation_text(*cfg.equation);
    return m;
}

// Unset integration constants get 1 (0 for phases) so the comparison can run.
Bindings adhoc_bindings(const RenormalizedSolution& s, double eps, std::vector<std::string>& notes) {
    Bindings b = s.registry.bindings();
    b["eps"] = eps;
    std::string chosen;
    for (const auto& d : s.flow.desc) {
        if (b.count(d.initial)) continue;
        bool phase = s.registry.has(d.param) && s.registry.kind(d.param) == SymbolKind::Phase;
        b[d.initial] = phase ? 0.0 : 1.0;
        chosen += (chosen.empty() ? "" : ", ") + d.initial + " = " + (phase ? "0" : "1");
    }
    for (const auto& c : s.free_constants)
        if (!b.count(c)) {
            b[c] = 1.0;
            chosen += (chosen.empty() ? "" : ", ") + c + " = 1";
        }
    if (!chosen.empty()) notes.push_back("oracle comparison at " + chosen);
    return b;
}

void compare_with_oracle(EntryReport& rep, const OdeSpec& spec, const RenormalizedSolution& s, double eps, double T,
                         const RunOptions& o) {
    try {
        Bindings b = adhoc_bindings(s, eps, rep.notes);
        SolutionEvaluator ev(s, b, T + 1);
        auto ref = detail::reference_from(spec, b, asymptotic_state(spec, ev, 0.0), T, o);
        rep.errors = oracle::compare([&](double t) { return ev.value(0, t); }, [&](double t) { return ref.at(t, 0); },
                                     oracle::linspace(0, T, 401));
        rep.inform("sup |y_asym - y_ref| on [0, " + detail::fmt(T) + "] within 5 eps", rep.errors->sup_abs <= 5 * eps,
                   rep.errors->sup_abs, 5 * eps, "eps = " + detail::fmt(eps) + ", reference from the asymptotic state at t = 0");
    } catch (const std::exception& e) {
        rep.notes.push_back(std::string("no oracle comparison: ") + e.what());
    }
}

std::vector<std::string> resolve_entries(const RunConfig& cfg, std::vector<RunOptions>& opts) {
    std::vector<std::string> ids;
    if (cfg.entries.empty()) {
        for (const auto& e : catalog()) {
            ids.push_back(e.id);
            opts.push_back(cfg.opts);
        }
        return ids;
    }
    for (const auto& id : cfg.entries) {
        RunOptions o = cfg.opts;
        get_entry(id, &o);
        ids.push_back(id);
        opts.push_back(o);
    }
    return ids;
}

void emit(const Report& r, const RunConfig& cfg, bool full, std::ostream& out) {
    if (cfg.out_dir) {
        fs::create_directories(*cfg.out_dir);
        fs::path dir(*cfg.out_dir);
        write_file(dir / "report.json", to_json(r));
        write_file(dir / "report.txt", render_text(r));
        if (cfg.csv)
            for (const auto& e : r.entries)
                if (e.errors) write_file(dir / (e.id + ".csv"), error_csv(e));
    }
    if (cfg.json) {
        out << to_json(r);
    } else if (cfg.csv && !cfg.out_dir) {
        for (const auto& e : r.entries) {
            if (r.entries.size() > 1) out << "# " << e.id << "\n";
            out << error_csv(e);
        }
    } else {
        out << (full ? render_text(r) : pass_fail_table(r));
    }
}

}  // namespace

void validate(const RunConfig& cfg) {
    const RunOptions& o = cfg.opts;
    if (o.eps && !(*o.eps > 0 && *o.eps <= 1)) throw std::invalid_argument("--eps must be in (0, 1]");
    if (o.order_k && (*o.order_k < 1 || *o.order_k > 3)) throw std::invalid_argument("--order-k must be in [1, 3]");
    if (o.order_m && (*o.order_m < 1 || *o.order_m > 2)) throw std::invalid_argument("--order-m must be in [1, 2]");
    if (o.policy && *o.policy != "fundamental" && *o.policy != "paper-grouping")
        throw std::invalid_argument("--policy must be fundamental or paper-grouping");
    if (o.horizon && !(*o.horizon > 0)) throw std::invalid_argument("--horizon must be positive");
    if (!(o.rtol > 0) || !(o.atol > 0)) throw std::invalid_argument("tolerances must be positive");
    if (cfg.command == "run") {
        if (cfg.entries.size() + (cfg.equation ? 1 : 0) != 1)
            throw std::invalid_argument("run needs exactly one of --entry or --equation");
    } else if (cfg.command == "report") {
        if (!cfg.report_file) throw std::invalid_argument("report needs a saved report file");
    } else if (cfg.command != "verify" && cfg.command != "list") {
        throw std::invalid_argument("unknown command '" + cfg.command + "'");
    }
}

std::string equation_text(const std::string& arg) {
    std::error_code ec;
    if (arg.find('\n') == std::string::npos && fs::is_regular_file(arg, ec)) return read_file(arg);
    return arg;
}

EntryReport run_equation(const std::string& text, const RunOptions& o) {
    EntryReport rep;
    rep.id = "equation";
    try {
        ParsedSpec ps = parse_equation(text);
        TrConfig cfg = detail::tr_config(o, 1, 1, detail::choose_policy(o, "fundamental", Policy{}));
        if (ps.homotopy) {
            OdeSpec spec = build_homotopy(ps.htr);
            TrRun r = run_tr(spec, cfg);
            RenormalizedSolution fin = finalize(r.result);
            detail::record(rep, fin, r.flow);
            rep.diagnosis = verdict_name(r.diagnosis.verdict);
            rep.add("pipeline completed", true, 0, 0, "homotopy, finalized at eps = 1");
            compare_with_oracle(rep, spec, fin, 1.0, o.horizon.value_or(10.0), o);
        } else {
            TrRun r = run_tr(ps.ode, cfg);
            detail::record(rep, r);
            rep.add("pipeline completed", true, 0, 0);
            const double eps = o.eps.value_or(0.05);
            compare_with_oracle(rep, ps.ode, r.result, eps, o.horizon.value_or(2 / eps), o);
        }
    } catch (const std::exception& e) {
        rep.failure = e.what();
    }
    return rep;
}

std::string list_json() {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& e : catalog())
        arr.push_back({{"id", e.id},
                       {"description", e.title},
                       {"source", e.source},
                       {"pipeline", e.pipeline},
                       {"policy", e.policy},
                       {"equation", e.equation},
                       {"expectations", e.expectations},
                       {"notes", e.notes}});
    return arr.dump(2) + "\n";
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate(cfg);
        if (cfg.command == "list") {
            out << list_json();
            return 0;
        }
        if (cfg.command == "report") {
            Report r = report_from_json(read_file(*cfg.report_file));
            emit(r, cfg, true, out);
            return r.passed() ? 0 : 1;
        }
        Report r;
        r.command = cfg.command;
        r.config = config_map(cfg);
        if (cfg.command == "run" && cfg.equation) {
            r.entries.push_back(run_equation(equation_text(*cfg.equation), cfg.opts));
        } else {
            std::vector<RunOptions> opts;
            auto ids = resolve_entries(cfg, opts);
            for (std::size_t i = 0; i < ids.size(); ++i) {
                EntryReport e = verify_entry(get_entry(ids[i]), opts[i]);
                err << (e.passed() ? "PASS " : "FAIL ") << e.id << " (" << detail::fmt(e.seconds) << " s)\n";
                r.entries.push_back(std::move(e));
            }
        }
        emit(r, cfg, cfg.command == "run", out);
        return r.passed() ? 0 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace trg
