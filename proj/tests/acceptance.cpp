// Acceptance criteria: one PASS/FAIL line each. `--criterion N` runs one.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "trg/catalog.hpp"
#include "trg/cli.hpp"

using namespace trg;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + why;
    }
    void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

EntryReport verify(const std::string& id, RunOptions o = {}) { return verify_entry(get_entry(id, &o), o); }

// the named check must exist and pass
void need(Outcome& out, const EntryReport& r, const std::string& name) {
    const Check* c = r.find(name);
    if (!r.failure.empty()) out.fail(r.id + " errored: " + r.failure);
    if (!c)
        out.fail(r.id + ": missing check '" + name + "'");
    else if (!c->passed)
        out.fail(r.id + ": '" + name + "' " + g(c->value) + " vs " + g(c->threshold));
}

// the named check's value must stay at or under the tolerance pinned here
void at_most(Outcome& out, const EntryReport& r, const std::string& name, double tol) {
    const Check* c = r.find(name);
    if (!c) return out.fail(r.id + ": missing check '" + name + "'");
    if (!(c->value <= tol))
        out.fail(r.id + ": '" + name + "' " + g(c->value) + " > " + g(tol));
    else
        out.note(r.id + " " + g(c->value) + " <= " + g(tol));
}

void at_least(Outcome& out, const EntryReport& r, const std::string& name, double tol) {
    const Check* c = r.find(name);
    if (!c) return out.fail(r.id + ": missing check '" + name + "'");
    if (!(c->value >= tol))
        out.fail(r.id + ": '" + name + "' " + g(c->value) + " < " + g(tol));
    else
        out.note(r.id + " " + g(c->value) + " >= " + g(tol));
}

void within(Outcome& out, const std::string& what, double seconds, double budget) {
    if (seconds >= budget) out.fail(what + " took " + g(seconds) + " s (budget " + g(budget) + " s)");
}

Outcome rayleigh_symbolic() {
    Outcome out;
    EntryReport r = verify("rayleigh");
    need(out, r, "flow R' = eps*R/2 - eps*R^3/8, theta' = 0 (exact)");
    at_most(out, r, "solution structure R*sin(t+theta) + eps*R^3/96*cos(3t+3theta)", 1e-10);
    within(out, "rayleigh", r.seconds, 1.0);
    return out;
}

Outcome rayleigh_uniform() {
    Outcome out;
    double total = 0;
    for (double eps : {0.01, 0.05, 0.1}) {
        RunOptions o;
        o.eps = eps;
        EntryReport r = verify("rayleigh", o);
        total += r.seconds;
        out.note("eps = " + g(eps));
        at_most(out, r, "sup |y_TR - y_ref| on [0, 2/eps] <= 5 eps", 5 * eps);
        at_least(out, r, "naive order-1 error exceeds the renormalized error by 5x at t = 2/eps", 5.0);
    }
    within(out, "rayleigh sweep", total, 10.0);
    return out;
}

Outcome rayleigh_limit() {
    Outcome out;
    EntryReport r = verify("rayleigh");
    need(out, r, "R flow solved in closed form (Bernoulli)");
    need(out, r, "closed form R(t) -> 2 for R(0) in (0, 4)");
    need(out, r, "R = 2 is a fixed point of the flow");
    at_most(out, r, "numeric flow integration agrees with the closed form", 1e-6);
    return out;
}

Outcome mathieu() {
    Outcome out;
    EntryReport r = verify("mathieu");
    need(out, r, "perturbation series matches the printed order-1 solution");
    need(out, r, "separation choice theta = 0");
    need(out, r, "amplitude equation {cos(t/2) + (eps/2)cos(3t/2) - (eps/2)cos(t/2)} R' = -(a1+1) eps R sin(t/2)");
    at_most(out, r, "R(t) matches the printed closed form", 1e-8);
    need(out, r, "sup |y_TR - y_ref| on [0, 20], eps = 0.05, a1 = 0");
    within(out, "mathieu", r.seconds, 2.0);
    return out;
}

Outcome three_wave() {
    Outcome out;
    EntryReport a = verify("three_wave_nonres"), b = verify("three_wave_sum");
    need(out, a, "no secular terms at order 1");
    need(out, b, "phase flows theta_i' = eps A_j A_k/(4 A_i w_i), amplitudes constant (exact)");
    at_most(out, b, "measured x-frequency equals 2 + eps/8 within 1e-3", 1e-3);
    within(out, "three-wave", a.seconds + b.seconds, 10.0);
    return out;
}

Outcome boundary_layers() {
    Outcome out;
    for (const char* id : {"lighthill", "tsien"}) {
        EntryReport r = verify(id);
        need(out, r, "renormalized solution matches the printed uniform solution");
        at_most(out, r, "y(x = 1e-3) < 1e-3 (limit y -> 0 as x -> 0)", 1e-3);
        need(out, r, "sup relative error vs reference on x in [0.05, 1], eps = 0.05");
        within(out, id, r.seconds, 5.0);
    }
    return out;
}

Outcome modal() {
    Outcome out;
    double total = 0;
    for (const char* id : {"rod_modes_2", "beam_modes_2"}) {
        EntryReport r = verify(id);
        total += r.seconds;
        at_most(out, r, "measured mode-1 frequency equals w1 + eps sum A^2/(4 w1) within 5e-3", 5e-3);
    }
    within(out, "modal", total, 30.0);
    return out;
}

Outcome failures() {
    Outcome out;
    EntryReport a = verify("rg_fail_riccati"), b = verify("rg_fail_cubic"), c = verify("rg_fail_y_eq_1_minus_eps_y2");
    need(out, a, "diagnosis Cyclic");
    if (a.diagnosis.rfind("cyclic", 0) != 0) out.fail("riccati verdict '" + a.diagnosis + "'");
    need(out, b, "diagnosis TrivialFlow");
    if (b.diagnosis.rfind("trivial", 0) != 0) out.fail("cubic verdict '" + b.diagnosis + "'");
    need(out, c, "diagnosis notes the exact limits +-1 are out of reach");
    need(out, c, "diagnosis notes unbounded linear growth");
    at_most(out, c, "oracle |y(20) - 1| <= 1e-3", 1e-3);
    within(out, "failure entries", a.seconds + b.seconds + c.seconds, 5.0);
    return out;
}

Outcome htr_tanh() {
    Outcome out;
    EntryReport r = verify("htr_tanh");
    need(out, r, "finalized solution 1 + A0 e^{-2t} + A0^2 e^{-4t}");
    at_most(out, r, "|y_HTR - tanh| <= 0.05 on t >= 1, A0 from y(0) = 0", 0.05);
    within(out, "htr_tanh", r.seconds, 1.0);
    return out;
}

Outcome htr_duffing() {
    Outcome out;
    EntryReport r = verify("htr_duffing");
    need(out, r, "amplitude condition 4(w^2 - alpha)A + 3 beta A^3 + 4F = 0 (exact)");
    at_most(out, r, "selected root |A0| predicts the periodic-orbit amplitude within 10%", 0.10);
    within(out, "htr_duffing", r.seconds, 5.0);
    return out;
}

Outcome htr_cubic() {
    Outcome out;
    EntryReport r = verify("htr_cubic");
    need(out, r, "route 1 (printed series): periodic, A constant and theta linear");
    need(out, r, "route 1 frequency (1 - eta)/2");
    need(out, r, "route 2 frequency condition w^2 = eta - (3/4) eta A^2 (exact)");
    need(out, r, "route 2: periodic, A and theta constant");
    at_most(out, r, "route 2 oracle period within 10% of 2 pi/w, A0 = 0.1", 0.10);
    return out;
}

Outcome htr_blasius() {
    Outcome out;
    EntryReport r = verify("htr_blasius");
    need(out, r, "B0 + C0 = 1/2 from y'(inf) = 1/2");
    at_most(out, r, "A0 = (-3 + sqrt 13)/2 from y'(0) = 0", 1e-10);
    need(out, r, "y'_HTR(inf) = 1/2");
    at_most(out, r, "sup |y'_HTR - y'_ref| <= 0.25", 0.25);
    within(out, "htr_blasius", r.seconds, 5.0);
    return out;
}

// property suites of the unit binary, then the full verify run
Outcome properties() {
    Outcome out;
    std::string cmd = std::string("\"") + TRG_TEST_BINARY +
                      "\" --source-file=*test_expr.cpp,*test_perturb.cpp,*test_linode.cpp,*test_renorm.cpp,*test_htr.cpp"
                      " --no-colors 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) {
        out.fail("cannot start the unit binary");
        return out;
    }
    std::string log;
    char buf[512];
    while (std::fgets(buf, sizeof buf, p)) log += buf;
    int rc = pclose(p);
    int cases = 0, failed = -1;
    auto at = log.find("test cases:");
    if (at != std::string::npos) std::sscanf(log.c_str() + at, "test cases: %d | %*d passed | %d failed", &cases, &failed);
    if (rc != 0 || cases == 0 || failed != 0)
        out.fail("property suites: " + std::to_string(cases) + " cases, " + std::to_string(failed) + " failed");
    else
        out.note(std::to_string(cases) + " property test cases green");

    RunConfig cfg;
    cfg.command = "verify";
    std::ostringstream sink, errs;
    auto start = std::chrono::steady_clock::now();
    int status = run_command(cfg, sink, errs);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (status == 2) out.fail("verify --all did not complete: " + errs.str());
    within(out, "verify --all", secs, 120.0);
    out.note("verify --all in " + g(secs) + " s");
    return out;
}

struct Criterion {
    const char* title;
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> v = {
        {"Rayleigh symbolic regression", rayleigh_symbolic},
        {"Rayleigh uniform validity", rayleigh_uniform},
        {"Rayleigh amplitude limit", rayleigh_limit},
        {"Mathieu", mathieu},
        {"three-wave interaction", three_wave},
        {"Lighthill and Tsien boundary layers", boundary_layers},
        {"modal truncations (rod, beam)", modal},
        {"failure diagnostics", failures},
        {"HTR tanh", htr_tanh},
        {"HTR Duffing", htr_duffing},
        {"HTR cubic oscillator", htr_cubic},
        {"HTR Blasius", htr_blasius},
        {"property suites and full verify", properties},
    };
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--criterion") && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
            return 2;
        }
    }
    const auto& cs = criteria();
    if (only < 0 || only > static_cast<int>(cs.size())) {
        std::fprintf(stderr, "criterion must be 1..%zu\n", cs.size());
        return 2;
    }
    bool all = true;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (only && static_cast<int>(i) + 1 != only) continue;
        Outcome o;
        try {
            o = cs[i].run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        all = all && o.ok;
        std::printf("%s criterion %zu: %s (%s)\n", o.ok ? "PASS" : "FAIL", i + 1, cs[i].title, o.detail.c_str());
    }
    return all ? 0 : 1;
}
