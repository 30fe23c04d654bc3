// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "symdet/symdet.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>

using namespace symdet;
using namespace symdet::oracle;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Run {
    int status = -1;
    std::string out;
    double seconds = 0;
};

Run cli(const std::string& args) {
    Run r;
    auto t0 = Clock::now();
    std::string cmd = std::string(SYMDET_CLI) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    while (size_t n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
    int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    r.seconds = since(t0);
    return r;
}

struct Outcome {
    bool pass = false;
    std::string why;
};

int failures = 0;

void report(int n, const std::string& name, const Outcome& o, double seconds) {
    std::printf("%s criterion %d: %s (%.2fs)%s%s\n", o.pass ? "PASS" : "FAIL", n, name.c_str(), seconds, o.why.empty() ? "" : " - ",
                o.why.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

Outcome claims_pass(const std::vector<std::string>& ids) {
    std::vector<Claim> cs;
    for (auto& id : ids) cs.push_back(find_claim(id));
    Outcome o{true, ""};
    for (auto& r : run_claims(cs, kDefaultSeed)) {
        if (r.pass) continue;
        o.pass = false;
        o.why += r.id + " failed";
        if (auto w = r.worst()) o.why += " at " + w->bindings;
        o.why += "; ";
    }
    return o;
}

Outcome same(const Expr& got, const char* want, const std::string& what) {
    if (equal_canonical(got, parse_expr(want))) return {true, ""};
    return {false, what + " = " + to_text(got)};
}

template <class F>
void criterion(int n, const std::string& name, double budget, F body) {
    auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, e.what()};
    }
    double s = since(t0);
    if (o.pass && s >= budget) o = {false, "took " + std::to_string(s) + "s, budget " + std::to_string(budget) + "s"};
    report(n, name, o, s);
}

}  // namespace

int main() {
    criterion(1, "symdet boson reproduces the boson log-determinant", 5, [] {
        Run r = cli("boson --format json");
        if (r.status != 0) return Outcome{false, "exit " + std::to_string(r.status) + ": " + r.out};
        Outcome o = same(from_json(json::parse(r.out)["ln_det"]["tree"]), Goldens::boson_det, "ln det");
        if (o.pass && r.seconds >= 5) o = {false, "cli took " + std::to_string(r.seconds) + "s"};
        return o;
    });
    criterion(2, "boson zeta density", 60, [] {
        Run r = cli("boson --format json");
        if (r.status != 0) return Outcome{false, r.out};
        Outcome o = same(from_json(json::parse(r.out)["zeta"]["tree"]), Goldens::boson_zeta, "cli zeta");
        return o.pass ? claims_pass({"golden-boson-zeta"}) : o;
    });
    criterion(3, "massless quartic potential", 60, [] {
        Run r = cli("boson --format json --substitute \"V=lc*phi^2/2\"");
        if (r.status != 0) return Outcome{false, r.out};
        Expr want = substitute_potential(DetDensity{OperatorSpec::boson(), parse_expr(Goldens::boson_det), {}}, parse_expr("lc*phi^2/2")).total;
        Expr got = from_json(json::parse(r.out)["ln_det"]["tree"]);
        if (!equal_canonical(got, want)) return Outcome{false, "cli ln det = " + to_text(got)};
        return claims_pass({"golden-phi4"});
    });
    criterion(4, "symdet dirac reproduces the Dirac log-determinant", 30, [] {
        Run r = cli("dirac --format json");
        if (r.status != 0) return Outcome{false, "exit " + std::to_string(r.status) + ": " + r.out};
        auto j = json::parse(r.out);
        Outcome o = same(from_json(j["ln_det"]["tree"]), Goldens::dirac_det, "ln det");
        if (o.pass) o = same(from_json(j["zeta"]["tree"]), Goldens::dirac_zeta, "zeta");
        if (o.pass && r.seconds >= 30) o = {false, "cli took " + std::to_string(r.seconds) + "s"};
        return o;
    });
    criterion(5, "Feynman finite part and operator identity agree at second order", 60, [] {
        Outcome o = claims_pass({"golden-dirac-h2-feynman-fp", "golden-dirac-h2-operator-identity"});
        if (!o.pass) return o;
        Run r = cli("dirac --path both --format json");
        if (r.status != 0 || !json::parse(r.out)["identical"].get<bool>()) return Outcome{false, "--path both: " + r.out};
        return o;
    });
    criterion(6, "finite part of t^2/(2t-1)^4 and its quadrature", 60, [] {
        RatFunc t = RatFunc::x(), k(Poly::linear(2, -1));
        Expr ex = hadamard_fp(t * t / k.pow(4));
        if (ex != Expr(Rational(-1, 3))) return Outcome{false, "FP = " + to_text(ex)};
        return claims_pass({"fp-quadrature"});
    });
    criterion(7, "Dirac power trace against eigenvalue quadrature", 10, [] {
        auto r = run_claims({find_claim("dirac-power-trace")}, kDefaultSeed).at(0);
        int numeric = 0;
        for (auto& c : r.cases) numeric += c.tol == 1e-8 ? 1 : 0;
        if (numeric < 5) return Outcome{false, "only " + std::to_string(numeric) + " quadrature points"};
        return Outcome{r.pass, r.pass ? "" : r.detail};
    });
    criterion(8, "star(R, lambda + A) = 1 through second order, both operators", 120, [] {
        return claims_pass({"resolvent-residual-boson-order2", "resolvent-residual-dirac-order2"});
    });
    criterion(9, "Yukawa effective action and Z_eff first term", 60, [] {
        Outcome o = claims_pass({"golden-effective-action-z", "golden-effective-action-v", "golden-zeff-boson"});
        if (!o.pass) return o;
        Run r = cli("yukawa --zeff --format json");
        if (r.status != 0) return Outcome{false, r.out};
        return same(from_json(json::parse(r.out)["zeff_first_term"]["tree"]), Goldens::zeff_boson, "cli Z_eff");
    });
    criterion(10, "symdet verify --suite all with the default seed", 120, [] {
        Run r = cli("verify --suite all --format json");
        int lines = 0, bad = 0;
        std::istringstream in(r.out);
        std::string line, first_bad;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            ++lines;
            auto j = json::parse(line);
            if (!j["pass"].get<bool>()) {
                ++bad;
                if (first_bad.empty()) first_bad = j["claim"].get<std::string>();
            }
        }
        if (r.status != 0 || bad) return Outcome{false, std::to_string(bad) + " of " + std::to_string(lines) + " failed, first " + first_bad};
        return Outcome{lines > 0, std::to_string(lines) + " claims"};
    });
    return failures ? 1 : 0;
}
