// symdet: zeta-regularized determinants from the Weyl symbol of the resolvent.

#include "symdet/symdet.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

using namespace symdet;
using nlohmann::json;

namespace {

constexpr int kUsage = 2;
constexpr int kFailure = 1;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Format format_of(const std::string& f) {
    if (f == "latex") return Format::Latex;
    if (f == "text") return Format::Text;
    if (f == "json") return Format::Json;
    throw UsageError("unknown format " + f);
}

std::string show(const Expr& e, const RunConfig& c) { return render(e, c.format == "latex" ? Format::Latex : Format::Text); }

void check_dim(const RunConfig& c) {
    if (c.dim != 4) throw Error(ErrorCode::Domain, "only d = 4 is implemented, got " + std::to_string(c.dim));
}

std::pair<std::string, Expr> parse_substitution(const std::string& spec) {
    auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--substitute expects F=expr, got '" + spec + "'");
    std::string f = spec.substr(0, eq);
    while (!f.empty() && f.back() == ' ') f.pop_back();
    try {
        return {f, parse_expr(spec.substr(eq + 1))};
    } catch (const Error& e) {
        throw UsageError(std::string("--substitute: ") + e.what());
    }
}

DetDensity apply_substitution(DetDensity d, const RunConfig& c) {
    if (c.substitute.empty()) return d;
    auto [f, v] = parse_substitution(c.substitute);
    if (f != d.op.field) throw UsageError("--substitute names " + f + " but the operator field is " + d.op.field);
    std::string target = contains_field(v, "phi") ? "phi" : d.op.field;
    return substitute_potential(d, v, target);
}

json det_document(const std::string& cmd, const ZetaDensity& z, const DetDensity& d, const std::vector<LogTerm>& terms) {
    json notes = z.log;
    for (auto& n : d.notes) notes.push_back(n);
    return {{"schema_version", 1},
            {"command", cmd},
            {"operator", z.op.name()},
            {"field", z.op.field},
            {"zeta", {{"text", to_text(z.total())}, {"latex", to_latex(z.total())}, {"tree", to_json(z.total())}}},
            {"ln_det", {{"text", to_text(presentation(terms))}, {"latex", to_latex(presentation(terms))}, {"tree", to_json(d.total)}}},
            {"terms", det_json(terms)},
            {"notes", notes}};
}

void print_det(const std::string& head, const ZetaDensity& z, const DetDensity& d, const RunConfig& c) {
    auto terms = log_terms(d.total);
    if (c.format == "json") {
        std::cout << det_document(head, z, d, terms).dump(2) << "\n";
        return;
    }
    bool tex = c.format == "latex";
    std::cout << (tex ? "\\zeta(s) = " : "zeta(s) = ") << show(z.total(), c) << "\n";
    std::string lhs = z.op.kind == OperatorKind::BosonScalar ? (tex ? "\\ln\\det[-\\partial^2+V]" : "ln det[-d^2 + V]")
                                                            : (tex ? "\\ln\\det(\\gamma\\cdot\\partial+\\phi)" : "ln det(gamma.d + phi)");
    std::cout << lhs << " = " << show(presentation(terms), c) << "\n";
}

int cmd_boson(const RunConfig& c) {
    check_dim(c);
    auto op = OperatorSpec::boson();
    ZetaOptions o;
    o.order = c.order;
    ZetaDensity z = zeta_density(op, o);
    DetDensity d = apply_substitution(integrate_by_parts_normalize(ds_at_zero(z.total(), op)), c);
    print_det("boson", z, d, c);
    return 0;
}

DiracPath path_of(const std::string& p) {
    if (p == "feynman-fp") return DiracPath::FeynmanFP;
    if (p == "operator-identity") return DiracPath::OperatorIdentity;
    if (p == "direct") return DiracPath::Direct;
    throw UsageError("unknown path " + p);
}

std::pair<ZetaDensity, DetDensity> dirac_run(const RunConfig& c, DiracPath p, bool complete) {
    auto op = OperatorSpec::dirac();
    ZetaOptions o;
    o.order = c.order;
    o.path = p;
    if (complete) o.convention = Convention::Complete;
    ZetaDensity z = zeta_density(op, o);
    DetDensity d = apply_substitution(integrate_by_parts_normalize(ds_at_zero(z.total(), op)), c);
    return {z, d};
}

int cmd_dirac(const RunConfig& c, bool complete) {
    check_dim(c);
    if (c.path != "both") {
        auto [z, d] = dirac_run(c, path_of(c.path), complete);
        print_det("dirac", z, d, c);
        return 0;
    }
    auto [z1, d1] = dirac_run(c, DiracPath::FeynmanFP, complete);
    auto [z2, d2] = dirac_run(c, DiracPath::OperatorIdentity, complete);
    bool same = equal_canonical(z1.total(), z2.total()) && equal_canonical(d1.total, d2.total);
    if (c.format == "json") {
        json j = {{"schema_version", 1},
                  {"command", "dirac"},
                  {"paths", {det_document("dirac", z1, d1, log_terms(d1.total)), det_document("dirac", z2, d2, log_terms(d2.total))}},
                  {"path_names", {"feynman-fp", "operator-identity"}},
                  {"identical", same}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "[feynman-fp]\n";
        print_det("dirac", z1, d1, c);
        std::cout << "[operator-identity]\n";
        print_det("dirac", z2, d2, c);
        std::cout << (same ? "paths agree: identical canonical forms\n" : "paths DISAGREE\n");
    }
    return same ? 0 : kFailure;
}

int cmd_yukawa(const RunConfig& c, bool zeff, const std::string& coupling) {
    check_dim(c);
    if (zeff) {
        auto op = OperatorSpec::boson();
        DetDensity d = integrate_by_parts_normalize(ds_at_zero(zeta_density(op).total(), op));
        RunConfig cc = c;
        if (cc.substitute.empty()) cc.substitute = "V=m^2 + lc*phi^2/2";
        Expr z = z_eff_first_term(apply_substitution(d, cc));
        if (c.format == "json") {
            std::cout << json{{"schema_version", 1}, {"command", "yukawa"}, {"substitution", cc.substitute},
                              {"zeff_first_term", {{"text", to_text(z)}, {"latex", to_latex(z)}, {"tree", to_json(z)}}}}
                             .dump(2)
                      << "\n";
        } else {
            std::cout << (c.format == "latex" ? "Z_{\\rm eff} \\supset " : "Z_eff first term = ") << show(z, c) << "\n";
        }
        return 0;
    }
    auto [zd, d] = dirac_run(c, path_of(c.path == "both" ? "feynman-fp" : c.path), false);
    ActionDensity a = effective_action(d, coupling);
    if (c.format == "json") {
        std::cout << json{{"schema_version", 1},
                          {"command", "yukawa"},
                          {"bilinear", a.bilinear},
                          {"zeff", {{"text", to_text(a.zeff)}, {"latex", to_latex(a.zeff)}, {"tree", to_json(a.zeff)}}},
                          {"potential", {{"text", to_text(a.potential)}, {"latex", to_latex(a.potential)}, {"tree", to_json(a.potential)}}},
                          {"rescalings", a.rescalings}}
                         .dump(2)
                  << "\n";
        return 0;
    }
    bool tex = c.format == "latex";
    Expr zs = presentation(log_terms(a.zeff)), vs = presentation(log_terms(a.potential));
    if (tex)
        std::cout << "\\mathcal{L}_{\\rm eff} = -\\bar\\psi(\\gamma\\cdot\\partial+\\phi)\\psi + \\frac{1}{2}\\left[" << show(zs, c)
                  << "\\right](\\partial\\phi)^2 + " << show(vs, c) << "\n";
    else
        std::cout << "L_eff = " << a.bilinear << " + (1/2) [" << show(zs, c) << "] (d phi)^2 + " << show(vs, c) << "\n";
    for (auto& r : a.rescalings) std::cout << (tex ? "% " : "# ") << r << "\n";
    return 0;
}

int cmd_verify(const RunConfig& c, const std::string& suite_name, const std::vector<std::string>& ids) {
    std::vector<oracle::Claim> claims;
    try {
        if (ids.empty()) claims = oracle::suite(suite_name);
        else
            for (auto& id : ids) claims.push_back(oracle::find_claim(id));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::UnknownClaim) throw UsageError(e.what());
        throw;
    }
    auto reports = oracle::run_claims(claims, c.seed);
    int failed = 0;
    for (auto& r : reports) {
        // --tol can only tighten a claim's own tolerance
        if (c.tol)
            for (auto& k : r.cases)
                if (k.rel_err > *c.tol) k.pass = false, k.tol = std::min(k.tol, *c.tol);
        if (c.tol) r.pass = r.pass && std::all_of(r.cases.begin(), r.cases.end(), [](auto& k) { return k.pass; });
        failed += r.pass ? 0 : 1;
    }
    if (c.format == "json") {
        for (auto& r : reports) std::cout << r.to_json().dump() << "\n";
    } else {
        double total = 0;
        for (auto& r : reports) {
            total += r.seconds;
            std::printf("%-4s %-40s %4zu cases %8.2fs", r.pass ? "PASS" : "FAIL", r.id.c_str(), r.cases.size(), r.seconds);
            if (!r.pass) {
                if (auto w = r.worst()) std::printf("  worst: %s rel_err=%.3g tol=%.3g", w->bindings.c_str(), w->rel_err, w->tol);
                if (!r.detail.empty()) std::printf("  %s", r.detail.c_str());
            }
            std::printf("\n");
        }
        std::printf("%zu claims, %d failed, seed %llu\n", reports.size(), failed, static_cast<unsigned long long>(c.seed));
    }
    return failed ? kFailure : 0;
}

int cmd_rules(const RunConfig& c, bool verify) {
    auto table = oracle::dirac_rule_table();
    if (verify)
        for (auto& r : table) oracle::verify_rule(r, c.seed);
    if (c.format == "json") {
        json a = json::array();
        for (auto& r : table) a.push_back(r.to_json());
        std::cout << json{{"schema_version", 1}, {"rules", a}}.dump(2) << "\n";
    } else {
        for (auto& r : table) {
            std::cout << r.id << "\n  " << r.pattern << "\n  -> " << show(r.result, c) << "\n  valid: " << r.validity << "\n  "
                      << r.citation << "\n";
            if (verify) std::cout << "  oracle: " << r.stamp.points << " points, worst " << r.stamp.worst << (r.stamp.verified ? ", verified" : ", FAILED") << "\n";
        }
    }
    int bad = 0;
    if (verify)
        for (auto& r : table) bad += r.stamp.verified ? 0 : 1;
    return bad ? kFailure : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symdet: zeta-regularized determinants via Weyl symbol calculus"};
    app.require_subcommand(1);
    app.footer(
        "Substitutions use a small grammar: identifiers, rationals, ^, *, /, +, -, parentheses,\n"
        "e.g. --substitute \"V=m^2 + lc*phi^2/2\". Exit codes: 0 success, 1 computation failure, 2 usage error.");

    RunConfig cfg;
    if (const char* s = std::getenv("SYMDET_SEED")) {
        try {
            cfg.seed = std::stoull(s);
        } catch (const std::logic_error&) {
            std::cerr << "SYMDET_SEED is not an integer\n";
            return kUsage;
        }
    }
    std::string config_file, coupling = "gt", suite_name = "all";
    std::vector<std::string> claim_ids;
    bool zeff = false, complete = false, verify_rules = false;
    std::optional<int> order, dim;
    std::optional<std::string> format, path, substitute;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--order", order, "highest hbar order (default 2)")->check(CLI::Range(0, 2));
        sub->add_option("--dim", dim, "spacetime dimension (only 4)");
        sub->add_option("--format", format, "latex | text | json")->check(CLI::IsMember({"latex", "text", "json"}));
        sub->add_option("--seed", seed, "oracle seed (default SYMDET_SEED or 7)");
        sub->add_option("--tol", tol, "tighten every numeric tolerance to this value");
        sub->add_option("--config", config_file, "key = value file; flags override it");
    };
    auto* boson = app.add_subcommand("boson", "ln det of -d^2 + V");
    common(boson);
    boson->add_option("--substitute", substitute, "F=expr applied to the determinant density");
    auto* dirac = app.add_subcommand("dirac", "ln det of gamma.d + phi");
    common(dirac);
    dirac->add_option("--substitute", substitute, "F=expr applied to the determinant density");
    dirac->add_option("--path", path, "feynman-fp | operator-identity | both | direct")
        ->check(CLI::IsMember({"feynman-fp", "operator-identity", "both", "direct"}));
    dirac->add_flag("--complete", complete, "keep every bracket of the resolvent recursion");
    auto* yukawa = app.add_subcommand("yukawa", "large-N Yukawa effective action");
    common(yukawa);
    yukawa->add_option("--coupling", coupling, "name of the fixed coupling g^2 N (default gt)")->expected(1);
    yukawa->add_flag("--zeff", zeff, "first term of Z_eff from the massive quartic boson");
    yukawa->add_option("--substitute", substitute, "potential used with --zeff (default V=m^2 + lc*phi^2/2)");
    auto* verify = app.add_subcommand("verify", "run numeric and golden claims");
    common(verify);
    verify->add_option("--suite", suite_name, "all | golden | rules | numeric")->check(CLI::IsMember({"all", "golden", "rules", "numeric"}));
    verify->add_option("--claim", claim_ids, "claim id (repeatable)");
    auto* rules = app.add_subcommand("rules", "list the Dirac integration rules");
    common(rules);
    rules->add_flag("--verify", verify_rules, "stamp each rule against radial quadrature");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (!config_file.empty()) cfg = RunConfig::load(config_file, cfg);
        CLI::App* sub = app.get_subcommands().front();
        cfg.op = sub->get_name();
        if (order) cfg.order = *order;
        if (dim) cfg.dim = *dim;
        if (format) cfg.format = *format;
        if (path) cfg.path = *path;
        if (substitute) cfg.substitute = *substitute;
        if (seed) cfg.seed = *seed;
        if (tol) cfg.tol = *tol;
        format_of(cfg.format);
        if (cfg.order < 0 || cfg.order > 2) throw UsageError("order must be 0, 1 or 2");
        if (coupling.empty()) throw UsageError("--coupling needs a name");

        if (sub == boson) return cmd_boson(cfg);
        if (sub == dirac) return cmd_dirac(cfg, complete);
        if (sub == yukawa) return cmd_yukawa(cfg, zeff, coupling);
        if (sub == verify) return cmd_verify(cfg, suite_name, claim_ids);
        return cmd_rules(cfg, verify_rules);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::UnknownClaim ? kUsage : kFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
}
