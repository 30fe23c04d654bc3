#pragma once

// Registered claims: exact golden comparisons, the Dirac rule table with quadrature stamps, and the
// numeric invariants. Every claim runs from a seed and reports one case per sample.

#include "symdet/oracle.hpp"
#include "symdet/parse.hpp"

#include <chrono>
#include <future>

namespace symdet::oracle {

struct Case {
    std::string bindings;
    cplx analytic = 0, numeric = 0;
    double rel_err = 0, tol = 0;
    bool pass = false;
};

struct ClaimReport {
    std::string id;
    std::vector<Case> cases;
    bool pass = false;
    std::string detail;
    double seconds = 0;

    nlohmann::json to_json() const {
        nlohmann::json c = nlohmann::json::array();
        for (auto& k : cases)
            c.push_back({{"bindings", k.bindings},
                         {"analytic", {k.analytic.real(), k.analytic.imag()}},
                         {"numeric", {k.numeric.real(), k.numeric.imag()}},
                         {"rel_err", k.rel_err},
                         {"tol", k.tol},
                         {"pass", k.pass}});
        return {{"schema_version", 1}, {"claim", id}, {"pass", pass}, {"detail", detail}, {"cases", c}};
    }

    const Case* worst() const {
        const Case* w = nullptr;
        for (auto& k : cases)
            if (!w || k.rel_err / std::max(k.tol, 1e-300) > w->rel_err / std::max(w->tol, 1e-300)) w = &k;
        return w;
    }
};

inline Case compare(cplx analytic, cplx numeric, double tol, std::string bindings, double floor = 0) {
    Case c;
    c.bindings = std::move(bindings);
    c.analytic = analytic;
    c.numeric = numeric;
    c.tol = tol;
    c.rel_err = std::abs(analytic - numeric) / std::max(std::abs(analytic), floor > 0 ? floor : 1e-300);
    c.pass = std::isfinite(c.rel_err) && c.rel_err <= tol;
    return c;
}

inline Case exact(bool ok, std::string what) {
    Case c;
    c.bindings = std::move(what);
    c.rel_err = ok ? 0 : 1;
    c.pass = ok;
    return c;
}

inline std::string fmt(double v) {
    std::ostringstream o;
    o.precision(6);
    o << v;
    return o.str();
}

// ---- numeric bindings for Dirac densities ----

struct DiracSample {
    double phi = 1;
    std::array<std::array<double, 4>, 4> H{};  // phi_ab
    std::map<std::string, cplx> params;

    static DiracSample random(Sampler& rng) {
        DiracSample d;
        d.phi = rng.uniform(0.5, 3);
        for (int a = 0; a < 4; ++a)
            for (int b = a; b < 4; ++b) d.H[a][b] = d.H[b][a] = rng.uniform(-1, 1);
        return d;
    }

    Bindings bindings() const {
        Bindings b;
        b.params = params;
        auto self = *this;
        b.field = [self](const std::string& n, const std::vector<int>& idx, int lap) -> cplx {
            if (n != "phi") throw Error(ErrorCode::UnboundSymbol, "field " + n);
            if (lap == 0 && idx.empty()) return self.phi;
            if (lap == 0 && idx.size() == 2) return self.H[static_cast<size_t>(idx[0])][static_cast<size_t>(idx[1])];
            if (lap == 1 && idx.empty()) return self.H[0][0] + self.H[1][1] + self.H[2][2] + self.H[3][3];
            return 0.0;
        };
        return b;
    }

    std::string describe() const {
        std::string r = "phi=" + fmt(phi);
        for (auto& [k, v] : params) r += " " + k + "=" + fmt(v.real());
        return r;
    }
};

// tr int d^4p/(2pi)^4 of a lambda-free symbol: explicit matrices, 24-cell angular average, radial quadrature
inline cplx radial_trace_integral(const Symbol& integrand, Bindings b) {
    b.has_p = true;
    auto f = [&](double p) -> cplx {
        // every registered integrand is O(p) at the origin and decays at least like p^-2
        if (!(p > 1e-30 && p < 1e30)) return 0.0;
        cplx acc = 0;
        for (auto& n : design24()) {
            for (int a = 0; a < 4; ++a) b.p[static_cast<size_t>(a)] = p * n[static_cast<size_t>(a)];
            acc += eval_symbol(integrand, b).trace();
        }
        return acc / static_cast<double>(design24().size()) * p * p * p / (8 * M_PI * M_PI);
    };
    return integrate(f, 0, std::numeric_limits<double>::infinity(), 1e-11).value;
}

// ---- rule table ----

struct OracleStamp {
    int points = 0;
    double worst = 0;
    double tol = 1e-8;
    bool verified = false;
};

struct RuleRecord {
    std::string id;
    std::string pattern;
    std::string citation;
    std::string validity;
    Symbol integrand;     // lambda-free symbol under tr int d^4p/(2pi)^4
    Expr kernel;          // engine value of that integral (may depend on t)
    Expr result;          // closed form after any t integral
    Expr expected;        // registered closed form
    bool has_t = false;
    double s_min = 1;     // convergence of every radial piece needs Re s > s_min
    OracleStamp stamp;

    nlohmann::json to_json() const {
        return {{"id", id},
                {"pattern", pattern},
                {"result", to_text(result)},
                {"citation", citation},
                {"validity", validity},
                {"oracle", {{"points", stamp.points}, {"worst_rel_err", stamp.worst}, {"tol", stamp.tol}, {"verified", stamp.verified}}}};
    }
};

namespace detail {

inline Expr unit_grad() { return parse_expr("phi^(1-s)*lap(phi)/(pi^2*(s-1))"); }

inline double strip_from_notes(const std::vector<std::string>& notes, size_t from) {
    // notes read "... converges for Re(s + k) > n"
    double lo = -1e9;
    for (size_t i = from; i < notes.size(); ++i) {
        const std::string& n = notes[i];
        auto a = n.find("Re("), b = n.find(") > ");
        if (a == std::string::npos || b == std::string::npos) continue;
        Affine sig = affine_of(parse_expr(n.substr(a + 3, b - a - 3)));
        double bound = std::stod(n.substr(b + 4));
        if (sig.s != 0) lo = std::max(lo, (bound - to_double(sig.c)) / to_double(sig.s));
    }
    return lo;
}

inline RuleRecord make_rule(std::string id, std::string citation, const Symbol& integrand, const std::string& expected,
                            bool fp = false) {
    RuleRecord r;
    r.id = std::move(id);
    r.citation = std::move(citation);
    r.integrand = integrand;
    r.pattern = render(integrand, Format::Text);
    std::vector<std::string> notes;
    r.kernel = dirac_momentum_integral(integrand, &notes);
    r.s_min = std::max(strip_from_notes(notes, 0), 1.0);
    r.has_t = fp;
    r.result = fp ? fp_integrate(r.kernel, "t") : r.kernel;
    r.expected = parse_expr(expected);
    r.validity = "Re(s) > " + fmt(r.s_min) + ", phi > 0" + (fp ? ", finite part in t around t = 1/2" : "");
    return r;
}

inline std::string scaled(const std::string& c) { return "(" + c + ")*phi^(1-s)*lap(phi)/(pi^2*(s-1))"; }

}  // namespace detail

// The Dirac-sector integrals: the power trace and every second-order piece on both paths.
inline std::vector<RuleRecord> dirac_rule_table() {
    std::vector<RuleRecord> out;
    Base A = Base::dirac();
    out.push_back(detail::make_rule("dirac-power-trace", "leading Dirac power trace, eigenvalues phi +- i|p|",
                                    Symbol::factor(Fac::pw(A, Affine(0, -1))), "3*phi^(4-s)*gamma(s-4)/(pi^2*gamma(s))"));
    Symbol r2 = resolvent_expand(OperatorSpec::dirac(), 2).terms[2];
    for (auto& w : gamma_pass_all(r2).words()) {
        auto bases = symdet::detail::matrix_bases(w);
        bool slash = std::any_of(w.f.begin(), w.f.end(), [](const Fac& f) { return f.t == Fac::T::Slash; });
        if (bases.size() == 1) {
            out.push_back(detail::make_rule("dirac-h2-single", "second-order Dirac term with a single resolvent power",
                                            mellin(Symbol(w)), detail::scaled("-1/32")));
            continue;
        }
        std::string tag = slash ? "slash" : "sandwich";
        out.push_back(detail::make_rule("dirac-h2-" + tag + "-fp", "second-order Dirac " + tag + " term, Feynman parameter finite part",
                                        mellin(feynman_combine(w)), detail::scaled(slash ? "-1/32" : "1/8"), true));
        // operator identity: pieces grouped by the power of the resolvent
        Symbol id = mellin_epsilon(operator_identity_decompose(w));
        std::map<Rational, Symbol> groups;
        for (auto& x : id.words())
            for (auto& f : x.f)
                if (f.t == Fac::T::Pow) groups[-f.exp.c].add(x);
        std::vector<std::string> want = slash ? std::vector<std::string>{"-1/128", "-1/128", "-1/64"}
                                              : std::vector<std::string>{"1/32", "1/32", "1/16"};
        size_t k = 0;
        for (auto& [shift, g] : groups) {
            out.push_back(detail::make_rule("dirac-h2-" + tag + "-id" + std::to_string(k + 1),
                                            "second-order Dirac " + tag + " term, operator identity piece " + std::to_string(k + 1),
                                            g, detail::scaled(want.at(k))));
            ++k;
        }
    }
    std::sort(out.begin(), out.end(), [](const RuleRecord& a, const RuleRecord& b) { return a.id < b.id; });
    return out;
}

inline ClaimReport verify_rule(RuleRecord& r, std::uint64_t seed, int points = 5) {
    ClaimReport rep;
    rep.id = "rule-" + r.id;
    rep.cases.push_back(exact(equal_canonical(r.result, r.expected), "symbolic: " + to_text(r.result)));
    Sampler rng(seed ^ std::hash<std::string>{}(r.id));
    for (int i = 0; i < points; ++i) {
        DiracSample d = DiracSample::random(rng);
        d.params["s"] = rng.uniform(r.s_min + 1, r.s_min + 3);
        if (r.has_t) {
            double t = rng.uniform(0.05, 0.4);
            d.params["t"] = rng.unit() < 0.5 ? t : 1 - t;
        }
        Bindings b = d.bindings();
        cplx an = eval_numeric(r.kernel, b);
        cplx nu = radial_trace_integral(r.integrand, b);
        rep.cases.push_back(compare(an, nu, r.stamp.tol, d.describe()));
    }
    r.stamp.points = points;
    r.stamp.worst = 0;
    for (size_t i = 1; i < rep.cases.size(); ++i) r.stamp.worst = std::max(r.stamp.worst, rep.cases[i].rel_err);
    rep.pass = std::all_of(rep.cases.begin(), rep.cases.end(), [](const Case& c) { return c.pass; });
    r.stamp.verified = rep.pass;
    rep.detail = r.pattern + " -> " + to_text(r.result);
    return rep;
}

// ---- goldens ----

struct Goldens {
    static constexpr const char* boson_zeta = "(V^(2-s)/((s-1)*(s-2)) - V^(-s)*lap(V)/6 + s*V^(-s-1)*V_{a}*V_{a}/12)/(16*pi^2)";
    static constexpr const char* boson_det = "(V^2*ln(e^(-3/2)*V/mu^2) + V_{a}*V_{a}/(6*V))/(32*pi^2)";
    static constexpr const char* phi4_log = "(lc^2*phi^4/4)*ln(e^(-3/2)*lc*phi^2/(2*mu^2))/(32*pi^2)";
    static constexpr const char* dirac_zeta = "(3*phi^(4-s)/((s-1)*(s-2)*(s-3)*(s-4)) + phi^(1-s)*lap(phi)/(16*(s-1)))/pi^2";
    static constexpr const char* dirac_h2 = "phi^(1-s)*lap(phi)/(16*pi^2*(s-1))";
    static constexpr const char* dirac_det = "(phi^4*ln(phi^2*e^(-25/6)/mu^2) + ln(phi^2/mu^2)*phi_{a}*phi_{a}/2)/(16*pi^2)";
    static constexpr const char* zeff = "1/gt^2 - ln(phi^2/mu^2)/(16*pi^2)";
    static constexpr const char* potential = "V[phi^2/gt^2] - phi^4*ln(phi^2*e^(-25/6)/mu^2)/(16*pi^2)";
    static constexpr const char* zeff_boson = "lc^2*phi^2/(6*(4*pi)^2*(2*m^2 + lc*phi^2))";
};

inline Expr boson_zeta_total() { return zeta_density(OperatorSpec::boson()).total(); }

inline DetDensity boson_det() {
    auto op = OperatorSpec::boson();
    return integrate_by_parts_normalize(ds_at_zero(boson_zeta_total(), op));
}

inline DetDensity dirac_det(DiracPath path = DiracPath::FeynmanFP) {
    auto op = OperatorSpec::dirac();
    ZetaOptions o;
    o.path = path;
    return integrate_by_parts_normalize(ds_at_zero(zeta_density(op, o).total(), op));
}

// the V^2 log term of the boson determinant after V -> lc phi^2/2
inline Expr phi4_log_term() {
    DetDensity d = substitute_potential(boson_det(), parse_expr("lc*phi^2/2"));
    for (auto& t : log_terms(d.total))
        if (t.log_arg && !contains_kind(t.grad, Kind::Field)) return log_term_expr(t);
    return Expr(0);
}

// ---- registry ----

struct Claim {
    std::string id;
    std::string description;
    std::function<ClaimReport(std::uint64_t)> run;
};

namespace detail {

inline ClaimReport finish(ClaimReport r) {
    r.pass = !r.cases.empty() && std::all_of(r.cases.begin(), r.cases.end(), [](const Case& c) { return c.pass; });
    return r;
}

inline Claim golden(std::string id, std::string desc, std::function<Expr()> got, std::string want) {
    return {id, desc, [id, got, want](std::uint64_t) {
                ClaimReport r;
                r.id = id;
                Expr g = got();
                r.cases.push_back(exact(equal_canonical(g, parse_expr(want)), to_text(g)));
                r.detail = "expected " + want;
                return finish(r);
            }};
}

inline ClaimReport residual_claim(const std::string& id, const ResolventExpansion& e, std::uint64_t seed, int points, double tol) {
    ClaimReport r;
    r.id = id;
    auto rep = verify_resolvent(e);
    r.cases.push_back(exact(rep.ok, rep.ok ? "symbolic residual 0 through order " + std::to_string(e.terms.size() - 1) : rep.message));
    Sampler rng(seed ^ std::hash<std::string>{}(id));
    bool boson = e.op.kind == OperatorKind::BosonScalar;
    for (int i = 0; i < points; ++i) {
        Profile prof = Profile::random(rng, 0.5, 3);
        PhasePoint pt;
        for (auto& x : pt.x) x = rng.uniform(-1, 1);
        // direction times a radius in [0.1, 5]
        std::array<double, 4> n;
        double nn = 0;
        for (auto& v : n) {
            v = rng.normal();
            nn += v * v;
        }
        double pr = rng.uniform(0.1, 5);
        for (int a = 0; a < 4; ++a) pt.p[static_cast<size_t>(a)] = pr * n[static_cast<size_t>(a)] / std::sqrt(nn);
        pt.lambda = rng.uniform(0.1, 10);
        auto res = numeric_residual(e, pt, prof);
        double worst = *std::max_element(res.begin(), res.end());
        std::string b = std::string(boson ? "V0=" : "phi0=") + fmt(prof.v0) + " |p|=" + fmt(pr) + " lambda=" + fmt(pt.lambda.real());
        Case c = compare(0.0, worst, tol, b, 1.0);
        r.cases.push_back(c);
    }
    r.detail = "max |R o (lambda+A) - 1| per order, derivatives of R on contours";
    return finish(r);
}

// f(F) F'' against -f'(F) F'^2 on a compactly supported bump
inline ClaimReport ibp_bump_claim(std::uint64_t seed) {
    ClaimReport r;
    r.id = "ibp-bump";
    Sampler rng(seed ^ 0x1bb);
    struct Form {
        std::string f;
        std::string F;
    };
    std::vector<Form> forms{{"ln(phi^2/mu^2)*lap(phi)", "phi"}, {"V^(-s)*lap(V)", "V"}, {"ln(V/mu^2)*lap(V)", "V"}};
    for (auto& form : forms) {
        Expr lhs = parse_expr(form.f);
        Expr rhs = integrate_by_parts_normalize(lhs, form.F);
        double base = rng.uniform(1, 2), amp = rng.uniform(0.2, 0.6), s = rng.uniform(0.3, 0.9), m = rng.uniform(0.5, 2);
        // F(x) = base + amp * exp(-1/(1-x^2)) on (-1, 1): derivatives in closed form
        auto bump = [](double x, int k) {
            double u = 1 - x * x, g = std::exp(-1 / u);
            double g1 = g * (-2 * x / (u * u));
            if (k == 0) return g;
            if (k == 1) return g1;
            double d = -2 / (u * u) - 8 * x * x / (u * u * u);
            return g1 * (-2 * x / (u * u)) + g * d;
        };
        auto integrand = [&](const Expr& e) {
            return [&, e](double x) -> cplx {
                Bindings b;
                b.params = {{"s", s}, {"mu", m}};
                b.dim = 1;
                b.field = [&](const std::string&, const std::vector<int>& idx, int lap) -> cplx {
                    if (lap == 1) return amp * bump(x, 2);
                    if (idx.size() == 1) return amp * bump(x, 1);
                    return base + amp * bump(x, 0);
                };
                return eval_numeric(e, b);
            };
        };
        cplx a = integrate(integrand(lhs), -1, 1, 1e-13).value;
        cplx n = integrate(integrand(rhs), -1, 1, 1e-13).value;
        r.cases.push_back(compare(a, n, 1e-10, form.f + " base=" + fmt(base) + " amp=" + fmt(amp)));
    }
    r.detail = "integration by parts on a bump profile, one dimension";
    return finish(r);
}

}  // namespace detail

inline std::vector<Claim> registry() {
    std::vector<Claim> c;
    using detail::finish;
    c.push_back(detail::golden("golden-boson-zeta", "boson zeta density", [] { return boson_zeta_total(); }, Goldens::boson_zeta));
    c.push_back(detail::golden("golden-boson-det", "boson log-determinant", [] { return boson_det().total; }, Goldens::boson_det));
    c.push_back(detail::golden("golden-phi4", "massless quartic potential log term", [] { return phi4_log_term(); }, Goldens::phi4_log));
    c.push_back(detail::golden("golden-dirac-zeta", "Dirac zeta density",
                               [] { return zeta_density(OperatorSpec::dirac()).total(); }, Goldens::dirac_zeta));
    c.push_back(detail::golden("golden-dirac-det", "Dirac log-determinant", [] { return dirac_det().total; }, Goldens::dirac_det));
    for (auto p : {DiracPath::FeynmanFP, DiracPath::OperatorIdentity, DiracPath::Direct}) {
        std::string id = std::string("golden-dirac-h2-") + path_name(p);
        c.push_back(detail::golden(id, "second-order Dirac zeta on one path",
                                   [p] {
                                       ZetaOptions o;
                                       o.path = p;
                                       return zeta_density(OperatorSpec::dirac(), o).by_order[2];
                                   },
                                   Goldens::dirac_h2));
    }
    c.push_back(detail::golden("golden-effective-action-z", "kinetic coefficient of the Yukawa action",
                               [] { return effective_action(dirac_det()).zeff; }, Goldens::zeff));
    c.push_back(detail::golden("golden-effective-action-v", "potential of the Yukawa action",
                               [] { return effective_action(dirac_det()).potential; }, Goldens::potential));
    c.push_back(detail::golden("golden-zeff-boson", "kinetic coefficient from the massive quartic boson",
                               [] { return z_eff_first_term(substitute_potential(boson_det(), parse_expr("m^2 + lc*phi^2/2"))); },
                               Goldens::zeff_boson));
    c.push_back({"dimension-check", "every density term has the mass dimension of its operator", [](std::uint64_t) {
                     ClaimReport r;
                     r.id = "dimension-check";
                     std::string why;
                     bool b = dimension_consistent(boson_zeta_total(), OperatorSpec::boson(), &why);
                     r.cases.push_back(exact(b, "boson " + why));
                     bool d = dimension_consistent(zeta_density(OperatorSpec::dirac()).total(), OperatorSpec::dirac(), &why);
                     r.cases.push_back(exact(d, "dirac " + why));
                     return finish(r);
                 }});
    c.push_back({"fp-quadrature", "Hadamard finite parts against excision quadrature", [](std::uint64_t) {
                     ClaimReport r;
                     r.id = "fp-quadrature";
                     RatFunc t = RatFunc::x(), k(Poly::linear(2, -1));
                     Expr ex = hadamard_fp(t * t / k.pow(4));
                     r.cases.push_back(exact(ex == Expr(Rational(-1, 3)), "FP int t^2/(2t-1)^4 = " + to_text(ex)));
                     cplx q = fp_quadrature([](cplx x) { return x * x / std::pow(2.0 * x - 1.0, 4); }, 0, 1, 0.5, 4);
                     r.cases.push_back(compare(-1.0 / 3, q, 1e-8, "t^2/(2t-1)^4"));
                     cplx q2 = fp_quadrature([](cplx x) { return 1.0 / std::pow(2.0 * x - 1.0, 2); }, 0, 1, 0.5, 2);
                     r.cases.push_back(compare(to_double(hadamard_fp(RatFunc(Rational(1)) / k.pow(2)).value()), q2, 1e-8, "(2t-1)^-2"));
                     cplx q3 = integrate([](double x) { return cplx(x * x); }, 0, 1).value;
                     r.cases.push_back(compare(1.0 / 3, q3, 1e-12, "t^2"));
                     return finish(r);
                 }});
    c.push_back({"dirac-power-trace", "Dirac power trace against the eigenvalue radial integral", [](std::uint64_t seed) {
                     ClaimReport r;
                     r.id = "dirac-power-trace";
                     Expr closed = dirac_power_trace_d4(field("phi"), Affine(0, 1));
                     Sampler rng(seed ^ 0x9d);
                     std::vector<std::pair<double, double>> pts{{6.3, 1.7}};
                     while (pts.size() < 5) pts.emplace_back(rng.uniform(4.3, 9), rng.uniform(0.5, 3));
                     for (auto [s, phi] : pts) {
                         // eigenvalues phi +- i|p|, each twice
                         auto f = [s = s, phi = phi](double p) {
                             cplx tr = 2.0 * std::pow(cplx(phi, p), -s) + 2.0 * std::pow(cplx(phi, -p), -s);
                             return tr * p * p * p / (8 * M_PI * M_PI);
                         };
                         cplx num = integrate(f, 0, std::numeric_limits<double>::infinity(), 1e-12).value;
                         Bindings b;
                         b.params["s"] = s;
                         b.field = [phi = phi](const std::string&, const std::vector<int>&, int) -> cplx { return phi; };
                         r.cases.push_back(compare(eval_numeric(closed, b), num, 1e-8, "s=" + fmt(s) + " phi=" + fmt(phi)));
                     }
                     try {
                         dirac_power_trace_d4(field("phi"), Affine(4));
                         r.cases.push_back(exact(false, "sigma = 4 accepted"));
                     } catch (const Error& e) {
                         r.cases.push_back(exact(e.code() == ErrorCode::ValidityViolated, "sigma = 4 rejected"));
                     }
                     r.detail = to_text(closed);
                     return finish(r);
                 }});
    c.push_back({"grg-identity", "gamma passing identity with explicit matrices", [](std::uint64_t seed) {
                     ClaimReport r;
                     r.id = "grg-identity";
                     Sampler rng(seed ^ 0x96);
                     Base A = Base::dirac();
                     // free gamma indices are renamed, so contract them with a random symmetric phi_ab
                     Word w{field("phi", {"a", "b"}), {Fac::gamma("a"), Fac::res(A, -1), Fac::gamma("b")}};
                     Symbol lhs(w), rhs = gamma_pass(w);
                     for (int i = 0; i < 100; ++i) {
                         DiracSample d = DiracSample::random(rng);
                         d.params["lambda"] = rng.uniform(0.1, 10);
                         Bindings b = d.bindings();
                         b.has_p = true;
                         for (auto& x : b.p) x = rng.uniform(-3, 3);
                         Mat4 diff = eval_symbol(lhs, b) - eval_symbol(rhs, b);
                         double scale = eval_symbol(lhs, b).cwiseAbs().maxCoeff();
                         r.cases.push_back(compare(0.0, diff.cwiseAbs().maxCoeff() / std::max(scale, 1e-300), 1e-12, d.describe(), 1.0));
                     }
                     return finish(r);
                 }});
    c.push_back({"ibp-bump", "integration by parts on a bump profile", detail::ibp_bump_claim});
    c.push_back({"mellin-rule", "semigroup lambda integral against quadrature", [](std::uint64_t seed) {
                     ClaimReport r;
                     r.id = "mellin-rule";
                     Sampler rng(seed ^ 0x3e);
                     std::vector<std::tuple<double, int, double>> pts{{0.5, 2, 1.0}};
                     while (pts.size() < 6)
                         pts.emplace_back(rng.uniform(0.2, 0.9), 1 + static_cast<int>(rng.next() % 3), rng.uniform(0.5, 3));
                     for (auto [s, k, a] : pts) {
                         auto f = [s = s, k = k, a = a](double l) { return cplx(std::sin(M_PI * s) / M_PI * std::pow(l, -s) * std::pow(l + a, -k)); };
                         cplx num = integrate(f, 0, 1, 1e-13).value + integrate(f, 1, std::numeric_limits<double>::infinity(), 1e-13).value;
                         Bindings b;
                         b.params["s"] = s;
                         b.field = [a = a](const std::string&, const std::vector<int>&, int) -> cplx { return a; };
                         cplx an = eval_numeric(mellin_rule(field("V"), k), b);
                         r.cases.push_back(compare(an, num, 1e-10, "s=" + fmt(s) + " k=" + std::to_string(k) + " a=" + fmt(a)));
                     }
                     return finish(r);
                 }});
    c.push_back({"resolvent-residual-boson-order2", "star product of the boson resolvent with lambda + A",
                 [](std::uint64_t seed) {
                     return detail::residual_claim("resolvent-residual-boson-order2", resolvent_expand(OperatorSpec::boson(), 2), seed, 50, 1e-10);
                 }});
    c.push_back({"resolvent-residual-dirac-order2", "star product of the Dirac resolvent with lambda + A", [](std::uint64_t seed) {
                     return detail::residual_claim("resolvent-residual-dirac-order2",
                                                   resolvent_expand(OperatorSpec::dirac(), 2, Convention::Complete), seed, 50, 1e-10);
                 }});
    c.push_back({"scalar-master", "scalar master integral against radial quadrature", [](std::uint64_t seed) {
                     ClaimReport r;
                     r.id = "scalar-master";
                     Sampler rng(seed ^ 0x5c);
                     Expr closed = limit_d4(scalar_master_term(field("V"), Affine(0, 1), dim_symbolic()));
                     for (int i = 0; i < 5; ++i) {
                         double s = rng.uniform(2.5, 5), v = rng.uniform(0.5, 3);
                         auto f = [s, v](double p) { return cplx(std::pow(p * p + v, -s) * p * p * p / (8 * M_PI * M_PI)); };
                         cplx num = integrate(f, 0, std::numeric_limits<double>::infinity(), 1e-13).value;
                         Bindings b;
                         b.params["s"] = s;
                         b.field = [v](const std::string&, const std::vector<int>&, int) -> cplx { return v; };
                         r.cases.push_back(compare(eval_numeric(closed, b), num, 1e-10, "s=" + fmt(s) + " V=" + fmt(v)));
                     }
                     return finish(r);
                 }});
    c.push_back({"tensor-rank4", "rank-4 tensor reduction against angular moments", [](std::uint64_t seed) {
                     ClaimReport r;
                     r.id = "tensor-rank4";
                     Sampler rng(seed ^ 0x74);
                     std::vector<std::array<int, 4>> ix{{0, 0, 0, 0}, {0, 0, 1, 1}, {0, 1, 2, 3}, {1, 1, 1, 2}, {2, 2, 3, 3}};
                     for (auto& q : ix) {
                         std::vector<std::string> n{"a", "b", "c", "e"};
                         Expr red = tensor_reduce(product({momentum("a"), momentum("b"), momentum("c"), momentum("e")}), Affine(4));
                         Bindings b;
                         b.has_p = true;
                         b.p = {1, 0, 0, 0};  // only p^2 = 1 survives after reduction
                         for (int k = 0; k < 4; ++k) b.indices[n[static_cast<size_t>(k)]] = q[static_cast<size_t>(k)];
                         cplx an = eval_numeric(red, b);
                         double mc = mc_moment4(rng, q, 2000000);
                         double design = 0;
                         for (auto& v : design24()) {
                             double t = 1;
                             for (int k : q) t *= v[static_cast<size_t>(k)];
                             design += t;
                         }
                         design /= static_cast<double>(design24().size());
                         std::string lbl = std::to_string(q[0]) + std::to_string(q[1]) + std::to_string(q[2]) + std::to_string(q[3]);
                         r.cases.push_back(compare(an, mc, 1e-3, "monte carlo " + lbl, 1.0));
                         r.cases.push_back(compare(an, design, 1e-14, "24-cell " + lbl, 1.0));
                     }
                     return finish(r);
                 }});
    std::sort(c.begin(), c.end(), [](const Claim& a, const Claim& b) { return a.id < b.id; });
    return c;
}

// rules are registered lazily: building the table runs the pipeline once
inline std::vector<Claim> rule_claims() {
    std::vector<Claim> out;
    auto table = std::make_shared<std::vector<RuleRecord>>(dirac_rule_table());
    for (size_t i = 0; i < table->size(); ++i)
        out.push_back({"rule-" + (*table)[i].id, (*table)[i].citation,
                       [table, i](std::uint64_t seed) { return verify_rule((*table)[i], seed); }});
    return out;
}

inline std::vector<Claim> all_claims() {
    auto c = registry();
    auto r = rule_claims();
    c.insert(c.end(), r.begin(), r.end());
    std::sort(c.begin(), c.end(), [](const Claim& a, const Claim& b) { return a.id < b.id; });
    return c;
}

inline std::vector<Claim> suite(const std::string& name) {
    auto all = all_claims();
    if (name == "all") return all;
    std::vector<Claim> out;
    for (auto& c : all) {
        bool g = c.id.rfind("golden-", 0) == 0, rule = c.id.rfind("rule-", 0) == 0;
        if ((name == "golden" && g) || (name == "rules" && rule) || (name == "numeric" && !g && !rule)) out.push_back(c);
    }
    if (out.empty()) throw Error(ErrorCode::UnknownClaim, "suite " + name);
    return out;
}

inline Claim find_claim(const std::string& id) {
    for (auto& c : all_claims())
        if (c.id == id) return c;
    throw Error(ErrorCode::UnknownClaim, id);
}

// run concurrently, report in claim order
inline std::vector<ClaimReport> run_claims(const std::vector<Claim>& cs, std::uint64_t seed) {
    std::vector<std::future<ClaimReport>> fut;
    for (auto& c : cs)
        fut.push_back(std::async(std::launch::async, [c, seed] {
            auto t0 = std::chrono::steady_clock::now();
            ClaimReport r;
            try {
                r = c.run(seed);
            } catch (const std::exception& e) {
                r.id = c.id;
                r.pass = false;
                r.detail = e.what();
            }
            r.id = c.id;
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            return r;
        }));
    std::vector<ClaimReport> out;
    for (auto& f : fut) out.push_back(f.get());
    return out;
}

}  // namespace symdet::oracle
