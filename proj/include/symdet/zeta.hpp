#pragma once

// zeta(s|A) densities from the resolvent pipeline, -d/ds at s = 0 with the scale mu, and the
// integration-by-parts normal form used to compare determinant densities.

#include "symdet/momint.hpp"

#include <optional>

namespace symdet {

enum class DiracPath : std::uint8_t { FeynmanFP, OperatorIdentity, Direct };

inline const char* path_name(DiracPath p) {
    switch (p) {
        case DiracPath::FeynmanFP: return "feynman-fp";
        case DiracPath::OperatorIdentity: return "operator-identity";
        case DiracPath::Direct: return "direct";
    }
    return "?";
}

inline Expr mu() { return param("mu"); }

// mass dimensions: [V] = 2, other fields 1; mu and m carry one unit, other parameters none
inline int field_dimension(const std::string& f) { return f == "V" ? 2 : 1; }
inline int operator_dimension(const OperatorSpec& op) { return op.kind == OperatorKind::BosonScalar ? 2 : 1; }

inline Affine mass_dimension(const Expr& e) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Field:
            return Affine(field_dimension(n.name) + static_cast<long long>(n.indices.size()) + 2 * n.laplacians);
        case Kind::Param:
            return Affine(n.name == "mu" || n.name == "m" ? 1 : 0);
        case Kind::Momentum:
            return Affine(n.mkind == MomentumKind::Square ? 2 : 1);
        case Kind::Power: {
            Affine b = mass_dimension(n.children[0]);
            if (!b.is_const()) throw Error(ErrorCode::Domain, "power of a dimension carrying s");
            return n.exponent * b.c;
        }
        case Kind::Product: {
            Affine r(0);
            for (auto& c : n.children) r = r + mass_dimension(c);
            return r;
        }
        case Kind::Sum: {
            Affine r = mass_dimension(n.children[0]);
            for (auto& c : n.children)
                if (mass_dimension(c) != r) throw Error(ErrorCode::Domain, "inhomogeneous sum " + to_text(e));
            return r;
        }
        default:
            return Affine(0);
    }
}

// every term of a density carries dimension 4 - [A] s
inline bool dimension_consistent(const Expr& e, const OperatorSpec& op, std::string* why = nullptr) {
    if (e.is_zero()) return true;
    Affine want(4, -operator_dimension(op));
    try {
        for (auto& [mono, c] : nf::to_nf(e).terms) {
            Affine got = mass_dimension(nf::term_tree(mono, RatFunc(Rational(1))));
            if (got != want) {
                if (why) *why = "dimension " + to_text(affine_tree(got)) + " in " + to_text(nf::term_tree(mono, c));
                return false;
            }
        }
    } catch (const Error& err) {
        if (why) *why = err.what();
        return false;
    }
    return true;
}

// ---- zeta densities ----

struct ZetaOptions {
    int order = 2;
    DiracPath path = DiracPath::FeynmanFP;
    Convention convention = Convention::Published;
    bool extended = false;
};

struct ZetaPiece {
    int order = 0;
    Word word;
    Expr value;
};

struct ZetaDensity {
    OperatorSpec op;
    std::vector<Expr> by_order;
    std::vector<ZetaPiece> pieces;
    std::vector<std::string> log;

    Expr total() const { return simplify(sum(by_order)); }
};

namespace detail {

inline std::vector<Base> matrix_bases(const Word& w) {
    std::vector<Base> out;
    for (auto& f : w.f)
        if (f.t == Fac::T::Res && !f.base.scalar() &&
            std::none_of(out.begin(), out.end(), [&](const Base& b) { return Base::cmp(b, f.base) == 0; }))
            out.push_back(f.base);
    return out;
}

// one Dirac word free of gamma sandwiches
inline Expr dirac_word_zeta(const Word& w, DiracPath path, std::vector<std::string>& log) {
    auto bases = matrix_bases(w);
    if (bases.size() <= 1) return dirac_momentum_integral(mellin(Symbol(w)), &log);
    if (path == DiracPath::FeynmanFP) {
        Expr v = dirac_momentum_integral(mellin(feynman_combine(w)), &log);
        log.push_back("finite part over t of " + to_text(v));
        return fp_integrate(v, "t");
    }
    return dirac_momentum_integral(mellin_epsilon(operator_identity_decompose(w)), &log);
}

}  // namespace detail

inline ZetaDensity zeta_density(const OperatorSpec& op, const ZetaOptions& opt = {}) {
    ZetaDensity z;
    z.op = op;
    ResolventExpansion r = resolvent_expand(op, opt.order, opt.convention, opt.extended);
    z.log.insert(z.log.end(), r.notes.begin(), r.notes.end());
    bool boson = op.kind == OperatorKind::BosonScalar;
    DiracPath path = opt.path;
    if (!boson && opt.convention == Convention::Complete && path != DiracPath::Direct) {
        path = DiracPath::Direct;
        z.log.push_back("complete convention: words integrated by the momentum-first route");
    }
    for (int n = 0; n <= opt.order; ++n) {
        const Symbol& rn = r.terms[static_cast<size_t>(n)];
        Expr v(0);
        if (rn.zero()) {
            // nothing
        } else if (path == DiracPath::Direct || (boson && opt.path == DiracPath::Direct)) {
            v = direct_zeta(rn, op);
            for (auto& w : rn.words()) z.pieces.push_back({n, w, direct_zeta(Symbol(w), op)});
        } else if (boson) {
            v = boson_momentum_integral(mellin(rn), &z.log);
        } else if (phase_space_trace(rn).zero()) {
            z.log.push_back("order " + std::to_string(n) + " is traceless");
        } else {
            std::vector<Expr> parts;
            for (auto& w : gamma_pass_all(rn).words()) {
                Expr pv = detail::dirac_word_zeta(w, path, z.log);
                z.pieces.push_back({n, w, pv});
                parts.push_back(pv);
            }
            v = simplify(sum(parts));
        }
        z.by_order.push_back(v);
    }
    std::string why;
    if (!dimension_consistent(z.total(), op, &why)) throw Error(ErrorCode::VerificationFailed, "dimension check: " + why);
    return z;
}

// ---- determinant densities ----

struct LogTerm {
    Expr coeff;
    std::optional<Expr> log_arg;
    Expr grad = Expr(1);
};

struct DetDensity {
    OperatorSpec op;
    Expr total;
    std::vector<std::string> notes;
};

// ln det(A/mu^[A]) density = -d/ds [mu^([A] s) zeta(s)] at s = 0
inline DetDensity ds_at_zero(const Expr& zeta, const OperatorSpec& op) {
    DetDensity d;
    d.op = op;
    int kop = operator_dimension(op);
    std::vector<Expr> out;
    for (auto& [mono, c] : nf::to_nf(zeta).terms) {
        if (c.order_at(0) < 0) throw Error(ErrorCode::PoleAtZero, to_text(nf::term_tree(mono, c)));
        Rational c0 = c.eval(0), c1 = c.derivative().eval(0);
        nf::Mono rest;
        std::optional<nf::Factor> sf;
        for (auto& f : mono) {
            if (f.base.kind() == Kind::Gamma && f.base.node().exponent.s != 0)
                throw Error(ErrorCode::NoRule, "Gamma factor in s survives normalisation");
            if (f.exp.s == 0) {
                rest.push_back(f);
                continue;
            }
            if (sf || f.base.kind() != Kind::Field || has_indices(f.base) || f.base.node().laplacians)
                throw Error(ErrorCode::NoRule, "s-dependent power of " + to_text(f.base));
            sf = f;
        }
        Expr r = nf::term_tree(rest, RatFunc(Rational(1)));
        if (!sf) {
            if (c1 != 0) out.push_back(Expr(-c1) * r);
            continue;
        }
        const std::string& F = sf->base.node().name;
        int kf = field_dimension(F);
        if (sf->exp.s * kf + kop != 0) throw Error(ErrorCode::Domain, "log argument would carry dimension");
        Expr fa = power(sf->base, Affine(sf->exp.c, 0, sf->exp.d));
        Expr X = product({power(sf->base, Affine(Rational(2, kf))), power(mu(), Affine(-2))});
        out.push_back(product({r, fa, sum({Expr(-c1), product({Expr(c0 * Rational(kop, 2)), log_fn(X)})})}));
    }
    d.total = simplify(sum(std::move(out)));
    return d;
}

namespace detail {

inline bool is_derivative_atom(const Expr& b) {
    return b.kind() == Kind::Field && (has_indices(b) || b.node().laplacians > 0);
}

}  // namespace detail

// f(F) lap(F) -> -f'(F) (dF)^2 up to the total derivative d_a(f dF_a)
inline Expr integrate_by_parts_normalize(const Expr& e, const std::string& F, std::vector<std::string>* remainders = nullptr) {
    std::vector<Expr> out;
    for (auto& [mono, c] : nf::to_nf(e).terms) {
        int laps = 0, others = 0;
        nf::Mono rest;
        for (auto& f : mono) {
            const Node& n = f.base.node();
            if (n.kind == Kind::Field && n.name == F && n.laplacians == 1 && n.indices.empty() && f.exp == Affine(1)) {
                ++laps;
                continue;
            }
            if (detail::is_derivative_atom(f.base)) ++others;
            rest.push_back(f);
        }
        if (laps != 1 || others) {
            out.push_back(nf::term_tree(mono, c));
            continue;
        }
        Expr f = nf::term_tree(rest, c);
        std::string a = nf::fresh_index();
        out.push_back(product({Expr(-1), diff_field_value(f, F), field(F, {a}), field(F, {a})}));
        if (remainders) remainders->push_back("d_a(" + to_text(f) + " " + F + "_a)");
    }
    return simplify(sum(std::move(out)));
}

inline DetDensity integrate_by_parts_normalize(DetDensity d) {
    d.total = integrate_by_parts_normalize(d.total, d.op.field, &d.notes);
    return d;
}

// Regroup a density into  coeff * ln(arg) * grad  pieces, constants folded into the log argument
// so that mu enters as mu^-2.
inline std::vector<LogTerm> log_terms(const Expr& e) {
    struct Group {
        Rational constant = 0;
        std::vector<std::pair<Expr, Rational>> logs;
    };
    std::map<nf::Mono, Group, nf::MonoLess> groups;
    std::vector<nf::Mono> order;
    for (auto& [mono, c] : nf::to_nf(e).terms) {
        if (!c.is_constant()) throw Error(ErrorCode::Domain, "density still depends on s");
        nf::Mono comp;
        std::optional<Expr> lg;
        for (auto& f : mono) {
            if (f.base.kind() == Kind::Log) {
                if (lg || f.exp != Affine(1)) throw Error(ErrorCode::Domain, "product of logarithms");
                lg = f.base.child(0);
            } else {
                comp.push_back(f);
            }
        }
        if (!groups.count(comp)) order.push_back(comp);
        Group& g = groups[comp];
        if (lg) g.logs.emplace_back(*lg, c.constant());
        else g.constant += c.constant();
    }
    std::vector<LogTerm> out;
    for (auto& comp : order) {
        Group& g = groups[comp];
        nf::Mono coeff, grad;
        for (auto& f : comp) (detail::is_derivative_atom(f.base) ? grad : coeff).push_back(f);
        Expr ce = nf::term_tree(coeff, RatFunc(Rational(1)));
        Expr ge = nf::term_tree(grad, RatFunc(Rational(1)));
        if (g.logs.empty()) {
            if (g.constant != 0) out.push_back({simplify(Expr(g.constant) * ce), std::nullopt, ge});
            continue;
        }
        Rational k = 1;
        for (auto& [atom, l] : g.logs)
            if (atom == mu()) k = -l / 2;
        std::vector<Expr> arg;
        if (g.constant != 0) arg.push_back(power(euler_e(), Affine(g.constant / k)));
        for (auto& [atom, l] : g.logs) arg.push_back(power(atom, Affine(l / k)));
        out.push_back({simplify(Expr(k) * ce), simplify(product(arg)), ge});
    }
    std::stable_partition(out.begin(), out.end(), [](const LogTerm& t) { return t.log_arg.has_value(); });
    return out;
}

inline Expr log_term_expr(const LogTerm& t) {
    return product({t.coeff, t.log_arg ? log_fn(*t.log_arg) : Expr(1), t.grad});
}

// rebuild with logs kept whole: coeff * ln(arg) * grad
inline Expr presentation(const std::vector<LogTerm>& ts) {
    std::vector<Expr> out;
    for (auto& t : ts) out.push_back(log_term_expr(t));
    return sum(std::move(out));
}

inline nlohmann::json det_json(const std::vector<LogTerm>& ts, Format f = Format::Text) {
    nlohmann::json a = nlohmann::json::array();
    for (auto& t : ts)
        a.push_back({{"coeff", render(t.coeff, f)},
                     {"log_arg", t.log_arg ? nlohmann::json(render(*t.log_arg, f)) : nlohmann::json(nullptr)},
                     {"grad_factor", render(t.grad, f)}});
    return a;
}

}  // namespace symdet
