#pragma once

// Momentum integrals  int d^dp/(2 pi)^d  of traced symbols: tensor reduction, the scalar master
// formula, the Dirac power trace, a radial engine at d = 4 for Dirac words, and a momentum-first
// route that integrates resolvent words before the lambda integral.

#include "symdet/mellin.hpp"

namespace symdet {

inline Affine dim_symbolic() { return Affine(0, 0, 1); }

namespace detail {

inline Expr dim_expr(const Affine& d) { return affine_tree(d); }

// indices of free momentum components in a monomial, with the monomial stripped of them
inline std::vector<std::string> take_momenta(nf::Mono& m) {
    std::vector<std::string> idx;
    nf::Mono rest;
    for (auto& f : m) {
        const Node& n = f.base.node();
        if (n.kind == Kind::Momentum && n.mkind == MomentumKind::Component) {
            if (!f.exp.is_integer() || to_ll(f.exp.c) < 0) throw Error(ErrorCode::NoRule, "momentum component power");
            for (long long k = 0; k < to_ll(f.exp.c); ++k) idx.push_back(n.indices[0]);
        } else {
            rest.push_back(f);
        }
    }
    m = rest;
    return idx;
}

}  // namespace detail

// p^a p^b -> delta^ab p^2/d, rank 4 -> (dd + dd + dd) p^4/(d(d+2)), odd ranks -> 0
inline Expr tensor_reduce(const Expr& e, const Affine& dim = dim_symbolic()) {
    nf::NF n = nf::to_nf(e);
    Expr d = detail::dim_expr(dim);
    std::vector<Expr> out;
    for (const auto& kv : n.terms) {
            nf::Mono mono = kv.first;
            const RatFunc& c = kv.second;
        auto idx = detail::take_momenta(mono);
        Expr rest = nf::term_tree(mono, c);
        if (idx.empty()) {
            out.push_back(rest);
            continue;
        }
        if (idx.size() % 2) continue;
        if (idx.size() == 2) {
            out.push_back(product({rest, delta(idx[0], idx[1]), momentum_sq(), power(d, Affine(-1))}));
        } else if (idx.size() == 4) {
            Expr pairs = sum({delta(idx[0], idx[1]) * delta(idx[2], idx[3]), delta(idx[0], idx[2]) * delta(idx[1], idx[3]),
                              delta(idx[0], idx[3]) * delta(idx[1], idx[2])});
            out.push_back(product({rest, pairs, power(momentum_sq(), Affine(2)), power(d, Affine(-1)),
                                   power(d + Expr(2), Affine(-1))}));
        } else {
            throw Error(ErrorCode::UnsupportedRank, "tensor rank " + std::to_string(idx.size()));
        }
    }
    return simplify(sum(std::move(out)));
}

// A product of Gamma functions with arguments affine in s and d, times a factor regular at d = 4.
struct DimTerm {
    std::vector<std::pair<Affine, long long>> gammas;
    Expr rest = Expr(1);

    Expr symbolic() const {
        std::vector<Expr> f{rest};
        for (auto& [a, k] : gammas) f.push_back(power(gamma_fn(a), Affine(k)));
        try {
            return simplify(product(f));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::GammaPole) throw Error(ErrorCode::ValidityViolated, e.what());
            throw;
        }
    }
};

// Limit d -> 4 along d = 4 - 2 delta. Gamma poles count -1 and reciprocal poles +1 in delta;
// balanced terms keep the ratio of residues, zeros vanish, leftover poles are rejected.
inline Expr limit_d4(const DimTerm& t) {
    int order = 0;
    std::vector<Expr> fs{simplify(substitute_param(t.rest, "d", Expr(4)))};
    for (auto& [arg, k] : t.gammas) {
        Affine a4(arg.c + 4 * arg.d, arg.s, 0);
        bool pole = a4.s == 0 && is_integer(a4.c) && a4.c <= 0;
        if (!pole) {
            fs.push_back(power(gamma_fn(a4), Affine(k)));
            continue;
        }
        if (arg.d == 0) {
            if (k < 0) return Expr(0);
            throw Error(ErrorCode::ValidityViolated, "Gamma(" + to_string(a4.c) + ") at d = 4");
        }
        // Gamma(-n + x) ~ (-1)^n/(n! x),  x = -2 arg.d delta
        long long n = to_ll(-a4.c);
        Rational lead = Rational(n % 2 ? -1 : 1) / (Rational(factorial(n)) * (-2 * arg.d));
        order -= static_cast<int>(k);
        fs.push_back(Expr(rpow(lead, k)));
    }
    if (order > 0) return Expr(0);
    if (order < 0) throw Error(ErrorCode::ValidityViolated, "pole at d = 4 in " + to_text(t.symbolic()));
    return simplify(product(fs));
}

// int d^dp/(2pi)^d (p^2)^m (p^2 + a)^-sigma
//   = Gamma(m + d/2) Gamma(sigma - m - d/2) / ((4 pi)^(d/2) Gamma(d/2) Gamma(sigma)) a^(d/2 + m - sigma)
inline DimTerm scalar_master_term(const Expr& a, const Affine& sigma, const Affine& dim, const Rational& m = 0) {
    Affine half = dim * Rational(1, 2);
    return {{{half + Affine(m), 1}, {sigma - half - Affine(m), 1}, {half, -1}, {sigma, -1}},
            product({power(Expr(4) * pi(), -half), power(a, half + Affine(m) - sigma)})};
}

inline Expr scalar_master(const Expr& a, const Affine& sigma, const Affine& dim = Affine(4), const Rational& m = 0) {
    return scalar_master_term(a, sigma, dim, m).symbolic();
}

// tr int d^dp/(2pi)^d (phi + i pslash)^-sigma = 2^(d/2) pi^(1/2-d/2) phi^(-sigma) (phi^2)^(d/2) Gamma(sigma-d)/(Gamma(1/2-d/2)Gamma(sigma))
inline DimTerm dirac_power_trace_term(const Expr& phi, const Affine& sigma, const Affine& dim) {
    Affine half = dim * Rational(1, 2);
    return {{{sigma - dim, 1}, {Affine(Rational(1, 2)) - half, -1}, {sigma, -1}},
            product({power(Expr(2), half), power(pi(), Affine(Rational(1, 2)) - half), power(phi, -sigma),
                     power(power(phi, Affine(2)), half)})};
}

inline Expr dirac_power_trace(const Expr& phi, const Affine& sigma, const Affine& dim = dim_symbolic()) {
    return dirac_power_trace_term(phi, sigma, dim).symbolic();
}

inline Expr dirac_power_trace_d4(const Expr& phi, const Affine& sigma) {
    return limit_d4(dirac_power_trace_term(phi, sigma, dim_symbolic()));
}

// ---- boson words ----

// int d^dp/(2pi)^d of words c(p) (p^2 + V)^-sigma after tensor reduction, then d -> 4.
inline Expr boson_momentum_integral(const Symbol& s, std::vector<std::string>* notes = nullptr) {
    std::vector<Expr> out;
    for (auto& w : s.words()) {
        if (w.f.size() != 1 || w.f[0].t != Fac::T::Pow || w.f[0].base.type != Base::Type::Boson)
            throw Error(ErrorCode::NoRule, "boson integral expects one power of p^2 + V");
        Affine sigma = -w.f[0].exp;
        Expr a = w.f[0].base.field_expr();
        Expr red = tensor_reduce(w.coeff, dim_symbolic());
        for (const auto& kv : nf::to_nf(red).terms) {
            nf::Mono mono = kv.first;
            const RatFunc& c = kv.second;
            Rational m = 0;
            nf::Mono rest;
            for (auto& f : mono) {
                const Node& n = f.base.node();
                if (n.kind == Kind::Momentum && n.mkind == MomentumKind::Square) {
                    if (!f.exp.is_const()) throw Error(ErrorCode::NoRule, "momentum power");
                    m += f.exp.c;
                } else if (n.kind == Kind::Momentum) {
                    throw Error(ErrorCode::NoRule, "free momentum after reduction");
                } else {
                    rest.push_back(f);
                }
            }
            DimTerm t = scalar_master_term(a, sigma, dim_symbolic(), m);
            t.rest = nf::term_tree(rest, c) * t.rest;
            out.push_back(limit_d4(t));
            if (notes)
                notes->push_back("scalar master valid for 0 < " + to_text(affine_tree(Affine(m + 2))) + " < Re(" +
                                 to_text(affine_tree(sigma)) + ")");
        }
    }
    return simplify(sum(std::move(out)));
}

// ---- Dirac words at d = 4 ----

// int_0^inf p^M (phi + i c p)^-sigma dp = phi^(M+1-sigma) (i c)^-(M+1) Gamma(M+1) Gamma(sigma-M-1)/Gamma(sigma)
inline Expr radial_master(const Expr& phi, const Expr& ic, long long M, const Affine& sigma) {
    return product({power(phi, Affine(M + 1) - sigma), power(ic, Affine(-(M + 1))), Expr(Rational(factorial(M))),
                    gamma_fn(sigma - Affine(M + 1)), power(gamma_fn(sigma), Affine(-1))});
}

// tr int d^4p/(2pi)^4 of words  c(p) F(pslash) [pslash | gamma]... with one complex power F = (phi + i c pslash)^-sigma.
// The power is split on the eigenspaces pslash = +-|p|; the angular average uses d = 4 tensor reduction.
inline Expr dirac_momentum_integral(const Symbol& s, std::vector<std::string>* notes = nullptr) {
    std::vector<Expr> out;
    for (auto& w : s.words()) {
        int spec = -1;
        for (size_t i = 0; i < w.f.size(); ++i) {
            const Fac& f = w.f[i];
            if (f.t == Fac::T::Res) throw Error(ErrorCode::NoRule, "lambda-dependent factor under the momentum integral");
            if (f.t == Fac::T::Pow) {
                if (f.base.scalar() || spec >= 0) throw Error(ErrorCode::NoRule, "expected a single matrix power");
                if (f.base.eps) throw Error(ErrorCode::NoRule, "shifted base under the momentum integral");
                spec = static_cast<int>(i);
            }
        }
        if (spec < 0) throw Error(ErrorCode::NoRule, "no decaying factor in " + render(Symbol(w), Format::Text));
        const Fac& F = w.f[static_cast<size_t>(spec)];
        Affine sigma = -F.exp;
        for (int eta : {1, -1}) {
            // F -> (value_eta/2)(1 + eta pslash/|p|); the value is handled by the radial master
            CliffString plain, with_p;
            for (size_t i = 0; i < w.f.size(); ++i) {
                const Fac& f = w.f[i];
                if (static_cast<int>(i) == spec) {
                    with_p.push_back(CliffElem::pslash());
                    continue;
                }
                CliffElem el = f.t == Fac::T::Slash ? CliffElem::pslash() : CliffElem::gamma(f.index);
                plain.push_back(el);
                with_p.push_back(el);
            }
            Expr tr = sum({clifford_trace(plain) / Expr(2),
                           product({Expr(Rational(eta, 2)), power(momentum_sq(), Affine(Rational(-1, 2))), clifford_trace(with_p)})});
            Expr red = tensor_reduce(simplify(w.coeff * tr), Affine(4));
            for (const auto& kv : nf::to_nf(red).terms) {
            nf::Mono mono = kv.first;
            const RatFunc& c = kv.second;
                Rational a = 0;
                nf::Mono rest;
                for (auto& f : mono) {
                    const Node& n = f.base.node();
                    if (n.kind == Kind::Momentum && n.mkind == MomentumKind::Square) {
                        if (!f.exp.is_const()) throw Error(ErrorCode::NoRule, "momentum power");
                        a += f.exp.c;
                    } else if (n.kind == Kind::Momentum) {
                        throw Error(ErrorCode::NoRule, "free momentum after reduction");
                    } else {
                        rest.push_back(f);
                    }
                }
                Rational M = 3 + 2 * a;
                if (!is_integer(M) || M < 0)
                    throw Error(ErrorCode::ValidityViolated, "radial integrand p^" + to_string(M) + " is not integrable at p = 0");
                long long Mi = to_ll(M);
                Expr ic = product({Expr(eta), imag_unit(), F.base.slash});
                // int d^4p/(2pi)^4 = (1/(8 pi^2)) int p^3 dp
                out.push_back(product({nf::term_tree(rest, c), power(Expr(8) * power(pi(), Affine(2)), Affine(-1)),
                                       radial_master(F.base.field_expr(), ic, Mi, sigma)}));
                if (notes)
                    notes->push_back("radial integral p^" + std::to_string(Mi) + " converges for Re(" + to_text(affine_tree(sigma)) +
                                     ") > " + std::to_string(Mi + 1));
            }
        }
    }
    try {
        return simplify(sum(std::move(out)));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::GammaPole) throw Error(ErrorCode::ValidityViolated, e.what());
        throw;
    }
}

// ---- momentum-first route ----

namespace detail {

struct DirectTerm {
    Expr coeff;
    long long xpow = 0;  // power of x = lambda + field (Dirac) or lambda + V (boson)
    long long K = 0;     // power of N^-1, N = p^2 + x^2 (Dirac) or p^2 + x (boson)
    CliffString str;
};

}  // namespace detail

// zeta density of a resolvent symbol: momentum integral in d dimensions with lambda kept,
// then the lambda integral, then d -> 4.
inline Expr direct_zeta(const Symbol& r, const OperatorSpec& op) {
    bool dirac = op.kind == OperatorKind::DiracScalar;
    std::vector<Expr> out;
    for (auto& w : r.words()) {
        std::vector<detail::DirectTerm> terms{{w.coeff, 0, 0, {}}};
        for (auto& f : w.f) {
            if (f.t == Fac::T::Gamma || f.t == Fac::T::Slash) {
                for (auto& t : terms) t.str.push_back(f.t == Fac::T::Slash ? CliffElem::pslash() : CliffElem::gamma(f.index));
                continue;
            }
            if (f.t != Fac::T::Res || f.base.field != op.field || f.base.eps)
                throw Error(ErrorCode::NoRule, "momentum-first route expects resolvent factors of the operator");
            long long n = f.n();
            if (!dirac || f.base.slash.is_zero()) {
                // (x + p^2)^n for the boson, x^n for the scalar part
                for (auto& t : terms) {
                    if (dirac) t.xpow += n;
                    else if (n < 0) t.K -= n;
                    else throw Error(ErrorCode::NoRule, "positive resolvent power");
                }
                continue;
            }
            if (!equal_canonical(power(f.base.slash, Affine(2)), Expr(1))) throw Error(ErrorCode::NoRule, "slash coefficient must be +-1");
            // (x + i c pslash)^n = (x - i c pslash)^k / N^k for n = -k
            long long k = n < 0 ? -n : n;
            Expr sgn = n < 0 ? simplify(-(imag_unit() * f.base.slash)) : simplify(imag_unit() * f.base.slash);
            std::vector<detail::DirectTerm> next;
            for (auto& t : terms)
                for (long long j = 0; j <= k; ++j) {
                    detail::DirectTerm u = t;
                    u.coeff = product({u.coeff, Expr(Rational(binomial(k, j))), power(sgn, Affine(j))});
                    u.xpow += k - j;
                    if (n < 0) u.K += k;
                    for (long long q = 0; q < j; ++q) u.str.push_back(CliffElem::pslash());
                    next.push_back(std::move(u));
                }
            terms = std::move(next);
        }
        for (auto& t : terms) {
            Expr tr = dirac ? clifford_trace(t.str) : Expr(1);
            if (tr.is_zero()) continue;
            Expr red = tensor_reduce(simplify(t.coeff * tr), dim_symbolic());
            for (const auto& kv : nf::to_nf(red).terms) {
                nf::Mono mono = kv.first;
                const RatFunc& c = kv.second;
                Rational m = 0;
                nf::Mono rest;
                for (auto& f : mono) {
                    const Node& n = f.base.node();
                    if (n.kind == Kind::Momentum && n.mkind == MomentumKind::Square) m += f.exp.c;
                    else if (n.kind == Kind::Momentum) throw Error(ErrorCode::NoRule, "free momentum after reduction");
                    else rest.push_back(f);
                }
                Affine half = dim_symbolic() * Rational(1, 2);
                // momentum integral; E = total power of x afterwards
                Affine E = dirac ? Affine(t.xpow) + dim_symbolic() + Affine(2 * m - 2 * t.K)
                                 : Affine(t.xpow) + half + Affine(m - t.K);
                DimTerm dt;
                dt.gammas = {{half + Affine(m), 1}, {Affine(t.K - m) - half, 1}, {half, -1}, {Affine(t.K), -1},
                             // (sin pi s/pi) int lambda^-s (lambda + F)^E = Gamma(s-E-1)/(Gamma(s)Gamma(-E)) F^(1+E-s)
                             {Affine(0, 1) - E - Affine(1), 1}, {Affine(0, 1), -1}, {-E, -1}};
                dt.rest = product({nf::term_tree(rest, c), power(Expr(4) * pi(), -half), power(op.field_of(), E + Affine(1, -1))});
                out.push_back(limit_d4(dt));
            }
        }
    }
    return simplify(sum(std::move(out)));
}

}  // namespace symdet
