#pragma once

// Semigroup integrals  (sin pi s / pi) int_0^inf dlambda lambda^-s (...)  applied to resolvent words,
// the gamma-passing rewrite, Feynman parametrisation with Hadamard finite parts, and the
// operator identity evaluated with shifted bases.

#include "symdet/resolvent.hpp"

namespace symdet {

// Gamma(s+k-1)/(Gamma(s) Gamma(k)) as a rational function of s
inline Expr mellin_prefactor(long long k) {
    if (k < 1) throw Error(ErrorCode::Domain, "resolvent power must be positive");
    return simplify(gamma_fn(Affine(k - 1, 1)) / (gamma_fn(Affine(0, 1)) * gamma_fn(Affine(k))));
}

// (sin pi s/pi) int lambda^-s (lambda + a)^-k dlambda = Gamma(s+k-1)/(Gamma(s)Gamma(k)) a^(1-s-k)
inline Expr mellin_rule(const Expr& a, long long k) {
    return simplify(mellin_prefactor(k) * power(a, Affine(1 - k, -1)));
}

struct MellinOptions {
    // split a scalar base and a matrix base sharing the same field by partial fractions
    bool partial_fractions = false;
};

namespace detail {

inline bool same_base(const Base& a, const Base& b) { return Base::cmp(a, b) == 0; }

// (i c pslash)^-k = (i c)^-k (p^2)^-ceil(k/2) pslash^(k mod 2)
inline Word delta_inverse_power(const Expr& c, long long k) {
    Word w{product({power(imag_unit() * c, Affine(-k)), power(momentum_sq(), Affine(-(k + 1) / 2))}), {}};
    if (k % 2) w.f.push_back(Fac::pslash());
    return w;
}

inline Symbol mellin_single(const Word& w, const std::vector<size_t>& res, const Base& base, long long k) {
    FacList f;
    bool placed = false;
    for (size_t i = 0; i < w.f.size(); ++i) {
        if (std::find(res.begin(), res.end(), i) != res.end()) {
            if (!placed) f.push_back(Fac::pw(base, Affine(1 - k, -1)));
            placed = true;
            continue;
        }
        f.push_back(w.f[i]);
    }
    return Symbol(Word{w.coeff * mellin_prefactor(k), f});
}

}  // namespace detail

inline Symbol mellin_word(const Word& w, const MellinOptions& opt = {}) {
    std::vector<size_t> res;
    std::vector<Base> bases;
    for (size_t i = 0; i < w.f.size(); ++i) {
        if (w.f[i].t != Fac::T::Res) continue;
        res.push_back(i);
        if (std::none_of(bases.begin(), bases.end(), [&](const Base& b) { return detail::same_base(b, w.f[i].base); }))
            bases.push_back(w.f[i].base);
    }
    if (res.empty()) throw Error(ErrorCode::NoRule, "word without lambda dependence");
    // matrix-valued resolvents must sit in one commuting run
    std::vector<size_t> mat;
    for (auto i : res)
        if (!w.f[i].base.scalar()) mat.push_back(i);
    if (!mat.empty())
        for (size_t i = mat.front(); i < mat.back(); ++i)
            if (w.f[i].t == Fac::T::Gamma) throw Error(ErrorCode::NonCommutingBase, "resolvents separated by gamma matrices");
    auto power_of = [&](const Base& b) {
        long long k = 0;
        for (auto i : res)
            if (detail::same_base(w.f[i].base, b)) k -= w.f[i].n();
        return k;
    };
    if (bases.size() == 1) {
        long long k = power_of(bases[0]);
        if (k < 1) throw Error(ErrorCode::NoRule, "no decay in lambda");
        return detail::mellin_single(w, res, bases[0], k);
    }
    if (bases.size() > 2) throw Error(ErrorCode::NonCommutingBase, "more than two resolvent bases");
    Base b = bases[0], c = bases[1];
    if (!b.scalar() && !c.scalar()) throw Error(ErrorCode::NonCommutingBase, "mixed " + b.name(Format::Text) + " and " + c.name(Format::Text));
    if (!b.scalar()) std::swap(b, c);
    if (c.scalar() || !opt.partial_fractions || b.field != c.field || b.eps != c.eps)
        throw Error(ErrorCode::NonCommutingBase, "mixed " + b.name(Format::Text) + " and " + c.name(Format::Text));
    // 1/((x+B)^a (x+C)^b) with C - B = Delta = i c pslash
    long long pa = power_of(b), pb = power_of(c);
    if (pa < 1 || pb < 1) throw Error(ErrorCode::NoRule, "partial fractions need negative powers");
    Expr dc = c.slash;
    FacList rest;
    for (size_t i = 0; i < w.f.size(); ++i)
        if (w.f[i].t != Fac::T::Res) rest.push_back(w.f[i]);
    size_t at = 0;
    for (size_t i = 0; i < mat.front(); ++i)
        if (w.f[i].t != Fac::T::Res) ++at;
    Symbol out;
    auto emit = [&](const Base& base, long long j, const Rational& coef, const Expr& delta_c, long long k) {
        Word d = detail::delta_inverse_power(delta_c, k);
        FacList f(rest.begin(), rest.begin() + static_cast<long>(at));
        f.push_back(Fac::res(base, -j));
        f.insert(f.end(), d.f.begin(), d.f.end());
        f.insert(f.end(), rest.begin() + static_cast<long>(at), rest.end());
        Word piece{Expr(coef) * d.coeff * w.coeff, f};
        out.add(mellin_word(piece, opt));
    };
    for (long long j = 1; j <= pa; ++j)
        emit(b, j, Rational(binomial(pa + pb - j - 1, pb - 1)) * ((pa - j) % 2 ? -1 : 1), dc, pa + pb - j);
    for (long long j = 1; j <= pb; ++j)
        emit(c, j, Rational(binomial(pa + pb - j - 1, pa - 1)) * ((pb - j) % 2 ? -1 : 1), simplify(-dc), pa + pb - j);
    return out;
}

inline Symbol mellin(const Symbol& s, const MellinOptions& opt = {}) {
    Symbol r;
    for (auto& w : s.words()) r.add(mellin_word(w, opt));
    return r;
}

// ---- gamma passing ----

// gamma^a (lambda+A)^-1 gamma^b = (lambda+A*)^-1 gamma^a gamma^b
//   + [(lambda+A)^-1 - (lambda+A*)^-1] (p^a/p^2) pslash gamma^b
inline Symbol gamma_pass(const Word& w) {
    for (size_t i = 0; i + 2 < w.f.size(); ++i) {
        const Fac &g1 = w.f[i], &r = w.f[i + 1], &g2 = w.f[i + 2];
        if (g1.t != Fac::T::Gamma || g2.t != Fac::T::Gamma || r.t != Fac::T::Res || r.n() != -1) continue;
        if (r.base.type != Base::Type::Dirac || r.base.scalar()) continue;
        Base a = r.base, ac = r.base;
        ac.slash = simplify(-a.slash);
        auto with = [&](const FacList& mid) {
            FacList f(w.f.begin(), w.f.begin() + static_cast<long>(i));
            f.insert(f.end(), mid.begin(), mid.end());
            f.insert(f.end(), w.f.begin() + static_cast<long>(i) + 3, w.f.end());
            return f;
        };
        Expr pa = momentum(g1.index) / momentum_sq();
        Symbol out;
        out.add(Word{w.coeff, with({Fac::res(ac, -1), g1, g2})});
        out.add(Word{w.coeff * pa, with({Fac::res(a, -1), Fac::pslash(), g2})});
        out.add(Word{-(w.coeff * pa), with({Fac::res(ac, -1), Fac::pslash(), g2})});
        return out;
    }
    throw Error(ErrorCode::PatternMismatch, "no gamma-resolvent-gamma sandwich");
}

inline bool has_sandwich(const Word& w) {
    try {
        gamma_pass(w);
        return true;
    } catch (const Error&) {
        return false;
    }
}

// apply gamma passing until no sandwich is left
inline Symbol gamma_pass_all(const Symbol& s) {
    Symbol r;
    for (auto& w : s.words()) {
        if (has_sandwich(w)) r.add(gamma_pass_all(gamma_pass(w)));
        else r.add(w);
    }
    return r;
}

// ---- Feynman parametrisation ----

inline Expr feynman_param() { return param("t"); }

namespace detail {

struct ConjPair {
    size_t ia, ib;
    long long a, b;
};

inline ConjPair find_conjugate_pair(const Word& w) {
    std::vector<size_t> mat;
    for (size_t i = 0; i < w.f.size(); ++i)
        if (w.f[i].t == Fac::T::Res && !w.f[i].base.scalar()) mat.push_back(i);
    if (mat.size() != 2) throw Error(ErrorCode::PatternMismatch, "expected two matrix resolvents");
    const Fac &x = w.f[mat[0]], &y = w.f[mat[1]];
    if (x.base.field != y.base.field || x.base.eps != y.base.eps || !equal_canonical(x.base.slash, -y.base.slash))
        throw Error(ErrorCode::PatternMismatch, "resolvents are not conjugate");
    for (size_t i = mat[0]; i < mat[1]; ++i)
        if (w.f[i].t == Fac::T::Gamma) throw Error(ErrorCode::PatternMismatch, "resolvents separated by gamma matrices");
    if (x.n() >= 0 || y.n() >= 0) throw Error(ErrorCode::PatternMismatch, "expected inverse powers");
    // orient so that the first base has the positive slash coefficient
    if (!x.base.slash.is_number()) throw Error(ErrorCode::PatternMismatch, "slash coefficient is not a number");
    if (x.base.slash.value() > 0) return {mat[0], mat[1], -x.n(), -y.n()};
    return {mat[1], mat[0], -y.n(), -x.n()};
}

}  // namespace detail

// (lambda+A)^-a (lambda+A*)^-b = Gamma(a+b)/(Gamma(a)Gamma(b)) FP int_0^1 dt t^(a-1)(1-t)^(b-1)
//   [lambda + phi + (2t-1) i c pslash]^-(a+b); the parameter t stays symbolic.
inline Symbol feynman_combine(const Word& w) {
    auto pr = detail::find_conjugate_pair(w);
    const Base& A = w.f[pr.ia].base;
    Base k = A;
    k.slash = simplify(A.slash * (Expr(2) * feynman_param() - Expr(1)));
    Expr weight = product({Expr(Rational(factorial(pr.a + pr.b - 1)) / Rational(factorial(pr.a - 1) * factorial(pr.b - 1))),
                           power(feynman_param(), Affine(pr.a - 1)),
                           power(Expr(1) - feynman_param(), Affine(pr.b - 1))});
    FacList f;
    for (size_t i = 0; i < w.f.size(); ++i) {
        if (i == std::min(pr.ia, pr.ib)) f.push_back(Fac::res(k, -(pr.a + pr.b)));
        else if (i != pr.ia && i != pr.ib) f.push_back(w.f[i]);
    }
    return Symbol(Word{w.coeff * weight, f});
}

// ---- Hadamard finite part ----

// FP int_lo^hi f(t) dt for a rational f with rational poles, symmetric excision around interior poles.
inline Expr hadamard_fp(RatFunc f, const Rational& lo = 0, const Rational& hi = 1) {
    auto [roots, rest] = f.denom().rational_roots();
    if (rest.degree() > 0) throw Error(ErrorCode::NoRule, "denominator has irrational roots");
    std::vector<Expr> logs;
    Rational total = 0;
    for (auto& [r, mult] : roots) {
        if (r == lo || r == hi) throw Error(ErrorCode::NonPoleSingularity, "pole at an endpoint");
        int m = -f.order_at(r);
        while (m > 0) {
            RatFunc lin(Poly::linear(1, -r));
            Rational c = (f * lin.pow(m)).eval(r);
            f = f - RatFunc(Poly(c)) * lin.pow(-m);
            // FP int (t-r)^-m
            if (m == 1) {
                Rational a = abs(hi - r), b = abs(lo - r);
                if (a != b) logs.push_back(Expr(c) * log_fn(Expr(a / b)));
            } else {
                total += c * (rpow(hi - r, 1 - m) - rpow(lo - r, 1 - m)) / Rational(1 - m);
            }
            m = -f.order_at(r);
        }
    }
    if (f.denom().degree() > 0) throw Error(ErrorCode::NoRule, "finite-part reduction did not terminate");
    Poly p = f.numer();
    for (int i = 0; i <= p.degree(); ++i)
        total += p[i] * (rpow(hi, i + 1) - rpow(lo, i + 1)) / Rational(i + 1) / f.denom()[0];
    logs.push_back(Expr(total));
    return simplify(sum(logs));
}

namespace detail {

inline bool depends_on(const Expr& e, const std::string& var) { return depends_on_param(e, var); }

inline RatFunc to_ratfunc(const Expr& e, const std::string& var) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Number:
            return RatFunc(n.value);
        case Kind::Param:
            if (n.name == var) return RatFunc::x();
            break;
        case Kind::Sum: {
            RatFunc r;
            for (auto& c : n.children) r = r + to_ratfunc(c, var);
            return r;
        }
        case Kind::Product: {
            RatFunc r(Rational(1));
            for (auto& c : n.children) r = r * to_ratfunc(c, var);
            return r;
        }
        case Kind::Power:
            if (!n.exponent.is_integer()) throw Error(ErrorCode::NonPoleSingularity, "non-integer power in the parameter");
            return to_ratfunc(n.children[0], var).pow(to_ll(n.exponent.c));
        default:
            break;
    }
    throw Error(ErrorCode::NoRule, "cannot read " + to_text(e) + " as a rational function of " + var);
}

}  // namespace detail

// Replace the dependence on var by its finite-part integral over [0,1].
inline Expr fp_integrate(const Expr& e, const std::string& var = "t") {
    nf::NF n = nf::to_nf(e);
    std::vector<Expr> out;
    for (auto& [mono, c] : n.terms) {
        nf::Mono keep;
        std::vector<Expr> dep;
        for (auto& f : mono) {
            Expr atom = power(f.base, f.exp);
            if (detail::depends_on(f.base, var)) dep.push_back(atom);
            else keep.push_back(f);
        }
        if (dep.empty()) throw Error(ErrorCode::NoRule, "term without the integration parameter");
        Expr fp = hadamard_fp(detail::to_ratfunc(product(dep), var));
        out.push_back(nf::term_tree(keep, c) * fp);
    }
    return simplify(sum(std::move(out)));
}

// ---- operator identity and shifted bases ----

// (lambda+A)^-3 (lambda+A*)^-1 = 1/8 B^-3 A^-1 + 1/8 B^-3 A*^-1 + 1/4 B^-2 A^-2 + 1/2 B^-1 A^-3, B = lambda + phi
inline Symbol operator_identity_decompose(const Word& w) {
    auto pr = detail::find_conjugate_pair(w);
    if (pr.a != 3 || pr.b != 1) throw Error(ErrorCode::PatternMismatch, "identity needs the (3,1) pattern");
    const Base A = w.f[pr.ia].base, Ac = w.f[pr.ib].base;
    Base B = A;
    B.slash = Expr(0);
    size_t first = std::min(pr.ia, pr.ib);
    auto with = [&](FacList mid) {
        FacList f;
        for (size_t i = 0; i < w.f.size(); ++i) {
            if (i == first) f.insert(f.end(), mid.begin(), mid.end());
            else if (i != pr.ia && i != pr.ib) f.push_back(w.f[i]);
        }
        return f;
    };
    Symbol r;
    r.add(Word{w.coeff * Expr(Rational(1, 8)), with({Fac::res(B, -3), Fac::res(A, -1)})});
    r.add(Word{w.coeff * Expr(Rational(1, 8)), with({Fac::res(B, -3), Fac::res(Ac, -1)})});
    r.add(Word{w.coeff * Expr(Rational(1, 4)), with({Fac::res(B, -2), Fac::res(A, -2)})});
    r.add(Word{w.coeff * Expr(Rational(1, 2)), with({Fac::res(B, -1), Fac::res(A, -3)})});
    return r;
}

namespace detail {

inline Symbol map_bases(const Symbol& s, const std::function<Base(const Base&)>& fn) {
    Symbol r;
    for (auto w : s.words()) {
        for (auto& f : w.f)
            if (f.t == Fac::T::Res || f.t == Fac::T::Pow) f.base = fn(f.base);
        r.add(w);
    }
    return r;
}

}  // namespace detail

// Semigroup integral with phi -> phi + i eps in every base, then eps -> 0+.
inline Symbol mellin_epsilon(const Symbol& s) {
    Symbol shifted = detail::map_bases(s, [](const Base& b) { return b.type == Base::Type::Dirac ? b.shifted() : b; });
    Symbol m = mellin(shifted, MellinOptions{true});
    for (auto& w : m.words())
        if (contains_kind(w.coeff, Kind::Param) && depends_on_param(w.coeff, "eps")) {
            nf::NF n = nf::to_nf(w.coeff);
            for (auto& [mono, c] : n.terms)
                for (auto& f : mono)
                    if (f.base == param("eps") && f.exp.c < 0)
                        throw Error(ErrorCode::EpsilonLimitDivergent, to_text(w.coeff));
        }
    Symbol lim = detail::map_bases(m, [](const Base& b) { return b.unshifted(); });
    Symbol r;
    for (auto& w : lim.words()) r.add(Word{substitute_param(w.coeff, "eps", Expr(0)), w.f});
    return r;
}

}  // namespace symdet
