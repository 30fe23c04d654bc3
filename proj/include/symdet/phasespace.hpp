#pragma once

// Derivatives, generalized Poisson brackets and the star product of phase-space symbols,
// plus spinor traces and numeric evaluation of words.

#include "symdet/eval.hpp"
#include "symdet/ncword.hpp"

#include <atomic>

namespace symdet {

inline int& max_bracket_order() {
    static int m = 4;
    return m;
}

namespace detail {

inline std::string bracket_index() {
    static std::atomic<long> n{0};
    return "%" + std::to_string(++n);
}

inline FacList splice(const FacList& f, size_t at, const FacList& with) {
    FacList r(f.begin(), f.begin() + static_cast<long>(at));
    r.insert(r.end(), with.begin(), with.end());
    r.insert(r.end(), f.begin() + static_cast<long>(at) + 1, f.end());
    return r;
}

inline void push_res(FacList& out, const Base& b, long long n) {
    if (n != 0) out.push_back(Fac::res(b, n));
}

}  // namespace detail

// d/dx^mu (dx) or d/dp_mu of one word, Leibniz without reordering.
inline std::vector<Word> d_word(const Word& w, bool dx, const std::string& mu) {
    std::vector<Word> out;
    Expr dc = dx ? diff_x(w.coeff, mu) : diff_p(w.coeff, mu);
    if (!dc.is_zero()) out.push_back({dc, w.f});
    for (size_t i = 0; i < w.f.size(); ++i) {
        const Fac& f = w.f[i];
        switch (f.t) {
            case Fac::T::Gamma:
                break;
            case Fac::T::Slash:
                if (!dx) out.push_back({w.coeff, detail::splice(w.f, i, {Fac::gamma(mu)})});
                break;
            case Fac::T::Res: {
                long long n = f.n();
                if (dx) {
                    FacList r;
                    detail::push_res(r, f.base, n - 1);
                    out.push_back({w.coeff * Expr(n) * field(f.base.field, {mu}), detail::splice(w.f, i, r)});
                } else if (f.base.type == Base::Type::Boson) {
                    FacList r;
                    detail::push_res(r, f.base, n - 1);
                    out.push_back({w.coeff * Expr(2 * n) * momentum(mu), detail::splice(w.f, i, r)});
                } else if (!f.base.slash.is_zero()) {
                    Expr ic = imag_unit() * f.base.slash;
                    if (n > 0) {
                        for (long long j = 0; j < n; ++j) {
                            FacList r;
                            detail::push_res(r, f.base, j);
                            r.push_back(Fac::gamma(mu));
                            detail::push_res(r, f.base, n - 1 - j);
                            out.push_back({w.coeff * ic, detail::splice(w.f, i, r)});
                        }
                    } else {
                        long long m = -n;
                        for (long long j = 1; j <= m; ++j) {
                            FacList r;
                            detail::push_res(r, f.base, -j);
                            r.push_back(Fac::gamma(mu));
                            detail::push_res(r, f.base, -(m + 1 - j));
                            out.push_back({-(w.coeff * ic), detail::splice(w.f, i, r)});
                        }
                    }
                }
                break;
            }
            case Fac::T::Pow: {
                Expr e = affine_tree(f.exp);
                FacList r{Fac::pw(f.base, f.exp - Affine(1))};
                if (dx) {
                    out.push_back({w.coeff * e * field(f.base.field, {mu}), detail::splice(w.f, i, r)});
                } else if (f.base.type == Base::Type::Boson) {
                    out.push_back({w.coeff * e * Expr(2) * momentum(mu), detail::splice(w.f, i, r)});
                } else if (!f.base.slash.is_zero()) {
                    throw Error(ErrorCode::NoRule, "momentum derivative of a complex power of a matrix symbol");
                }
                break;
            }
        }
    }
    return out;
}

inline std::vector<Word> d_words(const std::vector<Word>& ws, bool dx, const std::string& mu) {
    std::vector<Word> r;
    for (auto& w : ws) {
        auto d = d_word(w, dx, mu);
        r.insert(r.end(), d.begin(), d.end());
    }
    return r;
}

inline Symbol diff_x(const Symbol& a, const std::string& mu) {
    Symbol r;
    for (auto& w : d_words(a.words(), true, mu)) r.add(w);
    return r;
}

inline Symbol diff_p(const Symbol& a, const std::string& mu) {
    Symbol r;
    for (auto& w : d_words(a.words(), false, mu)) r.add(w);
    return r;
}

// n-th coefficient of the exponential bidifferential product:
// {A,B}_n = sum_k C(n,k) (-1)^(n-k) dx^k dp^(n-k) A * dp^k dx^(n-k) B
inline Symbol poisson_bracket(const Symbol& a, const Symbol& b, int n) {
    if (n < 0 || n > max_bracket_order())
        throw Error(ErrorCode::OrderTooLarge, "bracket order " + std::to_string(n) + " exceeds " + std::to_string(max_bracket_order()));
    std::vector<std::string> idx;
    for (int i = 0; i < n; ++i) idx.push_back(detail::bracket_index());
    Symbol r;
    for (int k = 0; k <= n; ++k) {
        std::vector<Word> wa = a.words(), wb = b.words();
        for (int i = 0; i < n; ++i) {
            wa = d_words(wa, i < k, idx[i]);
            wb = d_words(wb, i >= k, idx[i]);
        }
        if (wa.empty() || wb.empty()) continue;
        Rational c = binomial(n, k) * ((n - k) % 2 ? -1 : 1);
        for (auto& x0 : wa)
            for (auto& y0 : wb) {
                Word x = detail::freshen(x0), y = detail::freshen(y0);
                Word w{Expr(c) * x.coeff * y.coeff, x.f};
                w.f.insert(w.f.end(), y.f.begin(), y.f.end());
                r.add(std::move(w));
            }
    }
    return r;
}

inline Expr hbar() { return param("hbar"); }

// sum_{n<=order} (i hbar/2)^n / n! {A,B}_n
inline Symbol star_product(const Symbol& a, const Symbol& b, int order, const Expr& h = hbar()) {
    if (order > max_bracket_order())
        throw Error(ErrorCode::OrderTooLarge, "star product order " + std::to_string(order));
    Symbol r;
    for (int n = 0; n <= order; ++n) {
        Expr w = product({power(imag_unit() * h / Expr(2), Affine(n)), Expr(Rational(1) / Rational(factorial(n)))});
        r.add(scale(poisson_bracket(a, b, n), w));
    }
    return r;
}

// ---- traces ----

// Smallest cyclic rotation of every word; valid under the spinor trace only.
inline Symbol trace_canonical(const Symbol& a) {
    Symbol r;
    for (auto& w : a.words()) {
        Symbol best(w);
        for (size_t k = 1; k < w.f.size(); ++k) {
            Word rot{w.coeff, {}};
            rot.f.insert(rot.f.end(), w.f.begin() + static_cast<long>(k), w.f.end());
            rot.f.insert(rot.f.end(), w.f.begin(), w.f.begin() + static_cast<long>(k));
            Symbol cand(rot);
            if (cand.size() == 1 && best.size() == 1 &&
                cmp_facs(cand.terms().begin()->first, best.terms().begin()->first) < 0)
                best = cand;
        }
        r.add(best);
    }
    return r;
}

namespace detail {

// scalar value of a resolvent or power factor on the eigenspace pslash = eta |p|
inline Expr spectral_value(const Fac& f, int eta) {
    Expr e = f.base.eigen_expr(eta);
    if (f.t == Fac::T::Res) return power(sum({param("lambda"), e}), f.exp);
    return power(e, f.exp);
}

}  // namespace detail

// Spinor trace of a word. Functions of pslash are split with the projectors (1 +- pslash/|p|)/2.
inline Expr spinor_trace(const Word& w) {
    std::vector<size_t> spectral;
    for (size_t i = 0; i < w.f.size(); ++i)
        if ((w.f[i].t == Fac::T::Res || w.f[i].t == Fac::T::Pow) && !w.f[i].base.scalar()) spectral.push_back(i);
    std::vector<Expr> terms;
    Expr inv_abs = power(momentum_sq(), Affine(Rational(-1, 2)));
    for (unsigned mask = 0; mask < (1u << spectral.size()); ++mask) {
        // each spectral factor contributes (f_eta/2) (1 + eta pslash/|p|)
        std::vector<std::pair<Expr, CliffString>> parts{{Expr(1), {}}};
        size_t si = 0;
        for (size_t i = 0; i < w.f.size(); ++i) {
            const Fac& f = w.f[i];
            if (si < spectral.size() && spectral[si] == i) {
                int eta = (mask >> si & 1u) ? -1 : 1;
                ++si;
                Expr val = detail::spectral_value(f, eta) / Expr(2);
                std::vector<std::pair<Expr, CliffString>> next;
                for (auto& [c, s] : parts) {
                    next.push_back({c * val, s});
                    CliffString s2 = s;
                    s2.push_back(CliffElem::pslash());
                    next.push_back({c * val * Expr(eta) * inv_abs, s2});
                }
                parts = std::move(next);
            } else if (f.t == Fac::T::Gamma) {
                for (auto& [c, s] : parts) s.push_back(CliffElem::gamma(f.index));
            } else if (f.t == Fac::T::Slash) {
                for (auto& [c, s] : parts) s.push_back(CliffElem::pslash());
            } else {
                Expr val = f.t == Fac::T::Res ? power(sum({param("lambda"), f.base.eigen_expr(1)}), f.exp)
                                              : power(f.base.eigen_expr(1), f.exp);
                for (auto& [c, s] : parts) c = c * val;
            }
        }
        for (auto& [c, s] : parts) {
            Expr t = clifford_trace(s);
            if (!t.is_zero()) terms.push_back(c * t);
        }
    }
    return simplify(w.coeff * sum(std::move(terms)));
}

inline Expr spinor_trace(const Symbol& a) {
    std::vector<Expr> t;
    for (auto& w : a.words()) t.push_back(spinor_trace(w));
    return simplify(sum(std::move(t)));
}

// Deferred phase-space integral: integral d^4x d^4p/(2 pi)^4 of the spinor-traced symbol.
struct PhaseSpaceTrace {
    Expr integrand;
    bool zero() const { return integrand.is_zero(); }
};

inline PhaseSpaceTrace phase_space_trace(const Symbol& a) { return {spinor_trace(a)}; }

// ---- numeric evaluation ----

// Numeric phase-space point: field callback, momentum, lambda/s/t/eps in params.
struct NumPoint {
    Bindings b;
};

namespace detail {

inline Mat4 slash_num(const Bindings& b) {
    Mat4 r = Mat4::Zero();
    for (int a = 0; a < 4; ++a) r += b.p[a] * gamma_rep()[a];
    return r;
}

inline cplx base_scalar_num(const Base& base, Bindings& b) {
    cplx v = b.field(base.field, {}, 0);
    if (base.eps) v += cplx(0, 1) * b.params.at("eps");
    return v;
}

inline Mat4 mat_pow(const Mat4& m, long long n) {
    if (n < 0) return mat_pow(m.inverse(), -n);
    Mat4 r = Mat4::Identity(), x = m;
    while (n) {
        if (n & 1) r = r * x;
        x = x * x;
        n >>= 1;
    }
    return r;
}

// f(a + i c pslash) through the two eigenvalues a +- i c |p|
inline Mat4 spectral_fn(cplx a, cplx c, const Bindings& b, const std::function<cplx(cplx)>& fn) {
    cplx p2 = 0;
    for (int k = 0; k < 4; ++k) p2 += b.p[k] * b.p[k];
    if (std::abs(p2) < 1e-300 || c == cplx(0)) return fn(a) * Mat4::Identity();
    cplx q = std::sqrt(p2);
    Mat4 ps = slash_num(b) / q;
    Mat4 pp = (Mat4::Identity() + ps) / 2.0, pm = (Mat4::Identity() - ps) / 2.0;
    cplx i(0, 1);
    return fn(a + i * c * q) * pp + fn(a - i * c * q) * pm;
}

inline Mat4 fac_num(const Fac& f, Bindings& b) {
    switch (f.t) {
        case Fac::T::Gamma:
            return gamma_rep()[index_value(b, f.index)];
        case Fac::T::Slash:
            return slash_num(b);
        case Fac::T::Res:
        case Fac::T::Pow: {
            cplx a = base_scalar_num(f.base, b);
            if (f.t == Fac::T::Res) a += b.params.at("lambda");
            if (f.base.type == Base::Type::Boson) {
                cplx p2 = 0;
                for (int k = 0; k < 4; ++k) p2 += b.p[k] * b.p[k];
                a += p2;
                cplx e = affine_value(f.exp, b);
                return (f.t == Fac::T::Res ? ipow(a, to_ll(f.exp.c)) : std::pow(a, e)) * Mat4::Identity();
            }
            cplx c = eval_impl(f.base.slash, b);
            if (f.t == Fac::T::Res) {
                Mat4 m = a * Mat4::Identity() + cplx(0, 1) * c * slash_num(b);
                return mat_pow(m, to_ll(f.exp.c));
            }
            cplx e = affine_value(f.exp, b);
            return spectral_fn(a, c, b, [&](cplx z) { return std::pow(z, e); });
        }
    }
    return Mat4::Identity();
}

}  // namespace detail

// Numeric 4x4 value of a word; gamma indices shared with the coefficient are summed.
inline Mat4 eval_word(const Word& w, Bindings b) {
    std::vector<std::string> idx;
    for (auto& f : w.f)
        if (f.t == Fac::T::Gamma && !b.indices.count(f.index) &&
            std::find(idx.begin(), idx.end(), f.index) == idx.end())
            idx.push_back(f.index);
    Mat4 total = Mat4::Zero();
    std::vector<int> val(idx.size(), 0);
    while (true) {
        for (size_t i = 0; i < idx.size(); ++i) b.indices[idx[i]] = val[i];
        Mat4 m = Mat4::Identity();
        for (auto& f : w.f) m = m * detail::fac_num(f, b);
        total += detail::eval_impl(w.coeff, b) * m;
        size_t k = 0;
        while (k < val.size() && ++val[k] == 4) val[k++] = 0;
        if (k == val.size()) break;
    }
    return total;
}

inline Mat4 eval_symbol(const Symbol& s, const Bindings& b) {
    Mat4 r = Mat4::Zero();
    for (auto& w : s.words()) r += eval_word(w, b);
    return r;
}

}  // namespace symdet
