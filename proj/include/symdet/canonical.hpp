#pragma once

// Canonical normal form: a sum of monomials with coefficients that are rational functions of s.

#include "symdet/expr.hpp"

#include <atomic>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace symdet {
namespace nf {

struct Factor {
    Expr base;
    Affine exp;
};
using Mono = std::vector<Factor>;

inline int cmp_factor(const Factor& a, const Factor& b) {
    if (int c = compare(a.base, b.base)) return c;
    return Affine::cmp(a.exp, b.exp);
}

inline int cmp_mono(const Mono& a, const Mono& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i)
        if (int c = cmp_factor(a[i], b[i])) return c;
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

struct MonoLess {
    bool operator()(const Mono& a, const Mono& b) const { return cmp_mono(a, b) < 0; }
};

struct NF {
    std::map<Mono, RatFunc, MonoLess> terms;

    void add(const Mono& m, const RatFunc& c) {
        if (c.zero()) return;
        auto it = terms.find(m);
        if (it == terms.end()) {
            terms.emplace(m, c);
            return;
        }
        it->second = it->second + c;
        if (it->second.zero()) terms.erase(it);
    }
    void add(const NF& o) {
        for (auto& [m, c] : o.terms) add(m, c);
    }
    bool zero() const { return terms.empty(); }
};

inline NF constant_nf(const RatFunc& c) {
    NF r;
    r.add({}, c);
    return r;
}

NF to_nf(const Expr& e);
Expr to_tree(const NF& n);
NF mul(const NF& a, const NF& b);
NF normalize_mono(Mono m, RatFunc coef);

inline std::string fresh_index() {
    static std::atomic<unsigned long long> counter{0};
    return "~" + std::to_string(++counter);
}

inline Rational rational_gcd(const Rational& a, const Rational& b) {
    if (a == 0) return b < 0 ? Rational(-b) : b;
    if (b == 0) return a < 0 ? Rational(-a) : a;
    Integer n = boost::multiprecision::gcd(num(a), num(b));
    Integer d = boost::multiprecision::lcm(den(a), den(b));
    if (n < 0) n = -n;
    return Rational(n, d);
}

// ---- index machinery ----

inline void mono_index_counts(const Mono& m, std::map<std::string, int>& cnt) {
    for (auto& f : m)
        if (has_indices(f.base))
            for (auto& i : f.base.node().indices) ++cnt[i];
}

inline std::vector<std::string> mono_dummies(const Mono& m) {
    std::map<std::string, int> cnt;
    mono_index_counts(m, cnt);
    std::vector<std::string> out;
    for (auto& [k, v] : cnt) {
        if (v > 2) throw Error(ErrorCode::Domain, "index " + k + " appears more than twice");
        if (v == 2) out.push_back(k);
    }
    return out;
}

inline Mono rename_mono(const Mono& m, const std::vector<std::pair<std::string, std::string>>& map) {
    Mono r;
    r.reserve(m.size());
    for (auto& f : m) r.push_back({has_indices(f.base) ? rename_atom_indices(f.base, map) : f.base, f.exp});
    return r;
}

inline void sort_mono(Mono& m) {
    std::stable_sort(m.begin(), m.end(), [](const Factor& a, const Factor& b) { return cmp_factor(a, b) < 0; });
}

// Give dummies the names #1, #2, ... choosing the assignment that minimises the sorted monomial.
inline void canonical_dummies(Mono& m) {
    auto dummies = mono_dummies(m);
    if (dummies.empty()) {
        sort_mono(m);
        return;
    }
    const size_t k = dummies.size();
    auto apply = [&](const std::vector<size_t>& perm) {
        std::vector<std::pair<std::string, std::string>> map;
        for (size_t i = 0; i < k; ++i) map.emplace_back(dummies[i], "#" + std::to_string(perm[i] + 1));
        Mono r = rename_mono(m, map);
        sort_mono(r);
        return r;
    };
    std::vector<size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    if (k <= 5) {
        std::optional<Mono> best;
        do {
            Mono cand = apply(perm);
            if (!best || cmp_mono(cand, *best) < 0) best = std::move(cand);
        } while (std::next_permutation(perm.begin(), perm.end()));
        m = std::move(*best);
        return;
    }
    // many dummies: order by first appearance after masking, iterate to a fixed point
    Mono cur = apply(perm);
    for (int it = 0; it < 6; ++it) {
        auto d2 = mono_dummies(cur);
        std::vector<std::string> order;
        for (auto& f : cur)
            if (has_indices(f.base))
                for (auto& i : f.base.node().indices)
                    if (std::find(d2.begin(), d2.end(), i) != d2.end() && std::find(order.begin(), order.end(), i) == order.end())
                        order.push_back(i);
        std::vector<std::pair<std::string, std::string>> map;
        for (size_t i = 0; i < order.size(); ++i) map.emplace_back(order[i], "#" + std::to_string(i + 1));
        Mono next = rename_mono(cur, map);
        sort_mono(next);
        if (cmp_mono(next, cur) == 0) break;
        cur = std::move(next);
    }
    m = std::move(cur);
}

// delta contraction, p_a p_a -> p^2, repeated field index -> Laplacian
inline void contract(Mono& m) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < m.size() && !changed; ++i) {
            const Node& n = m[i].base.node();
            if (n.kind == Kind::Delta) {
                const std::string a = n.indices[0], b = n.indices[1];
                if (a == b) {
                    m[i] = {sym_d(), Affine(1)};
                    changed = true;
                    break;
                }
                for (auto [from, to] : {std::pair{b, a}, std::pair{a, b}}) {
                    for (size_t j = 0; j < m.size(); ++j) {
                        if (j == i || !has_indices(m[j].base)) continue;
                        auto& idx = m[j].base.node().indices;
                        if (std::find(idx.begin(), idx.end(), from) != idx.end()) {
                            m[j].base = rename_atom_indices(m[j].base, {{from, to}});
                            m.erase(m.begin() + static_cast<long>(i));
                            changed = true;
                            break;
                        }
                    }
                    if (changed) break;
                }
            } else if (n.kind == Kind::Field) {
                for (size_t a = 0; a + 1 < n.indices.size(); ++a) {
                    if (n.indices[a] == n.indices[a + 1]) {
                        auto idx = n.indices;
                        idx.erase(idx.begin() + static_cast<long>(a), idx.begin() + static_cast<long>(a) + 2);
                        m[i].base = field(n.name, idx, n.laplacians + 1);
                        changed = true;
                        break;
                    }
                }
            } else if (n.kind == Kind::Momentum && n.mkind == MomentumKind::Component) {
                for (size_t j = i + 1; j < m.size(); ++j) {
                    const Node& o = m[j].base.node();
                    if (o.kind == Kind::Momentum && o.mkind == MomentumKind::Component && o.indices[0] == n.indices[0]) {
                        m.erase(m.begin() + static_cast<long>(j));
                        m[i] = {momentum_sq(), Affine(1)};
                        changed = true;
                        break;
                    }
                }
            }
        }
    }
}

// ---- Gamma helpers ----

// Gamma at a rational point: returns q and half (true when the value is q*sqrt(pi)); nullopt at a pole.
inline std::optional<std::pair<Rational, bool>> gamma_rational(const Rational& x) {
    if (is_integer(x)) {
        if (x <= 0) return std::nullopt;
        return std::pair{Rational(factorial(to_ll(x) - 1)), false};
    }
    if (den(x) == 2) {
        long long m = to_ll(x - Rational(1, 2));
        if (m >= 0) return std::pair{Rational(factorial(2 * m)) / (rpow(4, m) * Rational(factorial(m))), true};
        long long k = -m;
        return std::pair{rpow(-4, k) * Rational(factorial(k)) / Rational(factorial(2 * k)), true};
    }
    return std::pair{Rational(0), false};  // marker: not closed form
}

inline NF linear_nf(const Affine& a) {
    NF r;
    RatFunc cs(Poly::linear(a.s, a.c));
    r.add({}, cs);
    if (a.d != 0) r.add({{sym_d(), Affine(1)}}, RatFunc(a.d));
    return r;
}

NF atomize(const NF& base, const Affine& e);

inline bool is_sum_atom(const Expr& b) { return b.kind() == Kind::Sum; }

inline NF normalize_mono(Mono m, RatFunc coef) {
    NF zero;
    if (coef.zero()) return zero;
    NF extra;  // expanded d-dependent rising factors
    bool has_extra = false;
    // integer powers of indexed atoms become repeated factors
    {
        Mono expanded;
        for (auto& f : m) {
            if (has_indices(f.base)) {
                if (!f.exp.is_integer() || f.exp.c < 0)
                    throw Error(ErrorCode::Domain, "indexed atom raised to a non-natural power");
                long long n = to_ll(f.exp.c);
                for (long long k = 0; k < n; ++k) expanded.push_back({f.base, Affine(1)});
            } else {
                expanded.push_back(f);
            }
        }
        m = std::move(expanded);
    }
    contract(m);
    canonical_dummies(m);

    for (int round = 0; round < 16; ++round) {
        bool changed = false;
        // merge equal index-free bases
        sort_mono(m);
        Mono merged;
        for (auto& f : m) {
            if (!merged.empty() && !has_indices(f.base) && compare(merged.back().base, f.base) == 0) {
                merged.back().exp = merged.back().exp + f.exp;
                changed = true;
            } else {
                merged.push_back(f);
            }
        }
        m.clear();
        for (auto& f : merged)
            if (!f.exp.is_zero()) m.push_back(f);

        Mono out;
        std::vector<std::pair<Affine, long long>> gammas;
        for (auto& f : m) {
            const Node& n = f.base.node();
            if (n.kind == Kind::Number) {
                const Rational& r = n.value;
                if (r == 1) {
                    changed = true;
                    continue;
                }
                if (r == 0) {
                    if (f.exp.is_const() && f.exp.c > 0) return zero;
                    throw Error(ErrorCode::Domain, "zero raised to a non-positive power");
                }
                if (f.exp.is_integer()) {
                    coef = coef * RatFunc(rpow(r, to_ll(f.exp.c)));
                    changed = true;
                    continue;
                }
                if (r < 0) throw Error(ErrorCode::Domain, "negative number raised to a non-integer power");
                auto fn = factor_integer(num(r));
                auto fd = factor_integer(den(r));
                bool prime = fd.empty() && fn.size() == 1 && fn[0].second == 1;
                if (prime) {
                    out.push_back(f);
                    continue;
                }
                changed = true;
                for (auto& [p, k] : fn) out.push_back({Expr(Rational(p)), f.exp * Rational(k)});
                for (auto& [p, k] : fd) out.push_back({Expr(Rational(p)), f.exp * Rational(-k)});
                continue;
            }
            if (n.kind == Kind::Constant && n.constant == ConstantId::I) {
                if (!f.exp.is_integer()) throw Error(ErrorCode::Domain, "non-integer power of i");
                long long k = ((to_ll(f.exp.c) % 4) + 4) % 4;
                if (k >= 2) coef = -coef;
                if (k % 2 == 1) out.push_back({f.base, Affine(1)});
                if (k != 1) changed = true;
                continue;
            }
            if (n.kind == Kind::Param && n.name == "s" && f.exp.is_integer()) {
                coef = coef * RatFunc::x().pow(to_ll(f.exp.c));
                changed = true;
                continue;
            }
            if (n.kind == Kind::Gamma && f.exp.is_integer()) {
                gammas.emplace_back(n.exponent, to_ll(f.exp.c));
                continue;
            }
            if (is_sum_atom(f.base) && f.exp.is_integer() && f.exp.c > 0) {
                // positive integer power of a sum: expand
                Mono rest;
                for (auto& g : m)
                    if (&g != &f) rest.push_back(g);
                NF b = to_nf(f.base);
                NF acc = constant_nf(RatFunc(1));
                for (long long k = 0; k < to_ll(f.exp.c); ++k) acc = mul(acc, b);
                return mul(normalize_mono(std::move(rest), coef), acc);
            }
            out.push_back(f);
        }
        // Gamma normalisation
        std::map<std::tuple<Rational, Rational, Rational>, long long> classes;
        for (auto& [a, k] : gammas) {
            if (a.is_const()) {
                auto g = gamma_rational(a.c);
                if (!g) {
                    if (k > 0) throw Error(ErrorCode::GammaPole, "Gamma(" + to_string(a.c) + ")");
                    return zero;
                }
                if (g->first == 0) {
                    // Gamma(c) = Gamma(frac c) * rising factors
                    Rational c0 = frac(a.c);
                    long long shift = to_ll(a.c - c0);
                    Rational ratio = 1;
                    for (long long j = 0; j < shift; ++j) ratio *= c0 + j;
                    for (long long j = 1; j <= -shift; ++j) ratio /= c0 - j;
                    coef = coef * RatFunc(rpow(ratio, k));
                    classes[{Rational(0), Rational(0), c0}] += k;
                    if (shift != 0) changed = true;
                    continue;
                }
                coef = coef * RatFunc(rpow(g->first, k));
                if (g->second) out.push_back({pi(), Affine(Rational(k, 2))});
                changed = true;
                continue;
            }
            Rational c0 = frac(a.c);
            long long shift = to_ll(a.c - c0);
            classes[{a.s, a.d, c0}] += k;
            if (shift == 0) continue;
            changed = true;
            Affine y(c0, a.s, a.d);
            // Gamma(y+shift)^k = Gamma(y)^k * prod (y+j)^(+-k)
            std::vector<std::pair<Affine, long long>> lin;
            for (long long j = 0; j < shift; ++j) lin.emplace_back(y + Affine(Rational(j)), k);
            for (long long j = 1; j <= -shift; ++j) lin.emplace_back(y - Affine(Rational(j)), -k);
            for (auto& [l, e] : lin) {
                if (l.d == 0) {
                    coef = coef * RatFunc(Poly::linear(l.s, l.c)).pow(e);
                } else {
                    NF part = atomize(linear_nf(l), Affine(Rational(e)));
                    if (part.terms.size() != 1) {
                        extra = has_extra ? mul(extra, part) : part;
                        has_extra = true;
                        continue;
                    }
                    auto& [pm, pc] = *part.terms.begin();
                    coef = coef * pc;
                    for (auto& pf : pm) out.push_back(pf);
                }
            }
        }
        for (auto& [key, k] : classes) {
            if (k == 0) continue;
            auto& [as, ad, c0] = key;
            out.push_back({gamma_fn(Affine(c0, as, ad)), Affine(Rational(k))});
        }
        m = std::move(out);
        if (!changed) break;
    }
    sort_mono(m);
    NF r;
    r.add(m, coef);
    if (has_extra) return mul(r, extra);
    return r;
}

inline NF mul_mono(const Mono& a, const Mono& b, const RatFunc& c) {
    Mono left = a, right = b;
    auto da = mono_dummies(left), db = mono_dummies(right);
    if (!db.empty()) {
        std::map<std::string, int> ca;
        mono_index_counts(left, ca);
        std::vector<std::pair<std::string, std::string>> map;
        for (auto& i : db)
            if (ca.count(i)) map.emplace_back(i, fresh_index());
        if (!map.empty()) right = rename_mono(right, map);
    }
    if (!da.empty()) {
        std::map<std::string, int> cb;
        mono_index_counts(right, cb);
        std::vector<std::pair<std::string, std::string>> map;
        for (auto& i : da)
            if (cb.count(i)) map.emplace_back(i, fresh_index());
        if (!map.empty()) left = rename_mono(left, map);
    }
    Mono m = std::move(left);
    m.insert(m.end(), right.begin(), right.end());
    return normalize_mono(std::move(m), c);
}

inline NF mul(const NF& a, const NF& b) {
    NF r;
    for (auto& [ma, ca] : a.terms)
        for (auto& [mb, cb] : b.terms) {
            RatFunc c = ca * cb;
            if (ma.empty() && mb.empty()) {
                r.add({}, c);
                continue;
            }
            r.add(mul_mono(ma, mb, c));
        }
    return r;
}

inline NF scale(const NF& a, const RatFunc& c) {
    NF r;
    if (c.zero()) return r;
    for (auto& [m, x] : a.terms) r.add(m, x * c);
    return r;
}

// Raise a multi-term (or awkward) base to a power as an atom, pulling out its content.
inline NF atomize(const NF& base, const Affine& e) {
    if (base.zero()) throw Error(ErrorCode::Domain, "power of zero");
    Rational g = 0;
    bool all_const = true;
    for (auto& [m, c] : base.terms) {
        if (!c.is_constant()) all_const = false;
        g = rational_gcd(g, c.numer().lead() / c.denom().lead());
    }
    const RatFunc& last = std::prev(base.terms.end())->second;
    Rational last_lead = last.numer().lead() / last.denom().lead();
    if (last_lead < 0 && e.is_integer()) g = -g;
    if (!all_const && base.terms.size() == 1) g = 1;
    NF scaled = scale(base, RatFunc(1 / g));
    Expr bt = to_tree(scaled);
    Mono m{{bt, e}};
    RatFunc coef(1);
    if (e.is_integer()) coef = RatFunc(rpow(g, to_ll(e.c)));
    else if (g != 1) m.push_back({Expr(g), e});
    return normalize_mono(std::move(m), coef);
}

inline NF power_nf(const NF& b, const Affine& e) {
    if (b.zero()) {
        if (e.is_const() && e.c > 0) return NF{};
        throw Error(ErrorCode::Domain, "zero raised to a non-positive power");
    }
    if (e.is_zero()) return constant_nf(RatFunc(1));
    if (b.terms.size() == 1) {
        auto& [m, c] = *b.terms.begin();
        bool indexed = std::any_of(m.begin(), m.end(), [](const Factor& f) { return has_indices(f.base); });
        if (e.is_integer()) {
            long long n = to_ll(e.c);
            if (indexed) {
                if (n < 0) throw Error(ErrorCode::Domain, "negative power of an indexed atom");
                NF acc = constant_nf(RatFunc(1));
                for (long long k = 0; k < n; ++k) acc = mul(acc, b);
                return acc;
            }
            Mono r;
            for (auto& f : m) r.push_back({f.base, f.exp * Rational(n)});
            return normalize_mono(std::move(r), c.pow(n));
        }
        if (indexed) throw Error(ErrorCode::Domain, "non-integer power of an indexed atom");
        if (!c.is_constant()) return atomize(b, e);
        Rational k = c.constant();
        if (k < 0) throw Error(ErrorCode::Domain, "negative base with non-integer exponent");
        Mono r;
        for (auto& f : m) {
            if (f.base.kind() == Kind::Constant && f.base.node().constant == ConstantId::I)
                throw Error(ErrorCode::Domain, "non-integer power of i");
            Affine ne;
            if (!Affine::mul(f.exp, e, ne)) return atomize(b, e);
            r.push_back({f.base, ne});
        }
        if (k != 1) r.push_back({Expr(k), e});
        return normalize_mono(std::move(r), RatFunc(1));
    }
    if (e.is_integer() && e.c > 0 && e.c <= 8) {
        NF acc = constant_nf(RatFunc(1));
        for (long long k = 0; k < to_ll(e.c); ++k) acc = mul(acc, b);
        return acc;
    }
    return atomize(b, e);
}

inline NF log_nf(const NF& a) {
    if (a.zero()) throw Error(ErrorCode::Domain, "log of zero");
    auto atom = [](const Expr& x) {
        NF r;
        r.add({{log_fn(x), Affine(1)}}, RatFunc(1));
        return r;
    };
    NF r;
    if (a.terms.size() == 1) {
        auto& [m, c] = *a.terms.begin();
        if (!c.is_constant()) return atom(to_tree(a));
        Rational k = c.constant();
        if (k < 0) throw Error(ErrorCode::Domain, "log of a negative coefficient");
        for (auto& f : m) {
            if (has_indices(f.base) || (f.base.kind() == Kind::Constant && f.base.node().constant == ConstantId::I))
                return atom(to_tree(a));
        }
        for (auto& [p, e] : factor_integer(num(k))) r.add({{log_fn(Expr(Rational(p))), Affine(1)}}, RatFunc(Rational(e)));
        for (auto& [p, e] : factor_integer(den(k))) r.add({{log_fn(Expr(Rational(p))), Affine(1)}}, RatFunc(Rational(-e)));
        for (auto& f : m) {
            NF coeff = linear_nf(f.exp);
            if (f.base.kind() == Kind::Constant && f.base.node().constant == ConstantId::E) {
                r.add(coeff);
                continue;
            }
            NF lg;
            if (f.base.kind() == Kind::Sum) lg = log_nf(to_nf(f.base));
            else lg.add({{log_fn(f.base), Affine(1)}}, RatFunc(1));
            r.add(mul(coeff, lg));
        }
        return r;
    }
    // multi-term argument: pull the positive content out
    Rational g = 0;
    bool all_const = true;
    for (auto& [m, c] : a.terms) {
        if (!c.is_constant()) all_const = false;
        g = rational_gcd(g, c.numer().lead() / c.denom().lead());
    }
    if (!all_const) g = 1;
    if (g != 1) {
        r.add(log_nf(constant_nf(RatFunc(g))));
        r.add(atom(to_tree(scale(a, RatFunc(1 / g)))));
        return r;
    }
    return atom(to_tree(a));
}

inline NF sin_nf(const NF& a) {
    if (a.zero()) return NF{};
    if (a.terms.size() == 1) {
        auto& [m, c] = *a.terms.begin();
        if (m.size() == 1 && m[0].base == pi() && m[0].exp == Affine(1) && c.is_constant()) {
            Rational k = c.constant() * 2;
            if (is_integer(k)) {
                long long q = ((to_ll(k) % 4) + 4) % 4;
                if (q == 1) return constant_nf(RatFunc(1));
                if (q == 3) return constant_nf(RatFunc(-1));
                return NF{};
            }
        }
    }
    NF r;
    r.add({{sin_fn(to_tree(a)), Affine(1)}}, RatFunc(1));
    return r;
}

inline NF to_nf(const Expr& e) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Number:
            return constant_nf(RatFunc(n.value));
        case Kind::Constant:
        case Kind::Field:
        case Kind::Momentum:
        case Kind::Delta:
        case Kind::Gamma:
            return normalize_mono({{e, Affine(1)}}, RatFunc(1));
        case Kind::Param:
            if (n.name == "s") return constant_nf(RatFunc::x());
            return normalize_mono({{e, Affine(1)}}, RatFunc(1));
        case Kind::Sum: {
            NF r;
            for (auto& c : n.children) r.add(to_nf(c));
            return r;
        }
        case Kind::Product: {
            NF r = constant_nf(RatFunc(1));
            for (auto& c : n.children) {
                r = mul(r, to_nf(c));
                if (r.zero()) break;
            }
            return r;
        }
        case Kind::Power: {
            const Expr& b = n.children[0];
            if (b.kind() == Kind::Product) {
                // (a b)^e = a^e b^e, taking the factors as positive
                NF r = constant_nf(RatFunc(1));
                for (auto& c : b.children()) r = mul(r, power_nf(to_nf(c), n.exponent));
                return r;
            }
            if (b.kind() == Kind::Gamma && n.exponent.is_integer()) return normalize_mono({{b, n.exponent}}, RatFunc(1));
            if (b.kind() == Kind::Power) {
                Affine ne;
                if (Affine::mul(b.node().exponent, n.exponent, ne)) return power_nf(to_nf(b.child(0)), ne);
            }
            return power_nf(to_nf(b), n.exponent);
        }
        case Kind::Log:
            return log_nf(to_nf(n.children[0]));
        case Kind::Sin:
            return sin_nf(to_nf(n.children[0]));
        case Kind::Func: {
            NF r;
            r.add({{func(n.name, to_tree(to_nf(n.children[0]))), Affine(1)}}, RatFunc(1));
            return r;
        }
    }
    return NF{};
}

// ---- back to trees ----

inline Expr poly_tree(const Poly& p) {
    std::vector<Expr> terms;
    for (int i = 0; i <= p.degree(); ++i) {
        if (p[i] == 0) continue;
        if (i == 0) terms.push_back(Expr(p[i]));
        else {
            Expr xs = i == 1 ? sym_s() : power(sym_s(), Affine(i));
            terms.push_back(p[i] == 1 ? xs : product({Expr(p[i]), xs}));
        }
    }
    return sum(std::move(terms));
}

inline void ratfunc_factors(const RatFunc& c, Rational& k, std::vector<std::pair<Expr, long long>>& out) {
    k = c.numer().lead();
    auto emit = [&](const Poly& p, int sign) {
        auto [roots, rest] = p.rational_roots();
        for (auto& [r, m] : roots) {
            Expr b = r == 0 ? sym_s() : sum({Expr(-r), sym_s()});
            out.emplace_back(b, sign * m);
        }
        if (rest.degree() >= 1) out.emplace_back(poly_tree(rest), sign);
    };
    emit(c.numer(), 1);
    emit(c.denom(), -1);
}

inline Expr term_tree(const Mono& m, const RatFunc& c) {
    Rational k;
    std::vector<std::pair<Expr, long long>> rf;
    ratfunc_factors(c, k, rf);
    std::vector<Expr> fs;
    for (auto& [b, e] : rf) fs.push_back(e == 1 ? b : power(b, Affine(e)));
    for (auto& f : m) fs.push_back(f.exp == Affine(1) ? f.base : power(f.base, f.exp));
    std::stable_sort(fs.begin(), fs.end(), [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
    if (k != 1 || fs.empty()) fs.insert(fs.begin(), Expr(k));
    return product(std::move(fs));
}

inline Expr to_tree(const NF& n) {
    std::vector<Expr> terms;
    for (auto& [m, c] : n.terms) {
        Expr t = term_tree(m, c);
        if (t.kind() == Kind::Sum)
            for (auto& ch : t.children()) terms.push_back(ch);
        else
            terms.push_back(t);
    }
    std::stable_sort(terms.begin(), terms.end(), [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
    return sum(std::move(terms));
}

inline Affine affine_of(const NF& n) {
    Affine a;
    for (auto& [m, c] : n.terms) {
        if (m.empty()) {
            if (c.denom().degree() != 0 || c.numer().degree() > 1)
                throw Error(ErrorCode::Domain, "exponent is not affine in s");
            a.c += c.numer()[0];
            a.s += c.numer()[1];
        } else if (m.size() == 1 && m[0].base == sym_d() && m[0].exp == Affine(1) && c.is_constant()) {
            a.d += c.constant();
        } else {
            throw Error(ErrorCode::Domain, "exponent is not affine in s and d");
        }
    }
    return a;
}

}  // namespace nf

inline Expr simplify(const Expr& e) { return nf::to_tree(nf::to_nf(e)); }

inline Affine affine_of(const Expr& e) { return nf::affine_of(nf::to_nf(e)); }

inline Expr affine_tree(const Affine& a) {
    std::vector<Expr> t;
    if (a.c != 0) t.push_back(Expr(a.c));
    if (a.s != 0) t.push_back(a.s == 1 ? sym_s() : product({Expr(a.s), sym_s()}));
    if (a.d != 0) t.push_back(a.d == 1 ? sym_d() : product({Expr(a.d), sym_d()}));
    return sum(std::move(t));
}

// Expr power with an Expr exponent that must reduce to an affine form.
inline Expr pow_expr(const Expr& b, const Expr& e) { return power(b, affine_of(e)); }

inline bool equal_canonical(const Expr& a, const Expr& b) { return simplify(a - b).is_zero(); }

}  // namespace symdet
