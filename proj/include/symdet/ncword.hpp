#pragma once

// Noncommutative phase-space symbols: sums of words coeff * f1 f2 ... fn whose factors are
// gamma^a, pslash, resolvent powers (lambda + B)^n and complex powers B^e of a base B.

#include "symdet/calculus.hpp"
#include "symdet/clifford.hpp"
#include "symdet/render.hpp"

#include <map>
#include <string>
#include <vector>

namespace symdet {

// Base operator symbol. Boson: p^2 + V. Dirac: phi + i c pslash (+ i eps); c = 0 gives the scalar phi.
struct Base {
    enum class Type : std::uint8_t { Boson, Dirac };
    Type type = Type::Dirac;
    std::string field = "phi";
    Expr slash = Expr(1);
    bool eps = false;

    bool scalar() const { return type == Type::Boson || slash.is_zero(); }

    static Base boson(std::string f = "V") { return {Type::Boson, std::move(f), Expr(0), false}; }
    static Base dirac(std::string f = "phi") { return {Type::Dirac, std::move(f), Expr(1), false}; }
    static Base dirac_conj(std::string f = "phi") { return {Type::Dirac, std::move(f), Expr(-1), false}; }
    static Base scalar_part(std::string f = "phi") { return {Type::Dirac, std::move(f), Expr(0), false}; }
    // t A + (1 - t) A* = phi + (2t - 1) i pslash
    static Base feynman(std::string f = "phi") {
        return {Type::Dirac, std::move(f), simplify(Expr(2) * param("t") - Expr(1)), false};
    }
    Base shifted() const {
        Base b = *this;
        b.eps = true;
        return b;
    }
    Base unshifted() const {
        Base b = *this;
        b.eps = false;
        return b;
    }

    static int cmp(const Base& a, const Base& b) {
        if (a.type != b.type) return a.type < b.type ? -1 : 1;
        if (a.field != b.field) return a.field < b.field ? -1 : 1;
        if (int c = compare(a.slash, b.slash)) return -c;  // A before A*
        if (a.eps != b.eps) return a.eps ? 1 : -1;
        return 0;
    }
    friend bool operator==(const Base& a, const Base& b) { return cmp(a, b) == 0; }

    // the base as a commuting expression when pslash is replaced by one of its eigenvalues +-|p|
    Expr eigen_expr(int sign) const {
        std::vector<Expr> t{field_expr()};
        if (type == Type::Boson) t.push_back(momentum_sq());
        else if (!slash.is_zero()) t.push_back(product({Expr(sign), imag_unit(), slash, momentum_abs()}));
        if (eps) t.push_back(product({imag_unit(), param("eps")}));
        return sum(std::move(t));
    }
    Expr field_expr() const { return field_of(field); }
    static Expr field_of(const std::string& f) { return symdet::field(f); }

    std::string name(Format f) const {
        bool tex = f == Format::Latex;
        if (type == Type::Boson) return tex ? "(p^2+" + field + ")" : "(p2+" + field + ")";
        std::string r;
        if (slash.is_zero()) r = tex ? "\\" + field : field;
        else if (slash == Expr(1)) r = tex ? "\\tilde{A}" : "A";
        else if (slash == Expr(-1)) r = tex ? "\\tilde{A}^*" : "A*";
        else r = tex ? "K_t" : "K";
        if (eps) r += tex ? "_{\\varepsilon}" : "_eps";
        return r;
    }
};

struct Fac {
    enum class T : std::uint8_t { Res, Pow, Slash, Gamma };
    T t = T::Gamma;
    std::string index;  // Gamma
    Base base;          // Res, Pow
    Affine exp;         // Res: integer n of (lambda + base)^n; Pow: base^exp

    static Fac gamma(std::string i) {
        Fac f;
        f.t = T::Gamma;
        f.index = std::move(i);
        return f;
    }
    static Fac pslash() {
        Fac f;
        f.t = T::Slash;
        return f;
    }
    static Fac res(Base b, long long n) {
        Fac f;
        f.t = T::Res;
        f.base = std::move(b);
        f.exp = Affine(n);
        return f;
    }
    static Fac pw(Base b, Affine e) {
        Fac f;
        f.t = T::Pow;
        f.base = std::move(b);
        f.exp = std::move(e);
        return f;
    }
    long long n() const { return to_ll(exp.c); }
    bool commutes_with_gamma() const { return (t == T::Res || t == T::Pow) && base.scalar(); }

    static int cmp(const Fac& a, const Fac& b) {
        if (a.t != b.t) return a.t < b.t ? -1 : 1;
        if (a.t == T::Gamma) return a.index < b.index ? -1 : (a.index == b.index ? 0 : 1);
        if (a.t == T::Slash) return 0;
        if (int c = Base::cmp(a.base, b.base)) return c;
        return Affine::cmp(a.exp, b.exp);
    }
    friend bool operator==(const Fac& a, const Fac& b) { return cmp(a, b) == 0; }
};

using FacList = std::vector<Fac>;

inline int cmp_facs(const FacList& a, const FacList& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i)
        if (int c = Fac::cmp(a[i], b[i])) return c;
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

struct FacListLess {
    bool operator()(const FacList& a, const FacList& b) const { return cmp_facs(a, b) < 0; }
};

struct Word {
    Expr coeff = Expr(1);
    FacList f;
};

// Canonical symbol: word skeleton -> coefficient.
class Symbol {
public:
    Symbol() = default;
    Symbol(Expr scalar) { add(Word{std::move(scalar), {}}); }
    explicit Symbol(Word w) { add(std::move(w)); }

    static Symbol factor(Fac f, Expr coeff = Expr(1)) { return Symbol(Word{std::move(coeff), {std::move(f)}}); }

    void add(Word w);
    void add(const Symbol& o) {
        for (auto& [k, c] : o.terms_) add(Word{c, k});
    }
    const std::map<FacList, Expr, FacListLess>& terms() const { return terms_; }
    bool zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }

    std::vector<Word> words() const {
        std::vector<Word> r;
        for (auto& [k, c] : terms_) r.push_back({c, k});
        return r;
    }

    friend bool operator==(const Symbol& a, const Symbol& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        auto it = b.terms_.begin();
        for (auto& [k, c] : a.terms_) {
            if (cmp_facs(k, it->first) != 0 || c != it->second) return false;
            ++it;
        }
        return true;
    }

private:
    void insert(const FacList& k, const Expr& c) {
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            if (!c.is_zero()) terms_.emplace(k, c);
            return;
        }
        it->second = simplify(it->second + c);
        if (it->second.is_zero()) terms_.erase(it);
    }
    std::map<FacList, Expr, FacListLess> terms_;
};

namespace detail {

inline bool is_word_index(const std::string& i) { return !i.empty() && i[0] == '$'; }

inline std::vector<std::string> gamma_indices(const FacList& f) {
    std::vector<std::string> r;
    for (auto& x : f)
        if (x.t == Fac::T::Gamma) r.push_back(x.index);
    return r;
}

// Merge neighbours inside commuting runs; scalar factors float to the front.
inline FacList merge_runs(const FacList& in, Expr& coeff) {
    FacList scalars, rest;
    for (auto& f : in) (f.commutes_with_gamma() ? scalars : rest).push_back(f);
    FacList out;
    auto flush = [&](FacList& run) {
        std::stable_sort(run.begin(), run.end(), [](const Fac& a, const Fac& b) { return Fac::cmp(a, b) < 0; });
        FacList merged;
        int slashes = 0;
        for (auto& f : run) {
            if (f.t == Fac::T::Slash) {
                ++slashes;
                continue;
            }
            if (!merged.empty() && merged.back().t == f.t && merged.back().base == f.base) {
                merged.back().exp = merged.back().exp + f.exp;
                if (merged.back().exp.is_zero()) merged.pop_back();
                continue;
            }
            merged.push_back(f);
        }
        if (slashes / 2) coeff = coeff * power(momentum_sq(), Affine(slashes / 2));
        if (slashes % 2) merged.push_back(Fac::pslash());
        out.insert(out.end(), merged.begin(), merged.end());
        run.clear();
    };
    flush(scalars);
    FacList run;
    for (auto& f : rest) {
        if (f.t == Fac::T::Gamma) {
            flush(run);
            // gamma^a gamma^a = d
            if (!out.empty() && out.back().t == Fac::T::Gamma && out.back().index == f.index) {
                out.pop_back();
                coeff = coeff * sym_d();
                continue;
            }
            out.push_back(f);
        } else {
            run.push_back(f);
        }
    }
    flush(run);
    return out;
}

}  // namespace detail

// Split the coefficient into monomials, absorb deltas and p_a that touch gamma indices,
// rename gamma indices $1, $2, ... by first appearance and file each piece under its skeleton.
inline void Symbol::add(Word w) {
    Expr coeff = simplify(w.coeff);
    if (coeff.is_zero()) return;
    nf::NF n = nf::to_nf(coeff);
    for (auto& [mono, rc] : n.terms) {
        FacList facs = w.f;
        nf::Mono m = mono;
        Expr extra = Expr(1);
        bool changed = true;
        while (changed) {
            changed = false;
            auto gi = detail::gamma_indices(facs);
            for (size_t k = 0; k < m.size() && !changed; ++k) {
                const Node& a = m[k].base.node();
                if (a.kind == Kind::Delta) {
                    for (int side = 0; side < 2 && !changed; ++side) {
                        const std::string& from = a.indices[side];
                        const std::string& to = a.indices[1 - side];
                        if (std::find(gi.begin(), gi.end(), from) == gi.end()) continue;
                        for (auto& f : facs)
                            if (f.t == Fac::T::Gamma && f.index == from) f.index = to;
                        m.erase(m.begin() + static_cast<long>(k));
                        changed = true;
                    }
                } else if (a.kind == Kind::Momentum && a.mkind == MomentumKind::Component) {
                    const std::string& i = a.indices[0];
                    auto pos = std::find_if(facs.begin(), facs.end(), [&](const Fac& f) { return f.t == Fac::T::Gamma && f.index == i; });
                    if (pos != facs.end()) {
                        *pos = Fac::pslash();
                        m.erase(m.begin() + static_cast<long>(k));
                        changed = true;
                    }
                }
            }
        }
        Expr c = nf::term_tree(m, rc);
        // complex powers of the bare scalar field are ordinary coefficients
        FacList kept;
        for (auto& f : facs) {
            if (f.t == Fac::T::Pow && f.base.type == Base::Type::Dirac && f.base.slash.is_zero() && !f.base.eps)
                c = c * power(f.base.field_expr(), f.exp);
            else
                kept.push_back(f);
        }
        facs = std::move(kept);
        c = simplify(c);
        facs = detail::merge_runs(facs, c);
        // contracted gamma pairs inside the word keep their names; rename all gamma indices
        std::vector<std::pair<std::string, std::string>> map;
        int k = 0;
        for (auto& f : facs)
            if (f.t == Fac::T::Gamma) {
                bool seen = std::any_of(map.begin(), map.end(), [&](auto& p) { return p.first == f.index; });
                if (!seen) map.emplace_back(f.index, "$" + std::to_string(++k));
            }
        // two-step rename so that existing $-names cannot collide
        std::vector<std::pair<std::string, std::string>> tmp, fin;
        for (auto& [from, to] : map) {
            std::string mid = "&" + to.substr(1);
            tmp.emplace_back(from, mid);
            fin.emplace_back(mid, to);
        }
        for (auto& f : facs)
            if (f.t == Fac::T::Gamma) {
                for (auto& [from, to] : tmp)
                    if (f.index == from) {
                        f.index = to;
                        break;
                    }
                for (auto& [from, to] : fin)
                    if (f.index == from) {
                        f.index = to;
                        break;
                    }
            }
        auto ren = [&](const Expr& e, const std::vector<std::pair<std::string, std::string>>& mp) {
            return map_tree(e, [&](const Expr& x) -> std::optional<Expr> {
                if (has_indices(x)) return rename_atom_indices(x, mp);
                return std::nullopt;
            });
        };
        c = simplify(ren(ren(c, tmp), fin));
        insert(facs, c);
    }
}

// ---- arithmetic ----

inline Symbol operator+(const Symbol& a, const Symbol& b) {
    Symbol r = a;
    r.add(b);
    return r;
}

inline Symbol scale(const Symbol& a, const Expr& c) {
    Symbol r;
    for (auto& w : a.words()) r.add(Word{c * w.coeff, w.f});
    return r;
}

inline Symbol operator-(const Symbol& a) { return scale(a, Expr(-1)); }
inline Symbol operator-(const Symbol& a, const Symbol& b) { return a + (-b); }

namespace detail {

// give the $-indices of a word fresh names so that two words can be concatenated;
// other gamma indices are shared labels and are kept
inline Word freshen(const Word& w) {
    std::vector<std::pair<std::string, std::string>> map;
    for (auto& f : w.f)
        if (f.t == Fac::T::Gamma && detail::is_word_index(f.index) &&
            std::none_of(map.begin(), map.end(), [&](auto& p) { return p.first == f.index; }))
            map.emplace_back(f.index, nf::fresh_index());
    Word r = w;
    for (auto& f : r.f)
        if (f.t == Fac::T::Gamma)
            for (auto& [a, b] : map)
                if (f.index == a) f.index = b;
    r.coeff = map_tree(w.coeff, [&](const Expr& x) -> std::optional<Expr> {
        if (has_indices(x)) return rename_atom_indices(x, map);
        return std::nullopt;
    });
    return r;
}

}  // namespace detail

inline Symbol operator*(const Symbol& a, const Symbol& b) {
    Symbol r;
    for (auto& wa : a.words())
        for (auto& wb0 : b.words()) {
            Word x = detail::freshen(wa), y = detail::freshen(wb0);
            Word w{x.coeff * y.coeff, x.f};
            w.f.insert(w.f.end(), y.f.begin(), y.f.end());
            r.add(std::move(w));
        }
    return r;
}

// ---- rendering ----

inline std::string render_fac(const Fac& f, Format fmt) {
    bool tex = fmt == Format::Latex;
    switch (f.t) {
        case Fac::T::Gamma:
            return tex ? "\\gamma^{" + detail::latex_index(f.index) + "}" : "g^" + f.index;
        case Fac::T::Slash:
            return tex ? "\\slashed{p}" : "pslash";
        case Fac::T::Res: {
            std::string b = tex ? "(\\lambda+" + f.base.name(fmt) + ")" : "(lambda+" + f.base.name(fmt) + ")";
            return tex ? b + "^{" + std::to_string(f.n()) + "}" : b + "^" + std::to_string(f.n());
        }
        case Fac::T::Pow:
            return tex ? f.base.name(fmt) + "^{" + detail::affine_latex(f.exp) + "}" : f.base.name(fmt) + "^" + detail::affine_text(f.exp);
    }
    return "";
}

inline std::string render(const Symbol& s, Format fmt) {
    if (s.zero()) return "0";
    if (fmt == Format::Json) {
        nlohmann::json a = nlohmann::json::array();
        for (auto& w : s.words()) {
            nlohmann::json fs = nlohmann::json::array();
            for (auto& f : w.f) fs.push_back(render_fac(f, Format::Text));
            a.push_back({{"coeff", to_json(w.coeff)}, {"factors", fs}});
        }
        return a.dump();
    }
    std::string r;
    bool first = true;
    for (auto& w : s.words()) {
        std::string c = fmt == Format::Latex ? to_latex(w.coeff) : to_text(w.coeff);
        if (w.coeff.kind() == Kind::Sum) c = fmt == Format::Latex ? "\\left(" + c + "\\right)" : "(" + c + ")";
        std::string body;
        for (auto& f : w.f) body += (fmt == Format::Latex ? " " : "*") + render_fac(f, fmt);
        if (!first) r += fmt == Format::Latex ? " + " : " + ";
        r += c + body;
        first = false;
    }
    return r;
}

inline std::ostream& operator<<(std::ostream& os, const Symbol& s) { return os << render(s, Format::Text); }

}  // namespace symdet
