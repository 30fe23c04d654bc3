#pragma once

#include "symdet/errors.hpp"
#include "symdet/rational.hpp"

#include <algorithm>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace symdet {

// c + s*S + d*D, the only shape allowed for exponents and Gamma arguments.
struct Affine {
    Rational c = 0, s = 0, d = 0;

    Affine() = default;
    Affine(Rational c_) : c(std::move(c_)) {}
    Affine(long long c_) : c(c_) {}
    Affine(Rational c_, Rational s_, Rational d_ = 0) : c(std::move(c_)), s(std::move(s_)), d(std::move(d_)) {}

    bool is_const() const { return s == 0 && d == 0; }
    bool is_integer() const { return is_const() && symdet::is_integer(c); }
    bool is_zero() const { return c == 0 && s == 0 && d == 0; }

    friend Affine operator+(const Affine& a, const Affine& b) { return {a.c + b.c, a.s + b.s, a.d + b.d}; }
    friend Affine operator-(const Affine& a, const Affine& b) { return {a.c - b.c, a.s - b.s, a.d - b.d}; }
    friend Affine operator-(const Affine& a) { return {-a.c, -a.s, -a.d}; }
    friend Affine operator*(const Affine& a, const Rational& r) { return {a.c * r, a.s * r, a.d * r}; }
    friend bool operator==(const Affine& a, const Affine& b) { return a.c == b.c && a.s == b.s && a.d == b.d; }
    friend bool operator!=(const Affine& a, const Affine& b) { return !(a == b); }

    static int cmp(const Affine& a, const Affine& b) {
        if (a.s != b.s) return a.s < b.s ? -1 : 1;
        if (a.d != b.d) return a.d < b.d ? -1 : 1;
        if (a.c != b.c) return a.c < b.c ? -1 : 1;
        return 0;
    }

    // product is affine only when one side is constant
    static bool mul(const Affine& a, const Affine& b, Affine& out) {
        if (a.is_const()) {
            out = b * a.c;
            return true;
        }
        if (b.is_const()) {
            out = a * b.c;
            return true;
        }
        return false;
    }
};

enum class Kind : std::uint8_t { Number, Constant, Param, Field, Momentum, Delta, Func, Log, Sin, Gamma, Power, Product, Sum };
enum class ConstantId : std::uint8_t { Pi, E, I };
enum class MomentumKind : std::uint8_t { Component, Square };

class Expr;

struct Node {
    Kind kind = Kind::Number;
    Rational value;
    ConstantId constant = ConstantId::Pi;
    MomentumKind mkind = MomentumKind::Component;
    std::string name;
    std::vector<std::string> indices;
    int laplacians = 0;
    Affine exponent;  // Power exponent, Gamma argument
    std::vector<Expr> children;
};

class Expr {
public:
    Expr();
    Expr(long long v);
    Expr(int v) : Expr(static_cast<long long>(v)) {}
    Expr(Rational v);
    explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

    const Node& node() const { return *n_; }
    Kind kind() const { return n_->kind; }
    const std::vector<Expr>& children() const { return n_->children; }
    const Expr& child(size_t i) const { return n_->children.at(i); }
    bool is_number() const { return kind() == Kind::Number; }
    bool is_zero() const { return is_number() && n_->value == 0; }
    bool is_one() const { return is_number() && n_->value == 1; }
    const Rational& value() const { return n_->value; }
    const void* id() const { return n_.get(); }

private:
    std::shared_ptr<const Node> n_;
};

namespace detail {
inline Expr make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }
}  // namespace detail

inline Expr::Expr() : Expr(Rational(0)) {}
inline Expr::Expr(long long v) : Expr(Rational(v)) {}
inline Expr::Expr(Rational v) {
    Node n;
    n.kind = Kind::Number;
    n.value = std::move(v);
    n_ = std::make_shared<const Node>(std::move(n));
}

// ---- constructors ----

inline Expr number(const Rational& r) { return Expr(r); }

inline Expr constant(ConstantId c) {
    Node n;
    n.kind = Kind::Constant;
    n.constant = c;
    return detail::make(std::move(n));
}
inline Expr pi() { return constant(ConstantId::Pi); }
inline Expr euler_e() { return constant(ConstantId::E); }
inline Expr imag_unit() { return constant(ConstantId::I); }

inline Expr param(const std::string& name) {
    Node n;
    n.kind = Kind::Param;
    n.name = name;
    return detail::make(std::move(n));
}
inline Expr sym_s() { return param("s"); }
inline Expr sym_d() { return param("d"); }

inline Expr field(const std::string& name, std::vector<std::string> indices = {}, int laplacians = 0) {
    Node n;
    n.kind = Kind::Field;
    n.name = name;
    std::sort(indices.begin(), indices.end());
    n.indices = std::move(indices);
    n.laplacians = laplacians;
    return detail::make(std::move(n));
}

inline Expr momentum(const std::string& index) {
    Node n;
    n.kind = Kind::Momentum;
    n.mkind = MomentumKind::Component;
    n.indices = {index};
    return detail::make(std::move(n));
}
inline Expr momentum_sq() {
    Node n;
    n.kind = Kind::Momentum;
    n.mkind = MomentumKind::Square;
    return detail::make(std::move(n));
}

inline Expr delta(std::string a, std::string b) {
    Node n;
    n.kind = Kind::Delta;
    if (b < a) std::swap(a, b);
    n.indices = {std::move(a), std::move(b)};
    return detail::make(std::move(n));
}

inline Expr sum(std::vector<Expr> terms) {
    if (terms.empty()) return Expr(0);
    if (terms.size() == 1) return terms.front();
    Node n;
    n.kind = Kind::Sum;
    n.children = std::move(terms);
    return detail::make(std::move(n));
}

inline Expr product(std::vector<Expr> factors) {
    if (factors.empty()) return Expr(1);
    if (factors.size() == 1) return factors.front();
    Node n;
    n.kind = Kind::Product;
    n.children = std::move(factors);
    return detail::make(std::move(n));
}

inline Expr power(Expr base, Affine e) {
    Node n;
    n.kind = Kind::Power;
    n.exponent = std::move(e);
    n.children = {std::move(base)};
    return detail::make(std::move(n));
}

inline Expr gamma_fn(Affine arg) {
    Node n;
    n.kind = Kind::Gamma;
    n.exponent = std::move(arg);
    return detail::make(std::move(n));
}

inline Expr log_fn(Expr arg) {
    Node n;
    n.kind = Kind::Log;
    n.children = {std::move(arg)};
    return detail::make(std::move(n));
}

inline Expr sin_fn(Expr arg) {
    Node n;
    n.kind = Kind::Sin;
    n.children = {std::move(arg)};
    return detail::make(std::move(n));
}

inline Expr func(const std::string& name, Expr arg) {
    Node n;
    n.kind = Kind::Func;
    n.name = name;
    n.children = {std::move(arg)};
    return detail::make(std::move(n));
}

// |p| as (p^2)^(1/2)
inline Expr momentum_abs() { return power(momentum_sq(), Affine(Rational(1, 2))); }

// ---- raw arithmetic (no simplification) ----

inline Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
inline Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
inline Expr operator-(const Expr& a) { return product({Expr(-1), a}); }
inline Expr operator-(const Expr& a, const Expr& b) { return sum({a, -b}); }
inline Expr operator/(const Expr& a, const Expr& b) { return product({a, power(b, Affine(-1))}); }
inline Expr pow(const Expr& b, Affine e) { return power(b, std::move(e)); }

// ---- ordering ----

inline int kind_rank(Kind k) { return static_cast<int>(k); }

inline int compare(const Expr& a, const Expr& b);

inline int compare_vec(const std::vector<Expr>& a, const std::vector<Expr>& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i)
        if (int c = compare(a[i], b[i])) return c;
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

// numbers < constants < parameters < fields < momenta < deltas < composites
inline int compare(const Expr& a, const Expr& b) {
    if (a.id() == b.id()) return 0;
    const Node& x = a.node();
    const Node& y = b.node();
    if (x.kind != y.kind) return kind_rank(x.kind) < kind_rank(y.kind) ? -1 : 1;
    switch (x.kind) {
        case Kind::Number:
            if (x.value == y.value) return 0;
            return x.value < y.value ? -1 : 1;
        case Kind::Constant:
            if (x.constant == y.constant) return 0;
            return x.constant < y.constant ? -1 : 1;
        case Kind::Param:
            return x.name.compare(y.name) < 0 ? -1 : (x.name == y.name ? 0 : 1);
        case Kind::Field:
            if (x.name != y.name) return x.name < y.name ? -1 : 1;
            if (x.indices.size() != y.indices.size()) return x.indices.size() < y.indices.size() ? -1 : 1;
            if (x.laplacians != y.laplacians) return x.laplacians < y.laplacians ? -1 : 1;
            if (x.indices != y.indices) return x.indices < y.indices ? -1 : 1;
            return 0;
        case Kind::Momentum:
            if (x.mkind != y.mkind) return x.mkind < y.mkind ? -1 : 1;
            if (x.indices != y.indices) return x.indices < y.indices ? -1 : 1;
            return 0;
        case Kind::Delta:
            if (x.indices != y.indices) return x.indices < y.indices ? -1 : 1;
            return 0;
        case Kind::Gamma:
            return Affine::cmp(x.exponent, y.exponent);
        case Kind::Power:
            if (int c = compare(x.children[0], y.children[0])) return c;
            return Affine::cmp(x.exponent, y.exponent);
        case Kind::Func:
            if (x.name != y.name) return x.name < y.name ? -1 : 1;
            return compare_vec(x.children, y.children);
        default:
            return compare_vec(x.children, y.children);
    }
}

inline bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
inline bool operator!=(const Expr& a, const Expr& b) { return compare(a, b) != 0; }
inline bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

// ---- index helpers ----

inline bool has_indices(const Expr& e) {
    Kind k = e.kind();
    if (k == Kind::Field) return !e.node().indices.empty();
    if (k == Kind::Momentum) return e.node().mkind == MomentumKind::Component;
    return k == Kind::Delta;
}

inline Expr rename_atom_indices(const Expr& e, const std::vector<std::pair<std::string, std::string>>& map) {
    auto ren = [&](const std::string& s) {
        for (auto& [from, to] : map)
            if (s == from) return to;
        return s;
    };
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Field: {
            std::vector<std::string> idx;
            for (auto& i : n.indices) idx.push_back(ren(i));
            return field(n.name, std::move(idx), n.laplacians);
        }
        case Kind::Momentum:
            if (n.mkind == MomentumKind::Square) return e;
            return momentum(ren(n.indices[0]));
        case Kind::Delta:
            return delta(ren(n.indices[0]), ren(n.indices[1]));
        default:
            return e;
    }
}

// Collect every index occurrence (free and dummy) in a tree, depth first.
inline void collect_indices(const Expr& e, std::vector<std::string>& out) {
    if (has_indices(e)) {
        for (auto& i : e.node().indices) out.push_back(i);
        return;
    }
    for (auto& c : e.children()) collect_indices(c, out);
}

// Free indices of a tree under the Einstein convention: in a product an index seen twice is
// summed; sums are assumed homogeneous so the first term decides.
inline std::vector<std::string> free_indices(const Expr& e) {
    const Node& n = e.node();
    if (has_indices(e)) {
        std::vector<std::string> out;
        for (auto& i : n.indices) {
            auto it = std::find(out.begin(), out.end(), i);
            if (it == out.end()) out.push_back(i);
            else out.erase(it);
        }
        return out;
    }
    if (n.kind == Kind::Sum) {
        for (auto& c : n.children) {
            auto f = free_indices(c);
            if (!f.empty()) return f;
        }
        return {};
    }
    if (n.kind == Kind::Product) {
        std::vector<std::string> out;
        for (auto& c : n.children)
            for (auto& i : free_indices(c)) {
                auto it = std::find(out.begin(), out.end(), i);
                if (it == out.end()) out.push_back(i);
                else out.erase(it);
            }
        std::sort(out.begin(), out.end());
        return out;
    }
    if (n.kind == Kind::Power && n.exponent.is_integer()) {
        long long k = to_ll(n.exponent.c);
        if (k % 2 == 0) return {};
        return free_indices(n.children[0]);
    }
    return {};
}

inline bool depends_on_param(const Expr& e, const std::string& name) {
    const Node& n = e.node();
    if (n.kind == Kind::Param) return n.name == name;
    if ((n.kind == Kind::Power || n.kind == Kind::Gamma) && ((name == "s" && n.exponent.s != 0) || (name == "d" && n.exponent.d != 0)))
        return true;
    for (auto& c : n.children)
        if (depends_on_param(c, name)) return true;
    return false;
}

inline bool contains_field(const Expr& e, const std::string& name) {
    const Node& n = e.node();
    if (n.kind == Kind::Field) return n.name == name;
    for (auto& c : n.children)
        if (contains_field(c, name)) return true;
    return false;
}

inline bool contains_kind(const Expr& e, Kind k) {
    if (e.kind() == k) return true;
    for (auto& c : e.children())
        if (contains_kind(c, k)) return true;
    return false;
}

}  // namespace symdet
