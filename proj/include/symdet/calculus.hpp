#pragma once

#include "symdet/canonical.hpp"

#include <functional>
#include <string>
#include <vector>

namespace symdet {

inline Expr with_children(const Expr& e, std::vector<Expr> ch) {
    Node n = e.node();
    n.children = std::move(ch);
    return detail::make(std::move(n));
}

namespace detail {

enum class DVar { X, P, Param, FieldValue };

struct DSpec {
    DVar var;
    std::string name;  // index for X/P, parameter or field name otherwise
};

inline Expr d_raw(const Expr& e, const DSpec& v);

inline Expr d_power(const Expr& e, const DSpec& v) {
    const Node& n = e.node();
    const Expr& b = n.children[0];
    const Affine& a = n.exponent;
    std::vector<Expr> terms;
    Expr db = d_raw(b, v);
    if (!db.is_zero()) terms.push_back(product({affine_tree(a), power(b, a - Affine(1)), db}));
    if (v.var == DVar::Param && ((v.name == "s" && a.s != 0) || (v.name == "d" && a.d != 0))) {
        Rational k = v.name == "s" ? a.s : a.d;
        terms.push_back(product({Expr(k), e, log_fn(b)}));
    }
    return sum(std::move(terms));
}

inline Expr d_raw(const Expr& e, const DSpec& v) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Number:
        case Kind::Constant:
        case Kind::Delta:
            return Expr(0);
        case Kind::Param:
            return Expr(v.var == DVar::Param && n.name == v.name ? 1 : 0);
        case Kind::Gamma:
            if (v.var == DVar::Param && ((v.name == "s" && n.exponent.s != 0) || (v.name == "d" && n.exponent.d != 0)))
                throw Error(ErrorCode::NoRule, "derivative of Gamma with respect to " + v.name);
            return Expr(0);
        case Kind::Field: {
            if (v.var == DVar::X) {
                auto idx = n.indices;
                idx.push_back(v.name);
                return field(n.name, idx, n.laplacians);
            }
            if (v.var == DVar::FieldValue && n.name == v.name && n.indices.empty() && n.laplacians == 0) return Expr(1);
            return Expr(0);
        }
        case Kind::Momentum:
            if (v.var != DVar::P) return Expr(0);
            if (n.mkind == MomentumKind::Square) return product({Expr(2), momentum(v.name)});
            return delta(n.indices[0], v.name);
        case Kind::Sum: {
            std::vector<Expr> t;
            for (auto& c : n.children) {
                Expr dc = d_raw(c, v);
                if (!dc.is_zero()) t.push_back(dc);
            }
            return sum(std::move(t));
        }
        case Kind::Product: {
            std::vector<Expr> t;
            for (size_t i = 0; i < n.children.size(); ++i) {
                Expr dc = d_raw(n.children[i], v);
                if (dc.is_zero()) continue;
                std::vector<Expr> f = n.children;
                f[i] = dc;
                t.push_back(product(std::move(f)));
            }
            return sum(std::move(t));
        }
        case Kind::Power:
            return d_power(e, v);
        case Kind::Log: {
            Expr db = d_raw(n.children[0], v);
            if (db.is_zero()) return Expr(0);
            return product({db, power(n.children[0], Affine(-1))});
        }
        case Kind::Sin:
        case Kind::Func: {
            Expr db = simplify(d_raw(n.children[0], v));
            if (db.is_zero()) return Expr(0);
            throw Error(ErrorCode::NoRule, "derivative of an opaque function");
        }
    }
    return Expr(0);
}

}  // namespace detail

// total x-derivative d/dx^mu
inline Expr diff_x(const Expr& e, const std::string& mu) { return simplify(detail::d_raw(e, {detail::DVar::X, mu})); }
// momentum derivative d/dp_mu
inline Expr diff_p(const Expr& e, const std::string& mu) { return simplify(detail::d_raw(e, {detail::DVar::P, mu})); }
inline Expr diff_param(const Expr& e, const std::string& name) { return simplify(detail::d_raw(e, {detail::DVar::Param, name})); }
// derivative with respect to the undifferentiated value of a field, derivatives of the field held fixed
inline Expr diff_field_value(const Expr& e, const std::string& name) {
    return simplify(detail::d_raw(e, {detail::DVar::FieldValue, name}));
}

inline Expr map_tree(const Expr& e, const std::function<std::optional<Expr>(const Expr&)>& f) {
    if (auto r = f(e)) return *r;
    if (e.children().empty()) return e;
    std::vector<Expr> ch;
    for (auto& c : e.children()) ch.push_back(map_tree(c, f));
    return with_children(e, std::move(ch));
}

// Replace a field by an expression, carrying derivatives and Laplacians through.
inline Expr substitute_field(const Expr& e, const std::string& name, const Expr& repl) {
    Expr r = map_tree(e, [&](const Expr& x) -> std::optional<Expr> {
        const Node& n = x.node();
        if (n.kind != Kind::Field || n.name != name) return std::nullopt;
        Expr out = repl;
        for (auto& i : n.indices) out = diff_x(out, i);
        for (int l = 0; l < n.laplacians; ++l) {
            std::string a = nf::fresh_index();
            out = diff_x(diff_x(out, a), a);
        }
        return out;
    });
    return simplify(r);
}

// Replace a parameter; s and d are also replaced inside exponents and Gamma arguments.
inline Expr substitute_param(const Expr& e, const std::string& name, const Expr& value) {
    const bool affine_var = name == "s" || name == "d";
    Expr r = map_tree(e, [&](const Expr& x) -> std::optional<Expr> {
        const Node& n = x.node();
        if (n.kind == Kind::Param && n.name == name) return value;
        if (affine_var && (n.kind == Kind::Power || n.kind == Kind::Gamma)) {
            const Affine& a = n.exponent;
            Rational k = name == "s" ? a.s : a.d;
            Expr base = n.kind == Kind::Power ? substitute_param(n.children[0], name, value) : Expr();
            Affine rest = a;
            (name == "s" ? rest.s : rest.d) = 0;
            Affine na = k == 0 ? rest : affine_of(sum({affine_tree(rest), product({Expr(k), value})}));
            if (n.kind == Kind::Power) return power(base, na);
            return gamma_fn(na);
        }
        return std::nullopt;
    });
    return simplify(r);
}

}  // namespace symdet
