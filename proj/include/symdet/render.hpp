#pragma once

#include "symdet/canonical.hpp"

#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

namespace symdet {

enum class Format { Latex, Text, Json };

namespace detail {

inline std::string latex_index(const std::string& i) {
    static const char* greek[] = {"\\alpha", "\\beta", "\\gamma", "\\delta", "\\kappa", "\\rho", "\\sigma", "\\tau"};
    if (!i.empty() && (i[0] == '#' || i[0] == '~' || i[0] == '%' || i[0] == '$')) {
        try {
            int k = std::stoi(i.substr(1));
            if (k >= 1 && k <= 8) return greek[k - 1];
        } catch (...) {
        }
        return "\\alpha_{" + i.substr(1) + "}";
    }
    static const std::vector<std::string> named = {"mu", "nu", "rho", "sigma", "alpha", "beta", "kappa", "tau", "lambda"};
    for (auto& g : named)
        if (i == g) return "\\" + g;
    return i;
}

inline std::string latex_name(const std::string& n) {
    if (n == "lambda") return "\\lambda";
    if (n == "hbar") return "\\hbar";
    if (n == "mu") return "\\mu";
    if (n == "eps") return "\\varepsilon";
    if (n == "lc") return "\\lambda_c";
    if (n == "gt") return "\\tilde{g}";
    if (n == "phi") return "\\phi";
    if (n == "psi") return "\\psi";
    return n;
}

inline std::string text_index(const std::string& i) { return i; }

struct Split {
    Rational coef = 1;
    std::vector<std::pair<Expr, Affine>> numer, denom;
};

inline Split split_product(const Expr& e) {
    Split s;
    std::vector<Expr> fs = e.kind() == Kind::Product ? e.children() : std::vector<Expr>{e};
    for (auto& f : fs) {
        if (f.is_number()) {
            s.coef *= f.value();
            continue;
        }
        if (f.kind() == Kind::Power) {
            const Affine& a = f.node().exponent;
            bool neg = a.is_const() ? a.c < 0 : (a.c <= 0 && a.s <= 0 && a.d <= 0);
            if (neg) s.denom.emplace_back(f.child(0), -a);
            else s.numer.emplace_back(f.child(0), a);
            continue;
        }
        s.numer.emplace_back(f, Affine(1));
    }
    return s;
}

inline bool needs_parens(const Expr& e) {
    Kind k = e.kind();
    if (k == Kind::Sum || k == Kind::Product) return true;
    if (k == Kind::Number) return !is_integer(e.value()) || e.value() < 0;
    if (k == Kind::Power) return true;
    return false;
}

std::string latex(const Expr& e);
std::string text(const Expr& e);

inline std::string affine_latex(const Affine& a) { return latex(affine_tree(a)); }
inline std::string affine_text(const Affine& a) {
    std::string t = text(affine_tree(a));
    bool simple = a.is_integer() && a.c >= 0;
    return simple ? t : "(" + t + ")";
}

inline std::string latex_factor(const Expr& b, const Affine& a) {
    std::string bs = latex(b);
    if (needs_parens(b) || (b.kind() == Kind::Field && (!b.node().indices.empty() || b.node().laplacians)))
        bs = "\\left(" + bs + "\\right)";
    if (a == Affine(1)) return bs;
    if (b.kind() == Kind::Momentum && b.node().mkind == MomentumKind::Square) bs = "(p^2)";
    return bs + "^{" + affine_latex(a) + "}";
}

inline std::string text_factor(const Expr& b, const Affine& a) {
    std::string bs = text(b);
    if (needs_parens(b)) bs = "(" + bs + ")";
    if (a == Affine(1)) return bs;
    return bs + "^" + affine_text(a);
}

inline std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string r;
    for (size_t i = 0; i < v.size(); ++i) r += (i ? sep : "") + v[i];
    return r;
}

// numbers at the end of a sum read better
inline std::vector<Expr> display_terms(const Expr& e) {
    std::vector<Expr> t = e.children(), nums, rest;
    for (auto& c : t) (c.is_number() ? nums : rest).push_back(c);
    rest.insert(rest.end(), nums.begin(), nums.end());
    return rest;
}

inline bool negative_term(const Expr& t) {
    if (t.is_number()) return t.value() < 0;
    if (t.kind() == Kind::Product && t.child(0).is_number()) return t.child(0).value() < 0;
    return false;
}

inline Expr negate_term(const Expr& t) {
    if (t.is_number()) return Expr(-t.value());
    auto ch = t.children();
    ch[0] = Expr(-ch[0].value());
    if (ch[0].is_one()) ch.erase(ch.begin());
    return product(ch);
}

inline std::string latex(const Expr& e) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Number: {
            const Rational& r = n.value;
            if (is_integer(r)) return num(r).str();
            std::string sign = r < 0 ? "-" : "";
            Integer a = num(r) < 0 ? Integer(-num(r)) : num(r);
            return sign + "\\frac{" + a.str() + "}{" + den(r).str() + "}";
        }
        case Kind::Constant:
            return n.constant == ConstantId::Pi ? "\\pi" : (n.constant == ConstantId::E ? "e" : "i");
        case Kind::Param:
            return latex_name(n.name);
        case Kind::Field: {
            std::string r;
            for (int l = 0; l < n.laplacians; ++l) r += "\\partial^2 ";
            if (!n.indices.empty()) {
                r += "\\partial_{";
                for (auto& i : n.indices) r += latex_index(i);
                r += "} ";
            }
            return r + latex_name(n.name);
        }
        case Kind::Momentum:
            if (n.mkind == MomentumKind::Square) return "p^2";
            return "p_{" + latex_index(n.indices[0]) + "}";
        case Kind::Delta:
            return "\\delta_{" + latex_index(n.indices[0]) + latex_index(n.indices[1]) + "}";
        case Kind::Sum: {
            std::string r;
            auto terms = display_terms(e);
            for (size_t i = 0; i < terms.size(); ++i) {
                if (i == 0) {
                    r += latex(terms[i]);
                    continue;
                }
                if (negative_term(terms[i])) r += " - " + latex(negate_term(terms[i]));
                else r += " + " + latex(terms[i]);
            }
            return r;
        }
        case Kind::Product:
        case Kind::Power: {
            Split s = split_product(e);
            std::vector<std::string> nu, de;
            for (auto& [b, a] : s.numer) nu.push_back(latex_factor(b, a));
            for (auto& [b, a] : s.denom) de.push_back(latex_factor(b, a));
            Rational c = s.coef;
            std::string sign = c < 0 ? "-" : "";
            if (c < 0) c = -c;
            if (num(c) != 1 || nu.empty()) nu.insert(nu.begin(), num(c).str());
            if (den(c) != 1) de.insert(de.begin(), den(c).str());
            std::string top = join(nu, " ");
            if (de.empty()) return sign + top;
            return sign + "\\frac{" + top + "}{" + join(de, " ") + "}";
        }
        case Kind::Gamma:
            return "\\Gamma\\left(" + affine_latex(n.exponent) + "\\right)";
        case Kind::Log:
            return "\\ln\\left(" + latex(n.children[0]) + "\\right)";
        case Kind::Sin:
            return "\\sin\\left(" + latex(n.children[0]) + "\\right)";
        case Kind::Func:
            return latex_name(n.name) + "\\left[" + latex(n.children[0]) + "\\right]";
    }
    return "";
}

inline std::string text(const Expr& e) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Number:
            return to_string(n.value);
        case Kind::Constant:
            return n.constant == ConstantId::Pi ? "pi" : (n.constant == ConstantId::E ? "e" : "i");
        case Kind::Param:
            return n.name;
        case Kind::Field: {
            std::string r = n.name;
            for (int l = 0; l < n.laplacians; ++l) r = "lap(" + r + ")";
            if (!n.indices.empty()) r += "_{" + join(n.indices, ",") + "}";
            return r;
        }
        case Kind::Momentum:
            if (n.mkind == MomentumKind::Square) return "p2";
            return "p_{" + n.indices[0] + "}";
        case Kind::Delta:
            return "delta_{" + n.indices[0] + "," + n.indices[1] + "}";
        case Kind::Sum: {
            std::string r;
            auto terms = display_terms(e);
            for (size_t i = 0; i < terms.size(); ++i) {
                if (i == 0) {
                    r += text(terms[i]);
                    continue;
                }
                if (negative_term(terms[i])) r += " - " + text(negate_term(terms[i]));
                else r += " + " + text(terms[i]);
            }
            return r;
        }
        case Kind::Product:
        case Kind::Power: {
            Split s = split_product(e);
            std::vector<std::string> nu, de;
            for (auto& [b, a] : s.numer) nu.push_back(text_factor(b, a));
            for (auto& [b, a] : s.denom) de.push_back(text_factor(b, a));
            Rational c = s.coef;
            std::string sign = c < 0 ? "-" : "";
            if (c < 0) c = -c;
            if (num(c) != 1 || nu.empty()) nu.insert(nu.begin(), num(c).str());
            if (den(c) != 1) de.insert(de.begin(), den(c).str());
            std::string top = join(nu, "*");
            if (de.empty()) return sign + top;
            std::string bot = join(de, "*");
            if (de.size() > 1) bot = "(" + bot + ")";
            return sign + top + "/" + bot;
        }
        case Kind::Gamma:
            return "gamma(" + text(affine_tree(n.exponent)) + ")";
        case Kind::Log:
            return "ln(" + text(n.children[0]) + ")";
        case Kind::Sin:
            return "sin(" + text(n.children[0]) + ")";
        case Kind::Func:
            return n.name + "[" + text(n.children[0]) + "]";
    }
    return "";
}

inline nlohmann::json affine_json(const Affine& a) {
    nlohmann::json j = {{"const", to_string(a.c)}, {"s_coeff", to_string(a.s)}};
    if (a.d != 0) j["d_coeff"] = to_string(a.d);
    return j;
}

inline Affine affine_from_json(const nlohmann::json& j) {
    Affine a(parse_rational(j.at("const").get<std::string>()), parse_rational(j.at("s_coeff").get<std::string>()));
    if (j.contains("d_coeff")) a.d = parse_rational(j.at("d_coeff").get<std::string>());
    return a;
}

}  // namespace detail

inline std::string to_latex(const Expr& e) { return detail::latex(e); }
inline std::string to_text(const Expr& e) { return detail::text(e); }

inline nlohmann::json to_json(const Expr& e) {
    const Node& n = e.node();
    nlohmann::json j;
    auto kids = [&] {
        nlohmann::json a = nlohmann::json::array();
        for (auto& c : n.children) a.push_back(to_json(c));
        return a;
    };
    switch (n.kind) {
        case Kind::Number:
            j = {{"node", "number"}, {"value", to_string(n.value)}};
            break;
        case Kind::Constant:
            j = {{"node", "constant"}, {"name", n.constant == ConstantId::Pi ? "pi" : (n.constant == ConstantId::E ? "e" : "i")}};
            break;
        case Kind::Param:
            j = {{"node", "param"}, {"name", n.name}};
            break;
        case Kind::Field:
            j = {{"node", "field"}, {"name", n.name}, {"indices", n.indices}, {"laplacians", n.laplacians}};
            break;
        case Kind::Momentum:
            if (n.mkind == MomentumKind::Square) j = {{"node", "momentum"}, {"kind", "square"}};
            else j = {{"node", "momentum"}, {"kind", "component"}, {"index", n.indices[0]}};
            break;
        case Kind::Delta:
            j = {{"node", "delta"}, {"indices", n.indices}};
            break;
        case Kind::Sum:
            j = {{"node", "sum"}, {"children", kids()}};
            break;
        case Kind::Product:
            j = {{"node", "product"}, {"children", kids()}};
            break;
        case Kind::Power:
            j = {{"node", "power"}, {"children", kids()}, {"exponent", detail::affine_json(n.exponent)}};
            break;
        case Kind::Gamma:
            j = {{"node", "gamma"}, {"argument", detail::affine_json(n.exponent)}};
            break;
        case Kind::Log:
            j = {{"node", "log"}, {"children", kids()}};
            break;
        case Kind::Sin:
            j = {{"node", "sin"}, {"children", kids()}};
            break;
        case Kind::Func:
            j = {{"node", "func"}, {"name", n.name}, {"children", kids()}};
            break;
    }
    return j;
}

inline Expr from_json(const nlohmann::json& j) {
    const std::string node = j.at("node").get<std::string>();
    auto kids = [&] {
        std::vector<Expr> v;
        for (auto& c : j.at("children")) v.push_back(from_json(c));
        return v;
    };
    auto build = [](Kind k, std::vector<Expr> ch) {
        Node n;
        n.kind = k;
        n.children = std::move(ch);
        return detail::make(std::move(n));
    };
    if (node == "number") return Expr(parse_rational(j.at("value").get<std::string>()));
    if (node == "constant") {
        auto n = j.at("name").get<std::string>();
        return n == "pi" ? pi() : (n == "e" ? euler_e() : imag_unit());
    }
    if (node == "param") return param(j.at("name").get<std::string>());
    if (node == "field")
        return field(j.at("name").get<std::string>(), j.at("indices").get<std::vector<std::string>>(), j.at("laplacians").get<int>());
    if (node == "momentum") {
        if (j.at("kind").get<std::string>() == "square") return momentum_sq();
        return momentum(j.at("index").get<std::string>());
    }
    if (node == "delta") {
        auto i = j.at("indices").get<std::vector<std::string>>();
        return delta(i.at(0), i.at(1));
    }
    if (node == "sum") return build(Kind::Sum, kids());
    if (node == "product") return build(Kind::Product, kids());
    if (node == "power") return power(kids().at(0), detail::affine_from_json(j.at("exponent")));
    if (node == "gamma") return gamma_fn(detail::affine_from_json(j.at("argument")));
    if (node == "log") return log_fn(kids().at(0));
    if (node == "sin") return sin_fn(kids().at(0));
    if (node == "func") return func(j.at("name").get<std::string>(), kids().at(0));
    throw Error(ErrorCode::Domain, "unknown json node " + node);
}

inline std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_text(e); }

inline std::string render(const Expr& e, Format f) {
    switch (f) {
        case Format::Latex: return to_latex(e);
        case Format::Text: return to_text(e);
        case Format::Json: return to_json(e).dump();
    }
    return "";
}

}  // namespace symdet
