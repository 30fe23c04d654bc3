#pragma once

#include "symdet/expr.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace symdet {

using cplx = std::complex<double>;

// Lanczos approximation, g = 7, valid on the whole complex plane through reflection.
inline cplx gamma_complex(cplx z) {
    static const double g = 7.0;
    static const double c[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                               771.32342877765313,   -176.61502916214059,   12.507343278686905,
                               -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    const double pi = 3.14159265358979323846;
    double rr = std::round(z.real());
    if (std::abs(z.imag()) < 1e-300 && rr <= 0 && std::abs(z.real() - rr) < 1e-13)
        throw Error(ErrorCode::GammaPole, "Gamma pole at " + std::to_string(z.real()));
    if (z.real() < 0.5) return pi / (std::sin(pi * z) * gamma_complex(1.0 - z));
    z -= 1.0;
    cplx x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (z + static_cast<double>(i));
    cplx t = z + g + 0.5;
    return std::sqrt(2 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

struct Bindings {
    std::map<std::string, cplx> params;
    // field value for a given name, concrete derivative indices and Laplacian count
    std::function<cplx(const std::string&, const std::vector<int>&, int)> field;
    std::array<cplx, 4> p{};
    bool has_p = false;
    int dim = 4;
    std::map<std::string, int> indices;
    std::map<std::string, std::function<cplx(cplx)>> funcs;
};

namespace detail {

inline int index_value(const Bindings& b, const std::string& i) {
    auto it = b.indices.find(i);
    if (it == b.indices.end()) throw Error(ErrorCode::UnboundSymbol, "index " + i);
    return it->second;
}

inline cplx eval_impl(const Expr& e, Bindings& b);

inline cplx eval_product(const std::vector<Expr>& ch, Bindings& b) {
    std::map<std::string, int> cnt;
    for (auto& c : ch)
        for (auto& i : free_indices(c)) ++cnt[i];
    std::vector<std::string> dummies;
    for (auto& [k, v] : cnt)
        if (v >= 2 && !b.indices.count(k)) dummies.push_back(k);
    if (dummies.empty()) {
        cplx r = 1;
        for (auto& c : ch) r *= eval_impl(c, b);
        return r;
    }
    cplx total = 0;
    std::vector<int> val(dummies.size(), 0);
    while (true) {
        for (size_t i = 0; i < dummies.size(); ++i) b.indices[dummies[i]] = val[i];
        cplx r = 1;
        for (auto& c : ch) r *= eval_impl(c, b);
        total += r;
        size_t k = 0;
        while (k < val.size() && ++val[k] == b.dim) val[k++] = 0;
        if (k == val.size()) break;
    }
    for (auto& d : dummies) b.indices.erase(d);
    return total;
}

inline cplx ipow(cplx x, long long n) {
    if (n < 0) return 1.0 / ipow(x, -n);
    cplx r = 1;
    while (n) {
        if (n & 1) r *= x;
        x *= x;
        n >>= 1;
    }
    return r;
}

inline cplx affine_value(const Affine& a, Bindings& b) {
    cplx v = to_double(a.c);
    if (a.s != 0) {
        auto it = b.params.find("s");
        if (it == b.params.end()) throw Error(ErrorCode::UnboundSymbol, "s");
        v += to_double(a.s) * it->second;
    }
    if (a.d != 0) {
        auto it = b.params.find("d");
        double dv = it == b.params.end() ? static_cast<double>(b.dim) : it->second.real();
        v += to_double(a.d) * dv;
    }
    return v;
}

inline cplx eval_impl(const Expr& e, Bindings& b) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Number:
            return to_double(n.value);
        case Kind::Constant:
            if (n.constant == ConstantId::Pi) return 3.14159265358979323846;
            if (n.constant == ConstantId::E) return 2.71828182845904523536;
            return cplx(0, 1);
        case Kind::Param: {
            auto it = b.params.find(n.name);
            if (it != b.params.end()) return it->second;
            if (n.name == "d") return static_cast<double>(b.dim);
            throw Error(ErrorCode::UnboundSymbol, n.name);
        }
        case Kind::Field: {
            if (!b.field) throw Error(ErrorCode::UnboundSymbol, n.name);
            std::vector<int> idx;
            std::vector<std::string> rep;
            for (size_t i = 0; i < n.indices.size(); ++i) {
                if (i + 1 < n.indices.size() && n.indices[i] == n.indices[i + 1] && !b.indices.count(n.indices[i])) {
                    rep.push_back(n.indices[i]);
                    ++i;
                }
            }
            if (!rep.empty()) {
                // a repeated index inside a single atom is a trace
                int lap = n.laplacians + static_cast<int>(rep.size());
                std::vector<std::string> rest;
                for (auto& i : n.indices)
                    if (std::find(rep.begin(), rep.end(), i) == rep.end()) rest.push_back(i);
                return eval_impl(field(n.name, rest, lap), b);
            }
            for (auto& i : n.indices) idx.push_back(index_value(b, i));
            return b.field(n.name, idx, n.laplacians);
        }
        case Kind::Momentum: {
            if (!b.has_p) throw Error(ErrorCode::UnboundSymbol, "p");
            if (n.mkind == MomentumKind::Square) {
                cplx r = 0;
                for (int a = 0; a < b.dim; ++a) r += b.p[a] * b.p[a];
                return r;
            }
            return b.p[index_value(b, n.indices[0])];
        }
        case Kind::Delta:
            if (n.indices[0] == n.indices[1] && !b.indices.count(n.indices[0])) return static_cast<double>(b.dim);
            return index_value(b, n.indices[0]) == index_value(b, n.indices[1]) ? 1.0 : 0.0;
        case Kind::Sum: {
            cplx r = 0;
            for (auto& c : n.children) r += eval_impl(c, b);
            return r;
        }
        case Kind::Product:
            return eval_product(n.children, b);
        case Kind::Power: {
            cplx ex = affine_value(n.exponent, b);
            if (n.exponent.is_integer() && free_indices(n.children[0]).size() == 1 && to_ll(n.exponent.c) == 2)
                return eval_product({n.children[0], n.children[0]}, b);
            cplx base = eval_impl(n.children[0], b);
            if (std::abs(ex.imag()) == 0 && ex.real() == std::round(ex.real()) && std::abs(ex.real()) < 64)
                return ipow(base, static_cast<long long>(ex.real()));
            return std::pow(base, ex);
        }
        case Kind::Gamma:
            return gamma_complex(affine_value(n.exponent, b));
        case Kind::Log:
            return std::log(eval_impl(n.children[0], b));
        case Kind::Sin:
            return std::sin(eval_impl(n.children[0], b));
        case Kind::Func: {
            auto it = b.funcs.find(n.name);
            if (it == b.funcs.end()) throw Error(ErrorCode::UnboundSymbol, n.name);
            return it->second(eval_impl(n.children[0], b));
        }
    }
    return 0;
}

}  // namespace detail

inline cplx eval_numeric(const Expr& e, Bindings b) { return detail::eval_impl(e, b); }

}  // namespace symdet
