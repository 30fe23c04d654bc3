#pragma once

// Small infix grammar for command-line input:
//   lc*phi^2/2, m^2 + lc*phi^2/2, V_{mu,nu}, lap(V), p_{mu}, p2, ln(x), gamma(s+1), Vpot[phi^2/gt^2]

#include "symdet/canonical.hpp"

#include <cctype>
#include <set>
#include <string>

namespace symdet {

class Parser {
public:
    explicit Parser(std::string src, std::set<std::string> fields = {"V", "phi"})
        : s_(std::move(src)), fields_(std::move(fields)) {}

    Expr parse() {
        Expr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& m) const {
        throw Error(ErrorCode::Domain, "parse error at " + std::to_string(pos_) + ": " + m);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    Expr expr() {
        std::vector<Expr> t{term()};
        while (true) {
            if (eat('+')) t.push_back(term());
            else if (eat('-')) t.push_back(-term());
            else break;
        }
        return sum(std::move(t));
    }
    Expr term() {
        std::vector<Expr> f{unary()};
        while (true) {
            if (eat('*')) f.push_back(unary());
            else if (eat('/')) f.push_back(power(unary(), Affine(-1)));
            else break;
        }
        return product(std::move(f));
    }
    Expr unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return pow_level();
    }
    Expr pow_level() {
        Expr b = atom();
        if (eat('^')) {
            Expr e = unary();
            return power(b, affine_of(e));
        }
        return b;
    }
    std::string ident() {
        skip();
        size_t st = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '#' || s_[pos_] == '~'))
            ++pos_;
        if (st == pos_) fail("expected identifier");
        return s_.substr(st, pos_ - st);
    }
    std::vector<std::string> index_list() {
        expect('{');
        std::vector<std::string> v{ident()};
        while (eat(',')) v.push_back(ident());
        expect('}');
        return v;
    }
    Expr atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t st = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return Expr(Rational(Integer(s_.substr(st, pos_ - st))));
        }
        if (eat('(')) {
            Expr e = expr();
            expect(')');
            return e;
        }
        std::string id = ident();
        if (id == "lap") {
            expect('(');
            Expr inner = atom();
            expect(')');
            if (inner.kind() != Kind::Field) fail("lap() takes a field");
            const Node& n = inner.node();
            Expr f = field(n.name, n.indices, n.laplacians + 1);
            return maybe_indices(f);
        }
        if (id == "ln" || id == "log" || id == "sin" || id == "gamma" || id == "sqrt" || id == "exp") {
            expect('(');
            Expr a = expr();
            expect(')');
            if (id == "sin") return sin_fn(a);
            if (id == "gamma") return gamma_fn(affine_of(a));
            if (id == "sqrt") return power(a, Affine(Rational(1, 2)));
            if (id == "exp") return power(euler_e(), affine_of(a));
            return log_fn(a);
        }
        if (eat('[')) {
            Expr a = expr();
            expect(']');
            return func(id, a);
        }
        if (id == "pi") return pi();
        if (id == "e") return euler_e();
        if (id == "i") return imag_unit();
        if (id == "p2") return momentum_sq();
        if (id == "p" && peek_index()) {
            auto idx = index_list_after_underscore();
            if (idx.size() != 1) fail("p takes one index");
            return momentum(idx[0]);
        }
        if (id == "delta" && peek_index()) {
            auto idx = index_list_after_underscore();
            if (idx.size() != 2) fail("delta takes two indices");
            return delta(idx[0], idx[1]);
        }
        if (fields_.count(id)) return maybe_indices(field(id));
        return param(id);
    }
    bool peek_index() {
        skip();
        return pos_ + 1 < s_.size() && s_[pos_] == '_' && s_[pos_ + 1] == '{';
    }
    std::vector<std::string> index_list_after_underscore() {
        expect('_');
        return index_list();
    }
    Expr maybe_indices(const Expr& f) {
        if (!peek_index()) return f;
        auto idx = index_list_after_underscore();
        const Node& n = f.node();
        auto all = n.indices;
        all.insert(all.end(), idx.begin(), idx.end());
        return field(n.name, all, n.laplacians);
    }

    std::string s_;
    std::set<std::string> fields_;
    size_t pos_ = 0;
};

inline Expr parse_expr(const std::string& s, std::set<std::string> fields = {"V", "phi"}) {
    return Parser(s, std::move(fields)).parse();
}

}  // namespace symdet
