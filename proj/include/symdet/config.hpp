#pragma once

// Run configuration shared by the command line and config files (key = value per line, '#' comments).

#include "symdet/errors.hpp"

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace symdet {

struct RunConfig {
    std::string op = "boson";
    int order = 2;
    int dim = 4;
    std::string substitute;  // "F=expr", empty for none
    std::string format = "latex";
    std::string path = "feynman-fp";
    std::uint64_t seed = 7;
    std::optional<double> tol;

    std::string to_string() const {
        std::ostringstream o;
        o << "operator = " << op << "\n"
          << "order = " << order << "\n"
          << "dim = " << dim << "\n"
          << "substitute = " << substitute << "\n"
          << "format = " << format << "\n"
          << "path = " << path << "\n"
          << "seed = " << seed << "\n";
        if (tol) {
            o.precision(17);
            o << "tol = " << *tol << "\n";
        }
        return o.str();
    }

    bool operator==(const RunConfig& o) const {
        return op == o.op && order == o.order && dim == o.dim && substitute == o.substitute && format == o.format &&
               path == o.path && seed == o.seed && tol == o.tol;
    }

    // unknown keys and malformed values are errors
    static RunConfig parse(const std::string& text) { return parse(text, RunConfig()); }
    static RunConfig parse(const std::string& text, RunConfig c) {
        std::istringstream in(text);
        std::string line;
        int no = 0;
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t\r");
            auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        while (std::getline(in, line)) {
            ++no;
            if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
            line = trim(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos) throw Error(ErrorCode::Domain, "config line " + std::to_string(no) + ": expected key = value");
            std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
            try {
                if (k == "operator") c.op = v;
                else if (k == "order") c.order = std::stoi(v);
                else if (k == "dim") c.dim = std::stoi(v);
                else if (k == "substitute") c.substitute = v;
                else if (k == "format") c.format = v;
                else if (k == "path") c.path = v;
                else if (k == "seed") c.seed = std::stoull(v);
                else if (k == "tol") c.tol = std::stod(v);
                else throw Error(ErrorCode::Domain, "config line " + std::to_string(no) + ": unknown key " + k);
            } catch (const std::logic_error&) {
                throw Error(ErrorCode::Domain, "config line " + std::to_string(no) + ": bad value for " + k);
            }
        }
        return c;
    }

    static RunConfig load(const std::string& file) { return load(file, RunConfig()); }
    static RunConfig load(const std::string& file, RunConfig c) {
        std::ifstream f(file);
        if (!f) throw Error(ErrorCode::Domain, "cannot read " + file);
        std::stringstream ss;
        ss << f.rdbuf();
        return parse(ss.str(), std::move(c));
    }
};

}  // namespace symdet
