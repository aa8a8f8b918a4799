#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "crnpp/parser.hpp"
#include "crnpp/validate.hpp"

namespace testutil {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string corpus_path(const std::string& name) {
    return std::string(CRNPP_SOURCE_DIR) + "/programs/" + name;
}

inline crnpp::Program parse_ok(const std::string& source) {
    auto r = crnpp::parse(source);
    if (!r.ok()) {
        std::string msg = "parse failed:";
        for (const auto& d : r.diags.items) msg += "\n  " + d.format();
        throw std::runtime_error(msg);
    }
    return *r.program;
}

inline crnpp::ValidatedProgram validate_ok(const std::string& source) {
    auto v = crnpp::validate(parse_ok(source));
    if (!v.ok()) {
        std::string msg = "validate failed:";
        for (const auto& d : v.diags.items) msg += "\n  " + d.format();
        throw std::runtime_error(msg);
    }
    return *v.validated;
}

inline crnpp::ValidatedProgram load_corpus(const std::string& name) {
    return validate_ok(read_file(corpus_path(name)));
}

// xorshift64*: small deterministic generator for property tests
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545f4914f6cdd1dull;
    }

    int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
    double unit() { return static_cast<double>(next() >> 11) / 9007199254740992.0; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

private:
    std::uint64_t state_;
};

}  // namespace testutil
