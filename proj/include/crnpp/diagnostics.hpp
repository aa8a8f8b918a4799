#pragma once

#include <sstream>
#include <string>
#include <vector>

namespace crnpp {

struct SourceLoc {
    int line = 0;  // 1-based; 0 means "no location"
    int col = 0;

    bool valid() const { return line > 0; }
};

enum class Severity { Error, Warning };

// One frontend/validation finding. `rule` is a stable machine-readable id
// (e.g. "syntax", "module-arity", "step-cycle") so tests can match findings
// without depending on message wording.
struct Diagnostic {
    Severity severity = Severity::Error;
    SourceLoc loc;
    std::string rule;
    std::string message;

    std::string format(const std::string& file = "<input>") const {
        std::ostringstream out;
        out << file << ':' << loc.line << ':' << loc.col << ": "
            << (severity == Severity::Error ? "error" : "warning") << ": " << message;
        return out.str();
    }
};

struct DiagnosticList {
    std::vector<Diagnostic> items;

    void error(SourceLoc loc, std::string rule, std::string message) {
        items.push_back({Severity::Error, loc, std::move(rule), std::move(message)});
    }
    void warning(SourceLoc loc, std::string rule, std::string message) {
        items.push_back({Severity::Warning, loc, std::move(rule), std::move(message)});
    }

    bool has_errors() const {
        for (const auto& d : items)
            if (d.severity == Severity::Error) return true;
        return false;
    }
    bool has_rule(const std::string& rule) const {
        for (const auto& d : items)
            if (d.rule == rule) return true;
        return false;
    }
    std::size_t error_count() const {
        std::size_t n = 0;
        for (const auto& d : items)
            if (d.severity == Severity::Error) ++n;
        return n;
    }
};

}  // namespace crnpp
