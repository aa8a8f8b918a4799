#pragma once

#include <cstdio>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "crnpp/diagnostics.hpp"

namespace crnpp {

enum class ModuleKind { Ld, Add, Sub, Mul, Div, Sqrt, Cmp };
enum class CondKind { GT, GE, EQ, LT, LE };

inline const char* to_string(ModuleKind k) {
    switch (k) {
        case ModuleKind::Ld: return "ld";
        case ModuleKind::Add: return "add";
        case ModuleKind::Sub: return "sub";
        case ModuleKind::Mul: return "mul";
        case ModuleKind::Div: return "div";
        case ModuleKind::Sqrt: return "sqrt";
        case ModuleKind::Cmp: return "cmp";
    }
    return "?";
}

inline const char* to_string(CondKind k) {
    switch (k) {
        case CondKind::GT: return "ifGT";
        case CondKind::GE: return "ifGE";
        case CondKind::EQ: return "ifEQ";
        case CondKind::LT: return "ifLT";
        case CondKind::LE: return "ifLE";
    }
    return "?";
}

inline int module_arity(ModuleKind k) {
    switch (k) {
        case ModuleKind::Ld:
        case ModuleKind::Sqrt:
        case ModuleKind::Cmp: return 2;
        default: return 3;
    }
}

// Two conditional kinds are disjoint when no comparison outcome satisfies
// both (GT/EQ/LT partition the outcomes; GE = GT|EQ, LE = LT|EQ).
inline bool cond_kinds_disjoint(CondKind a, CondKind b) {
    auto mask = [](CondKind k) -> unsigned {
        switch (k) {
            case CondKind::GT: return 0b100;
            case CondKind::GE: return 0b110;
            case CondKind::EQ: return 0b010;
            case CondKind::LE: return 0b011;
            case CondKind::LT: return 0b001;
        }
        return 0;
    };
    return (mask(a) & mask(b)) == 0;
}

// Initial concentration: nonnegative literal, or a named parameter bound at
// compile/simulate time (e.g. conc[a,a0]).
struct ConcValue {
    bool is_param = false;
    double literal = 0.0;
    std::string param;

    static ConcValue number(double v) { return {false, v, {}}; }
    static ConcValue parameter(std::string p) { return {true, 0.0, std::move(p)}; }

    bool operator==(const ConcValue& o) const {
        return is_param == o.is_param && literal == o.literal && param == o.param;
    }
};

struct ConcDecl {
    std::string species;
    ConcValue value;
    SourceLoc loc;

    bool operator==(const ConcDecl& o) const {
        return species == o.species && value == o.value;
    }
};

// One side of an explicit rxn[...]: species with multiplicities, `nil` = {}.
using SpeciesSum = std::map<std::string, int>;

struct ExplicitRxn {
    SpeciesSum reactants;
    SpeciesSum products;
    double rate = 1.0;

    bool operator==(const ExplicitRxn& o) const {
        return reactants == o.reactants && products == o.products && rate == o.rate;
    }
};

struct ModuleCall {
    ModuleKind kind = ModuleKind::Ld;
    std::vector<std::string> args;

    bool operator==(const ModuleCall& o) const { return kind == o.kind && args == o.args; }
};

struct Command;

struct Conditional {
    CondKind kind = CondKind::GT;
    std::vector<Command> body;

    bool operator==(const Conditional& o) const;
};

struct Command {
    std::variant<ExplicitRxn, ModuleCall, Conditional> node;
    SourceLoc loc;

    bool is_rxn() const { return std::holds_alternative<ExplicitRxn>(node); }
    bool is_module() const { return std::holds_alternative<ModuleCall>(node); }
    bool is_conditional() const { return std::holds_alternative<Conditional>(node); }

    const ExplicitRxn& rxn() const { return std::get<ExplicitRxn>(node); }
    const ModuleCall& module() const { return std::get<ModuleCall>(node); }
    const Conditional& conditional() const { return std::get<Conditional>(node); }

    bool operator==(const Command& o) const { return node == o.node; }
};

inline bool Conditional::operator==(const Conditional& o) const {
    return kind == o.kind && body == o.body;
}

struct Step {
    std::vector<Command> commands;
    SourceLoc loc;

    bool operator==(const Step& o) const { return commands == o.commands; }
};

struct Program {
    std::vector<ConcDecl> concs;
    std::vector<Step> steps;

    bool operator==(const Program& o) const { return concs == o.concs && steps == o.steps; }
};

// ---- pretty printer ------------------------------------------------------
// Emits the canonical concrete syntax; parse(prettyprint(p)) == p.

namespace detail {

inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // Trim to the shortest form that round-trips.
    for (int prec = 1; prec <= 17; ++prec) {
        char shorter[64];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
        double back = 0;
        std::sscanf(shorter, "%lf", &back);
        if (back == v) return shorter;
    }
    return buf;
}

inline void print_sum(std::string& out, const SpeciesSum& sum) {
    if (sum.empty()) {
        out += "nil";
        return;
    }
    bool first = true;
    for (const auto& [name, mult] : sum) {
        for (int i = 0; i < mult; ++i) {
            if (!first) out += " + ";
            out += name;
            first = false;
        }
    }
}

inline void print_command(std::string& out, const Command& cmd, int indent);

inline void print_command_list(std::string& out, const std::vector<Command>& cmds, int indent) {
    for (std::size_t i = 0; i < cmds.size(); ++i) {
        print_command(out, cmds[i], indent);
        if (i + 1 < cmds.size()) out += ',';
        out += '\n';
    }
}

inline void print_command(std::string& out, const Command& cmd, int indent) {
    out.append(indent, ' ');
    if (cmd.is_rxn()) {
        const auto& r = cmd.rxn();
        out += "rxn[";
        print_sum(out, r.reactants);
        out += ", ";
        print_sum(out, r.products);
        out += ", " + format_number(r.rate) + "]";
    } else if (cmd.is_module()) {
        const auto& m = cmd.module();
        out += to_string(m.kind);
        out += '[';
        for (std::size_t i = 0; i < m.args.size(); ++i) {
            if (i) out += ", ";
            out += m.args[i];
        }
        out += ']';
    } else {
        const auto& c = cmd.conditional();
        out += to_string(c.kind);
        out += "[{\n";
        print_command_list(out, c.body, indent + 2);
        out.append(indent, ' ');
        out += "}]";
    }
}

}  // namespace detail

inline std::string prettyprint(const Program& p) {
    std::string out = "crn = {\n";
    std::size_t total = p.concs.size() + p.steps.size();
    std::size_t emitted = 0;
    for (const auto& c : p.concs) {
        out += "  conc[" + c.species + ", ";
        out += c.value.is_param ? c.value.param : detail::format_number(c.value.literal);
        out += ']';
        if (++emitted < total) out += ',';
        out += '\n';
    }
    for (const auto& s : p.steps) {
        out += "  step[{\n";
        detail::print_command_list(out, s.commands, 4);
        out += "  }]";
        if (++emitted < total) out += ',';
        out += '\n';
    }
    out += "};\n";
    return out;
}

}  // namespace crnpp
