#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "crnpp/ast.hpp"
#include "crnpp/lexer.hpp"

namespace crnpp {

struct ParseResult {
    std::optional<Program> program;
    DiagnosticList diags;

    bool ok() const { return program.has_value() && !diags.has_errors(); }
};

// Recursive-descent parser for the bracketed program syntax. Command heads
// are matched case-insensitively so listing spellings like `IfGE` work;
// species names stay case-sensitive.
class Parser {
public:
    static ParseResult parse(std::string_view source) {
        Parser p(source);
        p.parse_crn();
        ParseResult r;
        r.diags = std::move(p.diags_);
        if (!r.diags.has_errors()) r.program = std::move(p.program_);
        return r;
    }

private:
    explicit Parser(std::string_view src) { tokens_ = Lexer(src).run(diags_); }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    DiagnosticList diags_;
    Program program_;

    const Token& cur() const { return tokens_[std::min(pos_, tokens_.size() - 1)]; }
    const Token& get() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }

    bool check(Tok k) const { return cur().kind == k; }

    bool accept(Tok k) {
        if (!check(k)) return false;
        ++pos_;
        return true;
    }

    bool expect(Tok k, const char* what) {
        if (accept(k)) return true;
        diags_.error(cur().loc, "syntax",
                     std::string("expected ") + what + " before '" + cur().text + "'");
        return false;
    }

    static std::string lower(std::string s) {
        std::transform(s.begin(), s.end(), s.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        return s;
    }

    static std::optional<ModuleKind> module_kind(const std::string& id) {
        std::string k = lower(id);
        if (k == "ld") return ModuleKind::Ld;
        if (k == "add") return ModuleKind::Add;
        if (k == "sub") return ModuleKind::Sub;
        if (k == "mul") return ModuleKind::Mul;
        if (k == "div") return ModuleKind::Div;
        if (k == "sqrt") return ModuleKind::Sqrt;
        if (k == "cmp") return ModuleKind::Cmp;
        return std::nullopt;
    }

    static std::optional<CondKind> cond_kind(const std::string& id) {
        std::string k = lower(id);
        if (k == "ifgt") return CondKind::GT;
        if (k == "ifge") return CondKind::GE;
        if (k == "ifeq") return CondKind::EQ;
        if (k == "iflt") return CondKind::LT;
        if (k == "ifle") return CondKind::LE;
        return std::nullopt;
    }

    void parse_crn() {
        if (!(check(Tok::Ident) && lower(cur().text) == "crn")) {
            diags_.error(cur().loc, "syntax", "program must start with 'crn = {'");
            return;
        }
        get();
        if (!expect(Tok::Equals, "'='")) return;
        if (!expect(Tok::LBrace, "'{'")) return;

        // RootSList: one or more conc/step statements.
        do {
            if (!parse_root()) return;
        } while (accept(Tok::Comma));

        if (!expect(Tok::RBrace, "'}'")) return;
        accept(Tok::Semicolon);
        if (!check(Tok::End))
            diags_.error(cur().loc, "syntax", "trailing input after closing '}'");
    }

    bool parse_root() {
        if (!check(Tok::Ident)) {
            diags_.error(cur().loc, "syntax", "expected 'conc' or 'step'");
            return false;
        }
        std::string head = lower(cur().text);
        if (head == "conc") return parse_conc();
        if (head == "step") return parse_step();
        diags_.error(cur().loc, "syntax", "unknown statement '" + cur().text + "'");
        return false;
    }

    std::optional<std::string> parse_species() {
        if (!check(Tok::Ident)) {
            diags_.error(cur().loc, "syntax", "expected species name");
            return std::nullopt;
        }
        return get().text;
    }

    bool parse_conc() {
        get();  // 'conc'
        if (!expect(Tok::LBracket, "'['")) return false;
        SourceLoc loc = cur().loc;
        auto species = parse_species();
        if (!species) return false;
        if (!expect(Tok::Comma, "','")) return false;

        ConcValue value;
        if (check(Tok::Number)) {
            value = ConcValue::number(get().number);
        } else if (check(Tok::Ident)) {
            value = ConcValue::parameter(get().text);
        } else {
            diags_.error(cur().loc, "syntax", "expected number or parameter name");
            return false;
        }
        if (!expect(Tok::RBracket, "']'")) return false;
        program_.concs.push_back({*species, value, loc});
        return true;
    }

    bool parse_step() {
        SourceLoc loc = cur().loc;
        get();  // 'step'
        if (!expect(Tok::LBracket, "'['")) return false;
        Step step;
        step.loc = loc;
        if (!parse_command_list(step.commands, /*inside_conditional=*/false)) return false;
        if (!expect(Tok::RBracket, "']'")) return false;
        program_.steps.push_back(std::move(step));
        return true;
    }

    // The figures wrap command lists in braces (step[{...}]); the grammar
    // production omits them. Both are accepted.
    bool parse_command_list(std::vector<Command>& out, bool inside_conditional) {
        bool braced = accept(Tok::LBrace);
        do {
            auto cmd = parse_command(inside_conditional);
            if (!cmd) return false;
            out.push_back(std::move(*cmd));
        } while (accept(Tok::Comma));
        if (braced && !expect(Tok::RBrace, "'}'")) return false;
        return true;
    }

    std::optional<Command> parse_command(bool inside_conditional) {
        if (!check(Tok::Ident)) {
            diags_.error(cur().loc, "syntax", "expected command");
            return std::nullopt;
        }
        SourceLoc loc = cur().loc;
        std::string head = cur().text;

        if (lower(head) == "rxn") {
            get();
            auto r = parse_rxn();
            if (!r) return std::nullopt;
            return Command{*r, loc};
        }
        if (auto mk = module_kind(head)) {
            get();
            auto m = parse_module(*mk, loc, inside_conditional);
            if (!m) return std::nullopt;
            return Command{*m, loc};
        }
        if (auto ck = cond_kind(head)) {
            get();
            if (inside_conditional) {
                diags_.error(loc, "nested-conditional",
                             "conditionals cannot be nested inside conditionals");
                return std::nullopt;
            }
            if (!expect(Tok::LBracket, "'['")) return std::nullopt;
            Conditional cond;
            cond.kind = *ck;
            if (!parse_command_list(cond.body, /*inside_conditional=*/true)) return std::nullopt;
            if (!expect(Tok::RBracket, "']'")) return std::nullopt;
            return Command{std::move(cond), loc};
        }
        diags_.error(loc, "unknown-module", "unknown module or command '" + head + "'");
        return std::nullopt;
    }

    std::optional<ModuleCall> parse_module(ModuleKind kind, SourceLoc loc, bool) {
        if (!expect(Tok::LBracket, "'['")) return std::nullopt;
        ModuleCall m;
        m.kind = kind;
        do {
            auto s = parse_species();
            if (!s) return std::nullopt;
            m.args.push_back(std::move(*s));
        } while (accept(Tok::Comma));
        if (!expect(Tok::RBracket, "']'")) return std::nullopt;
        if (static_cast<int>(m.args.size()) != module_arity(kind)) {
            diags_.error(loc, "module-arity",
                         std::string(to_string(kind)) + " expects " +
                             std::to_string(module_arity(kind)) + " arguments, got " +
                             std::to_string(m.args.size()));
            return std::nullopt;
        }
        return m;
    }

    // rxn[expr, expr, rate]; `nil` denotes the empty multiset, duplicate
    // species denote multiplicity (b+b has multiplicity 2).
    std::optional<ExplicitRxn> parse_rxn() {
        if (!expect(Tok::LBracket, "'['")) return std::nullopt;
        ExplicitRxn r;
        if (!parse_sum(r.reactants)) return std::nullopt;
        if (!expect(Tok::Comma, "','")) return std::nullopt;
        if (!parse_sum(r.products)) return std::nullopt;
        if (!expect(Tok::Comma, "','")) return std::nullopt;
        if (!check(Tok::Number)) {
            diags_.error(cur().loc, "syntax", "expected rate constant");
            return std::nullopt;
        }
        SourceLoc rate_loc = cur().loc;
        r.rate = get().number;
        if (!(r.rate > 0.0)) {
            diags_.error(rate_loc, "rxn-rate", "reaction rate must be positive");
            return std::nullopt;
        }
        if (!expect(Tok::RBracket, "']'")) return std::nullopt;
        if (r.reactants.empty() && r.products.empty()) {
            diags_.error(rate_loc, "rxn-empty", "reactants and products cannot both be nil");
            return std::nullopt;
        }
        return r;
    }

    bool parse_sum(SpeciesSum& out) {
        if (check(Tok::Ident) && lower(cur().text) == "nil") {
            get();
            return true;
        }
        do {
            auto s = parse_species();
            if (!s) return false;
            out[*s] += 1;
        } while (accept(Tok::Plus));
        return true;
    }
};

inline ParseResult parse(std::string_view source) { return Parser::parse(source); }

}  // namespace crnpp
