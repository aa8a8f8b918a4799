#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crnpp/ast.hpp"
#include "crnpp/species.hpp"

namespace crnpp {

// Program that passed semantic validation, plus facts later stages need.
struct ValidatedProgram {
    Program program;
    std::vector<std::string> params;   // free parameters, sorted
    std::vector<int> cmp_steps;        // indices of steps containing cmp
    std::set<std::string> user_species;
};

struct ValidateResult {
    std::optional<ValidatedProgram> validated;
    DiagnosticList diags;

    bool ok() const { return validated.has_value(); }
};

namespace detail {

struct ModuleIo {
    std::vector<std::string> inputs;
    std::optional<std::string> output;  // cmp writes flags, not species
};

inline ModuleIo module_io(const ModuleCall& m) {
    switch (m.kind) {
        case ModuleKind::Ld:
        case ModuleKind::Sqrt: return {{m.args[0]}, m.args[1]};
        case ModuleKind::Cmp: return {{m.args[0], m.args[1]}, std::nullopt};
        default: return {{m.args[0], m.args[1]}, m.args[2]};
    }
}

// Species dependency edges within one step: output -> each input, for module
// commands only. Explicit rxn commands express raw dynamics and are exempt
// from steady-state dependency analysis.
struct StepGraph {
    std::map<std::string, std::set<std::string>> edges;

    void add(const ModuleCall& m) {
        auto io = module_io(m);
        if (!io.output) return;
        for (const auto& in : io.inputs) edges[*io.output].insert(in);
    }

    // Cycles of length >= 2; self-loops are reported by the restriction
    // check. Returned cycles are sorted species sets, so diagnostics do not
    // depend on command order.
    std::vector<std::vector<std::string>> cycles() const {
        std::vector<std::vector<std::string>> found;
        std::set<std::string> nodes;
        for (const auto& [from, tos] : edges) {
            nodes.insert(from);
            nodes.insert(tos.begin(), tos.end());
        }
        // Tarjan SCC, iterating nodes in sorted order for determinism.
        std::map<std::string, int> index, low;
        std::vector<std::string> stack;
        std::set<std::string> on_stack;
        int counter = 0;

        auto strongconnect = [&](auto&& self, const std::string& v) -> void {
            index[v] = low[v] = counter++;
            stack.push_back(v);
            on_stack.insert(v);
            if (auto it = edges.find(v); it != edges.end()) {
                for (const auto& w : it->second) {
                    if (!index.count(w)) {
                        self(self, w);
                        low[v] = std::min(low[v], low[w]);
                    } else if (on_stack.count(w)) {
                        low[v] = std::min(low[v], index[w]);
                    }
                }
            }
            if (low[v] == index[v]) {
                std::vector<std::string> scc;
                while (true) {
                    std::string w = stack.back();
                    stack.pop_back();
                    on_stack.erase(w);
                    scc.push_back(w);
                    if (w == v) break;
                }
                if (scc.size() >= 2) {
                    std::sort(scc.begin(), scc.end());
                    found.push_back(std::move(scc));
                }
            }
        };

        for (const auto& v : nodes)
            if (!index.count(v)) strongconnect(strongconnect, v);
        std::sort(found.begin(), found.end());
        return found;
    }
};

inline std::string join(const std::vector<std::string>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += xs[i];
    }
    return out;
}

}  // namespace detail

class Validator {
public:
    static ValidateResult run(const Program& p) {
        Validator v;
        v.check(p);
        ValidateResult r;
        r.diags = std::move(v.diags_);
        if (!r.diags.has_errors()) {
            ValidatedProgram vp;
            vp.program = p;
            vp.params.assign(v.params_.begin(), v.params_.end());
            vp.cmp_steps = v.cmp_steps_;
            vp.user_species = v.species_;
            r.validated = std::move(vp);
        }
        return r;
    }

private:
    DiagnosticList diags_;
    std::set<std::string> params_;
    std::set<std::string> species_;
    std::vector<int> cmp_steps_;

    void check_species_name(const std::string& name, SourceLoc loc) {
        species_.insert(name);
        if (has_reserved_prefix(name))
            diags_.error(loc, "reserved-prefix",
                         "species name '" + name + "' uses a reserved prefix");
        if (name == "nil")
            diags_.error(loc, "reserved-name", "'nil' cannot be used as a species name");
    }

    void check(const Program& p) {
        if (p.steps.empty())
            diags_.error({}, "no-steps", "program must contain at least one step");

        std::set<std::string> declared;
        for (const auto& c : p.concs) {
            check_species_name(c.species, c.loc);
            if (!declared.insert(c.species).second)
                diags_.error(c.loc, "dup-conc",
                             "duplicate conc declaration for species '" + c.species + "'");
            if (c.value.is_param)
                params_.insert(c.value.param);
            else if (c.value.literal < 0.0)
                diags_.error(c.loc, "conc-negative", "initial concentration must be nonnegative");
        }

        for (int si = 0; si < static_cast<int>(p.steps.size()); ++si) check_step(p, si);
    }

    void check_step(const Program& p, int si) {
        const Step& step = p.steps[si];
        detail::StepGraph graph;
        int cmp_count = 0;

        // writer bookkeeping for the concurrent-write warning: species ->
        // list of guard kinds (nullopt = unconditional).
        std::map<std::string, std::vector<std::optional<CondKind>>> writers;

        auto visit_module = [&](const ModuleCall& m, SourceLoc loc,
                                std::optional<CondKind> guard) {
            for (const auto& a : m.args) check_species_name(a, loc);
            check_restrictions(m, loc);
            graph.add(m);
            if (m.kind == ModuleKind::Cmp) {
                ++cmp_count;
                if (guard)
                    diags_.error(loc, "cmp-in-conditional",
                                 "cmp cannot appear inside a conditional");
            } else if (auto io = detail::module_io(m); io.output) {
                writers[*io.output].push_back(guard);
            }
        };

        for (const auto& cmd : step.commands) {
            if (cmd.is_module()) {
                visit_module(cmd.module(), cmd.loc, std::nullopt);
            } else if (cmd.is_rxn()) {
                for (const auto& [s, _] : cmd.rxn().reactants) check_species_name(s, cmd.loc);
                for (const auto& [s, _] : cmd.rxn().products) check_species_name(s, cmd.loc);
            } else {
                const auto& cond = cmd.conditional();
                check_conditional_placement(si, cmd.loc);
                for (const auto& inner : cond.body) {
                    if (inner.is_module()) {
                        visit_module(inner.module(), inner.loc, cond.kind);
                    } else if (inner.is_rxn()) {
                        for (const auto& [s, _] : inner.rxn().reactants)
                            check_species_name(s, inner.loc);
                        for (const auto& [s, _] : inner.rxn().products)
                            check_species_name(s, inner.loc);
                    }
                    // nested conditionals / cmp are rejected at parse time
                }
            }
        }

        if (cmp_count > 1)
            diags_.error(step.loc, "cmp-conflict",
                         "a step may contain at most one cmp (flag species are shared)");
        if (cmp_count == 1) cmp_steps_.push_back(si);

        for (const auto& cyc : graph.cycles())
            diags_.error(step.loc, "step-cycle",
                         "commands in this step form a cyclic dependency over {" +
                             detail::join(cyc) + "}");

        for (const auto& [species, guards] : writers) {
            if (guards.size() < 2) continue;
            bool conflict = false;
            for (std::size_t i = 0; i < guards.size() && !conflict; ++i)
                for (std::size_t j = i + 1; j < guards.size() && !conflict; ++j) {
                    bool disjoint = guards[i] && guards[j] &&
                                    cond_kinds_disjoint(*guards[i], *guards[j]);
                    conflict = !disjoint;
                }
            if (conflict)
                diags_.warning(step.loc, "multi-write",
                               "species '" + species +
                                   "' is written by multiple commands that can execute "
                                   "in the same step");
        }
    }

    void check_restrictions(const ModuleCall& m, SourceLoc loc) {
        auto io = detail::module_io(m);
        if (!io.output) {  // cmp[A,B]: A and B must be distinct species
            if (m.args[0] == m.args[1])
                diags_.error(loc, "module-restriction",
                             "cmp requires two distinct species");
            return;
        }
        for (const auto& in : io.inputs)
            if (*io.output == in) {
                diags_.error(loc, "module-restriction",
                             std::string(to_string(m.kind)) +
                                 ": output species must differ from inputs ('" + in + "')");
                return;
            }
    }

    void check_conditional_placement(int si, SourceLoc loc) {
        bool has_prior_cmp = false;
        for (int cs : cmp_steps_)
            if (cs < si) has_prior_cmp = true;
        if (!has_prior_cmp)
            diags_.error(loc, "conditional-without-cmp",
                         "conditional requires a cmp in an earlier step");
    }
};

inline ValidateResult validate(const Program& p) { return Validator::run(p); }

}  // namespace crnpp
