#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crnpp/crn.hpp"
#include "crnpp/validate.hpp"

namespace crnpp {

// Steps map onto oscillator phases in program order; a step containing cmp
// occupies two consecutive phases (normalization, then approximate
// majority). Phase i is gated by every third clock species: X3, X6, X9, ...
struct ClockSchedule {
    int total_phases = 0;
    std::vector<std::vector<int>> step_to_phases;

    Species catalyst_of(int phase) const {
        return Species::clock("X" + std::to_string(3 * (phase + 1)));
    }
    int clock_species_count() const { return 3 * total_phases; }

    bool operator==(const ClockSchedule&) const = default;
};

// Comparison flag species. One set per program: flags stay live until the
// next cmp, and successive cmp calls renormalize the same species.
struct FlagSet {
    Species x_gt_y = Species::flag("XgtY");
    Species x_lt_y = Species::flag("XltY");
    Species b_x = Species::flag("Bx");
    Species y_gt_x = Species::flag("YgtX");
    Species y_lt_x = Species::flag("YltX");
    Species b_y = Species::flag("By");
    Species offset = Species::flag("CmpOffset");

    std::vector<Species> all() const {
        return {x_gt_y, x_lt_y, b_x, y_gt_x, y_lt_x, b_y, offset};
    }
};

struct CompileConfig {
    double epsilon = 0.5;       // cmp offset; 0.5 suits integer-valued programs
    double clock_eps = 1e-10;   // resting clock species initial
    double clock_total = 2.0;   // pulse species initial (X1), ~= conserved clock mass
};

struct CompiledProgram {
    Crn crn;
    ClockSchedule schedule;
    FlagSet flags;
    bool uses_cmp = false;
    std::map<std::string, double> bindings;
    CompileConfig config;

    // reaction indices per phase, derived from provenance
    std::vector<std::vector<std::size_t>> reactions_by_phase() const {
        std::vector<std::vector<std::size_t>> by_phase(schedule.total_phases);
        for (std::size_t i = 0; i < crn.reactions.size(); ++i) {
            int p = crn.reactions[i].origin.phase;
            if (p >= 0) by_phase[p].push_back(i);
        }
        return by_phase;
    }
};

struct ExpandContext {
    int step = 0;
    std::string command;
    int* temp_counter = nullptr;

    Species fresh_temp(const std::string& base) {
        int id = temp_counter ? ++*temp_counter : 0;
        return Species::temp(base + std::to_string(id));
    }
};

namespace detail {

inline Reaction make(Multiset r, Multiset p, double k, int step, int phase,
                     std::string command) {
    Reaction rx(std::move(r), std::move(p), k);
    rx.origin = {step, phase, std::move(command)};
    return rx;
}

}  // namespace detail

// Table-row expansion of the arithmetic modules. All rates are 1 except the
// square-root annihilation at 1/2. Argument aliasing among inputs is allowed
// (mul[a,a,c] squares) and handled by multiset construction.
inline std::vector<Reaction> expand_module(const ModuleCall& m, ExpandContext& ctx) {
    auto u = [](const std::string& s) { return Species::user(s); };
    std::vector<Reaction> out;
    auto emit = [&](Multiset r, Multiset p, double k = 1.0) {
        out.push_back(detail::make(std::move(r), std::move(p), k, ctx.step,
                                   Provenance::kNoPhase, ctx.command));
    };

    switch (m.kind) {
        case ModuleKind::Ld: {
            Species a = u(m.args[0]), b = u(m.args[1]);
            emit({{a, 1}}, {{a, 1}, {b, 1}});
            emit({{b, 1}}, {});
            break;
        }
        case ModuleKind::Add: {
            Species a = u(m.args[0]), b = u(m.args[1]), c = u(m.args[2]);
            emit({{a, 1}}, {{a, 1}, {c, 1}});
            emit({{b, 1}}, {{b, 1}, {c, 1}});
            emit({{c, 1}}, {});
            break;
        }
        case ModuleKind::Sub: {
            Species a = u(m.args[0]), b = u(m.args[1]), c = u(m.args[2]);
            Species h = ctx.fresh_temp("H");  // per-instance helper
            emit({{a, 1}}, {{a, 1}, {c, 1}});
            emit({{b, 1}}, {{b, 1}, {h, 1}});
            emit({{c, 1}}, {});
            emit({{c, 1}, {h, 1}}, {});
            break;
        }
        case ModuleKind::Mul: {
            Species a = u(m.args[0]), b = u(m.args[1]), c = u(m.args[2]);
            Multiset lhs;
            lhs.add(a);
            lhs.add(b);
            Multiset rhs = lhs;
            rhs.add(c);
            emit(lhs, rhs);
            emit({{c, 1}}, {});
            break;
        }
        case ModuleKind::Div: {
            Species a = u(m.args[0]), b = u(m.args[1]), c = u(m.args[2]);
            emit({{a, 1}}, {{a, 1}, {c, 1}});
            emit({{b, 1}, {c, 1}}, {{b, 1}});
            break;
        }
        case ModuleKind::Sqrt: {
            Species a = u(m.args[0]), b = u(m.args[1]);
            emit({{a, 1}}, {{a, 1}, {b, 1}});
            emit({{b, 2}}, {}, 0.5);
            break;
        }
        case ModuleKind::Cmp:
            throw std::logic_error("cmp is expanded via expand_cmp");
    }
    return out;
}

struct CmpExpansion {
    std::vector<Reaction> normalize;  // first phase
    std::vector<Reaction> majority;   // second phase
};

// cmp[x,y] compares x+eps against y (flags XgtY/XltY) and simultaneously
// y+eps against x (flags YgtX/YltX). Normalization maps values into [0,1]
// fractions without consuming x or y; the offset species contributes the
// +eps term catalytically. The majority phase then drives each flag pair to
// a 0/1 outcome.
inline CmpExpansion expand_cmp(const ModuleCall& m, const FlagSet& f, ExpandContext& ctx) {
    Species x = Species::user(m.args[0]), y = Species::user(m.args[1]);
    CmpExpansion out;
    auto norm = [&](Multiset r, Multiset p) {
        out.normalize.push_back(detail::make(std::move(r), std::move(p), 1.0, ctx.step,
                                             Provenance::kNoPhase, ctx.command + " (normalize)"));
    };
    auto am = [&](Multiset r, Multiset p) {
        out.majority.push_back(detail::make(std::move(r), std::move(p), 1.0, ctx.step,
                                            Provenance::kNoPhase, ctx.command + " (majority)"));
    };

    // x side
    norm({{f.x_gt_y, 1}, {y, 1}}, {{f.x_lt_y, 1}, {y, 1}});
    norm({{f.x_lt_y, 1}, {x, 1}}, {{f.x_gt_y, 1}, {x, 1}});
    norm({{f.x_lt_y, 1}, {f.offset, 1}}, {{f.x_gt_y, 1}, {f.offset, 1}});
    // y side
    norm({{f.y_gt_x, 1}, {x, 1}}, {{f.y_lt_x, 1}, {x, 1}});
    norm({{f.y_lt_x, 1}, {y, 1}}, {{f.y_gt_x, 1}, {y, 1}});
    norm({{f.y_lt_x, 1}, {f.offset, 1}}, {{f.y_gt_x, 1}, {f.offset, 1}});

    auto am_pair = [&](const Species& hi, const Species& lo, const Species& b) {
        am({{hi, 1}, {lo, 1}}, {{lo, 1}, {b, 1}});
        am({{b, 1}, {lo, 1}}, {{lo, 2}});
        am({{lo, 1}, {hi, 1}}, {{hi, 1}, {b, 1}});
        am({{b, 1}, {hi, 1}}, {{hi, 2}});
    };
    am_pair(f.x_gt_y, f.x_lt_y, f.b_x);
    am_pair(f.y_gt_x, f.y_lt_x, f.b_y);
    return out;
}

// Flag species that gate a conditional branch, from the outcome table:
//   X>Y: XgtY=1 YgtX=0      X=Y: XgtY=1 YgtX=1      X<Y: XgtY=0 YgtX=1
inline std::vector<Species> flag_catalysts(CondKind kind, const FlagSet& f) {
    switch (kind) {
        case CondKind::GT: return {f.x_gt_y, f.y_lt_x};
        case CondKind::GE: return {f.x_gt_y};
        case CondKind::EQ: return {f.x_gt_y, f.y_gt_x};
        case CondKind::LT: return {f.x_lt_y, f.y_gt_x};
        case CondKind::LE: return {f.y_gt_x};
    }
    return {};
}

inline ClockSchedule schedule_steps(const ValidatedProgram& vp) {
    ClockSchedule s;
    for (const auto& step : vp.program.steps) {
        bool has_cmp = false;
        for (const auto& cmd : step.commands)
            if (cmd.is_module() && cmd.module().kind == ModuleKind::Cmp) has_cmp = true;
        std::vector<int> phases{s.total_phases};
        if (has_cmp) phases.push_back(s.total_phases + 1);
        s.total_phases += static_cast<int>(phases.size());
        s.step_to_phases.push_back(std::move(phases));
    }
    // A single phase cannot oscillate meaningfully: the lone catalyst never
    // switches off, so steps would not re-trigger. Pad to two phases.
    if (s.total_phases < 2) s.total_phases = 2;
    return s;
}

// Cyclic consumption chain X1 -> X2 -> ... -> Xn -> X1; each species spikes
// in turn. X1 holds the initial pulse so the first catalyst to rise is X3,
// i.e. phase 0 executes first.
inline Crn synthesize_oscillator(int n_species, const CompileConfig& cfg = {}) {
    if (n_species <= 0 || n_species % 3 != 0)
        throw std::invalid_argument("oscillator size must be a positive multiple of 3");
    Crn crn;
    auto clock = [](int i) { return Species::clock("X" + std::to_string(i)); };
    for (int i = 1; i <= n_species; ++i) {
        int next = i == n_species ? 1 : i + 1;
        Multiset r, p;
        r.add(clock(i));
        r.add(clock(next));
        p.add(clock(next), 2);
        crn.reactions.push_back(
            detail::make(std::move(r), std::move(p), 1.0, Provenance::kNoPhase,
                         Provenance::kNoPhase, "oscillator"));
        crn.set_initial(clock(i), i == 1 ? cfg.clock_total : cfg.clock_eps);
    }
    return crn;
}

struct CompileOutcome {
    std::optional<CompiledProgram> compiled;
    DiagnosticList diags;

    bool ok() const { return compiled.has_value(); }
};

namespace detail {

inline Reaction with_catalysts(Reaction r, const std::vector<Species>& cats) {
    for (const auto& c : cats) {
        r.reactants.add(c);
        r.products.add(c);
    }
    return r;
}

inline std::string command_text(const Command& cmd) {
    std::string out;
    print_command(out, cmd, 0);
    return out;
}

}  // namespace detail

// Lower a validated program to one CRN: expand every command, gate each
// reaction with its phase's clock catalyst (and flag catalysts inside
// conditionals), then merge with the synthesized oscillator and the user's
// initial concentrations.
inline CompileOutcome compile(const ValidatedProgram& vp,
                              const std::map<std::string, double>& bindings = {},
                              const CompileConfig& cfg = {}) {
    CompileOutcome outcome;

    for (const auto& p : vp.params) {
        if (!bindings.count(p))
            outcome.diags.error({}, "unbound-param",
                                "parameter '" + p + "' is not bound (use -p " + p + "=VALUE)");
    }
    if (outcome.diags.has_errors()) return outcome;

    CompiledProgram cp;
    cp.schedule = schedule_steps(vp);
    cp.bindings = bindings;
    cp.config = cfg;

    int temp_counter = 0;
    Crn program_crn;

    for (int si = 0; si < static_cast<int>(vp.program.steps.size()); ++si) {
        const Step& step = vp.program.steps[si];
        const auto& phases = cp.schedule.step_to_phases[si];

        auto add_gated = [&](Reaction r, int phase, const std::vector<Species>& extra) {
            std::vector<Species> cats{cp.schedule.catalyst_of(phase)};
            cats.insert(cats.end(), extra.begin(), extra.end());
            r = detail::with_catalysts(std::move(r), cats);
            r.origin.phase = phase;
            program_crn.reactions.push_back(std::move(r));
        };

        for (const auto& cmd : step.commands) {
            ExpandContext ctx{si, detail::command_text(cmd), &temp_counter};
            if (cmd.is_module()) {
                const auto& m = cmd.module();
                if (m.kind == ModuleKind::Cmp) {
                    cp.uses_cmp = true;
                    CmpExpansion cx = expand_cmp(m, cp.flags, ctx);
                    for (auto& r : cx.normalize) add_gated(std::move(r), phases[0], {});
                    for (auto& r : cx.majority) add_gated(std::move(r), phases[1], {});
                } else {
                    for (auto& r : expand_module(m, ctx)) add_gated(std::move(r), phases[0], {});
                }
            } else if (cmd.is_rxn()) {
                const auto& x = cmd.rxn();
                Multiset reac, prod;
                for (const auto& [s, mult] : x.reactants) reac.add(Species::user(s), mult);
                for (const auto& [s, mult] : x.products) prod.add(Species::user(s), mult);
                Reaction r(std::move(reac), std::move(prod), x.rate);
                r.origin = {si, Provenance::kNoPhase, ctx.command};
                add_gated(std::move(r), phases[0], {});
            } else {
                const auto& cond = cmd.conditional();
                std::vector<Species> branch_cats = flag_catalysts(cond.kind, cp.flags);
                for (const auto& inner : cond.body) {
                    ExpandContext ictx{si,
                                       std::string(to_string(cond.kind)) + ": " +
                                           detail::command_text(inner),
                                       &temp_counter};
                    if (inner.is_module()) {
                        for (auto& r : expand_module(inner.module(), ictx))
                            add_gated(std::move(r), phases[0], branch_cats);
                    } else if (inner.is_rxn()) {
                        const auto& x = inner.rxn();
                        Multiset reac, prod;
                        for (const auto& [s, mult] : x.reactants)
                            reac.add(Species::user(s), mult);
                        for (const auto& [s, mult] : x.products) prod.add(Species::user(s), mult);
                        Reaction r(std::move(reac), std::move(prod), x.rate);
                        r.origin = {si, Provenance::kNoPhase, ictx.command};
                        add_gated(std::move(r), phases[0], branch_cats);
                    }
                }
            }
        }
    }

    // user initials, with parameters bound
    for (const auto& c : vp.program.concs) {
        double v = c.value.is_param ? bindings.at(c.value.param) : c.value.literal;
        if (v < 0.0) {
            outcome.diags.error(c.loc, "conc-negative",
                                "bound value for '" + c.species + "' is negative");
            return outcome;
        }
        program_crn.set_initial(Species::user(c.species), v);
    }

    // flag species exist in every compiled program (normalized initials);
    // without a cmp they are inert constants
    program_crn.set_initial(cp.flags.x_gt_y, 0.5);
    program_crn.set_initial(cp.flags.x_lt_y, 0.5);
    program_crn.set_initial(cp.flags.b_x, 0.0);
    program_crn.set_initial(cp.flags.y_gt_x, 0.5);
    program_crn.set_initial(cp.flags.y_lt_x, 0.5);
    program_crn.set_initial(cp.flags.b_y, 0.0);
    program_crn.set_initial(cp.flags.offset, cfg.epsilon);

    Crn osc = synthesize_oscillator(cp.schedule.clock_species_count(), cfg);
    cp.crn = merge({program_crn, osc});

    // default-0 entries for every remaining species, so the initial map is
    // total over the network
    for (const auto& s : cp.crn.all_species())
        if (!cp.crn.initial.count(s)) cp.crn.initial[s] = 0.0;

    outcome.compiled = std::move(cp);
    return outcome;
}

}  // namespace crnpp
