#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "crnpp/compile.hpp"
#include "crnpp/rational.hpp"
#include "crnpp/validate.hpp"

namespace crnpp {

// Comparison outcome carried between steps. Tie marks the undefined boundary
// case |x - y| == eps, where the chemical flags sit at exactly 1/2 and the
// majority phase settles at (1/3, 1/3, 1/3).
enum class FlagState { Unset, GT, EQ, LT, Tie };

inline const char* to_string(FlagState f) {
    switch (f) {
        case FlagState::Unset: return "unset";
        case FlagState::GT: return "GT";
        case FlagState::EQ: return "EQ";
        case FlagState::LT: return "LT";
        case FlagState::Tie: return "tie";
    }
    return "?";
}

struct OracleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PhaseRecord {
    int cycle = 0;
    int phase = 0;
    std::map<std::string, Value> env;
    FlagState flag = FlagState::Unset;

    double value_of(const std::string& species) const {
        auto it = env.find(species);
        if (it == env.end()) throw OracleError("unknown species '" + species + "'");
        return it->second.to_double();
    }
};

struct TieEvent {
    int cycle = 0;
    int step = 0;
};

struct OracleTimeline {
    std::vector<PhaseRecord> records;  // chronological, one per phase occurrence
    int total_phases = 0;
    std::vector<std::string> species;  // user species, sorted
    std::vector<TieEvent> tie_events;  // conditionals queried during a tie

    const PhaseRecord& at(int cycle, int phase) const {
        return records.at(static_cast<std::size_t>(cycle) * total_phases + phase);
    }
    const PhaseRecord& final_record() const { return records.back(); }
};

// Exact imperative execution of a validated program: steps run in order and
// repeat for n_cycles. Within a step, commands form a dataflow DAG (the
// validator rejects cycles); each command reads the converged value of any
// species produced by a same-step command and the step-entry value
// otherwise, mirroring how composable module CRNs settle inside one phase.
class OracleInterpreter {
public:
    OracleInterpreter(const ValidatedProgram& vp, const std::map<std::string, double>& bindings,
                      double epsilon)
        : vp_(vp), epsilon_(Value::from_double(epsilon)) {
        schedule_ = schedule_steps(vp);
        for (const auto& name : vp.user_species) env_[name] = Value();
        for (const auto& c : vp.program.concs) {
            double v = c.value.is_param ? bindings.at(c.value.param) : c.value.literal;
            if (v < 0.0) throw OracleError("negative initial value for '" + c.species + "'");
            env_[c.species] = Value::from_double(v);
        }
        plan_steps();
    }

    OracleTimeline run(int n_cycles) {
        OracleTimeline tl;
        tl.total_phases = schedule_.total_phases;
        tl.species.assign(vp_.user_species.begin(), vp_.user_species.end());

        for (int cycle = 0; cycle < n_cycles; ++cycle) {
            int phases_done = 0;
            for (std::size_t si = 0; si < plans_.size(); ++si) {
                const auto& phases = schedule_.step_to_phases[si];
                auto result = execute_step(plans_[si], cycle, static_cast<int>(si));
                // writes land in the step's first phase
                tl.records.push_back({cycle, phases[0], env_, flag_});
                if (result.pending_flag) {
                    // the majority phase publishes the new flag state
                    flag_ = *result.pending_flag;
                    tl.records.push_back({cycle, phases[1], env_, flag_});
                }
                phases_done += static_cast<int>(phases.size());
            }
            for (int p = phases_done; p < schedule_.total_phases; ++p)
                tl.records.push_back({cycle, p, env_, flag_});  // padding phase, no commands
        }
        tl.tie_events = ties_;
        return tl;
    }

private:
    struct PlannedCommand {
        std::optional<CondKind> guard;
        ModuleCall module;
        std::string text;
    };
    struct StepPlan {
        std::vector<PlannedCommand> ordered;  // topological order
    };
    struct StepResult {
        std::optional<FlagState> pending_flag;
    };

    const ValidatedProgram& vp_;
    Value epsilon_;
    ClockSchedule schedule_;
    std::map<std::string, Value> env_;
    FlagState flag_ = FlagState::Unset;
    std::vector<StepPlan> plans_;
    std::vector<TieEvent> ties_;

    void plan_steps() {
        for (const auto& step : vp_.program.steps) {
            std::vector<PlannedCommand> cmds;
            auto add = [&](const Command& c, std::optional<CondKind> guard) {
                if (c.is_rxn())
                    throw OracleError(
                        "explicit rxn commands have no imperative semantics; the oracle "
                        "cannot interpret this program");
                std::string text;
                detail::print_command(text, c, 0);
                cmds.push_back({guard, c.module(), std::move(text)});
            };
            for (const auto& cmd : step.commands) {
                if (cmd.is_conditional())
                    for (const auto& inner : cmd.conditional().body)
                        add(inner, cmd.conditional().kind);
                else
                    add(cmd, std::nullopt);
            }
            plans_.push_back({topo_sort(std::move(cmds))});
        }
    }

    // Stable topological order over "producer before consumer" edges. The
    // static graph is acyclic for validated programs.
    static std::vector<PlannedCommand> topo_sort(std::vector<PlannedCommand> cmds) {
        std::size_t n = cmds.size();
        std::vector<std::optional<std::string>> outs(n);
        std::vector<std::vector<std::string>> ins(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto io = detail::module_io(cmds[i].module);
            outs[i] = io.output;
            ins[i] = io.inputs;
        }
        std::vector<std::vector<std::size_t>> succ(n);
        std::vector<int> indeg(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (!outs[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                if (std::find(ins[j].begin(), ins[j].end(), *outs[i]) != ins[j].end()) {
                    succ[i].push_back(j);
                    ++indeg[j];
                }
            }
        }
        std::vector<PlannedCommand> ordered;
        std::vector<bool> done(n, false);
        while (ordered.size() < n) {
            bool progressed = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (done[i] || indeg[i] != 0) continue;
                done[i] = true;
                progressed = true;
                ordered.push_back(cmds[i]);
                for (std::size_t j : succ[i]) --indeg[j];
            }
            if (!progressed) throw OracleError("internal: cyclic step survived validation");
        }
        return ordered;
    }

    bool guard_active(CondKind kind, int cycle, int step) {
        switch (flag_) {
            case FlagState::Unset:
                throw OracleError("conditional executed before any cmp");
            case FlagState::Tie:
                ties_.push_back({cycle, step});
                return false;
            case FlagState::GT: return kind == CondKind::GT || kind == CondKind::GE;
            case FlagState::EQ:
                return kind == CondKind::EQ || kind == CondKind::GE || kind == CondKind::LE;
            case FlagState::LT: return kind == CondKind::LT || kind == CondKind::LE;
        }
        return false;
    }

    StepResult execute_step(const StepPlan& plan, int cycle, int step) {
        std::map<std::string, std::pair<Value, std::string>> writes;
        StepResult result;

        auto read = [&](const std::string& s) -> Value {
            if (auto it = writes.find(s); it != writes.end()) return it->second.first;
            return env_.at(s);
        };

        for (const auto& cmd : plan.ordered) {
            if (cmd.guard && !guard_active(*cmd.guard, cycle, step)) continue;
            const auto& m = cmd.module;
            try {
                if (m.kind == ModuleKind::Cmp) {
                    Value x = read(m.args[0]), y = read(m.args[1]);
                    int up = Value::compare(x, y + epsilon_);
                    int down = Value::compare(y, x + epsilon_);
                    if (up == 0 || down == 0)
                        result.pending_flag = FlagState::Tie;
                    else if (up > 0)
                        result.pending_flag = FlagState::GT;
                    else if (down > 0)
                        result.pending_flag = FlagState::LT;
                    else
                        result.pending_flag = FlagState::EQ;
                    continue;
                }
                Value out;
                switch (m.kind) {
                    case ModuleKind::Ld: out = read(m.args[0]); break;
                    case ModuleKind::Add: out = read(m.args[0]) + read(m.args[1]); break;
                    case ModuleKind::Sub:
                        out = Value::trunc_sub(read(m.args[0]), read(m.args[1]));
                        break;
                    case ModuleKind::Mul: out = read(m.args[0]) * read(m.args[1]); break;
                    case ModuleKind::Div: out = read(m.args[0]) / read(m.args[1]); break;
                    case ModuleKind::Sqrt: out = Value::sqrt(read(m.args[0])); break;
                    default: continue;
                }
                const std::string& target = m.args.back();
                if (auto it = writes.find(target); it != writes.end())
                    throw OracleError("conflicting writes to '" + target + "' by '" +
                                      it->second.second + "' and '" + cmd.text + "' (cycle " +
                                      std::to_string(cycle) + ", step " + std::to_string(step) +
                                      ")");
                writes[target] = {out, cmd.text};
            } catch (const std::domain_error& e) {
                throw OracleError(std::string(e.what()) + " in '" + cmd.text + "' (cycle " +
                                  std::to_string(cycle) + ", step " + std::to_string(step) + ")");
            }
        }

        for (const auto& [s, vw] : writes) env_[s] = vw.first;
        return result;
    }
};

inline OracleTimeline interpret(const ValidatedProgram& vp,
                                const std::map<std::string, double>& bindings, int n_cycles,
                                double epsilon = 0.5) {
    for (const auto& p : vp.params)
        if (!bindings.count(p)) throw OracleError("parameter '" + p + "' is not bound");
    OracleInterpreter interp(vp, bindings, epsilon);
    return interp.run(n_cycles);
}

// Piecewise-constant expectation per phase occurrence, aligned with
// sample_at_phase_ends output.
inline std::vector<double> expected_series(const OracleTimeline& tl, const std::string& species) {
    std::vector<double> out;
    out.reserve(tl.records.size());
    for (const auto& rec : tl.records) out.push_back(rec.value_of(species));
    return out;
}

}  // namespace crnpp
