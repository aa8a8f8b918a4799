#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "crnpp/compile.hpp"
#include "crnpp/ode.hpp"
#include "crnpp/rk45.hpp"

namespace crnpp {

struct PhaseWindow {
    int phase = 0;
    double t_start = 0.0;
    double t_end = 0.0;
};

struct Trace {
    std::vector<Species> species;
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<PhaseWindow> phase_annotations;
    double min_before_clamp = 0.0;  // most negative raw solver value

    std::optional<std::size_t> index_of(const Species& s) const {
        for (std::size_t i = 0; i < species.size(); ++i)
            if (species[i] == s) return i;
        return std::nullopt;
    }

    double value(std::size_t row, std::size_t col) const { return states[row][col]; }
    double final_value(const Species& s) const { return states.back()[*index_of(s)]; }
    std::size_t rows() const { return times.size(); }

    // last row with time <= t (rows are strictly increasing in time)
    std::size_t row_at(double t) const {
        auto it = std::upper_bound(times.begin(), times.end(), t);
        if (it == times.begin()) return 0;
        return static_cast<std::size_t>(it - times.begin()) - 1;
    }
};

// Square-wave gating with exogenous windows; isolates module error from
// clock-overlap error.
struct IdealClock {
    double phase_duration = 50.0;
};

// Clock species integrated as part of the CRN.
struct OscillatorClock {
    double dominance_fraction = 0.5;  // window = catalyst above fraction * clock_total
};

using ClockBackend = std::variant<OscillatorClock, IdealClock>;

struct SimulateOptions {
    int cycles = 6;
    SolverConfig solver{};
    double clock_floor = 1e-12;  // oscillator backend: keeps resting clocks alive
};

namespace detail {

inline bool reaction_is_oscillator(const Reaction& r) { return r.origin.command == "oscillator"; }

struct Recorder {
    Trace& trace;

    void operator()(double t, const std::vector<double>& y) {
        if (!trace.times.empty() && trace.times.back() == t) {
            trace.states.back() = y;  // refresh boundary row
            return;
        }
        trace.times.push_back(t);
        trace.states.push_back(y);
    }
};

}  // namespace detail

// Integrate a bare CRN (no clock machinery) from its declared initials.
inline Trace integrate_crn(const Crn& crn, double duration, const SolverConfig& solver = {}) {
    OdeSystem sys(crn);
    Trace trace;
    trace.species = sys.species();
    std::vector<double> y(sys.dim());
    for (std::size_t i = 0; i < sys.dim(); ++i) y[i] = crn.initial_of(trace.species[i]);

    detail::Recorder rec{trace};
    integrate_rk45([&](const double* s, double* d) { sys.deriv(s, d); }, y, 0.0, duration, solver,
                   [&](std::vector<double>& state) {
                       bool clamped = false;
                       for (auto& v : state)
                           if (v < 0.0) {
                               trace.min_before_clamp = std::min(trace.min_before_clamp, v);
                               v = 0.0;
                               clamped = true;
                           }
                       return clamped;
                   },
                   rec);
    return trace;
}

namespace detail {

// Ideal-clock form of a compiled program: clock species are stripped from
// every reaction (they are catalytic by construction) and the oscillator is
// dropped; what remains is grouped by phase.
struct GatedProgram {
    Crn crn;  // without clock species
    std::vector<int> phase_of;

    static GatedProgram build(const CompiledProgram& cp) {
        GatedProgram g;
        for (const auto& r : cp.crn.reactions) {
            if (reaction_is_oscillator(r)) continue;
            Reaction reduced = r;
            Multiset reac, prod;
            for (const auto& [s, m] : r.reactants)
                if (s.ns != SpeciesNs::Clock) reac.add(s, m);
            for (const auto& [s, m] : r.products)
                if (s.ns != SpeciesNs::Clock) prod.add(s, m);
            for (const auto& [s, m] : r.reactants)
                if (s.ns == SpeciesNs::Clock && net_change(s, r) != 0)
                    throw std::logic_error("clock species is not catalytic in " + r.origin.command);
            reduced.reactants = std::move(reac);
            reduced.products = std::move(prod);
            g.crn.reactions.push_back(std::move(reduced));
            g.phase_of.push_back(r.origin.phase);
        }
        for (const auto& [s, v] : cp.crn.initial)
            if (s.ns != SpeciesNs::Clock) g.crn.initial[s] = v;
        return g;
    }
};

inline Trace simulate_ideal(const CompiledProgram& cp, const IdealClock& clock,
                            const SimulateOptions& opts) {
    GatedProgram gated = GatedProgram::build(cp);
    OdeSystem sys(gated.crn);

    std::vector<std::vector<std::size_t>> active_by_phase(cp.schedule.total_phases);
    for (std::size_t i = 0; i < gated.crn.reactions.size(); ++i)
        active_by_phase.at(gated.phase_of[i]).push_back(i);

    Trace trace;
    trace.species = sys.species();
    std::vector<double> y(sys.dim());
    for (std::size_t i = 0; i < sys.dim(); ++i) y[i] = gated.crn.initial_of(trace.species[i]);

    SolverConfig solver = opts.solver;
    if (solver.max_step <= 0.0) solver.max_step = clock.phase_duration / 50.0;

    detail::Recorder rec{trace};
    int total_windows = opts.cycles * cp.schedule.total_phases;
    for (int w = 0; w < total_windows; ++w) {
        int phase = w % cp.schedule.total_phases;
        double t0 = w * clock.phase_duration;
        double t1 = t0 + clock.phase_duration;
        const auto& active = active_by_phase[phase];
        integrate_rk45(
            [&](const double* s, double* d) { sys.deriv_subset(s, d, active); }, y, t0, t1, solver,
            [&](std::vector<double>& state) {
                bool clamped = false;
                for (auto& v : state)
                    if (v < 0.0) {
                        trace.min_before_clamp = std::min(trace.min_before_clamp, v);
                        v = 0.0;
                        clamped = true;
                    }
                return clamped;
            },
            rec);
        trace.phase_annotations.push_back({phase, t0, t1});
    }
    return trace;
}

inline Trace simulate_oscillator(const CompiledProgram& cp, const OscillatorClock& clock,
                                 const SimulateOptions& opts) {
    OdeSystem sys(cp.crn);
    Trace trace;
    trace.species = sys.species();
    std::vector<double> y(sys.dim());
    for (std::size_t i = 0; i < sys.dim(); ++i) y[i] = cp.crn.initial_of(trace.species[i]);

    std::vector<bool> is_clock(sys.dim());
    for (std::size_t i = 0; i < sys.dim(); ++i)
        is_clock[i] = trace.species[i].ns == SpeciesNs::Clock;

    SolverConfig solver = opts.solver;
    if (solver.max_step <= 0.0) solver.max_step = 0.5;

    const double threshold = clock.dominance_fraction * cp.config.clock_total;
    const int needed = opts.cycles * cp.schedule.total_phases;

    // catalyst indices per phase
    std::vector<std::size_t> catalyst(cp.schedule.total_phases);
    for (int p = 0; p < cp.schedule.total_phases; ++p)
        catalyst[p] = sys.index_of(cp.schedule.catalyst_of(p));

    // generous cap: pulse handoff takes ~ln(total/floor)/total per species
    double handoff = std::log(cp.config.clock_total / opts.clock_floor) / cp.config.clock_total;
    double t_cap = (needed + 3) * 3.3 * handoff + 100.0;

    auto post_step = [&](std::vector<double>& state) {
        bool adjusted = false;
        for (std::size_t i = 0; i < state.size(); ++i) {
            if (state[i] < 0.0) {
                trace.min_before_clamp = std::min(trace.min_before_clamp, state[i]);
                state[i] = is_clock[i] ? opts.clock_floor : 0.0;
                adjusted = true;
            } else if (is_clock[i] && state[i] < opts.clock_floor) {
                state[i] = opts.clock_floor;
                adjusted = true;
            }
        }
        return adjusted;
    };

    detail::Recorder rec{trace};
    double t = 0.0;
    const double segment = 25.0;
    int complete = 0;
    while (complete < needed && t < t_cap) {
        double t1 = std::min(t + segment, t_cap);
        integrate_rk45([&](const double* s, double* d) { sys.deriv(s, d); }, y, t, t1, solver,
                       post_step, rec);
        t = t1;

        // count complete dominance windows of phase catalysts so far
        complete = 0;
        for (int p = 0; p < cp.schedule.total_phases; ++p) {
            bool inside = false;
            for (std::size_t row = 0; row < trace.rows(); ++row) {
                double v = trace.states[row][catalyst[p]];
                if (!inside && v >= threshold) inside = true;
                if (inside && v < threshold) {
                    ++complete;
                    inside = false;
                }
            }
        }
    }

    // reconstruct annotations: maximal intervals where the phase catalyst
    // stays above the dominance threshold
    std::vector<PhaseWindow> windows;
    for (int p = 0; p < cp.schedule.total_phases; ++p) {
        bool inside = false;
        double start = 0.0;
        for (std::size_t row = 0; row < trace.rows(); ++row) {
            double v = trace.states[row][catalyst[p]];
            if (!inside && v >= threshold) {
                inside = true;
                start = trace.times[row];
            } else if (inside && v < threshold) {
                windows.push_back({p, start, trace.times[row - 1]});
                inside = false;
            }
        }
    }
    std::sort(windows.begin(), windows.end(),
              [](const PhaseWindow& a, const PhaseWindow& b) { return a.t_start < b.t_start; });

    if (static_cast<int>(windows.size()) < needed)
        throw SimulationError("phase reconstruction failure: oscillator produced " +
                                  std::to_string(windows.size()) + " windows, expected " +
                                  std::to_string(needed),
                              t, y);
    windows.resize(needed);

    // sanity: windows must follow phase order 0,1,...,P-1,0,...
    for (std::size_t i = 0; i < windows.size(); ++i)
        if (windows[i].phase != static_cast<int>(i) % cp.schedule.total_phases)
            throw SimulationError("phase reconstruction failure: window " + std::to_string(i) +
                                      " is phase " + std::to_string(windows[i].phase),
                                  t, y);

    trace.phase_annotations = std::move(windows);
    return trace;
}

}  // namespace detail

// Attribution for solver failures: name the reaction with the largest
// absolute flux at the failure state.
inline std::string dominant_flux_provenance(const CompiledProgram& cp,
                                            const std::vector<Species>& species,
                                            const std::vector<double>& state) {
    OdeSystem sys(cp.crn);
    std::vector<double> y(sys.dim(), 0.0);
    for (std::size_t i = 0; i < species.size() && i < state.size(); ++i)
        if (auto found = std::find(sys.species().begin(), sys.species().end(), species[i]);
            found != sys.species().end())
            y[static_cast<std::size_t>(found - sys.species().begin())] = state[i];
    double best = -1.0;
    std::string who = "unknown";
    for (std::size_t r = 0; r < sys.reaction_count(); ++r) {
        double f = std::fabs(sys.flux(r, y.data()));
        if (f > best) {
            best = f;
            const auto& origin = cp.crn.reactions[r].origin;
            who = origin.command +
                  (origin.step >= 0 ? " (step " + std::to_string(origin.step) + ")" : "");
        }
    }
    return who;
}

inline Trace simulate(const CompiledProgram& cp, const ClockBackend& backend,
                      const SimulateOptions& opts = {}) {
    try {
        if (std::holds_alternative<IdealClock>(backend))
            return detail::simulate_ideal(cp, std::get<IdealClock>(backend), opts);
        return detail::simulate_oscillator(cp, std::get<OscillatorClock>(backend), opts);
    } catch (const SimulationError& e) {
        if (e.state.empty()) throw;
        // re-raise with provenance of the dominant flux at the failure point
        std::vector<Species> sp = std::holds_alternative<IdealClock>(backend)
                                      ? detail::GatedProgram::build(cp).crn.all_species()
                                      : cp.crn.all_species();
        throw SimulationError(std::string(e.what()) + "; dominant flux from " +
                                  dominant_flux_provenance(cp, sp, e.state),
                              e.t, e.state);
    }
}

struct PhaseSample {
    int window_index = 0;
    int cycle = 0;
    int phase = 0;
    double time = 0.0;
    std::size_t row = 0;
};

// One snapshot at the end of each phase occurrence, chronological. Requires
// phase annotations (exact under IdealClock, reconstructed for the
// oscillator backend).
inline std::vector<PhaseSample> sample_at_phase_ends(const Trace& trace,
                                                     const ClockSchedule& schedule) {
    std::vector<PhaseSample> out;
    int occurrence = 0;
    for (const auto& w : trace.phase_annotations) {
        PhaseSample s;
        s.window_index = occurrence;
        s.cycle = occurrence / std::max(1, schedule.total_phases);
        s.phase = w.phase;
        s.row = trace.row_at(w.t_end);
        s.time = trace.times[s.row];
        out.push_back(s);
        ++occurrence;
    }
    return out;
}

}  // namespace crnpp
