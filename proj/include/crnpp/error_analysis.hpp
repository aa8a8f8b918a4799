#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "crnpp/compile.hpp"
#include "crnpp/parser.hpp"
#include "crnpp/oracle.hpp"
#include "crnpp/simulate.hpp"

namespace crnpp {

struct ErrorPoint {
    int window_index = 0;
    int cycle = 0;
    int phase = 0;
    double time = 0.0;
    double simulated = 0.0;
    double expected = 0.0;
    double abs_error = 0.0;
};

struct SpeciesErrorReport {
    std::string species;
    std::vector<ErrorPoint> points;                 // one per phase occurrence
    std::vector<std::pair<double, double>> curve;   // (t, |sim(t) - expected(phase at t)|)
    double max_error = 0.0;                         // over phase-end points
    double final_error = 0.0;
    double growth_per_cycle = 0.0;                  // slope of per-cycle max error
};

struct ErrorReport {
    std::vector<SpeciesErrorReport> tracked;
    std::vector<TieEvent> tie_warnings;

    double max_error() const {
        double m = 0.0;
        for (const auto& s : tracked) m = std::max(m, s.max_error);
        return m;
    }
    const SpeciesErrorReport& of(const std::string& name) const {
        for (const auto& s : tracked)
            if (s.species == name) return s;
        throw std::invalid_argument("species '" + name + "' not tracked");
    }
};

namespace detail {

inline double fit_slope(const std::vector<std::pair<double, double>>& xy) {
    if (xy.size() < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : xy) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = static_cast<double>(xy.size());
    double denom = n * sxx - sx * sx;
    return denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
}

}  // namespace detail

// The EvaluateError workflow: simulate, interpret, and align phase-end
// snapshots against the oracle's per-phase expectations. The continuous
// curve compares sim(t) with the expectation of the phase containing t, so
// transitions show up as decaying spikes.
inline ErrorReport evaluate_error(const ValidatedProgram& vp,
                                  const std::map<std::string, double>& bindings,
                                  const std::vector<std::string>& tracked,
                                  const ClockBackend& backend = IdealClock{},
                                  const SimulateOptions& opts = {},
                                  const CompileConfig& cfg = {}) {
    auto outcome = compile(vp, bindings, cfg);
    if (!outcome.ok()) {
        std::string msg = "compilation failed:";
        for (const auto& d : outcome.diags.items) msg += " " + d.message + ";";
        throw std::invalid_argument(msg);
    }
    const CompiledProgram& cp = *outcome.compiled;

    Trace trace = simulate(cp, backend, opts);
    OracleTimeline tl = interpret(vp, bindings, opts.cycles, cfg.epsilon);
    auto samples = sample_at_phase_ends(trace, cp.schedule);
    if (samples.size() != tl.records.size())
        throw std::runtime_error("phase alignment failure: " + std::to_string(samples.size()) +
                                 " windows vs " + std::to_string(tl.records.size()) +
                                 " oracle records");

    ErrorReport report;
    report.tie_warnings = tl.tie_events;

    for (const auto& name : tracked) {
        Species sp = Species::user(name);
        auto col = trace.index_of(sp);
        if (!col) throw std::invalid_argument("tracked species '" + name + "' not in program");

        SpeciesErrorReport sr;
        sr.species = name;

        for (const auto& s : samples) {
            ErrorPoint pt;
            pt.window_index = s.window_index;
            pt.cycle = s.cycle;
            pt.phase = s.phase;
            pt.time = s.time;
            pt.simulated = trace.states[s.row][*col];
            pt.expected = tl.records[s.window_index].value_of(name);
            pt.abs_error = std::fabs(pt.simulated - pt.expected);
            sr.points.push_back(pt);
        }

        // continuous error curve against the expectation of the phase
        // containing each sample time
        double initial_expected = 0.0;
        for (const auto& c : vp.program.concs)
            if (c.species == name)
                initial_expected =
                    c.value.is_param ? bindings.at(c.value.param) : c.value.literal;
        std::size_t win = 0;
        for (std::size_t row = 0; row < trace.rows(); ++row) {
            double t = trace.times[row];
            while (win < trace.phase_annotations.size() &&
                   trace.phase_annotations[win].t_start <= t)
                ++win;
            double expected = win == 0 ? initial_expected : tl.records[win - 1].value_of(name);
            sr.curve.push_back({t, std::fabs(trace.states[row][*col] - expected)});
        }

        for (const auto& pt : sr.points) sr.max_error = std::max(sr.max_error, pt.abs_error);
        sr.final_error = sr.points.empty() ? 0.0 : sr.points.back().abs_error;

        std::map<int, double> per_cycle;
        for (const auto& pt : sr.points)
            per_cycle[pt.cycle] = std::max(per_cycle[pt.cycle], pt.abs_error);
        std::vector<std::pair<double, double>> xy;
        for (const auto& [cycle, err] : per_cycle) xy.push_back({double(cycle), err});
        sr.growth_per_cycle = detail::fit_slope(xy);

        report.tracked.push_back(std::move(sr));
    }
    return report;
}

struct SweepGrid {
    double min = 0.5;
    double max = 10.0;
    double step = 0.5;

    std::vector<double> values() const {
        std::vector<double> out;
        for (double v = min; v <= max + 1e-9; v += step) out.push_back(v);
        return out;
    }
};

struct ErrorSurface {
    ModuleKind kind = ModuleKind::Add;
    std::vector<double> a_values;
    std::vector<double> b_values;
    std::vector<std::vector<double>> error;  // error[ai][bi]
    double phase_duration = 0.0;

    double max_cell(std::size_t& ai_out, std::size_t& bi_out) const {
        double best = -1.0;
        for (std::size_t ai = 0; ai < a_values.size(); ++ai)
            for (std::size_t bi = 0; bi < b_values.size(); ++bi)
                if (error[ai][bi] > best) {
                    best = error[ai][bi];
                    ai_out = ai;
                    bi_out = bi;
                }
        return best;
    }
};

struct SweepConfig {
    // short enough that module convergence error dominates solver noise,
    // matching the qualitative surfaces of the published evaluation
    double phase_duration = 10.0;
    SolverConfig solver{};
};

// Absolute output error of one arithmetic module run in isolation for a
// single phase, over a grid of operand values. Cells are independent and
// evaluated concurrently; results are merged by grid order.
inline ErrorSurface sweep_module_error(ModuleKind kind, const SweepGrid& grid,
                                       const SweepConfig& cfg = {}) {
    if (kind != ModuleKind::Add && kind != ModuleKind::Sub && kind != ModuleKind::Mul &&
        kind != ModuleKind::Div)
        throw std::invalid_argument("sweep supports add, sub, mul, div");

    ErrorSurface surface;
    surface.kind = kind;
    surface.a_values = grid.values();
    surface.b_values = grid.values();
    surface.phase_duration = cfg.phase_duration;
    surface.error.assign(surface.a_values.size(),
                         std::vector<double>(surface.b_values.size(), 0.0));

    auto exact = [kind](double a, double b) {
        switch (kind) {
            case ModuleKind::Add: return a + b;
            case ModuleKind::Sub: return std::max(a - b, 0.0);
            case ModuleKind::Mul: return a * b;
            default: return a / b;
        }
    };

    auto run_cell = [&](double a, double b) {
        int counter = 0;
        ExpandContext ctx{0, "sweep", &counter};
        ModuleCall call{kind, {"a", "b", "c"}};
        Crn crn;
        for (auto& r : expand_module(call, ctx)) crn.reactions.push_back(std::move(r));
        crn.set_initial(Species::user("a"), a);
        crn.set_initial(Species::user("b"), b);
        Trace tr = integrate_crn(crn, cfg.phase_duration, cfg.solver);
        return std::fabs(tr.final_value(Species::user("c")) - exact(a, b));
    };

    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<void>> jobs;
    std::size_t rows = surface.a_values.size();
    std::size_t per_worker = (rows + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = w * per_worker, hi = std::min(rows, lo + per_worker);
        if (lo >= hi) break;
        jobs.push_back(std::async(std::launch::async, [&, lo, hi] {
            for (std::size_t ai = lo; ai < hi; ++ai)
                for (std::size_t bi = 0; bi < surface.b_values.size(); ++bi)
                    surface.error[ai][bi] = run_cell(surface.a_values[ai], surface.b_values[bi]);
        }));
    }
    for (auto& j : jobs) j.get();
    return surface;
}

struct SubtractionComparison {
    double sub_module_error = 0.0;
    double alternative_error = 0.0;
    std::vector<double> alternative_error_per_cycle;  // |a - oracle| at cycle ends
};

// The one-shot sub module against the iterated-decrement program, both
// computing a0 - b0. The alternative trades run time for an error that does
// not grow with operand magnitude or closeness.
inline SubtractionComparison compare_subtraction_strategies(
    double a0, double b0, const std::string& alternative_source, double phase_duration = 50.0) {
    if (!(a0 >= b0 && b0 >= 0.0))
        throw std::invalid_argument("requires a0 >= b0 >= 0");

    SubtractionComparison out;
    double exact = a0 - b0;

    {
        int counter = 0;
        ExpandContext ctx{0, "sub", &counter};
        Crn crn;
        for (auto& r : expand_module(ModuleCall{ModuleKind::Sub, {"a", "b", "c"}}, ctx))
            crn.reactions.push_back(std::move(r));
        crn.set_initial(Species::user("a"), a0);
        crn.set_initial(Species::user("b"), b0);
        Trace tr = integrate_crn(crn, phase_duration, {});
        out.sub_module_error = std::fabs(tr.final_value(Species::user("c")) - exact);
    }

    {
        auto parsed = parse(alternative_source);
        if (!parsed.ok()) throw std::invalid_argument("alternative program does not parse");
        auto vp = validate(*parsed.program);
        if (!vp.ok()) throw std::invalid_argument("alternative program does not validate");
        std::map<std::string, double> binds{{"a0", a0}, {"b0", b0}};
        auto cp = compile(*vp.validated, binds, {});
        if (!cp.ok()) throw std::invalid_argument("alternative program does not compile");

        int cycles = static_cast<int>(b0) + 3;
        SimulateOptions opts;
        opts.cycles = cycles;
        Trace tr = simulate(*cp.compiled, IdealClock{phase_duration}, opts);
        OracleTimeline tl = interpret(*vp.validated, binds, cycles, cp.compiled->config.epsilon);
        auto samples = sample_at_phase_ends(tr, cp.compiled->schedule);

        auto col = *tr.index_of(Species::user("a"));
        int per_cycle = cp.compiled->schedule.total_phases;
        for (int cycle = 0; cycle < cycles; ++cycle) {
            const auto& s = samples[(cycle + 1) * per_cycle - 1];
            double sim = tr.states[s.row][col];
            double expect = tl.records[s.window_index].value_of("a");
            out.alternative_error_per_cycle.push_back(std::fabs(sim - expect));
        }
        out.alternative_error = std::fabs(tr.final_value(Species::user("a")) - exact);
    }
    return out;
}

}  // namespace crnpp
