#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "crnpp/error_analysis.hpp"
#include "crnpp/oracle.hpp"
#include "crnpp/simulate.hpp"

namespace crnpp {

inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// time,<species...>; full precision; optional row decimation (last row kept)
inline void write_trace_csv(std::ostream& out, const Trace& trace, int downsample = 1) {
    if (downsample < 1) downsample = 1;
    out << "time";
    for (const auto& s : trace.species) out << ',' << s.str();
    out << '\n';
    for (std::size_t row = 0; row < trace.rows(); ++row) {
        bool last = row + 1 == trace.rows();
        if (row % static_cast<std::size_t>(downsample) != 0 && !last) continue;
        out << g17(trace.times[row]);
        for (double v : trace.states[row]) out << ',' << g17(v);
        out << '\n';
    }
}

inline void write_timeline_csv(std::ostream& out, const OracleTimeline& tl) {
    out << "cycle,phase";
    for (const auto& s : tl.species) out << ',' << s;
    out << ",flag\n";
    for (const auto& rec : tl.records) {
        out << rec.cycle << ',' << rec.phase;
        for (const auto& s : tl.species) out << ',' << g17(rec.value_of(s));
        out << ',' << to_string(rec.flag) << '\n';
    }
}

inline void write_error_report_csv(std::ostream& out, const ErrorReport& report) {
    out << "species,occurrence,cycle,phase,time,simulated,expected,abs_error\n";
    for (const auto& sr : report.tracked)
        for (const auto& pt : sr.points)
            out << sr.species << ',' << pt.window_index << ',' << pt.cycle << ',' << pt.phase
                << ',' << g17(pt.time) << ',' << g17(pt.simulated) << ',' << g17(pt.expected)
                << ',' << g17(pt.abs_error) << '\n';
}

inline void write_error_curve_csv(std::ostream& out, const ErrorReport& report) {
    out << "time";
    for (const auto& sr : report.tracked) out << ",err_" << sr.species;
    out << '\n';
    if (report.tracked.empty()) return;
    std::size_t rows = report.tracked.front().curve.size();
    for (std::size_t i = 0; i < rows; ++i) {
        out << g17(report.tracked.front().curve[i].first);
        for (const auto& sr : report.tracked) out << ',' << g17(sr.curve[i].second);
        out << '\n';
    }
}

// matrix layout: first row is b values, first column a values
inline void write_surface_csv(std::ostream& out, const ErrorSurface& surface) {
    out << "a\\b";
    for (double b : surface.b_values) out << ',' << g17(b);
    out << '\n';
    for (std::size_t ai = 0; ai < surface.a_values.size(); ++ai) {
        out << g17(surface.a_values[ai]);
        for (std::size_t bi = 0; bi < surface.b_values.size(); ++bi)
            out << ',' << g17(surface.error[ai][bi]);
        out << '\n';
    }
}

}  // namespace crnpp
