#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crnpp/crn_json.hpp"
#include "crnpp/csv.hpp"
#include "crnpp/error_analysis.hpp"
#include "crnpp/oracle.hpp"
#include "crnpp/parser.hpp"
#include "crnpp/simulate.hpp"
#include "crnpp/svg.hpp"
#include "crnpp/validate.hpp"

namespace crnpp::cli {

namespace fs = std::filesystem;

struct UserError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Published CRN sizes (species, reactions) for the bundled programs; used by
// `compile --stats` to print a side-by-side comparison.
inline const std::map<std::string, std::pair<int, int>>& published_sizes() {
    static const std::map<std::string, std::pair<int, int>> table = {
        {"counter", {25, 31}},  {"factorial", {26, 33}}, {"int_division", {32, 39}},
        {"int_sqrt", {26, 32}}, {"euler", {24, 20}},     {"pi", {29, 29}},
    };
    return table;
}

inline std::string resolve_program(const std::string& path) {
    if (fs::exists(path)) return path;
    if (const char* env = std::getenv("CRNPP_EXAMPLES")) {
        fs::path candidate = fs::path(env) / path;
        if (fs::exists(candidate)) return candidate.string();
    }
    throw UserError("program file not found: " + path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UserError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ValidatedProgram load_program(const std::string& path) {
    std::string source = read_file(path);
    auto parsed = parse(source);
    for (const auto& d : parsed.diags.items) std::cerr << d.format(path) << '\n';
    if (!parsed.ok()) throw UserError("parse failed");
    auto vr = validate(*parsed.program);
    for (const auto& d : vr.diags.items) std::cerr << d.format(path) << '\n';
    if (!vr.ok()) throw UserError("validation failed");
    return *vr.validated;
}

inline std::map<std::string, double> parse_bindings(const std::vector<std::string>& defs) {
    std::map<std::string, double> out;
    for (const auto& def : defs) {
        auto eq = def.find('=');
        if (eq == std::string::npos || eq == 0)
            throw UserError("bad parameter binding '" + def + "', expected name=value");
        try {
            out[def.substr(0, eq)] = std::stod(def.substr(eq + 1));
        } catch (...) {
            throw UserError("bad numeric value in '" + def + "'");
        }
    }
    return out;
}

inline void write_text(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path);
    if (!out) throw UserError("cannot write " + path.string());
    out << content;
}

struct CommonArgs {
    std::string program;
    std::vector<std::string> param_defs;
    std::string out_dir = "out";
    double epsilon = 0.5;
    int cycles = 6;
    double phase_duration = 50.0;
    std::string clock = "ideal";
    double clock_eps = 1e-10;
    double clock_total = 2.0;

    std::map<std::string, double> bindings() const { return parse_bindings(param_defs); }

    ClockBackend backend() const {
        if (clock == "ideal") return IdealClock{phase_duration};
        if (clock == "oscillator") return OscillatorClock{};
        throw UserError("unknown clock backend '" + clock + "' (ideal|oscillator)");
    }

    CompileConfig compile_config() const {
        CompileConfig cfg;
        cfg.epsilon = epsilon;
        cfg.clock_eps = clock_eps;
        cfg.clock_total = clock_total;
        return cfg;
    }
};

inline Json manifest_base(const std::string& command, const CommonArgs& args,
                          const std::string& resolved) {
    Json m;
    m["tool"] = "crnpp";
    m["command"] = command;
    m["program"] = resolved;
    Json params = Json::object();
    for (const auto& [k, v] : parse_bindings(args.param_defs)) params[k] = v;
    m["params"] = params;
    m["epsilon"] = args.epsilon;
    m["clock"] = args.clock;
    m["cycles"] = args.cycles;
    m["phase_duration"] = args.phase_duration;
    SolverConfig solver;
    m["solver"] = {{"rel_tol", solver.rel_tol},
                   {"abs_tol", solver.abs_tol},
                   {"max_step", solver.max_step}};
    return m;
}

inline void emit_manifest(Json manifest, const std::vector<std::string>& outputs,
                          const fs::path& dir) {
    manifest["outputs"] = outputs;
    write_text(dir / "manifest.json", dump_json(manifest));
}

inline std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

// ---- subcommands -----------------------------------------------------------

inline int cmd_compile(const CommonArgs& args, bool stats) {
    std::string path = resolve_program(args.program);
    auto vp = load_program(path);
    auto outcome = compile(vp, args.bindings(), args.compile_config());
    for (const auto& d : outcome.diags.items) std::cerr << d.format(path) << '\n';
    if (!outcome.ok()) return 1;
    const CompiledProgram& cp = *outcome.compiled;

    std::size_t n_species = cp.crn.all_species().size();
    std::size_t n_reactions = cp.crn.reactions.size();

    if (stats) {
        std::cout << path << ": " << n_species << " species, " << n_reactions << " reactions, "
                  << cp.schedule.total_phases << " phases\n";
        auto ref = published_sizes().find(stem_of(path));
        if (ref != published_sizes().end()) {
            auto pct = [](std::size_t ours, int theirs) {
                return 100.0 * (static_cast<double>(ours) - theirs) / theirs;
            };
            std::cout << "  published reference: " << ref->second.first << " species, "
                      << ref->second.second << " reactions (delta "
                      << g17(pct(n_species, ref->second.first)).substr(0, 6) << "% / "
                      << g17(pct(n_reactions, ref->second.second)).substr(0, 6) << "%)\n";
        }
    }

    fs::path dir(args.out_dir);
    std::string stem = stem_of(path);
    write_text(dir / (stem + ".crn.json"), dump_json(to_json(cp)));
    emit_manifest(manifest_base("compile", args, path), {stem + ".crn.json"}, dir);
    std::cout << "wrote " << (dir / (stem + ".crn.json")).string() << '\n';
    return 0;
}

inline int cmd_simulate(const CommonArgs& args, const std::string& plot_list, int downsample) {
    std::string path = resolve_program(args.program);
    auto vp = load_program(path);
    auto outcome = compile(vp, args.bindings(), args.compile_config());
    for (const auto& d : outcome.diags.items) std::cerr << d.format(path) << '\n';
    if (!outcome.ok()) return 1;

    SimulateOptions opts;
    opts.cycles = args.cycles;
    Trace trace = simulate(*outcome.compiled, args.backend(), opts);

    fs::path dir(args.out_dir);
    std::string stem = stem_of(path);
    std::vector<std::string> outputs;

    std::ostringstream csv;
    write_trace_csv(csv, trace, downsample);
    write_text(dir / (stem + ".trace.csv"), csv.str());
    outputs.push_back(stem + ".trace.csv");

    if (!plot_list.empty()) {
        std::vector<SvgSeries> series;
        std::istringstream names(plot_list);
        std::string name;
        while (std::getline(names, name, ',')) {
            std::optional<std::size_t> col;
            for (std::size_t i = 0; i < trace.species.size(); ++i)
                if (trace.species[i].str() == name) col = i;
            if (!col) throw UserError("plot species '" + name + "' not in trace");
            SvgSeries s;
            s.label = name;
            std::size_t stride = std::max<std::size_t>(1, trace.rows() / 2000);
            for (std::size_t row = 0; row < trace.rows(); row += stride) {
                s.x.push_back(trace.times[row]);
                s.y.push_back(trace.states[row][*col]);
            }
            series.push_back(std::move(s));
        }
        write_text(dir / (stem + ".plot.svg"), svg_line_chart(stem, series));
        outputs.push_back(stem + ".plot.svg");
    }

    emit_manifest(manifest_base("simulate", args, path), outputs, dir);
    double t_end = trace.times.empty() ? 0.0 : trace.times.back();
    std::cout << "simulated " << args.cycles << " cycles (" << g17(t_end) << " time units), wrote "
              << (dir / (stem + ".trace.csv")).string() << '\n';
    return 0;
}

inline int cmd_oracle(const CommonArgs& args) {
    std::string path = resolve_program(args.program);
    auto vp = load_program(path);
    OracleTimeline tl = interpret(vp, args.bindings(), args.cycles, args.epsilon);

    fs::path dir(args.out_dir);
    std::string stem = stem_of(path);
    std::ostringstream csv;
    write_timeline_csv(csv, tl);
    write_text(dir / (stem + ".timeline.csv"), csv.str());
    emit_manifest(manifest_base("oracle", args, path), {stem + ".timeline.csv"}, dir);
    std::cout << "wrote " << (dir / (stem + ".timeline.csv")).string() << '\n';
    return 0;
}

inline int cmd_check_error(const CommonArgs& args, const std::string& track_list,
                           double max_error) {
    std::string path = resolve_program(args.program);
    auto vp = load_program(path);

    std::vector<std::string> tracked;
    std::istringstream names(track_list);
    std::string name;
    while (std::getline(names, name, ',')) tracked.push_back(name);
    if (tracked.empty()) throw UserError("--track requires at least one species");

    SimulateOptions opts;
    opts.cycles = args.cycles;
    ErrorReport report = evaluate_error(vp, args.bindings(), tracked, args.backend(), opts,
                                        args.compile_config());

    for (const auto& tie : report.tie_warnings)
        std::cerr << path << ": warning: comparison tie in cycle " << tie.cycle << ", step "
                  << tie.step << "; conditional outcome undefined\n";

    fs::path dir(args.out_dir);
    std::string stem = stem_of(path);
    std::vector<std::string> outputs;

    std::ostringstream report_csv;
    write_error_report_csv(report_csv, report);
    write_text(dir / (stem + ".error.csv"), report_csv.str());
    outputs.push_back(stem + ".error.csv");

    std::ostringstream curve_csv;
    write_error_curve_csv(curve_csv, report);
    write_text(dir / (stem + ".error_curve.csv"), curve_csv.str());
    outputs.push_back(stem + ".error_curve.csv");

    std::vector<SvgSeries> series;
    for (const auto& sr : report.tracked) {
        SvgSeries s;
        s.label = "err " + sr.species;
        std::size_t stride = std::max<std::size_t>(1, sr.curve.size() / 2000);
        for (std::size_t i = 0; i < sr.curve.size(); i += stride) {
            s.x.push_back(sr.curve[i].first);
            s.y.push_back(sr.curve[i].second);
        }
        series.push_back(std::move(s));
    }
    write_text(dir / (stem + ".error.svg"),
               svg_line_chart(stem + " error", series, "time", "|error|"));
    outputs.push_back(stem + ".error.svg");

    emit_manifest(manifest_base("check-error", args, path), outputs, dir);

    for (const auto& sr : report.tracked)
        std::cout << sr.species << ": max " << g17(sr.max_error) << ", final "
                  << g17(sr.final_error) << ", growth/cycle " << g17(sr.growth_per_cycle) << '\n';

    if (max_error >= 0.0 && report.max_error() > max_error) {
        std::cerr << "max error " << g17(report.max_error()) << " exceeds threshold "
                  << g17(max_error) << '\n';
        return 1;
    }
    return 0;
}

inline int cmd_sweep(const std::string& module_name, const SweepGrid& grid, double phase_duration,
                     const std::string& out_dir) {
    ModuleKind kind;
    if (module_name == "add")
        kind = ModuleKind::Add;
    else if (module_name == "sub")
        kind = ModuleKind::Sub;
    else if (module_name == "mul")
        kind = ModuleKind::Mul;
    else if (module_name == "div")
        kind = ModuleKind::Div;
    else
        throw UserError("sweep module must be one of add, sub, mul, div");

    SweepConfig cfg;
    cfg.phase_duration = phase_duration;
    ErrorSurface surface = sweep_module_error(kind, grid, cfg);

    fs::path dir(out_dir);
    std::ostringstream csv;
    write_surface_csv(csv, surface);
    std::string stem = "sweep_" + module_name;
    write_text(dir / (stem + ".csv"), csv.str());
    write_text(dir / (stem + ".svg"),
               svg_heatmap(module_name + " |error|", surface.a_values, surface.b_values,
                           surface.error));

    Json manifest;
    manifest["tool"] = "crnpp";
    manifest["command"] = "sweep";
    manifest["module"] = module_name;
    manifest["grid"] = {{"min", grid.min}, {"max", grid.max}, {"step", grid.step}};
    manifest["phase_duration"] = phase_duration;
    emit_manifest(manifest, {stem + ".csv", stem + ".svg"}, dir);

    std::size_t ai = 0, bi = 0;
    double peak = surface.max_cell(ai, bi);
    std::cout << "max |error| " << g17(peak) << " at a=" << g17(surface.a_values[ai])
              << ", b=" << g17(surface.b_values[bi]) << '\n';
    return 0;
}

inline int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"CRN++ compiler, mass-action simulator, and error analysis"};
    app.require_subcommand(1);

    CommonArgs common;
    bool stats = false;
    std::string plot_list;
    int downsample = 1;
    std::string track_list;
    double max_error = -1.0;
    std::string sweep_module;
    SweepGrid grid;
    double sweep_phase_duration = 10.0;

    auto add_common = [&](CLI::App* cmd, bool with_clock) {
        cmd->add_option("program", common.program, "path to a .crnpp source file")->required();
        cmd->add_option("-p,--param", common.param_defs, "bind a parameter, name=value");
        cmd->add_option("-o,--out", common.out_dir, "output directory (default: out)");
        cmd->add_option("--eps", common.epsilon, "comparison offset epsilon (default 0.5)");
        if (with_clock) {
            cmd->add_option("--clock", common.clock, "clock backend: ideal|oscillator");
            cmd->add_option("--cycles", common.cycles, "number of program cycles (default 6)");
            cmd->add_option("--phase-duration", common.phase_duration,
                            "ideal clock phase length (default 50)");
            cmd->add_option("--clock-eps", common.clock_eps,
                            "resting clock species initial (default 1e-10)");
            cmd->add_option("--clock-total", common.clock_total,
                            "clock pulse mass (default 2.0)");
        }
    };

    CLI::App* compile_cmd = app.add_subcommand("compile", "lower a program to a CRN (JSON)");
    add_common(compile_cmd, false);
    compile_cmd->add_flag("--stats", stats, "print species/reaction counts");

    CLI::App* simulate_cmd = app.add_subcommand("simulate", "integrate the compiled CRN");
    add_common(simulate_cmd, true);
    simulate_cmd->add_option("--plot", plot_list, "comma-separated species to plot (SVG)");
    simulate_cmd->add_option("--downsample", downsample, "keep every Nth trace row");

    CLI::App* oracle_cmd = app.add_subcommand("oracle", "run the exact reference interpreter");
    add_common(oracle_cmd, false);
    oracle_cmd->add_option("--cycles", common.cycles, "number of program cycles (default 6)");

    CLI::App* check_cmd =
        app.add_subcommand("check-error", "compare simulation against the oracle");
    add_common(check_cmd, true);
    check_cmd->add_option("--track", track_list, "comma-separated species to track")->required();
    check_cmd->add_option("--max-error", max_error, "fail if any tracked error exceeds this");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "module error surface over operand grid");
    sweep_cmd->add_option("module", sweep_module, "one of add, sub, mul, div")->required();
    sweep_cmd->add_option("--min", grid.min, "grid minimum (default 0.5)");
    sweep_cmd->add_option("--max", grid.max, "grid maximum (default 10)");
    sweep_cmd->add_option("--step", grid.step, "grid step (default 0.5)");
    sweep_cmd->add_option("--phase-duration", sweep_phase_duration,
                          "phase length for each cell (default 10)");
    sweep_cmd->add_option("-o,--out", common.out_dir, "output directory (default: out)");

    std::vector<const char*> argv;
    argv.push_back("crnpp");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(compile_cmd)) return cmd_compile(common, stats);
        if (app.got_subcommand(simulate_cmd)) return cmd_simulate(common, plot_list, downsample);
        if (app.got_subcommand(oracle_cmd)) return cmd_oracle(common);
        if (app.got_subcommand(check_cmd)) return cmd_check_error(common, track_list, max_error);
        if (app.got_subcommand(sweep_cmd))
            return cmd_sweep(sweep_module, grid, sweep_phase_duration, common.out_dir);
    } catch (const UserError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const SimulationError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const OracleError& e) {
        std::cerr << "oracle failure: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

}  // namespace crnpp::cli
