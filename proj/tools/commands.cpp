#include "commands.hpp"

#include "scenarios.hpp"

#include "ltvcomm/json.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

namespace ltvcomm::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct GridFlags {
    std::optional<double> t0;
    std::optional<double> tf;
    std::size_t points = kDefaultGridPoints;
    double tol = kDefaultConstancyTol;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--t0", t0, "Start of the checking grid (default: first system's t0)");
        cmd.add_option("--tf", tf, "End of the checking grid (default: t0 + 10)");
        cmd.add_option("--grid", points, "Number of grid points")->check(CLI::Range(std::size_t{2}, std::size_t{10'000'000}));
        cmd.add_option("--tol", tol, "Relative tolerance for constancy and residual checks")
            ->check(CLI::PositiveNumber);
    }

    TimeGrid grid_for(const LTVSystem& first) const {
        const double start = t0.value_or(first.t0);
        const double end = tf.value_or(start + kDefaultSpan);
        if (!(end > start)) throw std::invalid_argument("--tf must exceed --t0");
        return {start, end, points};
    }
};

std::string describe(const PairConstants& k) {
    std::ostringstream os;
    os.precision(12);
    os << "(" << k.c2 << ", " << k.c1 << ", " << k.c0 << ")";
    return os.str();
}

void summarize(std::ostream& err, const char* label, const CommutativityReport& r) {
    err << label << ": " << to_string(r.verdict);
    if (r.constants) err << " constants=" << describe(*r.constants);
    if (r.failed_condition) err << " [" << *r.failed_condition << "]";
    err << "\n";
}

std::vector<Window> parse_windows(const std::vector<std::string>& specs) {
    std::vector<Window> out;
    for (const auto& s : specs) {
        const auto comma = s.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("window must be 'lo,hi': " + s);
        Window w{std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
        if (!(w.hi >= w.lo)) throw std::invalid_argument("window must have lo <= hi: " + s);
        out.push_back(w);
    }
    return out;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
    if (!f) throw std::runtime_error("failed writing " + path.string());
}

// ---------------------------------------------------------------------------

struct CheckCmd {
    std::string a, b;
    GridFlags grid;

    int run(std::ostream& out, std::ostream& err) const {
        const LTVSystem sa = load_system(a);
        const LTVSystem sb = load_system(b);
        const CommutativityReport r = check_pair(sa, sb, grid.grid_for(sa), grid.tol);
        out << to_json(r).dump(2) << "\n";
        summarize(err, "A,B", r);
        return r.commutative() ? kSuccess : kCheckFailed;
    }
};

struct SynthesizeCmd {
    std::string a, k, output;
    std::optional<double> y0;
    double tol = kDefaultConstancyTol;

    int run(std::ostream& out, std::ostream& err) const {
        const LTVSystem sa = load_system(a);
        const PairConstants constants = parse_constants(k);
        validate(constants);
        LTVSystem sb;
        try {
            sb = synthesize_pair(sa, constants, tol);
            if (y0) sb.ic = required_ic(sa, constants, *y0, tol);
        } catch (const EligibilityError& e) {
            err << "error: " << e.what() << "\n";
            return kCheckFailed;
        } catch (const InitialStateError& e) {
            err << "error: " << e.what() << "\n";
            return kCheckFailed;
        }
        save_system(sb, output);
        out << to_json(sb).dump(2) << "\n";
        err << "wrote " << output << " with constants " << describe(constants) << "\n";
        return kSuccess;
    }
};

struct TransitivityCmd {
    std::string a, b, c;
    GridFlags grid;

    int run(std::ostream& out, std::ostream& err) const {
        const LTVSystem sa = load_system(a);
        const LTVSystem sb = load_system(b);
        const LTVSystem sc = load_system(c);
        const TransitivityReport r = check_transitivity(sa, sb, sc, grid.grid_for(sa), grid.tol);
        out << to_json(r).dump(2) << "\n";
        summarize(err, "A,B", r.ab);
        summarize(err, "B,C", r.bc);
        summarize(err, "A,C", r.ac);
        if (r.composed) err << "composed constants " << describe(r.composed->p) << "\n";
        err << (r.holds() ? "transitivity holds" : "transitivity not established") << "\n";
        return r.holds() ? kSuccess : kCheckFailed;
    }
};

struct SimulateCmd {
    std::vector<std::string> chain;
    std::string input = "0";
    double step = 0.02;
    std::optional<double> t0;
    double tf = kDefaultSpan;
    std::string integrator = "bs3";
    bool reverse = false;
    bool compare_orders = false;
    std::vector<std::string> windows;
    std::optional<double> max_diff;
    std::string output;

    int run(std::ostream& out, std::ostream& err) const {
        std::vector<LTVSystem> systems;
        for (const auto& path : chain) systems.push_back(load_system(path));
        if (reverse) std::reverse(systems.begin(), systems.end());

        SimulationConfig cfg;
        cfg.t0 = t0.value_or(systems.front().t0);
        cfg.tf = tf;
        cfg.step = step;
        cfg.integrator = integrator == "rk4" ? Integrator::RK4Reference : Integrator::BS3;
        cfg.input = parse(input);
        (void)cfg.steps();

        std::ostringstream csv;
        json summary = {{"integrator", to_string(cfg.integrator)},
                        {"step", cfg.step},
                        {"t0", cfg.t0},
                        {"tf", cfg.tf},
                        {"input", cfg.input.render()}};
        int code = kSuccess;

        const Trajectory first = simulate_chain(systems, cfg);
        if (compare_orders) {
            std::vector<LTVSystem> flipped(systems.rbegin(), systems.rend());
            const Trajectory second = simulate_chain(flipped, cfg);
            const std::vector<Window> ws = parse_windows(windows);
            const ComparisonMetrics m = compare(first, second, ws);
            write_comparison_csv(csv, first, second);
            summary["comparison"] = to_json(m);
            err << "max |first - second| = " << m.max_abs_diff << "\n";
            if (max_diff && m.max_abs_diff > *max_diff) {
                err << "difference exceeds --max-diff " << *max_diff << "\n";
                code = kCheckFailed;
            }
        } else {
            write_csv(csv, first);
            summary["samples"] = first.times.size();
            summary["final_output"] = first.values.back();
        }

        if (output.empty()) {
            out << csv.str();
            err << summary.dump() << "\n";
        } else {
            write_file(output, csv.str());
            summary["csv"] = output;
            out << summary.dump(2) << "\n";
        }
        return code;
    }
};

struct ScenarioCmd {
    int figure = 2;
    std::string dir;

    int run(std::ostream& out, std::ostream& err) const {
        const ScenarioSpec& s = builtin_scenario(figure);
        fs::create_directories(dir);
        const fs::path root(dir);

        save_system(s.a, root / "A.json");
        save_system(s.b, root / "B.json");
        save_system(s.c, root / "C.json");

        const TimeGrid grid = default_grid(s.a.t0);
        const TransitivityReport tr = check_transitivity(s.a, s.b, s.c, grid);
        const double a0 = commutativity_invariant(s.a, grid).value;
        const double b0 = commutativity_invariant(s.b, grid).value;
        const double c0 = commutativity_invariant(s.c, grid).value;
        const Composition comp = compose_constants(s.k, s.m);
        const PairConstants& p = comp.p;
        const InitialState sc = s.c.state_or_zero();

        struct PairRun {
            const char* name;
            std::array<LTVSystem, 2> order;
        };
        const std::array<PairRun, 3> pairs{{{"AB_BA", {s.a, s.b}}, {"BC_CB", {s.b, s.c}}, {"CA_AC", {s.c, s.a}}}};

        // Six independent simulations; each future owns its result.
        std::vector<std::future<Trajectory>> runs;
        for (const auto& pr : pairs) {
            runs.push_back(std::async(std::launch::async, [&pr, &s] { return simulate_chain(pr.order, s.sim); }));
            runs.push_back(std::async(std::launch::async, [&pr, &s] {
                const std::array<LTVSystem, 2> flipped{pr.order[1], pr.order[0]};
                return simulate_chain(flipped, s.sim);
            }));
        }

        json sims = json::object();
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const Trajectory first = runs[2 * i].get();
            const Trajectory second = runs[2 * i + 1].get();
            std::ostringstream csv;
            write_comparison_csv(csv, first, second);
            write_file(root / (std::string(pairs[i].name) + ".csv"), csv.str());
            sims[pairs[i].name] = to_json(compare(first, second, s.windows));
        }

        json summary = {
            {"scenario", s.name},
            {"systems", {{"A", to_json(s.a)}, {"B", to_json(s.b)}, {"C", to_json(s.c)}}},
            {"structure_functions",
             {{"A", structure_function(s.a).render()},
              {"B", structure_function(s.b).render()},
              {"C", structure_function(s.c).render()}}},
            {"invariants",
             {{"A0", a0},
              {"B0", b0},
              {"C0", c0},
              {"B0_from_constants", transform_invariant(a0, s.k)},
              {"C0_from_constants", transform_invariant(b0, s.m)}}},
            {"constants",
             {{"k", to_json(s.k)},
              {"m", to_json(s.m)},
              {"p", to_json(p)},
              {"p_degenerate", comp.degenerate},
              {"l", to_json(invert_constants(s.k))},
              {"n", to_json(invert_constants(s.m))}}},
            {"initial_state_conditions",
             {{"ratio_ab", derivative_ratio(s.a, s.k)},
              {"ratio_bc", derivative_ratio(s.b, s.m)},
              {"ratio_ac", derivative_ratio(s.a, p)},
              {"composed_quadratic_residual", std::abs(quadratic_condition(a0, p))},
              {"composed_derivative_residual", std::abs(sc.dy0 - derivative_ratio(s.a, p) * sc.y0)}}},
            {"transitivity", to_json(tr)},
            {"simulation",
             {{"input", s.sim.input.render()},
              {"step", s.sim.step},
              {"t0", s.sim.t0},
              {"tf", s.sim.tf},
              {"integrator", to_string(s.sim.integrator)},
              {"pairs", sims}}},
        };
        write_file(root / "summary.json", summary.dump(2) + "\n");
        out << summary.dump(2) << "\n";

        err << s.name << ": A0=" << a0 << " B0=" << b0 << " C0=" << c0 << " p=" << describe(p) << "\n";
        summarize(err, "A,B", tr.ab);
        summarize(err, "B,C", tr.bc);
        summarize(err, "A,C", tr.ac);
        return kSuccess;
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Commutativity and transitivity checks for cascaded second-order LTV systems", "ltvcomm"};
    app.require_subcommand(1);

    CheckCmd check;
    auto* c = app.add_subcommand("check", "Check whether two systems form a commutative pair");
    c->add_option("--a", check.a, "First system file")->required();
    c->add_option("--b", check.b, "Second system file")->required();
    check.grid.add_to(*c);

    SynthesizeCmd synth;
    auto* s = app.add_subcommand("synthesize", "Build the commutative partner of a system");
    s->add_option("--a", synth.a, "Source system file")->required();
    s->add_option("--k", synth.k, "Pair constants k2,k1,k0")->required();
    s->add_option("--y0", synth.y0, "Nonzero initial output; the derivative is set to commute");
    s->add_option("-o,--output", synth.output, "Output system file")->required();
    s->add_option("--tol", synth.tol, "Relative tolerance")->check(CLI::PositiveNumber);

    TransitivityCmd trans;
    auto* t = app.add_subcommand("transitivity", "Check (A,B), (B,C) and the implied (A,C)");
    t->add_option("--a", trans.a, "System A file")->required();
    t->add_option("--b", trans.b, "System B file")->required();
    t->add_option("--c", trans.c, "System C file")->required();
    trans.grid.add_to(*t);

    SimulateCmd sim;
    auto* m = app.add_subcommand("simulate", "Simulate a cascade; optionally compare with the reversed order");
    m->add_option("--chain", sim.chain, "Comma-separated system files, first receives the input")
        ->required()
        ->delimiter(',');
    m->add_option("--input", sim.input, "Input signal expression");
    m->add_option("--step", sim.step, "Fixed step")->check(CLI::PositiveNumber);
    m->add_option("--t0", sim.t0, "Start time (default: first system's t0)");
    m->add_option("--tf", sim.tf, "Final time");
    m->add_option("--integrator", sim.integrator, "bs3 or rk4")->check(CLI::IsMember({"bs3", "rk4"}));
    m->add_flag("--reverse", sim.reverse, "Reverse the chain order");
    m->add_flag("--compare", sim.compare_orders, "Also run the reversed order and emit the comparison CSV");
    m->add_option("--window", sim.windows, "Comparison window lo,hi (repeatable)")->take_all();
    m->add_option("--max-diff", sim.max_diff, "Exit 1 when the compared outputs differ by more than this");
    m->add_option("-o,--output", sim.output, "CSV output file (default: stdout)");

    ScenarioCmd scenario;
    auto* p = app.add_subcommand("paper", "Reproduce a built-in example scenario");
    p->add_option("--figure", scenario.figure, "Scenario 2, 3 or 4")->required()->check(CLI::IsMember({2, 3, 4}));
    p->add_option("-o,--output", scenario.dir, "Output directory")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    }

    try {
        if (c->parsed()) return check.run(out, err);
        if (s->parsed()) return synth.run(out, err);
        if (t->parsed()) return trans.run(out, err);
        if (m->parsed()) return sim.run(out, err);
        if (p->parsed()) return scenario.run(out, err);
    } catch (const SimulationError& e) {
        err << "error: " << e.what() << "\n";
        return kCheckFailed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }
    return kUsageError;
}

}  // namespace ltvcomm::cli
