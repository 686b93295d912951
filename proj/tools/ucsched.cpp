// Command-line front end: generate instances, validate documents, solve,
// evaluate schedules, run the exact oracle, and sweep fairness floors.

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "ucsched/driver.hpp"
#include "ucsched/oracle.hpp"

namespace {

using namespace ucsched;

struct CommonOptions {
    std::string instance_path;
    std::string config_path;
    std::string scenario = "NR";
    std::uint64_t seed = 1;
    int runs = 1;
    double time_limit = 60.0;
    std::uint64_t max_iters = 0;
    double min_fraction = 0.0;  // 0 = keep instance values
    bool enforce_min_fraction = false;
    std::string out_dir = "out";
    int workers = 0;  // 0 = UCSCHED_WORKERS or 1
};

void add_solver_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--instance", opt.instance_path, "instance document (JSON)")->required();
    cmd->add_option("--config", opt.config_path, "solver config document (JSON)");
    cmd->add_option("--scenario", opt.scenario, "R = keep registrar rooms, NR = free choice")
        ->check(CLI::IsMember({"R", "NR"}));
    cmd->add_option("--seed", opt.seed, "base random seed");
    cmd->add_option("--runs", opt.runs, "independent runs (seeds seed, seed+1, ...)");
    cmd->add_option("--time-limit-secs", opt.time_limit, "wall-clock budget per run");
    cmd->add_option("--max-iters", opt.max_iters,
                    "iteration cap per run (0 = none); set it for byte-stable outputs");
    cmd->add_option("--min-fraction", opt.min_fraction,
                    "override the fairness floor of every non-exam section");
    cmd->add_flag("--enforce-min-fraction", opt.enforce_min_fraction,
                  "treat the fairness floor as a hard constraint");
    cmd->add_option("--out-dir", opt.out_dir, "output directory");
    cmd->add_option("--workers", opt.workers, "worker threads (default: UCSCHED_WORKERS or 1)");
}

int resolve_workers(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("UCSCHED_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

// Loads instance + config and applies every override. Returns the wave
// policy and anneal config alongside the patched instance.
struct LoadedProblem {
    Instance instance;
    WavePolicy policy;
    AnnealConfig anneal;
    Scenario scenario;
};

LoadedProblem load_problem(const CommonOptions& opt, bool cli_has_time_limit, bool cli_has_runs,
                           bool cli_has_seed) {
    LoadedProblem out;
    out.instance = load_instance_file(opt.instance_path);
    SolverConfig config;
    if (!opt.config_path.empty()) config = solver_config_from_json(read_json_file(opt.config_path));
    if (opt.min_fraction > 0.0) config.min_fraction = opt.min_fraction;
    if (opt.enforce_min_fraction) config.enforce_min_fraction = true;
    apply_config_to_instance(out.instance, config);

    out.policy = config.wave_policy;
    out.anneal = config.anneal;
    if (cli_has_time_limit) out.anneal.time_limit_secs = opt.time_limit;
    if (cli_has_runs) out.anneal.runs = opt.runs;
    if (cli_has_seed) out.anneal.seed = opt.seed;
    if (opt.max_iters > 0) out.anneal.max_iters = opt.max_iters;
    out.anneal.workers = resolve_workers(opt.workers);
    out.scenario = config.scenario.value_or(scenario_from_string(opt.scenario));

    // In scenario R a kept initial room can force a per-section cap up; warn
    // so the operator sees the relaxation.
    if (out.scenario == Scenario::R) {
        for (int s = 0; s < out.instance.num_sections(); ++s) {
            const EffectiveCaps caps = effective_caps(out.instance, s, out.scenario);
            if (caps.preference_relaxed) {
                std::cerr << "warning: section " << (s + 1)
                          << ": preference cap relaxed to " << caps.max_preference_penalty
                          << " to keep its initial room\n";
            }
            if (caps.wasted_relaxed) {
                std::cerr << "warning: section " << (s + 1) << ": wasted-seat cap relaxed to "
                          << caps.max_wasted_seats << " to keep its initial room\n";
            }
        }
    }
    return out;
}

int cmd_generate(const std::string& preset, double scale, std::uint64_t seed, bool normal_caps,
                 bool no_init_rooms, double min_fraction, const std::string& profile_path,
                 const std::string& out_path) {
    Instance inst;
    if (preset == "figure2") {
        inst = gen::make_figure2();
    } else if (preset == "campus") {
        gen::CampusProfile profile;
        if (!profile_path.empty()) {
            const Json doc = read_json_file(profile_path);
            profile.scale = doc.value("scale", profile.scale);
            profile.pandemic_capacities = doc.value("pandemic_capacities", profile.pandemic_capacities);
            profile.initial_rooms = doc.value("initial_rooms", profile.initial_rooms);
            profile.min_fraction = doc.value("min_fraction", profile.min_fraction);
            profile.sections = doc.value("sections", profile.sections);
            profile.rooms = doc.value("rooms", profile.rooms);
            profile.buildings = doc.value("buildings", profile.buildings);
            profile.organizations = doc.value("organizations", profile.organizations);
        }
        if (scale > 0.0) profile.scale = scale;
        if (normal_caps) profile.pandemic_capacities = false;
        if (no_init_rooms) profile.initial_rooms = false;
        if (min_fraction > 0.0) profile.min_fraction = min_fraction;
        inst = gen::make_campus(profile, seed);
    } else if (preset == "tiny") {
        inst = gen::make_tiny(seed);
    } else {
        std::cerr << "error: unknown preset \"" << preset << "\"\n";
        return 1;
    }
    write_json_file(out_path, instance_to_json(inst));
    std::cout << "wrote " << out_path << " (" << inst.num_sections() << " sections, "
              << inst.num_rooms() << " rooms, " << inst.num_meeting_times() << " meeting times, "
              << inst.calendar.weeks << " weeks)\n";
    return 0;
}

int cmd_validate(const std::string& path) {
    const Instance inst = load_instance_file(path);
    std::cout << "ok: " << inst.num_sections() << " sections, " << inst.num_rooms() << " rooms, "
              << inst.num_buildings() << " buildings, " << inst.num_meeting_times()
              << " meeting times, " << inst.calendar.weeks << " weeks, " << inst.calendar.days()
              << " days\n";
    return 0;
}

int cmd_solve(const CommonOptions& opt, bool has_tl, bool has_runs, bool has_seed) {
    LoadedProblem problem = load_problem(opt, has_tl, has_runs, has_seed);
    const SolveOutcome outcome =
        solve_instance(problem.instance, problem.policy, problem.anneal, problem.scenario);
    write_solve_outputs(opt.out_dir, problem.instance, outcome);
    const RunResult& best = outcome.results.runs[outcome.results.best_index];
    std::cout << "best objective " << std::setprecision(17) << best.breakdown.total << " (run "
              << (outcome.results.best_index + 1) << " of " << outcome.results.runs.size()
              << "), fairness " << (outcome.exit_code == 0 ? "met" : "NOT met") << ", outputs in "
              << opt.out_dir << "\n";
    if (outcome.exit_code != 0) {
        for (int s = 0; s < problem.instance.num_sections(); ++s) {
            if (!best.breakdown.per_section[static_cast<std::size_t>(s)].timing.fairness_met) {
                std::cout << "below fairness floor: section " << (s + 1) << "\n";
            }
        }
    }
    return outcome.exit_code;
}

int cmd_evaluate(const std::string& instance_path, const std::string& schedule_path,
                 const std::string& scenario, bool as_json) {
    const Instance inst = load_instance_file(instance_path);
    const Schedule sched = schedule_from_json(read_json_file(schedule_path), inst);
    const auto violations = check_feasibility(inst, sched, scenario_from_string(scenario));
    const ObjectiveBreakdown breakdown = objective(inst, sched);
    if (as_json) {
        Json doc = build_report(inst, sched, breakdown);
        Json vio = Json::array();
        for (const Violation& v : violations) {
            vio.push_back({{"kind", to_string(v.kind)},
                           {"section", v.section + 1},
                           {"room", v.room + 1},
                           {"meeting_time", v.meeting_time + 1},
                           {"week", v.week + 1},
                           {"day", v.day + 1},
                           {"message", v.message}});
        }
        doc["violations"] = std::move(vio);
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << std::setprecision(17);
        const char* names[7] = {"room_count", "distance", "preference", "wasted_seats",
                                "online", "timing", "fairness"};
        for (int k = 0; k < 7; ++k) {
            std::cout << "component_" << names[k] << " = " << breakdown.components[static_cast<std::size_t>(k)]
                      << "\n";
        }
        std::cout << "total = " << breakdown.total << "\n";
        for (const Violation& v : violations) {
            std::cout << "violation [" << to_string(v.kind) << "] " << v.message << "\n";
        }
        std::cout << (violations.empty() ? "feasible" : "INFEASIBLE") << "\n";
    }
    return violations.empty() ? 0 : 1;
}

int cmd_oracle(const CommonOptions& opt, int max_sections, int max_rooms, int max_weeks,
               int max_times, std::uint64_t node_budget) {
    Instance inst = load_instance_file(opt.instance_path);
    SolverConfig config;
    if (!opt.config_path.empty()) config = solver_config_from_json(read_json_file(opt.config_path));
    if (opt.min_fraction > 0.0) config.min_fraction = opt.min_fraction;
    if (opt.enforce_min_fraction) config.enforce_min_fraction = true;
    apply_config_to_instance(inst, config);

    OracleLimits limits;
    limits.max_sections = max_sections;
    limits.max_rooms = max_rooms;
    limits.max_weeks = max_weeks;
    limits.max_meeting_times = max_times;
    limits.node_budget = node_budget;
    const OracleResult res =
        solve_exact(inst, limits, config.scenario.value_or(scenario_from_string(opt.scenario)));

    std::filesystem::create_directories(opt.out_dir);
    write_json_file(opt.out_dir + "/oracle_schedule.json", schedule_to_json(res.schedule));
    write_json_file(opt.out_dir + "/oracle_report.json", build_report(inst, res.schedule, res.breakdown));
    std::cout << "optimal objective " << std::setprecision(17) << res.breakdown.total << " ("
              << res.nodes << " nodes), outputs in " << opt.out_dir << "\n";
    return 0;
}

int cmd_sweep(const CommonOptions& opt, const std::string& fractions_txt,
              const std::string& scenarios_txt, bool has_tl, bool has_runs, bool has_seed) {
    LoadedProblem problem = load_problem(opt, has_tl, has_runs, has_seed);
    std::vector<double> fractions;
    {
        std::istringstream in(fractions_txt);
        std::string tok;
        while (std::getline(in, tok, ',')) fractions.push_back(std::stod(tok));
    }
    std::vector<Scenario> scenarios;
    {
        std::istringstream in(scenarios_txt);
        std::string tok;
        while (std::getline(in, tok, ',')) scenarios.push_back(scenario_from_string(tok));
    }
    if (fractions.empty() || scenarios.empty()) {
        std::cerr << "error: sweep needs at least one fraction and one scenario\n";
        return 1;
    }
    const auto cells = sweep_grid(problem.instance, fractions, scenarios, problem.policy, problem.anneal);
    std::filesystem::create_directories(opt.out_dir);
    write_json_file(opt.out_dir + "/sweep.json", sweep_to_json(cells));
    write_text_file(opt.out_dir + "/sweep.tsv", sweep_to_table(cells));
    std::cout << sweep_to_table(cells);
    return 0;
}

int cmd_room_sets(const std::string& instance_path, const std::string& scenario) {
    const Instance inst = load_instance_file(instance_path);
    RoomSetCatalog catalog(inst, scenario_from_string(scenario));
    std::cout << "section\troom_sets\n";
    for (int s = 0; s < inst.num_sections(); ++s) {
        std::cout << (s + 1) << "\t" << catalog.for_section(s).size() << "\n";
    }
    std::cout << "average\t" << catalog.average_count() << "\n";
    return 0;
}

int cmd_report(const std::string& instance_path, const std::string& schedule_path,
               const std::string& out_path, bool with_room_sets, const std::string& scenario) {
    const Instance inst = load_instance_file(instance_path);
    const Schedule sched = schedule_from_json(read_json_file(schedule_path), inst);
    ReportOptions opts;
    if (with_room_sets) {
        RoomSetCatalog catalog(inst, scenario_from_string(scenario));
        opts.average_room_sets = catalog.average_count();
    }
    const Json report = build_report(inst, sched, objective(inst, sched), opts);
    if (out_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        write_json_file(out_path, report);
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Day-level course scheduling toolkit: fixed room sets and "
                 "fairness-floored mass meetings over a full semester"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "emit an instance document");
    std::string preset = "campus", profile_path, gen_out = "instance.json";
    double gen_scale = 0.0, gen_min_fraction = 0.0;
    std::uint64_t gen_seed = 1;
    bool normal_caps = false, no_init_rooms = false;
    generate->add_option("--preset", preset, "figure2 | campus | tiny");
    generate->add_option("--scale", gen_scale, "campus size multiplier");
    generate->add_option("--seed", gen_seed, "random seed");
    generate->add_flag("--normal-capacities", normal_caps, "use full (non-distanced) capacities");
    generate->add_flag("--no-initial-rooms", no_init_rooms, "omit registrar room assignments");
    generate->add_option("--min-fraction", gen_min_fraction, "fairness floor for generated sections");
    generate->add_option("--profile", profile_path, "campus profile document (JSON)");
    generate->add_option("--out", gen_out, "output path");

    // validate
    auto* validate = app.add_subcommand("validate", "check an instance document");
    std::string validate_path;
    validate->add_option("--instance", validate_path, "instance document")->required();

    // solve
    CommonOptions solve_opt;
    auto* solve = app.add_subcommand("solve", "run the wave annealing solver");
    add_solver_flags(solve, solve_opt);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "score a schedule and list violations");
    std::string eval_instance, eval_schedule, eval_scenario = "NR";
    bool eval_json = false;
    evaluate->add_option("--instance", eval_instance)->required();
    evaluate->add_option("--schedule", eval_schedule)->required();
    evaluate->add_option("--scenario", eval_scenario)->check(CLI::IsMember({"R", "NR"}));
    evaluate->add_flag("--json", eval_json, "emit a JSON report");

    // oracle
    CommonOptions oracle_opt;
    auto* oracle = app.add_subcommand("oracle", "exact solver for desk-scale instances");
    add_solver_flags(oracle, oracle_opt);
    int o_sections = 5, o_rooms = 3, o_weeks = 3, o_times = 8;
    std::uint64_t o_budget = 100000000;
    oracle->add_option("--max-sections", o_sections);
    oracle->add_option("--max-rooms", o_rooms);
    oracle->add_option("--max-weeks", o_weeks);
    oracle->add_option("--max-meeting-times", o_times);
    oracle->add_option("--node-budget", o_budget);

    // sweep
    CommonOptions sweep_opt;
    auto* sweep = app.add_subcommand("sweep", "solve a grid of fairness floors and scenarios");
    add_solver_flags(sweep, sweep_opt);
    std::string fractions_txt = "0.05,0.1,0.15,0.2,0.25", scenarios_txt = "R,NR";
    sweep->add_option("--fractions", fractions_txt, "comma-separated floors in (0,1]");
    sweep->add_option("--scenarios", scenarios_txt, "comma-separated subset of R,NR");

    // room-sets
    auto* room_sets = app.add_subcommand("room-sets", "per-section room-set counts");
    std::string rs_instance, rs_scenario = "NR";
    room_sets->add_option("--instance", rs_instance)->required();
    room_sets->add_option("--scenario", rs_scenario)->check(CLI::IsMember({"R", "NR"}));

    // report
    auto* report = app.add_subcommand("report", "full statistics for an existing schedule");
    std::string rep_instance, rep_schedule, rep_out, rep_scenario = "NR";
    bool rep_room_sets = false;
    report->add_option("--instance", rep_instance)->required();
    report->add_option("--schedule", rep_schedule)->required();
    report->add_option("--out", rep_out, "output path (default: stdout)");
    report->add_flag("--with-room-sets", rep_room_sets, "include the room-set average (slower)");
    report->add_option("--scenario", rep_scenario)->check(CLI::IsMember({"R", "NR"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            return cmd_generate(preset, gen_scale, gen_seed, normal_caps, no_init_rooms,
                                gen_min_fraction, profile_path, gen_out);
        }
        if (validate->parsed()) return cmd_validate(validate_path);
        if (solve->parsed()) {
            return cmd_solve(solve_opt, solve->count("--time-limit-secs") > 0,
                             solve->count("--runs") > 0, solve->count("--seed") > 0);
        }
        if (evaluate->parsed()) return cmd_evaluate(eval_instance, eval_schedule, eval_scenario, eval_json);
        if (oracle->parsed()) {
            return cmd_oracle(oracle_opt, o_sections, o_rooms, o_weeks, o_times, o_budget);
        }
        if (sweep->parsed()) {
            return cmd_sweep(sweep_opt, fractions_txt, scenarios_txt, sweep->count("--time-limit-secs") > 0,
                             sweep->count("--runs") > 0, sweep->count("--seed") > 0);
        }
        if (room_sets->parsed()) return cmd_room_sets(rs_instance, rs_scenario);
        if (report->parsed()) {
            return cmd_report(rep_instance, rep_schedule, rep_out, rep_room_sets, rep_scenario);
        }
    } catch (const ucsched::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ucsched::OracleLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ucsched::InfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
