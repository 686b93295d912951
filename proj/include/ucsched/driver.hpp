#pragma once

// Batch orchestration shared by the command-line tool and the acceptance
// suite: multi-run solves with report files, and min-fraction sweeps.

#include <filesystem>

#include "ucsched/anneal.hpp"
#include "ucsched/report.hpp"

namespace ucsched {

struct SolveOutcome {
    MultiRunResult results;
    Json aggregate_report;
    double average_room_sets = 0.0;
    // Exit status: 0 solved with fairness met, 2 fairness unmet in the best run.
    int exit_code = 0;
};

inline Json run_report_json(const Instance& inst, const RunResult& run, double avg_room_sets) {
    ReportOptions opts;
    opts.average_room_sets = avg_room_sets;
    Json report = build_report(inst, run.schedule, run.breakdown, opts);
    report["run"] = {{"seed", run.seed},
                     {"iterations", run.iterations},
                     {"accepted", run.accepted},
                     {"rejected", run.rejected},
                     {"checkpoint_rejections", run.checkpoint_rejections},
                     {"waves_completed", run.waves_completed}};
    return report;
}

inline SolveOutcome solve_instance(const Instance& inst, const WavePolicy& policy,
                                   const AnnealConfig& cfg, Scenario scenario) {
    RoomSetCatalog catalog(inst, scenario);
    const WavePlan plan = build_waves(inst, policy);
    SolveOutcome out;
    out.results = run_many(inst, plan, catalog, cfg);
    out.average_room_sets = catalog.average_count();

    const RunResult& best = out.results.runs[out.results.best_index];
    out.exit_code = best.breakdown.components[6] > 0.0 ? 2 : 0;

    Json agg;
    agg["scenario"] = to_string(scenario);
    agg["runs"] = cfg.runs;
    agg["best_run"] = static_cast<int>(out.results.best_index) + 1;
    agg["avg_room_sets_per_section"] = out.average_room_sets;
    std::array<double, 7> mean_components{};
    double mean_total = 0.0;
    for (const RunResult& run : out.results.runs) {
        for (int k = 0; k < 7; ++k) mean_components[static_cast<std::size_t>(k)] += run.breakdown.components[static_cast<std::size_t>(k)];
        mean_total += run.breakdown.total;
    }
    for (double& v : mean_components) v /= static_cast<double>(cfg.runs);
    mean_total /= static_cast<double>(cfg.runs);
    agg["average_of_runs"] = {{"component_room_count", mean_components[0]},
                              {"component_distance", mean_components[1]},
                              {"component_preference", mean_components[2]},
                              {"component_wasted_seats", mean_components[3]},
                              {"component_online", mean_components[4]},
                              {"component_timing", mean_components[5]},
                              {"component_fairness", mean_components[6]},
                              {"total", mean_total}};
    agg["best_of_runs"] = run_report_json(inst, best, out.average_room_sets);
    out.aggregate_report = std::move(agg);
    return out;
}

// Writes schedule, per-run reports, aggregate report, and run logs.
inline void write_solve_outputs(const std::string& out_dir, const Instance& inst,
                                const SolveOutcome& outcome) {
    std::filesystem::create_directories(out_dir);
    const RunResult& best = outcome.results.runs[outcome.results.best_index];
    write_json_file(out_dir + "/best_schedule.json", schedule_to_json(best.schedule));
    write_text_file(out_dir + "/best_schedule.tsv", schedule_to_table(inst, best.schedule));
    write_json_file(out_dir + "/report.json", outcome.aggregate_report);
    for (std::size_t i = 0; i < outcome.results.runs.size(); ++i) {
        const RunResult& run = outcome.results.runs[i];
        write_json_file(out_dir + "/report-run-" + std::to_string(i + 1) + ".json",
                        run_report_json(inst, run, outcome.average_room_sets));
        std::ostringstream log;
        for (const std::string& line : run.log_lines) log << line << "\n";
        write_text_file(out_dir + "/run-" + std::to_string(i + 1) + ".log", log.str());
    }
}

// ---------------------------------------------------------------------------
// Sweeps over (min fraction, scenario)

struct SweepCell {
    double fraction;
    Scenario scenario;
    double mean_objective = 0.0;
    double min_objective = 0.0;
    double max_objective = 0.0;
    double fairness_success_rate = 0.0;
    double mean_mass_share = 0.0;
};

inline std::vector<SweepCell> sweep_grid(const Instance& base, const std::vector<double>& fractions,
                                         const std::vector<Scenario>& scenarios,
                                         const WavePolicy& policy, const AnnealConfig& cfg) {
    std::vector<SweepCell> cells;
    for (double fraction : fractions) {
        if (!(fraction > 0.0 && fraction <= 1.0))
            throw ValidationError("sweep: fractions must lie in (0, 1]");
        for (Scenario scenario : scenarios) {
            Instance inst = base;
            for (Section& sec : inst.sections) {
                if (!sec.exam_block) sec.min_fraction = fraction;
            }
            validate_instance(inst);
            SolveOutcome outcome = solve_instance(inst, policy, cfg, scenario);
            SweepCell cell{fraction, scenario};
            cell.min_objective = std::numeric_limits<double>::infinity();
            cell.max_objective = -std::numeric_limits<double>::infinity();
            int fair = 0;
            for (const RunResult& run : outcome.results.runs) {
                cell.mean_objective += run.breakdown.total;
                cell.min_objective = std::min(cell.min_objective, run.breakdown.total);
                cell.max_objective = std::max(cell.max_objective, run.breakdown.total);
                if (run.breakdown.components[6] == 0.0) ++fair;
                cell.mean_mass_share += gen::mass_meeting_student_hours(inst, run.schedule) /
                                        std::max(1.0, gen::total_student_hours(inst));
            }
            const double n = static_cast<double>(outcome.results.runs.size());
            cell.mean_objective /= n;
            cell.mean_mass_share /= n;
            cell.fairness_success_rate = fair / n;
            cells.push_back(cell);
        }
    }
    return cells;
}

inline Json sweep_to_json(const std::vector<SweepCell>& cells) {
    Json rows = Json::array();
    for (const SweepCell& c : cells) {
        rows.push_back({{"min_fraction", c.fraction},
                        {"scenario", to_string(c.scenario)},
                        {"mean_objective", c.mean_objective},
                        {"min_objective", c.min_objective},
                        {"max_objective", c.max_objective},
                        {"fairness_success_rate", c.fairness_success_rate},
                        {"mean_mass_meeting_share", c.mean_mass_share}});
    }
    return Json{{"cells", rows}};
}

inline std::string sweep_to_table(const std::vector<SweepCell>& cells) {
    std::ostringstream os;
    os << "min_fraction\tscenario\tmean_objective\tmin_objective\tmax_objective"
          "\tfairness_success_rate\tmean_mass_meeting_share\n";
    os << std::setprecision(17);
    for (const SweepCell& c : cells) {
        os << c.fraction << "\t" << to_string(c.scenario) << "\t" << c.mean_objective << "\t"
           << c.min_objective << "\t" << c.max_objective << "\t" << c.fairness_success_rate << "\t"
           << c.mean_mass_share << "\n";
    }
    return os.str();
}

}  // namespace ucsched
