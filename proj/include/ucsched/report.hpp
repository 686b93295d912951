#pragma once

// Run reports: the objective breakdown plus the campus-level statistics an
// operator reads after a solve (rooms/floors/buildings per section, the
// building-preference histogram, classroom student-hours, and the share of
// sections above/below the usual in-person thresholds). Every statistic is
// recomputable from the instance and schedule alone.

#include "ucsched/gen.hpp"
#include "ucsched/io.hpp"

namespace ucsched {

struct ReportOptions {
    std::optional<double> average_room_sets;  // from the solver's catalog, when known
    int large_enrollment = 100;               // "large section" threshold
    double low_share = 0.30;
    double high_share = 0.80;
};

inline Json build_report(const Instance& inst, const Schedule& sched,
                         const ObjectiveBreakdown& breakdown, const ReportOptions& opts = {}) {
    Json report;
    Json objective_json;
    objective_json["component_room_count"] = breakdown.components[0];
    objective_json["component_distance"] = breakdown.components[1];
    objective_json["component_preference"] = breakdown.components[2];
    objective_json["component_wasted_seats"] = breakdown.components[3];
    objective_json["component_online"] = breakdown.components[4];
    objective_json["component_timing"] = breakdown.components[5];
    objective_json["component_fairness"] = breakdown.components[6];
    objective_json["total"] = breakdown.total;
    report["objective"] = std::move(objective_json);

    double sum_rooms = 0, sum_floors = 0, sum_bldgs = 0;
    double wsum_rooms = 0, wsum_floors = 0, wsum_bldgs = 0;
    long long students = 0;
    int with_rooms = 0;
    std::map<double, int> pref_histogram;
    int fairness_failures = 0;
    int small_total = 0, large_total = 0;
    int small_low = 0, large_low = 0, small_high = 0, large_high = 0;

    for (int s = 0; s < inst.num_sections(); ++s) {
        const Section& sec = inst.sections[static_cast<std::size_t>(s)];
        const SectionDiagnostics& d = breakdown.per_section[static_cast<std::size_t>(s)];
        if (d.has_rooms) {
            ++with_rooms;
            const int floors = d.spatial.extra_floors + d.spatial.building_count;
            sum_rooms += d.spatial.room_count;
            sum_floors += floors;
            sum_bldgs += d.spatial.building_count;
            wsum_rooms += static_cast<double>(sec.enrollment) * d.spatial.room_count;
            wsum_floors += static_cast<double>(sec.enrollment) * floors;
            wsum_bldgs += static_cast<double>(sec.enrollment) * d.spatial.building_count;
            students += sec.enrollment;
            ++pref_histogram[d.spatial.preference_penalty];
        }
        if (!d.timing.fairness_met) ++fairness_failures;

        const double share = 1.0 - d.timing.online_fraction;
        const bool large = sec.enrollment >= opts.large_enrollment;
        (large ? large_total : small_total) += 1;
        if (share < opts.low_share) (large ? large_low : small_low) += 1;
        if (share >= opts.high_share) (large ? large_high : small_high) += 1;
    }

    auto ratio = [](double num, double den) { return den > 0 ? num / den : 0.0; };
    report["sections"] = inst.num_sections();
    report["sections_with_rooms"] = with_rooms;
    report["rooms_per_section"] = {{"section_avg", ratio(sum_rooms, with_rooms)},
                                   {"student_avg", ratio(wsum_rooms, static_cast<double>(students))}};
    report["floors_per_section"] = {{"section_avg", ratio(sum_floors, with_rooms)},
                                    {"student_avg", ratio(wsum_floors, static_cast<double>(students))}};
    report["buildings_per_section"] = {{"section_avg", ratio(sum_bldgs, with_rooms)},
                                       {"student_avg", ratio(wsum_bldgs, static_cast<double>(students))}};

    Json hist = Json::object();
    for (const auto& [penalty, count] : pref_histogram) {
        std::ostringstream key;
        key << penalty;
        hist[key.str()] = count;
    }
    report["preference_penalty_histogram"] = std::move(hist);

    const double total_hours = gen::total_student_hours(inst);
    const double mass_hours = gen::mass_meeting_student_hours(inst, sched);
    report["student_hours"] = {{"total", total_hours},
                               {"mass_meeting", mass_hours},
                               {"mass_meeting_share", ratio(mass_hours, total_hours)}};

    report["fairness"] = {{"sections_below_floor", fairness_failures},
                          {"met", fairness_failures == 0}};
    report["in_person_share"] = {
        {"small_sections", small_total},
        {"large_sections", large_total},
        {"small_below_30pct", ratio(small_low, small_total)},
        {"large_below_30pct", ratio(large_low, large_total)},
        {"small_at_least_80pct", ratio(small_high, small_total)},
        {"large_at_least_80pct", ratio(large_high, large_total)},
    };
    if (opts.average_room_sets) report["avg_room_sets_per_section"] = *opts.average_room_sets;

    Json per_section = Json::array();
    for (int s = 0; s < inst.num_sections(); ++s) {
        const SectionDiagnostics& d = breakdown.per_section[static_cast<std::size_t>(s)];
        per_section.push_back({{"id", s + 1},
                               {"rooms", d.spatial.room_count},
                               {"distance_penalty", d.spatial.distance_penalty},
                               {"preference_penalty", d.spatial.preference_penalty},
                               {"wasted_seats", d.has_rooms ? d.spatial.wasted_seats : 0},
                               {"scheduled_meetings", d.timing.scheduled_total},
                               {"normal_meetings", inst.sections[static_cast<std::size_t>(s)].total_meetings()},
                               {"timing_penalty", d.timing.timing_penalty},
                               {"online_fraction", d.timing.online_fraction},
                               {"fairness_met", d.timing.fairness_met}});
    }
    report["per_section"] = std::move(per_section);
    return report;
}

}  // namespace ucsched
