#pragma once

// Feasibility checking and exact objective evaluation over a Schedule.
//
// A Schedule fixes, per section, a set of rooms (unchanged all semester) and
// a set of (meeting time, week) mass meetings. The room r hosts section s at
// (m, w) exactly when r is in the section's room set and (m, w) is one of its
// meetings. All functions here are pure; they never mutate the instance.

#include <array>
#include <cassert>
#include <map>

#include "ucsched/model.hpp"

namespace ucsched {

struct SectionAssignment {
    std::vector<int> rooms;                       // sorted, distinct
    std::vector<std::pair<int, int>> meetings;    // (meeting time, week), sorted, distinct

    bool has_meeting(int time, int week) const {
        return std::binary_search(meetings.begin(), meetings.end(), std::make_pair(time, week));
    }
    bool operator==(const SectionAssignment&) const = default;
};

struct Schedule {
    std::vector<SectionAssignment> sections;

    static Schedule empty_for(const Instance& inst) {
        Schedule s;
        s.sections.resize(static_cast<std::size_t>(inst.num_sections()));
        return s;
    }
    bool operator==(const Schedule&) const = default;
};

enum class ViolationKind {
    Capacity,
    Compatibility,
    InitRoom,
    MaxRooms,
    DoubleBooking,
    RoomUnavailable,
    Holiday,
    BlockedDay,
    NotMeetingTime,
    MinFraction,
};

inline const char* to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::Capacity: return "capacity";
        case ViolationKind::Compatibility: return "compatibility";
        case ViolationKind::InitRoom: return "init_room";
        case ViolationKind::MaxRooms: return "max_rooms";
        case ViolationKind::DoubleBooking: return "double_booking";
        case ViolationKind::RoomUnavailable: return "room_unavailable";
        case ViolationKind::Holiday: return "holiday";
        case ViolationKind::BlockedDay: return "blocked_day";
        case ViolationKind::NotMeetingTime: return "not_meeting_time";
        case ViolationKind::MinFraction: return "min_fraction";
    }
    return "?";
}

// One witnessed constraint violation. Coordinates are -1 when not applicable.
struct Violation {
    ViolationKind kind;
    int section = -1;
    int room = -1;
    int meeting_time = -1;
    int week = -1;
    int day = -1;
    std::string message;
};

// Spatial quality of one fixed room set.
struct SpatialMetrics {
    int room_count = 0;
    double max_building_distance = 0.0;
    int building_count = 0;
    int floor_span = 0;        // sum over buildings of (highest - lowest used floor)
    int extra_floors = 0;      // used (building, floor) pairs beyond one per building
    int nonadjacent_pairs = 0;
    double distance_penalty = 0.0;
    double preference_penalty = 0.0;
    int wasted_seats = 0;
};

// Timing quality of one section's mass-meeting pattern.
struct TimingMetrics {
    std::vector<int> weekly;       // mass meetings per week
    std::vector<int> cumulative;   // prefix sums
    int scheduled_total = 0;       // cumulative.back()
    double timing_penalty = 0.0;
    bool fairness_met = false;     // scheduled_total >= fairness quota
    double online_fraction = 0.0;  // (normal - scheduled) / normal
};

struct SectionDiagnostics {
    bool has_rooms = false;
    SpatialMetrics spatial;
    TimingMetrics timing;
};

struct ObjectiveBreakdown {
    std::array<double, 7> components{};  // weighted totals, in component order
    double total = 0.0;
    std::vector<SectionDiagnostics> per_section;
};

// ---------------------------------------------------------------------------

// Computes the spatial metrics of `rooms` for `section`. Throws on an empty
// room set: a room-less assignment has no spatial meaning.
inline SpatialMetrics spatial_metrics(const Instance& inst, const std::vector<int>& rooms,
                                      int section, const Weights& w) {
    if (rooms.empty()) throw std::invalid_argument("spatial_metrics: empty room set");
    SpatialMetrics out;
    out.room_count = static_cast<int>(rooms.size());

    // Distinct buildings and per-building floor ranges.
    std::map<int, std::pair<int, int>> floor_range;           // building -> (lo, hi)
    std::set<std::pair<int, int>> building_floors;            // used (building, floor)
    int capacity = 0;
    for (int r : rooms) {
        const Room& room = inst.rooms[static_cast<std::size_t>(r)];
        capacity += room.capacity;
        auto [it, fresh] = floor_range.try_emplace(room.building, std::make_pair(room.floor, room.floor));
        if (!fresh) {
            it->second.first = std::min(it->second.first, room.floor);
            it->second.second = std::max(it->second.second, room.floor);
        }
        building_floors.emplace(room.building, room.floor);
    }
    out.building_count = static_cast<int>(floor_range.size());
    for (const auto& [b, range] : floor_range) out.floor_span += range.second - range.first;
    out.extra_floors = static_cast<int>(building_floors.size()) - out.building_count;

    for (auto it = floor_range.begin(); it != floor_range.end(); ++it) {
        for (auto jt = std::next(it); jt != floor_range.end(); ++jt) {
            out.max_building_distance = std::max(
                out.max_building_distance,
                inst.building_distance[static_cast<std::size_t>(it->first)][static_cast<std::size_t>(jt->first)]);
        }
    }
    for (std::size_t i = 0; i < rooms.size(); ++i) {
        for (std::size_t j = i + 1; j < rooms.size(); ++j) {
            if (!inst.rooms[static_cast<std::size_t>(rooms[i])].adjacent_to(rooms[j]))
                ++out.nonadjacent_pairs;
        }
    }

    out.distance_penalty = w.building_distance * out.max_building_distance +
                           w.extra_building * (out.building_count - 1) +
                           w.floor_span * out.floor_span + w.extra_floor * out.extra_floors +
                           w.nonadjacent_pair * out.nonadjacent_pairs;

    const Organization& org =
        inst.organizations[static_cast<std::size_t>(inst.sections[static_cast<std::size_t>(section)].organization)];
    for (const auto& [b, range] : floor_range) {
        out.preference_penalty = std::max(out.preference_penalty,
                                          org.building_penalty[static_cast<std::size_t>(b)]);
    }
    out.wasted_seats = capacity - inst.sections[static_cast<std::size_t>(section)].enrollment;
    return out;
}

// Computes the timing metrics of `meetings` for `section`; total function.
inline TimingMetrics timing_metrics(const Instance& inst, int section,
                                    const std::vector<std::pair<int, int>>& meetings) {
    const Section& sec = inst.sections[static_cast<std::size_t>(section)];
    const int W = inst.calendar.weeks;
    TimingMetrics out;
    out.weekly.assign(static_cast<std::size_t>(W), 0);
    for (const auto& [time, week] : meetings) ++out.weekly[static_cast<std::size_t>(week)];
    out.cumulative.assign(static_cast<std::size_t>(W), 0);
    int running = 0;
    for (int w = 0; w < W; ++w) {
        running += out.weekly[static_cast<std::size_t>(w)];
        out.cumulative[static_cast<std::size_t>(w)] = running;
    }
    out.scheduled_total = running;

    // Absolute deviation of the cumulative count from a straight line that
    // reaches the final count at the section's last active week.
    const int span = sec.last_week - sec.first_week + 1;
    for (int w = sec.first_week; w <= sec.last_week; ++w) {
        const double prorated =
            static_cast<double>(w - sec.first_week + 1) / static_cast<double>(span) * out.scheduled_total;
        out.timing_penalty += std::abs(out.cumulative[static_cast<std::size_t>(w)] - prorated);
    }

    const int normal = sec.total_meetings();
    out.fairness_met = out.scheduled_total >= fraction_quota(sec.min_fraction, normal);
    out.online_fraction = static_cast<double>(normal - out.scheduled_total) / static_cast<double>(normal);
    return out;
}

// ---------------------------------------------------------------------------
// Feasibility (hard constraints; the fairness floor only when enforced)

inline std::vector<Violation> check_feasibility(const Instance& inst, const Schedule& sched,
                                                Scenario scenario = Scenario::NR) {
    std::vector<Violation> out;
    const Calendar& cal = inst.calendar;
    assert(sched.sections.size() == static_cast<std::size_t>(inst.num_sections()));

    auto add = [&out](ViolationKind kind, int s, int r, int m, int w, int d, std::string msg) {
        out.push_back(Violation{kind, s, r, m, w, d, std::move(msg)});
    };

    for (int s = 0; s < inst.num_sections(); ++s) {
        const Section& sec = inst.sections[static_cast<std::size_t>(s)];
        const SectionAssignment& a = sched.sections[static_cast<std::size_t>(s)];

        if (!a.meetings.empty() && a.rooms.empty()) {
            add(ViolationKind::Capacity, s, -1, -1, -1, -1,
                "section " + std::to_string(s + 1) + " has meetings but no rooms");
        }
        if (!a.rooms.empty()) {
            int capacity = 0;
            for (int r : a.rooms) capacity += inst.rooms[static_cast<std::size_t>(r)].capacity;
            if (capacity < sec.enrollment) {
                add(ViolationKind::Capacity, s, -1, -1, -1, -1,
                    "section " + std::to_string(s + 1) + ": room capacity " + std::to_string(capacity) +
                        " < enrollment " + std::to_string(sec.enrollment));
            }
            for (int r : a.rooms) {
                if (!inst.rooms[static_cast<std::size_t>(r)].compatible_with(s)) {
                    add(ViolationKind::Compatibility, s, r, -1, -1, -1,
                        "room " + std::to_string(r + 1) + " is not compatible with section " +
                            std::to_string(s + 1));
                }
            }
            if (scenario == Scenario::R && sec.initial_room &&
                !std::binary_search(a.rooms.begin(), a.rooms.end(), *sec.initial_room)) {
                add(ViolationKind::InitRoom, s, *sec.initial_room, -1, -1, -1,
                    "section " + std::to_string(s + 1) + " must keep its initially assigned room " +
                        std::to_string(*sec.initial_room + 1));
            }
            if (static_cast<int>(a.rooms.size()) > inst.weights.max_rooms) {
                add(ViolationKind::MaxRooms, s, -1, -1, -1, -1,
                    "section " + std::to_string(s + 1) + " uses " + std::to_string(a.rooms.size()) +
                        " rooms, limit is " + std::to_string(inst.weights.max_rooms));
            }
        }

        for (const auto& [time, week] : a.meetings) {
            const MeetingTime& mt = inst.meeting_times[static_cast<std::size_t>(time)];
            const int day = cal.day_of(week, mt.weekday);
            if (!sec.uses_time(time)) {
                add(ViolationKind::NotMeetingTime, s, -1, time, week, day,
                    "section " + std::to_string(s + 1) + " does not normally meet at meeting time " +
                        std::to_string(time + 1));
            }
            if (sec.blocked_on(day)) {
                add(ViolationKind::BlockedDay, s, -1, time, week, day,
                    "section " + std::to_string(s + 1) + " cannot meet on day " + std::to_string(day + 1));
            }
            if (cal.is_holiday(day)) {
                add(ViolationKind::Holiday, s, -1, time, week, day,
                    "day " + std::to_string(day + 1) + " is a holiday");
            }
            for (int r : a.rooms) {
                if (inst.rooms[static_cast<std::size_t>(r)].closed_on(day)) {
                    add(ViolationKind::RoomUnavailable, s, r, time, week, day,
                        "room " + std::to_string(r + 1) + " is unavailable on day " + std::to_string(day + 1));
                }
            }
        }
    }

    // At most one section in a room at any (slot, week): claim slots in
    // section order and report the first claimant on conflict.
    {
        const int T = cal.slots_per_week;
        std::map<std::pair<int, int>, std::vector<int>> claimed;  // (room, week) -> slot -> section+1
        for (int s = 0; s < inst.num_sections(); ++s) {
            const SectionAssignment& a = sched.sections[static_cast<std::size_t>(s)];
            for (const auto& [time, week] : a.meetings) {
                const MeetingTime& mt = inst.meeting_times[static_cast<std::size_t>(time)];
                const int first = mt.first_weekly_slot(cal);
                for (int r : a.rooms) {
                    auto& slots = claimed[{r, week}];
                    if (slots.empty()) slots.assign(static_cast<std::size_t>(T), 0);
                    bool reported = false;
                    for (int t = first; t < first + mt.duration_slots; ++t) {
                        const int prev = slots[static_cast<std::size_t>(t)];
                        if (prev != 0 && prev != s + 1 && !reported) {
                            add(ViolationKind::DoubleBooking, s, r, time, week, -1,
                                "room " + std::to_string(r + 1) + " double-booked at slot " +
                                    std::to_string(t + 1) + " of week " + std::to_string(week + 1) +
                                    " by sections " + std::to_string(prev) + " and " + std::to_string(s + 1));
                            reported = true;
                        }
                        if (prev == 0) slots[static_cast<std::size_t>(t)] = s + 1;
                    }
                }
            }
        }
    }

    if (inst.weights.enforce_min_fraction) {
        for (int s = 0; s < inst.num_sections(); ++s) {
            const Section& sec = inst.sections[static_cast<std::size_t>(s)];
            const int quota = inst.fairness_quota_of(s);
            const int have = static_cast<int>(sched.sections[static_cast<std::size_t>(s)].meetings.size());
            if (have < quota) {
                add(ViolationKind::MinFraction, s, -1, -1, -1, -1,
                    "section " + std::to_string(s + 1) + " has " + std::to_string(have) +
                        " in-person meetings, fairness floor requires " + std::to_string(quota) +
                        " of " + std::to_string(sec.total_meetings()));
            }
        }
    }
    return out;
}

inline bool hard_feasible(const Instance& inst, const Schedule& sched,
                          Scenario scenario = Scenario::NR) {
    return check_feasibility(inst, sched, scenario).empty();
}

// ---------------------------------------------------------------------------
// Objective

inline SectionDiagnostics evaluate_section(const Instance& inst, int section,
                                           const SectionAssignment& a, const Weights& w) {
    SectionDiagnostics d;
    d.has_rooms = !a.rooms.empty();
    if (d.has_rooms) d.spatial = spatial_metrics(inst, a.rooms, section, w);
    d.timing = timing_metrics(inst, section, a.meetings);
    return d;
}

// The seven weighted contributions of one section, given its diagnostics.
// Room-less sections carry no spatial cost; the model never scores them.
inline std::array<double, 7> section_components(const Instance& inst, int section,
                                                const SectionDiagnostics& d, const Weights& w) {
    const Section& sec = inst.sections[static_cast<std::size_t>(section)];
    const double importance = w.importance_by_level[static_cast<std::size_t>(sec.level)];
    const double base = importance * sec.enrollment * sec.total_meetings() * sec.duration_slots;
    std::array<double, 7> c{};
    if (d.has_rooms) {
        c[0] = w.room_count * base * (d.spatial.room_count - 1);
        c[1] = w.distance * base * d.spatial.distance_penalty;
        c[2] = w.preference * base * d.spatial.preference_penalty;
        // Wasted seats are a campus-wide loss, so importance and enrollment
        // are left out of this component.
        c[3] = w.wasted_seat * sec.total_meetings() * sec.duration_slots * d.spatial.wasted_seats;
    }
    c[4] = w.online * base * std::pow(d.timing.online_fraction, w.online_exponent);
    // Timing irregularity grows with the meeting count by itself, so the
    // normal meeting count is left out of this component.
    c[5] = w.timing * importance * sec.enrollment * sec.duration_slots * d.timing.timing_penalty;
    c[6] = w.fairness * base * (d.timing.fairness_met ? 0.0 : 1.0);
    return c;
}

// Full evaluation of a schedule. Components are summed in ascending section
// order so that repeated evaluation is bit-stable.
inline ObjectiveBreakdown objective(const Instance& inst, const Schedule& sched,
                                    const Weights& w) {
    ObjectiveBreakdown out;
    out.per_section.reserve(static_cast<std::size_t>(inst.num_sections()));
    for (int s = 0; s < inst.num_sections(); ++s) {
        out.per_section.push_back(
            evaluate_section(inst, s, sched.sections[static_cast<std::size_t>(s)], w));
    }
    for (int s = 0; s < inst.num_sections(); ++s) {
        const auto c = section_components(inst, s, out.per_section[static_cast<std::size_t>(s)], w);
        for (int k = 0; k < 7; ++k) out.components[static_cast<std::size_t>(k)] += c[static_cast<std::size_t>(k)];
    }
    for (double c : out.components) out.total += c;
    return out;
}

inline ObjectiveBreakdown objective(const Instance& inst, const Schedule& sched) {
    return objective(inst, sched, inst.weights);
}

}  // namespace ucsched
