#pragma once

// Domain model for day-level university course scheduling: the semester
// calendar, weekly meeting times, rooms/buildings, organizations, course
// sections, and objective weights. An Instance is immutable after
// validation and safe for concurrent readers.
//
// All indices are 0-based in memory. Documents use 1-based ids; the
// conversion happens in io.hpp.

#include <optional>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

#include "ucsched/common.hpp"

namespace ucsched {

// Whether the rooms initially assigned by the registrar must stay inside
// each section's room set (scenario R) or may be dropped (scenario NR).
enum class Scenario { NR, R };

inline const char* to_string(Scenario s) { return s == Scenario::R ? "R" : "NR"; }

inline Scenario scenario_from_string(const std::string& s) {
    if (s == "R" || s == "r") return Scenario::R;
    if (s == "NR" || s == "nr") return Scenario::NR;
    throw ValidationError("scenario: expected \"R\" or \"NR\", got \"" + s + "\"");
}

struct Calendar {
    int weeks = 0;               // W
    int days_per_week = 5;      // 5 or 6 instruction days
    int slots_per_week = 0;     // equal-duration timeslots per academic week
    int slot_minutes = 30;
    std::vector<char> holiday;  // size days(); 1 = no instruction

    int days() const { return weeks * days_per_week; }
    int slots_per_day() const { return slots_per_week / days_per_week; }

    // Day index of (week, weekday); weekday 0 = Monday.
    int day_of(int week, int weekday) const { return week * days_per_week + weekday; }
    int week_of_day(int day) const { return day / days_per_week; }
    int weekday_of_day(int day) const { return day % days_per_week; }
    bool is_holiday(int day) const { return holiday[static_cast<std::size_t>(day)] != 0; }

    bool operator==(const Calendar&) const = default;
};

// An uninterrupted weekly period (weekday + start + length in slots).
struct MeetingTime {
    int weekday = 0;
    int start_slot = 0;       // slot within the day
    int duration_slots = 1;

    // First occupied slot on the weekly grid.
    int first_weekly_slot(const Calendar& cal) const {
        return weekday * cal.slots_per_day() + start_slot;
    }
    bool overlaps(const MeetingTime& other) const {
        return weekday == other.weekday && start_slot < other.start_slot + other.duration_slots &&
               other.start_slot < start_slot + duration_slots;
    }
    bool operator==(const MeetingTime&) const = default;
};

struct Room {
    int building = 0;
    int floor = 0;  // 0 = basement
    int capacity = 1;
    std::vector<char> closed;             // size days(); 1 = not available
    std::vector<int> adjacent;            // sorted room indices, same building+floor
    std::vector<int> incompatible;        // sorted section indices (equipment mismatch)

    bool closed_on(int day) const { return closed[static_cast<std::size_t>(day)] != 0; }
    bool compatible_with(int section) const {
        return !std::binary_search(incompatible.begin(), incompatible.end(), section);
    }
    bool adjacent_to(int room) const {
        return std::binary_search(adjacent.begin(), adjacent.end(), room);
    }
    bool operator==(const Room&) const = default;
};

struct Organization {
    std::vector<double> building_penalty;  // one entry per building, >= 0

    bool operator==(const Organization&) const = default;
};

struct Section {
    int level = 0;
    int enrollment = 0;
    int organization = 0;
    int duration_slots = 1;
    std::vector<int> meeting_times;   // sorted by (weekday, start, id): the engine scan order
    std::vector<int> weekly_counts;   // in-person meetings per week in a normal semester
    std::vector<char> blocked_days;   // size days(); 1 = no in-person meeting allowed
    std::optional<int> initial_room;
    double min_fraction = 1.0;        // in (0, 1]
    bool exam_block = false;          // pre-scheduled exam series; quota is scheduled first

    // Per-section caps overriding the defaults in Weights.
    std::optional<double> max_distance_penalty;
    std::optional<double> max_preference_penalty;
    std::optional<double> max_wasted_seats;

    // Derived on load.
    std::vector<int> cumulative_counts;  // prefix sums of weekly_counts
    int first_week = 0;
    int last_week = 0;

    int total_meetings() const {
        return cumulative_counts.empty() ? 0 : cumulative_counts.back();
    }
    bool uses_time(int time) const {
        return std::binary_search(meeting_times.begin(), meeting_times.end(), time);
    }
    bool blocked_on(int day) const { return blocked_days[static_cast<std::size_t>(day)] != 0; }
    // A section is irregular when specific days are blocked off, i.e. its
    // in-person pattern is not "every eligible week at its weekly times".
    bool irregular() const {
        return std::any_of(blocked_days.begin(), blocked_days.end(), [](char c) { return c != 0; });
    }

    bool operator==(const Section&) const = default;
};

struct Weights {
    // Component weights of the seven-part objective.
    double room_count = 15.0;
    double distance = 1.0;
    double preference = 50.0;
    double wasted_seat = 0.0;
    double online = 1000.0;
    double timing = 100.0;
    double fairness = 1e6;
    // Sub-weights of the distance penalty.
    double building_distance = 1.0;
    double extra_building = 100.0;
    double floor_span = 10.0;
    double extra_floor = 30.0;
    double nonadjacent_pair = 3.0;

    double online_exponent = 1.0;  // >= 1; convexity evens out online shares
    std::vector<double> importance_by_level = {4, 5, 4, 3, 2, 1, 1, 1, 1, 1};

    int max_rooms = 5;
    // Default per-section caps on room-set quality; sections may override.
    double max_distance_penalty = 480.0;
    double max_preference_penalty = 2.0;
    double max_wasted_seats = 20.0;

    bool enforce_min_fraction = false;  // treat the fairness floor as a hard constraint

    bool operator==(const Weights&) const = default;
};

struct Instance {
    Calendar calendar;
    std::vector<MeetingTime> meeting_times;
    std::vector<std::vector<double>> building_distance;  // symmetric, zero diagonal
    std::vector<Room> rooms;
    std::vector<Organization> organizations;
    std::vector<Section> sections;
    Weights weights;

    int num_buildings() const { return static_cast<int>(building_distance.size()); }
    int num_rooms() const { return static_cast<int>(rooms.size()); }
    int num_sections() const { return static_cast<int>(sections.size()); }
    int num_meeting_times() const { return static_cast<int>(meeting_times.size()); }

    double importance_of(int section) const {
        const int level = sections[static_cast<std::size_t>(section)].level;
        return weights.importance_by_level[static_cast<std::size_t>(level)];
    }
    // The per-section weight on the where-components and the online share.
    double section_weight(int section) const {
        const Section& s = sections[static_cast<std::size_t>(section)];
        return importance_of(section) * s.enrollment * s.total_meetings() * s.duration_slots;
    }
    double max_distance_penalty_of(int section) const {
        const Section& s = sections[static_cast<std::size_t>(section)];
        return s.max_distance_penalty.value_or(weights.max_distance_penalty);
    }
    double max_preference_penalty_of(int section) const {
        const Section& s = sections[static_cast<std::size_t>(section)];
        return s.max_preference_penalty.value_or(weights.max_preference_penalty);
    }
    double max_wasted_seats_of(int section) const {
        const Section& s = sections[static_cast<std::size_t>(section)];
        return s.max_wasted_seats.value_or(weights.max_wasted_seats);
    }
    // Meetings needed to satisfy the fairness floor of a section.
    int fairness_quota_of(int section) const {
        const Section& s = sections[static_cast<std::size_t>(section)];
        return fraction_quota(s.min_fraction, s.total_meetings());
    }

    bool operator==(const Instance&) const = default;
};

// ---------------------------------------------------------------------------
// Derivation and validation

// Fills cumulative_counts / first_week / last_week from weekly_counts.
inline void derive_cumulative(Section& section) {
    section.cumulative_counts.assign(section.weekly_counts.size(), 0);
    int running = 0;
    int first = -1, last = -1;
    for (std::size_t w = 0; w < section.weekly_counts.size(); ++w) {
        running += section.weekly_counts[w];
        section.cumulative_counts[w] = running;
        if (section.weekly_counts[w] > 0) {
            if (first < 0) first = static_cast<int>(w);
            last = static_cast<int>(w);
        }
    }
    section.first_week = std::max(first, 0);
    section.last_week = std::max(last, 0);
}

namespace detail {

inline std::string idx(const char* name, std::size_t i) {
    std::ostringstream os;
    os << name << "[" << (i + 1) << "]";  // diagnostics use 1-based document ids
    return os.str();
}

}  // namespace detail

// Validates every cross-reference and structural invariant; derives section
// cumulative counts. Throws ValidationError naming the offending entity.
inline void validate_instance(Instance& inst) {
    const Calendar& cal = inst.calendar;
    if (cal.weeks < 1) throw ValidationError("calendar.weeks: must be >= 1");
    if (cal.days_per_week != 5 && cal.days_per_week != 6)
        throw ValidationError("calendar.days_per_week: must be 5 or 6");
    if (cal.slots_per_week < cal.days_per_week || cal.slots_per_week % cal.days_per_week != 0)
        throw ValidationError("calendar.timeslots_per_week: must be a positive multiple of days_per_week");
    if (cal.slot_minutes < 1) throw ValidationError("calendar.timeslot_minutes: must be >= 1");
    if (static_cast<int>(cal.holiday.size()) != cal.days())
        throw ValidationError("calendar.holidays: flag vector must cover every day");

    const int spd = cal.slots_per_day();
    for (std::size_t m = 0; m < inst.meeting_times.size(); ++m) {
        const MeetingTime& mt = inst.meeting_times[m];
        const std::string where = detail::idx("meeting_times", m);
        if (mt.weekday < 0 || mt.weekday >= cal.days_per_week)
            throw ValidationError(where + ".day_of_week: out of range");
        if (mt.duration_slots < 1) throw ValidationError(where + ".duration_slots: must be >= 1");
        if (mt.start_slot < 0 || mt.start_slot + mt.duration_slots > spd)
            throw ValidationError(where + ": occupied slots must lie within one day");
        for (std::size_t m2 = 0; m2 < m; ++m2) {
            if (inst.meeting_times[m2] == mt)
                throw ValidationError(where + ": duplicate of " + detail::idx("meeting_times", m2));
        }
    }

    const int B = inst.num_buildings();
    if (static_cast<int>(inst.building_distance.size()) != B)
        throw ValidationError("buildings.distances: matrix must be square");
    for (int b = 0; b < B; ++b) {
        if (static_cast<int>(inst.building_distance[b].size()) != B)
            throw ValidationError(detail::idx("buildings", b) + ".distances: row length must equal building count");
        if (inst.building_distance[b][b] != 0.0)
            throw ValidationError(detail::idx("buildings", b) + ".distances: self-distance must be 0");
        for (int c = 0; c < B; ++c) {
            if (inst.building_distance[b][c] < 0.0)
                throw ValidationError(detail::idx("buildings", b) + ".distances: negative entry");
            if (inst.building_distance[b][c] != inst.building_distance[c][b])
                throw ValidationError(detail::idx("buildings", b) + ".distances: matrix must be symmetric");
        }
    }

    for (std::size_t r = 0; r < inst.rooms.size(); ++r) {
        Room& room = inst.rooms[r];
        const std::string where = detail::idx("rooms", r);
        if (room.building < 0 || room.building >= B)
            throw ValidationError(where + ".building: unknown building");
        if (room.floor < 0) throw ValidationError(where + ".floor: must be >= 0");
        if (room.capacity < 1) throw ValidationError(where + ".capacity: must be >= 1");
        if (static_cast<int>(room.closed.size()) != cal.days())
            throw ValidationError(where + ".unavailable_days: flag vector must cover every day");
        std::sort(room.adjacent.begin(), room.adjacent.end());
        room.adjacent.erase(std::unique(room.adjacent.begin(), room.adjacent.end()), room.adjacent.end());
        for (int q : room.adjacent) {
            if (q < 0 || q >= inst.num_rooms())
                throw ValidationError(where + ".adjacent_rooms: unknown room");
            if (q == static_cast<int>(r))
                throw ValidationError(where + ".adjacent_rooms: room cannot be adjacent to itself");
            const Room& other = inst.rooms[static_cast<std::size_t>(q)];
            if (other.building != room.building || other.floor != room.floor)
                throw ValidationError(where + ".adjacent_rooms: adjacent rooms must share building and floor (room " +
                                      std::to_string(q + 1) + ")");
        }
    }
    // Adjacency is stored symmetrically; accept one-sided edge lists.
    for (std::size_t r = 0; r < inst.rooms.size(); ++r) {
        for (int q : inst.rooms[r].adjacent) {
            auto& back = inst.rooms[static_cast<std::size_t>(q)].adjacent;
            if (!std::binary_search(back.begin(), back.end(), static_cast<int>(r))) {
                back.insert(std::lower_bound(back.begin(), back.end(), static_cast<int>(r)),
                            static_cast<int>(r));
            }
        }
    }

    for (std::size_t g = 0; g < inst.organizations.size(); ++g) {
        const Organization& org = inst.organizations[g];
        const std::string where = detail::idx("organizations", g);
        if (static_cast<int>(org.building_penalty.size()) != B)
            throw ValidationError(where + ".building_penalties: one penalty per building required");
        for (double p : org.building_penalty) {
            if (p < 0.0) throw ValidationError(where + ".building_penalties: negative penalty");
        }
    }

    const Weights& w = inst.weights;
    for (double a : {w.room_count, w.distance, w.preference, w.wasted_seat, w.online, w.timing,
                     w.fairness, w.building_distance, w.extra_building, w.floor_span, w.extra_floor,
                     w.nonadjacent_pair}) {
        if (a < 0.0) throw ValidationError("weights: component weights must be >= 0");
    }
    if (w.online_exponent < 1.0) throw ValidationError("weights.online_exponent: must be >= 1");
    if (w.max_rooms < 1) throw ValidationError("weights.max_rooms: must be >= 1");
    if (w.importance_by_level.empty())
        throw ValidationError("weights.importance_by_level: must not be empty");
    for (double v : w.importance_by_level) {
        if (v < 0.0) throw ValidationError("weights.importance_by_level: negative importance");
    }

    for (std::size_t s = 0; s < inst.sections.size(); ++s) {
        Section& sec = inst.sections[s];
        const std::string where = detail::idx("sections", s);
        if (sec.level < 0 || sec.level >= static_cast<int>(w.importance_by_level.size()))
            throw ValidationError(where + ".level: no importance defined for this level");
        if (sec.enrollment < 0) throw ValidationError(where + ".enrollment: must be >= 0");
        if (sec.organization < 0 || sec.organization >= static_cast<int>(inst.organizations.size()))
            throw ValidationError(where + ".organization: unknown organization");
        if (sec.duration_slots < 1 || sec.duration_slots > spd)
            throw ValidationError(where + ".duration_slots: must fit within one day");
        if (sec.meeting_times.empty())
            throw ValidationError(where + ".meeting_times: at least one meeting time required");
        for (int m : sec.meeting_times) {
            if (m < 0 || m >= inst.num_meeting_times())
                throw ValidationError(where + ".meeting_times: unknown meeting time");
            if (inst.meeting_times[static_cast<std::size_t>(m)].duration_slots != sec.duration_slots)
                throw ValidationError(where + ".meeting_times: meeting time " + std::to_string(m + 1) +
                                      " duration differs from section duration");
        }
        // A section cannot meet twice at once; overlapping own times are
        // rejected (the model gives no meaning to such a pattern).
        for (std::size_t i = 0; i < sec.meeting_times.size(); ++i) {
            for (std::size_t j = i + 1; j < sec.meeting_times.size(); ++j) {
                const auto& a = inst.meeting_times[static_cast<std::size_t>(sec.meeting_times[i])];
                const auto& b = inst.meeting_times[static_cast<std::size_t>(sec.meeting_times[j])];
                if (a == b) throw ValidationError(where + ".meeting_times: duplicate meeting time");
                if (a.overlaps(b))
                    throw ValidationError(where + ".meeting_times: meeting times overlap in time");
            }
        }
        // Engine scan order: ascending (weekday, start slot, id).
        std::sort(sec.meeting_times.begin(), sec.meeting_times.end(), [&](int a, int b) {
            const auto& ma = inst.meeting_times[static_cast<std::size_t>(a)];
            const auto& mb = inst.meeting_times[static_cast<std::size_t>(b)];
            return std::tie(ma.weekday, ma.start_slot, a) < std::tie(mb.weekday, mb.start_slot, b);
        });

        if (static_cast<int>(sec.weekly_counts.size()) != cal.weeks)
            throw ValidationError(where + ".weekly_counts: one entry per week required");
        for (int n : sec.weekly_counts) {
            if (n < 0) throw ValidationError(where + ".weekly_counts: negative count");
        }
        if (static_cast<int>(sec.blocked_days.size()) != cal.days())
            throw ValidationError(where + ".blocked_days: flag vector must cover every day");
        if (sec.initial_room) {
            const int r = *sec.initial_room;
            if (r < 0 || r >= inst.num_rooms())
                throw ValidationError(where + ".initial_room: unknown room");
            if (!inst.rooms[static_cast<std::size_t>(r)].compatible_with(static_cast<int>(s)))
                throw ValidationError(where + ".initial_room: room is not compatible with this section");
        }
        if (!(sec.min_fraction > 0.0 && sec.min_fraction <= 1.0))
            throw ValidationError(where + ".min_fraction: MinFraction out of range (0, 1]");
        for (auto cap : {sec.max_distance_penalty, sec.max_preference_penalty, sec.max_wasted_seats}) {
            if (cap && *cap < 0.0) throw ValidationError(where + ": cap overrides must be >= 0");
        }

        derive_cumulative(sec);
        if (sec.total_meetings() < 1)
            throw ValidationError(where + ".weekly_counts: section has no in-person meetings");

        // The weekly count can never exceed the eligible meeting times that
        // actually fall on usable days of that week.
        for (int week = 0; week < cal.weeks; ++week) {
            int eligible = 0;
            for (int m : sec.meeting_times) {
                const int day = cal.day_of(week, inst.meeting_times[static_cast<std::size_t>(m)].weekday);
                if (!cal.is_holiday(day) && !sec.blocked_on(day)) ++eligible;
            }
            if (sec.weekly_counts[static_cast<std::size_t>(week)] > eligible)
                throw ValidationError(where + ".weekly_counts: week " + std::to_string(week + 1) +
                                      " exceeds the eligible meeting times of that week");
        }
    }
}

}  // namespace ucsched
