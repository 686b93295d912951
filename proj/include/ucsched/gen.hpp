#pragma once

// Deterministic, seeded instance generators: a built-in 8-section toy for
// verification, synthetic campuses calibrated to a mid-size urban university
// (scalable), and small randomized instances for property tests and the
// exact oracle.

#include <functional>

#include "ucsched/pra.hpp"

namespace ucsched {
namespace gen {

// ---------------------------------------------------------------------------
// Built-in toy: 8 sections (A-H), 4 rooms, 2 weeks. Four sections meet
// Mon/Wed 10:00-11:30, four meet Mon/Wed 11:30-13:00. Pandemic capacities are
// a quarter of each section's enrollment, so the only workable room set for
// any section is all four rooms at once.

inline Instance make_figure2() {
    Instance inst;
    inst.calendar.weeks = 2;
    inst.calendar.days_per_week = 5;
    inst.calendar.slots_per_week = 60;  // 12 half-hour slots per day, 8:00-14:00
    inst.calendar.slot_minutes = 30;
    inst.calendar.holiday.assign(static_cast<std::size_t>(inst.calendar.days()), 0);

    // 10:00 = slot 4, 11:30 = slot 7 (0-based, 8:00 start), 90 minutes each.
    inst.meeting_times = {
        MeetingTime{0, 4, 3},  // Mon 10:00
        MeetingTime{2, 4, 3},  // Wed 10:00
        MeetingTime{0, 7, 3},  // Mon 11:30
        MeetingTime{2, 7, 3},  // Wed 11:30
    };

    inst.building_distance = {{0.0}};
    for (int r = 0; r < 4; ++r) {
        Room room;
        room.building = 0;
        room.floor = 1;
        room.capacity = 10;
        room.closed.assign(static_cast<std::size_t>(inst.calendar.days()), 0);
        for (int q = 0; q < 4; ++q) {
            if (q != r) room.adjacent.push_back(q);  // doors clustered in one hallway
        }
        inst.rooms.push_back(std::move(room));
    }
    inst.organizations.push_back(Organization{{0.0}});

    for (int s = 0; s < 8; ++s) {
        Section sec;
        sec.level = 1;
        sec.enrollment = 40;
        sec.organization = 0;
        sec.duration_slots = 3;
        sec.meeting_times = s < 4 ? std::vector<int>{0, 1} : std::vector<int>{2, 3};
        sec.weekly_counts = {2, 2};
        sec.blocked_days.assign(static_cast<std::size_t>(inst.calendar.days()), 0);
        sec.initial_room = s % 4;
        sec.min_fraction = 0.25;
        inst.sections.push_back(std::move(sec));
    }

    inst.weights = Weights{};  // pandemic defaults
    validate_instance(inst);
    return inst;
}

// The packed pandemic schedule of the toy: one mass meeting per section in
// all four rooms, sections A/E on Monday of week 1, B/F on Wednesday of week
// 1, C/G and D/H likewise in week 2.
inline Schedule make_figure2_schedule() {
    Schedule sched;
    sched.sections.resize(8);
    const std::vector<int> all_rooms = {0, 1, 2, 3};
    const int time_of[8] = {0, 1, 0, 1, 2, 3, 2, 3};
    const int week_of[8] = {0, 0, 1, 1, 0, 0, 1, 1};
    for (int s = 0; s < 8; ++s) {
        sched.sections[static_cast<std::size_t>(s)].rooms = all_rooms;
        sched.sections[static_cast<std::size_t>(s)].meetings = {{time_of[s], week_of[s]}};
    }
    return sched;
}

// ---------------------------------------------------------------------------
// Calibrated synthetic campus

struct Bucket {
    int lo;
    int hi;
    int count;
};

struct CampusProfile {
    double scale = 1.0;
    bool pandemic_capacities = true;
    bool initial_rooms = true;
    double min_fraction = 0.25;

    int weeks = 16;
    int days_per_week = 6;
    int slots_per_day = 26;  // 8:00-21:00 in half-hour slots
    int slot_minutes = 30;
    int holidays = 7;
    int active_weeks = 15;  // the final week carries almost no instruction

    int sections = 1834;
    int rooms = 172;
    int buildings = 17;
    int organizations = 97;
    int irregular_sections = 52;  // includes the exam series below
    int exam_series = 10;         // evening exam sections paired with day lectures

    int normal_seat_total = 9953;
    int pandemic_seat_total = 2531;
    double min_building_distance = 58.2;
    double max_building_distance = 783.7;
    int closed_rooms = 1;       // unavailable for the first closed_days days
    int closed_days = 16;

    std::vector<double> tier_penalty = {0.0, 1.0, 2.0, 6.0};
    std::vector<int> tier_size = {1, 2, 3, 11};  // buildings per preference tier, +-1 jitter

    std::vector<Bucket> level_buckets = {{0, 0, 62},   {1, 1, 656}, {2, 2, 334}, {3, 3, 316},
                                         {4, 4, 176},  {5, 6, 144}, {7, 9, 146}};
    std::vector<Bucket> enrollment_buckets = {{0, 0, 12},     {1, 19, 790},   {20, 39, 787},
                                              {40, 59, 97},   {60, 99, 75},   {100, 149, 60},
                                              {150, 250, 13}};
    std::vector<Bucket> duration_buckets = {{2, 2, 601}, {3, 3, 803}, {4, 4, 149},
                                            {5, 5, 3},   {6, 6, 267}, {7, 8, 11}};
    // Start slot of the meeting, 0 = 8:00.
    std::vector<Bucket> start_buckets = {{0, 3, 275},   {4, 7, 592},   {8, 11, 307},
                                         {12, 15, 301}, {16, 19, 315}, {20, 22, 44}};
    std::vector<Bucket> weekly_buckets = {{1, 1, 753}, {2, 2, 901}, {3, 3, 62}, {4, 4, 65}, {5, 5, 9}};
    std::vector<Bucket> normal_capacity_buckets = {{16, 29, 64},   {30, 39, 40}, {40, 49, 29},
                                                   {50, 99, 15},   {100, 199, 16}, {200, 465, 8}};
    std::vector<Bucket> covid_capacity_buckets = {{5, 9, 76},  {10, 19, 67}, {20, 29, 11},
                                                  {30, 39, 9}, {40, 70, 9}};
    std::vector<Bucket> rooms_per_building_buckets = {{2, 2, 4},   {3, 5, 4},  {6, 10, 3},
                                                      {11, 20, 4}, {21, 30, 2}};
    std::vector<Bucket> floor_buckets = {{0, 0, 27}, {1, 1, 94}, {2, 2, 34}, {3, 3, 16}, {5, 5, 1}};

    // Two-day patterns and single-day weights, tuned so the per-day section
    // counts track the targets above within a couple of percent.
    std::vector<std::pair<std::vector<int>, int>> twoday_patterns = {
        {{0, 2}, 460}, {{1, 3}, 390}, {{2, 4}, 51}};
    std::vector<int> oneday_weights = {126, 207, 107, 202, 106, 5};  // Mon..Sat
};

namespace detail {

// Expands scaled bucket quotas into one sampled value per population member,
// shuffled so attributes combine independently.
inline std::vector<int> sample_bucketed(const std::vector<Bucket>& buckets, int population, Rng& rng) {
    std::vector<int> counts;
    counts.reserve(buckets.size());
    for (const Bucket& b : buckets) counts.push_back(b.count);
    const std::vector<int> quota = allocate_quota(counts, population);
    std::vector<int> values;
    values.reserve(static_cast<std::size_t>(population));
    for (std::size_t i = 0; i < buckets.size(); ++i) {
        for (int k = 0; k < quota[i]; ++k) {
            values.push_back(rng.uniform_int(buckets[i].lo, buckets[i].hi));
        }
    }
    rng.shuffle(values);
    return values;
}

// Nudges sampled values (within their bucket bounds) until they sum to the
// target exactly.
inline void adjust_to_total(std::vector<int>& values, const std::vector<int>& lo,
                            const std::vector<int>& hi, int target) {
    long long sum = std::accumulate(values.begin(), values.end(), 0LL);
    std::size_t i = 0;
    std::size_t stuck = 0;
    while (sum != target && stuck < 4 * values.size()) {
        if (sum < target && values[i] < hi[i]) {
            ++values[i];
            ++sum;
            stuck = 0;
        } else if (sum > target && values[i] > lo[i]) {
            --values[i];
            --sum;
            stuck = 0;
        } else {
            ++stuck;
        }
        i = (i + 1) % values.size();
    }
}

inline int meeting_time_id(Instance& inst, std::map<std::tuple<int, int, int>, int>& pool,
                           int weekday, int start, int duration) {
    const auto key = std::make_tuple(weekday, start, duration);
    auto it = pool.find(key);
    if (it != pool.end()) return it->second;
    const int id = static_cast<int>(inst.meeting_times.size());
    inst.meeting_times.push_back(MeetingTime{weekday, start, duration});
    pool.emplace(key, id);
    return id;
}

}  // namespace detail

inline Weights pandemic_weights() { return Weights{}; }

inline Weights normal_assignment_weights() {
    Weights w;
    w.max_rooms = 1;
    w.max_distance_penalty = 1e12;  // irrelevant with a single room
    w.max_preference_penalty = 6.0;
    w.max_wasted_seats = 465.0;
    return w;
}

// Builds a campus instance from the profile. Deterministic for a fixed
// (profile, seed) pair.
inline Instance make_campus(const CampusProfile& profile, std::uint64_t seed) {
    if (profile.scale <= 0.0) throw ValidationError("profile.scale: must be > 0");
    if (profile.pandemic_seat_total > profile.normal_seat_total)
        throw ValidationError("profile: pandemic seats must not exceed normal seats");
    Rng rng(seed);
    auto scaled = [&](int n) { return std::max(1, static_cast<int>(std::llround(n * profile.scale))); };

    Instance inst;
    inst.weights = profile.pandemic_capacities ? pandemic_weights() : normal_assignment_weights();

    // Calendar and holidays (never in the first or final week).
    inst.calendar.weeks = profile.weeks;
    inst.calendar.days_per_week = profile.days_per_week;
    inst.calendar.slots_per_week = profile.slots_per_day * profile.days_per_week;
    inst.calendar.slot_minutes = profile.slot_minutes;
    inst.calendar.holiday.assign(static_cast<std::size_t>(inst.calendar.days()), 0);
    {
        int placed = 0;
        while (placed < profile.holidays) {
            const int week = rng.uniform_int(1, profile.weeks - 3);
            const int weekday = rng.uniform_int(0, profile.days_per_week - 1);
            const int day = inst.calendar.day_of(week, weekday);
            if (!inst.calendar.holiday[static_cast<std::size_t>(day)]) {
                inst.calendar.holiday[static_cast<std::size_t>(day)] = 1;
                ++placed;
            }
        }
    }

    // Buildings and centroid distances. One designated pair sits at the
    // minimum; the rest spread over the upper half of the range, as on a
    // real campus where most buildings are not next-door neighbors.
    const int B = scaled(profile.buildings);
    inst.building_distance.assign(static_cast<std::size_t>(B), std::vector<double>(static_cast<std::size_t>(B), 0.0));
    for (int b = 0; b < B; ++b) {
        for (int c = b + 1; c < B; ++c) {
            double d;
            if (b == 0 && c == 1) {
                d = profile.min_building_distance;
            } else {
                d = std::round(rng.uniform_real(0.45 * profile.max_building_distance,
                                                profile.max_building_distance) * 10.0) / 10.0;
            }
            inst.building_distance[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)] = d;
            inst.building_distance[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)] = d;
        }
    }

    // Rooms: building sizes, floors, and rank-paired capacities.
    const int R = scaled(profile.rooms);
    std::vector<int> building_weight = detail::sample_bucketed(profile.rooms_per_building_buckets, B, rng);
    std::vector<int> rooms_of_building = allocate_quota(building_weight, R);
    std::vector<int> floors = detail::sample_bucketed(profile.floor_buckets, R, rng);

    std::vector<int> normal_caps = detail::sample_bucketed(profile.normal_capacity_buckets, R, rng);
    std::vector<int> covid_caps = detail::sample_bucketed(profile.covid_capacity_buckets, R, rng);
    {
        std::vector<int> lo, hi;
        auto bounds = [&](const std::vector<Bucket>& buckets, const std::vector<int>& values) {
            lo.clear();
            hi.clear();
            for (int v : values) {
                for (const Bucket& b : buckets) {
                    if (v >= b.lo && v <= b.hi) {
                        lo.push_back(b.lo);
                        hi.push_back(b.hi);
                        break;
                    }
                }
            }
        };
        bounds(profile.normal_capacity_buckets, normal_caps);
        detail::adjust_to_total(normal_caps, lo, hi,
                                static_cast<int>(std::llround(profile.normal_seat_total * profile.scale)));
        bounds(profile.covid_capacity_buckets, covid_caps);
        detail::adjust_to_total(covid_caps, lo, hi,
                                static_cast<int>(std::llround(profile.pandemic_seat_total * profile.scale)));
    }
    std::sort(normal_caps.rbegin(), normal_caps.rend());
    std::sort(covid_caps.rbegin(), covid_caps.rend());
    // Capacities spread across buildings (rank-paired so the pandemic
    // capacity of a room tracks its normal capacity).
    std::vector<int> cap_order(static_cast<std::size_t>(R));
    for (int i = 0; i < R; ++i) cap_order[static_cast<std::size_t>(i)] = i;
    rng.shuffle(cap_order);

    std::vector<int> room_normal_capacity(static_cast<std::size_t>(R));
    int next_room = 0;
    for (int b = 0; b < B; ++b) {
        for (int k = 0; k < rooms_of_building[static_cast<std::size_t>(b)]; ++k, ++next_room) {
            Room room;
            room.building = b;
            room.floor = floors[static_cast<std::size_t>(next_room)];
            const int rank = cap_order[static_cast<std::size_t>(next_room)];
            room.capacity = profile.pandemic_capacities ? covid_caps[static_cast<std::size_t>(rank)]
                                                        : normal_caps[static_cast<std::size_t>(rank)];
            room_normal_capacity[static_cast<std::size_t>(next_room)] = normal_caps[static_cast<std::size_t>(rank)];
            room.closed.assign(static_cast<std::size_t>(inst.calendar.days()), 0);
            inst.rooms.push_back(std::move(room));
        }
    }
    // Hallway-chain adjacency within each (building, floor) group.
    {
        std::map<std::pair<int, int>, std::vector<int>> groups;
        for (int r = 0; r < R; ++r) {
            groups[{inst.rooms[static_cast<std::size_t>(r)].building,
                    inst.rooms[static_cast<std::size_t>(r)].floor}].push_back(r);
        }
        for (auto& [key, members] : groups) {
            for (std::size_t i = 0; i + 1 < members.size(); ++i) {
                if (rng.bernoulli(0.65)) {
                    inst.rooms[static_cast<std::size_t>(members[i])].adjacent.push_back(members[i + 1]);
                    inst.rooms[static_cast<std::size_t>(members[i + 1])].adjacent.push_back(members[i]);
                }
            }
        }
    }
    const int closed_rooms = static_cast<int>(std::llround(profile.closed_rooms * profile.scale));
    for (int k = 0; k < closed_rooms; ++k) {
        Room& room = inst.rooms[rng.uniform_index(inst.rooms.size())];
        for (int d = 0; d < std::min(profile.closed_days, inst.calendar.days()); ++d) {
            room.closed[static_cast<std::size_t>(d)] = 1;
        }
    }

    // Organizations: preference tiers over buildings.
    const int G = scaled(profile.organizations);
    for (int g = 0; g < G; ++g) {
        Organization org;
        org.building_penalty.assign(static_cast<std::size_t>(B),
                                    profile.tier_penalty.back());
        std::vector<int> order(static_cast<std::size_t>(B));
        for (int b = 0; b < B; ++b) order[static_cast<std::size_t>(b)] = b;
        rng.shuffle(order);
        std::size_t pos = 0;
        for (std::size_t tier = 0; tier + 1 < profile.tier_size.size(); ++tier) {
            int size = profile.tier_size[tier] + rng.uniform_int(-1, 1);
            size = std::max(tier == 0 ? 1 : 0, size);
            for (int k = 0; k < size && pos < order.size(); ++k, ++pos) {
                org.building_penalty[static_cast<std::size_t>(order[pos])] = profile.tier_penalty[tier];
            }
        }
        inst.organizations.push_back(std::move(org));
    }

    // Sections: exact-quota attribute pools, combined independently.
    const int S = scaled(profile.sections);
    const int exam_count = std::min(S / 2, static_cast<int>(std::llround(profile.exam_series * profile.scale)));
    const int irregular_count =
        std::max(0, std::min(S - exam_count,
                             static_cast<int>(std::llround(profile.irregular_sections * profile.scale))) -
                        exam_count);

    std::vector<int> levels = detail::sample_bucketed(profile.level_buckets, S, rng);
    std::vector<int> enrollments = detail::sample_bucketed(profile.enrollment_buckets, S, rng);
    std::vector<int> durations = detail::sample_bucketed(profile.duration_buckets, S, rng);
    std::vector<int> starts = detail::sample_bucketed(profile.start_buckets, S, rng);
    std::vector<int> weekly = detail::sample_bucketed(profile.weekly_buckets, S, rng);

    // Day patterns per weekly frequency.
    std::vector<int> twoday_counts;
    for (const auto& [days, count] : profile.twoday_patterns) twoday_counts.push_back(count);

    std::map<std::tuple<int, int, int>, int> time_pool;
    auto pick_days = [&](int per_week) -> std::vector<int> {
        switch (per_week) {
            case 1: {
                // Weighted single day.
                int total = 0;
                for (std::size_t i = 0; i < profile.oneday_weights.size(); ++i) {
                    if (static_cast<int>(i) < profile.days_per_week) total += profile.oneday_weights[i];
                }
                int pickv = rng.uniform_int(1, std::max(1, total));
                for (std::size_t i = 0; i < profile.oneday_weights.size(); ++i) {
                    if (static_cast<int>(i) >= profile.days_per_week) break;
                    pickv -= profile.oneday_weights[i];
                    if (pickv <= 0) return {static_cast<int>(i)};
                }
                return {0};
            }
            case 2: {
                int total = 0;
                for (int c : twoday_counts) total += c;
                int pickv = rng.uniform_int(1, std::max(1, total));
                for (std::size_t i = 0; i < twoday_counts.size(); ++i) {
                    pickv -= twoday_counts[i];
                    if (pickv <= 0) return profile.twoday_patterns[i].first;
                }
                return {0, 2};
            }
            case 3: return {0, 2, 4};
            case 4: return {0, 1, 2, 3};
            default: return {0, 1, 2, 3, 4};
        }
    };

    for (int s = 0; s < S; ++s) {
        Section sec;
        sec.level = levels[static_cast<std::size_t>(s)];
        sec.enrollment = enrollments[static_cast<std::size_t>(s)];
        sec.organization = rng.uniform_int(0, G - 1);
        sec.duration_slots = durations[static_cast<std::size_t>(s)];
        sec.min_fraction = profile.min_fraction;
        sec.blocked_days.assign(static_cast<std::size_t>(inst.calendar.days()), 0);
        sec.weekly_counts.assign(static_cast<std::size_t>(profile.weeks), 0);

        const int start = std::min(starts[static_cast<std::size_t>(s)],
                                   profile.slots_per_day - sec.duration_slots);
        if (s < exam_count) {
            // Evening exam series: a handful of fixed dates, everything else
            // blocked, full in-person floor.
            sec.exam_block = true;
            sec.min_fraction = 1.0;
            sec.enrollment = rng.uniform_int(100, 220);
            sec.level = 1;
            sec.duration_slots = 3;
            const int evening = profile.slots_per_day - 7;
            sec.meeting_times = {detail::meeting_time_id(inst, time_pool, 0, evening, 3)};
            std::vector<char> open(static_cast<std::size_t>(inst.calendar.days()), 1);
            for (int week : {3, 7, 10, 13}) {
                int w = week;
                while (inst.calendar.is_holiday(inst.calendar.day_of(w, 0))) w = (w + 1) % (profile.weeks - 1);
                if (sec.weekly_counts[static_cast<std::size_t>(w)] == 0) {
                    sec.weekly_counts[static_cast<std::size_t>(w)] = 1;
                    open[static_cast<std::size_t>(inst.calendar.day_of(w, 0))] = 0;
                }
            }
            for (int d = 0; d < inst.calendar.days(); ++d) sec.blocked_days[static_cast<std::size_t>(d)] = open[static_cast<std::size_t>(d)];
        } else if (s < exam_count + irregular_count) {
            // Sparse one-day pattern on a few specific weeks.
            const int weekday = pick_days(1)[0];
            sec.meeting_times = {detail::meeting_time_id(inst, time_pool, weekday, start, sec.duration_slots)};
            std::vector<int> candidate_weeks;
            for (int w = 0; w < profile.active_weeks; ++w) {
                if (!inst.calendar.is_holiday(inst.calendar.day_of(w, weekday))) candidate_weeks.push_back(w);
            }
            rng.shuffle(candidate_weeks);
            const int n = std::min<int>(rng.uniform_int(1, 8), static_cast<int>(candidate_weeks.size()));
            std::vector<char> open(static_cast<std::size_t>(inst.calendar.days()), 1);
            for (int k = 0; k < n; ++k) {
                const int w = candidate_weeks[static_cast<std::size_t>(k)];
                sec.weekly_counts[static_cast<std::size_t>(w)] = 1;
                open[static_cast<std::size_t>(inst.calendar.day_of(w, weekday))] = 0;
            }
            for (int d = 0; d < inst.calendar.days(); ++d) sec.blocked_days[static_cast<std::size_t>(d)] = open[static_cast<std::size_t>(d)];
        } else {
            const std::vector<int> days = pick_days(weekly[static_cast<std::size_t>(s)]);
            for (int weekday : days) {
                sec.meeting_times.push_back(
                    detail::meeting_time_id(inst, time_pool, weekday, start, sec.duration_slots));
            }
            for (int w = 0; w < profile.active_weeks; ++w) {
                int n = 0;
                for (int weekday : days) {
                    if (!inst.calendar.is_holiday(inst.calendar.day_of(w, weekday))) ++n;
                }
                sec.weekly_counts[static_cast<std::size_t>(w)] = n;
            }
        }
        inst.sections.push_back(std::move(sec));
    }

    // Each exam series belongs to a course that also lectures during the
    // day; pair it with a regular section sharing enrollment and organizer.
    for (int s = 0; s < exam_count; ++s) {
        const int lecture = exam_count + irregular_count + s;
        if (lecture < S) {
            inst.sections[static_cast<std::size_t>(lecture)].enrollment =
                inst.sections[static_cast<std::size_t>(s)].enrollment;
            inst.sections[static_cast<std::size_t>(lecture)].organization =
                inst.sections[static_cast<std::size_t>(s)].organization;
            inst.sections[static_cast<std::size_t>(lecture)].level = 1;
        }
    }

    // Registrar-style initial rooms: any room whose normal capacity fits.
    if (profile.initial_rooms) {
        for (int s = 0; s < S; ++s) {
            std::vector<int> fits;
            for (int r = 0; r < R; ++r) {
                if (room_normal_capacity[static_cast<std::size_t>(r)] >=
                    inst.sections[static_cast<std::size_t>(s)].enrollment)
                    fits.push_back(r);
            }
            if (fits.empty()) {
                const auto it = std::max_element(room_normal_capacity.begin(), room_normal_capacity.end());
                fits.push_back(static_cast<int>(it - room_normal_capacity.begin()));
            }
            inst.sections[static_cast<std::size_t>(s)].initial_room = fits[rng.uniform_index(fits.size())];
        }
    }

    validate_instance(inst);

    // Keep every section hostable: grant the smallest cap exception that
    // admits a room set (preference first, then seat waste, then distance),
    // shrinking the enrollment as a last resort.
    using CapFix = std::function<void(Section&)>;
    const std::vector<std::vector<CapFix>> ladder = {
        {[](Section& x) { x.max_preference_penalty = 6.0; }},
        {[](Section& x) { x.max_wasted_seats = 465.0; }},
        {[](Section& x) { x.max_preference_penalty = 6.0; },
         [](Section& x) { x.max_wasted_seats = 465.0; }},
        {[](Section& x) { x.max_distance_penalty = 700.0; },
         [](Section& x) { x.max_preference_penalty = 6.0; },
         [](Section& x) { x.max_wasted_seats = 465.0; }},
        {[](Section& x) { x.max_distance_penalty = 1000.0; },
         [](Section& x) { x.max_preference_penalty = 6.0; },
         [](Section& x) { x.max_wasted_seats = 465.0; }},
    };
    for (int s = 0; s < S; ++s) {
        Section& sec = inst.sections[static_cast<std::size_t>(s)];
        if (!enumerate_room_sets(inst, s, Scenario::NR).empty()) continue;
        bool fixed = false;
        for (const auto& combo : ladder) {
            sec.max_distance_penalty.reset();
            sec.max_preference_penalty.reset();
            sec.max_wasted_seats.reset();
            for (const CapFix& fix : combo) fix(sec);
            if (!enumerate_room_sets(inst, s, Scenario::NR).empty()) {
                fixed = true;
                break;
            }
        }
        if (!fixed) {
            int best = 0;
            for (const Room& room : inst.rooms) best = std::max(best, room.capacity);
            sec.enrollment = std::min(sec.enrollment, best);
        }
    }
    validate_instance(inst);
    return inst;
}

// Total in-person student-hours of a normal semester.
inline double total_student_hours(const Instance& inst) {
    double total = 0.0;
    for (const Section& sec : inst.sections) {
        total += static_cast<double>(sec.enrollment) * sec.total_meetings() * sec.duration_slots *
                 inst.calendar.slot_minutes / 60.0;
    }
    return total;
}

// Student-hours that remain in the classroom under a schedule.
inline double mass_meeting_student_hours(const Instance& inst, const Schedule& sched) {
    double total = 0.0;
    for (std::size_t s = 0; s < sched.sections.size(); ++s) {
        const Section& sec = inst.sections[s];
        total += static_cast<double>(sec.enrollment) *
                 static_cast<double>(sched.sections[s].meetings.size()) * sec.duration_slots *
                 inst.calendar.slot_minutes / 60.0;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Small randomized instances for property tests and the exact oracle.

struct TinyOptions {
    int max_sections = 5;
    int max_rooms = 3;
    int max_weeks = 3;
    int max_meeting_times = 6;
    bool initial_rooms = false;
    double min_fraction_choices[5] = {0.25, 0.3, 0.5, 0.75, 1.0};
};

inline Instance make_tiny(std::uint64_t seed, const TinyOptions& opts = {}) {
    Rng rng(seed);
    Instance inst;
    inst.weights = Weights{};
    inst.weights.max_rooms = std::min(5, opts.max_rooms);
    inst.weights.max_distance_penalty = 1e9;
    inst.weights.max_preference_penalty = 10.0;
    inst.weights.max_wasted_seats = 1e9;

    inst.calendar.weeks = rng.uniform_int(1, opts.max_weeks);
    inst.calendar.days_per_week = 5;
    inst.calendar.slots_per_week = 30;  // 6 slots per day
    inst.calendar.slot_minutes = 30;
    inst.calendar.holiday.assign(static_cast<std::size_t>(inst.calendar.days()), 0);
    if (rng.bernoulli(0.3)) {
        inst.calendar.holiday[rng.uniform_index(static_cast<std::size_t>(inst.calendar.days()))] = 1;
    }

    const int B = rng.uniform_int(1, 2);
    inst.building_distance.assign(static_cast<std::size_t>(B), std::vector<double>(static_cast<std::size_t>(B), 0.0));
    if (B == 2) {
        const double d = std::round(rng.uniform_real(0.0, 300.0));
        inst.building_distance[0][1] = inst.building_distance[1][0] = d;
    }

    const int R = rng.uniform_int(1, opts.max_rooms);
    for (int r = 0; r < R; ++r) {
        Room room;
        room.building = rng.uniform_int(0, B - 1);
        room.floor = rng.uniform_int(0, 2);
        room.capacity = rng.uniform_int(8, 30);
        room.closed.assign(static_cast<std::size_t>(inst.calendar.days()), 0);
        if (rng.bernoulli(0.15)) {
            room.closed[rng.uniform_index(static_cast<std::size_t>(inst.calendar.days()))] = 1;
        }
        inst.rooms.push_back(std::move(room));
    }
    for (int r = 0; r < R; ++r) {
        for (int q = r + 1; q < R; ++q) {
            const Room& a = inst.rooms[static_cast<std::size_t>(r)];
            const Room& b = inst.rooms[static_cast<std::size_t>(q)];
            if (a.building == b.building && a.floor == b.floor && rng.bernoulli(0.5)) {
                inst.rooms[static_cast<std::size_t>(r)].adjacent.push_back(q);
                inst.rooms[static_cast<std::size_t>(q)].adjacent.push_back(r);
            }
        }
    }

    const int G = rng.uniform_int(1, 2);
    for (int g = 0; g < G; ++g) {
        Organization org;
        for (int b = 0; b < B; ++b) org.building_penalty.push_back(rng.uniform_int(0, 2));
        inst.organizations.push_back(std::move(org));
    }

    const int spd = inst.calendar.slots_per_day();
    const int M = rng.uniform_int(2, opts.max_meeting_times);
    for (int m = 0; m < M; ++m) {
        for (int attempt = 0; attempt < 20; ++attempt) {
            MeetingTime mt;
            mt.duration_slots = rng.uniform_int(1, 2);
            mt.weekday = rng.uniform_int(0, 4);
            mt.start_slot = rng.uniform_int(0, spd - mt.duration_slots);
            if (std::find(inst.meeting_times.begin(), inst.meeting_times.end(), mt) ==
                inst.meeting_times.end()) {
                inst.meeting_times.push_back(mt);
                break;
            }
        }
    }

    int total_capacity = 0;
    for (const Room& room : inst.rooms) total_capacity += room.capacity;

    const int S = rng.uniform_int(1, opts.max_sections);
    for (int s = 0; s < S; ++s) {
        Section sec;
        sec.level = rng.uniform_int(0, 2);
        sec.organization = rng.uniform_int(0, G - 1);
        sec.min_fraction = opts.min_fraction_choices[rng.uniform_index(5)];
        sec.blocked_days.assign(static_cast<std::size_t>(inst.calendar.days()), 0);
        if (rng.bernoulli(0.2)) {
            sec.blocked_days[rng.uniform_index(static_cast<std::size_t>(inst.calendar.days()))] = 1;
        }

        // Pick a duration that exists in the time pool, then 1-3 distinct
        // non-overlapping times of that duration.
        const MeetingTime& anchor = inst.meeting_times[rng.uniform_index(inst.meeting_times.size())];
        sec.duration_slots = anchor.duration_slots;
        std::vector<int> same_duration;
        for (int m = 0; m < static_cast<int>(inst.meeting_times.size()); ++m) {
            if (inst.meeting_times[static_cast<std::size_t>(m)].duration_slots == sec.duration_slots)
                same_duration.push_back(m);
        }
        rng.shuffle(same_duration);
        for (int m : same_duration) {
            if (static_cast<int>(sec.meeting_times.size()) >= 3) break;
            bool clashes = false;
            for (int m0 : sec.meeting_times) {
                if (inst.meeting_times[static_cast<std::size_t>(m0)].overlaps(
                        inst.meeting_times[static_cast<std::size_t>(m)]))
                    clashes = true;
            }
            if (!clashes) sec.meeting_times.push_back(m);
        }

        sec.enrollment = rng.uniform_int(1, std::max(1, total_capacity));
        sec.weekly_counts.assign(static_cast<std::size_t>(inst.calendar.weeks), 0);
        int normal = 0;
        for (int w = 0; w < inst.calendar.weeks; ++w) {
            int eligible = 0;
            for (int m : sec.meeting_times) {
                const int day = inst.calendar.day_of(w, inst.meeting_times[static_cast<std::size_t>(m)].weekday);
                if (!inst.calendar.is_holiday(day) && !sec.blocked_on(day)) ++eligible;
            }
            const int n = rng.uniform_int(0, std::min(eligible, 2));
            sec.weekly_counts[static_cast<std::size_t>(w)] = n;
            normal += n;
        }
        if (normal == 0) {
            // Force one meeting into the first eligible week.
            bool done = false;
            for (int w = 0; w < inst.calendar.weeks && !done; ++w) {
                for (int m : sec.meeting_times) {
                    const int day = inst.calendar.day_of(w, inst.meeting_times[static_cast<std::size_t>(m)].weekday);
                    if (!inst.calendar.is_holiday(day) && !sec.blocked_on(day)) {
                        sec.weekly_counts[static_cast<std::size_t>(w)] = 1;
                        done = true;
                        break;
                    }
                }
            }
            if (!done) {
                // Every occurrence was blocked or a holiday; unblock the
                // section and retry, dropping holidays as a last resort.
                sec.blocked_days.assign(static_cast<std::size_t>(inst.calendar.days()), 0);
                for (int w = 0; w < inst.calendar.weeks && !done; ++w) {
                    for (int m : sec.meeting_times) {
                        const int day =
                            inst.calendar.day_of(w, inst.meeting_times[static_cast<std::size_t>(m)].weekday);
                        if (!inst.calendar.is_holiday(day)) {
                            sec.weekly_counts[static_cast<std::size_t>(w)] = 1;
                            done = true;
                            break;
                        }
                    }
                }
                if (!done) {
                    inst.calendar.holiday.assign(static_cast<std::size_t>(inst.calendar.days()), 0);
                    sec.weekly_counts[0] = 1;
                }
            }
        }
        if (opts.initial_rooms && rng.bernoulli(0.5)) {
            sec.initial_room = rng.uniform_int(0, R - 1);
        }
        inst.sections.push_back(std::move(sec));
    }

    validate_instance(inst);

    // Shrink enrollments until every section is hostable.
    for (int s = 0; s < S; ++s) {
        Section& sec = inst.sections[static_cast<std::size_t>(s)];
        while (sec.enrollment > 1 && enumerate_room_sets(inst, s, Scenario::NR).empty()) {
            sec.enrollment = sec.enrollment / 2;
        }
    }
    validate_instance(inst);
    return inst;
}

}  // namespace gen
}  // namespace ucsched
