#pragma once

// Greedy scheduling engine: places a scrambled list of meetings into the
// master schedule, trying each meeting's default week first and sweeping
// outward one week of deviation at a time. Placement never moves or removes
// an existing mass meeting.

#include "ucsched/evaluate.hpp"

namespace ucsched {

// One unit of scheduling work: a section's meeting with the week it occurs
// in during a normal semester and its priority wave.
struct Meeting {
    int section = 0;
    int default_week = 0;
    int wave = 1;
};

// Occupied weekly-timeslot bitsets per (room, week). Mirrors a Schedule and
// is rebuildable from one; keeping it incremental makes the room-conflict
// check O(words) per candidate placement.
class OccupancyIndex {
public:
    explicit OccupancyIndex(const Instance& inst)
        : weeks_(inst.calendar.weeks),
          words_(static_cast<int>((inst.calendar.slots_per_week + 63) / 64)),
          bits_(static_cast<std::size_t>(inst.num_rooms()) * static_cast<std::size_t>(weeks_) *
                    static_cast<std::size_t>(words_),
                0) {}

    static OccupancyIndex rebuild(const Instance& inst, const Schedule& sched) {
        OccupancyIndex idx(inst);
        for (std::size_t s = 0; s < sched.sections.size(); ++s) {
            const SectionAssignment& a = sched.sections[s];
            for (const auto& [time, week] : a.meetings) idx.place(inst, a.rooms, time, week);
        }
        return idx;
    }

    bool rooms_free(const Instance& inst, const std::vector<int>& rooms, int time, int week) const {
        const MeetingTime& mt = inst.meeting_times[static_cast<std::size_t>(time)];
        const int first = mt.first_weekly_slot(inst.calendar);
        for (int r : rooms) {
            for (int t = first; t < first + mt.duration_slots; ++t) {
                if (test(r, week, t)) return false;
            }
        }
        return true;
    }

    void place(const Instance& inst, const std::vector<int>& rooms, int time, int week) {
        set_all(inst, rooms, time, week, true);
    }
    void remove(const Instance& inst, const std::vector<int>& rooms, int time, int week) {
        set_all(inst, rooms, time, week, false);
    }

    bool operator==(const OccupancyIndex&) const = default;

private:
    bool test(int room, int week, int slot) const {
        const std::size_t base = word_base(room, week);
        return (bits_[base + static_cast<std::size_t>(slot / 64)] >> (slot % 64)) & 1u;
    }
    void set_all(const Instance& inst, const std::vector<int>& rooms, int time, int week, bool on) {
        const MeetingTime& mt = inst.meeting_times[static_cast<std::size_t>(time)];
        const int first = mt.first_weekly_slot(inst.calendar);
        for (int r : rooms) {
            const std::size_t base = word_base(r, week);
            for (int t = first; t < first + mt.duration_slots; ++t) {
                auto& word = bits_[base + static_cast<std::size_t>(t / 64)];
                const std::uint64_t mask = 1ull << (t % 64);
                if (on) {
                    word |= mask;
                } else {
                    word &= ~mask;
                }
            }
        }
    }
    std::size_t word_base(int room, int week) const {
        return (static_cast<std::size_t>(room) * static_cast<std::size_t>(weeks_) +
                static_cast<std::size_t>(week)) *
               static_cast<std::size_t>(words_);
    }

    int weeks_;
    int words_;
    std::vector<std::uint64_t> bits_;
};

// Tries to place one meeting of `section` in `week`, scanning its eligible
// meeting times in ascending (weekday, start) order. Returns the meeting
// time used, or nullopt when every eligible time fails. Mutates the
// schedule and occupancy on success.
inline std::optional<int> try_place(const Instance& inst, Schedule& sched, OccupancyIndex& occ,
                                    int section, const std::vector<int>& rooms, int week) {
    assert(week >= 0 && week < inst.calendar.weeks);
    const Section& sec = inst.sections[static_cast<std::size_t>(section)];
    SectionAssignment& a = sched.sections[static_cast<std::size_t>(section)];
    for (int time : sec.meeting_times) {
        const MeetingTime& mt = inst.meeting_times[static_cast<std::size_t>(time)];
        const int day = inst.calendar.day_of(week, mt.weekday);
        if (inst.calendar.is_holiday(day)) continue;
        if (sec.blocked_on(day)) continue;
        if (a.has_meeting(time, week)) continue;
        bool rooms_ok = true;
        for (int r : rooms) {
            if (inst.rooms[static_cast<std::size_t>(r)].closed_on(day)) {
                rooms_ok = false;
                break;
            }
        }
        if (!rooms_ok) continue;
        if (!occ.rooms_free(inst, rooms, time, week)) continue;

        const auto key = std::make_pair(time, week);
        a.meetings.insert(std::lower_bound(a.meetings.begin(), a.meetings.end(), key), key);
        occ.place(inst, rooms, time, week);
        return time;
    }
    return std::nullopt;
}

struct Placement {
    std::size_t meeting_index;  // into the list passed to run_engine
    int time;
    int week;
};

struct EngineResult {
    std::vector<Placement> placed;
    std::vector<std::size_t> unplaced;  // meeting indices that exhausted every week
};

// Places as many of `meetings` as possible. The list is scrambled once with
// `rng`; passes then try week default+deviation before default-deviation,
// growing the deviation until every meeting is placed or out of weeks.
// `rooms_of(section)` supplies the section's current room set.
template <typename RoomsOf>
inline EngineResult run_engine(const Instance& inst, Schedule& sched, OccupancyIndex& occ,
                               const std::vector<Meeting>& meetings, RoomsOf&& rooms_of, Rng& rng) {
    EngineResult result;
    std::vector<std::size_t> list(meetings.size());
    for (std::size_t i = 0; i < list.size(); ++i) list[i] = i;
    rng.shuffle(list);

    const int weeks = inst.calendar.weeks;
    int deviation = 0;
    while (!list.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t idx : list) {
            const Meeting& mtg = meetings[idx];
            const std::vector<int>& rooms = rooms_of(mtg.section);
            bool placed = false;
            for (int sign : {+1, -1}) {
                if (deviation == 0 && sign < 0) break;
                const int week = mtg.default_week + sign * deviation;
                if (week < 0 || week >= weeks) continue;
                if (auto time = try_place(inst, sched, occ, mtg.section, rooms, week)) {
                    result.placed.push_back(Placement{idx, *time, week});
                    placed = true;
                    break;
                }
            }
            if (placed) continue;
            const bool exhausted =
                mtg.default_week + deviation >= weeks && mtg.default_week - deviation < 0;
            if (exhausted) {
                result.unplaced.push_back(idx);
            } else {
                next.push_back(idx);
            }
        }
        list = std::move(next);
        ++deviation;
    }
    return result;
}

}  // namespace ucsched
