#pragma once

// Exact reference solver for desk-scale instances, plus a deliberately
// literal re-implementation of the objective that materializes the dense
// indicator arrays of the underlying integer program. The literal evaluator
// shares no code with evaluate.hpp so the two can cross-check each other.
//
// The search runs over (room set per section) x (meeting subsets per
// section) with room-occupancy propagation and a lower bound from the
// per-section minima. A section never schedules more mass meetings than it
// has normal meetings: the extra meetings would have no instruction to
// carry, and with a linear online exponent they would otherwise be able to
// push that objective component below zero.

#include <functional>

#include "ucsched/pra.hpp"

namespace ucsched {

struct OracleLimits {
    int max_sections = 5;
    int max_rooms = 3;
    int max_weeks = 3;
    int max_meeting_times = 8;
    std::uint64_t node_budget = 100000000;  // search nodes before giving up
};

class OracleLimitError : public std::runtime_error {
public:
    explicit OracleLimitError(const std::string& what) : std::runtime_error(what) {}
};

class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Literal evaluator: dense X/Y/BU/FU/YY arrays, penalties computed exactly as
// the optimization model defines them at an optimal solution.

inline ObjectiveBreakdown reference_breakdown(const Instance& inst, const Schedule& sched,
                                              const Weights& w) {
    const int S = inst.num_sections();
    const int R = inst.num_rooms();
    const int M = inst.num_meeting_times();
    const int W = inst.calendar.weeks;
    const int B = inst.num_buildings();
    int F = 0;
    for (const Room& room : inst.rooms) F = std::max(F, room.floor);

    std::vector<std::vector<char>> Y(static_cast<std::size_t>(R), std::vector<char>(static_cast<std::size_t>(S), 0));
    std::vector<std::vector<std::vector<char>>> X(
        static_cast<std::size_t>(S),
        std::vector<std::vector<char>>(static_cast<std::size_t>(M), std::vector<char>(static_cast<std::size_t>(W), 0)));
    for (int s = 0; s < S; ++s) {
        for (int r : sched.sections[static_cast<std::size_t>(s)].rooms) Y[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] = 1;
        for (const auto& [m, wk] : sched.sections[static_cast<std::size_t>(s)].meetings)
            X[static_cast<std::size_t>(s)][static_cast<std::size_t>(m)][static_cast<std::size_t>(wk)] = 1;
    }

    ObjectiveBreakdown out;
    out.per_section.resize(static_cast<std::size_t>(S));
    for (int s = 0; s < S; ++s) {
        const Section& sec = inst.sections[static_cast<std::size_t>(s)];
        const double importance = w.importance_by_level[static_cast<std::size_t>(sec.level)];
        const double base = importance * sec.enrollment * sec.total_meetings() * sec.duration_slots;

        int num_rooms = 0;
        for (int r = 0; r < R; ++r) num_rooms += Y[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)];

        std::vector<char> BU(static_cast<std::size_t>(B), 0);
        std::vector<std::vector<char>> FU(static_cast<std::size_t>(F) + 1, std::vector<char>(static_cast<std::size_t>(B), 0));
        for (int r = 0; r < R; ++r) {
            if (!Y[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)]) continue;
            const Room& room = inst.rooms[static_cast<std::size_t>(r)];
            BU[static_cast<std::size_t>(room.building)] = 1;
            FU[static_cast<std::size_t>(room.floor)][static_cast<std::size_t>(room.building)] = 1;
        }
        double max_bldg_dist = 0.0;
        for (int b = 0; b < B; ++b) {
            for (int c = b + 1; c < B; ++c) {
                if (BU[static_cast<std::size_t>(b)] && BU[static_cast<std::size_t>(c)]) {
                    max_bldg_dist = std::max(max_bldg_dist,
                                             inst.building_distance[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)]);
                }
            }
        }
        int num_bldgs = 0;
        for (int b = 0; b < B; ++b) num_bldgs += BU[static_cast<std::size_t>(b)];
        int floor_dist = 0;
        int num_floors = 0;
        for (int b = 0; b < B; ++b) {
            // High/low floor values the minimization drives to: the extreme
            // used floors of each used building, both zero otherwise.
            int high = 0, low = 0;
            bool used = false;
            for (int f = 0; f <= F; ++f) {
                if (FU[static_cast<std::size_t>(f)][static_cast<std::size_t>(b)]) {
                    if (!used) {
                        low = f;
                        used = true;
                    }
                    high = f;
                    ++num_floors;
                }
            }
            floor_dist += high - low;
        }
        const int num_extra_floors = num_floors - num_bldgs;

        int room_nonadj = 0;
        for (int q = 0; q < R; ++q) {
            for (int r = q + 1; r < R; ++r) {
                const char yy = Y[static_cast<std::size_t>(q)][static_cast<std::size_t>(s)] &&
                                Y[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)];
                if (yy && !inst.rooms[static_cast<std::size_t>(q)].adjacent_to(r)) ++room_nonadj;
            }
        }
        const double dist_penalty = num_rooms == 0
                                        ? 0.0
                                        : w.building_distance * max_bldg_dist +
                                              w.extra_building * (num_bldgs - 1) + w.floor_span * floor_dist +
                                              w.extra_floor * num_extra_floors +
                                              w.nonadjacent_pair * room_nonadj;
        double pref_penalty = 0.0;
        int capacity = 0;
        for (int r = 0; r < R; ++r) {
            if (!Y[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)]) continue;
            capacity += inst.rooms[static_cast<std::size_t>(r)].capacity;
            pref_penalty = std::max(
                pref_penalty,
                inst.organizations[static_cast<std::size_t>(sec.organization)]
                    .building_penalty[static_cast<std::size_t>(inst.rooms[static_cast<std::size_t>(r)].building)]);
        }
        const int wasted = num_rooms == 0 ? 0 : capacity - sec.enrollment;

        std::vector<int> NP(static_cast<std::size_t>(W), 0);
        for (int m = 0; m < M; ++m) {
            for (int wk = 0; wk < W; ++wk) NP[static_cast<std::size_t>(wk)] += X[static_cast<std::size_t>(s)][static_cast<std::size_t>(m)][static_cast<std::size_t>(wk)];
        }
        std::vector<int> CNP(static_cast<std::size_t>(W), 0);
        int acc = 0;
        for (int wk = 0; wk < W; ++wk) {
            acc += NP[static_cast<std::size_t>(wk)];
            CNP[static_cast<std::size_t>(wk)] = acc;
        }
        const int normal = sec.total_meetings();
        const int final_count = CNP.empty() ? 0 : CNP[static_cast<std::size_t>(W - 1)];
        double timing = 0.0;
        const int span = sec.last_week - sec.first_week + 1;
        for (int wk = sec.first_week; wk <= sec.last_week; ++wk) {
            const double prorated = static_cast<double>(wk - sec.first_week + 1) / span * final_count;
            timing += std::abs(CNP[static_cast<std::size_t>(wk)] - prorated);
        }
        const bool fair = final_count >= fraction_quota(sec.min_fraction, normal);
        const double online = static_cast<double>(normal - final_count) / normal;

        out.components[0] += w.room_count * base * (num_rooms == 0 ? 0 : num_rooms - 1);
        out.components[1] += w.distance * base * dist_penalty;
        out.components[2] += w.preference * base * pref_penalty;
        out.components[3] += w.wasted_seat * sec.total_meetings() * sec.duration_slots * wasted;
        out.components[4] += w.online * base * std::pow(online, w.online_exponent);
        out.components[5] += w.timing * importance * sec.enrollment * sec.duration_slots * timing;
        out.components[6] += w.fairness * base * (fair ? 0.0 : 1.0);

        SectionDiagnostics& d = out.per_section[static_cast<std::size_t>(s)];
        d.has_rooms = num_rooms > 0;
        d.spatial = SpatialMetrics{num_rooms, max_bldg_dist, num_bldgs, floor_dist, num_extra_floors,
                                   room_nonadj, dist_penalty, pref_penalty, wasted};
        d.timing.weekly = NP;
        d.timing.cumulative = CNP;
        d.timing.scheduled_total = final_count;
        d.timing.timing_penalty = timing;
        d.timing.fairness_met = fair;
        d.timing.online_fraction = online;
    }
    for (double c : out.components) out.total += c;
    return out;
}

// ---------------------------------------------------------------------------
// Exact search

namespace detail {

struct OracleCandidate {
    std::vector<std::pair<int, int>> meetings;  // sorted (time, week)
    double timing_cost;                         // weighted components 5-7
};

struct OracleSectionData {
    std::vector<RoomSet> room_sets;
    std::vector<double> fixed_cost;             // weighted components 1-4 per room set
    std::vector<OracleCandidate> candidates;    // sorted by timing_cost ascending
    double min_total_cost;                      // lower bound over all choices
};

inline double oracle_timing_cost(const Instance& inst, int s,
                                 const std::vector<std::pair<int, int>>& meetings, const Weights& w) {
    const Section& sec = inst.sections[static_cast<std::size_t>(s)];
    const double importance = w.importance_by_level[static_cast<std::size_t>(sec.level)];
    const double base = importance * sec.enrollment * sec.total_meetings() * sec.duration_slots;
    const int normal = sec.total_meetings();
    const int W = inst.calendar.weeks;
    std::vector<int> cnp(static_cast<std::size_t>(W), 0);
    for (const auto& [m, wk] : meetings) ++cnp[static_cast<std::size_t>(wk)];
    int acc = 0;
    for (int wk = 0; wk < W; ++wk) {
        acc += cnp[static_cast<std::size_t>(wk)];
        cnp[static_cast<std::size_t>(wk)] = acc;
    }
    const int final_count = acc;
    double timing = 0.0;
    const int span = sec.last_week - sec.first_week + 1;
    for (int wk = sec.first_week; wk <= sec.last_week; ++wk) {
        const double prorated = static_cast<double>(wk - sec.first_week + 1) / span * final_count;
        timing += std::abs(cnp[static_cast<std::size_t>(wk)] - prorated);
    }
    const bool fair = final_count >= fraction_quota(sec.min_fraction, normal);
    const double online = static_cast<double>(normal - final_count) / normal;
    return w.online * base * std::pow(online, w.online_exponent) +
           w.timing * importance * sec.enrollment * sec.duration_slots * timing +
           w.fairness * base * (fair ? 0.0 : 1.0);
}

inline double oracle_fixed_cost(const Instance& inst, int s, const std::vector<int>& rooms,
                                const Weights& w) {
    // Components 1-4 for one room set, computed independently of evaluate.hpp.
    const Section& sec = inst.sections[static_cast<std::size_t>(s)];
    const double importance = w.importance_by_level[static_cast<std::size_t>(sec.level)];
    const double base = importance * sec.enrollment * sec.total_meetings() * sec.duration_slots;
    std::map<int, std::pair<int, int>> floors;
    std::set<std::pair<int, int>> pairs;
    int capacity = 0;
    for (int r : rooms) {
        const Room& room = inst.rooms[static_cast<std::size_t>(r)];
        capacity += room.capacity;
        auto [it, fresh] = floors.try_emplace(room.building, std::make_pair(room.floor, room.floor));
        if (!fresh) {
            it->second.first = std::min(it->second.first, room.floor);
            it->second.second = std::max(it->second.second, room.floor);
        }
        pairs.emplace(room.building, room.floor);
    }
    double max_dist = 0.0;
    int span = 0;
    double pref = 0.0;
    for (auto it = floors.begin(); it != floors.end(); ++it) {
        span += it->second.second - it->second.first;
        pref = std::max(pref, inst.organizations[static_cast<std::size_t>(sec.organization)]
                                  .building_penalty[static_cast<std::size_t>(it->first)]);
        for (auto jt = std::next(it); jt != floors.end(); ++jt) {
            max_dist = std::max(max_dist, inst.building_distance[static_cast<std::size_t>(it->first)]
                                                                [static_cast<std::size_t>(jt->first)]);
        }
    }
    int nonadj = 0;
    for (std::size_t i = 0; i < rooms.size(); ++i) {
        for (std::size_t j = i + 1; j < rooms.size(); ++j) {
            if (!inst.rooms[static_cast<std::size_t>(rooms[i])].adjacent_to(rooms[j])) ++nonadj;
        }
    }
    const double dist_penalty = w.building_distance * max_dist +
                                w.extra_building * (static_cast<int>(floors.size()) - 1) +
                                w.floor_span * span +
                                w.extra_floor * (static_cast<int>(pairs.size()) - static_cast<int>(floors.size())) +
                                w.nonadjacent_pair * nonadj;
    return w.room_count * base * (static_cast<int>(rooms.size()) - 1) + w.distance * base * dist_penalty +
           w.preference * base * pref +
           w.wasted_seat * sec.total_meetings() * sec.duration_slots * (capacity - sec.enrollment);
}

struct OracleSearch {
    const Instance& inst;
    std::vector<OracleSectionData> data{};
    std::vector<double> tail_bound{};  // sum of min_total_cost over sections s..S-1
    std::uint64_t node_budget = 0;
    std::uint64_t nodes = 0;

    std::vector<std::vector<char>> occupied{};  // (room, week) -> slot flags
    double best_cost = std::numeric_limits<double>::infinity();
    Schedule best{};
    bool found = false;

    Schedule current{};

    bool slots_free(const std::vector<int>& rooms, int time, int week) const {
        const MeetingTime& mt = inst.meeting_times[static_cast<std::size_t>(time)];
        const int first = mt.first_weekly_slot(inst.calendar);
        for (int r : rooms) {
            const auto& flags = occupied[static_cast<std::size_t>(r * inst.calendar.weeks + week)];
            for (int t = first; t < first + mt.duration_slots; ++t) {
                if (flags[static_cast<std::size_t>(t)]) return false;
            }
        }
        return true;
    }
    void mark(const std::vector<int>& rooms, int time, int week, char on) {
        const MeetingTime& mt = inst.meeting_times[static_cast<std::size_t>(time)];
        const int first = mt.first_weekly_slot(inst.calendar);
        for (int r : rooms) {
            auto& flags = occupied[static_cast<std::size_t>(r * inst.calendar.weeks + week)];
            for (int t = first; t < first + mt.duration_slots; ++t) flags[static_cast<std::size_t>(t)] = on;
        }
    }

    // Canonical flattening for the deterministic tie-break: the
    // lexicographically smallest schedule among the optima wins.
    static std::vector<int> encode(const Schedule& s) {
        std::vector<int> out;
        for (const SectionAssignment& a : s.sections) {
            for (int r : a.rooms) out.push_back(r);
            out.push_back(-1);
            for (const auto& [m, w] : a.meetings) {
                out.push_back(m);
                out.push_back(w);
            }
            out.push_back(-2);
        }
        return out;
    }

    void dfs(int s, double partial) {
        if (++nodes > node_budget) throw OracleLimitError("oracle: node budget exceeded");
        const int S = inst.num_sections();
        if (s == S) {
            if (partial < best_cost - 1e-9 ||
                (std::abs(partial - best_cost) <= 1e-9 && (!found || encode(current) < encode(best)))) {
                best_cost = std::min(best_cost, partial);
                best = current;
                found = true;
            }
            return;
        }
        const OracleSectionData& d = data[static_cast<std::size_t>(s)];
        const double tail = tail_bound[static_cast<std::size_t>(s) + 1];
        for (const OracleCandidate& cand : d.candidates) {
            // Candidates are sorted by timing cost and every room set adds a
            // nonnegative fixed cost, so later candidates cannot win either.
            if (partial + cand.timing_cost + tail > best_cost + 1e-9) break;
            if (cand.meetings.empty()) {
                // Fully online: no rooms are kept, so no spatial cost.
                current.sections[static_cast<std::size_t>(s)] = SectionAssignment{};
                dfs(s + 1, partial + cand.timing_cost);
                continue;
            }
            for (std::size_t p = 0; p < d.room_sets.size(); ++p) {
                const double cost = cand.timing_cost + d.fixed_cost[p];
                if (partial + cost + tail > best_cost + 1e-9) continue;
                const std::vector<int>& rooms = d.room_sets[p].rooms;
                std::size_t marked = 0;
                bool ok = true;
                for (const auto& [time, week] : cand.meetings) {
                    const int day = inst.calendar.day_of(
                        week, inst.meeting_times[static_cast<std::size_t>(time)].weekday);
                    for (int r : rooms) {
                        if (inst.rooms[static_cast<std::size_t>(r)].closed_on(day)) {
                            ok = false;
                            break;
                        }
                    }
                    if (!ok || !slots_free(rooms, time, week)) {
                        ok = false;
                        break;
                    }
                    mark(rooms, time, week, 1);
                    ++marked;
                }
                if (ok) {
                    current.sections[static_cast<std::size_t>(s)] = SectionAssignment{rooms, cand.meetings};
                    dfs(s + 1, partial + cost);
                }
                for (std::size_t i = 0; i < marked; ++i) {
                    mark(rooms, cand.meetings[i].first, cand.meetings[i].second, 0);
                }
            }
        }
        current.sections[static_cast<std::size_t>(s)] = SectionAssignment{};
    }
};

}  // namespace detail

struct OracleResult {
    Schedule schedule;
    ObjectiveBreakdown breakdown;
    std::uint64_t nodes = 0;
};

// Globally optimal schedule within the limits, deterministic tie-break.
// Throws OracleLimitError when the instance or search outgrows the limits
// and InfeasibleError when no complete schedule exists.
inline OracleResult solve_exact(const Instance& inst, const OracleLimits& limits,
                                Scenario scenario = Scenario::NR) {
    if (inst.num_sections() > limits.max_sections)
        throw OracleLimitError("oracle: too many sections");
    if (inst.num_rooms() > limits.max_rooms) throw OracleLimitError("oracle: too many rooms");
    if (inst.calendar.weeks > limits.max_weeks) throw OracleLimitError("oracle: too many weeks");
    if (inst.num_meeting_times() > limits.max_meeting_times)
        throw OracleLimitError("oracle: too many meeting times");

    const Weights& w = inst.weights;
    detail::OracleSearch search{inst};
    search.node_budget = limits.node_budget;
    search.data.resize(static_cast<std::size_t>(inst.num_sections()));
    search.current = Schedule::empty_for(inst);
    search.best = Schedule::empty_for(inst);

    double log_estimate = 0.0;
    for (int s = 0; s < inst.num_sections(); ++s) {
        detail::OracleSectionData& d = search.data[static_cast<std::size_t>(s)];
        d.room_sets = enumerate_room_sets(inst, s, scenario);
        if (d.room_sets.empty()) {
            throw InfeasibleError("oracle: section " + std::to_string(s + 1) +
                                  " has no valid room set");
        }
        // Deterministic room-set order: by sorted room ids.
        std::sort(d.room_sets.begin(), d.room_sets.end(),
                  [](const RoomSet& a, const RoomSet& b) { return a.rooms < b.rooms; });
        for (const RoomSet& rs : d.room_sets) {
            d.fixed_cost.push_back(detail::oracle_fixed_cost(inst, s, rs.rooms, w));
        }

        const Section& sec = inst.sections[static_cast<std::size_t>(s)];
        std::vector<std::pair<int, int>> slots;
        for (int m : sec.meeting_times) {
            for (int wk = 0; wk < inst.calendar.weeks; ++wk) {
                const int day =
                    inst.calendar.day_of(wk, inst.meeting_times[static_cast<std::size_t>(m)].weekday);
                if (!inst.calendar.is_holiday(day) && !sec.blocked_on(day)) slots.emplace_back(m, wk);
            }
        }
        std::sort(slots.begin(), slots.end());

        const int normal = sec.total_meetings();
        const int min_count = w.enforce_min_fraction ? inst.fairness_quota_of(s) : 0;
        std::vector<std::pair<int, int>> chosen;
        std::function<void(std::size_t)> enumerate = [&](std::size_t from) {
            if (d.candidates.size() > limits.node_budget) {
                throw OracleLimitError("oracle: per-section candidate count exceeds the node budget");
            }
            if (static_cast<int>(chosen.size()) >= min_count) {
                d.candidates.push_back(detail::OracleCandidate{
                    chosen, detail::oracle_timing_cost(inst, s, chosen, w)});
            }
            if (static_cast<int>(chosen.size()) >= normal) return;
            for (std::size_t i = from; i < slots.size(); ++i) {
                bool clashes = false;
                for (const auto& [m0, w0] : chosen) {
                    if (w0 == slots[i].second &&
                        inst.meeting_times[static_cast<std::size_t>(m0)].overlaps(
                            inst.meeting_times[static_cast<std::size_t>(slots[i].first)])) {
                        clashes = true;
                        break;
                    }
                }
                if (clashes) continue;
                chosen.push_back(slots[i]);
                enumerate(i + 1);
                chosen.pop_back();
            }
        };
        enumerate(0);
        if (d.candidates.empty()) {
            throw InfeasibleError("oracle: section " + std::to_string(s + 1) +
                                  " cannot satisfy its fairness floor");
        }
        std::stable_sort(d.candidates.begin(), d.candidates.end(),
                         [](const detail::OracleCandidate& a, const detail::OracleCandidate& b) {
                             return a.timing_cost < b.timing_cost;
                         });

        const double min_fixed = *std::min_element(d.fixed_cost.begin(), d.fixed_cost.end());
        double min_total = std::numeric_limits<double>::infinity();
        for (const detail::OracleCandidate& c : d.candidates) {
            min_total = std::min(min_total,
                                 c.timing_cost + (c.meetings.empty() ? 0.0 : min_fixed));
        }
        d.min_total_cost = min_total;
        log_estimate += std::log(static_cast<double>(d.room_sets.size()) *
                                 static_cast<double>(d.candidates.size()));
    }
    if (log_estimate > std::log(static_cast<double>(limits.node_budget)) + std::log(1e4)) {
        throw OracleLimitError("oracle: search space estimate exceeds the node budget");
    }

    search.tail_bound.assign(static_cast<std::size_t>(inst.num_sections()) + 1, 0.0);
    for (int s = inst.num_sections() - 1; s >= 0; --s) {
        search.tail_bound[static_cast<std::size_t>(s)] =
            search.tail_bound[static_cast<std::size_t>(s) + 1] +
            search.data[static_cast<std::size_t>(s)].min_total_cost;
    }
    search.occupied.assign(
        static_cast<std::size_t>(inst.num_rooms()) * static_cast<std::size_t>(inst.calendar.weeks),
        std::vector<char>(static_cast<std::size_t>(inst.calendar.slots_per_week), 0));

    search.dfs(0, 0.0);
    if (!search.found) throw InfeasibleError("oracle: no feasible schedule exists");

    OracleResult out;
    out.schedule = search.best;
    out.breakdown = reference_breakdown(inst, out.schedule, w);
    out.nodes = search.nodes;
    return out;
}

}  // namespace ucsched
