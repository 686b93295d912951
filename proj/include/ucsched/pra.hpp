#pragma once

// Exhaustive enumeration and ranking of the possible room sets of a section:
// every set of compatible rooms that covers the enrollment with no removable
// room, within the room-count and penalty caps. Depth-first over rooms in
// descending capacity order; a branch stops as soon as capacity is covered,
// which yields exactly the minimal covers.

#include <mutex>

#include "ucsched/evaluate.hpp"

namespace ucsched {

struct RoomSet {
    int section = -1;
    std::vector<int> rooms;  // sorted room indices
    SpatialMetrics metrics;
    double rank_score = 0.0;
};

// Effective quality caps for one section under a scenario. In scenario R a
// kept initial room may force the preference or wasted-seat cap up; the
// relaxation is minimal (just enough to admit sets containing that room).
struct EffectiveCaps {
    double max_distance_penalty;
    double max_preference_penalty;
    double max_wasted_seats;
    bool preference_relaxed = false;
    bool wasted_relaxed = false;
};

inline EffectiveCaps effective_caps(const Instance& inst, int section, Scenario scenario) {
    EffectiveCaps caps{inst.max_distance_penalty_of(section), inst.max_preference_penalty_of(section),
                       inst.max_wasted_seats_of(section)};
    const Section& sec = inst.sections[static_cast<std::size_t>(section)];
    if (scenario == Scenario::R && sec.initial_room) {
        const Room& init = inst.rooms[static_cast<std::size_t>(*sec.initial_room)];
        const double pref =
            inst.organizations[static_cast<std::size_t>(sec.organization)]
                .building_penalty[static_cast<std::size_t>(init.building)];
        if (pref > caps.max_preference_penalty) {
            caps.max_preference_penalty = pref;
            caps.preference_relaxed = true;
        }
        const int waste_alone = init.capacity - sec.enrollment;
        if (waste_alone > caps.max_wasted_seats) {
            caps.max_wasted_seats = waste_alone;
            caps.wasted_relaxed = true;
        }
    }
    return caps;
}

namespace detail {

struct RoomSetSearch {
    const Instance& inst;
    int section;
    Scenario scenario;
    EffectiveCaps caps;
    std::vector<int> order{};       // candidate rooms, descending capacity
    std::vector<int> suffix_cap{};  // capacity still reachable from position i
    int init_pos = -1;              // position of the initial room in `order` (scenario R)
    std::vector<int> chosen{};
    int chosen_capacity = 0;
    std::vector<RoomSet>* out = nullptr;

    // Distance-penalty lower bound of the current partial set. Only the
    // building/floor terms: they are monotone under adding rooms. The set is
    // tiny (at most max_rooms entries), so quadratic scans beat any map.
    double partial_distance_bound() const {
        const std::size_t k = chosen.size();
        if (k == 0) return 0.0;
        double max_dist = 0.0;
        int span = 0, buildings = 0, floor_pairs = 0;
        for (std::size_t i = 0; i < k; ++i) {
            const Room& ri = inst.rooms[static_cast<std::size_t>(chosen[i])];
            bool first_of_building = true;
            for (std::size_t j = 0; j < i; ++j) {
                if (inst.rooms[static_cast<std::size_t>(chosen[j])].building == ri.building) {
                    first_of_building = false;
                    break;
                }
            }
            // Count each distinct (building, floor) once, at its first room.
            bool first_of_floor = true;
            for (std::size_t j = 0; j < i; ++j) {
                const Room& rj = inst.rooms[static_cast<std::size_t>(chosen[j])];
                if (rj.building == ri.building && rj.floor == ri.floor) {
                    first_of_floor = false;
                    break;
                }
            }
            if (first_of_floor) ++floor_pairs;
            if (!first_of_building) continue;
            ++buildings;
            int lo = ri.floor, hi = ri.floor;
            for (std::size_t j = i + 1; j < k; ++j) {
                const Room& rj = inst.rooms[static_cast<std::size_t>(chosen[j])];
                if (rj.building != ri.building) continue;
                lo = std::min(lo, rj.floor);
                hi = std::max(hi, rj.floor);
            }
            span += hi - lo;
            for (std::size_t j = 0; j < i; ++j) {
                const Room& rj = inst.rooms[static_cast<std::size_t>(chosen[j])];
                if (rj.building != ri.building) {
                    max_dist = std::max(
                        max_dist, inst.building_distance[static_cast<std::size_t>(ri.building)]
                                                        [static_cast<std::size_t>(rj.building)]);
                }
            }
        }
        const Weights& w = inst.weights;
        return w.building_distance * max_dist + w.extra_building * (buildings - 1) +
               w.floor_span * span + w.extra_floor * (floor_pairs - buildings);
    }

    void emit_if_valid() {
        // Leaves of this search are minimal by construction: every proper
        // prefix in descending-capacity order is below the enrollment.
        const Section& sec = inst.sections[static_cast<std::size_t>(section)];
        if (scenario == Scenario::R && sec.initial_room &&
            std::find(chosen.begin(), chosen.end(), *sec.initial_room) == chosen.end()) {
            return;
        }
        std::vector<int> rooms = chosen;
        std::sort(rooms.begin(), rooms.end());
        SpatialMetrics m = spatial_metrics(inst, rooms, section, inst.weights);
        if (m.distance_penalty > caps.max_distance_penalty + 1e-12) return;
        if (m.preference_penalty > caps.max_preference_penalty + 1e-12) return;
        if (m.wasted_seats > caps.max_wasted_seats + 1e-12) return;
        out->push_back(RoomSet{section, std::move(rooms), m, 0.0});
    }

    void dfs(int pos) {
        const Section& sec = inst.sections[static_cast<std::size_t>(section)];
        if (chosen_capacity >= sec.enrollment && !chosen.empty()) {
            emit_if_valid();
            return;  // any extension would carry a removable room
        }
        if (pos >= static_cast<int>(order.size())) return;
        if (static_cast<int>(chosen.size()) >= inst.weights.max_rooms) return;
        if (chosen_capacity + suffix_cap_from(pos) < sec.enrollment) return;
        if (partial_distance_bound() > caps.max_distance_penalty + 1e-12) return;
        // Scenario R: once the initial room's position is passed it can no
        // longer enter the set.
        if (init_pos >= 0 && pos > init_pos &&
            std::find(chosen.begin(), chosen.end(), order[static_cast<std::size_t>(init_pos)]) == chosen.end()) {
            return;
        }

        // Branch: include order[pos].
        chosen.push_back(order[static_cast<std::size_t>(pos)]);
        chosen_capacity += inst.rooms[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])].capacity;
        dfs(pos + 1);
        chosen_capacity -= inst.rooms[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])].capacity;
        chosen.pop_back();

        // Branch: skip it.
        dfs(pos + 1);
    }

    int suffix_cap_from(int pos) const {
        // Only the best max_rooms - chosen rooms can still be added.
        const int room_budget = inst.weights.max_rooms - static_cast<int>(chosen.size());
        int cap = 0, taken = 0;
        for (int i = pos; i < static_cast<int>(order.size()) && taken < room_budget; ++i, ++taken) {
            cap += inst.rooms[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])].capacity;
        }
        return cap;
    }
};

}  // namespace detail

// Every valid room set of `section`, in a deterministic (pre-ranking) order.
// An empty result means the section cannot be hosted under the current caps.
inline std::vector<RoomSet> enumerate_room_sets(const Instance& inst, int section,
                                                Scenario scenario) {
    detail::RoomSetSearch search{inst, section, scenario, effective_caps(inst, section, scenario)};
    const Section& sec = inst.sections[static_cast<std::size_t>(section)];
    for (int r = 0; r < inst.num_rooms(); ++r) {
        if (inst.rooms[static_cast<std::size_t>(r)].compatible_with(section)) search.order.push_back(r);
    }
    std::sort(search.order.begin(), search.order.end(), [&](int a, int b) {
        const int ca = inst.rooms[static_cast<std::size_t>(a)].capacity;
        const int cb = inst.rooms[static_cast<std::size_t>(b)].capacity;
        if (ca != cb) return ca > cb;
        return a < b;
    });
    if (scenario == Scenario::R && sec.initial_room) {
        auto it = std::find(search.order.begin(), search.order.end(), *sec.initial_room);
        if (it == search.order.end()) return {};  // initial room incompatible; cannot be kept
        search.init_pos = static_cast<int>(it - search.order.begin());
    }
    std::vector<RoomSet> out;
    search.out = &out;
    search.dfs(0);
    return out;
}

// Ranks room sets ascending by a weighted blend of the four spatial
// objective parts, normalized so that the seat-waste term carries the same
// relative weight it has in the full objective.
inline void rank_room_sets(const Instance& inst, int section, std::vector<RoomSet>& sets) {
    const Weights& w = inst.weights;
    const Section& sec = inst.sections[static_cast<std::size_t>(section)];
    double denom = inst.importance_of(section) * sec.enrollment;
    if (denom <= 0.0) denom = 1.0;
    for (RoomSet& rs : sets) {
        rs.rank_score = w.room_count * (rs.metrics.room_count - 1) +
                        w.distance * rs.metrics.distance_penalty +
                        w.preference * rs.metrics.preference_penalty +
                        w.wasted_seat * rs.metrics.wasted_seats / denom;
    }
    std::sort(sets.begin(), sets.end(), [](const RoomSet& a, const RoomSet& b) {
        if (a.rank_score != b.rank_score) return a.rank_score < b.rank_score;
        if (a.metrics.room_count != b.metrics.room_count) return a.metrics.room_count < b.metrics.room_count;
        if (a.metrics.wasted_seats != b.metrics.wasted_seats) return a.metrics.wasted_seats < b.metrics.wasted_seats;
        return a.rooms < b.rooms;
    });
}

// Lazily enumerated, memoized room-set lists, shared by all solver workers
// of one run configuration. Thread-safe.
class RoomSetCatalog {
public:
    RoomSetCatalog(const Instance& inst, Scenario scenario)
        : inst_(&inst), scenario_(scenario),
          cache_(static_cast<std::size_t>(inst.num_sections())) {}

    Scenario scenario() const { return scenario_; }

    const std::vector<RoomSet>& for_section(int section) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto& slot = cache_[static_cast<std::size_t>(section)];
        if (!slot) {
            std::vector<RoomSet> sets = enumerate_room_sets(*inst_, section, scenario_);
            rank_room_sets(*inst_, section, sets);
            slot = std::move(sets);
        }
        return *slot;
    }

    // Sections with no valid room set at all (instance-level infeasibility).
    std::vector<int> sections_without_sets() const {
        std::vector<int> bad;
        for (int s = 0; s < inst_->num_sections(); ++s) {
            if (for_section(s).empty()) bad.push_back(s);
        }
        return bad;
    }

    double average_count() const {
        if (inst_->num_sections() == 0) return 0.0;
        double total = 0;
        for (int s = 0; s < inst_->num_sections(); ++s) total += static_cast<double>(for_section(s).size());
        return total / inst_->num_sections();
    }

private:
    const Instance* inst_;
    Scenario scenario_;
    mutable std::vector<std::optional<std::vector<RoomSet>>> cache_;
    mutable std::mutex mu_;
};

}  // namespace ucsched
