#pragma once

// Wave-based simulated annealing over full-semester schedules. Meetings are
// partitioned into priority waves; each wave must be fully placed before the
// next begins, and a section's scheduled meeting count may never drop below
// its count at the end of any earlier wave. Neighborhood moves remove a few
// sections outright, redraw their room sets, and let the greedy engine
// re-place everything it can.

#include <atomic>
#include <chrono>
#include <functional>
#include <iomanip>
#include <thread>

#include "ucsched/engine.hpp"
#include "ucsched/pra.hpp"

namespace ucsched {

struct WavePolicy {
    int wave_count = 5;
    int enrollment_threshold = 80;  // splits regular sections into two quota waves
};

struct WavePlan {
    int wave_count = 5;
    std::vector<Meeting> meetings;                       // master list, all sections
    std::vector<int> quota;                              // fairness quota per section
    std::vector<int> quota_wave;                         // wave holding each section's quota
    std::vector<std::vector<std::size_t>> section_meetings;  // per section: indices into meetings
    std::vector<std::vector<int>> wave_sections;         // per wave (1-based): sections with meetings
    std::vector<int> wave_demand;                        // per wave (1-based): meeting count
};

// Builds the master meeting list. Every one of a section's normal meetings
// appears exactly once, tagged with its default week. The quota meetings are
// spread evenly over the section's active span so the fairness floor can be
// met with well-distributed timing.
inline WavePlan build_waves(const Instance& inst, const WavePolicy& policy) {
    if (policy.wave_count < 2) throw ValidationError("wave_policy.wave_count: must be >= 2");
    const int V = policy.wave_count;
    WavePlan plan;
    plan.wave_count = V;
    plan.quota.resize(static_cast<std::size_t>(inst.num_sections()));
    plan.quota_wave.resize(static_cast<std::size_t>(inst.num_sections()));
    plan.section_meetings.resize(static_cast<std::size_t>(inst.num_sections()));
    plan.wave_sections.assign(static_cast<std::size_t>(V) + 1, {});
    plan.wave_demand.assign(static_cast<std::size_t>(V) + 1, 0);

    for (int s = 0; s < inst.num_sections(); ++s) {
        const Section& sec = inst.sections[static_cast<std::size_t>(s)];
        std::vector<int> defaults;
        for (int w = 0; w < inst.calendar.weeks; ++w) {
            for (int k = 0; k < sec.weekly_counts[static_cast<std::size_t>(w)]; ++k) defaults.push_back(w);
        }
        const int normal = static_cast<int>(defaults.size());
        const int q = inst.fairness_quota_of(s);
        plan.quota[static_cast<std::size_t>(s)] = q;

        int qw;
        if (sec.exam_block) {
            qw = 1;
        } else if (sec.irregular()) {
            qw = 2;
        } else if (sec.enrollment >= policy.enrollment_threshold) {
            qw = 3;
        } else {
            qw = 4;
        }
        qw = std::min(qw, V - 1);
        plan.quota_wave[static_cast<std::size_t>(s)] = qw;

        // j-th quota meeting sits at the ceil((j - 1/2) * normal / q)-th
        // position of the chronological meeting list (1-based), i.e. evenly
        // spaced by cumulative meeting index.
        std::vector<char> in_quota(static_cast<std::size_t>(normal), 0);
        for (int j = 1; j <= q; ++j) {
            const long long num = static_cast<long long>(2 * j - 1) * normal;
            const long long den = 2LL * q;
            const int k = static_cast<int>((num + den - 1) / den);  // ceil(num / den)
            in_quota[static_cast<std::size_t>(k - 1)] = 1;
        }
        std::set<int> waves_of_section;
        for (int k = 0; k < normal; ++k) {
            const int wave = in_quota[static_cast<std::size_t>(k)] ? qw : V;
            plan.section_meetings[static_cast<std::size_t>(s)].push_back(plan.meetings.size());
            plan.meetings.push_back(Meeting{s, defaults[static_cast<std::size_t>(k)], wave});
            ++plan.wave_demand[static_cast<std::size_t>(wave)];
            waves_of_section.insert(wave);
        }
        for (int wave : waves_of_section) plan.wave_sections[static_cast<std::size_t>(wave)].push_back(s);
    }
    return plan;
}

struct AnnealConfig {
    double start_temperature = 200.0;
    std::optional<double> final_wave_start_temperature;  // temperature reset entering the last wave
    double temperature_factor = 0.999999;                // geometric cooling per evaluated neighbor
    double time_limit_secs = 60.0;
    int removal_low = 1;    // sections removed per neighbor move: DU(low, high)
    int removal_high = 10;
    std::uint64_t seed = 1;
    int runs = 1;
    std::uint64_t max_iters = 0;  // 0 = bounded by time only
    // Online-share weight override used in every wave before the last.
    double early_online_weight = 40000.0;
    double early_online_exponent = 3.0;
    int workers = 1;

    void validate() const {
        if (!(temperature_factor > 0.0 && temperature_factor < 1.0))
            throw ValidationError("anneal.temperature_factor: must be in (0, 1)");
        if (removal_low < 1 || removal_low > removal_high)
            throw ValidationError("anneal.removal range: need 1 <= low <= high");
        if (time_limit_secs <= 0.0) throw ValidationError("anneal.time_limit_secs: must be > 0");
        if (runs < 1) throw ValidationError("anneal.runs: must be >= 1");
        if (early_online_exponent < 1.0)
            throw ValidationError("anneal.early_online_exponent: must be >= 1");
    }
};

// Standard Metropolis acceptance with greedy behavior at zero temperature.
inline bool accept_move(double delta, double temperature, Rng& rng) {
    if (delta <= 0.0) return true;
    if (temperature <= 0.0) return false;
    return rng.uniform_real(0.0, 1.0) < std::exp(-delta / temperature);
}

struct RunResult {
    Schedule schedule;             // best feasible solution seen
    ObjectiveBreakdown breakdown;  // recomputed from scratch with the instance weights
    double tracked_best_total = 0.0;  // the incremental evaluator's value for the same schedule
    std::uint64_t iterations = 0;
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;
    std::uint64_t checkpoint_rejections = 0;
    int waves_completed = 0;
    std::uint64_t seed = 0;
    double elapsed_secs = 0.0;
    std::vector<std::string> log_lines;
};

namespace detail {

inline std::string log_kv(const char* event, std::initializer_list<std::pair<const char*, double>> nums,
                          std::uint64_t iter, double elapsed_ms) {
    std::ostringstream os;
    os << "{\"event\":\"" << event << "\"";
    os << ",\"iter\":" << iter;
    for (const auto& [k, v] : nums) {
        os << ",\"" << k << "\":" << std::setprecision(17) << v;
    }
    os << ",\"elapsed_ms\":" << std::llround(elapsed_ms) << "}";
    return os.str();
}

// Mutable annealing state plus the journal needed to undo a rejected move.
class Solver {
public:
    Solver(const Instance& inst, const WavePlan& plan, const RoomSetCatalog& catalog,
           const AnnealConfig& cfg, std::uint64_t seed)
        : inst_(inst), plan_(plan), catalog_(catalog), cfg_(cfg), rng_(seed), seed_(seed),
          sched_(Schedule::empty_for(inst)), occ_(inst),
          rooms_choice_(static_cast<std::size_t>(inst.num_sections()), -1),
          placed_(plan.meetings.size(), 0),
          checkpoints_(static_cast<std::size_t>(inst.num_sections()), 0),
          placed_by_wave_(static_cast<std::size_t>(plan.wave_count) + 1, 0),
          cache_(static_cast<std::size_t>(inst.num_sections())),
          dirty_(static_cast<std::size_t>(inst.num_sections()), 1),
          journaled_(static_cast<std::size_t>(inst.num_sections()), 0) {
        early_weights_ = inst.weights;
        early_weights_.online = cfg.early_online_weight;
        early_weights_.online_exponent = cfg.early_online_exponent;
    }

    RunResult run() {
        const auto t0 = std::chrono::steady_clock::now();
        auto elapsed_ms = [&t0]() {
            return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        };
        auto out_of_budget = [&]() {
            if (elapsed_ms() >= cfg_.time_limit_secs * 1000.0) return true;
            return cfg_.max_iters != 0 && iterations_ >= cfg_.max_iters;
        };

        RunResult result;
        result.seed = seed_;
        double temperature = cfg_.start_temperature;
        double best_total = std::numeric_limits<double>::infinity();
        Schedule best_schedule = sched_;

        auto note_best = [&]() {
            const double stock = total(inst_.weights);
            if (stock < best_total) {
                best_total = stock;
                best_schedule = sched_;
                result.log_lines.push_back(
                    log_kv("improve", {{"best", stock}}, iterations_, elapsed_ms()));
            }
        };

        const int V = plan_.wave_count;
        int waves_completed = 0;
        bool stopped = false;
        for (int v = 1; v <= V && !stopped; ++v) {
            const Weights& weights = (v < V) ? early_weights_ : inst_.weights;
            if (v == V && cfg_.final_wave_start_temperature) {
                temperature = *cfg_.final_wave_start_temperature;
            }
            result.log_lines.push_back(log_kv(
                "wave_start", {{"wave", static_cast<double>(v)}, {"temperature", temperature}},
                iterations_, elapsed_ms()));

            // First solution of the wave: newly entering sections take their
            // best-ranked room set, then the engine packs what it can.
            for (int s : plan_.wave_sections[static_cast<std::size_t>(v)]) {
                if (rooms_choice_[static_cast<std::size_t>(s)] < 0) rooms_choice_[static_cast<std::size_t>(s)] = 0;
            }
            seed_wave(v);
            double current = total(weights);
            note_best();

            while (true) {
                if (out_of_budget()) {
                    stopped = true;
                    break;
                }
                if (v < V && placed_by_wave_[static_cast<std::size_t>(v)] >=
                                 plan_.wave_demand[static_cast<std::size_t>(v)]) {
                    break;  // wave complete, advance
                }
                const std::vector<int>& candidates = move_candidates(v);
                if (candidates.empty()) break;

                const MoveOutcome move = propose_move(v, candidates);
                ++iterations_;
                if (move.applied) {
                    const double next = total(weights);
                    const double delta = next - current;
                    if (accept_move(delta, temperature, rng_)) {
                        commit_move();
                        current = next;
                        ++accepted_;
                        note_best();
                    } else {
                        rollback_move();
                        ++rejected_;
                    }
                } else {
                    ++rejected_;
                    ++checkpoint_rejections_;
                }
                temperature *= cfg_.temperature_factor;
            }
            if (!stopped) {
                waves_completed = v;
                for (int s = 0; s < inst_.num_sections(); ++s) {
                    checkpoints_[static_cast<std::size_t>(s)] =
                        std::max(checkpoints_[static_cast<std::size_t>(s)], count_of(s));
                }
                result.log_lines.push_back(log_kv(
                    "wave_done",
                    {{"wave", static_cast<double>(v)},
                     {"placed", static_cast<double>(placed_by_wave_[static_cast<std::size_t>(v)])}},
                    iterations_, elapsed_ms()));
            }
        }

        result.schedule = std::move(best_schedule);
        result.tracked_best_total = best_total;
        result.breakdown = objective(inst_, result.schedule, inst_.weights);
        result.iterations = iterations_;
        result.accepted = accepted_;
        result.rejected = rejected_;
        result.checkpoint_rejections = checkpoint_rejections_;
        result.waves_completed = waves_completed;
        result.elapsed_secs = elapsed_ms() / 1000.0;
        const double rate = iterations_ ? static_cast<double>(accepted_) / static_cast<double>(iterations_) : 0.0;
        result.log_lines.push_back(log_kv(
            "run_done", {{"best", best_total}, {"acceptance_rate", rate}}, iterations_, elapsed_ms()));
        return result;
    }

    // Exposed for tests: current schedule and occupancy must always agree.
    const Schedule& schedule() const { return sched_; }
    const OccupancyIndex& occupancy() const { return occ_; }

private:
    struct SectionSnapshot {
        int section;
        SectionAssignment assignment;
        int rooms_choice;
        std::vector<char> placed;  // flags of this section's plan meetings
    };
    struct MoveOutcome {
        bool applied = false;  // false: checkpoint precheck failed, state untouched
    };

    const std::vector<int>& rooms_of(int s) const {
        return catalog_.for_section(s)[static_cast<std::size_t>(rooms_choice_[static_cast<std::size_t>(s)])].rooms;
    }
    int count_of(int s) const {
        return static_cast<int>(sched_.sections[static_cast<std::size_t>(s)].meetings.size());
    }

    // Stock or wave-adjusted objective over the cached per-section metrics.
    // Summation runs in ascending section order, matching objective().
    double total(const Weights& w) {
        std::array<double, 7> comps{};
        for (int s = 0; s < inst_.num_sections(); ++s) {
            auto& d = cache_[static_cast<std::size_t>(s)];
            if (dirty_[static_cast<std::size_t>(s)]) {
                d = evaluate_section(inst_, s, sched_.sections[static_cast<std::size_t>(s)], w);
                dirty_[static_cast<std::size_t>(s)] = 0;
            }
            const auto c = section_components(inst_, s, d, w);
            for (int k = 0; k < 7; ++k) comps[static_cast<std::size_t>(k)] += c[static_cast<std::size_t>(k)];
        }
        double t = 0.0;
        for (double c : comps) t += c;
        return t;
    }

    void mark_dirty(int s) { dirty_[static_cast<std::size_t>(s)] = 1; }

    void sync_rooms(int s) {
        SectionAssignment& a = sched_.sections[static_cast<std::size_t>(s)];
        if (a.meetings.empty()) {
            a.rooms.clear();
        } else if (a.rooms.empty()) {
            a.rooms = rooms_of(s);
        }
        mark_dirty(s);
    }

    std::vector<std::size_t> unplaced_of_wave(int wave) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < plan_.meetings.size(); ++i) {
            if (plan_.meetings[i].wave == wave && !placed_[i]) out.push_back(i);
        }
        return out;
    }

    void apply_engine(const std::vector<std::size_t>& meeting_ids) {
        if (meeting_ids.empty()) return;
        std::vector<Meeting> batch;
        batch.reserve(meeting_ids.size());
        for (std::size_t id : meeting_ids) batch.push_back(plan_.meetings[id]);
        EngineResult res = run_engine(
            inst_, sched_, occ_, batch, [this](int s) -> const std::vector<int>& { return rooms_of(s); },
            rng_);
        for (const Placement& p : res.placed) {
            const std::size_t id = meeting_ids[p.meeting_index];
            placed_[id] = 1;
            ++placed_by_wave_[static_cast<std::size_t>(plan_.meetings[id].wave)];
            mark_dirty(plan_.meetings[id].section);
        }
    }

    // Engine pass placing every unplaced meeting of waves 1..v (earlier
    // waves first), used both to open a wave and inside neighbor moves.
    void place_waves_up_to(int v) {
        for (int u = 1; u < v; ++u) {
            if (placed_by_wave_[static_cast<std::size_t>(u)] < plan_.wave_demand[static_cast<std::size_t>(u)]) {
                apply_engine(unplaced_of_wave(u));
            }
        }
        apply_engine(unplaced_of_wave(v));
    }

    void seed_wave(int v) {
        place_waves_up_to(v);
        for (int s = 0; s < inst_.num_sections(); ++s) sync_rooms(s);
    }

    const std::vector<int>& move_candidates(int v) {
        if (v < plan_.wave_count || !plan_.wave_sections[static_cast<std::size_t>(v)].empty()) {
            return plan_.wave_sections[static_cast<std::size_t>(v)];
        }
        // Final wave can be empty (fairness floor of 1.0 everywhere); fall
        // back to reshuffling any scheduled section so the search still
        // improves room assignments.
        if (all_sections_.empty()) {
            for (int s = 0; s < inst_.num_sections(); ++s) {
                if (!plan_.section_meetings[static_cast<std::size_t>(s)].empty()) all_sections_.push_back(s);
            }
        }
        return all_sections_;
    }

    void snapshot(int s) {
        if (journaled_[static_cast<std::size_t>(s)]) return;
        journaled_[static_cast<std::size_t>(s)] = 1;
        SectionSnapshot snap;
        snap.section = s;
        snap.assignment = sched_.sections[static_cast<std::size_t>(s)];
        snap.rooms_choice = rooms_choice_[static_cast<std::size_t>(s)];
        for (std::size_t id : plan_.section_meetings[static_cast<std::size_t>(s)]) {
            snap.placed.push_back(placed_[id]);
        }
        journal_.push_back(std::move(snap));
    }

    void unplace_section(int s) {
        SectionAssignment& a = sched_.sections[static_cast<std::size_t>(s)];
        for (const auto& [time, week] : a.meetings) occ_.remove(inst_, a.rooms, time, week);
        a.meetings.clear();
        a.rooms.clear();
        for (std::size_t id : plan_.section_meetings[static_cast<std::size_t>(s)]) {
            if (placed_[id]) {
                placed_[id] = 0;
                --placed_by_wave_[static_cast<std::size_t>(plan_.meetings[id].wave)];
            }
        }
        mark_dirty(s);
    }

    MoveOutcome propose_move(int v, const std::vector<int>& candidates) {
        journal_.clear();
        const int k = std::min(rng_.uniform_int(cfg_.removal_low, cfg_.removal_high),
                               static_cast<int>(candidates.size()));
        std::vector<int> pool = candidates;
        for (int i = 0; i < k; ++i) {
            const std::size_t j = i + rng_.uniform_index(pool.size() - static_cast<std::size_t>(i));
            std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
        }
        pool.resize(static_cast<std::size_t>(k));

        // Anything the engine may touch gets snapshotted up front: the
        // removed sections plus any section with unplaced meetings.
        for (int s : pool) snapshot(s);
        for (std::size_t i = 0; i < plan_.meetings.size(); ++i) {
            if (!placed_[i] && plan_.meetings[i].wave <= v) snapshot(plan_.meetings[i].section);
        }

        for (int s : pool) {
            unplace_section(s);
            rooms_choice_[static_cast<std::size_t>(s)] =
                static_cast<int>(rng_.uniform_index(catalog_.for_section(s).size()));
        }
        place_waves_up_to(v);
        for (const SectionSnapshot& snap : journal_) sync_rooms(snap.section);

        for (const SectionSnapshot& snap : journal_) {
            if (count_of(snap.section) < checkpoints_[static_cast<std::size_t>(snap.section)]) {
                rollback_move();
                return MoveOutcome{false};
            }
        }
        return MoveOutcome{true};
    }

    void commit_move() {
        for (const SectionSnapshot& snap : journal_) journaled_[static_cast<std::size_t>(snap.section)] = 0;
        journal_.clear();
    }

    void rollback_move() {
        for (auto it = journal_.rbegin(); it != journal_.rend(); ++it) {
            const int s = it->section;
            SectionAssignment& a = sched_.sections[static_cast<std::size_t>(s)];
            for (const auto& [time, week] : a.meetings) occ_.remove(inst_, a.rooms, time, week);
            for (std::size_t j = 0; j < it->placed.size(); ++j) {
                const std::size_t id = plan_.section_meetings[static_cast<std::size_t>(s)][j];
                if (placed_[id]) --placed_by_wave_[static_cast<std::size_t>(plan_.meetings[id].wave)];
                if (it->placed[j]) ++placed_by_wave_[static_cast<std::size_t>(plan_.meetings[id].wave)];
                placed_[id] = it->placed[j];
            }
            a = it->assignment;
            rooms_choice_[static_cast<std::size_t>(s)] = it->rooms_choice;
            for (const auto& [time, week] : a.meetings) occ_.place(inst_, a.rooms, time, week);
            mark_dirty(s);
            journaled_[static_cast<std::size_t>(s)] = 0;
        }
        journal_.clear();
    }

    const Instance& inst_;
    const WavePlan& plan_;
    const RoomSetCatalog& catalog_;
    const AnnealConfig& cfg_;
    Rng rng_;
    std::uint64_t seed_;
    Weights early_weights_;

    Schedule sched_;
    OccupancyIndex occ_;
    std::vector<int> rooms_choice_;
    std::vector<char> placed_;
    std::vector<int> checkpoints_;
    std::vector<int> placed_by_wave_;
    std::vector<SectionDiagnostics> cache_;
    std::vector<char> dirty_;
    std::vector<char> journaled_;
    std::vector<SectionSnapshot> journal_;
    std::vector<int> all_sections_;

    std::uint64_t iterations_ = 0;
    std::uint64_t accepted_ = 0;
    std::uint64_t rejected_ = 0;
    std::uint64_t checkpoint_rejections_ = 0;
};

}  // namespace detail

// One full solver run. Every section must have at least one valid room set.
inline RunResult run_office(const Instance& inst, const WavePlan& plan,
                            const RoomSetCatalog& catalog, const AnnealConfig& cfg,
                            std::uint64_t seed) {
    cfg.validate();
    detail::Solver solver(inst, plan, catalog, cfg, seed);
    return solver.run();
}

struct MultiRunResult {
    std::vector<RunResult> runs;
    std::size_t best_index = 0;
};

// `runs` independent runs with seeds cfg.seed, cfg.seed+1, ...; the best
// (lowest recomputed total, ties to the earliest run) is selected. Runs may
// execute on several worker threads; results do not depend on the worker
// count.
inline MultiRunResult run_many(const Instance& inst, const WavePlan& plan,
                               const RoomSetCatalog& catalog, const AnnealConfig& cfg) {
    cfg.validate();
    const std::vector<int> bad = catalog.sections_without_sets();
    if (!bad.empty()) {
        throw ValidationError("section " + std::to_string(bad.front() + 1) +
                              " has no valid room set under scenario " +
                              to_string(catalog.scenario()));
    }
    MultiRunResult out;
    out.runs.resize(static_cast<std::size_t>(cfg.runs));
    const int workers = std::max(1, std::min(cfg.workers, cfg.runs));
    if (workers == 1) {
        for (int i = 0; i < cfg.runs; ++i) {
            out.runs[static_cast<std::size_t>(i)] =
                run_office(inst, plan, catalog, cfg, cfg.seed + static_cast<std::uint64_t>(i));
        }
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&]() {
                for (int i = next.fetch_add(1); i < cfg.runs; i = next.fetch_add(1)) {
                    out.runs[static_cast<std::size_t>(i)] =
                        run_office(inst, plan, catalog, cfg, cfg.seed + static_cast<std::uint64_t>(i));
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 1; i < out.runs.size(); ++i) {
        if (out.runs[i].breakdown.total < out.runs[out.best_index].breakdown.total) out.best_index = i;
    }
    return out;
}

}  // namespace ucsched
