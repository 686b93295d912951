#pragma once

// Document formats. Instances and schedules travel as JSON with 1-based ids;
// in-memory indices are 0-based. Serialization is canonical: loading a saved
// document reproduces the instance field by field, and re-saving produces
// identical bytes.

#include <fstream>

#include "json.hpp"
#include "ucsched/anneal.hpp"
#include "ucsched/evaluate.hpp"

namespace ucsched {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::vector<char> flags_from_ids(const Json& arr, int size, const std::string& where) {
    std::vector<char> flags(static_cast<std::size_t>(size), 0);
    for (const auto& v : arr) {
        const int id = v.get<int>();
        if (id < 1 || id > size) throw ValidationError(where + ": id " + std::to_string(id) + " out of range");
        flags[static_cast<std::size_t>(id - 1)] = 1;
    }
    return flags;
}

inline Json ids_from_flags(const std::vector<char>& flags) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (flags[i]) arr.push_back(static_cast<int>(i + 1));
    }
    return arr;
}

inline std::vector<int> indices_from_ids(const Json& arr, int size, const std::string& where) {
    std::vector<int> out;
    for (const auto& v : arr) {
        const int id = v.get<int>();
        if (id < 1 || id > size) throw ValidationError(where + ": id " + std::to_string(id) + " out of range");
        out.push_back(id - 1);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline Json ids_from_indices(const std::vector<int>& idx) {
    Json arr = Json::array();
    std::vector<int> sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    for (int i : sorted) arr.push_back(i + 1);
    return arr;
}

inline void expect_id(const Json& obj, std::size_t position, const std::string& where) {
    if (obj.value("id", -1) != static_cast<int>(position + 1)) {
        throw ValidationError(where + ": ids must be dense and 1-based in document order");
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Instance

inline Instance instance_from_json(const Json& doc) {
    if (doc.value("version", 0) != 1) throw ValidationError("version: expected 1");
    Instance inst;

    const Json& cal = doc.at("calendar");
    inst.calendar.weeks = cal.at("weeks").get<int>();
    inst.calendar.days_per_week = cal.at("days_per_week").get<int>();
    inst.calendar.slots_per_week = cal.at("timeslots_per_week").get<int>();
    inst.calendar.slot_minutes = cal.at("timeslot_minutes").get<int>();
    if (inst.calendar.weeks < 1 || inst.calendar.days_per_week < 1)
        throw ValidationError("calendar: weeks and days_per_week must be positive");
    inst.calendar.holiday =
        detail::flags_from_ids(cal.value("holidays", Json::array()), inst.calendar.days(), "calendar.holidays");

    for (std::size_t i = 0; i < doc.at("meeting_times").size(); ++i) {
        const Json& mt = doc.at("meeting_times")[i];
        detail::expect_id(mt, i, "meeting_times");
        MeetingTime out;
        out.weekday = mt.at("day_of_week").get<int>() - 1;
        out.start_slot = mt.at("start_slot").get<int>() - 1;
        out.duration_slots = mt.at("duration_slots").get<int>();
        inst.meeting_times.push_back(out);
    }

    const Json& buildings = doc.at("buildings");
    const int B = static_cast<int>(buildings.size());
    inst.building_distance.resize(static_cast<std::size_t>(B));
    for (std::size_t b = 0; b < buildings.size(); ++b) {
        detail::expect_id(buildings[b], b, "buildings");
        const Json& row = buildings[b].at("distances");
        if (static_cast<int>(row.size()) != B)
            throw ValidationError("buildings[" + std::to_string(b + 1) + "].distances: need one entry per building");
        for (const auto& v : row) inst.building_distance[b].push_back(v.get<double>());
    }

    const int R = static_cast<int>(doc.at("rooms").size());
    for (std::size_t r = 0; r < doc.at("rooms").size(); ++r) {
        const Json& jr = doc.at("rooms")[r];
        detail::expect_id(jr, r, "rooms");
        Room room;
        const int b = jr.at("building").get<int>();
        if (b < 1 || b > B) throw ValidationError("rooms[" + std::to_string(r + 1) + "].building: unknown building");
        room.building = b - 1;
        room.floor = jr.at("floor").get<int>();
        room.capacity = jr.at("capacity").get<int>();
        room.closed = detail::flags_from_ids(jr.value("unavailable_days", Json::array()), inst.calendar.days(),
                                             "rooms[" + std::to_string(r + 1) + "].unavailable_days");
        room.adjacent = detail::indices_from_ids(jr.value("adjacent_rooms", Json::array()), R,
                                                 "rooms[" + std::to_string(r + 1) + "].adjacent_rooms");
        inst.rooms.push_back(std::move(room));
    }

    for (std::size_t g = 0; g < doc.at("organizations").size(); ++g) {
        const Json& jg = doc.at("organizations")[g];
        detail::expect_id(jg, g, "organizations");
        Organization org;
        for (const auto& v : jg.at("building_penalties")) org.building_penalty.push_back(v.get<double>());
        inst.organizations.push_back(std::move(org));
    }

    const int S = static_cast<int>(doc.at("sections").size());
    for (std::size_t s = 0; s < doc.at("sections").size(); ++s) {
        const Json& js = doc.at("sections")[s];
        detail::expect_id(js, s, "sections");
        const std::string where = "sections[" + std::to_string(s + 1) + "]";
        Section sec;
        sec.level = js.at("level").get<int>();
        sec.enrollment = js.at("enrollment").get<int>();
        const int g = js.at("organization").get<int>();
        if (g < 1 || g > static_cast<int>(inst.organizations.size()))
            throw ValidationError(where + ".organization: unknown organization");
        sec.organization = g - 1;
        sec.duration_slots = js.at("duration_slots").get<int>();
        sec.meeting_times = detail::indices_from_ids(js.at("meeting_times"), inst.num_meeting_times(),
                                                     where + ".meeting_times");
        for (const auto& v : js.at("weekly_counts")) sec.weekly_counts.push_back(v.get<int>());
        sec.blocked_days = detail::flags_from_ids(js.value("blocked_days", Json::array()),
                                                  inst.calendar.days(), where + ".blocked_days");
        if (js.contains("initial_room") && !js.at("initial_room").is_null()) {
            const int r = js.at("initial_room").get<int>();
            if (r < 1 || r > R) throw ValidationError(where + ".initial_room: unknown room");
            sec.initial_room = r - 1;
        }
        sec.min_fraction = js.at("min_fraction").get<double>();
        sec.exam_block = js.value("exam_block", false);
        if (js.contains("max_distance_penalty")) sec.max_distance_penalty = js.at("max_distance_penalty").get<double>();
        if (js.contains("max_preference_penalty"))
            sec.max_preference_penalty = js.at("max_preference_penalty").get<double>();
        if (js.contains("max_wasted_seats")) sec.max_wasted_seats = js.at("max_wasted_seats").get<double>();
        inst.sections.push_back(std::move(sec));
    }
    // Room incompatibility lists reference sections, so resolve them last.
    for (std::size_t r = 0; r < doc.at("rooms").size(); ++r) {
        const Json& jr = doc.at("rooms")[r];
        inst.rooms[r].incompatible = detail::indices_from_ids(
            jr.value("incompatible_sections", Json::array()), S,
            "rooms[" + std::to_string(r + 1) + "].incompatible_sections");
    }

    const Json& jw = doc.at("weights");
    Weights& w = inst.weights;
    w.room_count = jw.at("room_count").get<double>();
    w.distance = jw.at("distance").get<double>();
    w.building_distance = jw.at("building_distance").get<double>();
    w.extra_building = jw.at("extra_building").get<double>();
    w.floor_span = jw.at("floor_span").get<double>();
    w.extra_floor = jw.at("extra_floor").get<double>();
    w.nonadjacent_pair = jw.at("nonadjacent_pair").get<double>();
    w.preference = jw.at("preference").get<double>();
    w.wasted_seat = jw.at("wasted_seat").get<double>();
    w.online = jw.at("online").get<double>();
    w.online_exponent = jw.at("online_exponent").get<double>();
    w.timing = jw.at("timing").get<double>();
    w.fairness = jw.at("fairness").get<double>();
    w.importance_by_level.clear();
    for (const auto& v : jw.at("importance_by_level")) w.importance_by_level.push_back(v.get<double>());
    w.max_rooms = jw.at("max_rooms").get<int>();
    w.max_distance_penalty = jw.at("max_distance_penalty").get<double>();
    w.max_preference_penalty = jw.at("max_preference_penalty").get<double>();
    w.max_wasted_seats = jw.at("max_wasted_seats").get<double>();
    w.enforce_min_fraction = jw.value("enforce_min_fraction", false);

    validate_instance(inst);
    return inst;
}

inline Json instance_to_json(const Instance& inst) {
    Json doc;
    doc["version"] = 1;
    doc["calendar"] = {{"weeks", inst.calendar.weeks},
                       {"days_per_week", inst.calendar.days_per_week},
                       {"timeslots_per_week", inst.calendar.slots_per_week},
                       {"timeslot_minutes", inst.calendar.slot_minutes},
                       {"holidays", detail::ids_from_flags(inst.calendar.holiday)}};
    doc["meeting_times"] = Json::array();
    for (std::size_t m = 0; m < inst.meeting_times.size(); ++m) {
        const MeetingTime& mt = inst.meeting_times[m];
        doc["meeting_times"].push_back({{"id", m + 1},
                                        {"day_of_week", mt.weekday + 1},
                                        {"start_slot", mt.start_slot + 1},
                                        {"duration_slots", mt.duration_slots}});
    }
    doc["buildings"] = Json::array();
    for (std::size_t b = 0; b < inst.building_distance.size(); ++b) {
        doc["buildings"].push_back({{"id", b + 1}, {"distances", inst.building_distance[b]}});
    }
    doc["rooms"] = Json::array();
    for (std::size_t r = 0; r < inst.rooms.size(); ++r) {
        const Room& room = inst.rooms[r];
        doc["rooms"].push_back({{"id", r + 1},
                                {"building", room.building + 1},
                                {"floor", room.floor},
                                {"capacity", room.capacity},
                                {"unavailable_days", detail::ids_from_flags(room.closed)},
                                {"adjacent_rooms", detail::ids_from_indices(room.adjacent)},
                                {"incompatible_sections", detail::ids_from_indices(room.incompatible)}});
    }
    doc["organizations"] = Json::array();
    for (std::size_t g = 0; g < inst.organizations.size(); ++g) {
        doc["organizations"].push_back(
            {{"id", g + 1}, {"building_penalties", inst.organizations[g].building_penalty}});
    }
    doc["sections"] = Json::array();
    for (std::size_t s = 0; s < inst.sections.size(); ++s) {
        const Section& sec = inst.sections[s];
        Json js = {{"id", s + 1},
                   {"level", sec.level},
                   {"enrollment", sec.enrollment},
                   {"organization", sec.organization + 1},
                   {"duration_slots", sec.duration_slots},
                   {"meeting_times", detail::ids_from_indices(sec.meeting_times)},
                   {"weekly_counts", sec.weekly_counts},
                   {"blocked_days", detail::ids_from_flags(sec.blocked_days)},
                   {"initial_room", sec.initial_room ? Json(*sec.initial_room + 1) : Json(nullptr)},
                   {"min_fraction", sec.min_fraction},
                   {"exam_block", sec.exam_block}};
        if (sec.max_distance_penalty) js["max_distance_penalty"] = *sec.max_distance_penalty;
        if (sec.max_preference_penalty) js["max_preference_penalty"] = *sec.max_preference_penalty;
        if (sec.max_wasted_seats) js["max_wasted_seats"] = *sec.max_wasted_seats;
        doc["sections"].push_back(std::move(js));
    }
    const Weights& w = inst.weights;
    doc["weights"] = {{"room_count", w.room_count},
                      {"distance", w.distance},
                      {"building_distance", w.building_distance},
                      {"extra_building", w.extra_building},
                      {"floor_span", w.floor_span},
                      {"extra_floor", w.extra_floor},
                      {"nonadjacent_pair", w.nonadjacent_pair},
                      {"preference", w.preference},
                      {"wasted_seat", w.wasted_seat},
                      {"online", w.online},
                      {"online_exponent", w.online_exponent},
                      {"timing", w.timing},
                      {"fairness", w.fairness},
                      {"importance_by_level", w.importance_by_level},
                      {"max_rooms", w.max_rooms},
                      {"max_distance_penalty", w.max_distance_penalty},
                      {"max_preference_penalty", w.max_preference_penalty},
                      {"max_wasted_seats", w.max_wasted_seats},
                      {"enforce_min_fraction", w.enforce_min_fraction}};
    return doc;
}

// ---------------------------------------------------------------------------
// Schedule

inline Schedule schedule_from_json(const Json& doc, const Instance& inst) {
    if (doc.value("version", 0) != 1) throw ValidationError("version: expected 1");
    Schedule sched = Schedule::empty_for(inst);
    for (const auto& [key, body] : doc.at("sections").items()) {
        int id = 0;
        try {
            id = std::stoi(key);
        } catch (const std::exception&) {
            throw ValidationError("schedule.sections: non-numeric section id \"" + key + "\"");
        }
        if (id < 1 || id > inst.num_sections())
            throw ValidationError("schedule.sections: unknown section id " + std::to_string(id));
        SectionAssignment& a = sched.sections[static_cast<std::size_t>(id - 1)];
        a.rooms = detail::indices_from_ids(body.value("rooms", Json::array()), inst.num_rooms(),
                                           "schedule.sections[" + key + "].rooms");
        for (const auto& pair : body.value("meetings", Json::array())) {
            if (!pair.is_array() || pair.size() != 2)
                throw ValidationError("schedule.sections[" + key + "].meetings: entries are [meeting_time, week]");
            const int m = pair[0].get<int>();
            const int w = pair[1].get<int>();
            if (m < 1 || m > inst.num_meeting_times())
                throw ValidationError("schedule.sections[" + key + "].meetings: unknown meeting time " +
                                      std::to_string(m));
            if (w < 1 || w > inst.calendar.weeks)
                throw ValidationError("schedule.sections[" + key + "].meetings: week " + std::to_string(w) +
                                      " out of range");
            a.meetings.emplace_back(m - 1, w - 1);
        }
        std::sort(a.meetings.begin(), a.meetings.end());
        a.meetings.erase(std::unique(a.meetings.begin(), a.meetings.end()), a.meetings.end());
    }
    return sched;
}

inline Json schedule_to_json(const Schedule& sched) {
    Json doc;
    doc["version"] = 1;
    Json sections = Json::object();
    for (std::size_t s = 0; s < sched.sections.size(); ++s) {
        const SectionAssignment& a = sched.sections[s];
        if (a.rooms.empty() && a.meetings.empty()) continue;
        Json meetings = Json::array();
        for (const auto& [m, w] : a.meetings) meetings.push_back({m + 1, w + 1});
        sections[std::to_string(s + 1)] = {{"rooms", detail::ids_from_indices(a.rooms)},
                                           {"meetings", std::move(meetings)}};
    }
    doc["sections"] = std::move(sections);
    return doc;
}

// Flat one-row-per-meeting table for spreadsheet use.
inline std::string schedule_to_table(const Instance& inst, const Schedule& sched) {
    std::ostringstream os;
    os << "section\trooms\tweek\tday_of_week\tday\tstart_slot\tduration_slots\n";
    for (std::size_t s = 0; s < sched.sections.size(); ++s) {
        const SectionAssignment& a = sched.sections[s];
        for (const auto& [m, w] : a.meetings) {
            const MeetingTime& mt = inst.meeting_times[static_cast<std::size_t>(m)];
            os << (s + 1) << "\t";
            for (std::size_t i = 0; i < a.rooms.size(); ++i) {
                if (i) os << ",";
                os << (a.rooms[i] + 1);
            }
            os << "\t" << (w + 1) << "\t" << (mt.weekday + 1) << "\t"
               << (inst.calendar.day_of(w, mt.weekday) + 1) << "\t" << (mt.start_slot + 1) << "\t"
               << mt.duration_slots << "\n";
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Solver configuration documents (presets live in configs/)

struct SolverConfig {
    WavePolicy wave_policy;
    AnnealConfig anneal;
    std::optional<double> min_fraction;  // overrides every non-exam section
    std::optional<bool> enforce_min_fraction;
    std::optional<Scenario> scenario;
    Json weights_patch;  // JSON merge patch applied to the instance weights block
};

inline SolverConfig solver_config_from_json(const Json& doc) {
    SolverConfig cfg;
    if (doc.contains("solver")) {
        const Json& js = doc.at("solver");
        cfg.wave_policy.wave_count = js.value("wave_count", cfg.wave_policy.wave_count);
        cfg.wave_policy.enrollment_threshold =
            js.value("enrollment_threshold", cfg.wave_policy.enrollment_threshold);
        AnnealConfig& a = cfg.anneal;
        a.start_temperature = js.value("start_temperature", a.start_temperature);
        if (js.contains("final_wave_start_temperature") && !js.at("final_wave_start_temperature").is_null())
            a.final_wave_start_temperature = js.at("final_wave_start_temperature").get<double>();
        a.temperature_factor = js.value("temperature_factor", a.temperature_factor);
        a.time_limit_secs = js.value("time_limit_secs", a.time_limit_secs);
        a.removal_low = js.value("removal_low", a.removal_low);
        a.removal_high = js.value("removal_high", a.removal_high);
        a.seed = js.value("seed", a.seed);
        a.runs = js.value("runs", a.runs);
        a.max_iters = js.value("max_iters", a.max_iters);
        a.early_online_weight = js.value("early_online_weight", a.early_online_weight);
        a.early_online_exponent = js.value("early_online_exponent", a.early_online_exponent);
        a.workers = js.value("workers", a.workers);
    }
    if (doc.contains("min_fraction") && !doc.at("min_fraction").is_null())
        cfg.min_fraction = doc.at("min_fraction").get<double>();
    if (doc.contains("enforce_min_fraction") && !doc.at("enforce_min_fraction").is_null())
        cfg.enforce_min_fraction = doc.at("enforce_min_fraction").get<bool>();
    if (doc.contains("scenario") && !doc.at("scenario").is_null())
        cfg.scenario = scenario_from_string(doc.at("scenario").get<std::string>());
    if (doc.contains("weights")) cfg.weights_patch = doc.at("weights");
    return cfg;
}

// Applies a config to a loaded instance: weight patch first, then the
// min-fraction override (exam sections keep their own floor). Re-validates.
inline void apply_config_to_instance(Instance& inst, const SolverConfig& cfg) {
    if (!cfg.weights_patch.is_null() && !cfg.weights_patch.empty()) {
        Json weights = instance_to_json(inst).at("weights");
        weights.merge_patch(cfg.weights_patch);
        Json doc = instance_to_json(inst);
        doc["weights"] = weights;
        inst = instance_from_json(doc);
    }
    if (cfg.min_fraction) {
        for (Section& sec : inst.sections) {
            if (!sec.exam_block) sec.min_fraction = *cfg.min_fraction;
        }
    }
    if (cfg.enforce_min_fraction) inst.weights.enforce_min_fraction = *cfg.enforce_min_fraction;
    validate_instance(inst);
}

// ---------------------------------------------------------------------------
// Files

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    Json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path + ": " + e.what());
    }
    return doc;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << text;
}

inline void write_json_file(const std::string& path, const Json& doc) {
    write_text_file(path, doc.dump(2) + "\n");
}

inline Instance load_instance_file(const std::string& path) {
    return instance_from_json(read_json_file(path));
}

}  // namespace ucsched
