#include "specforge/io.hpp"

#include <fstream>
#include <sstream>

#include "specforge/util.hpp"

namespace specforge {

namespace {

using nlohmann::json;

void reject_unknown_fields(const json& j, std::initializer_list<const char*> allowed,
                           const char* what) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* name : allowed)
            if (it.key() == name) {
                known = true;
                break;
            }
        if (!known)
            throw Error(ErrorCode::MalformedSet,
                        std::string("unknown field \"") + it.key() + "\" in " + what);
    }
}

json strength_to_json(const Strength& s) {
    if (s.is_infinite()) return json("inf");
    if (s.is_zero()) return json(0.0);
    return json(s.value());
}

Strength strength_from_json(const json& j, const char* what) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return Strength::infinite();
        throw Error(ErrorCode::MalformedSet, std::string("bad strength string in ") + what);
    }
    if (!j.is_number())
        throw Error(ErrorCode::MalformedSet, std::string("strength must be a number in ") + what);
    double v = j.get<double>();
    if (v == 0.0) return Strength::zero();
    if (std::isinf(v) && v > 0.0) return Strength::infinite();
    if (!(v > 0.0) || !std::isfinite(v))
        throw Error(ErrorCode::MalformedSet, std::string("strength must be >= 0 in ") + what);
    return Strength::finite(v);
}

} // namespace

TargetSet target_set_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::MalformedSet, "target set must be a JSON object");
    reject_unknown_fields(j, {"includes_zero", "points", "intervals", "lambda_max"}, "target set");
    if (!j.contains("includes_zero") || !j["includes_zero"].is_boolean())
        throw Error(ErrorCode::MalformedSet, "includes_zero (boolean) is required");
    if (!j.contains("lambda_max") || !j["lambda_max"].is_number())
        throw Error(ErrorCode::MalformedSet, "lambda_max (number) is required");

    std::vector<double> points;
    if (j.contains("points")) {
        if (!j["points"].is_array()) throw Error(ErrorCode::MalformedSet, "points must be an array");
        for (const auto& p : j["points"]) {
            if (!p.is_number()) throw Error(ErrorCode::MalformedSet, "points must be numbers");
            points.push_back(p.get<double>());
        }
    }
    std::vector<Interval> intervals;
    if (j.contains("intervals")) {
        if (!j["intervals"].is_array())
            throw Error(ErrorCode::MalformedSet, "intervals must be an array");
        for (const auto& iv : j["intervals"]) {
            if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
                throw Error(ErrorCode::MalformedSet, "each interval must be [lo, hi]");
            intervals.push_back({iv[0].get<double>(), iv[1].get<double>()});
        }
    }
    return make_target_set(j["includes_zero"].get<bool>(), std::move(points), std::move(intervals),
                           j["lambda_max"].get<double>());
}

json target_set_to_json(const TargetSet& set) {
    json j;
    j["includes_zero"] = set.includes_zero;
    j["points"] = set.points;
    json intervals = json::array();
    for (const Interval& iv : set.intervals) intervals.push_back({iv.lo, iv.hi});
    j["intervals"] = intervals;
    j["lambda_max"] = set.lambda_max;
    return j;
}

Schedule schedule_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::MalformedSet, "schedule must be a JSON object");
    reject_unknown_fields(j, {"a", "b", "cells", "couplings", "meta"}, "schedule");
    Schedule schedule;
    schedule.a = j.at("a").get<double>();
    schedule.b = j.at("b").get<double>();
    for (const auto& jc : j.at("cells")) {
        reject_unknown_fields(jc, {"x_left", "y", "x_right", "d", "q"}, "schedule cell");
        ScheduleCell cell;
        cell.x_left = jc.at("x_left").get<double>();
        cell.y = jc.at("y").get<double>();
        cell.x_right = jc.at("x_right").get<double>();
        cell.d = jc.at("d").get<double>();
        cell.q = strength_from_json(jc.at("q"), "schedule cell");
        schedule.cells.push_back(cell);
    }
    if (j.contains("couplings"))
        for (const auto& jp : j["couplings"]) {
            reject_unknown_fields(jp, {"x", "p"}, "schedule coupling");
            ScheduleCoupling coupling;
            coupling.x = jp.at("x").get<double>();
            coupling.p = strength_from_json(jp.at("p"), "schedule coupling");
            schedule.couplings.push_back(coupling);
        }
    if (j.contains("meta") && j["meta"].is_object()) {
        const auto& meta = j["meta"];
        if (meta.contains("source_set") && meta["source_set"].is_object())
            schedule.meta.source_set = target_set_from_json(meta["source_set"]);
        if (meta.contains("K")) schedule.meta.sample_count = meta["K"].get<int>();
    }
    check_schedule(schedule);
    return schedule;
}

json schedule_to_json(const Schedule& schedule) {
    json j;
    j["a"] = schedule.a;
    j["b"] = schedule.b;
    json cells = json::array();
    for (const ScheduleCell& cell : schedule.cells) {
        json jc;
        jc["x_left"] = cell.x_left;
        jc["y"] = cell.y;
        jc["x_right"] = cell.x_right;
        jc["d"] = cell.d;
        jc["q"] = strength_to_json(cell.q);
        cells.push_back(jc);
    }
    j["cells"] = cells;
    json couplings = json::array();
    for (const ScheduleCoupling& coupling : schedule.couplings) {
        json jp;
        jp["x"] = coupling.x;
        jp["p"] = strength_to_json(coupling.p);
        couplings.push_back(jp);
    }
    j["couplings"] = couplings;
    json meta;
    if (schedule.meta.source_set) meta["source_set"] = target_set_to_json(*schedule.meta.source_set);
    meta["K"] = schedule.meta.sample_count;
    j["meta"] = meta;
    return j;
}

TargetSet load_target_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Usage, "cannot open target set file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedSet, std::string("target set JSON parse error: ") + e.what());
    }
    return target_set_from_json(j);
}

Schedule load_schedule(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Usage, "cannot open schedule file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedSet, std::string("schedule JSON parse error: ") + e.what());
    }
    return schedule_from_json(j);
}

void save_json(const std::string& path, const json& j) {
    atomic_write_file(path, j.dump(2) + "\n");
}

std::string spectrum_to_csv(const Spectrum& spectrum) {
    std::ostringstream out;
    out << "index,lambda,bracket_lo,bracket_hi,method\n";
    std::size_t index = 1;
    for (const EigenvalueRecord& rec : spectrum.eigenvalues) {
        out << index++ << ',' << format_double(rec.lambda) << ',' << format_double(rec.bracket_lo)
            << ',' << format_double(rec.bracket_hi) << ','
            << (rec.method == SpectrumMethod::Shooting ? "SHOOTING" : "FD_ORACLE") << '\n';
    }
    return out.str();
}

} // namespace specforge
