#pragma once

// JSON (de)serialization for instances, plans and TSP tours.
//
//   instance: {"n":int,"k":int,"depots":[[x,y],...],"customers":[[x,y],...],"seed":uint64|null}
//   plan:     {"tours":[{"depot":int,"order":[int,...]},...]}
//   tsp tour: {"order":[int,...]}
//
// Doubles are written in shortest round-trip form, so parse(dump(x)) == x.

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>

#include <json.hpp>

#include "cvrp_itp/core.hpp"

namespace cvrp {

using Json = nlohmann::ordered_json;

// Shortest decimal string that parses back to exactly `value`.
inline std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) throw std::runtime_error("to_chars failed");
    return std::string(buffer, end);
}

namespace detail {

inline Json points_to_json(const std::vector<Point>& points) {
    Json arr = Json::array();
    for (const Point& p : points) arr.push_back({p.x, p.y});
    return arr;
}

inline std::vector<Point> points_from_json(const Json& arr, const char* field) {
    require(arr.is_array(), std::string("field '") + field + "' must be an array");
    std::vector<Point> out;
    out.reserve(arr.size());
    for (const Json& item : arr) {
        require(item.is_array() && item.size() == 2 && item[0].is_number() && item[1].is_number(),
                std::string("entries of '") + field + "' must be [x, y] pairs");
        out.push_back({item[0].get<double>(), item[1].get<double>()});
    }
    return out;
}

inline const Json& field(const Json& j, const char* name) {
    require(j.is_object() && j.contains(name), std::string("missing JSON field '") + name + "'");
    return j.at(name);
}

}  // namespace detail

inline Json to_json(const Instance& inst) {
    Json j;
    j["n"] = inst.size();
    j["k"] = inst.capacity();
    j["depots"] = detail::points_to_json(inst.depots());
    j["customers"] = detail::points_to_json(inst.customers());
    if (inst.seed())
        j["seed"] = *inst.seed();
    else
        j["seed"] = nullptr;
    return j;
}

inline Instance instance_from_json(const Json& j) {
    auto customers = detail::points_from_json(detail::field(j, "customers"), "customers");
    auto depots = detail::points_from_json(detail::field(j, "depots"), "depots");
    const Json& k = detail::field(j, "k");
    require(k.is_number_unsigned() || (k.is_number_integer() && k.get<long long>() >= 0),
            "field 'k' must be a non-negative integer");
    if (j.contains("n")) {
        require(j["n"].is_number_integer() && j["n"].get<std::size_t>() == customers.size(),
                "field 'n' disagrees with the number of customers");
    }
    std::optional<std::uint64_t> seed;
    if (j.contains("seed") && !j["seed"].is_null()) {
        require(j["seed"].is_number_unsigned() || j["seed"].is_number_integer(),
                "field 'seed' must be an unsigned integer or null");
        seed = j["seed"].get<std::uint64_t>();
    }
    return Instance(std::move(customers), std::move(depots), k.get<std::size_t>(), seed);
}

inline Json to_json(const RoutePlan& plan) {
    Json tours = Json::array();
    for (const Tour& t : plan.tours) {
        Json jt;
        jt["depot"] = t.depot_index;
        jt["order"] = t.visit_order;
        tours.push_back(std::move(jt));
    }
    Json j;
    j["tours"] = std::move(tours);
    return j;
}

inline RoutePlan plan_from_json(const Json& j, const Instance& inst) {
    const Json& tours = detail::field(j, "tours");
    require(tours.is_array(), "field 'tours' must be an array");
    std::vector<Tour> out;
    for (const Json& jt : tours) {
        Tour t;
        t.depot_index = detail::field(jt, "depot").get<std::size_t>();
        t.visit_order = detail::field(jt, "order").get<std::vector<std::size_t>>();
        out.push_back(std::move(t));
    }
    return make_plan(std::move(out), inst);
}

inline Json to_json(const TspTour& tour) {
    Json j;
    j["order"] = tour.order;
    return j;
}

inline TspTour tsp_tour_from_json(const Json& j) {
    return TspTour{detail::field(j, "order").get<std::vector<std::size_t>>()};
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw PreconditionError("malformed JSON in '" + path + "': " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace cvrp
