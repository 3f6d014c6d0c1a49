#include "resokit/potential.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "resokit/errors.hpp"
#include "resokit/io.hpp"

namespace reso {

Potential::Potential(std::vector<Segment> segments) : segments_(std::move(segments)) {
    for (const auto& s : segments_) {
        if (!(s.length > 0.0) || !std::isfinite(s.length))
            throw DomainError("segment length must be positive and finite");
        if (!std::isfinite(s.q)) throw DomainError("segment q must be finite");
        sigma_ += s.length;
    }
}

Potential Potential::box(double length, double height) {
    return Potential({Segment{length, height}});
}

Potential parse_potential(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("potential: invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("segments"))
        throw ParseError("potential: missing field 'segments'");
    const auto& segs = doc.at("segments");
    if (!segs.is_array()) throw ParseError("potential: field 'segments' must be an array");

    std::vector<Segment> out;
    out.reserve(segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const auto& s = segs[i];
        const std::string where = "potential: segments[" + std::to_string(i) + "]";
        if (!s.is_object()) throw ParseError(where + " must be an object");
        for (const char* field : {"length", "q"}) {
            if (!s.contains(field) || !s.at(field).is_number())
                throw ParseError(where + "." + field + " must be a number");
        }
        const double length = s.at("length").get<double>();
        if (!(length > 0.0))
            throw DomainError(where + ".length must be positive");
        out.push_back({length, s.at("q").get<double>()});
    }
    return Potential(std::move(out));
}

std::string serialize_potential(const Potential& p) {
    std::string out = "{\"segments\":[";
    bool first = true;
    for (const auto& s : p.segments()) {
        if (!first) out += ',';
        first = false;
        out += "{\"length\":" + format_g17(s.length) + ",\"q\":" + format_g17(s.q) + "}";
    }
    out += "]}";
    return out;
}

double support_diameter(const Potential& p) {
    double x = 0.0;
    double first = -1.0;
    double last = -1.0;
    for (const auto& s : p.segments()) {
        if (s.q != 0.0) {
            if (first < 0.0) first = x;
            last = x + s.length;
        }
        x += s.length;
    }
    return first < 0.0 ? 0.0 : last - first;
}

}  // namespace reso
