#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace reso {

/// One constant step of a potential: q(x) = value on an interval of given length.
struct Segment {
    double length = 0.0;
    double q = 0.0;
    bool operator==(const Segment&) const = default;
};

/// Piecewise-constant potential supported on [0, sigma]. Segments are stored
/// left to right starting at x = 0. No segments means q == 0.
class Potential {
public:
    Potential() = default;
    explicit Potential(std::vector<Segment> segments);

    static Potential box(double length, double height);

    const std::vector<Segment>& segments() const { return segments_; }
    double sigma() const { return sigma_; }
    bool is_free() const { return segments_.empty(); }

    bool operator==(const Potential&) const = default;

private:
    std::vector<Segment> segments_;
    double sigma_ = 0.0;
};

/// Parses {"segments":[{"length":L,"q":Q},...]}.
Potential parse_potential(std::string_view text);

/// Serializes with 17 significant digits so parse(serialize(p)) == p.
std::string serialize_potential(const Potential& p);

/// Length of the essential support: from the start of the first step with
/// q != 0 to the end of the last such step. Zero means exactly zero.
double support_diameter(const Potential& p);

}  // namespace reso
