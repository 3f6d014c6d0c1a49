#include "resokit/point_set.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "resokit/errors.hpp"

namespace reso {

PointMultiset::PointMultiset(std::vector<WeightedPoint> points) {
    points_.reserve(points.size());
    std::map<std::pair<double, double>, std::size_t> index;
    for (const auto& p : points) {
        if (p.multiplicity < 1) throw DomainError("point multiplicity must be >= 1");
        if (!std::isfinite(p.location.real()) || !std::isfinite(p.location.imag()))
            throw DomainError("point locations must be finite");
        const auto key = std::make_pair(p.location.real(), p.location.imag());
        if (auto it = index.find(key); it != index.end()) {
            points_[it->second].multiplicity += p.multiplicity;
        } else {
            index.emplace(key, points_.size());
            points_.push_back(p);
        }
    }
}

PointMultiset PointMultiset::in_lower_half_plane(std::vector<WeightedPoint> points) {
    PointMultiset s(std::move(points));
    s.require_lower_half_plane("point set");
    return s;
}

long PointMultiset::total() const {
    long n = 0;
    for (const auto& p : points_) n += p.multiplicity;
    return n;
}

void PointMultiset::require_lower_half_plane(std::string_view what) const {
    for (const auto& p : points_) {
        if (!(p.location.imag() < 0.0))
            throw DomainError(std::string(what) + ": points must lie in the open lower half-plane");
    }
}

PointMultiset PointMultiset::shifted(cplx offset) const {
    std::vector<WeightedPoint> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back({p.location + offset, p.multiplicity});
    return PointMultiset(std::move(out));
}

PointMultiset PointMultiset::united(const PointMultiset& other) const {
    auto all = points_;
    all.insert(all.end(), other.points_.begin(), other.points_.end());
    return PointMultiset(std::move(all));
}

PointMultiset PointMultiset::split_multiplicities(double spacing) const {
    if (!(spacing > 0.0)) throw DomainError("split spacing must be positive");
    std::vector<WeightedPoint> out;
    for (const auto& p : points_) {
        if (p.multiplicity == 1) {
            out.push_back(p);
            continue;
        }
        const int m = p.multiplicity;
        const double radius = spacing / (2.0 * std::sin(std::numbers::pi / m));
        for (int j = 0; j < m; ++j) {
            const double angle = 2.0 * std::numbers::pi * j / m;
            out.push_back({p.location + std::polar(radius, angle), 1});
        }
    }
    return PointMultiset(std::move(out));
}

std::vector<cplx> PointMultiset::expanded() const {
    std::vector<cplx> out;
    for (const auto& p : points_)
        for (int j = 0; j < p.multiplicity; ++j) out.push_back(p.location);
    return out;
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

bool parse_double(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

}  // namespace

PointMultiset parse_points_csv(std::string_view text) {
    std::vector<WeightedPoint> pts;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ls(t);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(trim(cell));
        const std::string where = "points CSV line " + std::to_string(line_no);
        if (cells.size() != 3) throw ParseError(where + ": expected 3 columns re,im,mult");
        double re = 0.0, im = 0.0, mult = 0.0;
        if (!parse_double(cells[0], re) || !parse_double(cells[1], im) ||
            !parse_double(cells[2], mult)) {
            if (pts.empty() && cells[0] == "re") continue;  // header
            throw ParseError(where + ": non-numeric field");
        }
        if (mult < 1.0 || mult != std::floor(mult))
            throw ParseError(where + ": mult must be a positive integer");
        pts.push_back({{re, im}, static_cast<int>(mult)});
    }
    return PointMultiset(std::move(pts));
}

}  // namespace reso
