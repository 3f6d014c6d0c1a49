// End-to-end acceptance runs. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "resokit/analytics.hpp"
#include "resokit/clusters.hpp"
#include "resokit/interpolation.hpp"
#include "resokit/io.hpp"
#include "resokit/jost.hpp"
#include "resokit/parallel.hpp"
#include "resokit/sharpness.hpp"
#include "resokit/zeros.hpp"

using namespace reso;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

// Tolerances and limits, one place.
constexpr double kOracleTol = 1e-9;
constexpr double kOracleSeconds = 60.0;
constexpr double kCountingLow = 0.9, kCountingHigh = 1.1;
constexpr double kCountingSeconds = 300.0;
constexpr double kClearanceMin = 0.1;
constexpr int kCosSamples = 100000;
constexpr double kDualityTol = 1e-8;
constexpr int kDualityClusters = 20;
constexpr double kResidualMax = 1e-8;
constexpr double kG0Max = 1e-12;
constexpr double kBandMax = 0.05;
constexpr double kInterpSeconds = 120.0;
constexpr double kLensTol = 1e-9;
constexpr std::size_t kMcSamples = 1000000;
constexpr double kMcRel = 0.01;
constexpr double kSharpSeconds = 30.0;
constexpr double kSharpGrowth = 10.0;

const Rectangle kBoxRegion{0.1, 20.0, -5.0, -0.01};
const Rectangle kUpperWindow{-50.0, 50.0, 0.0, 50.0};

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PointMultiset to_multiset(const ZeroReport& rep) {
    std::vector<WeightedPoint> v;
    for (const auto& z : rep.zeros) v.push_back({z.location, z.multiplicity});
    return PointMultiset(v);
}

std::string zeros_csv(const ZeroReport& rep) {
    CsvTable t;
    t.header = {"re", "im", "multiplicity"};
    for (const auto& z : rep.zeros)
        t.add_row({format_g17(z.location.real()), format_g17(z.location.imag()), std::to_string(z.multiplicity)});
    return t.str();
}

// ---- criterion 1 ----------------------------------------------------------

struct OracleRun {
    bool ok = false;
    std::string detail;
    std::string output;
};

OracleRun run_box_oracle() {
    OracleRun r;
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = locate_zeros(jost_evaluator(Potential::box(1.0, 4.0)), kBoxRegion, 1e-10);
    const double secs = seconds_since(t0);
    const auto ref = oracle::box_resonances(4.0, kBoxRegion.re_min, kBoxRegion.re_max, kBoxRegion.im_min,
                                            kBoxRegion.im_max);
    bool ok = rep.zeros.size() == ref.size() && rep.total_count == static_cast<int>(ref.size());
    double worst = 0.0;
    if (ok)
        for (std::size_t i = 0; i < ref.size(); ++i) {
            worst = std::max(worst, std::abs(rep.zeros[i].location - ref[i]));
            ok = ok && rep.zeros[i].multiplicity == 1;
        }
    ok = ok && worst <= kOracleTol && secs <= kOracleSeconds;
    r.ok = ok;
    r.detail = "found " + std::to_string(rep.zeros.size()) + " oracle " + std::to_string(ref.size()) +
               fmt(" max err %.2e", worst) + fmt(" time %.2fs", secs);
    r.output = zeros_csv(rep);
    return r;
}

// ---- criteria 2-4 ---------------------------------------------------------

PointMultiset box_set_200(double& secs) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = locate_zeros(jost_evaluator(Potential::box(1.0, 4.0)), {-200.3, 200.3, -20.0, -0.01}, 1e-10);
    secs = seconds_since(t0);
    return to_multiset(rep);
}

PointMultiset window(const PointMultiset& s, double lo, double hi) {
    std::vector<WeightedPoint> v;
    for (const auto& p : s.points())
        if (std::abs(p.location.real()) >= lo && std::abs(p.location.real()) <= hi) v.push_back(p);
    return PointMultiset(v);
}

PointMultiset inside(const PointMultiset& s, double R) {
    std::vector<WeightedPoint> v;
    for (const auto& p : s.points())
        if (std::abs(p.location) < R) v.push_back(p);
    return PointMultiset(v);
}

// ---- criterion 7 ----------------------------------------------------------

PointMultiset lk_example() {
    std::vector<WeightedPoint> v;
    for (int j = 0; j < 8; ++j) {
        const double u = j / 7.0;
        v.push_back({{0.0, -(2.0 + 18.0 * u * u)}, 1});
    }
    return PointMultiset(v);
}

PointMultiset strip_example() {
    return PointMultiset{{{0, -2}, 1}, {{1, -3}, 1}, {{-1, -4.5}, 1}, {{0.5, -6}, 1}, {{-2, -7}, 1}, {{3, -9}, 1}};
}

struct InterpRun {
    bool ok = false;
    std::string detail;
    std::string output;
};

InterpRun run_interpolation(const PointMultiset& lam, double sigma, Strategy strategy, HSource source) {
    InterpRun r;
    const auto t0 = std::chrono::steady_clock::now();
    InterpolationOptions opt;
    opt.strategy = strategy;
    opt.h_source = source;
    opt.search = kUpperWindow;
    const auto b = build_interpolant(lam, sigma, opt);
    const auto& d = b.diagnostics;
    const int wind = winding_count(b.f1, kUpperWindow);
    const double secs = seconds_since(t0);
    r.ok = d.max_residual <= kResidualMax && d.g0_abs <= kG0Max && wind == 0 && d.band_residual >= 0.0 &&
           d.band_residual <= kBandMax && secs <= kInterpSeconds;
    r.detail = fmt("residual %.2e", d.max_residual) + fmt(" |g(0)| %.2e", d.g0_abs) +
               " winding " + std::to_string(wind) + fmt(" band %.2e", d.band_residual) + fmt(" time %.2fs", secs);
    r.output = diagnostics_to_json(b);
    return r;
}

// ---- criterion 9 ----------------------------------------------------------

struct SharpRun {
    bool ok = false;
    std::string detail;
    std::string output;
};

SharpRun run_sharpness() {
    SharpRun r;
    const auto t0 = std::chrono::steady_clock::now();
    const auto tau = parse_rate("log1p");
    const auto rho = parse_rate("pow:0.5");
    try {
        const auto cs = build_counterexample(tau, rho, 8);
        cs.check_invariants();
        const auto rows = obstruction_profile(cs);
        bool ok = rows.size() == 8;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (k) ok = ok && rows[k].lower_bound > rows[k - 1].lower_bound;
            ok = ok && rows[k].p >= rows[k].lower_bound;
        }
        ok = ok && rows.back().lower_bound > kSharpGrowth * rows.front().lower_bound;
        const double secs = seconds_since(t0);
        r.ok = ok && secs <= kSharpSeconds;
        r.detail = fmt("lower bound %.4g", rows.front().lower_bound) + fmt(" -> %.4g", rows.back().lower_bound) +
                   fmt(" time %.2fs", secs);
        r.output = obstruction_table(rows).str() + counterexample_to_json(cs);
    } catch (const std::exception& e) {
        r.detail = e.what();
    }
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path out_dir = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
    fs::create_directories(out_dir);
    // At least four workers so the comparison exercises the pool on small machines.
    const unsigned hw = std::max(4u, std::thread::hardware_concurrency());

    // 1. Box oracle, single-threaded.
    set_max_threads(1);
    const auto c1 = run_box_oracle();
    report(1, c1.ok, c1.detail);
    write_file(out_dir / "box_zeros.run1.csv", c1.output);

    // 2-4 share the resonance set of |k| < 200.
    set_max_threads(8);
    double secs = 0.0;
    const auto box = box_set_200(secs);
    {
        const long n = counting_function(box, 200.0);
        const double ratio = n / (2.0 / kPi * 200.0);
        report(2, ratio >= kCountingLow && ratio <= kCountingHigh && secs <= kCountingSeconds,
               "N(200) = " + std::to_string(n) + fmt(" ratio %.4f", ratio) + fmt(" time %.2fs", secs));
    }
    {
        const double b50 = blaschke_sum(inside(box, 50.0));
        const double b100 = blaschke_sum(inside(box, 100.0));
        const double b200 = blaschke_sum(inside(box, 200.0));
        const double d1 = b50, d2 = b100 - b50, d3 = b200 - b100;
        report(3, d1 > d2 && d2 > d3 && d3 > 0.0,
               fmt("increments %.6g", d1) + fmt(" %.6g", d2) + fmt(" %.6g", d3));
    }
    {
        bool ok = true;
        std::string detail = "clearance";
        for (double hi : {50.0, 100.0, 200.0}) {
            const double c = log_strip_clearance(window(box, 5.0, hi));
            ok = ok && c >= kClearanceMin;
            detail += fmt(" %.4f", c);
        }
        report(4, ok, detail + " on |Re| in [5,50], [5,100], [5,200]");
    }

    // 5. Cos lemma on random points, including small |Im z| and large |Re z|.
    {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> re(-1000.0, 1000.0), logim(-8.0, std::log10(700.0)),
            sign(-1.0, 1.0);
        int violations = 0;
        for (int i = 0; i < kCosSamples; ++i) {
            const double y = std::copysign(std::pow(10.0, logim(rng)), sign(rng));
            const double x = i % 4 == 0 ? re(rng) * 1e-3 : re(rng);
            const cplx z{x, y};
            if (!(std::abs(std::cos(z)) >= std::abs(y) / (2.0 * std::abs(z)))) ++violations;
        }
        report(5, violations == 0, std::to_string(kCosSamples) + " samples, " + std::to_string(violations) +
                                       " violations");
    }

    // 6. Residue and contour forms of a block on random clusters.
    {
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> off(-0.6, 0.6), depth(2.0, 30.0), re(-20.0, 20.0);
        std::uniform_int_distribution<int> size(1, 5);
        double worst = 0.0;
        bool ok = true;
        for (int trial = 0; trial < kDualityClusters; ++trial) {
            const cplx c{re(rng), -depth(rng)};
            std::vector<WeightedPoint> v{{c, 1}};
            const int m = size(rng);
            for (int i = 1; i < m; ++i) v.push_back({c + cplx{off(rng), off(rng)}, 1});
            const PointMultiset members(v);
            const auto H = sinc_power_H(members, 1.5);
            const auto d = build_clusters(members, 1.0);
            if (d.components.size() != 1) {
                ok = false;
                continue;
            }
            const cplx z = c + std::polar(4.0 + trial % 5, 0.3 * trial);
            const cplx a = residue_block(H, members, 1.5, z);
            const cplx b = contour_block(H, d.components[0].loops, 1.5, z);
            worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), 1e-300));
        }
        report(6, ok && worst <= kDualityTol, fmt("max relative difference %.2e", worst));
    }

    // 7. Interpolation end-to-end.
    set_max_threads(1);
    const auto c7a = run_interpolation(lk_example(), 2.0, Strategy::cluster, HSource::lk);
    const auto c7b = run_interpolation(strip_example(), 3.0, Strategy::strip, HSource::sinc_power);
    report(7, c7a.ok && c7b.ok, "cluster/lk: " + c7a.detail + "; strip/sinc: " + c7b.detail);
    write_file(out_dir / "interp_cluster.run1.json", c7a.output);
    write_file(out_dir / "interp_strip.run1.json", c7b.output);

    // 8. Cluster geometry.
    {
        bool ok = true;
        std::string detail;
        const double r = 1.0;
        const PointMultiset lens{{{0.0, -5.0}, 1}, {{r, -5.0}, 1}};
        double len = 0.0;
        for (const auto& loop : boundary_arcs(lens, r)) len += loop.length();
        const double lens_err = std::abs(len - 8.0 * kPi * r / 3.0);
        ok = ok && lens_err <= kLensTol;
        detail += fmt("lens error %.2e", lens_err);

        const std::vector<std::vector<cplx>> configs = {
            {{0, -5}},
            {{0, -5}, {1, -5}},
            {{0, -5}, {1.5, -5}, {3, -5}},
            {{0, -5}, {1.2, -5.4}, {0.3, -6.6}, {-1.1, -5.9}},
            {{2, -8}, {3.9, -8}, {2.9, -9.7}, {4.8, -9.6}, {5.9, -8.2}}};
        double worst_mc = 0.0;
        for (const auto& centers : configs) {
            std::vector<WeightedPoint> v;
            for (auto c : centers) v.push_back({c, 1});
            const auto d = build_clusters(PointMultiset(v), r);
            if (d.components.size() != 1) {
                ok = false;
                continue;
            }
            const double L = d.components[0].boundary_length();
            const double mc = oracle::mc_perimeter(centers, r, kMcSamples);
            worst_mc = std::max(worst_mc, std::abs(L - mc) / L);
            const double bound = 2.0 * kPi * r * centers.size();
            if (centers.size() == 1)
                ok = ok && std::abs(L - bound) <= kLensTol;
            else
                ok = ok && L < bound;
        }
        ok = ok && worst_mc <= kMcRel;
        report(8, ok, detail + fmt(", worst Monte-Carlo deviation %.3f%%", 100.0 * worst_mc));
    }

    // 9. Sharpness obstruction.
    const auto c9 = run_sharpness();
    report(9, c9.ok, c9.detail);
    write_file(out_dir / "sharpness.run1.txt", c9.output);

    // 10. Repeat 1, 7, 9 with all hardware threads and compare bytes.
    {
        set_max_threads(hw);
        write_file(out_dir / "box_zeros.run2.csv", run_box_oracle().output);
        write_file(out_dir / "interp_cluster.run2.json",
                   run_interpolation(lk_example(), 2.0, Strategy::cluster, HSource::lk).output);
        write_file(out_dir / "interp_strip.run2.json",
                   run_interpolation(strip_example(), 3.0, Strategy::strip, HSource::sinc_power).output);
        write_file(out_dir / "sharpness.run2.txt", run_sharpness().output);
        bool ok = true;
        std::string detail = "threads 1 vs " + std::to_string(hw) + ":";
        for (const char* stem : {"box_zeros", "interp_cluster", "interp_strip", "sharpness"}) {
            const std::string ext = std::string(stem) == "box_zeros" ? ".csv"
                                    : std::string(stem) == "sharpness" ? ".txt"
                                                                       : ".json";
            const auto a = read_file(out_dir / (std::string(stem) + ".run1" + ext));
            const auto b = read_file(out_dir / (std::string(stem) + ".run2" + ext));
            const bool same = !a.empty() && a == b;
            ok = ok && same;
            detail += std::string(" ") + stem + (same ? "=identical" : "=DIFFERENT");
        }
        report(10, ok, detail);
    }

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
