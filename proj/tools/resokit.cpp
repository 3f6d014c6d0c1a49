// resokit command-line front-end.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "resokit/analytics.hpp"
#include "resokit/clusters.hpp"
#include "resokit/errors.hpp"
#include "resokit/interpolation.hpp"
#include "resokit/io.hpp"
#include "resokit/jost.hpp"
#include "resokit/parallel.hpp"
#include "resokit/potential.hpp"
#include "resokit/sharpness.hpp"
#include "resokit/zeros.hpp"

namespace {

using json = nlohmann::ordered_json;
using reso::cplx;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitQuality = 2;
constexpr double kOverflowCap = 700.0;
constexpr std::size_t kMaxNodes = 64;
constexpr double kSplitSpacing = 1e-4;

struct InputError : reso::Error {
    using reso::Error::Error;
    const char* kind() const noexcept override { return "input-error"; }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

class Manifest {
public:
    explicit Manifest(std::string command) : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {}

    void param(const std::string& key, json value) { params_[key] = std::move(value); }
    void input(const std::string& path, const std::string& contents) { inputs_[path] = sha256_hex(contents); }

    // Written beside the primary output as <out>.manifest.json.
    void write_beside(const std::string& out) const {
        if (out.empty()) return;
        json doc;
        doc["command"] = command_;
        doc["parameters"] = params_;
        doc["version"] = RESOKIT_VERSION;
        doc["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        doc["inputs"] = inputs_;
        write_file(out + ".manifest.json", doc.dump(2) + "\n");
    }

private:
    std::string command_;
    std::chrono::steady_clock::time_point start_;
    json params_ = json::object();
    json inputs_ = json::object();
};

void emit(const std::string& out, const std::string& text) {
    if (out.empty())
        std::cout << text;
    else
        write_file(out, text);
}

std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* flag) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t pos = 0;
            v.push_back(std::stod(cell, &pos));
            if (pos != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw InputError(std::string(flag) + ": bad number '" + cell + "'");
        }
    }
    if (expected != 0 && v.size() != expected)
        throw InputError(std::string(flag) + ": expected " + std::to_string(expected) + " comma-separated values");
    return v;
}

struct ResonanceArgs {
    std::string potential_file;
    std::string region = "0.1,20,-5,-0.01";
    double tol = 1e-10;
    std::string out;
    std::vector<double> radii;
    double counting_check = 0.0;
    std::string counting_out;
    std::string phase_out;
    std::string phase_grid = "-50,50,201";
};

int cmd_resonances(const ResonanceArgs& a) {
    Manifest man("resonances");
    const std::string text = read_file(a.potential_file);
    man.input(a.potential_file, text);
    const auto pot = reso::parse_potential(text);
    const auto r = parse_list(a.region, 4, "--region");
    const reso::Rectangle region{r[0], r[1], r[2], r[3]};
    region.validate();
    if (std::max(std::abs(region.im_min), std::abs(region.im_max)) * pot.sigma() > kOverflowCap)
        throw InputError("--region exceeds the overflow cap |Im k| * sigma <= 700");
    man.param("potential", a.potential_file);
    man.param("region", json::array({r[0], r[1], r[2], r[3]}));
    man.param("tol", a.tol);

    const auto report = reso::locate_zeros(reso::jost_evaluator(pot), region, a.tol);
    reso::CsvTable table;
    table.header = {"re", "im", "multiplicity", "abs_w"};
    std::vector<reso::WeightedPoint> pts;
    for (const auto& z : report.zeros) {
        table.add_row({reso::format_g17(z.location.real()), reso::format_g17(z.location.imag()),
                       std::to_string(z.multiplicity), reso::format_g17(z.residual)});
        if (z.location.imag() < 0.0) pts.push_back({z.location, z.multiplicity});
    }
    emit(a.out, table.str());
    const reso::PointMultiset res(pts);

    std::printf("zeros: %d\n", report.total_count);
    std::printf("blaschke_sum: %s\n", reso::format_g17(reso::blaschke_sum(res)).c_str());
    std::printf("log_strip_clearance: %s\n", reso::format_g17(reso::log_strip_clearance(res)).c_str());
    for (double R : a.radii) std::printf("N(%s): %ld\n", reso::format_g17(R).c_str(), reso::counting_function(res, R));
    if (a.counting_check > 0.0) {
        const double ell = reso::support_diameter(pot);
        const double ratio = reso::counting_function(res, a.counting_check) /
                             (a.counting_check * (2.0 / std::numbers::pi) * ell);
        std::printf("counting_ratio(%s): %s\n", reso::format_g17(a.counting_check).c_str(),
                    reso::format_g17(ratio).c_str());
        man.param("counting_check", a.counting_check);
    }
    if (!a.counting_out.empty()) {
        std::vector<double> radii = a.radii;
        if (radii.empty())
            for (int i = 1; i <= 20; ++i) radii.push_back(std::max(std::abs(region.re_min), std::abs(region.re_max)) * i / 20.0);
        write_file(a.counting_out, reso::counting_table(res, radii).str());
    }
    if (!a.phase_out.empty()) {
        const auto g = parse_list(a.phase_grid, 3, "--phase-grid");
        const int n = static_cast<int>(g[2]);
        if (n < 2) throw InputError("--phase-grid: need at least 2 samples");
        std::vector<double> ts;
        for (int i = 0; i < n; ++i) ts.push_back(g[0] + (g[1] - g[0]) * i / (n - 1));
        write_file(a.phase_out, reso::phase_profile(res, ts).str());
    }
    man.write_beside(a.out);
    return kExitOk;
}

struct InterpolateArgs {
    std::string points_file;
    double sigma = 1.0;
    std::string strategy = "cluster";
    std::string h_source = "lk";
    double radius = 1.0;
    std::string out;
};

int cmd_interpolate(const InterpolateArgs& a) {
    Manifest man("interpolate");
    const std::string text = read_file(a.points_file);
    man.input(a.points_file, text);
    auto pts = reso::parse_points_csv(text);
    pts.require_lower_half_plane("interpolate");
    if (pts.total() > static_cast<long>(kMaxNodes))
        throw InputError("interpolate: at most 64 points (with multiplicity) are supported");
    pts = pts.split_multiplicities(kSplitSpacing);

    reso::InterpolationOptions opt;
    opt.strategy = a.strategy == "strip" ? reso::Strategy::strip : reso::Strategy::cluster;
    opt.h_source = a.h_source == "sinc" ? reso::HSource::sinc_power : reso::HSource::lk;
    opt.cluster_radius = a.radius;
    man.param("points", a.points_file);
    man.param("sigma", a.sigma);
    man.param("strategy", a.strategy);
    man.param("h_source", a.h_source);
    man.param("radius", a.radius);

    const auto bundle = reso::build_interpolant(pts, a.sigma, opt);
    emit(a.out, reso::diagnostics_to_json(bundle));
    man.write_beside(a.out);
    const auto& d = bundle.diagnostics;
    std::printf("max_residual: %s\n", reso::format_g17(d.max_residual).c_str());
    std::printf("band_residual: %s\n", reso::format_g17(d.band_residual).c_str());
    std::printf("removed_zeros: %zu\n", d.removed_zeros.size());
    if (!d.ok) {
        std::fprintf(stderr, "quality-breach: %s\n", d.failure.c_str());
        return kExitQuality;
    }
    return kExitOk;
}

struct SharpnessArgs {
    std::string tau = "log1p";
    std::string rho = "pow:0.5";
    int K = 8;
    bool split = false;
    std::string out;
    std::string json_out;
};

int cmd_sharpness(const SharpnessArgs& a) {
    Manifest man("sharpness");
    man.param("tau", a.tau);
    man.param("rho", a.rho);
    man.param("K", a.K);
    man.param("split", a.split);
    reso::CounterexampleOptions opt;
    opt.split = a.split;
    const auto cs = reso::build_counterexample(reso::parse_rate(a.tau), reso::parse_rate(a.rho), a.K, opt);
    const auto rows = reso::obstruction_profile(cs);
    emit(a.out, reso::obstruction_table(rows).str());
    if (!a.json_out.empty()) write_file(a.json_out, reso::counterexample_to_json(cs));
    man.write_beside(a.out);
    std::printf("final_lower_bound: %s\n", reso::format_g17(rows.back().lower_bound).c_str());
    return kExitOk;
}

struct ContourArgs {
    std::string points_file;
    double radius = 1.0;
    std::string out;
};

int cmd_contours(const ContourArgs& a) {
    Manifest man("contours");
    const std::string text = read_file(a.points_file);
    man.input(a.points_file, text);
    const auto pts = reso::parse_points_csv(text);
    man.param("points", a.points_file);
    man.param("radius", a.radius);
    emit(a.out, reso::clusters_to_json(reso::build_clusters(pts, a.radius)));
    man.write_beside(a.out);
    return kExitOk;
}

int run(int argc, char** argv) {
    CLI::App app{"resokit: resonances, interpolation and sharpness experiments"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker thread cap (0 = all cores)");
    app.set_version_flag("--version", RESOKIT_VERSION);

    ResonanceArgs ra;
    auto* res = app.add_subcommand("resonances", "zeros of the Jost function in a rectangle");
    res->add_option("potential", ra.potential_file, "potential JSON file")->required();
    res->add_option("--region", ra.region, "re0,re1,im0,im1");
    res->add_option("--tol", ra.tol, "zero localisation tolerance");
    res->add_option("--out", ra.out, "zero table CSV");
    res->add_option("--radii", ra.radii, "radii for N(r) samples")->delimiter(',');
    res->add_option("--counting-check", ra.counting_check, "print N(R) / ((2/pi) l_q R)");
    res->add_option("--counting-out", ra.counting_out, "counting table CSV");
    res->add_option("--phase-out", ra.phase_out, "phase profile CSV");
    res->add_option("--phase-grid", ra.phase_grid, "t0,t1,samples for --phase-out");

    InterpolateArgs ia;
    auto* itp = app.add_subcommand("interpolate", "build the interpolant and Jost candidate");
    itp->add_option("points", ia.points_file, "points CSV re,im,mult")->required();
    itp->add_option("--sigma", ia.sigma, "type sigma")->required()->check(CLI::PositiveNumber);
    itp->add_option("--strategy", ia.strategy)->check(CLI::IsMember({"cluster", "strip"}));
    itp->add_option("--h-source", ia.h_source)->check(CLI::IsMember({"lk", "sinc"}));
    itp->add_option("--radius", ia.radius, "cluster radius")->check(CLI::PositiveNumber);
    itp->add_option("--out", ia.out, "diagnostics JSON");

    SharpnessArgs sa;
    auto* sh = app.add_subcommand("sharpness", "counterexample construction and obstruction profile");
    sh->add_option("--tau", sa.tau, "rate function tau");
    sh->add_option("--rho", sa.rho, "rate function rho");
    sh->add_option("-K,--K", sa.K, "number of clusters")->check(CLI::PositiveNumber);
    sh->add_flag("--split", sa.split, "split multiplicities into simple points");
    sh->add_option("--out", sa.out, "profile CSV");
    sh->add_option("--json", sa.json_out, "counterexample JSON");

    ContourArgs ca;
    auto* ct = app.add_subcommand("contours", "cluster boundary arcs as plot data");
    ct->add_option("points", ca.points_file, "points CSV re,im,mult")->required();
    ct->add_option("--radius", ca.radius)->check(CLI::PositiveNumber);
    ct->add_option("--out", ca.out, "arcs JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }
    reso::set_max_threads(threads);

    try {
        if (*res) return cmd_resonances(ra);
        if (*itp) return cmd_interpolate(ia);
        if (*sh) return cmd_sharpness(sa);
        if (*ct) return cmd_contours(ca);
    } catch (const reso::ParseError& e) {
        std::fprintf(stderr, "%s: %s\n", e.kind(), e.what());
        return kExitInput;
    } catch (const reso::DomainError& e) {
        std::fprintf(stderr, "%s: %s\n", e.kind(), e.what());
        return kExitInput;
    } catch (const InputError& e) {
        std::fprintf(stderr, "%s: %s\n", e.kind(), e.what());
        return kExitInput;
    } catch (const reso::Error& e) {
        std::fprintf(stderr, "%s: %s\n", e.kind(), e.what());
        return kExitQuality;
    }
    return kExitInput;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
