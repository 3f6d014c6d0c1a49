#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "../oracles.hpp"
#include "resokit/errors.hpp"
#include "resokit/interpolation.hpp"

using namespace reso;

namespace {
constexpr double kPi = std::numbers::pi;
const cplx I{0.0, 1.0};

AnalyticEvaluator polynomial_with_roots(std::vector<cplx> roots) {
    return AnalyticEvaluator([roots](cplx z) {
        cplx p = 1.0, dp = 0.0;
        for (auto r : roots) {
            dp = dp * (z - r) + p;
            p *= z - r;
        }
        return ValueAndDerivative{p, dp};
    });
}

std::vector<cplx> cluster_of_three(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-0.6, 0.6), depth(2.0, 8.0), re(-5.0, 5.0);
    const cplx c{re(rng), -depth(rng)};
    return {c, c + cplx{u(rng), u(rng)}, c + cplx{u(rng), u(rng)}};
}
}  // namespace

TEST_CASE("G values") {
    CHECK(G(1.0, 0.0) == cplx{0.0, 0.0});
    CHECK(std::abs(G(1.0, -I) - (-I * std::exp(-1.0))) < 1e-16);
    CHECK(std::abs(G(2.0, 1.0) - std::exp(-2.0 * I)) < 1e-16);
}

TEST_CASE("residue block with a linear H") {
    const cplx l0{1.0, -2.0};
    const auto H = polynomial_with_roots({l0});
    const PointMultiset one{{l0, 1}};
    const cplx z{3.0, 1.0};
    CHECK(std::abs(residue_block(H, one, 2.0, z) - G(2.0, l0) / (z - l0)) < 1e-15);
    CHECK(std::abs(H.value(z) * residue_block(H, one, 2.0, z) - G(2.0, l0)) < 1e-14);

    // decay like 1/|z|
    const double far = 1e6;
    CHECK(std::abs(residue_block(H, one, 2.0, {far, 0.0})) * far <= 2 * std::abs(G(2.0, l0)));
    CHECK(std::abs(residue_block(H, one, 2.0, {0.0, far})) * far <= 2 * std::abs(G(2.0, l0)));

    const auto Hsq = AnalyticEvaluator([l0](cplx z) { return ValueAndDerivative{(z - l0) * (z - l0), 2.0 * (z - l0)}; });
    CHECK_THROWS_AS(residue_block(Hsq, one, 2.0, z), DegenerateZeroError);
    CHECK_THROWS_AS(residue_block(H, PointMultiset{{{5, -5}, 1}}, 2.0, z), ConsistencyError);
}

TEST_CASE("contour block on a circle") {
    const cplx l0{0.5, -3.0};
    const auto H = AnalyticEvaluator([l0](cplx z) { return ValueAndDerivative{z - l0, 1.0}; });
    const ClosedPath circle{{Arc{l0, 1.0, 0.0, 2 * kPi}}};
    const cplx z = l0 + 5.0;
    const cplx expect = G(1.5, l0) / 5.0;
    CHECK(std::abs(contour_block(H, {circle}, 1.5, z) - expect) < 1e-12 * std::abs(expect));

    const ClosedPath empty_region{{Arc{cplx{20, -20}, 1.0, 0.0, 2 * kPi}}};
    CHECK(std::abs(contour_block(H, {empty_region}, 1.5, z)) < 1e-14);

    // oracle: Boost quadrature of the same integrand
    const auto data = [](cplx w) { return G(1.5, w); };
    const cplx ref = oracle::circle_integral([&](cplx w) { return data(w) / ((w - l0) * (z - w)); }, l0, 1.0) /
                     (2 * kPi * I);
    CHECK(std::abs(contour_block(H, {circle}, 1.5, z) - ref) < 1e-12);

    const ClosedPath through{{Arc{l0 + 1.0, 1.0, 0.0, 2 * kPi}}};
    CHECK_THROWS_AS(contour_block(H, {through}, 1.5, z + 10.0), ContourZeroError);
}

TEST_CASE("residue and contour forms agree on random clusters") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const auto pts = cluster_of_three(rng);
        const auto H = polynomial_with_roots(pts);
        std::vector<WeightedPoint> v;
        for (auto p : pts) v.push_back({p, 1});
        const PointMultiset members(v);
        const auto d = build_clusters(members, 1.0);
        REQUIRE(d.components.size() == 1);
        const cplx z = d.components[0].anchor + cplx{6.0, 4.0};
        const cplx a = residue_block(H, members, 1.0, z);
        const cplx b = contour_block(H, d.components[0].loops, 1.0, z);
        CHECK(std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("block order does not matter") {
    const PointMultiset s{{{0, -3}, 1}, {{4, -3}, 1}, {{-6, -5}, 1}, {{9, -9}, 1}, {{-1, -12}, 1}};
    const auto H = sinc_power_H(s, 1.0);
    const auto blocks = blocks_of(build_clusters(s, 1.0));
    const NodeData data = [](cplx w) { return G(1.0, w); };
    for (cplx z : {cplx{1, 1}, cplx{-3, -1}, cplx{20, 0}}) {
        const cplx f = assemble_g(H, blocks, data, z);
        for (auto order : {BlockOrder::reversed, BlockOrder::even_odd})
            CHECK(std::abs(assemble_g(H, blocks, data, z, BlockForm::residue, order) - f) <= 1e-12 * (1 + std::abs(f)));
        CHECK(std::abs(assemble_g(H, blocks, data, z, BlockForm::contour) - f) <= 1e-8 * (1 + std::abs(f)));
    }
    for (const auto& p : s.points()) CHECK(assemble_g(H, blocks, data, p.location) == data(p.location));
}

TEST_CASE("sinc power H") {
    const PointMultiset s{{{1, -2}, 1}, {{-2, -1}, 1}, {{0, -4}, 1}};
    const double gamma = 2.0;
    const auto H = sinc_power_H(s, gamma);
    CHECK(std::abs(H.value(0.0) - 1.0) < 1e-15);
    for (const auto& p : s.points()) {
        CHECK(std::abs(H.value(p.location)) < 1e-14);
        CHECK(std::abs(H(p.location).derivative) > 1e-6);
    }
    const cplx z{0.7, 0.4};
    const cplx d = oracle::central_difference([&](cplx w) { return H.value(w); }, z, 1e-5);
    CHECK(std::abs(H(z).derivative - d) < 1e-8 * (1 + std::abs(d)));
    CHECK(std::abs(H(1e-9).derivative - oracle::central_difference([&](cplx w) { return H.value(w); }, 0.0, 1e-4)) <
          1e-7);
    // exponential type along the imaginary axis; small type keeps |H| finite at y = 1e4
    const double small = 0.07;
    const auto Hs = sinc_power_H(PointMultiset{{{0, -2}, 1}}, small);
    for (double y : {1e3, 3e3, 1e4}) {
        const double rate = std::log(std::abs(Hs.value(I * y))) / y;
        CHECK(std::abs(rate - small) < 0.05 * small);
    }
}

TEST_CASE("upper zero removal") {
    const Rectangle search{-50, 50, 0, 50};
    const auto none = AnalyticEvaluator([](cplx z) { return ValueAndDerivative{z + 3.0 * I, 1.0}; });
    const auto r0 = remove_upper_zeros(none, search);
    CHECK(r0.zeros.empty());
    CHECK(r0.c == cplx{0.0, 0.0});
    CHECK(r0.f1.value({2, 3}) == none.value({2, 3}));

    const auto one = AnalyticEvaluator([](cplx z) {
        return ValueAndDerivative{(z - I) * std::exp(z / 10.0), std::exp(z / 10.0) * (1.0 + (z - I) / 10.0)};
    });
    const auto r1 = remove_upper_zeros(one, search);
    REQUIRE(r1.zeros.size() == 1);
    CHECK(std::abs(r1.zeros[0].location - I) < 1e-9);
    CHECK(std::abs(r1.c - 2.0 * I) < 1e-9);
    CHECK(winding_count(r1.f1, search) == 0);
    for (double x : {-3.0, 0.0, 2.5})
        CHECK(std::abs(std::abs(r1.f1.value(x)) - std::abs(one.value(x))) < 1e-12 * std::abs(one.value(x)));
    CHECK(std::abs(r1.f1.value(-I)) < 1e-12);
    CHECK(std::abs(r1.f1.value(I) - (2.0 * I) * std::exp(I / 10.0)) < 1e-8);
}

TEST_CASE("bundle on a single node") {
    InterpolationOptions opt;
    opt.h_source = HSource::sinc_power;
    const PointMultiset lam{{{0, -2}, 1}};
    const auto b = build_interpolant(lam, 1.0, opt);
    CHECK(b.nodes.distinct() == 2);
    CHECK(std::abs(b.g.value(0.0)) <= 1e-12);
    CHECK(std::abs(b.g.value({0, -2}) - G(1.0, {0, -2})) <= 1e-12);
    CHECK(b.diagnostics.ok);
    CHECK(b.diagnostics.max_residual <= 1e-8);
    CHECK(std::abs(b.f.value({0, -2})) < 1e-10);
    const auto doc = nlohmann::json::parse(diagnostics_to_json(b));
    CHECK(doc.contains("max_residual"));
}

TEST_CASE("bundle on a strip example") {
    const PointMultiset lam{{{0.5, -3}, 1}, {{-1, -4}, 1}, {{2, -8}, 1}, {{0, -10}, 1}, {{-4, -16}, 1}, {{1, -25}, 1}};
    InterpolationOptions opt;
    opt.strategy = Strategy::strip;
    opt.h_source = HSource::sinc_power;
    const double sigma = 3.0;
    const auto b = build_interpolant(lam, sigma, opt);
    INFO(b.diagnostics.failure);
    CHECK(b.diagnostics.ok);
    for (const auto& p : lam.points()) {
        // zero preservation
        CHECK(std::abs(b.f.value(p.location)) < 1e-8);
        CHECK(std::abs(b.f1.value(p.location)) < 1e-8);
    }
    CHECK(winding_count(b.f1, opt.search) == 0);
    CHECK(b.diagnostics.band_residual <= 0.05);
    // |g~| <= c |H| away from the nodes, along a ray in the shifted plane
    double worst = 0.0;
    for (double x = -40; x <= 40; x += 0.5) {
        const cplx w{x, 3.0};
        worst = std::max(worst, std::abs(b.g_shifted(w)) / std::abs(b.H.value(w)));
    }
    CHECK(worst < 1e3);

    // evaluation is independent of the block form
    for (cplx w : {cplx{30, 2}, cplx{-30, 1}})
        CHECK(std::abs(b.g_shifted(w, BlockForm::contour) - b.g_shifted(w)) <= 1e-8 * (1 + std::abs(b.g_shifted(w))));
}

TEST_CASE("bundle preconditions") {
    CHECK_THROWS_AS(build_interpolant(PointMultiset{{{0, -1}, 2}}, 1.0), DomainError);
    CHECK_THROWS_AS(build_interpolant(PointMultiset{{{0, 1}, 1}}, 1.0), DomainError);
    CHECK_THROWS_AS(build_interpolant(PointMultiset{{{0, -1}, 1}}, 0.0), DomainError);
    CHECK_THROWS_AS(build_interpolant(PointMultiset{}, 1.0), DomainError);
}
