#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../oracles.hpp"
#include "resokit/errors.hpp"
#include "resokit/jost.hpp"
#include "resokit/zeros.hpp"

using namespace reso;

namespace {
AnalyticEvaluator poly_eval() {
    // (z + i)^2 (z + 2 - 3i)
    return AnalyticEvaluator([](cplx z) {
        const cplx a = z + cplx{0, 1}, b = z + cplx{2, -3};
        return ValueAndDerivative{a * a * b, 2.0 * a * b + a * a};
    });
}
}  // namespace

TEST_CASE("winding counts of simple functions") {
    const auto one = AnalyticEvaluator([](cplx) { return ValueAndDerivative{1.0, 0.0}; });
    CHECK(winding_count(one, {-3, 2, -1, 4}) == 0);
    const auto sine = AnalyticEvaluator([](cplx z) { return ValueAndDerivative{std::sin(z), std::cos(z)}; });
    CHECK(winding_count(sine, {2.9, 3.4, -0.2, 0.2}) == 1);
    const auto sq = AnalyticEvaluator([](cplx z) { return ValueAndDerivative{z * z, 2.0 * z}; });
    CHECK(winding_count(sq, {-1, 1, -1, 1}) == 2);
}

TEST_CASE("boundary zero is reported") {
    const auto lin = AnalyticEvaluator([](cplx z) { return ValueAndDerivative{z - 1.0, 1.0}; });
    CHECK_THROWS_AS(winding_count(lin, {1.0, 2.0, -1.0, 1.0}), BoundaryZeroError);
}

TEST_CASE("polynomial zeros with multiplicity") {
    const auto rep = locate_zeros(poly_eval(), {-5, 5, -5, 5}, 1e-10);
    REQUIRE(rep.zeros.size() == 2);
    CHECK(rep.total_count == 3);
    CHECK(std::abs(rep.zeros[0].location - cplx{-2, 3}) < 1e-9);
    CHECK(rep.zeros[0].multiplicity == 1);
    CHECK(std::abs(rep.zeros[1].location - cplx{0, -1}) < 1e-6);
    CHECK(rep.zeros[1].multiplicity == 2);
}

TEST_CASE("free Jost function has no zeros") {
    const auto rep = locate_zeros(jost_evaluator(Potential{}), {-10, 10, -10, -0.1}, 1e-10);
    CHECK(rep.zeros.empty());
    CHECK(rep.total_count == 0);
}

TEST_CASE("box resonances match the transcendental oracle") {
    const auto f = jost_evaluator(Potential::box(1.0, 4.0));
    const auto rep = locate_zeros(f, {0.1, 20, -5, -0.01}, 1e-10);
    const auto ref = oracle::box_resonances(4.0, 0.1, 20, -5, -0.01);
    REQUIRE(rep.zeros.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        CHECK(std::abs(rep.zeros[i].location - ref[i]) < 1e-9);
        CHECK(rep.zeros[i].multiplicity == 1);
        const double scale = std::max(1.0, std::abs(f.value(rep.zeros[i].location + cplx{0, 0.1})));
        CHECK(rep.zeros[i].residual <= 1e-8 * scale);
    }
}

TEST_CASE("partition additivity and nested completeness") {
    const auto f = jost_evaluator(Potential::box(1.0, 4.0));
    const Rectangle big{-15.3, 15.7, -6.1, -0.013};
    const int whole = winding_count(f, big);
    int parts = 0;
    const int nx = 3, ny = 2;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            const double x0 = big.re_min + big.width() * i / nx, x1 = big.re_min + big.width() * (i + 1) / nx;
            const double y0 = big.im_min + big.height() * j / ny, y1 = big.im_min + big.height() * (j + 1) / ny;
            parts += winding_count(f, {x0, x1, y0, y1});
        }
    CHECK(parts == whole);

    const Rectangle small{-7.7, 9.1, -3.3, -0.2};
    const auto outer = locate_zeros(f, big, 1e-10);
    const auto inner = locate_zeros(f, small, 1e-10);
    std::vector<cplx> expected;
    for (const auto& z : outer.zeros)
        if (small.contains(z.location)) expected.push_back(z.location);
    REQUIRE(inner.zeros.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(std::abs(inner.zeros[i].location - expected[i]) < 1e-9);
}

TEST_CASE("contour moments give the zero sum") {
    const auto m = contour_moments(poly_eval(), {-5, 5, -5, 5});
    CHECK(m.count() == 3);
    CHECK(std::abs(m.first - (cplx{0, -2} + cplx{-2, 3})) < 1e-8);
}

TEST_CASE("invalid rectangle is rejected") {
    const auto one = AnalyticEvaluator([](cplx) { return ValueAndDerivative{1.0, 0.0}; });
    CHECK_THROWS_AS(winding_count(one, {1, 0, 0, 1}), DomainError);
}
