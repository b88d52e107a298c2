#include "doctest.h"

#include <cmath>
#include <vector>

#include "cavnet/peaks.hpp"

using namespace cavnet;

TEST_SUITE("peaks") {

TEST_CASE("interior maxima and minima") {
    std::vector<double> x, y;
    for (int i = 0; i <= 400; ++i) {
        x.push_back(-10.0 + 0.05 * i);
        y.push_back(std::cos(x.back()));
    }
    const auto maxima = local_maxima(x, y);
    REQUIRE(maxima.size() == 3);
    CHECK(maxima[1].position == doctest::Approx(0.0).scale(1.0));
    CHECK(maxima[0].position == doctest::Approx(-2.0 * M_PI).epsilon(0.01));
    const auto minima = local_minima(x, y);
    CHECK(minima.size() == 4);  // +-pi, +-3pi
}

TEST_CASE("edges are never extrema") {
    const std::vector<double> x{0, 1, 2, 3};
    const std::vector<double> up{0, 1, 2, 3};
    CHECK(local_maxima(x, up).empty());
    CHECK(local_minima(x, up).empty());
}

TEST_CASE("symmetric plateau reported once at its midpoint") {
    const std::vector<double> x{0, 1, 2, 3, 4, 5};
    const std::vector<double> y{0, 1, 2, 2, 1, 0};
    const auto m = local_maxima(x, y);
    REQUIRE(m.size() == 1);
    CHECK(m[0].first == 2);
    CHECK(m[0].last == 3);
    CHECK(m[0].position == doctest::Approx(2.5));
    // A shoulder (plateau followed by further rise) is not a maximum.
    const std::vector<double> shoulder{0, 1, 1, 2, 3, 0};
    const auto s = local_maxima(x, shoulder);
    REQUIRE(s.size() == 1);
    CHECK(s[0].first == 4);
}

TEST_CASE("quadratic refinement recovers a parabola vertex") {
    std::vector<double> x, y;
    for (int i = 0; i < 11; ++i) {
        x.push_back(0.5 * i);
        y.push_back(3.0 - (x.back() - 2.3) * (x.back() - 2.3));
    }
    const RefinedPeak p = quadratic_peak(x, y, 5);
    CHECK(p.position == doctest::Approx(2.3).epsilon(1e-12));
    CHECK(p.value == doctest::Approx(3.0).epsilon(1e-12));
    const RefinedPeak edge = quadratic_peak(x, y, 0);
    CHECK(edge.position == 0.0);
    CHECK(edge.value == y[0]);
}

}  // TEST_SUITE
