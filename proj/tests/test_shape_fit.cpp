#include "bubblefield/errors.hpp"
#include "bubblefield/shape_fit.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace bubblefield;
using namespace bubblefield::shape_fit;
using young_laplace::BubbleProfile;

namespace {

constexpr double kPi = std::numbers::pi;

// Half ellipse from the bottom pole (0, 0) to the top pole (0, 2b).
BubbleProfile half_ellipse(double a, double b, int intervals) {
    BubbleProfile p;
    for (int k = 0; k <= intervals; ++k) {
        const double phi = kPi * k / intervals;
        p.samples.push_back({phi, {a * std::sin(phi), b * (1.0 - std::cos(phi)), phi}});
    }
    p.L = kPi;
    return p;
}

}  // namespace

TEST_CASE("semicircle") {
    const auto e = fit_ellipse(half_ellipse(1.0, 1.0, 200));
    CHECK(e.a == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e.b == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e.center.x == 0.0);
    CHECK(e.center.y == doctest::Approx(1.0));
}

TEST_CASE("sample and recover") {
    const auto e = fit_ellipse(half_ellipse(0.6, 0.9, 64));
    CHECK(std::abs(e.a - 0.6) <= 1e-6);
    CHECK(std::abs(e.b - 0.9) <= 1e-6);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.1, 5.0);
    for (int k = 0; k < 200; ++k) {
        const double a = U(rng), b = U(rng);
        const auto f = fit_ellipse(half_ellipse(a, b, 64));
        CHECK(std::abs(f.a - a) <= 1e-6 * a);
        CHECK(std::abs(f.b - b) <= 1e-6 * b);
    }
}

TEST_CASE("scale equivariance") {
    auto p = half_ellipse(0.8, 1.7, 101);
    // Perturb so that the extremes are not at analytic points.
    for (auto& s : p.samples) s.state.r *= 1.0 + 0.01 * std::sin(7.0 * s.s);
    const auto base = fit_ellipse(p);
    for (double lambda : {0.5, 2.0, 8.0}) {
        auto q = p;
        for (auto& s : q.samples) {
            s.state.r *= lambda;
            s.state.z *= lambda;
        }
        const auto f = fit_ellipse(q);
        CHECK(f.a == base.a * lambda);
        CHECK(f.b == base.b * lambda);
    }
}

TEST_CASE("mirror: count, closure, orientation, consistency") {
    const auto p = half_ellipse(1.0, 1.0, 100);
    const auto curve = mirror_axisymmetric(p);
    CHECK(curve.size() == 2 * p.samples.size() - 2);
    // Closing segment joins the last point back to the first through the
    // mirrored bottom pole; the two poles themselves sit on the axis.
    CHECK(std::abs(curve.front().x) <= 1e-12);
    double area2 = 0.0, max_gap = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const auto& a = curve[i];
        const auto& b = curve[(i + 1) % curve.size()];
        area2 += a.x * b.y - b.x * a.y;
        max_gap = std::max(max_gap, std::hypot(b.x - a.x, b.y - a.y));
    }
    CHECK(area2 > 0.0);
    CHECK(area2 / 2.0 == doctest::Approx(kPi).epsilon(1e-3));
    CHECK(max_gap <= 2.0 * std::sin(kPi / 200.0) + 1e-12);

    const auto e = fit_ellipse(p);
    const auto c = fit_ellipse(std::span<const Point2>(curve));
    CHECK(c.a == doctest::Approx(e.a).epsilon(1e-15));
    CHECK(c.b == doctest::Approx(e.b).epsilon(1e-15));
    CHECK(c.center.y == doctest::Approx(e.center.y).epsilon(1e-15));

    // Reversed sampling still comes out counterclockwise.
    auto rev = p;
    std::reverse(rev.samples.begin(), rev.samples.end());
    const auto curve2 = mirror_axisymmetric(rev);
    double area2b = 0.0;
    for (std::size_t i = 0; i < curve2.size(); ++i) {
        const auto& a = curve2[i];
        const auto& b = curve2[(i + 1) % curve2.size()];
        area2b += a.x * b.y - b.x * a.y;
    }
    CHECK(area2b > 0.0);
}

TEST_CASE("reflection invariance on a lopsided profile") {
    auto p = half_ellipse(0.7, 0.4, 80);
    for (auto& s : p.samples) s.state.r *= 1.0 + 0.2 * s.s / kPi;
    const auto e = fit_ellipse(p);
    const auto curve = mirror_axisymmetric(p);
    const auto c = fit_ellipse(std::span<const Point2>(curve));
    CHECK(c.a == doctest::Approx(e.a));
    CHECK(c.b == doctest::Approx(e.b));
    double max_x = -1.0, min_y = 1e9, max_y = -1e9;
    for (const auto& q : curve) {
        max_x = std::max(max_x, q.x);
        min_y = std::min(min_y, q.y);
        max_y = std::max(max_y, q.y);
    }
    CHECK(max_x == e.a);
    CHECK(max_y - min_y == doctest::Approx(2.0 * e.b));
}

TEST_CASE("degenerate profiles") {
    BubbleProfile flat;
    flat.samples = {{0.0, {0.0, 0.0, 0.0}}, {1.0, {1.0, 0.0, 0.0}}};
    try {
        fit_ellipse(flat);
        FAIL("expected DegenerateProfile");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateProfile);
    }
    BubbleProfile single;
    single.samples = {{0.0, {1.0, 1.0, 0.0}}};
    CHECK_THROWS_AS(fit_ellipse(single), Error);
    CHECK_THROWS_AS(mirror_axisymmetric(flat), Error);
}
