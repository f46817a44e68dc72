#include "bubblefield/coupling.hpp"
#include "bubblefield/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

using namespace bubblefield;
using namespace bubblefield::coupling;

namespace {

constexpr double kPi = std::numbers::pi;

Grid2D domain() { return Grid2D::from_extent(100, 200, 0.0, 0.0, 100.0, 200.0); }

// Fine grid so that near-field-sized bubbles span several cells.
Grid2D fine() { return Grid2D::from_extent(80, 120, 0.0, 0.0, 8.0, 12.0); }

BubbleRecord given(int id, double a, double b, Point2 at) {
    BubbleRecord r;
    r.id = id;
    r.ellipse = EllipseParams{a, b, {}};
    r.placement = at;
    return r;
}

BubbleRecord solved(int id, double dp, Point2 at) {
    BubbleRecord r;
    r.id = id;
    NearFieldSetup s;
    s.params.delta_p_over_alpha = dp;
    s.L = 2.0;
    s.ds = 0.004;
    r.near = s;
    r.placement = at;
    return r;
}

bool same_field(const LevelSetField& a, const LevelSetField& b) {
    return a.time == b.time && a.u.size() == b.u.size() &&
           std::memcmp(a.u.data(), b.u.data(), a.u.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("electric pressure") {
    CHECK(electric_pressure({1.0, 1.0}, 0.0) == 0.0);
    CHECK(electric_pressure({1.0, 1.0}, kPi / 2) == doctest::Approx(9.0 / 8.0));
    CHECK(electric_pressure({0.1, 1.0}, kPi / 2) == doctest::Approx(0.1125));
    double best = -1.0, arg = 0.0;
    for (int k = 0; k <= 1000; ++k) {
        const double th = kPi * k / 1000.0;
        const double v = electric_pressure({0.3, 2.0}, th);
        if (v > best) {
            best = v;
            arg = th;
        }
    }
    CHECK(arg == doctest::Approx(kPi / 2));
}

TEST_CASE("breathing frequency") {
    OscillationParams op;
    op.r0 = 1.0;
    op.k = 1.4;
    op.p0 = 1.0;
    op.sigma = 0.0;
    op.rho = 1.0;
    CHECK(breathing_frequency(op, 0.0) == doctest::Approx(std::sqrt(4.2) / (2.0 * kPi)));
    CHECK(breathing_frequency(op, 0.0) == doctest::Approx(0.326).epsilon(1e-3));
    CHECK(breathing_frequency(op, 0.5) == doctest::Approx(std::sqrt(2.1) / (2.0 * kPi)));

    // Radicand exactly zero.
    op.k = 1.0;
    op.p0 = 2.0;
    op.sigma = 3.0;
    CHECK(breathing_frequency(op, 0.0) == 0.0);

    // Imaginary exactly when 3 k p / rho < 2 sigma / (rho r0).
    for (double sigma : {2.0, 2.9, 3.1, 5.0}) {
        op.sigma = sigma;
        const bool imaginary = 3.0 * op.k * op.p0 / op.rho < 2.0 * sigma / (op.rho * op.r0);
        if (imaginary) {
            try {
                breathing_frequency(op, 0.0);
                FAIL("expected ImaginaryFrequency");
            } catch (const Error& e) {
                CHECK(e.code() == ErrorCode::ImaginaryFrequency);
            }
        } else {
            CHECK(breathing_frequency(op, 0.0) > 0.0);
        }
    }
    op.r0 = 0.0;
    CHECK_THROWS_AS(breathing_frequency(op, 0.0), Error);
}

TEST_CASE("oscillation radius") {
    OscillationParams op;
    op.r0 = 1.0;
    op.r_eps0 = 0.1;
    op.omega0 = kPi;
    const auto r0 = oscillation_radius(op, 0.0);
    CHECK(r0.real() == doctest::Approx(0.9));
    CHECK(r0.imag() == doctest::Approx(0.0));
    const auto r1 = oscillation_radius(op, 0.5);
    CHECK(r1.real() == doctest::Approx(1.0));
    CHECK(r1.imag() == doctest::Approx(-0.1));
    CHECK(std::abs(oscillation_radius(op, 1.0) - std::complex<double>(1.1, 0.0)) < 1e-12);
}

TEST_CASE("near to far: two placed bubbles") {
    std::vector<BubbleRecord> recs{given(1, 5.0, 3.0, {20.0, 100.0}), given(2, 4.0, 6.0, {70.0, 90.0})};
    std::vector<std::string> warn;
    const auto f = near_to_far(recs, domain(), InitMode::Union, &warn);
    CHECK(warn.empty());
    const std::vector<EllipseParams> placed{{5.0, 3.0, {20.0, 100.0}}, {4.0, 6.0, {70.0, 90.0}}};
    CHECK(same_field(f, levelset::init_bubbles(placed, domain())));
    for (const auto& r : recs) {
        REQUIRE(r.trajectory.size() == 1);
        CHECK(r.trajectory[0].t == 0.0);
        CHECK(r.trajectory[0].centroid.x == r.placement.x);
        CHECK(r.trajectory[0].centroid.y == r.placement.y);
    }
    const auto comps = levelset::label_components(f);
    CHECK(comps.size() == 2);

    std::vector<BubbleRecord> none;
    try {
        near_to_far(none, domain());
        FAIL("expected EmptyBubbleList");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyBubbleList);
    }
}

TEST_CASE("near to far: solved bubbles get a profile and a fitted ellipse") {
    std::vector<BubbleRecord> recs{solved(1, 0.8, {2.0, 3.0}), solved(2, 1.4, {6.0, 3.0})};
    near_to_far(recs, fine());
    for (const auto& r : recs) {
        REQUIRE(r.profile.has_value());
        REQUIRE(r.ellipse.has_value());
        const auto e = shape_fit::fit_ellipse(*r.profile);
        CHECK(r.ellipse->a == e.a);
        CHECK(r.ellipse->b == e.b);
    }
    CHECK(recs[0].ellipse->a > recs[1].ellipse->a);
}

TEST_CASE("errors carry the bubble id and cycle") {
    std::vector<BubbleRecord> recs{solved(1, 0.8, {2.0, 3.0}), solved(42, 0.8, {6.0, 3.0})};
    recs[1].near->params.a = -1.0;
    try {
        solve_near_fields(recs, std::nullopt, 3);
        FAIL("expected BubbleError");
    } catch (const BubbleError& e) {
        CHECK(e.bubble_id() == 42);
        CHECK(e.cycle() == 3);
        CHECK(e.code() == ErrorCode::InvalidArgument);
    }
}

TEST_CASE("bubble density of a placed circle") {
    const Grid2D g = domain();
    std::vector<BubbleRecord> recs{given(5, 6.0, 6.0, {50.0, 100.0})};
    const auto f = near_to_far(recs, g);
    const auto d = bubble_density(f, recs);
    REQUIRE(d.size() == 1);
    CHECK(d[0].id == 5);
    CHECK(!d[0].lost);
    CHECK(d[0].centroid.x == doctest::Approx(50.0));
    CHECK(d[0].centroid.y == doctest::Approx(100.0));
    const double a = 6.0;
    CHECK(std::abs(d[0].area - kPi * a * a) <= 2.0 * kPi * a * g.dx + kPi * g.dx * g.dx);
    CHECK(d[0].mass > 0.0);
}

TEST_CASE("two bubbles keep their ids while tracked") {
    const Grid2D g = domain();
    std::vector<BubbleRecord> recs{given(7, 6.0, 8.0, {30.0, 40.0}), given(3, 6.0, 8.0, {70.0, 40.0})};
    const TransportParams p{0.0, 1.0, 0.0};
    CycleOptions opts;
    opts.snapshot_times = {10.0, 20.0, 40.0};
    const auto snaps = run_decoupled(recs, g, p, opts);
    REQUIRE(snaps.size() == 3);
    for (const auto& s : snaps) {
        REQUIRE(s.bubbles.size() == 2);
        CHECK(s.bubbles[0].id == 7);
        CHECK(s.bubbles[1].id == 3);
        CHECK(s.bubbles[0].centroid.x == doctest::Approx(30.0));
        CHECK(s.bubbles[1].centroid.x == doctest::Approx(70.0));
    }
}

TEST_CASE("tracked centroid follows the advection within half a cell") {
    const Grid2D g = domain();
    std::vector<BubbleRecord> recs{given(1, 8.0, 8.0, {50.0, 40.0})};
    const TransportParams p{0.0, 1.0, 0.0};
    CycleOptions opts;
    for (int k = 1; k <= 10; ++k) opts.snapshot_times.push_back(10.0 * k);
    const auto snaps = run_decoupled(recs, g, p, opts);
    for (const auto& s : snaps) {
        REQUIRE(s.bubbles.size() == 1);
        CHECK(!s.bubbles[0].lost);
        CHECK(std::abs(s.bubbles[0].centroid.y - (40.0 + s.field.time)) <= 0.5 * g.dy);
        CHECK(std::abs(s.bubbles[0].centroid.x - 50.0) <= 0.5 * g.dx);
    }
    CHECK(recs[0].trajectory.size() == 11);
}

TEST_CASE("a bubble leaving the grid is reported lost") {
    const Grid2D g = domain();
    std::vector<BubbleRecord> recs{given(9, 5.0, 5.0, {50.0, 185.0})};
    const TransportParams p{0.0, 1.0, 0.0};
    CycleOptions opts;
    opts.snapshot_times = {5.0, 40.0};
    std::vector<std::string> warn;
    const auto snaps = run_decoupled(recs, g, p, opts, &warn);
    CHECK(!snaps[0].bubbles.empty());
    CHECK(recs[0].lost);
    bool reported = false;
    for (const auto& w : warn) reported = reported || w.find("LostBubble") != std::string::npos;
    CHECK(reported);
    // Lost bubbles are not written out.
    const std::string csv = format_bubbles_csv(snaps);
    CHECK(csv.rfind("id,t,a,b,cx,cy,mass\n", 0) == 0);
    CHECK(csv.find("\n9,40,") == std::string::npos);
}

TEST_CASE("coupled cycle without field or refresh reduces to the decoupled run") {
    const Grid2D g = fine();
    const TransportParams p{0.0, 0.1, 0.01};
    CycleOptions opts;
    opts.snapshot_times = {0.5, 2.0, 5.0};
    opts.refresh_every = 0;
    std::vector<BubbleRecord> a{solved(1, 0.8, {2.0, 3.0}), solved(2, 1.4, {6.0, 3.0})};
    std::vector<BubbleRecord> b = a;
    const auto sa = run_coupled_cycle(a, g, p, std::nullopt, opts);
    const auto sb = run_decoupled(b, g, p, opts);
    REQUIRE(sa.size() == sb.size());
    for (std::size_t k = 0; k < sa.size(); ++k) CHECK(same_field(sa[k].field, sb[k].field));
    CHECK(format_bubbles_csv(sa) == format_bubbles_csv(sb));
}

TEST_CASE("coupled E-field cycle is deterministic and refreshes to the same shapes") {
    const Grid2D g = fine();
    const TransportParams p{0.0, 0.1, 0.0};
    const EFieldParams field{0.1, 1.0};
    CycleOptions opts;
    opts.snapshot_times = {1.0, 4.0};
    opts.refresh_every = 2;
    std::vector<BubbleRecord> a{solved(1, 0.8, {2.0, 3.0}), solved(2, 1.4, {6.0, 3.0})};
    std::vector<BubbleRecord> b = a;
    std::vector<std::string> wa, wb;
    const auto sa = run_coupled_cycle(a, g, p, field, opts, &wa);
    const auto sb = run_coupled_cycle(b, g, p, field, opts, &wb);
    REQUIRE(sa.size() == sb.size());
    for (std::size_t k = 0; k < sa.size(); ++k) CHECK(same_field(sa[k].field, sb[k].field));
    CHECK(format_bubbles_csv(sa) == format_bubbles_csv(sb));
    CHECK(wa == wb);

    int refreshes = 0;
    for (const auto& s : sa) {
        if (!s.refresh) continue;
        ++refreshes;
        for (std::size_t k = 0; k < s.bubbles.size(); ++k) {
            CHECK(s.bubbles[k].a == sa.front().bubbles[k].a);
            CHECK(s.bubbles[k].b == sa.front().bubbles[k].b);
        }
    }
    CHECK(refreshes > 0);
    // The field changes the shape relative to the field-free solve.
    std::vector<BubbleRecord> c{solved(1, 0.8, {2.0, 3.0})};
    solve_near_fields(c);
    CHECK(c[0].ellipse->a != doctest::Approx(a[0].ellipse->a));
}
