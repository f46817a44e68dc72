#include "bubblefield/shape_fit.hpp"

#include "bubblefield/errors.hpp"

#include <algorithm>

namespace bubblefield::shape_fit {

namespace {

constexpr const char* kModule = "shape_fit";
constexpr double kMinRange = 1e-12;

struct Extent {
    double xmin, xmax, ymin, ymax;
};

template <class Range, class Get>
Extent extent_of(const Range& pts, Get get) {
    Extent e{1e300, -1e300, 1e300, -1e300};
    for (const auto& p : pts) {
        const Point2 q = get(p);
        e.xmin = std::min(e.xmin, q.x);
        e.xmax = std::max(e.xmax, q.x);
        e.ymin = std::min(e.ymin, q.y);
        e.ymax = std::max(e.ymax, q.y);
    }
    return e;
}

void require_extent(const Extent& e, std::size_t count) {
    if (count < 2 || e.xmax - e.xmin < kMinRange || e.ymax - e.ymin < kMinRange) {
        throw Error(ErrorCode::DegenerateProfile, kModule, "profile has no extent in r or z");
    }
}

Point2 rz(const young_laplace::ProfileSample& s) { return {s.state.r, s.state.z}; }

}  // namespace

EllipseParams fit_ellipse(const young_laplace::BubbleProfile& profile) {
    const Extent e = extent_of(profile.samples, rz);
    require_extent(e, profile.samples.size());
    return {e.xmax, 0.5 * (e.ymax - e.ymin), {0.0, 0.5 * (e.ymax + e.ymin)}};
}

EllipseParams fit_ellipse(std::span<const Point2> closed_curve) {
    const Extent e = extent_of(closed_curve, [](const Point2& p) { return p; });
    require_extent(e, closed_curve.size());
    return {0.5 * (e.xmax - e.xmin), 0.5 * (e.ymax - e.ymin),
            {0.5 * (e.xmax + e.xmin), 0.5 * (e.ymax + e.ymin)}};
}

std::vector<Point2> mirror_axisymmetric(const young_laplace::BubbleProfile& profile) {
    const auto& smp = profile.samples;
    require_extent(extent_of(smp, rz), smp.size());

    std::vector<Point2> half;
    half.reserve(smp.size());
    for (const auto& s : smp) half.push_back(rz(s));

    // Counterclockwise means the r > 0 half is traversed with increasing z on
    // average; flip if the signed area of the closed curve comes out negative.
    std::vector<Point2> out;
    out.reserve(2 * half.size() - 2);
    auto build = [&] {
        out.assign(half.begin(), half.end());
        for (std::size_t i = half.size() - 1; i-- > 1;) out.push_back({-half[i].x, half[i].y});
    };
    build();
    double area2 = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Point2& p = out[i];
        const Point2& q = out[(i + 1) % out.size()];
        area2 += p.x * q.y - q.x * p.y;
    }
    if (area2 < 0.0) {
        std::reverse(half.begin(), half.end());
        build();
    }
    return out;
}

}  // namespace bubblefield::shape_fit
