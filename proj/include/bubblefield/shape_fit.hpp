#pragma once

#include "bubblefield/young_laplace.hpp"

#include <span>
#include <vector>

namespace bubblefield::shape_fit {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Axis-aligned ellipse (x - cx)^2/a^2 + (y - cy)^2/b^2 = 1.
struct EllipseParams {
    double a = 0.0;  // horizontal semi-axis
    double b = 0.0;  // vertical semi-axis
    Point2 center;
};

/// Diameter measurement on a half profile: a = max r, b = half the z-range,
/// center = (0, middle of the z-range). Throws DegenerateProfile when the
/// r- or z-range is below 1e-12.
EllipseParams fit_ellipse(const young_laplace::BubbleProfile& profile);

/// Diameter measurement on a closed curve: half the x- and y-ranges.
EllipseParams fit_ellipse(std::span<const Point2> closed_curve);

/// Reflects the half profile (r, z) -> (-r, z) and returns the closed curve,
/// counterclockwise, with the two shared endpoints stored once
/// (2 * samples - 2 points; the closing segment is implicit).
std::vector<Point2> mirror_axisymmetric(const young_laplace::BubbleProfile& profile);

}  // namespace bubblefield::shape_fit
