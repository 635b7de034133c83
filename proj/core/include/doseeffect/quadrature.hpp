#pragma once

#include <cmath>
#include <functional>

namespace doseeffect {

/// Adaptive Simpson integration of `f` over [a, b] to absolute tolerance
/// `abs_tol`. Orientation is respected: b < a yields the negated integral.
/// The interval is first split into `initial_panels` panels so that narrow
/// features on a wide interval are not stepped over.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int initial_panels = 16,
                        int max_depth = 48);

}  // namespace doseeffect
