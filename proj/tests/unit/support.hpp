#pragma once

#include <cmath>
#include <functional>

#include "qhe/medium.hpp"

namespace testing {

// Composite Simpson rule; used only as an independent reference.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000)
{
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

// Reference point used throughout: gaps 1, widths 2 and 1, KT 5 and 1.
inline qhe::CycleSpec reference_spec()
{
    return qhe::make_spec_from_broadenings(1.0, 2.0, 1.0, 1.0, 1.0, 5.0, 1.0);
}

inline qhe::PopulationEndpoints reference_ends() { return {0.3, 0.5}; }

} // namespace testing
