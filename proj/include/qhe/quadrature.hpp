#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature with interval bisection.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qhe/errors.hpp"
#include "qhe/medium.hpp"
#include "qhe/numeric.hpp"

namespace qhe::quad {

struct Options {
    double rel_tol = 1e-12;
    double abs_tol = 0.0;
    int initial_subdivisions = 1;
    int max_depth = 60;
    int max_intervals = 20000;
};

struct Result {
    double value;
    double error;
    double abs_integral; // integral of |f|
    int intervals;
};

namespace detail {

// Kronrod abscissae (descending), Kronrod weights, and the 7-point Gauss weights
// attached to the odd-indexed abscissae.
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                 0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    double abs_value; // integral of |f|, used for the roundoff floor
    int depth;
};

template <class F>
Panel gk15(const F& f, double a, double b, int depth)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resg = fc * wg[3];
    double resk = fc * wgk[7];
    double resabs = std::abs(resk);
    double fv1[7];
    double fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        fv1[j] = f(center - dx);
        fv2[j] = f(center + dx);
        const double pair = fv1[j] + fv2[j];
        resk += wgk[j] * pair;
        resabs += wgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) resg += wg[j / 2] * pair;
    }
    const double reskh = resk * 0.5;
    double resasc = wgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j) resasc += wgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    const double scale = std::abs(half);
    double err = std::abs((resk - resg) * half);
    resasc *= scale;
    resabs *= scale;
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return Panel{a, b, resk * half, err, resabs, depth};
}

} // namespace detail

/**
 * Integrates f over [a, b] to max(abs_tol, rel_tol*|I|).
 *
 * The worst panel is bisected until the summed error estimate meets the
 * tolerance. When the estimate reaches the rounding floor (50 eps times the
 * integral of |f|, which cannot be improved in double precision) the result
 * is accepted. A panel bisected more than max_depth times, or more than
 * max_intervals panels, throws QuadratureError.
 */
template <class F>
Result integrate(const F& f, double a, double b, const Options& opt = {})
{
    if (!(a < b)) throw InvalidInput("quadrature: need a < b");
    if (!(opt.rel_tol > 0.0) && !(opt.abs_tol > 0.0)) throw InvalidInput("quadrature: tolerance must be > 0");
    constexpr double eps = std::numeric_limits<double>::epsilon();

    std::vector<detail::Panel> panels;
    const int n0 = std::max(1, opt.initial_subdivisions);
    panels.reserve(static_cast<std::size_t>(n0) * 4);
    for (int i = 0; i < n0; ++i) {
        const double lo = a + (b - a) * i / n0;
        const double hi = i + 1 == n0 ? b : a + (b - a) * (i + 1) / n0;
        panels.push_back(detail::gk15(f, lo, hi, 0));
    }

    while (true) {
        numeric::CompensatedSum value;
        numeric::CompensatedSum abs_value;
        double error = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            value.add(panels[i].value);
            abs_value.add(panels[i].abs_value);
            error += panels[i].error;
            if (panels[i].error > panels[worst].error) worst = i;
        }
        const double total = value.value();
        const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
        const double floor = 50.0 * eps * abs_value.value();
        if (error <= target || error <= floor) return Result{total, error, abs_value.value(), static_cast<int>(panels.size())};

        const auto p = panels[worst];
        if (p.depth >= opt.max_depth || static_cast<int>(panels.size()) >= opt.max_intervals)
            throw QuadratureError("quadrature did not converge on [" + qhe::detail::fmt_num(a) + ", " +
                                  qhe::detail::fmt_num(b) + "]: error estimate " + qhe::detail::fmt_num(error) +
                                  " after " + std::to_string(panels.size()) + " panels");
        const double mid = 0.5 * (p.a + p.b);
        panels[worst] = detail::gk15(f, p.a, mid, p.depth + 1);
        panels.push_back(detail::gk15(f, mid, p.b, p.depth + 1));
    }
}

/// Convenience wrapper returning only the value; validates tol in (0, 1e-3].
template <class F>
double quad_integrate(const F& f, double a, double b, double tol)
{
    if (!(tol > 0.0 && tol <= 1e-3)) throw InvalidInput("quadrature: tol must lie in (0, 1e-3]");
    Options opt;
    opt.rel_tol = tol;
    return integrate(f, a, b, opt).value;
}

} // namespace qhe::quad
