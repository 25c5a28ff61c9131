#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace pnkit {

/// Extended nonnegative reals are plain doubles; +inf is a first-class value.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Tolerances separating representation error from theorem error.
struct Tolerances {
    double exact = 1e-9;   ///< closed-form identities
    double grid = 1e-3;    ///< anything routed through a grid convolution
    double metric = 1e-4;  ///< Sibley distance bisection
};

inline bool is_inf(double x) { return std::isinf(x) && x > 0; }

/// Shift used to probe right limits at jump points.
inline double right_nudge(double x) { return 1e-12 * std::max(1.0, std::abs(x)); }

namespace detail {

inline std::uint64_t ordered_bits(double x) { return std::bit_cast<std::uint64_t>(x); }
inline double from_bits(std::uint64_t b) { return std::bit_cast<double>(b); }

}  // namespace detail

/// sup{u in [lo, hi] : pred(u)} for a predicate that holds on an initial segment.
///
/// Works on the ordered bit patterns of nonnegative doubles, so it resolves the
/// boundary to one ulp in at most 64 steps, including when hi is +inf.
/// Returns lo when pred(lo) already fails.
template <class Pred>
double sup_true(double lo, double hi, Pred&& pred) {
    if (!pred(lo)) return lo;
    if (pred(hi)) return hi;
    std::uint64_t a = detail::ordered_bits(lo);
    std::uint64_t b = detail::ordered_bits(hi);
    while (b - a > 1) {
        std::uint64_t mid = a + (b - a) / 2;
        if (pred(detail::from_bits(mid)))
            a = mid;
        else
            b = mid;
    }
    return detail::from_bits(a);
}

/// Golden-section search for the maximum (or minimum) of f on [a, b].
template <class F>
double golden_extremum(double a, double b, F&& f, bool maximize, int iterations = 48) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    auto better = [&](double u, double v) { return maximize ? u > v : u < v; };
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    double best = better(fc, fd) ? fc : fd;
    for (int i = 0; i < iterations && b - a > 1e-15 * std::max(1.0, b); ++i) {
        if (better(fc, fd)) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if (better(fc, best)) best = fc;
        if (better(fd, best)) best = fd;
    }
    return best;
}

/// Relative-or-absolute closeness used for quasi-inverse values that can be large.
inline bool close_rel(double a, double b, double tol) {
    if (a == b) return true;
    if (std::isinf(a) || std::isinf(b)) return false;
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline void sort_unique(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace pnkit
