#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "moran/errors.hpp"

namespace moran {

/// Bracket and stopping rule for monotone root finding on exponents.
struct RootBracket {
    double lo = 0.0;
    double hi = 1.0;
    double tol = 1e-12;  // absolute tolerance on the root
    int max_iter = 200;
};

/// Root of a strictly decreasing function: f(s*) = 0. If the supplied
/// bracket does not straddle the root it is widened once to
/// [widen_lo, widen_hi]; failing that is a numeric error.
template <class F>
double bisect_decreasing(F&& f, RootBracket bracket, double widen_lo, double widen_hi) {
    double lo = bracket.lo, hi = bracket.hi;
    if (!(lo < hi)) throw domain_error("root bracket: lo must be < hi");
    double flo = f(lo), fhi = f(hi);
    if (flo < 0.0 || fhi > 0.0) {
        lo = widen_lo;
        hi = widen_hi;
        flo = f(lo);
        fhi = f(hi);
        if (flo < 0.0 || fhi > 0.0)
            throw domain_error("root bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                               "] does not straddle the root of a decreasing function");
    }
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    for (int it = 0; it < bracket.max_iter && (hi - lo) > 2.0 * bracket.tol; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if (fm > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace moran
