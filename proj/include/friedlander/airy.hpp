#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace friedlander::airy {

/// One evaluation of the Airy function and its derivative.
struct AiryValue {
    double argument = 0;
    double ai = 0;
    double ai_prime = 0;
    double est_abs_error = 0;
    /// set when Ai(x) underflows binary64 (x very large positive); ai/ai_prime are 0
    bool underflowed = false;
};

/// Evaluate Ai(x), Ai'(x).  Absolute error below 1e-12 for |x| <= 100
/// (in practice ~1e-14; see est_abs_error).
AiryValue airy_ai(double x);

/// Phase of f(s) = i s^{1/3} Ai(-s^{2/3}) - Ai'(-s^{2/3}) on its continuous
/// increasing branch, normalized so 0 < theta < pi below the first Airy zero
/// and theta(t_m^{3/2}) = m*pi.  Asymptotically 2s/3 + pi/4 + O(1/s).
/// Throws std::domain_error for s <= 1/4 (theta' > 0 is only guaranteed beyond).
double theta(double s);

/// d theta / ds, computed from Im(f'/f); positive for s > 1/4.
double theta_prime(double s);

/// Inverse of theta (bracketed Newton).  Defined for y >= theta_branch_base().
double theta_inverse(double y);

/// theta evaluated at the domain edge s = 1/4 (limit from above).
double theta_branch_base();

/// tau(xi) = [theta^{-1}(pi*xi)]^{2/3}; tau(m) = t_m on integers.
double tau(double xi);

/// Smallest xi admissible in tau().
double tau_domain_min();

/// Principal-symbol seed (3 pi m / 2)^{2/3} for the m-th zero.
double airy_zero_seed(std::int64_t m);

/// m-th positive root of Ai(-t) = 0, refined by safeguarded Newton inside the
/// bracket seed +- 0.6 m^{-1/3}.  Certified to |Ai(-t)| < airy_zero_floor(t)
/// (1e-12 until the ulp of t itself dominates).
double airy_zero(std::int64_t m, double tol = 1e-12);

/// Smallest certifiable residual |Ai(-t)| near magnitude t in binary64:
/// max(tol, 2 |Ai'(-t)| ulp(t)).
double airy_zero_floor(double t, double tol = 1e-12);

/// Number of zeros t_m <= t.
std::int64_t zero_count_below(double t);

/// Table of the first M zeros, extendable, immutable once built.
class ZeroTable {
public:
    explicit ZeroTable(std::size_t m_max = 0, double refinement_tol = 1e-12);

    /// extend the table to at least m_max entries (existing entries untouched)
    void ensure(std::size_t m_max);

    /// t_m, 1-based; throws std::out_of_range beyond the table
    double t(std::size_t m) const;

    /// t_m, falling back to direct computation beyond the cached range
    double t_extended(std::size_t m) const;

    std::size_t size() const { return zeros_.size(); }
    double refinement_tol() const { return tol_; }
    const std::vector<double>& zeros() const { return zeros_; }

private:
    std::vector<double> zeros_;
    double tol_;
};

}  // namespace friedlander::airy
