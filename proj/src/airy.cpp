#include "friedlander/airy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace friedlander::airy {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// ---- double-double arithmetic ----------------------------------------------
// The Maclaurin series of Ai loses up to 7 digits to cancellation near the
// series/asymptotics crossover (|x| ~ 8.5, alternating terms of size e^18).
// Compensated products/sums keep the series branch at full double accuracy.

struct dd {
    double hi, lo;
};

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline dd quick_two_sum(double a, double b) {  // requires |a| >= |b|
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline dd dd_add(dd a, dd b) {
    dd s = two_sum(a.hi, b.hi);
    return quick_two_sum(s.hi, s.lo + a.lo + b.lo);
}

inline dd dd_mul(dd a, dd b) {
    dd p = two_prod(a.hi, b.hi);
    return quick_two_sum(p.hi, p.lo + a.hi * b.lo + a.lo * b.hi);
}

inline dd dd_mul(dd a, double b) {
    dd p = two_prod(a.hi, b);
    return quick_two_sum(p.hi, p.lo + a.lo * b);
}

inline dd dd_div(dd a, double b) {
    double q = a.hi / b;
    dd p = two_prod(q, b);
    double r = ((a.hi - p.hi) - p.lo + a.lo) / b;
    return quick_two_sum(q, r);
}

// Ai(0) and -Ai'(0) as hi+lo pairs (3^{-2/3}/Gamma(2/3), 3^{-1/3}/Gamma(1/3))
const dd kAi0 = {0.3550280538878172, 2.05233632436212e-17};
const dd kAip0 = {0.2588194037928068, -2.522243111610832e-17};

constexpr double kSeriesLimit = 8.5;  // crossover; both branches agree to ~1e-13 here

// Maclaurin solution of y'' = x y around 0.  Four term recurrences driven by
// multiplication with x^3: the two fundamental series f, g and their derivatives.
AiryValue maclaurin_ai(double x) {
    dd x_dd = {x, 0.0};
    dd x2 = two_prod(x, x);
    dd x3 = dd_mul(x2, x);

    dd term_f = {1.0, 0.0};              // x^{3k} term of f
    dd term_g = x_dd;                    // x^{3k+1} term of g
    dd term_fd = dd_div(x2, 2.0);        // 3k c^f_k x^{3k-1}, valid from k = 1
    dd term_gd = {1.0, 0.0};             // (3k+1) c^g_k x^{3k}

    dd sum_f = term_f, sum_g = term_g, sum_fd = {0.0, 0.0}, sum_gd = term_gd;
    double max_term = std::max(1.0, std::abs(x));

    for (int k = 0; k < 200; ++k) {
        double a = 3.0 * k;
        term_f = dd_div(dd_mul(term_f, x3), (a + 2) * (a + 3));
        term_g = dd_div(dd_mul(term_g, x3), (a + 3) * (a + 4));
        if (k >= 1) term_fd = dd_div(dd_mul(term_fd, x3), a * (a + 2));
        term_gd = dd_div(dd_mul(term_gd, x3), (a + 1) * (a + 3));

        sum_f = dd_add(sum_f, term_f);
        sum_g = dd_add(sum_g, term_g);
        sum_fd = dd_add(sum_fd, term_fd);
        sum_gd = dd_add(sum_gd, term_gd);

        double mag = std::max(std::abs(term_f.hi), std::abs(term_g.hi));
        max_term = std::max(max_term, mag);
        if (mag < 1e-40 * max_term && k > 2) break;
    }

    dd ai = dd_add(dd_mul(kAi0, sum_f), dd_mul(dd_mul(kAip0, sum_g), -1.0));
    dd aip = dd_add(dd_mul(kAi0, sum_fd), dd_mul(dd_mul(kAip0, sum_gd), -1.0));

    AiryValue v;
    v.argument = x;
    v.ai = ai.hi + ai.lo;
    v.ai_prime = aip.hi + aip.lo;
    // residual dd error ~ max_term*1e-31; final double rounding dominates
    v.est_abs_error = max_term * 1e-30 + 2.3e-16 * std::abs(v.ai) + 1e-300;
    return v;
}

// Asymptotic coefficient recurrences: c_{k+1} = c_k (6k+1)(6k+5) / (72(k+1)),
// d_k = -c_k (6k+1)/(6k-1).
inline double next_c(double c, int k) {
    return c * (6.0 * k + 1) * (6.0 * k + 5) / (72.0 * (k + 1));
}

AiryValue asymptotic_pos(double x) {
    AiryValue v;
    v.argument = x;
    double zeta = (2.0 / 3.0) * x * std::sqrt(x);
    if (zeta > 700.0) {  // e^{-zeta} underflows
        v.underflowed = true;
        v.est_abs_error = std::numeric_limits<double>::min();
        return v;
    }
    double sum_ai = 1.0, sum_aip = 1.0;
    double c = 1.0, zk = 1.0, sign = -1.0, prev = 1.0, trunc = 1.0;
    for (int k = 1; k < 60; ++k) {
        c = next_c(c, k - 1);
        zk /= zeta;
        double term = c * zk;
        if (term >= prev || term < 1e-18) {
            trunc = term;
            break;
        }
        double d_over_c = -(6.0 * k + 1) / (6.0 * k - 1);
        sum_ai += sign * term;
        sum_aip += sign * d_over_c * term;
        prev = trunc = term;
        sign = -sign;
    }
    double root4 = std::pow(x, 0.25);
    double pref = std::exp(-zeta) / (2.0 * std::sqrt(kPi));
    v.ai = pref / root4 * sum_ai;
    v.ai_prime = -pref * root4 * sum_aip;
    v.est_abs_error = std::abs(pref / root4) * (trunc + zeta * 2.3e-16) + 1e-300;
    return v;
}

AiryValue asymptotic_neg(double x) {
    double z = -x;
    double zeta = (2.0 / 3.0) * z * std::sqrt(z);
    double u = zeta + kPi / 4.0;
    double su = std::sin(u), cu = std::cos(u);

    // split even/odd coefficient sums, signs (-1)^{floor(k/2)}
    double P = 1.0, Q = 0.0, Pp = 1.0, Qp = 0.0;
    double c = 1.0, zk = 1.0, trunc = 1.0, prev = 1.0;
    for (int k = 1; k < 60; ++k) {
        c = next_c(c, k - 1);
        zk /= zeta;
        double term = c * zk;
        if (term >= prev || term < 1e-18) {
            trunc = term;
            break;
        }
        double sgn = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        double d_over_c = -(6.0 * k + 1) / (6.0 * k - 1);
        if (k % 2 == 1) {
            Q += sgn * term;
            Qp += sgn * d_over_c * term;
        } else {
            P += sgn * term;
            Pp += sgn * d_over_c * term;
        }
        prev = trunc = term;
    }

    double root4 = std::pow(z, 0.25);
    double amp = 1.0 / (std::sqrt(kPi) * root4);
    AiryValue v;
    v.argument = x;
    v.ai = amp * (su * P - cu * Q);
    v.ai_prime = -root4 / std::sqrt(kPi) * (cu * Pp + su * Qp);
    // phase jitter zeta*eps enters through sin/cos of the reduced argument
    v.est_abs_error = amp * (trunc + zeta * 2.3e-16) + 1e-300;
    return v;
}

}  // namespace

AiryValue airy_ai(double x) {
    if (!std::isfinite(x)) throw std::domain_error("airy_ai: non-finite argument");
    if (std::abs(x) <= kSeriesLimit) return maclaurin_ai(x);
    return x > 0 ? asymptotic_pos(x) : asymptotic_neg(x);
}

// ---- zeros ------------------------------------------------------------------

namespace {

// zeros 1..10 to full precision, used as Newton starting points
const double kFirstZeros[10] = {
    2.33810741045976704, 4.08794944413097062, 5.52055982809555106,
    6.78670809007175900, 7.94413358712085312, 9.02265085334098038,
    10.0401743415580859, 11.0085243037332629, 11.9360155632362625,
    12.8287767528657572,
};

// expansion of the m-th zero about z = 3 pi (4m-1)/8 (used as a Newton start;
// the certified value always comes from the refinement)
double mcmahon_zero(std::int64_t m) {
    double z = 3.0 * kPi * (4.0 * static_cast<double>(m) - 1.0) / 8.0;
    double w = 1.0 / (z * z);
    double corr = 1.0 +
        w * (5.0 / 48.0 +
        w * (-5.0 / 36.0 +
        w * (77125.0 / 82944.0 +
        w * (-108056875.0 / 6967296.0 +
        w * (162375596875.0 / 334430208.0)))));
    return std::pow(z, 2.0 / 3.0) * corr;
}

double ai_at_minus(double t) { return airy_ai(-t).ai; }

}  // namespace

double airy_zero_seed(std::int64_t m) {
    if (m < 1) throw std::domain_error("airy_zero_seed: m >= 1 required");
    return std::pow(1.5 * kPi * static_cast<double>(m), 2.0 / 3.0);
}

double airy_zero_floor(double t, double tol) {
    double slope = std::abs(airy_ai(-t).ai_prime);
    double ulp = std::nextafter(t, std::numeric_limits<double>::infinity()) - t;
    return std::max(tol, 2.0 * slope * ulp);
}

double airy_zero(std::int64_t m, double tol) {
    if (m < 1) throw std::domain_error("airy_zero: m >= 1 required");

    double seed = airy_zero_seed(m);
    double half = 0.6 * std::pow(static_cast<double>(m), -1.0 / 3.0);

    // for large m the expansion start is within ~1e-11 of the zero; one or two
    // plain Newton steps clamped to the bracket certify it (the trace engine
    // streams ~1e8 zeros, so the endpoint probes below are worth skipping)
    if (m > 1000) {
        double lo = seed - half, hi = seed + half;
        double t = std::clamp(mcmahon_zero(m), lo, hi);
        for (int it = 0; it < 8; ++it) {
            AiryValue v = airy_ai(-t);
            double floor = std::max(
                tol, 2.0 * std::abs(v.ai_prime) * t * std::numeric_limits<double>::epsilon());
            if (std::abs(v.ai) < floor) return t;
            t = std::clamp(t + v.ai / v.ai_prime, lo, hi);
        }
        // fall through to the safeguarded path (not expected)
    }

    double a = seed - half, b = seed + half;
    double fa = ai_at_minus(a), fb = ai_at_minus(b);
    for (int grow = 0; grow < 4 && fa * fb > 0; ++grow) {  // paranoia; never taken
        half *= 1.5;
        a = seed - half;
        b = seed + half;
        fa = ai_at_minus(a);
        fb = ai_at_minus(b);
    }
    if (fa * fb > 0)
        throw std::runtime_error("airy_zero: no sign change in bracket, m=" + std::to_string(m));

    double t = (m <= 10) ? kFirstZeros[m - 1] : mcmahon_zero(m);
    t = std::clamp(t, a, b);

    double ulp_up = std::numeric_limits<double>::epsilon();
    for (int it = 0; it < 80; ++it) {
        AiryValue v = airy_ai(-t);
        double ft = v.ai;
        double slope = -v.ai_prime;  // d/dt Ai(-t)
        double floor = std::max(tol, 2.0 * std::abs(v.ai_prime) * t * ulp_up);
        if (std::abs(ft) < floor) return t;

        double tn = t - ft / slope;
        if (!(tn > a && tn < b)) tn = 0.5 * (a + b);  // bisection safeguard
        if (tn == a || tn == b || tn == t) {
            // bracket collapsed to ulp resolution; accept the better endpoint
            return std::abs(ai_at_minus(tn)) < std::abs(ft) ? tn : t;
        }
        if (fa * airy_ai(-tn).ai <= 0)
            b = tn;
        else
            a = tn;
        t = tn;
    }
    throw std::runtime_error("airy_zero: no convergence, m=" + std::to_string(m) +
                             ", t=" + std::to_string(t));
}

namespace {

// zero lookup with a growing per-thread cache (winding counts hit this hard)
double cached_zero(std::int64_t m) {
    thread_local std::vector<double> cache;
    if (m > static_cast<std::int64_t>(cache.size())) {
        if (m <= 1 << 16) {
            cache.reserve(m);
            for (auto i = static_cast<std::int64_t>(cache.size()) + 1; i <= m; ++i)
                cache.push_back(airy_zero(i));
        } else {
            return airy_zero(m);
        }
    }
    return cache[m - 1];
}

}  // namespace

std::int64_t zero_count_below(double t) {
    if (t < kFirstZeros[0]) return 0;
    double s = t * std::sqrt(t);
    auto m = static_cast<std::int64_t>(std::floor((2.0 * s / 3.0 + kPi / 4.0) / kPi));
    m = std::max<std::int64_t>(m, 0);
    while (m >= 1 && cached_zero(m) > t) --m;
    while (cached_zero(m + 1) <= t) ++m;
    return m;
}

// ---- phase function ---------------------------------------------------------

double theta(double s) {
    if (!(s > 0.25)) throw std::domain_error("theta: defined for s > 1/4");
    double u = std::cbrt(s);
    double xarg = u * u;  // s^{2/3}
    AiryValue v = airy_ai(-xarg);
    double fre = -v.ai_prime;
    double fim = u * v.ai;

    // winding tracked by counting sign changes of Im f, i.e. Airy zeros below s^{2/3}
    std::int64_t m = zero_count_below(xarg);
    double ang = (m % 2 == 0) ? std::atan2(fim, fre) : std::atan2(-fim, -fre);
    return static_cast<double>(m) * kPi + ang;
}

double theta_prime(double s) {
    if (!(s > 0.25)) throw std::domain_error("theta_prime: defined for s > 1/4");
    double u = std::cbrt(s);
    double s23 = u * u;
    AiryValue v = airy_ai(-s23);
    double a = v.ai, b = v.ai_prime;
    // Im(f'/f); denominator |f|^2 = b^2 + s^{2/3} a^2
    double num = 2.0 * s23 * a * a + 2.0 * b * b - a * b / s23;
    double den = 3.0 * (b * b + s23 * a * a);
    return num / den;
}

double theta_branch_base() {
    static const double base = [] {
        double s = std::nextafter(0.25, 1.0);
        double u = std::cbrt(s);
        AiryValue v = airy_ai(-u * u);
        return std::atan2(u * v.ai, -v.ai_prime);
    }();
    return base;
}

double theta_inverse(double y) {
    if (!(y > theta_branch_base()))
        throw std::domain_error("theta_inverse: y below branch base");

    // asymptotic start 2s/3 + pi/4 ~ y, then expand a bracket around it
    double s = std::max(1.5 * (y - kPi / 4.0), 0.2500001);
    double lo = std::max(0.5 * s, 0.2500001), hi = std::max(2.0 * s, 1.0);
    while (theta(lo) > y && lo > 0.2500001) lo = std::max(0.5 * lo, 0.2500001);
    while (theta(hi) < y) hi *= 2.0;

    s = std::clamp(s, lo, hi);
    for (int it = 0; it < 100; ++it) {
        double f = theta(s) - y;
        if (std::abs(f) < 1e-13 * std::max(1.0, std::abs(y))) return s;
        double sn = s - f / theta_prime(s);
        if (!(sn > lo && sn < hi)) sn = 0.5 * (lo + hi);
        if (sn == lo || sn == hi || sn == s) return s;
        if (theta(sn) > y)
            hi = sn;
        else
            lo = sn;
        s = sn;
    }
    return s;
}

double tau_domain_min() {
    static const double v = theta_branch_base() / kPi;
    return v;
}

double tau(double xi) {
    if (!(xi > tau_domain_min()))
        throw std::domain_error("tau: xi too small (theta branch undefined)");
    double s = theta_inverse(kPi * xi);
    return std::cbrt(s * s);
}

// ---- zero table ---------------------------------------------------------------

ZeroTable::ZeroTable(std::size_t m_max, double refinement_tol) : tol_(refinement_tol) {
    ensure(m_max);
}

void ZeroTable::ensure(std::size_t m_max) {
    if (m_max <= zeros_.size()) return;
    zeros_.reserve(m_max);
    for (std::size_t m = zeros_.size() + 1; m <= m_max; ++m)
        zeros_.push_back(airy_zero(static_cast<std::int64_t>(m), tol_));
}

double ZeroTable::t(std::size_t m) const {
    if (m < 1 || m > zeros_.size())
        throw std::out_of_range("ZeroTable: index " + std::to_string(m) + " outside table of size " +
                                std::to_string(zeros_.size()));
    return zeros_[m - 1];
}

double ZeroTable::t_extended(std::size_t m) const {
    if (m >= 1 && m <= zeros_.size()) return zeros_[m - 1];
    return airy_zero(static_cast<std::int64_t>(m), tol_);
}

}  // namespace friedlander::airy
