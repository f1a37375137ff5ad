#include "friedlander/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace friedlander::geodesics {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

double energy(const PhasePoint& p) { return p.xi * p.xi + (1.0 + p.x) * p.eta * p.eta; }

FreeFlight free_flight(const PhasePoint& start) {
    if (std::abs(start.x) > 1e-12)
        throw std::domain_error("free_flight: start must lie on the boundary x = 0");
    if (!(start.xi > 0)) throw std::domain_error("free_flight: xi0 > 0 required");
    if (std::abs(energy(start) - 1.0) > 1e-12)
        throw std::domain_error("free_flight: unit energy required");
    if (start.eta == 0.0)
        throw NoReflectionError("free_flight: eta0 = 0 escapes to x = infinity");

    double xi = start.xi, eta = start.eta;
    FreeFlight f;
    f.T = 4.0 * xi / (eta * eta);
    f.delta_y = 4.0 * xi / eta + (8.0 / 3.0) * xi * xi * xi / (eta * eta * eta);
    f.caustic_height = xi * xi / (eta * eta);
    f.endpoint = {0.0, start.y + f.delta_y, -xi, eta};
    return f;
}

namespace {

// state (x, y, xi); eta is conserved by the flow
struct State {
    double x, y, xi;
};

State rhs(const State& s, double eta) { return {s.xi, (1.0 + s.x) * eta, -0.5 * eta * eta}; }

State axpy(const State& a, double h, const State& b) {
    return {a.x + h * b.x, a.y + h * b.y, a.xi + h * b.xi};
}

// Cash-Karp embedded pair; the flow is polynomial in t, so the error estimate
// measures roundoff only and steps stay near h_max
struct RkStep {
    State next;
    double err;
};

RkStep rk45(const State& s, double eta, double h) {
    State k1 = rhs(s, eta);
    State k2 = rhs(axpy(s, h * 0.2, k1), eta);
    State k3 = rhs(axpy(axpy(s, h * 3.0 / 40.0, k1), h * 9.0 / 40.0, k2), eta);
    State k4 = rhs(axpy(axpy(axpy(s, h * 0.3, k1), h * -0.9, k2), h * 1.2, k3), eta);
    State k5 = rhs(axpy(axpy(axpy(axpy(s, h * -11.0 / 54.0, k1), h * 2.5, k2), h * -70.0 / 27.0, k3),
                        h * 35.0 / 27.0, k4),
                   eta);
    State k6 = rhs(axpy(axpy(axpy(axpy(axpy(s, h * 1631.0 / 55296.0, k1), h * 175.0 / 512.0, k2),
                                  h * 575.0 / 13824.0, k3),
                             h * 44275.0 / 110592.0, k4),
                        h * 253.0 / 4096.0, k5),
                   eta);
    State y5 = s;
    y5 = axpy(y5, h * 37.0 / 378.0, k1);
    y5 = axpy(y5, h * 250.0 / 621.0, k3);
    y5 = axpy(y5, h * 125.0 / 594.0, k4);
    y5 = axpy(y5, h * 512.0 / 1771.0, k6);
    State y4 = s;
    y4 = axpy(y4, h * 2825.0 / 27648.0, k1);
    y4 = axpy(y4, h * 18575.0 / 48384.0, k3);
    y4 = axpy(y4, h * 13525.0 / 55296.0, k4);
    y4 = axpy(y4, h * 277.0 / 14336.0, k5);
    y4 = axpy(y4, h * 0.25, k6);
    double err = std::max({std::abs(y5.x - y4.x), std::abs(y5.y - y4.y), std::abs(y5.xi - y4.xi)});
    return {y5, err};
}

}  // namespace

FlowResult integrate_flow(PhasePoint start, double t_end, bool reflect) {
    if (std::abs(energy(start) - 1.0) > 1e-12)
        throw std::domain_error("integrate_flow: unit energy required");
    if (!(t_end > 0)) throw std::domain_error("integrate_flow: t_end > 0 required");

    const double tol = 1e-12;
    const double h_max = 0.1;
    double eta = start.eta;
    State s{start.x, start.y, start.xi};
    double t = 0.0, h = 1e-3;

    FlowResult out;
    out.samples.push_back({0.0, start});

    while (t_end - t > 1e-13 * (1.0 + t_end)) {
        h = std::min(h, t_end - t);
        RkStep step = rk45(s, eta, h);
        if (step.err > tol) {
            if (h <= 1e-10)
                throw std::runtime_error("integrate_flow: step underflow near tangential reflection");
            h *= 0.5;
            continue;
        }
        if (step.next.x < 0.0) {
            // locate the boundary crossing by bisection on the step length
            double lo = 0.0, hi = h;
            for (int i = 0; i < 80 && hi - lo > 1e-15 * std::max(1.0, h); ++i) {
                double mid = 0.5 * (lo + hi);
                if (rk45(s, eta, mid).next.x < 0.0)
                    hi = mid;
                else
                    lo = mid;
            }
            RkStep hit = rk45(s, eta, lo);
            t += lo;
            s = hit.next;
            s.x = 0.0;
            if (!reflect) {
                out.samples.push_back({t, {s.x, s.y, s.xi, eta}});
                break;
            }
            s.xi = -s.xi;  // reflection law: x-velocity flips, y-velocity continuous
            ++out.reflections;
        } else {
            t += h;
            s = step.next;
            h = std::min(2.0 * h, h_max);
        }
        out.samples.push_back({t, {s.x, s.y, s.xi, eta}});
        out.max_energy_drift = std::max(
            out.max_energy_drift, std::abs(energy({s.x, s.y, s.xi, eta}) - 1.0));
    }
    return out;
}

namespace {

// launch-direction equation in xi = xi0: decreasing bijection (0,1) -> (0,inf)
// equal to the ratio of the two closure conditions
double ratio_eq(double xi) {
    double eta2 = (1.0 - xi) * (1.0 + xi);
    double eta = std::sqrt(eta2);
    return 3.0 * eta2 * eta / ((eta2 + 2.0) * xi);
}

}  // namespace

ClosedGeodesic closed_geodesic(int k, int ell) {
    if (k < 1 || ell < 1) throw std::domain_error("closed_geodesic: k, ell >= 1 required");
    double target = 2.0 * static_cast<double>(k) / (kPi * static_cast<double>(ell));

    double a = 1e-300, b = 1.0;
    for (int i = 0; i < 2000; ++i) {
        double mid = 0.5 * (a + b);
        if (mid == a || mid == b) break;
        if (ratio_eq(mid) > target)
            a = mid;  // ratio decreasing in xi: root lies right of mid
        else
            b = mid;
    }
    double xi0 = 0.5 * (a + b);
    double eta0 = std::sqrt((1.0 - xi0) * (1.0 + xi0));
    double L = 6.0 * kPi * static_cast<double>(ell) * eta0 / (eta0 * eta0 + 2.0);

    ClosedGeodesic g;
    g.k = k;
    g.ell = ell;
    g.xi0 = xi0;
    g.eta0 = eta0;
    g.length = L;
    g.residual1 = std::abs(L * eta0 * eta0 / xi0 - 4.0 * k) / (4.0 * k);
    g.residual2 =
        std::abs(L * (eta0 / 3.0 + 2.0 / (3.0 * eta0)) - 2.0 * kPi * ell) / (2.0 * kPi * ell);
    return g;
}

LengthSpectrumTable length_spectrum(int k_max, int ell_max) {
    if (k_max < 1 || ell_max < 1) throw std::domain_error("length_spectrum: bounds >= 1 required");
    LengthSpectrumTable table;
    table.k_max = k_max;
    table.ell_max = ell_max;
    table.entries.reserve(static_cast<std::size_t>(k_max) * ell_max);
    for (int ell = 1; ell <= ell_max; ++ell)
        for (int k = 1; k <= k_max; ++k) table.entries.push_back(closed_geodesic(k, ell));
    std::sort(table.entries.begin(), table.entries.end(),
              [](const ClosedGeodesic& x, const ClosedGeodesic& y) {
                  if (x.length != y.length) return x.length < y.length;
                  if (x.ell != y.ell) return x.ell < y.ell;
                  return x.k < y.k;
              });
    return table;
}

double gap_below(int ell, const LengthSpectrumTable& table) {
    double threshold = 2.0 * kPi * ell;
    double best = -1.0;
    for (const auto& g : table.entries)
        if (g.length > threshold) {
            best = g.length - threshold;
            break;  // sorted
        }
    if (best < 0)
        throw TableExhaustedError("gap_below: no table entry above 2 pi ell for ell = " +
                                  std::to_string(ell) + "; extend the table");
    return best;
}

}  // namespace friedlander::geodesics
