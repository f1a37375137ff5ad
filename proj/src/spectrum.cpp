#include "friedlander/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace friedlander::spectrum {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

double abs_n_pow(std::int64_t n, double p) { return std::pow(std::abs(static_cast<double>(n)), p); }
}  // namespace

SpectralPoint eigenvalue(std::int64_t m, std::int64_t n, const airy::ZeroTable& zeros) {
    if (m < 1) throw std::domain_error("eigenvalue: m >= 1 required");
    if (n == 0) throw std::domain_error("eigenvalue: n != 0 required");
    double tm = zeros.t(static_cast<std::size_t>(m));
    double an = std::abs(static_cast<double>(n));
    double lambda = an * an + abs_n_pow(n, 4.0 / 3.0) * tm;
    return {m, n, lambda, std::sqrt(lambda)};
}

BohrSommerfeldPoint bohr_sommerfeld(std::int64_t m, std::int64_t n) {
    if (m < 1) throw std::domain_error("bohr_sommerfeld: m >= 1 required");
    if (n == 0) throw std::domain_error("bohr_sommerfeld: n != 0 required");
    static const double kBs = std::pow(1.5 * kPi, 2.0 / 3.0);
    double an = std::abs(static_cast<double>(n));
    double Lambda = an * an + kBs * std::pow(static_cast<double>(m), 2.0 / 3.0) * abs_n_pow(n, 4.0 / 3.0);
    return {m, n, Lambda};
}

ActionPoint actions_from_energy(double H, double J) {
    if (!(H > 0) || !(std::abs(J) > 0) || !(std::abs(J) < H))
        throw std::domain_error("actions_from_energy: need 0 < |J| < H");
    double I1 = (4.0 / 3.0) * std::pow(H * H - J * J, 1.5) / (J * J);
    double I2 = 2.0 * kPi * J;
    return {H, J, I1, I2};
}

double energy_sq_from_actions(double I1, double I2) {
    if (!(I1 >= 0)) throw std::domain_error("energy_sq_from_actions: I1 >= 0 required");
    double J2 = I2 * I2 / (4.0 * kPi * kPi);
    double w = 3.0 * I1 * I2 * I2 / (16.0 * kPi * kPi);
    return J2 + std::cbrt(w * w);
}

std::complex<double> eigenfunction_eval(std::int64_t m, std::int64_t n, double x, double y,
                                        const airy::ZeroTable& zeros) {
    if (x < 0) throw std::domain_error("eigenfunction_eval: x >= 0 required");
    double tm = zeros.t(static_cast<std::size_t>(m));
    double amp = airy::airy_ai(abs_n_pow(n, 2.0 / 3.0) * x - tm).ai;
    double ny = static_cast<double>(n) * y;
    return {amp * std::cos(ny), amp * std::sin(ny)};
}

WkbResidual wkb_phase_residual(std::int64_t m, std::int64_t n, const std::vector<double>& x_grid,
                               const airy::ZeroTable& zeros, double caustic_margin) {
    if (x_grid.empty()) throw std::domain_error("wkb_phase_residual: empty grid");
    double tm = zeros.t(static_cast<std::size_t>(m));
    double n23 = abs_n_pow(n, 2.0 / 3.0);
    double Sm = airy::airy_zero_seed(m);  // (3 pi m / 2)^{2/3}

    std::vector<double> wrapped;
    wrapped.reserve(x_grid.size());
    for (double x : x_grid) {
        if (x < 0) throw std::domain_error("wkb_phase_residual: grid point x < 0");
        double u = n23 * x;
        if (u > (1.0 - caustic_margin) * tm)
            throw std::domain_error("wkb_phase_residual: grid point too close to the caustic");
        double exact = (2.0 / 3.0) * std::pow(tm - u, 1.5);
        double wkb = (2.0 / 3.0) * std::pow(Sm - u, 1.5);
        double r = std::fmod(exact - wkb, 2.0 * kPi);
        if (r < 0) r += 2.0 * kPi;
        wrapped.push_back(r);
    }
    std::sort(wrapped.begin(), wrapped.end());

    // minimal enclosing arc on the circle: complement of the largest gap
    double best_gap = wrapped.front() + 2.0 * kPi - wrapped.back();
    double arc_start = wrapped.back();  // arc covering all points begins after the gap
    for (std::size_t i = 1; i < wrapped.size(); ++i) {
        double gap = wrapped[i] - wrapped[i - 1];
        if (gap > best_gap) {
            best_gap = gap;
            arc_start = wrapped[i - 1];
        }
    }
    double arc_len = 2.0 * kPi - best_gap;
    double center = arc_start + best_gap + 0.5 * arc_len;  // mid of the covering arc
    center = std::fmod(center, 2.0 * kPi);
    if (center > kPi) center -= 2.0 * kPi;
    return {0.5 * arc_len, center};
}

std::vector<SpectralPoint> enumerate_below(double E, airy::ZeroTable& zeros) {
    std::vector<SpectralPoint> out;
    if (!(E > 0)) return out;
    for (std::int64_t n = 1; static_cast<double>(n) * static_cast<double>(n) < E; ++n) {
        double an = static_cast<double>(n);
        double rem = (E - an * an) / std::pow(an, 4.0 / 3.0);
        std::int64_t m_hi = airy::zero_count_below(rem);
        if (m_hi < 1) continue;
        if (zeros.size() < static_cast<std::size_t>(m_hi))
            zeros.ensure(static_cast<std::size_t>(std::max<std::int64_t>(m_hi, 64)));
        for (std::int64_t m = 1; m <= m_hi; ++m) {
            SpectralPoint p = eigenvalue(m, n, zeros);
            if (p.lambda > E) break;  // zero_count estimate was one high at the edge
            out.push_back({m, -n, p.lambda, p.sqrt_lambda});
            out.push_back(p);
        }
    }
    std::sort(out.begin(), out.end(), [](const SpectralPoint& a, const SpectralPoint& b) {
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        if (a.m != b.m) return a.m < b.m;
        return a.n < b.n;
    });
    return out;
}

}  // namespace friedlander::spectrum
