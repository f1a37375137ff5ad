#include "friedlander/trace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace friedlander::trace {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

// C-infinity step: 0 for u <= 0, 1 for u >= 1
double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    double a = std::exp(-1.0 / u);
    double b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}
}  // namespace

double ConePartition::psi(double x) const { return smooth_step(2.0 * x - 1.0); }

double ConePartition::chi(int j, double xi, double eta) const {
    double r = xi / eta;
    auto ramp = [this](double t) {
        return smooth_step((t - 0.5 * (1.0 - transition_width)) / transition_width);
    };
    double chi1 = 1.0 - ramp((r - 0.5 * kappa1) / (0.5 * kappa1));  // falls on [k1/2, k1]
    double chi3 = ramp((r - kappa2) / kappa2);                      // rises on [k2, 2 k2]
    switch (j) {
        case 1:
            return chi1;
        case 2:
            return 1.0 - chi1 - chi3;
        case 3:
            return chi3;
        default:
            throw std::domain_error("ConePartition::chi: sector index must be 1, 2 or 3");
    }
}

namespace {

struct KahanAccum {
    std::vector<double> re, im, cre, cim;
    explicit KahanAccum(std::size_t n) : re(n, 0), im(n, 0), cre(n, 0), cim(n, 0) {}
    void add(std::size_t i, double xre, double xim) {
        double y = xre - cre[i];
        double t = re[i] + y;
        cre[i] = (t - re[i]) - y;
        re[i] = t;
        y = xim - cim[i];
        t = im[i] + y;
        cim[i] = (t - im[i]) - y;
        im[i] = t;
    }
};

constexpr std::size_t kChunk = 1024;

// weighted phasor chunk advanced across the uniform t grid by per-point rotations
struct ChunkBuffer {
    alignas(64) double r[kChunk];
    alignas(64) double w[kChunk];
    std::size_t fill = 0;

    void flush(double t0, double dt, KahanAccum& acc) {
        if (fill == 0) return;
        double zre[kChunk], zim[kChunk], rre[kChunk], rim[kChunk];
        for (std::size_t j = 0; j < fill; ++j) {
            zre[j] = w[j] * std::cos(t0 * r[j]);
            zim[j] = w[j] * std::sin(t0 * r[j]);
            rre[j] = std::cos(dt * r[j]);
            rim[j] = std::sin(dt * r[j]);
        }
        std::size_t nt = acc.re.size();
        for (std::size_t i = 0; i < nt; ++i) {
            double sre = 0, sim = 0;
            for (std::size_t j = 0; j < fill; ++j) {
                sre += zre[j];
                sim += zim[j];
            }
            acc.add(i, sre, sim);
            if (i + 1 == nt) break;
            for (std::size_t j = 0; j < fill; ++j) {
                double a = zre[j] * rre[j] - zim[j] * rim[j];
                zim[j] = zre[j] * rim[j] + zim[j] * rre[j];
                zre[j] = a;
            }
        }
        fill = 0;
    }

    // general (non-uniform) grids: direct phases per sample
    void flush_general(const Eigen::ArrayXd& t, KahanAccum& acc) {
        for (std::size_t i = 0; i < static_cast<std::size_t>(t.size()); ++i) {
            double sre = 0, sim = 0;
            for (std::size_t j = 0; j < fill; ++j) {
                sre += w[j] * std::cos(t[static_cast<Eigen::Index>(i)] * r[j]);
                sim += w[j] * std::sin(t[static_cast<Eigen::Index>(i)] * r[j]);
            }
            acc.add(i, sre, sim);
        }
        if (t.size() > 0) fill = 0;
    }
};

struct GridShape {
    bool uniform = false;
    double t0 = 0, dt = 0;
};

GridShape analyze_grid(const Eigen::ArrayXd& t, double lambda_max) {
    GridShape g;
    if (t.size() == 0) throw std::domain_error("windowed_trace: empty t grid");
    g.t0 = t[0];
    if (t.size() == 1) {
        g.uniform = true;
        g.dt = 0;
        return g;
    }
    g.dt = t[1] - t[0];
    g.uniform = true;
    double scale = t.abs().maxCoeff() + 1.0;
    for (Eigen::Index i = 1; i + 1 < t.size(); ++i)
        if (std::abs(t[i + 1] - t[i] - g.dt) > 1e-12 * scale) g.uniform = false;
    // sampling-theorem guard for the mollified trace
    double spacing = std::abs(g.dt);
    for (Eigen::Index i = 1; i < t.size(); ++i)
        spacing = std::max(spacing, std::abs(t[i] - t[i - 1]));
    if (t.size() > 1 && spacing > kPi / (4.0 * lambda_max) * (1.0 + 1e-12))
        throw std::domain_error(
            "windowed_trace: t grid spacing exceeds the Nyquist bound pi/(4 Lambda)");
    return g;
}

}  // namespace

TraceResult windowed_trace(const TraceRequest& req, const airy::ZeroTable& zeros, Phase phase) {
    if (!(req.freq_cutoff > 0)) throw std::domain_error("windowed_trace: cutoff must be positive");
    const double lam = req.freq_cutoff;
    const bool gaussian = req.mollifier == Mollifier::gaussian_freq;
    const double radius = gaussian ? req.radius_factor * lam : lam;
    const double R2 = radius * radius;
    const int sector = static_cast<int>(req.sector);

    GridShape grid = analyze_grid(req.t_grid, lam);
    KahanAccum acc(static_cast<std::size_t>(req.t_grid.size()));
    ChunkBuffer buf;

    // largest m on the n = 1 column
    std::int64_t m_hi = 0, n_top = 0;
    if (phase == Phase::friedlander) {
        double t1 = zeros.t_extended(1);
        if (R2 > 1.0 + t1) {
            m_hi = airy::zero_count_below(R2 - 1.0);
            double an = std::floor(radius);
            while (an >= 1.0 && an * an + std::pow(an, 4.0 / 3.0) * t1 > R2) an -= 1.0;
            n_top = static_cast<std::int64_t>(an);
        }
    } else {
        m_hi = static_cast<std::int64_t>(std::floor(std::sqrt(std::max(R2 - 1.0, 0.0))));
        n_top = m_hi;
    }

    std::vector<double> n43(static_cast<std::size_t>(n_top) + 1, 0.0);
    for (std::int64_t n = 1; n <= n_top; ++n)
        n43[static_cast<std::size_t>(n)] = std::pow(static_cast<double>(n), 4.0 / 3.0);

    const ConePartition& cone = req.cone;
    std::int64_t count = 0;
    std::int64_t n_cur = n_top;
    double inv_lam2 = 1.0 / (lam * lam);

    for (std::int64_t m = 1; m <= m_hi && n_cur >= 1; ++m) {
        double tm = phase == Phase::friedlander ? zeros.t_extended(static_cast<std::size_t>(m)) : 0.0;
        double dm = static_cast<double>(m);
        auto lambda_of = [&](std::int64_t n) {
            double dn = static_cast<double>(n);
            return phase == Phase::friedlander ? dn * dn + n43[static_cast<std::size_t>(n)] * tm
                                               : dn * dn + dm * dm;
        };
        while (n_cur >= 1 && lambda_of(n_cur) > R2) --n_cur;
        for (std::int64_t n = 1; n <= n_cur; ++n) {
            double lambda = lambda_of(n);
            double r = std::sqrt(lambda);
            double w = gaussian ? std::exp(-lambda * inv_lam2) : 1.0;
            w *= cone.psi(dm) * cone.psi(static_cast<double>(n));
            if (sector != 0) w *= cone.chi(sector, dm, static_cast<double>(n));
            if (w == 0.0) continue;
            ++count;
            buf.r[buf.fill] = r;
            buf.w[buf.fill] = 2.0 * w;  // +-n symmetry
            if (++buf.fill == kChunk) {
                if (grid.uniform)
                    buf.flush(grid.t0, grid.dt, acc);
                else
                    buf.flush_general(req.t_grid, acc);
            }
        }
    }
    if (grid.uniform)
        buf.flush(grid.t0, grid.dt, acc);
    else
        buf.flush_general(req.t_grid, acc);

    TraceResult out;
    out.values.resize(req.t_grid.size());
    for (Eigen::Index i = 0; i < req.t_grid.size(); ++i)
        out.values[i] = {acc.re[static_cast<std::size_t>(i)], acc.im[static_cast<std::size_t>(i)]};
    out.lattice_count = count;
    out.cutoff_used = radius;
    return out;
}

TraceResult sector_trace(int j, TraceRequest req, const airy::ZeroTable& zeros) {
    if (j < 1 || j > 3) throw std::domain_error("sector_trace: j must be 1, 2 or 3");
    req.sector = static_cast<Sector>(j);
    return windowed_trace(req, zeros);
}

// ---- Poisson --------------------------------------------------------------

PoissonCheck poisson_check(const PoissonTestFunction& fn) {
    auto ring_max = [&](const std::function<double(double, double)>& f, double R) {
        double worst = 0;
        for (double s = -R; s <= R; s += 1.0) {
            worst = std::max({worst, std::abs(f(s, R)), std::abs(f(s, -R)), std::abs(f(R, s)),
                              std::abs(f(-R, s))});
        }
        return worst;
    };
    double R = std::ceil(fn.radius);
    if (ring_max(fn.g, R) > 1e-16 || ring_max(fn.g_hat, R) > 1e-16)
        throw std::domain_error("poisson_check: test function decays too slowly for radius " +
                                std::to_string(R));

    auto lattice_sum = [&](const std::function<double(double, double)>& f) {
        double sum = 0, comp = 0;
        auto n = static_cast<std::int64_t>(R);
        for (std::int64_t i = -n; i <= n; ++i) {
            for (std::int64_t j = -n; j <= n; ++j) {
                double y = f(static_cast<double>(i), static_cast<double>(j)) - comp;
                double t = sum + y;
                comp = (t - sum) - y;
                sum = t;
            }
        }
        return sum;
    };
    PoissonCheck out;
    out.lhs = lattice_sum(fn.g);
    out.rhs = lattice_sum(fn.g_hat);
    out.gap = std::abs(out.lhs - out.rhs);
    return out;
}

PoissonTestFunction gaussian_self_dual() {
    auto g = [](double x, double y) { return std::exp(-kPi * (x * x + y * y)); };
    return {"gaussian", g, g, 8.0};
}

PoissonTestFunction shifted_gaussian(double a) {
    return {"shifted_gaussian",
            [a](double x, double y) { return std::exp(-kPi * ((x - a) * (x - a) + y * y)); },
            // e^{-2 pi i p a} phase; the imaginary part cancels under p -> -p
            [a](double p, double q) {
                return std::cos(2.0 * kPi * p * a) * std::exp(-kPi * (p * p + q * q));
            },
            8.0 + std::abs(a)};
}

PoissonTestFunction anisotropic_gaussian() {
    return {"anisotropic_gaussian",
            [](double x, double y) { return std::exp(-kPi * (4.0 * x * x + 0.25 * y * y)); },
            [](double p, double q) { return std::exp(-kPi * (0.25 * p * p + 4.0 * q * q)); },
            16.0};
}

// ---- peaks ------------------------------------------------------------------

std::vector<Peak> detect_peaks(const Eigen::ArrayXd& t_grid, const Eigen::ArrayXd& abs_values,
                               double floor_factor) {
    if (t_grid.size() != abs_values.size())
        throw std::domain_error("detect_peaks: grid/value size mismatch");
    std::vector<double> sorted(abs_values.data(), abs_values.data() + abs_values.size());
    std::sort(sorted.begin(), sorted.end());
    double median = sorted.empty() ? 0.0 : sorted[sorted.size() / 2];
    double floor = floor_factor * median;

    std::vector<Peak> peaks;
    for (Eigen::Index i = 1; i + 1 < abs_values.size(); ++i) {
        double y0 = abs_values[i - 1], y1 = abs_values[i], y2 = abs_values[i + 1];
        if (y1 > y0 && y1 >= y2 && y1 > floor) {
            // parabolic refinement of the vertex
            double denom = y0 - 2.0 * y1 + y2;
            double shift = denom != 0.0 ? 0.5 * (y0 - y2) / denom : 0.0;
            shift = std::clamp(shift, -0.5, 0.5);
            double h = t_grid[i + 1] - t_grid[i];
            peaks.push_back({t_grid[i] + shift * h, y1});
        }
    }
    return peaks;
}

std::vector<PeakMatch> match_peaks(const std::vector<Peak>& peaks,
                                   const geodesics::LengthSpectrumTable& table, double tol) {
    std::vector<PeakMatch> out;
    for (const auto& p : peaks) {
        PeakMatch m;
        m.t_peak = p.t;
        m.height = p.height;
        double best = tol;
        for (const auto& g : table.entries) {
            double off = p.t - g.length;
            if (std::abs(off) <= best) {
                best = std::abs(off);
                m.k = g.k;
                m.ell = g.ell;
                m.offset = off;
            }
        }
        out.push_back(m);
    }
    return out;
}

// ---- one-sided smoothness diagnostic ---------------------------------------

namespace {

// max second-difference quotient of Re Z over grid samples inside [lo, hi]
double window_metric(const Eigen::ArrayXd& t, const TraceResult& z, double lo, double hi,
                     double h) {
    double worst = 0;
    for (Eigen::Index i = 1; i + 1 < z.values.size(); ++i) {
        if (t[i] < lo - 1e-12 || t[i] > hi + 1e-12) continue;
        double d2 =
            (z.values[i - 1].real() - 2.0 * z.values[i].real() + z.values[i + 1].real()) / (h * h);
        worst = std::max(worst, std::abs(d2));
    }
    return worst;
}

}  // namespace

std::vector<AsymmetryRow> smoothness_asymmetry(int ell, double delta,
                                               const std::vector<double>& cutoffs,
                                               const airy::ZeroTable& zeros, Phase phase) {
    if (ell < 1) throw std::domain_error("smoothness_asymmetry: ell >= 1 required");
    if (!(delta > 0)) throw std::domain_error("smoothness_asymmetry: delta > 0 required");
    for (std::size_t i = 1; i < cutoffs.size(); ++i)
        if (cutoffs[i] <= cutoffs[i - 1])
            throw std::domain_error("smoothness_asymmetry: cutoffs must increase");

    if (phase == Phase::friedlander) {
        // the window must sit inside the verified gap above 2 pi ell
        auto table = geodesics::length_spectrum(200, ell + 4);
        if (delta >= geodesics::gap_below(ell, table))
            throw std::domain_error("smoothness_asymmetry: delta exceeds the verified gap");
    }

    double center = 2.0 * kPi * ell;
    std::vector<AsymmetryRow> rows;
    for (double lam : cutoffs) {
        double h = 1.0 / (4.0 * lam);
        TraceRequest req;
        req.freq_cutoff = lam;
        // second differences amplify the truncated tail by sqrt(lambda)^2, so
        // the lattice must extend until the window weight is ~e^{-36}
        req.radius_factor = 6.0;
        // one uniform grid spanning both windows; the middle is just unused
        auto n = static_cast<Eigen::Index>(std::ceil(2.0 * (delta + h) / h)) + 1;
        req.t_grid =
            Eigen::ArrayXd::LinSpaced(n, center - delta - h,
                                      center - delta - h + h * static_cast<double>(n - 1));
        TraceResult z = windowed_trace(req, zeros, phase);
        AsymmetryRow row;
        row.cutoff = lam;
        row.left_metric = window_metric(req.t_grid, z, center - delta, center - delta / 8.0, h);
        row.right_metric = window_metric(req.t_grid, z, center + delta / 8.0, center + delta, h);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace friedlander::trace
