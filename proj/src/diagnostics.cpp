#include "jumpflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace jumpflow {

ControlBox default_control_box(const Shape& body, const Grid2D& grid, double inflate) {
    const double reach = body.kind == Shape::Kind::Circle ? body.radius : body.r0 + body.spike;
    const double dia = 2.0 * reach;
    const double sway = body.motion.moving() ? body.motion.a0 : 0.0;
    ControlBox b;
    b.xa = body.center.x - reach - inflate * dia;
    b.xb = body.center.x + reach + inflate * dia;
    b.ya = body.center.y - reach - sway - inflate * dia;
    b.yb = body.center.y + reach + sway + inflate * dia;
    // snap to grid lines
    auto snapx = [&](double x) { return grid.x(std::clamp((int)std::lround((x - grid.x0) / grid.h), 1, grid.m - 2)); };
    auto snapy = [&](double y) { return grid.y(std::clamp((int)std::lround((y - grid.y0) / grid.l), 1, grid.n - 2)); };
    b.xa = snapx(b.xa);
    b.xb = snapx(b.xb);
    b.ya = snapy(b.ya);
    b.yb = snapy(b.yb);
    return b;
}

ForceSample force_coefficients(const Grid2D& grid, const NodeClassification& cl,
                               const FlowState& now, const Field2D& prev_u, const Field2D& prev_v,
                               double dt, const ControlBox& box, double re) {
    const int ia = (int)std::lround((box.xa - grid.x0) / grid.h);
    const int ib = (int)std::lround((box.xb - grid.x0) / grid.h);
    const int ja = (int)std::lround((box.ya - grid.y0) / grid.l);
    const int jb = (int)std::lround((box.yb - grid.y0) / grid.l);
    if (ia < 1 || jb <= ja || ib <= ia || ib > grid.m - 2 || ja < 1 || jb > grid.n - 2)
        throw DiagnosticsError("force box touches the domain boundary");

    const Field2D& u = now.u;
    const Field2D& v = now.v;
    const Field2D& zeta = now.zeta;
    const double nu = 1.0 / re;

    auto solid = [&](int i, int j) { return cl.side[cl.idx(i, j)] < 0; };
    auto ut = [&](int i, int j) { return (u(i, j) - prev_u(i, j)) / dt; };
    auto vt = [&](int i, int j) { return (v(i, j) - prev_v(i, j)) / dt; };
    auto ux = [&](int i, int j) { return (u(i + 1, j) - u(i - 1, j)) / (2 * grid.h); };
    auto uy = [&](int i, int j) { return (u(i, j + 1) - u(i, j - 1)) / (2 * grid.l); };
    auto vx = [&](int i, int j) { return (v(i + 1, j) - v(i - 1, j)) / (2 * grid.h); };
    auto vy = [&](int i, int j) { return (v(i, j + 1) - v(i, j - 1)) / (2 * grid.l); };
    auto lap_u = [&](int i, int j) {
        return (u(i + 1, j) - 2 * u(i, j) + u(i - 1, j)) / (grid.h * grid.h) +
               (u(i, j + 1) - 2 * u(i, j) + u(i, j - 1)) / (grid.l * grid.l);
    };
    auto lap_v = [&](int i, int j) {
        return (v(i + 1, j) - 2 * v(i, j) + v(i - 1, j)) / (grid.h * grid.h) +
               (v(i, j + 1) - 2 * v(i, j) + v(i, j - 1)) / (grid.l * grid.l);
    };
    // body surface touching the box edge would break the momentum balance
    for (int i = ia; i <= ib; ++i)
        if (solid(i, ja) || solid(i, jb)) throw DiagnosticsError("force box touches the body");
    for (int j = ja; j <= jb; ++j)
        if (solid(ia, j) || solid(ib, j)) throw DiagnosticsError("force box touches the body");

    // area term: -2 ∬ (u_t, v_t) dA, solid interior contributes zero
    double ax = 0.0, ay = 0.0;
    for (int j = ja; j <= jb; ++j) {
        const double wy = (j == ja || j == jb) ? 0.5 : 1.0;
        for (int i = ia; i <= ib; ++i) {
            if (solid(i, j)) continue;
            const double wx = (i == ia || i == ib) ? 0.5 : 1.0;
            ax += wx * wy * ut(i, j);
            ay += wx * wy * vt(i, j);
        }
    }
    ax *= grid.h * grid.l;
    ay *= grid.h * grid.l;

    // dx integrand rows (C_D, C_L)
    auto fdx = [&](int i, int j, double& f1, double& f2) {
        const double x = grid.x(i), y = grid.y(j);
        f1 = (u(i, j) * v(i, j) + y * v(i, j) * zeta(i, j) - y * vt(i, j)) + nu * y * lap_u(i, j);
        f2 = (0.5 * (v(i, j) * v(i, j) - u(i, j) * u(i, j)) - x * v(i, j) * zeta(i, j) -
              x * ut(i, j)) -
             nu * (x * lap_u(i, j) + uy(i, j) + vx(i, j) + 2.0 * vy(i, j));
    };
    // dy integrand rows (C_D, C_L)
    auto fdy = [&](int i, int j, double& g1, double& g2) {
        const double x = grid.x(i), y = grid.y(j);
        g1 = (0.5 * (v(i, j) * v(i, j) - u(i, j) * u(i, j)) - y * u(i, j) * zeta(i, j) -
              y * vt(i, j)) +
             nu * (y * lap_v(i, j) + 2.0 * ux(i, j) + uy(i, j) + vx(i, j));
        g2 = (-u(i, j) * v(i, j) + x * u(i, j) * zeta(i, j) + x * ut(i, j)) - nu * x * lap_v(i, j);
    };

    // ∮ f dx = ∫_bottom - ∫_top ; ∮ g dy = ∫_right - ∫_left (counter-clockwise)
    double cd_dx = 0.0, cl_dx = 0.0, cd_dy = 0.0, cl_dy = 0.0;
    for (int i = ia; i <= ib; ++i) {
        const double w = ((i == ia || i == ib) ? 0.5 : 1.0) * grid.h;
        double f1, f2;
        fdx(i, ja, f1, f2);
        cd_dx += w * f1;
        cl_dx += w * f2;
        fdx(i, jb, f1, f2);
        cd_dx -= w * f1;
        cl_dx -= w * f2;
    }
    for (int j = ja; j <= jb; ++j) {
        const double w = ((j == ja || j == jb) ? 0.5 : 1.0) * grid.l;
        double g1, g2;
        fdy(ib, j, g1, g2);
        cd_dy += w * g1;
        cl_dy += w * g2;
        fdy(ia, j, g1, g2);
        cd_dy -= w * g1;
        cl_dy -= w * g2;
    }

    ForceSample s;
    s.t = now.t;
    s.cd = -2.0 * ax + 2.0 * cd_dx + 2.0 * cd_dy;
    s.cl = -2.0 * ay + 2.0 * cl_dx + 2.0 * cl_dy;
    return s;
}

std::vector<double> detrend(const std::vector<double>& series) {
    const size_t n = series.size();
    std::vector<double> out(series);
    if (n < 2) return out;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += i;
        sy += series[i];
        sxx += double(i) * i;
        sxy += i * series[i];
    }
    const double denom = n * sxx - sx * sx;
    const double slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
    const double icept = (sy - slope * sx) / n;
    for (size_t i = 0; i < n; ++i) out[i] -= icept + slope * i;
    return out;
}

namespace {

void fft_radix2(std::vector<std::complex<double>>& a) {
    const size_t n = a.size();
    if (n <= 1) return;
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * M_PI / (double)len;
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                const auto even = a[i + k];
                const auto odd = a[i + k + len / 2] * w;
                a[i + k] = even + odd;
                a[i + k + len / 2] = even - odd;
                w *= wl;
            }
        }
    }
}

} // namespace

std::vector<std::pair<double, double>> power_spectrum(const std::vector<double>& series,
                                                      double dt_sample) {
    const std::vector<double> d = detrend(series);
    size_t nfft = 1;
    while (nfft < d.size()) nfft <<= 1;
    nfft <<= 2; // zero-pad for frequency resolution
    std::vector<std::complex<double>> a(nfft, 0.0);
    for (size_t i = 0; i < d.size(); ++i) a[i] = d[i];
    fft_radix2(a);
    std::vector<std::pair<double, double>> out;
    out.reserve(nfft / 2);
    const double df = 1.0 / (double(nfft) * dt_sample);
    for (size_t k = 0; k <= nfft / 2; ++k)
        out.push_back({k * df, std::abs(a[k]) * 2.0 / (double)d.size()});
    return out;
}

std::optional<double> strouhal(const std::vector<double>& lift_series, double dt_sample,
                               double diameter, double u0) {
    if (lift_series.size() < 8) return std::nullopt;
    {
        const std::vector<double> d = detrend(lift_series);
        double rms = 0.0, base = 0.0;
        for (size_t k = 0; k < d.size(); ++k) {
            rms += d[k] * d[k];
            base += lift_series[k] * lift_series[k];
        }
        if (std::sqrt(rms) <= 1e-12 * std::max(1.0, std::sqrt(base))) return std::nullopt;
    }
    auto spec = power_spectrum(lift_series, dt_sample);
    // ignore DC; find the dominant bin
    size_t kpeak = 1;
    for (size_t k = 2; k + 1 < spec.size(); ++k)
        if (spec[k].second > spec[kpeak].second) kpeak = k;
    std::vector<double> mags;
    mags.reserve(spec.size() - 1);
    for (size_t k = 1; k < spec.size(); ++k) mags.push_back(spec[k].second);
    std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
    const double median = mags[mags.size() / 2];
    const double peak = spec[kpeak].second;
    double scale = 0.0;
    for (double x : lift_series) scale = std::max(scale, std::abs(x));
    if (peak < 1e-14 * std::max(1.0, scale) || peak < 3.0 * median) return std::nullopt;

    // parabolic interpolation around the peak bin
    double delta = 0.0;
    if (kpeak > 1 && kpeak + 1 < spec.size()) {
        const double ym = spec[kpeak - 1].second, y0 = spec[kpeak].second,
                     yp = spec[kpeak + 1].second;
        const double denom = ym - 2 * y0 + yp;
        if (denom != 0.0) delta = 0.5 * (ym - yp) / denom;
    }
    const double df = spec[1].first - spec[0].first;
    const double f = (kpeak + delta) * df;
    return f * diameter / u0;
}

StreaklineTracer::StreaklineTracer(std::vector<Point> seeds, double release_interval)
    : seeds_(std::move(seeds)), release_interval_(release_interval) {}

Point interpolate_velocity(const Grid2D& grid, const Field2D& u, const Field2D& v, double x,
                           double y) {
    double fx = (x - grid.x0) / grid.h;
    double fy = (y - grid.y0) / grid.l;
    fx = std::clamp(fx, 0.0, double(grid.m - 1));
    fy = std::clamp(fy, 0.0, double(grid.n - 1));
    const int i = std::min((int)fx, grid.m - 2);
    const int j = std::min((int)fy, grid.n - 2);
    const double ax = fx - i, ay = fy - j;
    auto lerp = [&](const Field2D& f) {
        return (1 - ax) * (1 - ay) * f(i, j) + ax * (1 - ay) * f(i + 1, j) +
               (1 - ax) * ay * f(i, j + 1) + ax * ay * f(i + 1, j + 1);
    };
    return {lerp(u), lerp(v)};
}

void StreaklineTracer::advance(const Grid2D& grid, const LevelSet& bodies, double t, double dt,
                               const Field2D& u, const Field2D& v) {
    while (t >= next_release_) {
        for (const Point& s : seeds_) tracers_.push_back({next_id_++, s.x, s.y, false, false});
        next_release_ += release_interval_;
    }
    for (Tracer& tr : tracers_) {
        if (tr.frozen || tr.retired) continue;
        const Point v1 = interpolate_velocity(grid, u, v, tr.x, tr.y);
        const double mx = tr.x + 0.5 * dt * v1.x;
        const double my = tr.y + 0.5 * dt * v1.y;
        const Point v2 = interpolate_velocity(grid, u, v, mx, my);
        tr.x += dt * v2.x;
        tr.y += dt * v2.y;
        if (tr.x < grid.x0 || tr.x > grid.xf || tr.y < grid.y0 || tr.y > grid.yf) {
            tr.retired = true;
            continue;
        }
        if (!bodies.empty() && bodies.phi(tr.x, tr.y, t + dt) < 0.0) tr.frozen = true;
    }
}

} // namespace jumpflow
