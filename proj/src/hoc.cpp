#include "jumpflow/hoc.hpp"

#include <cmath>

namespace jumpflow {

StencilCoefficients stencil_coefficients(const CoeffSample& s, double h, double l) {
    if (std::abs(s.beta) < 1e-14) throw HocError("stencil_coefficients: singular diffusion coefficient");
    const double h12 = h * h / 12.0;
    const double l12 = l * l / 12.0;
    const double gx = (s.c - 2.0 * s.beta_x) / s.beta;
    const double gy = (s.d - 2.0 * s.beta_y) / s.beta;

    StencilCoefficients sc;
    sc.a = s.beta + h12 * (s.beta_xx + 2.0 * s.c_x + s.kappa + gx * (s.beta_x + s.c)) +
           l12 * (s.beta_yy + s.beta_y * gy);
    sc.b = s.beta + h12 * (s.beta_xx + s.beta_x * gx) +
           l12 * (s.beta_yy + 2.0 * s.d_y + s.kappa + gy * (s.beta_y + s.d));
    sc.c = s.c + h12 * (s.c_xx + 2.0 * s.kappa_x + gx * (s.c_x + s.kappa)) +
           l12 * (s.c_yy + s.c_y * gy);
    sc.d = s.d + h12 * (s.d_xx + s.d_x * gx) +
           l12 * (s.d_yy + 2.0 * s.kappa_y + gy * (s.d_y + s.kappa));
    sc.e = s.beta * (h12 + l12);
    sc.h = s.c * (h12 + l12);
    sc.k = s.d * (h12 + l12);
    sc.l = h12 * (2.0 * s.d_x + s.d * gx) + l12 * (2.0 * s.c_y + s.c * gy);
    sc.m = s.kappa + h12 * (s.kappa_xx + s.kappa_x * gx) + l12 * (s.kappa_yy + s.kappa_y * gy);
    sc.f = s.f + h12 * (s.f_xx + s.f_x * gx) + l12 * (s.f_yy + s.f_y * gy);
    return sc;
}

std::array<double, 9> spatial_weights(const StencilCoefficients& sc, double h, double l) {
    const double h2 = h * h, l2 = l * l;
    std::array<double, 9> n{};
    n[slot_of(0, 0)] = -2.0 * sc.a / h2 - 2.0 * sc.b / l2 + 4.0 * sc.e / (h2 * l2) + sc.m;
    n[slot_of(1, 0)] = sc.a / h2 + sc.c / (2 * h) - 2.0 * sc.e / (h2 * l2) - sc.h / (h * l2);
    n[slot_of(-1, 0)] = sc.a / h2 - sc.c / (2 * h) - 2.0 * sc.e / (h2 * l2) + sc.h / (h * l2);
    n[slot_of(0, 1)] = sc.b / l2 + sc.d / (2 * l) - 2.0 * sc.e / (h2 * l2) - sc.k / (h2 * l);
    n[slot_of(0, -1)] = sc.b / l2 - sc.d / (2 * l) - 2.0 * sc.e / (h2 * l2) + sc.k / (h2 * l);
    n[slot_of(1, 1)] = sc.e / (h2 * l2) + sc.h / (2 * h * l2) + sc.k / (2 * h2 * l) + sc.l / (4 * h * l);
    n[slot_of(-1, 1)] = sc.e / (h2 * l2) - sc.h / (2 * h * l2) + sc.k / (2 * h2 * l) - sc.l / (4 * h * l);
    n[slot_of(1, -1)] = sc.e / (h2 * l2) + sc.h / (2 * h * l2) - sc.k / (2 * h2 * l) - sc.l / (4 * h * l);
    n[slot_of(-1, -1)] = sc.e / (h2 * l2) - sc.h / (2 * h * l2) - sc.k / (2 * h2 * l) + sc.l / (4 * h * l);
    return n;
}

std::array<double, 9> mass_weights(const CoeffSample& s, double h, double l) {
    if (std::abs(s.beta) < 1e-14) throw HocError("mass_weights: singular diffusion coefficient");
    const double gx = (s.c - 2.0 * s.beta_x) / s.beta;
    const double gy = (s.d - 2.0 * s.beta_y) / s.beta;
    std::array<double, 9> m{};
    m[slot_of(0, 0)] = 8.0 / 12.0;
    m[slot_of(1, 0)] = (1.0 + 0.5 * h * gx) / 12.0;
    m[slot_of(-1, 0)] = (1.0 - 0.5 * h * gx) / 12.0;
    m[slot_of(0, 1)] = (1.0 + 0.5 * l * gy) / 12.0;
    m[slot_of(0, -1)] = (1.0 - 0.5 * l * gy) / 12.0;
    return m;
}

HocRow assemble_regular_row(const std::array<double, 9>& mass, const std::array<double, 9>& spatial,
                            double lambda, double dt) {
    if (dt <= 0.0) throw HocError("assemble_regular_row: nonpositive time step");
    HocRow row;
    for (int s = 0; s < 9; ++s) {
        row.implicit_w[s] = lambda * mass[s] - 0.5 * dt * spatial[s];
        row.explicit_w[s] = lambda * mass[s] + 0.5 * dt * spatial[s];
    }
    return row;
}

void hoc_velocity(const std::array<double, 9>& psi, const std::array<double, 9>& zeta,
                  double h, double l, double& u, double& v) {
    const auto p = [&](int di, int dj) { return psi[slot_of(di, dj)]; };
    const auto z = [&](int di, int dj) { return zeta[slot_of(di, dj)]; };
    const double dy_psi = (p(0, 1) - p(0, -1)) / (2 * l);
    const double dx_psi = (p(1, 0) - p(-1, 0)) / (2 * h);
    const double dy_zeta = (z(0, 1) - z(0, -1)) / (2 * l);
    const double dx_zeta = (z(1, 0) - z(-1, 0)) / (2 * h);
    // δx²δy ψ and δxδy² ψ
    const double dxxdy = ((p(1, 1) - 2 * p(0, 1) + p(-1, 1)) - (p(1, -1) - 2 * p(0, -1) + p(-1, -1))) /
                         (2 * l * h * h);
    const double dxdyy = ((p(1, 1) - 2 * p(1, 0) + p(1, -1)) - (p(-1, 1) - 2 * p(-1, 0) + p(-1, -1))) /
                         (2 * h * l * l);
    u = dy_psi + (l * l / 6.0) * (dy_zeta + dxxdy);
    v = -dx_psi - (h * h / 6.0) * (dx_zeta + dxdyy);
}

} // namespace jumpflow
