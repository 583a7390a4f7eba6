#pragma once

#include <array>
#include <stdexcept>

namespace jumpflow {

struct HocError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// 3x3 stencil slot layout, x fastest: slot = (dj+1)*3 + (di+1).
/// 0:SW 1:S 2:SE 3:W 4:C 5:E 6:NW 7:N 8:NE
constexpr int slot_of(int di, int dj) { return (dj + 1) * 3 + (di + 1); }
constexpr int kCenterSlot = 4;
constexpr std::array<int, 9> kSlotDi = {-1, 0, 1, -1, 0, 1, -1, 0, 1};
constexpr std::array<int, 9> kSlotDj = {-1, -1, -1, 0, 0, 0, 1, 1, 1};

/// Pointwise samples of the coefficients of
///   λ u_t = β ∇²u + c u_x + d u_y + κ u + f
/// together with the partial derivatives entering the compact scheme.
struct CoeffSample {
    double beta = 1.0, beta_x = 0.0, beta_y = 0.0, beta_xx = 0.0, beta_yy = 0.0;
    double c = 0.0, c_x = 0.0, c_y = 0.0, c_xx = 0.0, c_yy = 0.0;
    double d = 0.0, d_x = 0.0, d_y = 0.0, d_xx = 0.0, d_yy = 0.0;
    double kappa = 0.0, kappa_x = 0.0, kappa_y = 0.0, kappa_xx = 0.0, kappa_yy = 0.0;
    double f = 0.0, f_x = 0.0, f_y = 0.0, f_xx = 0.0, f_yy = 0.0;
};

/// The nine spatial-operator coefficients plus the source combination F.
struct StencilCoefficients {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0, e = 0.0;
    double h = 0.0, k = 0.0, l = 0.0, m = 0.0;
    double f = 0.0;
};

StencilCoefficients stencil_coefficients(const CoeffSample& s, double h, double l);

/// Node weights of the compact spatial operator
///   A δx² + B δy² + C δx + D δy + E δx²δy² + H δxδy² + K δx²δy + L δxδy + M.
std::array<double, 9> spatial_weights(const StencilCoefficients& sc, double h, double l);

/// Node weights of the compact "mass" operator
///   1 + (h²/12)(δx² + gx δx) + (l²/12)(δy² + gy δy),
/// gx = (c-2β_x)/β, gy = (d-2β_y)/β.
std::array<double, 9> mass_weights(const CoeffSample& s, double h, double l);

/// One Crank-Nicolson row of the (9,9) scheme:
/// Σ cᵢ u^{n+1} = Σ c'ᵢ u^n + (Δt/2)(F^{n+1} + F^n), cᵢ = λmᵢ − (Δt/2)nᵢ,
/// c'ᵢ = λmᵢ + (Δt/2)nᵢ.
struct HocRow {
    std::array<double, 9> implicit_w{};
    std::array<double, 9> explicit_w{};
};

HocRow assemble_regular_row(const std::array<double, 9>& mass, const std::array<double, 9>& spatial,
                            double lambda, double dt);

/// Fourth-order velocity recovery from 3x3 neighbourhoods of ψ and ζ:
///   u =  δyψ + (l²/6)(δyζ + δx²δyψ)
///   v = -δxψ - (h²/6)(δxζ + δxδy²ψ)
void hoc_velocity(const std::array<double, 9>& psi, const std::array<double, 9>& zeta,
                  double h, double l, double& u, double& v);

} // namespace jumpflow
