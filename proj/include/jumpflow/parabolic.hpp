#pragma once

#include <functional>
#include <optional>

#include "jumpflow/field.hpp"
#include "jumpflow/geometry.hpp"
#include "jumpflow/jumps.hpp"

namespace jumpflow {

/// Transient diffusion interface problem with the separable analytic solution
/// (Test Case 1): u = e^{-tνπ²(kx²+ky²)} cos(kxπx) cos(kyπy) on Ω⁺, 0 on Ω⁻.
struct ParabolicCase {
    Grid2D grid;
    LevelSet interface;
    double nu = 1.0 / 200.0;
    double kx = 2.0, ky = 2.0;
    double dt = 1e-3;
    double t_end = 2.5;
    int korder = 3; // jump expansion order k ∈ {2, 3}
    double solver_tol = 1e-13;
};

ParabolicCase default_parabolic_case(int n);

double analytic_u(double x, double y, double t, const ParabolicCase& c);

/// Axis derivative-jump tensor of the analytic solution at a point on Γ.
DerivTensor analytic_jump_tensor(double x, double y, double t, const ParabolicCase& c);

/// Frame jumps (Eq. aj1–aj6 inputs) at a crossing of the analytic solution.
FrameJumps analytic_frame_jumps(const CrossingRecord& rec, double t, const ParabolicCase& c);

/// Normal-derivative flux on Γ as printed in the paper (n̂ = (x-0.5, y-0.5)).
double interface_flux(double x, double y, double t, const ParabolicCase& c);

struct ParabolicResult {
    Field2D u;
    double max_error = 0.0; // ‖E‖∞ over Ω⁺ nodes
    int steps = 0;
};

ParabolicResult run_parabolic(const ParabolicCase& c);

/// Rate of convergence log2(E_{N/2} / E_N).
std::optional<double> convergence_order(double err_coarse, double err_fine);

} // namespace jumpflow
