#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include "jumpflow/field.hpp"
#include "jumpflow/geometry.hpp"

namespace jumpflow {

struct JumpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Jumps [∂^r u/∂e^r], r = 0..k, along one direction at one interface point.
struct JumpSet {
    int k = 0;
    std::array<double, 4> j{}; // j[r]

    double operator[](int r) const { return j[r]; }
};

/// Taylor jump sum Σ_{r=0..k} d^r/r! · J_r.
double correction_sum(const JumpSet& js, double dist);

/// Derivative-jump tensor up to third order: t[r][m] = [∂_a^{r-m} ∂_b^m u]
/// in some orthonormal basis (a, b).
struct DerivTensor {
    int k = 3;
    double t[4][4] = {};
};

/// Re-express a derivative tensor in the rotated basis e1 = (c, s), e2 = (-s, c)
/// (components of the new basis vectors in the tensor's current basis).
DerivTensor rotate_tensor(const DerivTensor& in, double c, double s);

/// Jumps in the local interface frame (ξ normal at angle θ, η tangent).
struct FrameJumps {
    double theta = 0.0;
    DerivTensor frame; // t[r][m] = [∂_ξ^{r-m} ∂_η^m u]

    DerivTensor axis_tensor() const; // tensor in (x, y) basis
};

/// Directional jumps [∂^r_e u] for a unit direction e, from an axis-basis tensor.
JumpSet directional_jumps(const DerivTensor& axis, double ex, double ey, int k);

/// Eq.-aj1..aj6 realisation: frame jumps → jumps along x resp. y, up to order k.
JumpSet transform_jumps_x(const FrameJumps& fj, int k);
JumpSet transform_jumps_y(const FrameJumps& fj, int k);
JumpSet jumps_along(const FrameJumps& fj, const CrossingRecord& rec, int k);

// ---------------------------------------------------------------------------
// Quadratic Lagrange machinery on three collinear nodes.

double lagrange_interpolate(double alpha, const std::array<double, 3>& p,
                            const std::array<double, 3>& v);
/// First and second derivative of the quadratic interpolant at alpha.
void lagrange_derivatives(double alpha, const std::array<double, 3>& p,
                          const std::array<double, 3>& v, double& d1, double& d2);

// ---------------------------------------------------------------------------
// One-sided formulas near the interface; distances δh, h are positive and
// measured along the stencil direction (derivatives are returned along that
// direction; flip the sign of odd derivatives for a negative-axis stencil).

/// ∂v/∂e at α from v(α), v(α+δh), v(α+δh+h); exact through quadratics.
double one_sided_first(double v_alpha, double v1, double v2, double dh, double h);

/// ∂²ψ/∂e² at p1 from four consecutive nodes p1..p4 (spacing h); exact through cubics.
double one_sided_second_grid(double p1, double p2, double p3, double p4, double h);

/// ∂²v/∂e² at α from v(α), v(α+δh), v(α+δh+h); exact through quadratics.
double one_sided_second_interface(double v_alpha, double v1, double v2, double dh, double h);

// ---------------------------------------------------------------------------
// Irregular-row correction plan: for every stencil node of an irregular row
// that lies across the interface, the crossing to expand through, the signed
// distance from the crossing to that node, and the orientation σ (+1 when the
// stencil node is in Ω⁺). The right-hand side of row g gains
//   Σ σ·w_implicit[slot]·S^{n+1} − Σ σ·w_explicit[slot]·S^{n},
// S = correction_sum(jumps at the crossing, distance).

struct PlannedCorrection {
    int slot = 0;
    int crossing = -1;
    double dist = 0.0;
    double sigma = 1.0;
};

struct NodeCorrections {
    size_t node = 0;
    std::vector<PlannedCorrection> terms;
};

struct CorrectionPlan {
    std::vector<NodeCorrections> nodes; // one entry per stencil-cut node, in order
};

/// Build the plan. With allow_diagonal, corner nodes whose L-path legs are both
/// uncut get a dedicated diagonal crossing (appended to cl.crossings); otherwise
/// they borrow the nearest axis-arm crossing.
CorrectionPlan build_correction_plan(const Grid2D& grid, NodeClassification& cl,
                                     const LevelSet& ls, double t, bool allow_diagonal);

/// Σ σ·w[slot]·correction_sum(jumps[crossing], dist) for one node's terms.
double corrections_rhs(const NodeCorrections& nc, const std::array<double, 9>& w,
                       const std::vector<JumpSet>& jumps_per_crossing);

// ---------------------------------------------------------------------------
// Flow-field jump evaluation on the crossings (ψ and ζ), §3.1 machinery.

struct InterpStencil {
    std::array<double, 3> coord{}; // p1..p3 coordinates along the crossing axis
    std::array<size_t, 3> node{};  // grid indices
    double alpha = 0.0;            // crossing coordinate along the axis
    double dh = 0.0;               // |p1 - alpha|
    double spacing = 0.0;
    int dirsign = 1;               // +1 if fluid run goes toward +axis
    bool valid = false;
};

/// Fluid-side three-node stencil along the crossing's axis (δh underflow shifts
/// the stencil one node outward).
InterpStencil fluid_stencil(const Grid2D& grid, const NodeClassification& cl,
                            const CrossingRecord& rec);

/// ψ jumps at every crossing: {[ψ]=0, [ψ_e]=∓[v or u], [ψ_ee]=∓[v_e or u_e]}.
std::vector<JumpSet> build_psi_jumps(const Grid2D& grid, const NodeClassification& cl,
                                     const Field2D& u, const Field2D& v,
                                     const LevelSet& ls, double t);

/// ζ jumps at every crossing; ζ(p1) is reconstructed as -∇²ψ(p1) one-sidedly.
/// surface_zeta (optional) receives ζ(α⁺) per crossing.
std::vector<JumpSet> build_zeta_jumps(const Grid2D& grid, const NodeClassification& cl,
                                      const Field2D& psi, const Field2D& zeta,
                                      std::vector<double>* surface_zeta = nullptr);

/// -∇²ψ at a fluid node via one-sided 4-point second derivatives into the fluid.
double reconstruct_zeta(const Grid2D& grid, const NodeClassification& cl,
                        const Field2D& psi, int i, int j);

} // namespace jumpflow
