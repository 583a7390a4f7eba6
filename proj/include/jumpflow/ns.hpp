#pragma once

#include <memory>
#include <vector>

#include "jumpflow/field.hpp"
#include "jumpflow/geometry.hpp"
#include "jumpflow/jumps.hpp"
#include "jumpflow/sparse.hpp"

namespace jumpflow {

struct FlowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FlowCase {
    Grid2D grid;
    LevelSet bodies; // empty list = free stream
    double re = 100.0;
    double u0 = 1.0;
    double dt = 5e-3;
    double t_end = 150.0;
    int korder = 2;
    double solver_tol = 1e-13;
    int solver_maxiter = 0;
    bool fixed_point_sweep = false;
};

struct FlowState {
    Field2D psi, zeta, u, v;
    double t = 0.0;
    long step = 0;
};

/// Streamfunction-vorticity marcher with immersed bodies: per Δt, the vorticity
/// transport solve, the ψ-Poisson solve with jump corrections, velocity
/// recovery and far-field updates, in that order.
class NsSolver {
public:
    explicit NsSolver(FlowCase c);

    void advance();

    const FlowCase& flow_case() const { return case_; }
    const FlowState& state() const { return state_; }
    FlowState& state() { return state_; }
    const NodeClassification& classification() const { return cl_; }
    /// u, v of the previous time level (for ∂u/∂t diagnostics).
    const Field2D& prev_u() const { return prev_u_; }
    const Field2D& prev_v() const { return prev_v_; }

    /// 2-norm and ∞-norm of the last ψ-system residual (discrete ∇²ψ+ζ balance).
    double last_psi_residual2() const { return psi_res2_; }
    double last_psi_residual_inf() const { return psi_res_inf_; }
    int last_zeta_iterations() const { return zeta_iters_; }
    int last_psi_iterations() const { return psi_iters_; }

    /// Impulsive free-stream start: ψ=y, ζ=0, u=u0, v=0 on fluid; body values inside.
    void reset_impulsive();

    /// Far-field boundary application (inlet/walls Dirichlet, convective outlet).
    void apply_farfield();

private:
    enum class RowKind : uint8_t { Fluid, Dirichlet, Pinned };

    void classify_and_plan(double t);
    void build_patterns();
    void assemble_zeta(const std::vector<JumpSet>& zeta_jumps);
    void assemble_psi_rhs(const Field2D& zeta_new, const std::vector<JumpSet>& zeta_jumps,
                          const std::vector<JumpSet>& psi_jumps);
    void solve_step(double t_new, bool resweep_allowed);
    void recover_velocity(double t_new);

    FlowCase case_;
    FlowState state_;
    Field2D prev_u_, prev_v_;
    NodeClassification cl_;
    CorrectionPlan plan_;
    std::vector<RowKind> kind_;

    bool moving_ = false;
    // ζ system (pattern fixed while geometry is fixed; values change each step)
    CsrMatrix amat_zeta_;
    Ilu0Factors pre_zeta_;
    // ψ system (fully constant while geometry is fixed)
    CsrMatrix amat_psi_;
    Ilu0Factors pre_psi_;
    std::array<double, 9> psi_weights_{};   // HOC Poisson row
    std::array<double, 9> f_weights_{};     // Mehrstellen source row
    std::vector<double> rhs_zeta_, rhs_psi_;

    double psi_res2_ = 0.0, psi_res_inf_ = 0.0;
    int zeta_iters_ = 0, psi_iters_ = 0;
    bool patterns_ready_ = false;
};

/// max |ψ(x, y) + ψ(x, -y)| over mirror node pairs (grid must be y-symmetric).
double asymmetry_metric(const Grid2D& grid, const Field2D& psi);

} // namespace jumpflow
