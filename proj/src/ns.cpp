#include "jumpflow/ns.hpp"

#include <algorithm>
#include <cmath>

#include "jumpflow/hoc.hpp"

namespace jumpflow {

namespace {

void validate_case(const FlowCase& c) {
    if (c.re <= 0.0) throw FlowError("FlowCase: Re must be positive");
    if (c.dt <= 0.0) throw FlowError("FlowCase: dt must be positive");
    const double cfl = c.u0 * c.dt / c.grid.h;
    if (cfl > 1.0) throw FlowError("FlowCase: convective outlet CFL exceeds 1");
    for (const auto& b : c.bodies.bodies()) {
        if (b.kind == Shape::Kind::HalfPlane) continue;
        const double reach = b.kind == Shape::Kind::Circle ? b.radius : b.r0 + b.spike;
        const double sway = b.motion.moving() ? b.motion.a0 : 0.0;
        const double margin_x = 4.0 * c.grid.h, margin_y = 4.0 * c.grid.l;
        if (b.center.x - reach < c.grid.x0 + margin_x || b.center.x + reach > c.grid.xf - margin_x ||
            b.center.y - reach - sway < c.grid.y0 + margin_y ||
            b.center.y + reach + sway > c.grid.yf - margin_y)
            throw FlowError("FlowCase: body needs at least 4 grid lines of clearance");
    }
}

} // namespace

NsSolver::NsSolver(FlowCase c) : case_(std::move(c)) {
    validate_case(case_);
    moving_ = case_.bodies.any_moving();
    const Grid2D& g = case_.grid;

    CoeffSample poisson;
    poisson.beta = 1.0;
    psi_weights_ = spatial_weights(stencil_coefficients(poisson, g.h, g.l), g.h, g.l);
    f_weights_ = mass_weights(poisson, g.h, g.l); // 8/12 centre, 1/12 edges
    // equilibrate the Poisson rows to O(1) diagonal so the relative residual
    // target stays above the double-precision floor
    const double scale = 1.0 / std::abs(psi_weights_[kCenterSlot]);
    for (auto& w : psi_weights_) w *= scale;
    for (auto& w : f_weights_) w *= scale;

    state_.psi = Field2D(g.m, g.n);
    state_.zeta = Field2D(g.m, g.n);
    state_.u = Field2D(g.m, g.n);
    state_.v = Field2D(g.m, g.n);
    rhs_zeta_.resize(g.size());
    rhs_psi_.resize(g.size());

    classify_and_plan(0.0);
    reset_impulsive();
    prev_u_ = state_.u;
    prev_v_ = state_.v;
}

void NsSolver::reset_impulsive() {
    const Grid2D& g = case_.grid;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.m; ++i) {
            const size_t q = g.idx(i, j);
            if (cl_.side[q] > 0) {
                state_.psi[q] = g.y(j);
                state_.zeta[q] = 0.0;
                state_.u[q] = case_.u0;
                state_.v[q] = 0.0;
            } else {
                const Point vb = case_.bodies.surface_velocity(g.x(i), g.y(j), 0.0);
                state_.psi[q] = 0.0;
                state_.zeta[q] = 0.0;
                state_.u[q] = vb.x;
                state_.v[q] = vb.y;
            }
        }
    state_.t = 0.0;
    state_.step = 0;
}

void NsSolver::classify_and_plan(double t) {
    cl_ = classify_nodes(case_.grid, case_.bodies, t);
    plan_ = build_correction_plan(case_.grid, cl_, case_.bodies, t, /*allow_diagonal=*/false);

    const Grid2D& g = case_.grid;
    kind_.assign(g.size(), RowKind::Fluid);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.m; ++i) {
            const size_t q = g.idx(i, j);
            if (i == 0 || i == g.m - 1 || j == 0 || j == g.n - 1)
                kind_[q] = RowKind::Dirichlet;
            else if (cl_.side[q] < 0)
                kind_[q] = RowKind::Pinned;
        }
    patterns_ready_ = false;
}

void NsSolver::build_patterns() {
    const Grid2D& g = case_.grid;
    const int n = static_cast<int>(g.size());

    auto build = [&](CsrMatrix& a) {
        a.n = n;
        a.row_ptr.assign(n + 1, 0);
        for (int q = 0; q < n; ++q)
            a.row_ptr[q + 1] = a.row_ptr[q] + (kind_[q] == RowKind::Fluid ? 9 : 1);
        a.col.assign(a.row_ptr[n], 0);
        a.val.assign(a.row_ptr[n], 0.0);
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.m; ++i) {
                const size_t q = g.idx(i, j);
                int p = a.row_ptr[q];
                if (kind_[q] != RowKind::Fluid) {
                    a.col[p] = static_cast<int>(q);
                    a.val[p] = 1.0;
                } else {
                    for (int sl = 0; sl < 9; ++sl)
                        a.col[p + sl] = static_cast<int>(g.idx(i + kSlotDi[sl], j + kSlotDj[sl]));
                }
            }
    };
    build(amat_zeta_);
    build(amat_psi_);

    // ψ matrix values are constant: fill and factor once per geometry
    for (int j = 0; j < case_.grid.n; ++j)
        for (int i = 0; i < case_.grid.m; ++i) {
            const size_t q = case_.grid.idx(i, j);
            if (kind_[q] != RowKind::Fluid) continue;
            for (int sl = 0; sl < 9; ++sl) amat_psi_.val[amat_psi_.row_ptr[q] + sl] = psi_weights_[sl];
        }
    ilu0_refactor(amat_psi_, pre_psi_);
    patterns_ready_ = true;
}

namespace {

/// Convection coefficients for the vorticity equation sampled from u, v fields;
/// partials by second-order central differences of the discrete fields.
CoeffSample vorticity_sample(const Field2D& u, const Field2D& v, int i, int j, double h, double l,
                             double re) {
    CoeffSample s;
    s.beta = 1.0 / re;
    s.c = -u(i, j);
    s.c_x = -(u(i + 1, j) - u(i - 1, j)) / (2 * h);
    s.c_y = -(u(i, j + 1) - u(i, j - 1)) / (2 * l);
    s.c_xx = -(u(i + 1, j) - 2 * u(i, j) + u(i - 1, j)) / (h * h);
    s.c_yy = -(u(i, j + 1) - 2 * u(i, j) + u(i, j - 1)) / (l * l);
    s.d = -v(i, j);
    s.d_x = -(v(i + 1, j) - v(i - 1, j)) / (2 * h);
    s.d_y = -(v(i, j + 1) - v(i, j - 1)) / (2 * l);
    s.d_xx = -(v(i + 1, j) - 2 * v(i, j) + v(i - 1, j)) / (h * h);
    s.d_yy = -(v(i, j + 1) - 2 * v(i, j) + v(i, j - 1)) / (l * l);
    return s;
}

} // namespace

void NsSolver::assemble_zeta(const std::vector<JumpSet>& zeta_jumps) {
    const Grid2D& g = case_.grid;
    const Field2D& u = state_.u;
    const Field2D& v = state_.v;
    const Field2D& zeta = state_.zeta;

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = 0; j < g.n; ++j) {
        for (int i = 0; i < g.m; ++i) {
            const size_t q = g.idx(i, j);
            if (kind_[q] == RowKind::Dirichlet) {
                rhs_zeta_[q] = zeta[q]; // boundary value maintained by apply_farfield
                continue;
            }
            if (kind_[q] == RowKind::Pinned) {
                rhs_zeta_[q] = 0.0;
                continue;
            }
            const CoeffSample s = vorticity_sample(u, v, i, j, g.h, g.l, case_.re);
            const HocRow row = assemble_regular_row(
                mass_weights(s, g.h, g.l), spatial_weights(stencil_coefficients(s, g.h, g.l), g.h, g.l),
                1.0, case_.dt);
            double acc = 0.0;
            const int base = amat_zeta_.row_ptr[q];
            for (int sl = 0; sl < 9; ++sl) {
                amat_zeta_.val[base + sl] = row.implicit_w[sl];
                acc += row.explicit_w[sl] * zeta(i + kSlotDi[sl], j + kSlotDj[sl]);
            }
            rhs_zeta_[q] = acc;
        }
    }

    // lagged linearisation: one jump table serves both time levels of Eq. irr_reg
    for (const auto& nc : plan_.nodes) {
        if (kind_[nc.node] != RowKind::Fluid) continue;
        const int i = static_cast<int>(nc.node % g.m);
        const int j = static_cast<int>(nc.node / g.m);
        const CoeffSample s = vorticity_sample(u, v, i, j, g.h, g.l, case_.re);
        const HocRow row = assemble_regular_row(
            mass_weights(s, g.h, g.l), spatial_weights(stencil_coefficients(s, g.h, g.l), g.h, g.l),
            1.0, case_.dt);
        rhs_zeta_[nc.node] += corrections_rhs(nc, row.implicit_w, zeta_jumps) -
                              corrections_rhs(nc, row.explicit_w, zeta_jumps);
    }
}

void NsSolver::assemble_psi_rhs(const Field2D& zeta_new, const std::vector<JumpSet>& zeta_jumps,
                                const std::vector<JumpSet>& psi_jumps) {
    const Grid2D& g = case_.grid;

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = 0; j < g.n; ++j) {
        for (int i = 0; i < g.m; ++i) {
            const size_t q = g.idx(i, j);
            if (kind_[q] == RowKind::Dirichlet) {
                rhs_psi_[q] = state_.psi[q]; // boundary value from apply_farfield
                continue;
            }
            if (kind_[q] == RowKind::Pinned) {
                rhs_psi_[q] = 0.0; // ψ = 0 on and inside the body
                continue;
            }
            double f = 0.0;
            for (int sl = 0; sl < 9; ++sl)
                f += f_weights_[sl] * zeta_new(i + kSlotDi[sl], j + kSlotDj[sl]);
            rhs_psi_[q] = -f;
        }
    }
    for (const auto& nc : plan_.nodes) {
        if (kind_[nc.node] != RowKind::Fluid) continue;
        // source side: ζ values replaced by their smooth extensions
        rhs_psi_[nc.node] += corrections_rhs(nc, f_weights_, zeta_jumps);
        // operator side: ψ jump corrections
        rhs_psi_[nc.node] += corrections_rhs(nc, psi_weights_, psi_jumps);
    }
}

void NsSolver::solve_step(double t_new, bool resweep_allowed) {
    const std::vector<JumpSet> psi_jumps =
        build_psi_jumps(case_.grid, cl_, state_.u, state_.v, case_.bodies, t_new);
    const std::vector<JumpSet> zeta_jumps =
        build_zeta_jumps(case_.grid, cl_, state_.psi, state_.zeta);

    assemble_zeta(zeta_jumps);
    ilu0_refactor(amat_zeta_, pre_zeta_);
    BiCgStabResult rz;
    try {
        rz = bicgstab(amat_zeta_, rhs_zeta_, &pre_zeta_, case_.solver_tol, case_.solver_maxiter,
                      &state_.zeta.data());
    } catch (const SolverError& e) {
        throw FlowError("vorticity solve failed at t=" + std::to_string(t_new) + ": " + e.what());
    }
    zeta_iters_ = rz.iterations;
    Field2D zeta_new = state_.zeta;
    zeta_new.data() = std::move(rz.x);

    assemble_psi_rhs(zeta_new, zeta_jumps, psi_jumps);
    BiCgStabResult rp;
    try {
        rp = bicgstab(amat_psi_, rhs_psi_, &pre_psi_, case_.solver_tol, case_.solver_maxiter,
                      &state_.psi.data());
    } catch (const SolverError& e) {
        throw FlowError("streamfunction solve failed at t=" + std::to_string(t_new) + ": " + e.what());
    }
    psi_iters_ = rp.iterations;

    state_.zeta = std::move(zeta_new);
    state_.psi.data() = std::move(rp.x);

    if (resweep_allowed && case_.fixed_point_sweep) {
        recover_velocity(t_new);
        solve_step(t_new, false);
        return;
    }

    // independently recomputed ψ-system residual
    std::vector<double> r = spmv(amat_psi_, state_.psi.data());
    psi_res2_ = 0.0;
    psi_res_inf_ = 0.0;
    for (size_t q = 0; q < r.size(); ++q) {
        const double d = rhs_psi_[q] - r[q];
        psi_res2_ += d * d;
        psi_res_inf_ = std::max(psi_res_inf_, std::abs(d));
    }
    psi_res2_ = std::sqrt(psi_res2_);
}

void NsSolver::recover_velocity(double t_new) {
    const Grid2D& g = case_.grid;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = 1; j < g.n - 1; ++j) {
        for (int i = 1; i < g.m - 1; ++i) {
            const size_t q = g.idx(i, j);
            if (cl_.side[q] < 0) {
                const Point vb = case_.bodies.surface_velocity(g.x(i), g.y(j), t_new);
                state_.u[q] = vb.x;
                state_.v[q] = vb.y;
                continue;
            }
            std::array<double, 9> ps{}, zs{};
            for (int sl = 0; sl < 9; ++sl) {
                ps[sl] = state_.psi(i + kSlotDi[sl], j + kSlotDj[sl]);
                zs[sl] = state_.zeta(i + kSlotDi[sl], j + kSlotDj[sl]);
            }
            hoc_velocity(ps, zs, g.h, g.l, state_.u[q], state_.v[q]);
        }
    }
}

void NsSolver::apply_farfield() {
    const Grid2D& g = case_.grid;
    FlowState& s = state_;
    const double cfl = case_.u0 * case_.dt / g.h;

    // outlet: explicit first-order upwind convective update (interior rows)
    const int ib = g.m - 1;
    for (int j = 1; j < g.n - 1; ++j) {
        for (Field2D* f : {&s.u, &s.v, &s.psi, &s.zeta}) {
            const double qb = (*f)(ib, j);
            (*f)(ib, j) = qb - cfl * (qb - (*f)(ib - 1, j));
        }
    }
    // inlet
    for (int j = 0; j < g.n; ++j) {
        s.u(0, j) = case_.u0;
        s.v(0, j) = 0.0;
        s.psi(0, j) = g.y(j);
        s.zeta(0, j) = 0.0;
    }
    // top and bottom walls: ∂u/∂y = 0 one-sidedly, v = 0, ψ = wall streamline
    for (int i = 1; i < g.m; ++i) {
        s.u(i, 0) = (4.0 * s.u(i, 1) - s.u(i, 2)) / 3.0;
        s.v(i, 0) = 0.0;
        s.psi(i, 0) = g.y0;
        s.zeta(i, 0) = 0.0;
        s.u(i, g.n - 1) = (4.0 * s.u(i, g.n - 2) - s.u(i, g.n - 3)) / 3.0;
        s.v(i, g.n - 1) = 0.0;
        s.psi(i, g.n - 1) = g.yf;
        s.zeta(i, g.n - 1) = 0.0;
    }
}

void NsSolver::advance() {
    const double t_new = state_.t + case_.dt;
    prev_u_ = state_.u;
    prev_v_ = state_.v;

    if (moving_) classify_and_plan(t_new);
    if (!patterns_ready_) build_patterns();

    solve_step(t_new, true);
    recover_velocity(t_new);
    apply_farfield();

    state_.t = t_new;
    ++state_.step;
}

double asymmetry_metric(const Grid2D& grid, const Field2D& psi) {
    double m = 0.0;
    for (int j = 0; j < grid.n; ++j) {
        const int jm = grid.n - 1 - j;
        for (int i = 0; i < grid.m; ++i)
            m = std::max(m, std::abs(psi(i, j) + psi(i, jm)));
    }
    return m;
}

} // namespace jumpflow
