#include "jumpflow/parabolic.hpp"

#include <cmath>

#include "jumpflow/hoc.hpp"
#include "jumpflow/sparse.hpp"

namespace jumpflow {

namespace {
constexpr double kPi = 3.14159265358979323846;

// d^p/dx^p of cos(a x): cycle cos, -sin, -cos, sin with a^p
double cos_deriv(double a, double x, int p) {
    const double ap = std::pow(a, p);
    switch (p % 4) {
        case 0: return ap * std::cos(a * x);
        case 1: return -ap * std::sin(a * x);
        case 2: return -ap * std::cos(a * x);
        default: return ap * std::sin(a * x);
    }
}
} // namespace

ParabolicCase default_parabolic_case(int n) {
    ParabolicCase c;
    c.grid = Grid2D(0.0, 1.0, 0.0, 1.0, n, n);
    Shape circle;
    circle.kind = Shape::Kind::Circle;
    circle.center = {0.5, 0.5};
    circle.radius = 0.25;
    c.interface = LevelSet({circle});
    return c;
}

double analytic_u(double x, double y, double t, const ParabolicCase& c) {
    if (c.interface.phi(x, y, t) < 0.0) return 0.0;
    const double decay = std::exp(-t * c.nu * kPi * kPi * (c.kx * c.kx + c.ky * c.ky));
    return decay * std::cos(c.kx * kPi * x) * std::cos(c.ky * kPi * y);
}

DerivTensor analytic_jump_tensor(double x, double y, double t, const ParabolicCase& c) {
    const double a = c.kx * kPi, b = c.ky * kPi;
    const double decay = std::exp(-t * c.nu * (a * a + b * b));
    DerivTensor td;
    for (int r = 0; r <= 3; ++r)
        for (int m = 0; m <= r; ++m)
            td.t[r][m] = decay * cos_deriv(a, x, r - m) * cos_deriv(b, y, m);
    return td; // interior branch is identically zero, so the jump is u⁺ itself
}

FrameJumps analytic_frame_jumps(const CrossingRecord& rec, double t, const ParabolicCase& c) {
    FrameJumps fj;
    fj.theta = rec.theta;
    const DerivTensor axis = analytic_jump_tensor(rec.pos.x, rec.pos.y, t, c);
    fj.frame = rotate_tensor(axis, std::cos(rec.theta), std::sin(rec.theta));
    return fj;
}

double interface_flux(double x, double y, double t, const ParabolicCase& c) {
    const double decay = std::exp(-t * c.nu * kPi * kPi * (c.kx * c.kx + c.ky * c.ky));
    return -4.0 * kPi * decay *
           (c.kx * std::sin(c.kx * kPi * x) * (x - 0.5) + c.ky * std::sin(c.ky * kPi * y) * (y - 0.5));
}

ParabolicResult run_parabolic(const ParabolicCase& c) {
    const Grid2D& g = c.grid;
    const size_t n = g.size();

    NodeClassification cl = classify_nodes(g, c.interface, 0.0);
    const CorrectionPlan plan = build_correction_plan(g, cl, c.interface, 0.0, /*allow_diagonal=*/true);

    // constant-coefficient diffusion: one row of weights serves every fluid node
    CoeffSample s;
    s.beta = c.nu;
    const auto mass = mass_weights(s, g.h, g.l);
    const auto spatial = spatial_weights(stencil_coefficients(s, g.h, g.l), g.h, g.l);
    const HocRow row = assemble_regular_row(mass, spatial, 1.0, c.dt);

    enum class RowKind : uint8_t { Fluid, Dirichlet, Pinned };
    std::vector<RowKind> kind(n, RowKind::Fluid);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.m; ++i) {
            const size_t q = g.idx(i, j);
            if (i == 0 || i == g.m - 1 || j == 0 || j == g.n - 1)
                kind[q] = RowKind::Dirichlet;
            else if (cl.side[q] < 0)
                kind[q] = RowKind::Pinned; // interior branch is identically zero
        }

    CsrBuilder builder(static_cast<int>(n), 9 * n);
    for (int j = 0; j < g.n; ++j) {
        for (int i = 0; i < g.m; ++i) {
            const size_t q = g.idx(i, j);
            if (kind[q] != RowKind::Fluid) {
                builder.add(static_cast<int>(q), 1.0);
            } else {
                for (int sl = 0; sl < 9; ++sl) {
                    const size_t w = g.idx(i + kSlotDi[sl], j + kSlotDj[sl]);
                    builder.add(static_cast<int>(w), row.implicit_w[sl]);
                }
            }
            builder.close_row();
        }
    }
    const CsrMatrix a = builder.take();
    const Ilu0Factors pre = ilu0(a);

    // initial condition
    Field2D u(g.m, g.n);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.m; ++i) u(i, j) = analytic_u(g.x(i), g.y(j), 0.0, c);

    const int steps = static_cast<int>(std::llround(c.t_end / c.dt));
    std::vector<double> rhs(n);
    std::vector<JumpSet> js_old(cl.crossings.size()), js_new(cl.crossings.size());

    auto eval_jumps = [&](double t, std::vector<JumpSet>& out) {
        for (size_t ci = 0; ci < cl.crossings.size(); ++ci) {
            const FrameJumps fj = analytic_frame_jumps(cl.crossings[ci], t, c);
            out[ci] = jumps_along(fj, cl.crossings[ci], c.korder);
        }
    };

    double t = 0.0;
    eval_jumps(t, js_old);
    for (int step = 0; step < steps; ++step) {
        const double t_new = (step + 1) * c.dt;
        eval_jumps(t_new, js_new);

        for (int j = 0; j < g.n; ++j) {
            for (int i = 0; i < g.m; ++i) {
                const size_t q = g.idx(i, j);
                switch (kind[q]) {
                    case RowKind::Dirichlet:
                        rhs[q] = analytic_u(g.x(i), g.y(j), t_new, c);
                        break;
                    case RowKind::Pinned:
                        rhs[q] = 0.0;
                        break;
                    case RowKind::Fluid: {
                        double acc = 0.0;
                        for (int sl = 0; sl < 9; ++sl)
                            acc += row.explicit_w[sl] * u(i + kSlotDi[sl], j + kSlotDj[sl]);
                        rhs[q] = acc;
                        break;
                    }
                }
            }
        }
        for (const auto& nc : plan.nodes) {
            if (kind[nc.node] != RowKind::Fluid) continue;
            rhs[nc.node] += corrections_rhs(nc, row.implicit_w, js_new) -
                            corrections_rhs(nc, row.explicit_w, js_old);
        }

        BiCgStabResult sol = bicgstab(a, rhs, &pre, c.solver_tol, 0, &u.data());
        u.data() = std::move(sol.x);
        js_old.swap(js_new);
        t = t_new;
    }

    ParabolicResult res;
    res.steps = steps;
    double emax = 0.0;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.m; ++i) {
            const size_t q = g.idx(i, j);
            if (cl.side[q] > 0) emax = std::max(emax, std::abs(u[q] - analytic_u(g.x(i), g.y(j), t, c)));
        }
    res.max_error = emax;
    res.u = std::move(u);
    return res;
}

std::optional<double> convergence_order(double err_coarse, double err_fine) {
    if (err_coarse <= 0.0 || err_fine <= 0.0) return std::nullopt;
    return std::log(err_coarse / err_fine) / std::log(2.0);
}

} // namespace jumpflow
