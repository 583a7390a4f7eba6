#include "jumpflow/jumps.hpp"

#include <algorithm>
#include <cmath>

#include "jumpflow/hoc.hpp"

namespace jumpflow {

namespace {
constexpr double kFact[4] = {1.0, 1.0, 2.0, 6.0};
constexpr double kBinom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
} // namespace

double correction_sum(const JumpSet& js, double dist) {
    double s = 0.0;
    double dp = 1.0;
    for (int r = 0; r <= js.k; ++r) {
        s += dp / kFact[r] * js.j[r];
        dp *= dist;
    }
    return s;
}

DerivTensor rotate_tensor(const DerivTensor& in, double c, double s) {
    DerivTensor out;
    out.k = in.k;
    // (c ∂a + s ∂b)^p (-s ∂a + c ∂b)^q expanded as polynomial in (∂a, ∂b)
    for (int r = 0; r <= in.k; ++r) {
        for (int q = 0; q <= r; ++q) {
            const int p = r - q; // ∂_{e1}^p ∂_{e2}^q
            double coef[4] = {0, 0, 0, 0}; // coef[m] multiplies [∂a^{r-m} ∂b^m]
            for (int ii = 0; ii <= p; ++ii) {
                const double w1 = kBinom[p][ii] * std::pow(c, p - ii) * std::pow(s, ii);
                for (int jj = 0; jj <= q; ++jj) {
                    const double w2 = kBinom[q][jj] * std::pow(-s, q - jj) * std::pow(c, jj);
                    coef[ii + jj] += w1 * w2;
                }
            }
            double acc = 0.0;
            for (int m = 0; m <= r; ++m) acc += coef[m] * in.t[r][m];
            out.t[r][q] = acc;
        }
    }
    return out;
}

DerivTensor FrameJumps::axis_tensor() const {
    // x̂ = (cosθ, -sinθ), ŷ = (sinθ, cosθ) in frame coordinates
    return rotate_tensor(frame, std::cos(theta), -std::sin(theta));
}

JumpSet directional_jumps(const DerivTensor& axis, double ex, double ey, int k) {
    JumpSet js;
    js.k = k;
    for (int r = 0; r <= k; ++r) {
        double acc = 0.0;
        for (int m = 0; m <= r; ++m)
            acc += kBinom[r][m] * std::pow(ex, r - m) * std::pow(ey, m) * axis.t[r][m];
        js.j[r] = acc;
    }
    return js;
}

JumpSet transform_jumps_x(const FrameJumps& fj, int k) {
    return directional_jumps(fj.axis_tensor(), 1.0, 0.0, k);
}

JumpSet transform_jumps_y(const FrameJumps& fj, int k) {
    return directional_jumps(fj.axis_tensor(), 0.0, 1.0, k);
}

JumpSet jumps_along(const FrameJumps& fj, const CrossingRecord& rec, int k) {
    switch (rec.axis) {
        case CrossAxis::X: return transform_jumps_x(fj, k);
        case CrossAxis::Y: return transform_jumps_y(fj, k);
        default: return directional_jumps(fj.axis_tensor(), rec.dir.x, rec.dir.y, k);
    }
}

double lagrange_interpolate(double alpha, const std::array<double, 3>& p,
                            const std::array<double, 3>& v) {
    double acc = 0.0;
    for (int j = 0; j < 3; ++j) {
        const int a = (j + 1) % 3, b = (j + 2) % 3;
        const double denom = (p[j] - p[a]) * (p[j] - p[b]);
        if (denom == 0.0) throw JumpError("lagrange: coincident nodes");
        acc += v[j] * (alpha - p[a]) * (alpha - p[b]) / denom;
    }
    return acc;
}

void lagrange_derivatives(double alpha, const std::array<double, 3>& p,
                          const std::array<double, 3>& v, double& d1, double& d2) {
    d1 = 0.0;
    d2 = 0.0;
    for (int j = 0; j < 3; ++j) {
        const int a = (j + 1) % 3, b = (j + 2) % 3;
        const double denom = (p[j] - p[a]) * (p[j] - p[b]);
        if (denom == 0.0) throw JumpError("lagrange: coincident nodes");
        d1 += v[j] * ((alpha - p[a]) + (alpha - p[b])) / denom; // product-form limit of Eq. lg_d1
        d2 += v[j] * 2.0 / denom;
    }
}

double one_sided_first(double v_alpha, double v1, double v2, double dh, double h) {
    if (dh <= 0.0 || h <= 0.0) throw JumpError("one_sided_first: nonpositive spacing");
    return (-h * (2.0 * dh + h) * v_alpha + (dh + h) * (dh + h) * v1 - dh * dh * v2) /
           (h * dh * (dh + h));
}

double one_sided_second_grid(double p1, double p2, double p3, double p4, double h) {
    return (2.0 * p1 - 5.0 * p2 + 4.0 * p3 - p4) / (h * h);
}

double one_sided_second_interface(double v_alpha, double v1, double v2, double dh, double h) {
    if (dh <= 0.0 || h <= 0.0) throw JumpError("one_sided_second_interface: nonpositive spacing");
    return 2.0 * (h * v_alpha - (dh + h) * v1 + dh * v2) / (h * dh * (dh + h));
}

// ---------------------------------------------------------------------------

CorrectionPlan build_correction_plan(const Grid2D& grid, NodeClassification& cl,
                                     const LevelSet& ls, double t, bool allow_diagonal) {
    CorrectionPlan plan;
    plan.nodes.reserve(cl.stencil_cut_nodes.size());

    auto xcut_between = [&](int i0, int i1, int j) {
        return cl.xcut_at(std::min(i0, i1), j);
    };
    auto ycut_between = [&](int i, int j0, int j1) {
        return cl.ycut_at(i, std::min(j0, j1));
    };

    for (const size_t g : cl.stencil_cut_nodes) {
        const int i = static_cast<int>(g % grid.m);
        const int j = static_cast<int>(g / grid.m);
        NodeCorrections nc;
        nc.node = g;
        const int side_c = cl.side[g];

        for (int s = 0; s < 9; ++s) {
            if (s == kCenterSlot) continue;
            const int di = kSlotDi[s], dj = kSlotDj[s];
            const int pi = i + di, pj = j + dj;
            if (pi < 0 || pi >= grid.m || pj < 0 || pj >= grid.n) continue;
            const int side_p = cl.side[cl.idx(pi, pj)];
            if (side_p == side_c) continue;

            PlannedCorrection term;
            term.slot = s;
            term.sigma = side_p > 0 ? 1.0 : -1.0;

            if (dj == 0) { // E/W axis neighbour
                term.crossing = xcut_between(i, pi, j);
                if (term.crossing < 0) throw JumpError("correction plan: missing x crossing");
                term.dist = grid.x(pi) - cl.crossings[term.crossing].pos.x;
            } else if (di == 0) { // N/S axis neighbour
                term.crossing = ycut_between(i, j, pj);
                if (term.crossing < 0) throw JumpError("correction plan: missing y crossing");
                term.dist = grid.y(pj) - cl.crossings[term.crossing].pos.y;
            } else { // corner
                const int side_row = cl.side[cl.idx(i, pj)];  // node above/below centre
                const int side_col = cl.side[cl.idx(pi, j)];  // node beside centre
                if (side_row != side_p) {
                    // expand along x on row pj, crossing between (i,pj) and (pi,pj)
                    term.crossing = xcut_between(i, pi, pj);
                    if (term.crossing < 0) throw JumpError("correction plan: missing row-leg crossing");
                    term.dist = grid.x(pi) - cl.crossings[term.crossing].pos.x;
                } else if (side_col != side_p) {
                    term.crossing = ycut_between(pi, j, pj);
                    if (term.crossing < 0) throw JumpError("correction plan: missing column-leg crossing");
                    term.dist = grid.y(pj) - cl.crossings[term.crossing].pos.y;
                } else if (allow_diagonal) {
                    // both legs uncut: interface passes between centre and corner
                    cl.crossings.push_back(make_crossing(CrossAxis::Diagonal, i, j, grid.node(i, j),
                                                         grid.node(pi, pj), ls, t));
                    term.crossing = static_cast<int>(cl.crossings.size()) - 1;
                    term.dist = cl.crossings.back().h_plus;
                } else {
                    // borrow the nearer axis-arm crossing (both arms are cut here)
                    const int cx = xcut_between(i, pi, j);
                    const int cy = ycut_between(i, j, pj);
                    if (cx < 0 && cy < 0) throw JumpError("correction plan: isolated corner cut");
                    double dist_x = 1e300, dist_y = 1e300;
                    if (cx >= 0)
                        dist_x = std::hypot(grid.x(pi) - cl.crossings[cx].pos.x,
                                            grid.y(pj) - cl.crossings[cx].pos.y);
                    if (cy >= 0)
                        dist_y = std::hypot(grid.x(pi) - cl.crossings[cy].pos.x,
                                            grid.y(pj) - cl.crossings[cy].pos.y);
                    if (dist_x <= dist_y) {
                        term.crossing = cx;
                        term.dist = grid.x(pi) - cl.crossings[cx].pos.x;
                    } else {
                        term.crossing = cy;
                        term.dist = grid.y(pj) - cl.crossings[cy].pos.y;
                    }
                }
            }
            nc.terms.push_back(term);
        }
        plan.nodes.push_back(std::move(nc));
    }
    return plan;
}

double corrections_rhs(const NodeCorrections& nc, const std::array<double, 9>& w,
                       const std::vector<JumpSet>& jumps_per_crossing) {
    double acc = 0.0;
    for (const auto& term : nc.terms)
        acc += term.sigma * w[term.slot] * correction_sum(jumps_per_crossing[term.crossing], term.dist);
    return acc;
}

// ---------------------------------------------------------------------------

InterpStencil fluid_stencil(const Grid2D& grid, const NodeClassification& cl,
                            const CrossingRecord& rec) {
    InterpStencil st;
    const bool xaxis = rec.axis == CrossAxis::X;
    st.spacing = xaxis ? grid.h : grid.l;
    st.alpha = xaxis ? rec.pos.x : rec.pos.y;

    // fluid flank of the cut segment
    const int i0 = rec.i, j0 = rec.j;
    const int i1 = xaxis ? rec.i + 1 : rec.i;
    const int j1 = xaxis ? rec.j : rec.j + 1;
    int fi, fj;
    if (cl.side[cl.idx(i0, j0)] > 0) {
        fi = i0;
        fj = j0;
        st.dirsign = -1;
    } else if (cl.side[cl.idx(i1, j1)] > 0) {
        fi = i1;
        fj = j1;
        st.dirsign = +1;
    } else {
        return st; // no fluid flank (should not happen on a cut segment)
    }

    auto in_grid = [&](int i, int j) { return i >= 0 && i < grid.m && j >= 0 && j < grid.n; };
    auto fluid = [&](int i, int j) { return in_grid(i, j) && cl.side[cl.idx(i, j)] > 0; };

    // δh underflow: shift the stencil one node outward (Lagrange weights blow up)
    double dh = std::abs((xaxis ? grid.x(fi) : grid.y(fj)) - st.alpha);
    if (dh < 1e-3 * st.spacing) {
        fi += xaxis ? st.dirsign : 0;
        fj += xaxis ? 0 : st.dirsign;
    }

    for (int q = 0; q < 3; ++q) {
        const int ii = fi + (xaxis ? st.dirsign * q : 0);
        const int jj = fj + (xaxis ? 0 : st.dirsign * q);
        if (!fluid(ii, jj)) return st; // insufficient fluid run
        st.node[q] = cl.idx(ii, jj);
        st.coord[q] = xaxis ? grid.x(ii) : grid.y(jj);
    }
    st.dh = std::abs(st.coord[0] - st.alpha);
    st.valid = true;
    return st;
}

double reconstruct_zeta(const Grid2D& grid, const NodeClassification& cl,
                        const Field2D& psi, int i, int j) {
    auto fluid = [&](int ii, int jj) {
        return ii >= 0 && ii < grid.m && jj >= 0 && jj < grid.n && cl.side[cl.idx(ii, jj)] > 0;
    };
    auto second = [&](int di, int dj, double sp) -> double {
        // average every available one-sided stencil so mirror-symmetric
        // geometry yields mirror-symmetric reconstructions
        double acc = 0.0;
        int hits = 0;
        for (const int s : {+1, -1}) {
            const int ddi = di * s, ddj = dj * s;
            if (fluid(i + ddi, j + ddj) && fluid(i + 2 * ddi, j + 2 * ddj) &&
                fluid(i + 3 * ddi, j + 3 * ddj)) {
                acc += one_sided_second_grid(psi(i, j), psi(i + ddi, j + ddj),
                                             psi(i + 2 * ddi, j + 2 * ddj),
                                             psi(i + 3 * ddi, j + 3 * ddj), sp);
                ++hits;
            }
        }
        if (hits > 0) return acc / hits;
        for (const int s : {+1, -1}) {
            const int ddi = di * s, ddj = dj * s;
            if (fluid(i + ddi, j + ddj) && fluid(i + 2 * ddi, j + 2 * ddj)) {
                acc += (psi(i, j) - 2.0 * psi(i + ddi, j + ddj) + psi(i + 2 * ddi, j + 2 * ddj)) /
                       (sp * sp);
                ++hits;
            }
        }
        if (hits > 0) return acc / hits;
        throw JumpError("reconstruct_zeta: insufficient fluid nodes around node");
    };
    const double pxx = second(1, 0, grid.h);
    const double pyy = second(0, 1, grid.l);
    return -(pxx + pyy);
}

std::vector<JumpSet> build_psi_jumps(const Grid2D& grid, const NodeClassification& cl,
                                     const Field2D& u, const Field2D& v,
                                     const LevelSet& ls, double t) {
    std::vector<JumpSet> out(cl.crossings.size());
    for (size_t c = 0; c < cl.crossings.size(); ++c) {
        const CrossingRecord& rec = cl.crossings[c];
        if (rec.axis == CrossAxis::Diagonal) continue; // flow plans never use these
        const InterpStencil st = fluid_stencil(grid, cl, rec);
        JumpSet js;
        js.k = 2;
        if (!st.valid) {
            out[c] = js; // no fluid run: leave zero jumps
            continue;
        }
        // No-slip supplies exact surface data: the zeroed interior carries ψ ≡ 0,
        // so [u] = u_s, [v] = v_s, and the one-sided shear evaluations anchor on
        // the exact surface velocity at α. Anchoring on an interpolated field
        // value instead leaves potential flow as a fixed point of the marching.
        const Point us = ls.surface_velocity(rec.pos.x, rec.pos.y, t);
        if (rec.axis == CrossAxis::X) {
            const std::array<double, 3> vv = {v[st.node[0]], v[st.node[1]], v[st.node[2]]};
            const double dvdx = st.dirsign * one_sided_first(us.y, vv[0], vv[1], st.dh, st.spacing);
            js.j[0] = 0.0;     // [ψ] = 0
            js.j[1] = -us.y;   // [ψ_x] = -[v] = -v_s
            js.j[2] = -dvdx;   // [ψ_xx] = -[v_x], one-sided into the fluid
        } else {
            const std::array<double, 3> uu = {u[st.node[0]], u[st.node[1]], u[st.node[2]]};
            const double dudy = st.dirsign * one_sided_first(us.x, uu[0], uu[1], st.dh, st.spacing);
            js.j[0] = 0.0;     // [ψ] = 0
            js.j[1] = us.x;    // [ψ_y] = [u] = u_s
            js.j[2] = dudy;    // [ψ_yy] = [u_y]
        }
        out[c] = js;
    }
    return out;
}

std::vector<JumpSet> build_zeta_jumps(const Grid2D& grid, const NodeClassification& cl,
                                      const Field2D& psi, const Field2D& zeta,
                                      std::vector<double>* surface_zeta) {
    std::vector<JumpSet> out(cl.crossings.size());
    if (surface_zeta) surface_zeta->assign(cl.crossings.size(), 0.0);
    for (size_t c = 0; c < cl.crossings.size(); ++c) {
        const CrossingRecord& rec = cl.crossings[c];
        if (rec.axis == CrossAxis::Diagonal) continue;
        const InterpStencil st = fluid_stencil(grid, cl, rec);
        JumpSet js;
        js.k = 2;
        if (!st.valid) {
            out[c] = js;
            continue;
        }
        const int i1 = static_cast<int>(st.node[0] % grid.m);
        const int j1 = static_cast<int>(st.node[0] / grid.m);
        const double z1 = reconstruct_zeta(grid, cl, psi, i1, j1);
        const std::array<double, 3> zz = {z1, zeta[st.node[1]], zeta[st.node[2]]};
        const double z_alpha = lagrange_interpolate(st.alpha, st.coord, zz);
        js.j[0] = z_alpha; // [ζ] = ζ(α⁺); interior value is zero
        js.j[1] = st.dirsign * one_sided_first(z_alpha, zz[0], zz[1], st.dh, st.spacing);
        js.j[2] = one_sided_second_interface(z_alpha, zz[0], zz[1], st.dh, st.spacing);
        out[c] = js;
        if (surface_zeta) (*surface_zeta)[c] = z_alpha;
    }
    return out;
}

} // namespace jumpflow
