#include "jumpflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jumpflow {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Grid2D::Grid2D(double x0_, double xf_, double y0_, double yf_, int m_, int n_)
    : x0(x0_), xf(xf_), y0(y0_), yf(yf_), m(m_), n(n_) {
    if (m < 5 || n < 5) throw GeometryError("Grid2D: need at least 5 nodes per direction");
    h = (xf - x0) / (m - 1);
    l = (yf - y0) / (n - 1);
    if (h <= 0.0 || l <= 0.0) throw GeometryError("Grid2D: domain bounds out of order");
}

double MotionLaw::displacement(double t) const {
    if (!moving()) return 0.0;
    return amplitude(t) * std::sin(2.0 * kPi * freq * t);
}

Point MotionLaw::velocity(double t) const {
    if (!moving()) return {0.0, 0.0};
    return {0.0, 2.0 * amplitude(t) * kPi * freq * std::cos(2.0 * kPi * freq * t)};
}

Point Shape::center_at(double t) const {
    return {center.x, center.y + motion.displacement(t)};
}

double Shape::phi(double x, double y, double t) const {
    const Point c = center_at(t);
    const double dx = x - c.x;
    const double dy = y - c.y;
    if (kind == Kind::HalfPlane) {
        const double nn = std::hypot(plane_normal.x, plane_normal.y);
        return (dx * plane_normal.x + dy * plane_normal.y) / nn;
    }
    const double r = std::sqrt(dx * dx + dy * dy);
    if (kind == Kind::Circle) return r - radius;
    const double th = std::atan2(dy, dx);
    return r - r0 - spike * std::sin(lobes * th);
}

Point Shape::grad_phi(double x, double y, double t) const {
    const Point c = center_at(t);
    const double dx = x - c.x;
    const double dy = y - c.y;
    if (kind == Kind::HalfPlane) {
        const double nn = std::hypot(plane_normal.x, plane_normal.y);
        return {plane_normal.x / nn, plane_normal.y / nn};
    }
    const double r2 = dx * dx + dy * dy;
    const double r = std::sqrt(r2);
    if (r < 1e-14) return {1.0, 0.0}; // body centre; direction is arbitrary
    if (kind == Kind::Circle) return {dx / r, dy / r};
    // φ = r - r0 - L sin(wθ): ∇φ = r̂ - L w cos(wθ) ∇θ, ∇θ = (-dy, dx)/r²
    const double th = std::atan2(dy, dx);
    const double s = spike * lobes * std::cos(lobes * th);
    return {dx / r + s * dy / r2, dy / r - s * dx / r2};
}

bool LevelSet::any_moving() const {
    for (const auto& b : bodies_)
        if (b.motion.moving()) return true;
    return false;
}

double LevelSet::phi(double x, double y, double t) const {
    double v = std::numeric_limits<double>::max();
    for (const auto& b : bodies_) v = std::min(v, b.phi(x, y, t));
    return bodies_.empty() ? 1.0 : v;
}

int LevelSet::owner(double x, double y, double t) const {
    int best = -1;
    double v = std::numeric_limits<double>::max();
    for (size_t k = 0; k < bodies_.size(); ++k) {
        const double p = bodies_[k].phi(x, y, t);
        if (p < v) {
            v = p;
            best = static_cast<int>(k);
        }
    }
    return best;
}

Point LevelSet::grad_phi(double x, double y, double t) const {
    const int k = owner(x, y, t);
    if (k < 0) return {1.0, 0.0};
    return bodies_[k].grad_phi(x, y, t);
}

Point LevelSet::surface_velocity(double x, double y, double t) const {
    const int k = owner(x, y, t);
    if (k < 0) return {0.0, 0.0};
    return bodies_[k].motion.velocity(t);
}

namespace {

// Closed-form circle/axis-line intersection, when applicable on [a,b].
std::optional<Point> circle_line_crossing(const Point& a, const Point& b,
                                          const LevelSet& ls, double t) {
    if (ls.bodies().size() != 1 || ls.bodies()[0].kind != Shape::Kind::Circle) return std::nullopt;
    const Shape& s = ls.bodies()[0];
    const Point c = s.center_at(t);
    const double lo = 1e-14;
    if (std::abs(a.y - b.y) < lo) { // horizontal line
        const double dy = a.y - c.y;
        const double disc = s.radius * s.radius - dy * dy;
        if (disc < 0.0) return std::nullopt;
        const double root = std::sqrt(disc);
        for (const double xs : {c.x - root, c.x + root}) {
            if ((xs - a.x) * (xs - b.x) <= 0.0) return Point{xs, a.y};
        }
        return std::nullopt;
    }
    if (std::abs(a.x - b.x) < lo) { // vertical line
        const double dx = a.x - c.x;
        const double disc = s.radius * s.radius - dx * dx;
        if (disc < 0.0) return std::nullopt;
        const double root = std::sqrt(disc);
        for (const double ys : {c.y - root, c.y + root}) {
            if ((ys - a.y) * (ys - b.y) <= 0.0) return Point{a.x, ys};
        }
        return std::nullopt;
    }
    return std::nullopt;
}

} // namespace

Point locate_crossing(const Point& a, const Point& b, const LevelSet& ls, double t) {
    double fa = ls.phi(a.x, a.y, t);
    double fb = ls.phi(b.x, b.y, t);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw GeometryError("locate_crossing: no sign change on segment");

    const double seg = std::hypot(b.x - a.x, b.y - a.y);
    const double tol = 1e-12 * seg;

    if (auto closed = circle_line_crossing(a, b, ls, t)) return *closed;

    // Bracketing bisection / regula-falsi (Illinois) hybrid on s in [0,1].
    double s0 = 0.0, s1 = 1.0;
    double f0 = fa, f1 = fb;
    auto eval = [&](double s) {
        return ls.phi(a.x + s * (b.x - a.x), a.y + s * (b.y - a.y), t);
    };
    double sm = 0.5, fm = eval(sm);
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
        if (std::abs(fm) <= tol || (s1 - s0) < 1e-16) {
            converged = true;
            break;
        }
        // regula-falsi step on current bracket, guarded to stay inside
        double sf = s0 - f0 * (s1 - s0) / (f1 - f0);
        if (!(sf > s0 && sf < s1)) sf = 0.5 * (s0 + s1);
        sm = sf;
        fm = eval(sm);
        if (f0 * fm <= 0.0) {
            s1 = sm;
            f1 = fm;
            f0 *= 0.5; // Illinois damping against endpoint stagnation
        } else {
            s0 = sm;
            f0 = fm;
            f1 *= 0.5;
        }
    }
    if (!converged && std::abs(fm) > tol)
        throw GeometryError("locate_crossing: no convergence in 200 iterations");
    return {a.x + sm * (b.x - a.x), a.y + sm * (b.y - a.y)};
}

void local_frame(const Point& c, const LevelSet& ls, double t,
                 double& theta, Point& normal, Point& tangent) {
    Point g = ls.grad_phi(c.x, c.y, t);
    double mag = std::hypot(g.x, g.y);
    if (mag < 1e-8) {
        // finite-difference fallback before declaring the gradient degenerate
        const double e = 1e-6;
        g.x = (ls.phi(c.x + e, c.y, t) - ls.phi(c.x - e, c.y, t)) / (2 * e);
        g.y = (ls.phi(c.x, c.y + e, t) - ls.phi(c.x, c.y - e, t)) / (2 * e);
        mag = std::hypot(g.x, g.y);
        if (mag < 1e-8) throw GeometryError("local_frame: degenerate level-set gradient");
    }
    normal = {g.x / mag, g.y / mag};
    theta = std::atan2(normal.y, normal.x);
    tangent = {-normal.y, normal.x};
}

CrossingRecord make_crossing(CrossAxis axis, int i, int j, const Point& a, const Point& b,
                             const LevelSet& ls, double t) {
    CrossingRecord r;
    r.axis = axis;
    r.i = i;
    r.j = j;
    r.pos = locate_crossing(a, b, ls, t);
    local_frame(r.pos, ls, t, r.theta, r.normal, r.tangent);
    const double seg = std::hypot(b.x - a.x, b.y - a.y);
    r.dir = {(b.x - a.x) / seg, (b.y - a.y) / seg};
    const double s = (r.pos.x - a.x) * r.dir.x + (r.pos.y - a.y) * r.dir.y;
    r.h_minus = -s;
    r.h_plus = seg - s;
    return r;
}

NodeClassification classify_nodes(const Grid2D& grid, const LevelSet& ls, double t) {
    NodeClassification cl;
    cl.m = grid.m;
    cl.n = grid.n;
    const size_t sz = grid.size();
    cl.tag.assign(sz, NodeTag::RegularPlus);
    cl.side.assign(sz, 1);
    cl.xcut.assign(sz, -1);
    cl.ycut.assign(sz, -1);

    std::vector<double> phi(sz);
    for (int j = 0; j < grid.n; ++j)
        for (int i = 0; i < grid.m; ++i)
            phi[cl.idx(i, j)] = ls.phi(grid.x(i), grid.y(j), t);

    for (int j = 0; j < grid.n; ++j) {
        for (int i = 0; i < grid.m; ++i) {
            const size_t g = cl.idx(i, j);
            cl.side[g] = is_plus(phi[g]) ? 1 : -1;
            if (i == 0 || i == grid.m - 1 || j == 0 || j == grid.n - 1) {
                cl.tag[g] = is_plus(phi[g]) ? NodeTag::RegularPlus : NodeTag::RegularMinus;
                continue;
            }
            const double pe = phi[cl.idx(i + 1, j)];
            const double pw = phi[cl.idx(i - 1, j)];
            const double pn = phi[cl.idx(i, j + 1)];
            const double ps = phi[cl.idx(i, j - 1)];
            const double pmin = std::min(std::min(pe, pw), std::min(pn, ps));
            const double pmax = std::max(std::max(pe, pw), std::max(pn, ps));
            if (pmin * pmax <= 0.0) {
                cl.tag[g] = NodeTag::Irregular;
                cl.irregular_nodes.push_back(g);
            } else if (phi[g] < 0.0) {
                cl.tag[g] = NodeTag::SolidInterior;
            } else {
                cl.tag[g] = NodeTag::RegularPlus;
            }
        }
    }
    for (int j = 1; j < grid.n - 1; ++j) {
        for (int i = 1; i < grid.m - 1; ++i) {
            const size_t g = cl.idx(i, j);
            bool cut = false;
            for (int dj = -1; dj <= 1 && !cut; ++dj)
                for (int di = -1; di <= 1 && !cut; ++di)
                    if (cl.side[cl.idx(i + di, j + dj)] != cl.side[g]) cut = true;
            if (cut) cl.stencil_cut_nodes.push_back(g);
        }
    }

    // record every cut segment
    for (int j = 0; j < grid.n; ++j) {
        for (int i = 0; i < grid.m; ++i) {
            const size_t g = cl.idx(i, j);
            if (i + 1 < grid.m) {
                const double f0 = phi[g];
                const double f1 = phi[cl.idx(i + 1, j)];
                if ((is_plus(f0) ? 1 : -1) != (is_plus(f1) ? 1 : -1)) {
                    cl.crossings.push_back(make_crossing(CrossAxis::X, i, j, grid.node(i, j),
                                                         grid.node(i + 1, j), ls, t));
                    cl.xcut[g] = static_cast<int>(cl.crossings.size()) - 1;
                }
            }
            if (j + 1 < grid.n) {
                const double f0 = phi[g];
                const double f1 = phi[cl.idx(i, j + 1)];
                if ((is_plus(f0) ? 1 : -1) != (is_plus(f1) ? 1 : -1)) {
                    cl.crossings.push_back(make_crossing(CrossAxis::Y, i, j, grid.node(i, j),
                                                         grid.node(i, j + 1), ls, t));
                    cl.ycut[g] = static_cast<int>(cl.crossings.size()) - 1;
                }
            }
        }
    }
    return cl;
}

} // namespace jumpflow
