#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jumpflow {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Uniform Cartesian grid on [x0,xf] x [y0,yf] with M x N nodes.
struct Grid2D {
    double x0 = 0.0, xf = 1.0, y0 = 0.0, yf = 1.0;
    int m = 0, n = 0;
    double h = 0.0, l = 0.0;

    Grid2D() = default;
    Grid2D(double x0_, double xf_, double y0_, double yf_, int m_, int n_);

    double x(int i) const { return x0 + i * h; }
    double y(int j) const { return y0 + j * l; }
    Point node(int i, int j) const { return {x(i), y(j)}; }
    size_t idx(int i, int j) const { return static_cast<size_t>(j) * m + i; }
    size_t size() const { return static_cast<size_t>(m) * n; }
    bool interior(int i, int j) const { return i > 0 && i < m - 1 && j > 0 && j < n - 1; }
};

/// Rigid transverse oscillation: y-displacement A(t)*sin(2*pi*f*t) with
/// A(t) = a0*(1 - exp(-a1*t)). a0 = 0 means a stationary body.
struct MotionLaw {
    double a0 = 0.0;
    double a1 = 0.0;
    double freq = 0.0;

    bool moving() const { return a0 != 0.0 && freq != 0.0; }
    double amplitude(double t) const { return a0 * (1.0 - std::exp(-a1 * t)); }
    double displacement(double t) const;
    /// Surface velocity (0, 2*A(t)*pi*f*cos(2*pi*f*t)) prescribed for the body.
    Point velocity(double t) const;
};

/// One body of the shape catalog. φ<0 inside, φ>0 outside, φ=0 on the surface.
struct Shape {
    enum class Kind { Circle, Cactus, HalfPlane };
    Kind kind = Kind::Circle;
    Point center{};
    double radius = 0.5;           // circle
    double r0 = 0.4475;            // cactus base radius
    double spike = 0.105;          // cactus spike height L
    double lobes = 24.0;           // cactus angular wave number w
    Point plane_normal{1.0, 0.0};  // half-plane: φ = (p - center)·n̂
    MotionLaw motion{};

    Point center_at(double t) const;
    double phi(double x, double y, double t) const;
    Point grad_phi(double x, double y, double t) const;
};

/// Level-set of a union of bodies: φ = min over members.
class LevelSet {
public:
    LevelSet() = default;
    explicit LevelSet(std::vector<Shape> bodies) : bodies_(std::move(bodies)) {}

    const std::vector<Shape>& bodies() const { return bodies_; }
    bool empty() const { return bodies_.empty(); }
    bool any_moving() const;

    double phi(double x, double y, double t) const;
    Point grad_phi(double x, double y, double t) const;
    /// Index of the body realising the minimum at (x, y).
    int owner(double x, double y, double t) const;
    /// Velocity of the body surface nearest to (x,y); zero for stationary bodies.
    Point surface_velocity(double x, double y, double t) const;

private:
    std::vector<Shape> bodies_;
};

enum class NodeTag : uint8_t {
    RegularPlus,
    RegularMinus, // φ<0, no sign change among axis neighbours, kept as unknown (parabolic use)
    Irregular,
    SolidInterior, // φ<0 bulk, pinned by the flow solvers
};

inline bool is_plus(double phi) { return phi >= 0.0; } // φ=0 resolved as Ω⁺

enum class CrossAxis : uint8_t { X, Y, Diagonal };

/// Interface crossing on a grid segment. For X: segment (i,j)-(i+1,j); for Y:
/// (i,j)-(i,j+1); for Diagonal: segment between two diagonal stencil nodes.
struct CrossingRecord {
    CrossAxis axis = CrossAxis::X;
    int i = 0, j = 0;       // lower/left anchor node of the segment
    Point pos{};            // crossing location on Γ
    double h_plus = 0.0;    // far-node coordinate minus crossing (along the segment axis)
    double h_minus = 0.0;   // anchor-node coordinate minus crossing (negative)
    double theta = 0.0;     // angle of the interface normal (ξ-direction)
    Point normal{};         // ∇φ/|∇φ|, points into Ω⁺
    Point tangent{};
    Point dir{};            // unit direction of the segment axis (for Diagonal)
};

/// Per-node classification plus the cut-segment table.
struct NodeClassification {
    int m = 0, n = 0;
    std::vector<NodeTag> tag;
    std::vector<int8_t> side;     // +1 for Ω⁺, -1 for Ω⁻
    std::vector<int> xcut;        // crossing id on segment (i,j)-(i+1,j), -1 if none
    std::vector<int> ycut;        // crossing id on segment (i,j)-(i,j+1), -1 if none
    std::vector<CrossingRecord> crossings;
    std::vector<size_t> irregular_nodes;
    /// Interior nodes with any opposite-side member in their 3x3 stencil;
    /// superset of irregular_nodes (adds corner-only cuts), used for row
    /// corrections.
    std::vector<size_t> stencil_cut_nodes;

    size_t idx(int i, int j) const { return static_cast<size_t>(j) * m + i; }
    NodeTag tag_at(int i, int j) const { return tag[idx(i, j)]; }
    int xcut_at(int i, int j) const { return xcut[idx(i, j)]; }
    int ycut_at(int i, int j) const { return ycut[idx(i, j)]; }
};

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Root of φ on the segment [a,b]; requires a sign change. Uses the closed form
/// for circles on axis-aligned lines, otherwise a bisection/regula-falsi hybrid.
Point locate_crossing(const Point& a, const Point& b, const LevelSet& ls, double t);

/// Normal frame at a point on Γ: (θ, n, τ) with n = ∇φ/|∇φ| into Ω⁺.
void local_frame(const Point& c, const LevelSet& ls, double t,
                 double& theta, Point& normal, Point& tangent);

/// Classify all nodes and record every cut grid segment.
NodeClassification classify_nodes(const Grid2D& grid, const LevelSet& ls, double t);

/// Crossing record for an arbitrary segment (used for diagonal stencil legs).
CrossingRecord make_crossing(CrossAxis axis, int i, int j, const Point& a, const Point& b,
                             const LevelSet& ls, double t);

} // namespace jumpflow
