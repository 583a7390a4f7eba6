#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "jumpflow/field.hpp"
#include "jumpflow/geometry.hpp"
#include "jumpflow/ns.hpp"

namespace jumpflow {

struct DiagnosticsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Grid-aligned rectangular momentum-balance box enclosing one body.
struct ControlBox {
    double xa = 0.0, xb = 0.0, ya = 0.0, yb = 0.0;
};

struct ForceSample {
    double t = 0.0;
    double cd = 0.0;
    double cl = 0.0;
};

/// Body bounding box inflated by `inflate` diameters each side, snapped to grid
/// lines. For an oscillating body the swept envelope is used.
ControlBox default_control_box(const Shape& body, const Grid2D& grid, double inflate = 1.5);

/// Drag and lift coefficients by the momentum (control-volume) formula:
/// -2∬(u_t, v_t) dV plus the closed counter-clockwise contour terms, all by
/// trapezoidal quadrature on grid nodes. Needs two consecutive states for u_t.
ForceSample force_coefficients(const Grid2D& grid, const NodeClassification& cl,
                               const FlowState& now, const Field2D& prev_u, const Field2D& prev_v,
                               double dt, const ControlBox& box, double re);

/// Least-squares linear detrend (in place copy).
std::vector<double> detrend(const std::vector<double>& series);

/// Magnitude spectrum of the detrended series up to Nyquist: (frequency, |X|).
std::vector<std::pair<double, double>> power_spectrum(const std::vector<double>& series,
                                                      double dt_sample);

/// Dominant-frequency Strouhal number fD/U0 with parabolic peak interpolation.
/// Returns nullopt when the spectrum has no peak ≥ 3× the median magnitude.
std::optional<double> strouhal(const std::vector<double>& lift_series, double dt_sample,
                               double diameter = 1.0, double u0 = 1.0);

// ---------------------------------------------------------------------------
// Passive streakline tracing.

struct Tracer {
    int id = 0;
    double x = 0.0, y = 0.0;
    bool frozen = false;  // entered φ<0
    bool retired = false; // left the domain
};

class StreaklineTracer {
public:
    StreaklineTracer(std::vector<Point> seeds, double release_interval);

    /// Advance all active tracers by dt (midpoint RK2, bilinear velocity) and
    /// release a new tracer per seed whenever t crosses the release schedule.
    void advance(const Grid2D& grid, const LevelSet& bodies, double t, double dt,
                 const Field2D& u, const Field2D& v);

    const std::vector<Tracer>& tracers() const { return tracers_; }

private:
    std::vector<Point> seeds_;
    double release_interval_;
    double next_release_ = 0.0;
    int next_id_ = 0;
    std::vector<Tracer> tracers_;
};

/// Bilinear interpolation of (u, v) at an arbitrary point (clamped to the grid).
Point interpolate_velocity(const Grid2D& grid, const Field2D& u, const Field2D& v, double x,
                           double y);

} // namespace jumpflow
