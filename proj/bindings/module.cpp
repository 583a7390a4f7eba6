#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jumpflow/config.hpp"
#include "jumpflow/diagnostics.hpp"
#include "jumpflow/jumps.hpp"
#include "jumpflow/ns.hpp"
#include "jumpflow/parabolic.hpp"
#include "jumpflow/sparse.hpp"

namespace py = pybind11;
using namespace jumpflow;

namespace {

py::array_t<double> field_to_numpy(const Field2D& f) {
    py::array_t<double> out({f.n(), f.m()});
    auto r = out.mutable_unchecked<2>();
    for (int j = 0; j < f.n(); ++j)
        for (int i = 0; i < f.m(); ++i) r(j, i) = f(i, j);
    return out;
}

LevelSet levelset_from_bodies(const std::vector<Shape>& bodies) { return LevelSet(bodies); }

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "structured-grid immersed-interface flow solver";

    py::class_<Grid2D>(m, "Grid2D")
        .def(py::init<double, double, double, double, int, int>(), py::arg("x0"), py::arg("xf"),
             py::arg("y0"), py::arg("yf"), py::arg("m"), py::arg("n"))
        .def_readonly("h", &Grid2D::h)
        .def_readonly("l", &Grid2D::l)
        .def_readonly("m", &Grid2D::m)
        .def_readonly("n", &Grid2D::n)
        .def("x", &Grid2D::x)
        .def("y", &Grid2D::y);

    py::class_<Shape> shape(m, "Shape");
    shape.def_static("circle",
                     [](double cx, double cy, double r) {
                         Shape s;
                         s.kind = Shape::Kind::Circle;
                         s.center = {cx, cy};
                         s.radius = r;
                         return s;
                     })
        .def_static("cactus",
                    [](double cx, double cy, double r0, double spike, double lobes) {
                        Shape s;
                        s.kind = Shape::Kind::Cactus;
                        s.center = {cx, cy};
                        s.r0 = r0;
                        s.spike = spike;
                        s.lobes = lobes;
                        return s;
                    })
        .def("oscillate",
             [](Shape& s, double a0, double a1, double freq) {
                 s.motion = MotionLaw{a0, a1, freq};
                 return s;
             })
        .def("phi", [](const Shape& s, double x, double y, double t) { return s.phi(x, y, t); },
             py::arg("x"), py::arg("y"), py::arg("t") = 0.0);

    py::class_<LevelSet>(m, "LevelSet")
        .def(py::init(&levelset_from_bodies))
        .def("phi", &LevelSet::phi, py::arg("x"), py::arg("y"), py::arg("t") = 0.0);

    m.def("classify_counts", [](const Grid2D& g, const LevelSet& ls, double t) {
        const auto cl = classify_nodes(g, ls, t);
        int reg_plus = 0, reg_minus = 0, irregular = 0, solid = 0;
        for (auto tag : cl.tag) {
            switch (tag) {
                case NodeTag::RegularPlus: ++reg_plus; break;
                case NodeTag::RegularMinus: ++reg_minus; break;
                case NodeTag::Irregular: ++irregular; break;
                case NodeTag::SolidInterior: ++solid; break;
            }
        }
        py::dict d;
        d["regular_plus"] = reg_plus;
        d["regular_minus"] = reg_minus;
        d["irregular"] = irregular;
        d["solid_interior"] = solid;
        d["crossings"] = (int)cl.crossings.size();
        return d;
    }, py::arg("grid"), py::arg("levelset"), py::arg("t") = 0.0);

    m.def("locate_crossing",
          [](double ax, double ay, double bx, double by, const LevelSet& ls, double t) {
              const Point p = locate_crossing({ax, ay}, {bx, by}, ls, t);
              return py::make_tuple(p.x, p.y);
          },
          py::arg("ax"), py::arg("ay"), py::arg("bx"), py::arg("by"), py::arg("levelset"),
          py::arg("t") = 0.0);

    m.def("lagrange_interpolate", [](double alpha, std::array<double, 3> p, std::array<double, 3> v) {
        return lagrange_interpolate(alpha, p, v);
    });
    m.def("one_sided_first", &one_sided_first);
    m.def("one_sided_second_grid", &one_sided_second_grid);
    m.def("one_sided_second_interface", &one_sided_second_interface);
    m.def("correction_sum", [](std::vector<double> jumps, double dist) {
        JumpSet js;
        js.k = (int)jumps.size() - 1;
        for (size_t r = 0; r < jumps.size() && r < 4; ++r) js.j[r] = jumps[r];
        return correction_sum(js, dist);
    });

    m.def("bicgstab_csr",
          [](std::vector<int> row_ptr, std::vector<int> col, std::vector<double> val,
             std::vector<double> b, double tol) {
              CsrMatrix a{(int)b.size(), std::move(row_ptr), std::move(col), std::move(val)};
              const Ilu0Factors pre = ilu0(a);
              const auto r = bicgstab(a, b, &pre, tol);
              return py::make_tuple(r.x, r.iterations, r.residual_history.back());
          },
          py::arg("row_ptr"), py::arg("col"), py::arg("val"), py::arg("b"), py::arg("tol") = 1e-13);

    m.def("run_parabolic",
          [](int n, int k, double dt, double t_end, double nu) {
              ParabolicCase c = default_parabolic_case(n);
              c.korder = k;
              c.dt = dt;
              c.t_end = t_end;
              c.nu = nu;
              const auto r = run_parabolic(c);
              return py::make_tuple(r.max_error, r.steps);
          },
          py::arg("n"), py::arg("k") = 3, py::arg("dt") = 1e-3, py::arg("t_end") = 2.5,
          py::arg("nu") = 1.0 / 200.0);

    m.def("strouhal", [](std::vector<double> series, double dt_sample) -> py::object {
        const auto st = strouhal(series, dt_sample);
        if (!st) return py::none();
        return py::float_(*st);
    });
    m.def("power_spectrum", [](std::vector<double> series, double dt_sample) {
        return power_spectrum(series, dt_sample);
    });

    m.def("config_hash_text", [](const std::string& text) { return config_hash(parse_config(text)); });

    py::class_<NsSolver>(m, "FlowSolver")
        .def(py::init([](const std::string& config_text) {
            return new NsSolver(to_flow_case(parse_config(config_text)));
        }))
        .def("advance", [](NsSolver& s, int steps) { for (int k = 0; k < steps; ++k) s.advance(); },
             py::arg("steps") = 1)
        .def_property_readonly("t", [](const NsSolver& s) { return s.state().t; })
        .def_property_readonly("step", [](const NsSolver& s) { return s.state().step; })
        .def_property_readonly("psi", [](const NsSolver& s) { return field_to_numpy(s.state().psi); })
        .def_property_readonly("zeta", [](const NsSolver& s) { return field_to_numpy(s.state().zeta); })
        .def_property_readonly("u", [](const NsSolver& s) { return field_to_numpy(s.state().u); })
        .def_property_readonly("v", [](const NsSolver& s) { return field_to_numpy(s.state().v); })
        .def("asymmetry", [](const NsSolver& s) {
            return asymmetry_metric(s.flow_case().grid, s.state().psi);
        })
        .def("forces", [](const NsSolver& s, int body) {
            const auto& fc = s.flow_case();
            const ControlBox box = default_control_box(fc.bodies.bodies().at(body), fc.grid);
            const ForceSample f = force_coefficients(fc.grid, s.classification(), s.state(),
                                                     s.prev_u(), s.prev_v(), fc.dt, box, fc.re);
            return py::make_tuple(f.cd, f.cl);
        }, py::arg("body") = 0);
}
