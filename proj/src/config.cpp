#include "jumpflow/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace jumpflow {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, int line) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": expected a number, got '" + v + "'");
    }
}

int to_int(const std::string& v, int line) {
    const double x = to_double(v, line);
    if (x != std::floor(x)) throw ConfigError("line " + std::to_string(line) + ": expected an integer");
    return static_cast<int>(x);
}

bool to_bool(const std::string& v, int line) {
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    throw ConfigError("line " + std::to_string(line) + ": expected a boolean, got '" + v + "'");
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    c.bodies.clear();
    c.seeds.clear();

    std::istringstream in(text);
    std::string raw;
    std::string section;
    Shape* body = nullptr;
    int line = 0;

    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (const auto hash = s.find('#'); hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;

        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("line " + std::to_string(line) + ": bad section");
            section = trim(s.substr(1, s.size() - 2));
            if (section == "body") {
                c.bodies.emplace_back();
                body = &c.bodies.back();
            } else {
                body = nullptr;
            }
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));

        if (section.empty()) {
            if (key == "case")
                c.case_kind = val;
            else
                throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
        } else if (section == "grid") {
            if (key == "x0") c.x0 = to_double(val, line);
            else if (key == "xf") c.xf = to_double(val, line);
            else if (key == "y0") c.y0 = to_double(val, line);
            else if (key == "yf") c.yf = to_double(val, line);
            else if (key == "m") c.m = to_int(val, line);
            else if (key == "n") c.n = to_int(val, line);
            else throw ConfigError("line " + std::to_string(line) + ": unknown grid key '" + key + "'");
        } else if (section == "physics") {
            if (key == "re") c.re = to_double(val, line);
            else if (key == "u0") c.u0 = to_double(val, line);
            else if (key == "nu") c.nu = to_double(val, line);
            else if (key == "kx") c.kx = to_double(val, line);
            else if (key == "ky") c.ky = to_double(val, line);
            else throw ConfigError("line " + std::to_string(line) + ": unknown physics key '" + key + "'");
        } else if (section == "numerics") {
            if (key == "dt") c.dt = to_double(val, line);
            else if (key == "t_end") c.t_end = to_double(val, line);
            else if (key == "k") c.korder = to_int(val, line);
            else if (key == "solver_tol") c.solver_tol = to_double(val, line);
            else if (key == "solver_maxiter") c.solver_maxiter = to_int(val, line);
            else if (key == "fixed_point_sweep") c.fixed_point_sweep = to_bool(val, line);
            else if (key == "threads") c.threads = to_int(val, line);
            else throw ConfigError("line " + std::to_string(line) + ": unknown numerics key '" + key + "'");
        } else if (section == "output") {
            if (key == "dir") c.out_dir = val;
            else if (key == "snapshot_every") c.snapshot_every = to_int(val, line);
            else if (key == "forces_every") c.forces_every = to_int(val, line);
            else if (key == "checkpoint_every") c.checkpoint_every = to_int(val, line);
            else throw ConfigError("line " + std::to_string(line) + ": unknown output key '" + key + "'");
        } else if (section == "forces") {
            if (key == "box_inflate") c.box_inflate = to_double(val, line);
            else throw ConfigError("line " + std::to_string(line) + ": unknown forces key '" + key + "'");
        } else if (section == "streaklines") {
            if (key == "enabled") c.streaklines = to_bool(val, line);
            else if (key == "release_every") c.release_every = to_double(val, line);
            else if (key == "seed") {
                std::istringstream p(val);
                Point pt;
                if (!(p >> pt.x >> pt.y))
                    throw ConfigError("line " + std::to_string(line) + ": seed needs two numbers");
                c.seeds.push_back(pt);
            } else
                throw ConfigError("line " + std::to_string(line) + ": unknown streaklines key '" + key + "'");
        } else if (section == "body") {
            if (!body) throw ConfigError("line " + std::to_string(line) + ": key outside a [body] section");
            if (key == "shape") {
                if (val == "circle") body->kind = Shape::Kind::Circle;
                else if (val == "cactus") body->kind = Shape::Kind::Cactus;
                else throw ConfigError("line " + std::to_string(line) + ": unknown shape '" + val + "'");
            } else if (key == "center") {
                std::istringstream p(val);
                if (!(p >> body->center.x >> body->center.y))
                    throw ConfigError("line " + std::to_string(line) + ": center needs two numbers");
            } else if (key == "radius") body->radius = to_double(val, line);
            else if (key == "r0") body->r0 = to_double(val, line);
            else if (key == "spike") body->spike = to_double(val, line);
            else if (key == "lobes") body->lobes = to_double(val, line);
            else if (key == "motion") {
                if (val == "stationary") body->motion = MotionLaw{};
                else if (val != "oscillate")
                    throw ConfigError("line " + std::to_string(line) + ": unknown motion '" + val + "'");
            } else if (key == "a0") body->motion.a0 = to_double(val, line);
            else if (key == "a1") body->motion.a1 = to_double(val, line);
            else if (key == "freq") body->motion.freq = to_double(val, line);
            else throw ConfigError("line " + std::to_string(line) + ": unknown body key '" + key + "'");
        } else {
            throw ConfigError("line " + std::to_string(line) + ": unknown section [" + section + "]");
        }
    }

    if (c.case_kind != "flow" && c.case_kind != "parabolic")
        throw ConfigError("case must be 'flow' or 'parabolic'");
    if (!(c.dt > 0.0 && c.dt <= 0.1)) throw ConfigError("dt must lie in (0, 0.1]");
    if (c.t_end < c.dt) throw ConfigError("t_end must be at least dt");
    if (c.korder != 2 && c.korder != 3) throw ConfigError("k must be 2 or 3");
    if (c.m < 5 || c.n < 5) throw ConfigError("grid needs at least 5 nodes per direction");
    if (c.solver_tol <= 0.0) throw ConfigError("solver_tol must be positive");
    if (c.threads < 1) throw ConfigError("threads must be at least 1");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream o;
    o.precision(17);
    o << "case = " << c.case_kind << "\n\n[grid]\n";
    o << "x0 = " << c.x0 << "\nxf = " << c.xf << "\ny0 = " << c.y0 << "\nyf = " << c.yf << "\n";
    o << "m = " << c.m << "\nn = " << c.n << "\n\n[physics]\n";
    o << "re = " << c.re << "\nu0 = " << c.u0 << "\nnu = " << c.nu << "\nkx = " << c.kx
      << "\nky = " << c.ky << "\n\n[numerics]\n";
    o << "dt = " << c.dt << "\nt_end = " << c.t_end << "\nk = " << c.korder
      << "\nsolver_tol = " << c.solver_tol << "\nsolver_maxiter = " << c.solver_maxiter
      << "\nfixed_point_sweep = " << (c.fixed_point_sweep ? "true" : "false")
      << "\nthreads = " << c.threads << "\n\n[output]\n";
    o << "dir = " << c.out_dir << "\nsnapshot_every = " << c.snapshot_every
      << "\nforces_every = " << c.forces_every << "\ncheckpoint_every = " << c.checkpoint_every
      << "\n\n[forces]\nbox_inflate = " << c.box_inflate << "\n";
    if (c.streaklines || !c.seeds.empty()) {
        o << "\n[streaklines]\nenabled = " << (c.streaklines ? "true" : "false")
          << "\nrelease_every = " << c.release_every << "\n";
        for (const auto& s : c.seeds) o << "seed = " << s.x << " " << s.y << "\n";
    }
    for (const auto& b : c.bodies) {
        o << "\n[body]\n";
        o << "shape = " << (b.kind == Shape::Kind::Circle ? "circle" : "cactus") << "\n";
        o << "center = " << b.center.x << " " << b.center.y << "\n";
        if (b.kind == Shape::Kind::Circle)
            o << "radius = " << b.radius << "\n";
        else
            o << "r0 = " << b.r0 << "\nspike = " << b.spike << "\nlobes = " << b.lobes << "\n";
        if (b.motion.moving()) {
            o << "motion = oscillate\na0 = " << b.motion.a0 << "\na1 = " << b.motion.a1
              << "\nfreq = " << b.motion.freq << "\n";
        }
    }
    return o.str();
}

uint64_t config_hash(const RunConfig& c) {
    const std::string s = serialize_config(c);
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

FlowCase to_flow_case(const RunConfig& c) {
    if (c.case_kind != "flow") throw ConfigError("config is not a flow case");
    FlowCase f;
    f.grid = Grid2D(c.x0, c.xf, c.y0, c.yf, c.m, c.n);
    f.bodies = LevelSet(c.bodies);
    f.re = c.re;
    f.u0 = c.u0;
    f.dt = c.dt;
    f.t_end = c.t_end;
    f.korder = std::min(c.korder, 2); // flow jump data is available up to order 2
    f.solver_tol = c.solver_tol;
    f.solver_maxiter = c.solver_maxiter;
    f.fixed_point_sweep = c.fixed_point_sweep;
    return f;
}

ParabolicCase to_parabolic_case(const RunConfig& c, int n_override) {
    if (c.case_kind != "parabolic") throw ConfigError("config is not a parabolic case");
    const int n = n_override > 0 ? n_override : c.n;
    const int m = n_override > 0 ? n_override : c.m;
    ParabolicCase p = default_parabolic_case(n);
    p.grid = Grid2D(c.x0, c.xf, c.y0, c.yf, m, n);
    if (!c.bodies.empty()) p.interface = LevelSet(c.bodies);
    p.nu = c.nu;
    p.kx = c.kx;
    p.ky = c.ky;
    p.dt = c.dt;
    p.t_end = c.t_end;
    p.korder = c.korder;
    p.solver_tol = c.solver_tol;
    return p;
}

} // namespace jumpflow
