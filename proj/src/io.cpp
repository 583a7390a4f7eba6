#include "jumpflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace jumpflow {

namespace {

void write_scalar_array(std::ofstream& out, const char* name, const Field2D& f) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    char buf[40];
    for (int j = 0; j < f.n(); ++j)
        for (int i = 0; i < f.m(); ++i) {
            std::snprintf(buf, sizeof buf, "%.12g\n", f(i, j));
            out << buf;
        }
}

} // namespace

void write_vtk(const std::string& path, const Grid2D& grid, const FlowState& s) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path);
    out << "# vtk DataFile Version 3.0\n";
    out << "flow snapshot t=" << s.t << "\n";
    out << "ASCII\nDATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << grid.m << " " << grid.n << " 1\n";
    out << "ORIGIN " << grid.x0 << " " << grid.y0 << " 0\n";
    out << "SPACING " << grid.h << " " << grid.l << " 1\n";
    out << "POINT_DATA " << grid.size() << "\n";
    write_scalar_array(out, "psi", s.psi);
    write_scalar_array(out, "zeta", s.zeta);
    write_scalar_array(out, "u", s.u);
    write_scalar_array(out, "v", s.v);
    if (!out) throw IoError("write failed for " + path);
}

void write_forces_csv(const std::string& path, const std::vector<ForceSample>& samples,
                      const std::vector<double>& displacement) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path);
    const bool with_disp = displacement.size() == samples.size();
    out << "t,cd,cl" << (with_disp ? ",displacement" : "") << "\n";
    char buf[160];
    for (size_t k = 0; k < samples.size(); ++k) {
        if (with_disp)
            std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g\n", samples[k].t, samples[k].cd,
                          samples[k].cl, displacement[k]);
        else
            std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g\n", samples[k].t, samples[k].cd,
                          samples[k].cl);
        out << buf;
    }
}

void write_spectrum_csv(const std::string& path,
                        const std::vector<std::pair<double, double>>& spectrum) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path);
    out << "freq,magnitude\n";
    char buf[80];
    for (const auto& [f, m] : spectrum) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", f, m);
        out << buf;
    }
}

void append_streaklines_csv(const std::string& path, const std::vector<StreakRow>& rows,
                            bool header) {
    std::ofstream out(path, header ? std::ios::trunc : std::ios::app);
    if (!out) throw IoError("cannot open " + path);
    if (header) out << "id,t,x,y\n";
    char buf[120];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.8g,%.10g,%.10g\n", r.id, r.t, r.x, r.y);
        out << buf;
    }
}

void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path);
    out << "N,max_error,roc\n";
    char buf[80];
    for (const auto& r : rows) {
        if (std::isnan(r.roc))
            std::snprintf(buf, sizeof buf, "%d,%.10g,\n", r.n, r.max_error);
        else
            std::snprintf(buf, sizeof buf, "%d,%.10g,%.4g\n", r.n, r.max_error, r.roc);
        out << buf;
    }
}

void read_forces_csv(const std::string& path, std::vector<double>& t, std::vector<double>& cl,
                     std::vector<double>* cd) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty file");
    // header: locate t, cd, cl columns
    int col_t = -1, col_cd = -1, col_cl = -1, ncols = 0;
    {
        std::stringstream hs(line);
        std::string name;
        while (std::getline(hs, name, ',')) {
            if (name == "t") col_t = ncols;
            if (name == "cd") col_cd = ncols;
            if (name == "cl") col_cl = ncols;
            ++ncols;
        }
    }
    if (col_t < 0 || col_cl < 0) throw IoError(path + ": line 1: missing t or cl column");
    t.clear();
    cl.clear();
    if (cd) cd->clear();
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string cell;
        int col = 0;
        double tv = 0, clv = 0, cdv = 0;
        int seen = 0;
        while (std::getline(ls, cell, ',')) {
            try {
                if (col == col_t) { tv = std::stod(cell); ++seen; }
                if (col == col_cl) { clv = std::stod(cell); ++seen; }
                if (cd && col == col_cd) cdv = std::stod(cell);
            } catch (const std::exception&) {
                throw IoError(path + ": line " + std::to_string(lineno) + ": bad number '" + cell + "'");
            }
            ++col;
        }
        if (seen != 2) throw IoError(path + ": line " + std::to_string(lineno) + ": missing fields");
        t.push_back(tv);
        cl.push_back(clv);
        if (cd) cd->push_back(cdv);
    }
    if (t.empty()) throw IoError(path + ": no data rows");
}

namespace {
constexpr uint32_t kCheckpointMagic = 0x4a46434bu; // "JFCK"
constexpr uint32_t kCheckpointVersion = 1;

void put_u32(std::ofstream& o, uint32_t v) { o.write(reinterpret_cast<const char*>(&v), 4); }
void put_u64(std::ofstream& o, uint64_t v) { o.write(reinterpret_cast<const char*>(&v), 8); }
void put_f64(std::ofstream& o, double v) { o.write(reinterpret_cast<const char*>(&v), 8); }
uint32_t get_u32(std::ifstream& i) { uint32_t v; i.read(reinterpret_cast<char*>(&v), 4); return v; }
uint64_t get_u64(std::ifstream& i) { uint64_t v; i.read(reinterpret_cast<char*>(&v), 8); return v; }
double get_f64(std::ifstream& i) { double v; i.read(reinterpret_cast<char*>(&v), 8); return v; }
} // namespace

void save_checkpoint(const std::string& path, const FlowState& s, uint64_t config_hash) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path);
    put_u32(out, kCheckpointMagic);
    put_u32(out, kCheckpointVersion);
    put_u64(out, config_hash);
    put_f64(out, s.t);
    put_u64(out, static_cast<uint64_t>(s.step));
    put_u32(out, static_cast<uint32_t>(s.psi.m()));
    put_u32(out, static_cast<uint32_t>(s.psi.n()));
    for (const Field2D* f : {&s.psi, &s.zeta, &s.u, &s.v})
        out.write(reinterpret_cast<const char*>(f->data().data()),
                  static_cast<std::streamsize>(f->size() * sizeof(double)));
    if (!out) throw IoError("write failed for " + path);
}

FlowState load_checkpoint(const std::string& path, uint64_t expected_hash) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    if (get_u32(in) != kCheckpointMagic) throw IoError(path + ": not a checkpoint file");
    if (get_u32(in) != kCheckpointVersion) throw IoError(path + ": unsupported checkpoint version");
    const uint64_t hash = get_u64(in);
    if (hash != expected_hash)
        throw IoError(path + ": checkpoint was produced by a different configuration");
    FlowState s;
    s.t = get_f64(in);
    s.step = static_cast<long>(get_u64(in));
    const int m = static_cast<int>(get_u32(in));
    const int n = static_cast<int>(get_u32(in));
    s.psi = Field2D(m, n);
    s.zeta = Field2D(m, n);
    s.u = Field2D(m, n);
    s.v = Field2D(m, n);
    for (Field2D* f : {&s.psi, &s.zeta, &s.u, &s.v})
        in.read(reinterpret_cast<char*>(f->data().data()),
                static_cast<std::streamsize>(f->size() * sizeof(double)));
    if (!in) throw IoError(path + ": truncated checkpoint");
    return s;
}

} // namespace jumpflow
