#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "jumpflow/config.hpp"
#include "jumpflow/io.hpp"

using namespace jumpflow;

namespace {

const char* kFlowConfig = R"(
# cylinder demo
case = flow

[grid]
x0 = -3.0
xf = 6.0
y0 = -3.0
yf = 3.0
m = 91
n = 61

[physics]
re = 40.0
u0 = 1.0

[numerics]
dt = 0.02
t_end = 0.2
k = 2

[output]
dir = /tmp/jumpflow_test_out
forces_every = 5

[body]
shape = circle
center = 0.0 0.0
radius = 0.5
)";

} // namespace

TEST_SUITE("config_io") {

TEST_CASE("config parse and round trip") {
    RunConfig c = parse_config(kFlowConfig);
    CHECK(c.case_kind == "flow");
    CHECK(c.re == 40.0);
    CHECK(c.m == 91);
    REQUIRE(c.bodies.size() == 1);
    CHECK(c.bodies[0].radius == 0.5);

    const std::string s1 = serialize_config(c);
    RunConfig c2 = parse_config(s1);
    const std::string s2 = serialize_config(c2);
    CHECK(s1 == s2); // parse → serialize → parse is idempotent
    CHECK(config_hash(c) == config_hash(c2));

    RunConfig c3 = parse_config(kFlowConfig);
    c3.re = 41.0;
    CHECK(config_hash(c) != config_hash(c3));
}

TEST_CASE("config validation errors carry line context") {
    CHECK_THROWS_AS(parse_config("case = flow\nbogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("case = juggling\n"), ConfigError);
    try {
        parse_config("case = flow\n\n[numerics]\ndt = banana\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("case = flow\n[numerics]\ndt = 0.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("case = flow\n[numerics]\nk = 7\n"), ConfigError);
}

TEST_CASE("vtk snapshot format") {
    Grid2D g(0.0, 1.0, 0.0, 0.5, 11, 6);
    FlowState s;
    s.psi = Field2D(11, 6, 1.0);
    s.zeta = Field2D(11, 6, 2.0);
    s.u = Field2D(11, 6, 3.0);
    s.v = Field2D(11, 6, 4.0);
    const std::string path = "/tmp/jumpflow_snap_test.vtk";
    write_vtk(path, g, s);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# vtk DataFile Version 3.0");
    std::getline(in, line); // title
    std::getline(in, line);
    CHECK(line == "ASCII");
    std::getline(in, line);
    CHECK(line == "DATASET STRUCTURED_POINTS");
    std::getline(in, line);
    CHECK(line == "DIMENSIONS 11 6 1");
    std::getline(in, line);
    CHECK(line.rfind("ORIGIN", 0) == 0);
    std::getline(in, line);
    CHECK(line.rfind("SPACING", 0) == 0);
    std::getline(in, line);
    CHECK(line == "POINT_DATA 66");
    int values = 0, arrays = 0;
    while (std::getline(in, line)) {
        if (line.rfind("SCALARS", 0) == 0) ++arrays;
        else if (!line.empty() && line.rfind("LOOKUP", 0) != 0) ++values;
    }
    CHECK(arrays == 4);
    CHECK(values == 4 * 66);
}

TEST_CASE("forces csv round trip and parse errors") {
    std::vector<ForceSample> fs = {{0.1, 1.25, -0.02}, {0.2, 1.27, 0.03}};
    const std::string path = "/tmp/jumpflow_forces_test.csv";
    write_forces_csv(path, fs, {});
    std::vector<double> t, cl, cd;
    read_forces_csv(path, t, cl, &cd);
    REQUIRE(t.size() == 2);
    CHECK(t[1] == doctest::Approx(0.2));
    CHECK(cl[0] == doctest::Approx(-0.02));
    CHECK(cd[1] == doctest::Approx(1.27));

    {
        std::ofstream bad("/tmp/jumpflow_bad.csv");
        bad << "t,cd,cl\n0.1,1.0,0.5\n0.2,oops,0.6\n";
    }
    try {
        read_forces_csv("/tmp/jumpflow_bad.csv", t, cl, &cd);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    {
        std::ofstream empty("/tmp/jumpflow_empty.csv");
    }
    CHECK_THROWS_AS(read_forces_csv("/tmp/jumpflow_empty.csv", t, cl), IoError);
}

TEST_CASE("checkpoint round trip, hash guard, restart determinism") {
    RunConfig cfg = parse_config(kFlowConfig);
    const uint64_t hash = config_hash(cfg);
    FlowCase fc = to_flow_case(cfg);

    NsSolver a(fc);
    for (int s = 0; s < 5; ++s) a.advance();
    const std::string path = "/tmp/jumpflow_ckpt_test.bin";
    save_checkpoint(path, a.state(), hash);

    CHECK_THROWS_AS(load_checkpoint(path, hash + 1), IoError);

    FlowState restored = load_checkpoint(path, hash);
    CHECK(restored.t == a.state().t);
    CHECK(restored.psi.data() == a.state().psi.data());

    // restarted trajectory is bitwise identical for 10 further steps
    NsSolver b(fc);
    b.state() = std::move(restored);
    for (int s = 0; s < 10; ++s) {
        a.advance();
        b.advance();
    }
    CHECK(a.state().psi.data() == b.state().psi.data());
    CHECK(a.state().zeta.data() == b.state().zeta.data());
    CHECK(a.state().u.data() == b.state().u.data());
    CHECK(a.state().v.data() == b.state().v.data());
}

} // TEST_SUITE
