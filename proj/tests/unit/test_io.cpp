#include <doctest.h>

#include "philab/io.hpp"
#include "philab/mesh.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

using namespace philab;

TEST_CASE("mask round trip") {
    std::mt19937_64 rng(4);
    std::bernoulli_distribution B(0.6);
    DomainMask m(7, 5, Box{-0.3, 0.1, 1.0 / 3, 2.7});
    for (int j = 0; j < 5; ++j)
        for (int i = 0; i < 7; ++i) m.set(i, j, B(rng));
    std::stringstream ss;
    write_mask(ss, m);
    const auto back = read_mask(ss);
    CHECK(back == m);
    CHECK(back.box().x1 == m.box().x1);

    const auto path = std::filesystem::temp_directory_path() / "philab_test_mask.txt";
    save_mask(path, m);
    CHECK(load_mask(path) == m);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_mask(path), FormatError);
}

TEST_CASE("mask rows are written top row first") {
    DomainMask m(2, 2, Box{0, 0, 1, 1});
    m.set(0, 1, true);
    std::stringstream ss;
    write_mask(ss, m);
    CHECK(ss.str() == "2 2 0 0 1 1\n10\n00\n");
}

TEST_CASE("malformed masks") {
    for (const char *text : {"", "2 2 0 0 1\n", "2 2 0 0 1 1\n10\n", "2 2 0 0 1 1\n10\n0\n", "2 2 0 0 1 1\n10\n0x\n",
                             "2 2 0 0 0 1\n10\n00\n", "two 2 0 0 1 1\n10\n00\n"}) {
        INFO(text);
        std::istringstream is(text);
        CHECK_THROWS_AS(read_mask(is), FormatError);
    }
}

TEST_CASE("field round trip is exact") {
    const auto mesh = triangulate(rasterize(Shape::disk({0, 0}, 0.7), 12, 12, Box{-1, -1, 1, 1}));
    std::vector<double> v(mesh.num_nodes());
    for (std::size_t n = 0; n < v.size(); ++n) v[n] = std::sin(1.0 + n) / 3.0;
    std::stringstream ss;
    write_field(ss, mesh, v);
    const auto r = read_field(ss);
    REQUIRE(r.values.size() == v.size());
    for (std::size_t n = 0; n < v.size(); ++n) {
        CHECK(r.values[n] == v[n]);
        CHECK(r.nodes[n].x == mesh.nodes[n].x);
        CHECK(r.nodes[n].y == mesh.nodes[n].y);
    }
    CHECK_THROWS_AS(write_field(ss, mesh, {1.0}), ValidationError);
    std::istringstream bad("0 0\n");
    CHECK_THROWS_AS(read_field(bad), FormatError);
    std::istringstream extra("0 0 1 2\n");
    CHECK_THROWS_AS(read_field(extra), FormatError);
}

TEST_CASE("key values") {
    SolveReport rep;
    rep.iterations = 7;
    rep.energy = -0.1234567890123456789;
    rep.residual = 3e-11;
    rep.converged = true;
    std::stringstream ss;
    write_key_values(ss, to_key_values(rep));
    const auto kv = read_key_values(ss);
    CHECK(kv.at("iterations") == "7");
    CHECK(std::stod(kv.at("energy")) == rep.energy);
    CHECK(kv.at("converged") == "1");
    std::istringstream bad("lonely\n");
    CHECK_THROWS_AS(read_key_values(bad), FormatError);

    CapacityResult c;
    c.capacity = 0.5;
    c.iterations = 3;
    c.residual = 1e-9;
    CHECK(capacity_line(c) == "capacity 0.5 iterations 3 residual 1.0000000000000001e-09");
}

TEST_CASE("gamma csv round trip") {
    GammaReport r;
    r.young = "product(power:3,power:2.5)";
    r.source = "affine:1,0.5,-0.5";
    r.sequence = "inscribed_polygon";
    r.grid = {32, 16, {-1, -0.5, 1, 0.5}};
    r.dimension = 3;
    r.morrey = IntegralVerdict::divergent;
    r.measured_p_minus = 1.0 / 3;
    r.measured_p_plus = 2.5;
    r.limit_sobolev_norm = 0.1;
    r.limit_grad_modular = std::nextafter(0.2, 1.0);
    r.limit_l2_norm = 1e-300;
    r.limit_energy = -7.25;
    for (int k : {4, 8, 16}) r.rows.push_back({k, 1.0 / k, 0.0, 0.1 / k, 1e-3 / k, -0.5 - 1.0 / k, std::sqrt(k)});
    std::stringstream ss;
    write_gamma_csv(ss, r);
    CHECK(read_gamma_csv(ss) == r);
}

TEST_CASE("malformed gamma csv") {
    for (const char *text : {"# young power:3\n", "# colour red\nk,d_hc,cap_diff,sobolev_dist,grad_modular_gap,energy,l2_norm\n",
                             "k,d_hc\n", "k,d_hc,cap_diff,sobolev_dist,grad_modular_gap,energy,l2_norm\n1,2,3\n",
                             "k,d_hc,cap_diff,sobolev_dist,grad_modular_gap,energy,l2_norm\n1,a,0,0,0,0,0\n",
                             "# morrey maybe\nk,d_hc,cap_diff,sobolev_dist,grad_modular_gap,energy,l2_norm\n"}) {
        INFO(text);
        std::istringstream is(text);
        CHECK_THROWS_AS(read_gamma_csv(is), FormatError);
    }
}

TEST_CASE("format_double keeps 17 digits") {
    const double v = 0.1;
    CHECK(std::stod(format_double(v)) == v);
    CHECK(format_double(1) == "1");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}
