#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

#include "skewnum/skewnum.hpp"
#include "test_helpers.hpp"

using namespace skewnum;

TEST_CASE("instance JSON parsing", "[io]") {
    SECTION("compact real instance") {
        const std::string text =
            R"({"dims":[2,2],)"
            R"("rho":[[7,5,5,6],[5,6,2,5],[5,2,6,5],[6,5,5,7]],)"
            R"("k":[[[10,1],[1,1]],[[1,1],[1,10]]],"p":0.5})";
        const InstanceFile f = parse_instance_json(text);
        REQUIRE(f.dims == std::vector<int>{2, 2});
        REQUIRE(f.observables.size() == 2);
        REQUIRE(f.p.has_value());
        CHECK(*f.p == 0.5);

        const BipartiteInstance parsed = to_bipartite(f);
        const BipartiteInstance reference = counterexample_instance();
        CHECK(testutil::max_entry_diff(parsed.rho12.matrix, reference.rho12.matrix) == 0.0);
        CHECK(testutil::max_entry_diff(parsed.k1, reference.k1) == 0.0);
        CHECK(testutil::max_entry_diff(parsed.k2, reference.k2) == 0.0);
    }

    SECTION("mixed bare and [re, im] entries") {
        const std::string text =
            R"({"dims":[2],"rho":[[2,[0,-1]],[[0,1],2]],"k":[[[1,0],[0,-1]]]})";
        const InstanceFile f = parse_instance_json(text);
        CHECK(f.rho(0, 1) == Complex(0.0, -1.0));
        CHECK(f.rho(1, 0) == Complex(0.0, 1.0));
        CHECK_FALSE(f.p.has_value());
        CHECK(resolve_exponent(f, std::nullopt) == 0.5);
    }

    SECTION("rejects malformed input") {
        CHECK_THROWS_AS(parse_instance_json("not json"), std::invalid_argument);
        CHECK_THROWS_AS(parse_instance_json("[1,2,3]"), std::invalid_argument);
        CHECK_THROWS_AS(parse_instance_json(R"({"dims":[2],"rho":[[1,0],[0,1]]})"),
                        std::invalid_argument);
        CHECK_THROWS_AS(parse_instance_json(R"({"dims":[],"rho":[],"k":[]})"),
                        std::invalid_argument);
        CHECK_THROWS_AS(
            parse_instance_json(R"({"dims":[0],"rho":[[1]],"k":[[[1]]]})"),
            std::invalid_argument);
        CHECK_THROWS_AS(
            parse_instance_json(R"({"dims":[2.5],"rho":[[1]],"k":[[[1]]]})"),
            std::invalid_argument);
        // rho row length mismatch
        CHECK_THROWS_AS(
            parse_instance_json(R"({"dims":[2],"rho":[[1,0],[0]],"k":[[[1,0],[0,1]]]})"),
            std::invalid_argument);
        // rho not Hermitian
        CHECK_THROWS_AS(
            parse_instance_json(R"({"dims":[2],"rho":[[1,5],[2,1]],"k":[[[1,0],[0,1]]]})"),
            std::invalid_argument);
        // wrong number of observables
        CHECK_THROWS_AS(
            parse_instance_json(R"({"dims":[2,2],"rho":[[1,0,0,0],[0,1,0,0],[0,0,1,0],)"
                                R"([0,0,0,1]],"k":[[[1,0],[0,1]]]})"),
            std::invalid_argument);
        // bad entry shape
        CHECK_THROWS_AS(
            parse_instance_json(R"({"dims":[1],"rho":[[[1,2,3]]],"k":[[[1]]]})"),
            std::invalid_argument);
        // p must be a number
        CHECK_THROWS_AS(
            parse_instance_json(R"({"dims":[1],"rho":[[1]],"k":[[[1]]],"p":"half"})"),
            std::invalid_argument);
    }
}

TEST_CASE("instance JSON writing round-trips bitwise", "[io]") {
    SECTION("counterexample") {
        const InstanceFile f = from_bipartite(counterexample_instance());
        const std::string text = write_instance_json(f);
        const InstanceFile back = parse_instance_json(text);
        CHECK(back.dims == f.dims);
        CHECK(testutil::max_entry_diff(back.rho, f.rho) == 0.0);
        for (std::size_t i = 0; i < f.observables.size(); ++i)
            CHECK(testutil::max_entry_diff(back.observables[i], f.observables[i]) == 0.0);
        REQUIRE(back.p.has_value());
        CHECK(*back.p == 0.5);
        // second pass is textually stable
        CHECK(write_instance_json(back) == text);
    }

    SECTION("complex entries, including a negative-zero imaginary part") {
        const HermitianMatrix rho = HermitianMatrix::from_rows(
            {{Complex(2.0, 0.0), Complex(0.5, -0.25)}, {Complex(0.5, 0.25), Complex(3.0, 0.0)}});
        const HermitianMatrix k = HermitianMatrix::from_rows(
            {{Complex(1.0, 0.0), Complex(0.0, -0.0)}, {Complex(0.0, 0.0), Complex(-1.0, 0.0)}});
        const InstanceFile f{{2}, rho, {k}, std::nullopt};
        const InstanceFile back = parse_instance_json(write_instance_json(f));
        CHECK(testutil::max_entry_diff(back.rho, rho) == 0.0);
        CHECK(testutil::max_entry_diff(back.observables[0], k) == 0.0);
        // the sign of zero survives the trip
        CHECK(std::signbit(back.observables[0](0, 1).imag()));
        CHECK_FALSE(std::signbit(back.observables[0](1, 0).imag()));
    }

    SECTION("random doubles survive the text round trip") {
        std::mt19937_64 rng(99);
        for (int trial = 0; trial < 10; ++trial) {
            const HermitianMatrix rho = testutil::random_pd(rng, 3);
            const HermitianMatrix k = testutil::random_hermitian(rng, 3, 5.0);
            const InstanceFile f{{3}, rho, {k}, 0.3};
            const InstanceFile back = parse_instance_json(write_instance_json(f));
            CHECK(testutil::max_entry_diff(back.rho, rho) == 0.0);
            CHECK(testutil::max_entry_diff(back.observables[0], k) == 0.0);
            CHECK(*back.p == 0.3);
        }
    }
}

TEST_CASE("instance files on disk", "[io]") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "skewnum-io-test";
    fs::create_directories(dir);
    const std::string path = (dir / "roundtrip.json").string();

    SECTION("save then load") {
        const InstanceFile f = from_bipartite(counterexample_instance());
        save_instance_file(f, path);
        const InstanceFile back = load_instance_file(path);
        CHECK(testutil::max_entry_diff(back.rho, f.rho) == 0.0);
        CHECK(back.dims == f.dims);
        std::remove(path.c_str());
    }

    SECTION("missing files are reported") {
        CHECK_THROWS_AS(load_instance_file((dir / "does-not-exist.json").string()),
                        std::invalid_argument);
    }

    SECTION("unwritable paths are reported") {
        CHECK_THROWS_AS(save_instance_file(from_bipartite(counterexample_instance()),
                                           (dir / "nope" / "x.json").string()),
                        std::invalid_argument);
    }
}

TEST_CASE("instance conversion helpers", "[io]") {
    const InstanceFile bi = from_bipartite(counterexample_instance());

    SECTION("factor-count checks") {
        CHECK_THROWS_AS(to_tripartite(bi), std::invalid_argument);
        const TripartiteInstance tri = embed_sa_as_ssa(counterexample_instance());
        const InstanceFile tf = from_tripartite(tri);
        CHECK(tf.dims == std::vector<int>{2, 1, 2});
        CHECK_THROWS_AS(to_bipartite(tf), std::invalid_argument);
        const TripartiteInstance back = to_tripartite(tf);
        CHECK(testutil::max_entry_diff(back.rho123.matrix, tri.rho123.matrix) == 0.0);
    }

    SECTION("exponent precedence: override, then file, then one half") {
        CHECK(resolve_exponent(bi, 0.25) == 0.25);
        CHECK(resolve_exponent(bi, std::nullopt) == 0.5);
        InstanceFile no_p = bi;
        no_p.p.reset();
        CHECK(resolve_exponent(no_p, std::nullopt) == 0.5);
        CHECK(to_bipartite(bi, 0.3).p == 0.3);
        CHECK(to_bipartite(no_p).p == 0.5);
    }
}

TEST_CASE("shipped counterexample file", "[io]") {
    const InstanceFile f = load_instance_file(std::string(SKEWNUM_DATA_DIR) + "/hansen2006.json");
    const BipartiteInstance inst = to_bipartite(f);
    const BipartiteInstance reference = counterexample_instance();
    CHECK(testutil::max_entry_diff(inst.rho12.matrix, reference.rho12.matrix) == 0.0);
    CHECK(testutil::max_entry_diff(inst.k1, reference.k1) == 0.0);
    CHECK(testutil::max_entry_diff(inst.k2, reference.k2) == 0.0);
    CHECK(inst.p == 0.5);
    CHECK(sa_gap(inst).violated);
}
