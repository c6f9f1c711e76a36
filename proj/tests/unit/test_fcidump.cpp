#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>

#include "adaptrdm/fcidump.hpp"
#include "../support.hpp"

using namespace adaptrdm;

TEST_CASE("fcidump: header plus core-energy record") {
    auto mi = parse_fcidump("&FCI NORB=2,NELEC=2,MS2=0,&END\n0.5 0 0 0 0\n");
    CHECK(mi.n_spatial == 2);
    CHECK(mi.n_electrons == 2);
    CHECK(mi.ms2 == 0);
    CHECK(mi.e_core == 0.5);
    for (double v : mi.h_spatial.data) CHECK(v == 0.0);
    for (double v : mi.eri_spatial.data) CHECK(v == 0.0);
}

TEST_CASE("fcidump: one-body record is symmetrized") {
    auto mi = parse_fcidump("&FCI NORB=2,NELEC=2,MS2=0,&END\n0.25 1 2 0 0\n");
    CHECK(mi.h_spatial(0, 1) == 0.25);
    CHECK(mi.h_spatial(1, 0) == 0.25);
}

TEST_CASE("fcidump: eight-fold ERI expansion") {
    auto mi = parse_fcidump("&FCI NORB=3,NELEC=2,MS2=0,&END\n1.5 1 2 3 3\n");
    CHECK(mi.eri_spatial(0, 1, 2, 2) == 1.5);
    CHECK(mi.eri_spatial(1, 0, 2, 2) == 1.5);
    CHECK(mi.eri_spatial(2, 2, 0, 1) == 1.5);
    CHECK(mi.eri_spatial(2, 2, 1, 0) == 1.5);
}

TEST_CASE("fcidump: multi-line header with ORBSYM ignored") {
    auto mi = parse_fcidump(
        "&FCI NORB= 4,NELEC=4,MS2=0,\n ORBSYM=1,1,1,1,\n ISYM=1,\n&END\n"
        "1.0D-01 1 1 0 0\n");
    CHECK(mi.n_spatial == 4);
    CHECK(mi.h_spatial(0, 0) == Catch::Approx(0.1));
}

TEST_CASE("fcidump: error reporting") {
    CHECK_THROWS_WITH(parse_fcidump("&FCI NELEC=2,&END\n"),
                      Catch::Matchers::ContainsSubstring("NORB"));
    CHECK_THROWS_WITH(parse_fcidump("&FCI NORB=2,&END\n"),
                      Catch::Matchers::ContainsSubstring("NELEC"));
    CHECK_THROWS_WITH(parse_fcidump("&FCI NORB=2,NELEC=2,&END\n1.0 5 1 0 0\n"),
                      Catch::Matchers::ContainsSubstring("line 2"));
    CHECK_THROWS_WITH(parse_fcidump("&FCI NORB=2,NELEC=2,&END\nabc 1 1 0 0\n"),
                      Catch::Matchers::ContainsSubstring("non-numeric"));
    CHECK_THROWS(parse_fcidump("&FCI NORB=2,NELEC=9,&END\n"));
    CHECK_THROWS(parse_fcidump("&FCI NORB=2,NELEC=2\n0.5 0 0 0 0\n"));  // no &END
}

TEST_CASE("fcidump: slash terminates header") {
    auto mi = parse_fcidump("&FCI NORB=1,NELEC=2,MS2=0\n/\n-0.25 1 1 0 0\n");
    CHECK(mi.n_spatial == 1);
    CHECK(mi.h_spatial(0, 0) == -0.25);
}

TEST_CASE("fcidump: write/parse round-trip preserves tensors") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    MolecularIntegrals mi;
    mi.n_spatial = 3;
    mi.n_electrons = 4;
    mi.ms2 = 0;
    mi.e_core = u(rng);
    mi.h_spatial = Tensor2d(3);
    mi.eri_spatial = Tensor4d(3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double v = u(rng);
            mi.h_spatial(i, j) = mi.h_spatial(j, i) = v;
        }
    // fill with full 8-fold symmetry
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            for (std::size_t k = 0; k < 3; ++k)
                for (std::size_t l = 0; l <= k; ++l) {
                    double v = u(rng);
                    for (auto [p, q] : {std::pair{i, j}, {j, i}})
                        for (auto [r, s] : {std::pair{k, l}, {l, k}}) {
                            mi.eri_spatial(p, q, r, s) = v;
                            mi.eri_spatial(r, s, p, q) = v;
                        }
                }
    auto mi2 = parse_fcidump(write_fcidump(mi));
    CHECK(mi2.n_spatial == mi.n_spatial);
    CHECK(mi2.n_electrons == mi.n_electrons);
    CHECK(mi2.e_core == Catch::Approx(mi.e_core).margin(1e-12));
    for (std::size_t i = 0; i < mi.h_spatial.data.size(); ++i)
        CHECK(mi2.h_spatial.data[i] == Catch::Approx(mi.h_spatial.data[i]).margin(1e-12));
    for (std::size_t i = 0; i < mi.eri_spatial.data.size(); ++i)
        CHECK(mi2.eri_spatial.data[i] ==
              Catch::Approx(mi.eri_spatial.data[i]).margin(1e-12));
}

TEST_CASE("fcidump: bundled fixtures parse and obey symmetry invariants") {
    auto mi = parse_fcidump_file(testsupport::fixture_path("h2_0.7414"));
    CHECK(mi.n_spatial == 2);
    CHECK(mi.n_electrons == 2);
    for (std::size_t i = 0; i < mi.n_spatial; ++i)
        for (std::size_t j = 0; j < mi.n_spatial; ++j)
            CHECK(std::abs(mi.h_spatial(i, j) - mi.h_spatial(j, i)) < 1e-12);
    for (std::size_t i = 0; i < mi.n_spatial; ++i)
        for (std::size_t j = 0; j < mi.n_spatial; ++j)
            for (std::size_t k = 0; k < mi.n_spatial; ++k)
                for (std::size_t l = 0; l < mi.n_spatial; ++l) {
                    double v = mi.eri_spatial(i, j, k, l);
                    CHECK(std::abs(v - mi.eri_spatial(j, i, k, l)) < 1e-12);
                    CHECK(std::abs(v - mi.eri_spatial(i, j, l, k)) < 1e-12);
                    CHECK(std::abs(v - mi.eri_spatial(k, l, i, j)) < 1e-12);
                }
}
