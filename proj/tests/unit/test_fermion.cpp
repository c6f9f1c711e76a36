#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "adaptrdm/fermion.hpp"
#include "../support.hpp"

using namespace adaptrdm;
using testsupport::dense_matrix;
using testsupport::Matrix;

namespace {
FermionOperator ladder(std::initializer_list<std::pair<unsigned, bool>> ops,
                       cplx c = 1.0) {
    return FermionOperator::from_ops(std::vector<std::pair<unsigned, bool>>(ops), c);
}
}  // namespace

TEST_CASE("fermion: anticommutator identity a_0 a^+_0 = 1 - a^+_0 a_0") {
    auto prod = multiply(ladder({{0, false}}), ladder({{0, true}}));
    auto expected = FermionOperator::identity() - ladder({{0, true}, {0, false}});
    CHECK(prod.close_to(expected, 1e-14));
}

TEST_CASE("fermion: number operator idempotence") {
    auto n0 = ladder({{0, true}, {0, false}});
    CHECK(multiply(n0, n0).close_to(n0, 1e-14));
}

TEST_CASE("fermion: (a^+_1 a_0)(a^+_0 a_1) against matrix oracle") {
    auto a = ladder({{1, true}, {0, false}});
    auto b = ladder({{0, true}, {1, false}});
    auto prod = multiply(a, b);
    Matrix m = dense_matrix(prod, 2);
    Matrix oracle = dense_matrix(a, 2) * dense_matrix(b, 2);
    CHECK((m - oracle).cwiseAbs().maxCoeff() < 1e-13);
    // canonical content: n_1 - a^+_1 a^+_0 a_0 a_1
    auto expected = ladder({{1, true}, {1, false}}) -
                    ladder({{1, true}, {0, true}, {0, false}, {1, false}});
    CHECK(prod.close_to(expected, 1e-14));
}

TEST_CASE("fermion: canonical ordering invariants") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        auto op = testsupport::random_fermion_op(rng, 3, 4);
        for (const auto& [term, c] : op.terms()) {
            // creations first, strictly decreasing; annihilations strictly increasing
            bool in_annihilations = false;
            int prev_cre = -1, prev_ann = -1;
            for (auto lop : term) {
                if (ladder_dagger(lop)) {
                    REQUIRE(!in_annihilations);
                    if (prev_cre >= 0) REQUIRE(static_cast<int>(ladder_orbital(lop)) < prev_cre);
                    prev_cre = ladder_orbital(lop);
                } else {
                    in_annihilations = true;
                    if (prev_ann >= 0) REQUIRE(static_cast<int>(ladder_orbital(lop)) > prev_ann);
                    prev_ann = ladder_orbital(lop);
                }
            }
        }
    }
}

TEST_CASE("fermion: multiplication homomorphism on random operators") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        auto a = testsupport::random_fermion_op(rng, 3, 3);
        auto b = testsupport::random_fermion_op(rng, 3, 3);
        auto m = dense_matrix(multiply(a, b), 3);
        Matrix oracle = dense_matrix(a, 3) * dense_matrix(b, 3);
        REQUIRE((m - oracle).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("fermion: self-commutator vanishes") {
    auto n0 = ladder({{0, true}, {0, false}});
    CHECK(commutator(n0, n0).is_zero());
}

TEST_CASE("fermion: commutator of Hermitian with anti-Hermitian is Hermitian") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto x = testsupport::random_fermion_op(rng, 3, 3);
        auto h = x + x.adjoint();
        auto y = testsupport::random_fermion_op(rng, 3, 3);
        auto tau = y - y.adjoint();
        REQUIRE(h.is_hermitian());
        REQUIRE(tau.is_anti_hermitian());
        CHECK(commutator(h, tau).is_hermitian(1e-11));
    }
}

TEST_CASE("fermion: [n_1, tau^1_0] against matrix oracle") {
    auto n1 = ladder({{1, true}, {1, false}});
    auto tau = ladder({{1, true}, {0, false}}) - ladder({{0, true}, {1, false}});
    auto comm = commutator(n1, tau);
    Matrix oracle = dense_matrix(n1, 2) * dense_matrix(tau, 2) -
                  dense_matrix(tau, 2) * dense_matrix(n1, 2);
    CHECK((dense_matrix(comm, 2) - oracle).cwiseAbs().maxCoeff() < 1e-13);
    // up to sign convention this is the Hermitian pair a^+_1 a_0 + a^+_0 a_1
    auto expected = ladder({{1, true}, {0, false}}) + ladder({{0, true}, {1, false}});
    CHECK((comm.close_to(expected, 1e-13) || comm.close_to(expected * cplx(-1.0), 1e-13)));
}

TEST_CASE("fermion: adjoint is an involution and matches the matrix oracle") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        auto op = testsupport::random_fermion_op(rng, 3, 4);
        CHECK(op.adjoint().adjoint().close_to(op, 1e-12));
        Matrix m = dense_matrix(op.adjoint(), 3);
        Matrix oracle = dense_matrix(op, 3).adjoint();
        REQUIRE((m - oracle).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("fermion: Pauli exclusion removes repeated factors") {
    auto op = ladder({{2, true}, {2, true}, {0, false}, {1, false}});
    CHECK(op.is_zero());
}
