#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "adaptrdm/adapt.hpp"
#include "adaptrdm/spectra.hpp"
#include "../support.hpp"

using namespace adaptrdm;

namespace {
constexpr double kH2Ground = -1.137270174661;
constexpr double kH4_15_Ground = -1.996150325519;

struct H4System {
    SpinHamiltonian sh;
    SectorSpace space;
    OperatorPool pool;
    CompiledPool cp;
    EffectiveHamiltonian heff;
    SectorVec ref;

    explicit H4System(const char* fixture = "h4_1.5",
                      PoolKind kind = PoolKind::SpinAdaptedGSD) {
        sh = to_spin_hamiltonian(parse_fcidump_file(testsupport::fixture_path(fixture)));
        space = SectorSpace::build(8, 4, 0);
        pool = build_pool(4, kind);
        cp = CompiledPool::build(pool, space);
        heff.h = compile(hamiltonian_pauli(sh), space);
        heff.e_core = sh.e_core;
        ref = space.determinant({0, 1, 2, 3});
    }
};
}  // namespace

TEST_CASE("adapt: operator selection") {
    VectorXd r(3);
    r << 0.3, -1.0, 0.5;
    CHECK(select_operators(r, 2) == std::vector<std::size_t>{1, 2});
    VectorXd ties = VectorXd::Constant(4, 0.7);
    CHECK(select_operators(ties, 2) == std::vector<std::size_t>{0, 1});
    CHECK(select_operators(r, 10) == std::vector<std::size_t>{1, 2, 0});
    CHECK(select_operators(r, 3, 0.4) == std::vector<std::size_t>{1, 2});
}

TEST_CASE("adapt: config validation") {
    AdaptConfig bad;
    bad.n_update = 0;
    CHECK_THROWS(bad.validate());
    AdaptConfig vx;
    vx.variant = AdaptVariant::AdaptVx;
    vx.n_update = 40;
    vx.n_aux = 10;
    CHECK_THROWS(vx.validate());
    vx.n_aux = 40;
    CHECK_NOTHROW(vx.validate());
    AdaptConfig rn;
    rn.variant = AdaptVariant::AdaptV;
    rn.criterion = ConvergenceCriterion::ResidualNorm;
    CHECK_THROWS(rn.validate());
}

TEST_CASE("adapt: exact residuals vanish on the FCI ground state") {
    H4System s;
    auto sol = fci_solve(s.sh, {4, 0}, 1);
    auto r = residuals_exact(sol.states[0], s.cp, s.heff);
    CHECK(r.norm() < 1e-8);
}

TEST_CASE("adapt: H2 converges to the exact ground state in one iteration batch") {
    auto sh = to_spin_hamiltonian(parse_fcidump_file(testsupport::fixture_path("h2_0.7414")));
    auto pool = build_pool(2, PoolKind::SpinAdaptedGSD);
    AdaptConfig cfg;
    cfg.variant = AdaptVariant::Adapt;
    cfg.n_update = 1;
    cfg.epsilon = 1e-9;
    cfg.reference_occupations = {0, 1};
    auto trace = run_adapt(cfg, sh, pool);
    CHECK(trace.converged);
    CHECK(trace.energy == Catch::Approx(kH2Ground).margin(1e-8));
    CHECK(trace.variance < 1e-9);
}

TEST_CASE("adapt: trace energies are non-increasing and counts consistent") {
    H4System s;
    AdaptConfig cfg;
    cfg.variant = AdaptVariant::Adapt;
    cfg.n_update = 2;
    cfg.epsilon = 1e-6;
    cfg.max_iterations = 40;
    auto trace = run_adapt(cfg, s.sh, s.space, s.cp, s.heff, s.ref, "hf");
    REQUIRE(trace.converged);
    CHECK(trace.energy == Catch::Approx(kH4_15_Ground).margin(1e-4));
    std::size_t n_params = 0;
    double prev = 1e9;
    for (const auto& rec : trace.iterations) {
        CHECK(rec.energy <= prev + 1e-10);
        prev = rec.energy;
        CHECK(rec.n_parameters > n_params);  // strictly increasing
        n_params = rec.n_parameters;
    }
    CHECK(trace.n_parameters() == trace.sequence.size());
    CHECK(trace.parameters.size() == static_cast<Eigen::Index>(trace.sequence.size()));
}

TEST_CASE("adapt: exact and exact-3-RDM variants are identical runs") {
    H4System s;
    AdaptConfig cfg;
    cfg.n_update = 2;
    cfg.epsilon = 1e-5;
    cfg.max_iterations = 25;

    cfg.variant = AdaptVariant::Adapt;
    auto t_exact = run_adapt(cfg, s.sh, s.space, s.cp, s.heff, s.ref, "hf");
    cfg.variant = AdaptVariant::AdaptRdm;
    auto t_rdm = run_adapt(cfg, s.sh, s.space, s.cp, s.heff, s.ref, "hf");

    REQUIRE(t_exact.sequence == t_rdm.sequence);
    CHECK(t_exact.energy == Catch::Approx(t_rdm.energy).margin(1e-9));
    CHECK(t_exact.n_iterations() == t_rdm.n_iterations());
}

TEST_CASE("adapt: rdm residual vectors match exact residuals along a run") {
    H4System s;
    std::mt19937 rng(3);
    std::uniform_int_distribution<std::size_t> pick(0, s.pool.size() - 1);
    std::uniform_real_distribution<double> th(-0.4, 0.4);
    SectorVec state = s.ref;
    for (int i = 0; i < 5; ++i)
        state = apply_exp_compiled(s.cp.ops[pick(rng)], state, th(rng));
    auto exact = residuals_exact(state, s.cp, s.heff);
    auto via_rdm = residuals_rdm(state, s.space, s.cp, s.sh, RdmMode::Exact3, &s.heff);
    CHECK((exact - via_rdm).cwiseAbs().maxCoeff() < 1e-8);
    // valdemoro mode agrees on a determinant
    auto exact_det = residuals_exact(s.ref, s.cp, s.heff);
    auto vald_det = residuals_rdm(s.ref, s.space, s.cp, s.sh, RdmMode::Valdemoro, &s.heff);
    CHECK((exact_det - vald_det).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("adapt: with a full-size auxiliary pool Vx reduces to exact selection") {
    H4System s;
    AdaptConfig cfg;
    cfg.n_update = 2;
    cfg.epsilon = 1e-5;
    cfg.max_iterations = 25;

    cfg.variant = AdaptVariant::Adapt;
    auto t_exact = run_adapt(cfg, s.sh, s.space, s.cp, s.heff, s.ref, "hf");
    cfg.variant = AdaptVariant::AdaptVx;
    cfg.n_aux = s.pool.size();
    auto t_vx = run_adapt(cfg, s.sh, s.space, s.cp, s.heff, s.ref, "hf");
    CHECK(t_exact.sequence == t_vx.sequence);
    CHECK(t_exact.energy == Catch::Approx(t_vx.energy).margin(1e-9));
}

TEST_CASE("adapt: determinism of repeated runs") {
    H4System s;
    AdaptConfig cfg;
    cfg.variant = AdaptVariant::AdaptV;
    cfg.n_update = 3;
    cfg.epsilon = 1e-5;
    cfg.max_iterations = 20;
    auto a = run_adapt(cfg, s.sh, s.space, s.cp, s.heff, s.ref, "hf");
    auto b = run_adapt(cfg, s.sh, s.space, s.cp, s.heff, s.ref, "hf");
    CHECK(a.sequence == b.sequence);
    CHECK(a.energy == b.energy);
    CHECK(a.n_iterations() == b.n_iterations());
}

TEST_CASE("adapt: eigenstate reference converges immediately") {
    H4System s;
    auto sol = fci_solve(s.sh, {4, 0}, 1);
    AdaptConfig cfg;
    cfg.variant = AdaptVariant::Adapt;
    cfg.epsilon = 1e-8;
    auto trace = run_adapt(cfg, s.sh, s.space, s.cp, s.heff, sol.states[0], "fci");
    CHECK(trace.converged);
    CHECK(trace.n_iterations() == 0);
    CHECK(trace.energy == Catch::Approx(sol.energies[0]).margin(1e-10));
}

TEST_CASE("adapt: symmetry expectations stay constant along a trajectory") {
    H4System s;
    AdaptConfig cfg;
    cfg.variant = AdaptVariant::Adapt;
    cfg.n_update = 1;
    cfg.epsilon = 1e-5;
    cfg.max_iterations = 15;
    std::ostringstream log;
    auto trace = run_adapt(cfg, s.sh, s.space, s.cp, s.heff, s.ref, "hf", &log);
    auto full = s.space.lift(trace.final_state);
    CHECK(number_expectation(full) == Catch::Approx(4.0).margin(1e-10));
    CHECK(sz_expectation(full) == Catch::Approx(0.0).margin(1e-10));
    CHECK(std::abs(full.norm() - 1.0) < 1e-10);
    CHECK(log.str().find("iter") != std::string::npos);
    CHECK(log.str().find("bfgs") != std::string::npos);
}
