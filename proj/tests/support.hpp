#pragma once

// Shared helpers and independent oracles for the test suites. The dense
// matrix builders act directly on occupation-number basis states and do not
// go through the Jordan-Wigner / PauliSum machinery they are used to check.

#include <Eigen/Dense>
#include <bit>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "adaptrdm/fermion.hpp"
#include "adaptrdm/pauli.hpp"
#include "adaptrdm/spin_hamiltonian.hpp"
#include "adaptrdm/state.hpp"

namespace testsupport {

using adaptrdm::cplx;
using Matrix = Eigen::MatrixXcd;

// a^+_p / a_p on a basis index, sign = parity of occupied modes below p
inline std::pair<std::uint64_t, double> ladder_on_basis(std::uint64_t n, unsigned p,
                                                        bool dagger) {
    const std::uint64_t bit = 1ull << p;
    if (dagger ? (n & bit) : !(n & bit)) return {0, 0.0};
    const double sign = (std::popcount(n & (bit - 1)) & 1) ? -1.0 : 1.0;
    return {dagger ? (n | bit) : (n & ~bit), sign};
}

inline Matrix dense_matrix(const adaptrdm::FermionOperator& op, unsigned n_modes) {
    const std::size_t dim = std::size_t{1} << n_modes;
    Matrix m = Matrix::Zero(dim, dim);
    for (const auto& [term, coeff] : op.terms()) {
        for (std::uint64_t col = 0; col < dim; ++col) {
            std::uint64_t state = col;
            double sign = 1.0;
            bool dead = false;
            for (auto it = term.rbegin(); it != term.rend(); ++it) {
                auto [next, s] = ladder_on_basis(state, adaptrdm::ladder_orbital(*it),
                                                 adaptrdm::ladder_dagger(*it));
                if (s == 0.0) {
                    dead = true;
                    break;
                }
                state = next;
                sign *= s;
            }
            if (!dead) m(state, col) += coeff * sign;
        }
    }
    return m;
}

inline Matrix dense_matrix(const adaptrdm::PauliSum& ps) {
    const std::size_t dim = std::size_t{1} << ps.n_qubits();
    Matrix m = Matrix::Zero(dim, dim);
    static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (const auto& [s, c] : ps.terms()) {
        const cplx base = c * kIPow[std::popcount(s.x & s.z) & 3];
        for (std::uint64_t col = 0; col < dim; ++col) {
            const bool neg = std::popcount(col & s.z) & 1;
            m(col ^ s.x, col) += neg ? -base : base;
        }
    }
    return m;
}

inline Eigen::VectorXcd to_eigen(const adaptrdm::State& s) {
    Eigen::VectorXcd v(s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) v(i) = s.amps[i];
    return v;
}

inline adaptrdm::FermionOperator random_fermion_op(std::mt19937& rng, unsigned n_modes,
                                                   int n_terms, int max_len = 4) {
    std::uniform_int_distribution<unsigned> orb(0, n_modes - 1);
    std::uniform_int_distribution<int> len(1, max_len);
    std::uniform_int_distribution<int> bit(0, 1);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    adaptrdm::FermionOperator op;
    for (int t = 0; t < n_terms; ++t) {
        std::vector<std::pair<unsigned, bool>> ops;
        const int l = len(rng);
        for (int i = 0; i < l; ++i) ops.emplace_back(orb(rng), bit(rng) == 1);
        op += adaptrdm::FermionOperator::from_ops(ops, cplx(coeff(rng), coeff(rng)));
    }
    return op;
}

/// Hartree-Fock energy by diagonal contraction of the spin-orbital integrals
/// over an occupied set (independent of any statevector machinery).
inline double hf_energy(const adaptrdm::SpinHamiltonian& sh,
                        const std::vector<unsigned>& occ) {
    double e = sh.e_core;
    for (unsigned i : occ) e += sh.h1(i, i);
    for (std::size_t a = 0; a < occ.size(); ++a)
        for (std::size_t b = a + 1; b < occ.size(); ++b)
            e += sh.v2(occ[a], occ[b], occ[a], occ[b]);
    return e;
}

inline std::string fixture_dir() {
    if (const char* env = std::getenv("ADAPT_RDM_FIXTURES")) return env;
    return "fixtures";
}

inline std::string fixture_path(const std::string& name) {
    return fixture_dir() + "/" + name + ".fcidump";
}

}  // namespace testsupport
