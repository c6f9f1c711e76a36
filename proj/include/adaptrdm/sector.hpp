#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "adaptrdm/pauli.hpp"
#include "adaptrdm/state.hpp"

namespace adaptrdm {

using SectorVec = Eigen::VectorXcd;

/// Basis of the fixed-(N, S_z) subspace of the full register. Number- and
/// spin-conserving operators act within it, which keeps ansatz optimization
/// at the subspace dimension instead of 2^n.
struct SectorSpace {
    unsigned n_qubits = 0;
    unsigned n_electrons = 0;
    int sz2 = 0;  // twice the spin projection
    std::vector<std::uint64_t> basis;
    std::vector<std::int32_t> index_of;  // full-space index -> basis position

    static SectorSpace build(unsigned n_qubits, unsigned n_electrons, int sz2) {
        SectorSpace sp;
        sp.n_qubits = n_qubits;
        sp.n_electrons = n_electrons;
        sp.sz2 = sz2;
        const std::uint64_t dim = 1ull << n_qubits;
        sp.index_of.assign(dim, -1);
        for (std::uint64_t b = 0; b < dim; ++b) {
            if (static_cast<unsigned>(std::popcount(b)) != n_electrons) continue;
            int s = 0;
            for (unsigned q = 0; q < n_qubits; ++q)
                if (b & (1ull << q)) s += (q % 2 == 0) ? 1 : -1;
            if (s != sz2) continue;
            sp.index_of[b] = static_cast<std::int32_t>(sp.basis.size());
            sp.basis.push_back(b);
        }
        return sp;
    }

    std::size_t dim() const { return basis.size(); }

    SectorVec determinant(const std::vector<unsigned>& occupied) const {
        std::uint64_t bits = 0;
        for (unsigned o : occupied) {
            if (o >= n_qubits)
                throw std::invalid_argument("SectorSpace: orbital index out of range");
            if (bits & (1ull << o))
                throw std::invalid_argument("SectorSpace: duplicate orbital index");
            bits |= 1ull << o;
        }
        if (index_of[bits] < 0)
            throw std::invalid_argument("SectorSpace: determinant not in sector");
        SectorVec v = SectorVec::Zero(dim());
        v(index_of[bits]) = 1.0;
        return v;
    }

    State lift(const SectorVec& v) const {
        State s(n_qubits);
        for (std::size_t i = 0; i < basis.size(); ++i) s.amps[basis[i]] = v(i);
        return s;
    }

    SectorVec project(const State& s) const {
        SectorVec v(dim());
        for (std::size_t i = 0; i < basis.size(); ++i) v(i) = s.amps[basis[i]];
        return v;
    }
};

/// Sector restriction of a PauliSum, stored sparse, with the coefficient
/// one-norm kept for exponential step control.
struct CompiledOp {
    Eigen::SparseMatrix<cplx> mat;
    double one_norm = 0.0;

    SectorVec apply(const SectorVec& x) const { return mat * x; }
};

inline CompiledOp compile(const PauliSum& op, const SectorSpace& space,
                          double leak_tol = 1e-10) {
    if (op.n_qubits() != space.n_qubits)
        throw std::invalid_argument("compile: operator/space width mismatch");
    const std::size_t d = space.dim();
    std::vector<Eigen::Triplet<cplx>> triplets;
    static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::unordered_map<std::uint64_t, cplx> column;
    for (std::size_t j = 0; j < d; ++j) {
        const std::uint64_t src = space.basis[j];
        column.clear();
        for (const auto& [str, coeff] : op.terms()) {
            const cplx base = coeff * kIPow[std::popcount(str.x & str.z) & 3];
            const bool neg = std::popcount(src & str.z) & 1;
            column[src ^ str.x] += neg ? -base : base;
        }
        for (const auto& [dst, c] : column) {
            if (std::abs(c) < 1e-15) continue;
            const std::int32_t i = space.index_of[dst];
            if (i < 0) {
                if (std::abs(c) > leak_tol)
                    throw std::invalid_argument(
                        "compile: operator does not conserve the sector");
                continue;
            }
            triplets.emplace_back(i, j, c);
        }
    }
    CompiledOp out;
    out.mat.resize(d, d);
    out.mat.setFromTriplets(triplets.begin(), triplets.end());
    out.one_norm = op.coefficient_one_norm();
    return out;
}

/// exp(theta * g) |x> by Taylor iteration with step splitting; g must be the
/// compiled image of an anti-Hermitian generator.
inline SectorVec apply_exp_compiled(const CompiledOp& g, const SectorVec& x,
                                    double theta) {
    if (theta == 0.0) return x;
    const double norm1 = std::abs(theta) * g.one_norm;
    const int chunks = std::max(1, static_cast<int>(std::ceil(norm1 / 0.5)));
    const double dt = theta / chunks;
    SectorVec result = x;
    for (int c = 0; c < chunks; ++c) {
        SectorVec term = result;
        SectorVec acc = result;
        for (int k = 1; k <= 64; ++k) {
            term = (g.mat * term).eval();
            term *= dt / k;
            acc += term;
            if (term.norm() < 1e-15) break;
            if (k == 64)
                throw std::runtime_error("apply_exp_compiled: Taylor iteration failed");
        }
        result = std::move(acc);
    }
    return result;
}

/// Hamiltonian with optional overlap deflation penalties: H + sum_I beta_I
/// |psi_I><psi_I|. The scalar core energy is kept separate.
struct EffectiveHamiltonian {
    CompiledOp h;
    double e_core = 0.0;
    std::vector<std::pair<double, SectorVec>> penalties;

    SectorVec apply(const SectorVec& x) const {
        SectorVec y = h.mat * x;
        for (const auto& [beta, psi] : penalties) y += beta * psi.dot(x) * psi;
        return y;
    }

    /// <x|H_eff|x> without the core energy.
    double expectation(const SectorVec& x) const {
        return std::real(x.dot(apply(x)));
    }

    /// Variance of the physical Hamiltonian (penalties excluded).
    double variance(const SectorVec& x) const {
        SectorVec hx = h.mat * x;
        const double h2 = std::real(hx.dot(hx));
        const double h1 = std::real(x.dot(hx));
        return h2 - h1 * h1;
    }

    double physical_energy(const SectorVec& x) const {
        SectorVec hx = h.mat * x;
        return std::real(x.dot(hx)) + e_core;
    }
};

}  // namespace adaptrdm
