#pragma once

#include <cstdlib>
#include <stdexcept>

#include "adaptrdm/fcidump.hpp"
#include "adaptrdm/fermion.hpp"
#include "adaptrdm/pauli.hpp"
#include "adaptrdm/tensor.hpp"

namespace adaptrdm {

/// Second-quantized Hamiltonian over spin orbitals. Interleaved ordering:
/// spatial orbital i yields alpha at 2i and beta at 2i+1. v2 is the
/// antisymmetrized two-electron tensor <pq||rs> in physicists' ordering, so
///   H = sum h1(p,q) a^+_p a_q + 1/4 sum v2(p,q,r,s) a^+_p a^+_q a_s a_r.
/// h2_reduced repackages both parts so the energy is a pure 2-RDM functional
/// (see energy_from_2rdm); e_core stays outside as an additive scalar.
struct SpinHamiltonian {
    std::size_t n_spin_orbitals = 0;
    std::size_t n_electrons = 0;
    int ms2 = 0;
    double e_core = 0.0;
    Tensor2d h1;
    Tensor4d v2;
    Tensor4d h2_reduced;
};

inline int spin_of(std::size_t spin_orbital) { return spin_orbital % 2 == 0 ? 1 : -1; }
inline std::size_t spatial_of(std::size_t spin_orbital) { return spin_orbital / 2; }

inline SpinHamiltonian to_spin_hamiltonian(const MolecularIntegrals& mi) {
    if (mi.n_electrons < 2)
        throw std::invalid_argument(
            "to_spin_hamiltonian: the reduced Hamiltonian divides by N-1, need >= 2 electrons");
    SpinHamiltonian sh;
    const std::size_t n = 2 * mi.n_spatial;
    sh.n_spin_orbitals = n;
    sh.n_electrons = mi.n_electrons;
    sh.ms2 = mi.ms2;
    sh.e_core = mi.e_core;
    sh.h1 = Tensor2d(n);
    sh.v2 = Tensor4d(n);
    sh.h2_reduced = Tensor4d(n);

    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            if (spin_of(p) == spin_of(q))
                sh.h1(p, q) = mi.h_spatial(spatial_of(p), spatial_of(q));

    // <pq|rs> = (PR|QS) with spin deltas (p,r) and (q,s); v2 = <pq|rs> - <pq|sr>
    auto coulomb = [&](std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
        if (spin_of(p) != spin_of(r) || spin_of(q) != spin_of(s)) return 0.0;
        return mi.eri_spatial(spatial_of(p), spatial_of(r), spatial_of(q), spatial_of(s));
    };
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t s = 0; s < n; ++s)
                    sh.v2(p, q, r, s) = coulomb(p, q, r, s) - coulomb(p, q, s, r);

    const double inv_nm1 = 1.0 / static_cast<double>(mi.n_electrons - 1);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t s = 0; s < n; ++s) {
                    double one = 0.0;
                    if (q == s) one += sh.h1(p, r);
                    if (p == r) one += sh.h1(q, s);
                    sh.h2_reduced(p, q, r, s) = one * inv_nm1 + 0.5 * sh.v2(p, q, r, s);
                }
    return sh;
}

/// H minus the core-energy scalar, as a normal-ordered fermion operator.
inline FermionOperator hamiltonian_operator(const SpinHamiltonian& sh,
                                            double thresh = 1e-12) {
    const std::size_t n = sh.n_spin_orbitals;
    FermionOperator h;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) {
            const double v = sh.h1(p, q);
            if (std::abs(v) > thresh)
                h.add_term({make_ladder(p, true), make_ladder(q, false)}, v);
        }
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t s = 0; s < n; ++s) {
                    const double v = sh.v2(p, q, r, s);
                    if (std::abs(v) > thresh)
                        h.add_term({make_ladder(p, true), make_ladder(q, true),
                                    make_ladder(s, false), make_ladder(r, false)},
                                   0.25 * v);
                }
    return h;
}

inline PauliSum hamiltonian_pauli(const SpinHamiltonian& sh, double thresh = 1e-12) {
    return jordan_wigner(hamiltonian_operator(sh, thresh),
                         static_cast<unsigned>(sh.n_spin_orbitals));
}

}  // namespace adaptrdm
