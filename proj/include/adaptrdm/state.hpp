#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "adaptrdm/pauli.hpp"
#include "adaptrdm/rdm.hpp"

namespace adaptrdm {

/// Dense statevector over 2^n_qubits amplitudes. Basis index bit i is the
/// occupation of spin orbital i. Value semantics; operations never mutate
/// their inputs.
struct State {
    unsigned n_qubits = 0;
    std::vector<cplx> amps;

    State() = default;
    explicit State(unsigned nq) : n_qubits(nq), amps(std::size_t{1} << nq, cplx{0.0}) {}

    std::size_t dim() const { return amps.size(); }

    double norm() const {
        double s = 0.0;
        for (const auto& a : amps) s += std::norm(a);
        return std::sqrt(s);
    }
};

inline State prepare_reference(const std::vector<unsigned>& occupied, unsigned n_qubits) {
    std::set<unsigned> seen;
    std::uint64_t idx = 0;
    for (unsigned o : occupied) {
        if (o >= n_qubits)
            throw std::invalid_argument("prepare_reference: orbital index out of range");
        if (!seen.insert(o).second)
            throw std::invalid_argument("prepare_reference: duplicate orbital index");
        idx |= (1ull << o);
    }
    State s(n_qubits);
    s.amps[idx] = 1.0;
    return s;
}

inline State apply(const PauliSum& h, const State& s) {
    if (h.n_qubits() != s.n_qubits)
        throw std::invalid_argument("apply: operator/state width mismatch");
    State out(s.n_qubits);
    const std::size_t dim = s.dim();
    static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (const auto& [str, coeff] : h.terms()) {
        const cplx base = coeff * kIPow[std::popcount(str.x & str.z) & 3];
        const std::uint64_t x = str.x, z = str.z;
        for (std::size_t n = 0; n < dim; ++n) {
            const cplx a = s.amps[n];
            if (a == cplx{0.0}) continue;
            const bool neg = std::popcount(n & z) & 1;
            out.amps[n ^ x] += neg ? -base * a : base * a;
        }
    }
    return out;
}

inline cplx overlap(const State& a, const State& b) {
    if (a.n_qubits != b.n_qubits)
        throw std::invalid_argument("overlap: state dimension mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a.amps[i]) * b.amps[i];
    return s;
}

inline double expectation(const State& s, const PauliSum& h) {
    cplx v = overlap(s, apply(h, s));
    if (std::abs(v.imag()) > 1e-10)
        throw std::runtime_error("expectation: non-Hermitian operator image");
    return v.real();
}

/// <h^2> - <h>^2, evaluated by applying h twice (no operator squaring).
inline double variance(const State& s, const PauliSum& h) {
    State hs = apply(h, s);
    const double h2 = overlap(hs, hs).real();
    const cplx h1 = overlap(s, hs);
    if (std::abs(h1.imag()) > 1e-10)
        throw std::runtime_error("variance: non-Hermitian operator image");
    return h2 - h1.real() * h1.real();
}

/// Exact action of the exponential of theta * g via a Taylor iteration on
/// matrix-vector products. g with purely imaginary coefficients (the image of
/// an anti-Hermitian fermion op) yields exp(theta g); with purely real
/// coefficients (Hermitian image) the convention is exp(i theta g).
inline State apply_exp_generator(const State& s, const PauliSum& g, double theta) {
    if (theta == 0.0) return s;
    cplx scale;
    if (g.has_imaginary_coefficients())
        scale = theta;
    else if (g.has_real_coefficients())
        scale = cplx(0.0, theta);
    else
        throw std::invalid_argument(
            "apply_exp_generator: generator is neither Hermitian nor anti-Hermitian");

    const double norm1 = std::abs(scale) * g.coefficient_one_norm();
    const int chunks = std::max(1, static_cast<int>(std::ceil(norm1 / 0.5)));
    const cplx dt = scale / static_cast<double>(chunks);

    State result = s;
    for (int c = 0; c < chunks; ++c) {
        State term = result;
        State acc = result;
        for (int k = 1; k <= 64; ++k) {
            term = apply(g, term);
            const cplx factor = dt / static_cast<double>(k);
            double tnorm = 0.0;
            for (std::size_t i = 0; i < term.dim(); ++i) {
                term.amps[i] *= factor;
                acc.amps[i] += term.amps[i];
                tnorm += std::norm(term.amps[i]);
            }
            if (std::sqrt(tnorm) < 1e-15) break;
            if (k == 64)
                throw std::runtime_error("apply_exp_generator: Taylor iteration failed");
        }
        result = std::move(acc);
    }
    return result;
}

/// a_p on the statevector (Jordan-Wigner sign on lower indices).
inline State apply_annihilation(const State& s, unsigned p) {
    State out(s.n_qubits);
    const std::uint64_t bit = 1ull << p;
    const std::uint64_t lower = bit - 1;
    for (std::size_t n = 0; n < s.dim(); ++n) {
        if (!(n & bit)) continue;
        const cplx a = s.amps[n];
        if (a == cplx{0.0}) continue;
        const bool neg = std::popcount(n & lower) & 1;
        out.amps[n & ~bit] = neg ? -a : a;
    }
    return out;
}

inline State apply_creation(const State& s, unsigned p) {
    State out(s.n_qubits);
    const std::uint64_t bit = 1ull << p;
    const std::uint64_t lower = bit - 1;
    for (std::size_t n = 0; n < s.dim(); ++n) {
        if (n & bit) continue;
        const cplx a = s.amps[n];
        if (a == cplx{0.0}) continue;
        const bool neg = std::popcount(n & lower) & 1;
        out.amps[n | bit] = neg ? -a : a;
    }
    return out;
}

inline double number_expectation(const State& s) {
    double v = 0.0;
    for (std::size_t n = 0; n < s.dim(); ++n)
        v += std::norm(s.amps[n]) * std::popcount(n);
    return v;
}

inline double sz_expectation(const State& s) {
    double v = 0.0;
    for (std::size_t n = 0; n < s.dim(); ++n) {
        if (s.amps[n] == cplx{0.0}) continue;
        int sz2 = 0;
        for (unsigned q = 0; q < s.n_qubits; ++q)
            if (n & (1ull << q)) sz2 += (q % 2 == 0) ? 1 : -1;
        v += std::norm(s.amps[n]) * 0.5 * sz2;
    }
    return v;
}

namespace detail {

inline void combinations(std::size_t n, int m, std::vector<std::array<unsigned, 3>>& out) {
    std::array<unsigned, 3> t{};
    if (m == 1) {
        for (unsigned a = 0; a < n; ++a) out.push_back({a, 0, 0});
    } else if (m == 2) {
        for (unsigned a = 0; a < n; ++a)
            for (unsigned b = a + 1; b < n; ++b) out.push_back({a, b, 0});
    } else {
        for (unsigned a = 0; a < n; ++a)
            for (unsigned b = a + 1; b < n; ++b)
                for (unsigned c = b + 1; c < n; ++c) out.push_back({a, b, c});
    }
    (void)t;
}

}  // namespace detail

/// Full m-RDM tensor of the state, measured by applying ladder-operator
/// strings: D(P;Q) = (1/m!) <K_P | K_Q> with K_T = a_{tm}..a_{t1}|s>.
inline Rdm measure_rdm(const State& s, int order) {
    if (order < 1 || order > 3)
        throw std::invalid_argument("measure_rdm: order must be 1, 2 or 3");
    const std::size_t n = s.n_qubits;
    if (static_cast<std::size_t>(order) * 2 > n)
        throw std::invalid_argument("measure_rdm: order too large for register");
    const int m = order;

    std::vector<std::array<unsigned, 3>> tuples;
    detail::combinations(n, m, tuples);
    const std::size_t nt = tuples.size();

    std::vector<State> k_states;
    k_states.reserve(nt);
    for (const auto& t : tuples) {
        State k = s;
        for (int i = 0; i < m; ++i) k = apply_annihilation(k, t[i]);
        k_states.push_back(std::move(k));
    }

    Tensor2c v(nt);
    for (std::size_t a = 0; a < nt; ++a)
        for (std::size_t b = 0; b <= a; ++b) {
            cplx val = overlap(k_states[a], k_states[b]);
            v(a, b) = val;
            v(b, a) = std::conj(val);
        }
    double mfact = 1.0;
    for (int i = 2; i <= m; ++i) mfact *= i;

    // canonical tuple -> linear id
    std::vector<std::size_t> tuple_id(n * (m > 1 ? n : 1) * (m > 2 ? n : 1), 0);
    auto key = [&](const std::array<unsigned, 3>& t) {
        std::size_t k = t[0];
        if (m > 1) k = k * n + t[1];
        if (m > 2) k = k * n + t[2];
        return k;
    };
    for (std::size_t i = 0; i < nt; ++i) tuple_id[key(tuples[i])] = i;

    Rdm out(m, n);
    // scatter over permutations of canonical tuples
    struct PermList {
        std::vector<std::pair<std::array<int, 3>, double>> perms;
    };
    PermList pl;
    if (m == 1) {
        pl.perms = {{{0, 0, 0}, 1.0}};
    } else if (m == 2) {
        pl.perms = {{{0, 1, 0}, 1.0}, {{1, 0, 0}, -1.0}};
    } else {
        for (const auto& p : detail::perms3())
            pl.perms.push_back({{p.p[0], p.p[1], p.p[2]}, p.sign});
    }

    for (std::size_t a = 0; a < nt; ++a) {
        for (std::size_t b = 0; b < nt; ++b) {
            const cplx base = v(a, b) / mfact;
            if (base == cplx{0.0}) continue;
            for (const auto& [sp, ssign] : pl.perms) {
                std::array<unsigned, 3> P{};
                for (int i = 0; i < m; ++i) P[i] = tuples[a][sp[i]];
                for (const auto& [qp, qsign] : pl.perms) {
                    std::array<unsigned, 3> Q{};
                    for (int i = 0; i < m; ++i) Q[i] = tuples[b][qp[i]];
                    const cplx val = ssign * qsign * base;
                    if (m == 1)
                        out.d1(P[0], Q[0]) = val;
                    else if (m == 2)
                        out.d2(P[0], P[1], Q[0], Q[1]) = val;
                    else
                        out.d3(P[0], P[1], P[2], Q[0], Q[1], Q[2]) = val;
                }
            }
        }
    }
    return out;
}

}  // namespace adaptrdm
