#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "adaptrdm/tensor.hpp"

namespace adaptrdm {

/// m-electron reduced density matrix over spin orbitals,
///   D(p1..pm; q1..qm) = (1/m!) <a^+_{p1}..a^+_{pm} a_{qm}..a_{q1}>,
/// antisymmetric within the upper and lower index groups, Hermitian as a
/// matrix over index groups, trace binom(N, m).
struct Rdm {
    int order = 0;
    Tensor2c d1;
    Tensor4c d2;
    Tensor6c d3;

    Rdm() = default;
    Rdm(int m, std::size_t n) : order(m) {
        if (m == 1)
            d1 = Tensor2c(n);
        else if (m == 2)
            d2 = Tensor4c(n);
        else if (m == 3)
            d3 = Tensor6c(n);
        else
            throw std::invalid_argument("Rdm: order must be 1, 2 or 3");
    }

    std::size_t n() const {
        return order == 1 ? d1.n : order == 2 ? d2.n : d3.n;
    }

    cplx trace() const {
        cplx t = 0.0;
        const std::size_t nn = n();
        if (order == 1) {
            for (std::size_t p = 0; p < nn; ++p) t += d1(p, p);
        } else if (order == 2) {
            for (std::size_t p = 0; p < nn; ++p)
                for (std::size_t q = 0; q < nn; ++q) t += d2(p, q, p, q);
        } else {
            for (std::size_t p = 0; p < nn; ++p)
                for (std::size_t q = 0; q < nn; ++q)
                    for (std::size_t r = 0; r < nn; ++r) t += d3(p, q, r, p, q, r);
        }
        return t;
    }
};

namespace detail {
// permutations of {0,1,2} with signs, for rank-6 antisymmetrization
struct Perm3 {
    std::array<int, 3> p;
    double sign;
};
inline const std::array<Perm3, 6>& perms3() {
    static const std::array<Perm3, 6> k = {{{{0, 1, 2}, 1.0},
                                            {{0, 2, 1}, -1.0},
                                            {{1, 0, 2}, -1.0},
                                            {{1, 2, 0}, 1.0},
                                            {{2, 0, 1}, 1.0},
                                            {{2, 1, 0}, -1.0}}};
    return k;
}
}  // namespace detail

/// Grassmann wedge of two 1-RDMs:
///   (a ^ b)(p1 p2; q1 q2) = 1/2 [ a(p1;q1) b(p2;q2) - a(p2;q1) b(p1;q2) ]
/// i.e. full antisymmetrization of the tensor product with 1/(2!)^2 weight.
inline Tensor4c wedge_11(const Rdm& a, const Rdm& b) {
    if (a.order != 1 || b.order != 1)
        throw std::invalid_argument("wedge_11: expected 1-RDMs");
    if (a.d1.n != b.d1.n) throw std::invalid_argument("wedge_11: dimension mismatch");
    const std::size_t n = a.d1.n;
    Tensor4c out(n);
    for (std::size_t p1 = 0; p1 < n; ++p1)
        for (std::size_t p2 = 0; p2 < n; ++p2)
            for (std::size_t q1 = 0; q1 < n; ++q1)
                for (std::size_t q2 = 0; q2 < n; ++q2)
                    out(p1, p2, q1, q2) = 0.5 * (a.d1(p1, q1) * b.d1(p2, q2) -
                                                 a.d1(p2, q1) * b.d1(p1, q2));
    return out;
}

/// Wedge of an antisymmetric rank-4 tensor with a 1-RDM: full
/// antisymmetrization over the 3 upper and 3 lower indices, weight 1/(3!)^2.
inline Tensor6c wedge_21(const Tensor4c& a, const Rdm& b) {
    if (b.order != 1) throw std::invalid_argument("wedge_21: second factor must be 1-RDM");
    if (a.n != b.d1.n) throw std::invalid_argument("wedge_21: dimension mismatch");
    const std::size_t n = a.n;
    const auto& perms = detail::perms3();
    Tensor6c out(n);
    std::array<std::size_t, 3> P, Q;
    for (P[0] = 0; P[0] < n; ++P[0])
        for (P[1] = 0; P[1] < n; ++P[1])
            for (P[2] = 0; P[2] < n; ++P[2])
                for (Q[0] = 0; Q[0] < n; ++Q[0])
                    for (Q[1] = 0; Q[1] < n; ++Q[1])
                        for (Q[2] = 0; Q[2] < n; ++Q[2]) {
                            cplx acc = 0.0;
                            for (const auto& sp : perms) {
                                // partial sum over upper permutation first
                                const std::size_t u0 = P[sp.p[0]], u1 = P[sp.p[1]],
                                                  u2 = P[sp.p[2]];
                                for (const auto& pq : perms) {
                                    acc += sp.sign * pq.sign *
                                           a(u0, u1, Q[pq.p[0]], Q[pq.p[1]]) *
                                           b.d1(u2, Q[pq.p[2]]);
                                }
                            }
                            out(P[0], P[1], P[2], Q[0], Q[1], Q[2]) = acc / 36.0;
                        }
    return out;
}

/// Connected part of the 2-RDM: 2-cumulant = d2 - d1 ^ d1.
inline Tensor4c cumulant2(const Rdm& d1, const Rdm& d2) {
    if (d1.order != 1 || d2.order != 2)
        throw std::invalid_argument("cumulant2: expected (1-RDM, 2-RDM)");
    Tensor4c out = wedge_11(d1, d1);
    const std::size_t n = out.n;
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = d2.d2.data[i] - out.data[i];
    (void)n;
    return out;
}

/// First-order reconstruction of the 3-RDM from the 1- and 2-RDM
/// (vanishing 3-cumulant): d3 = d1^d1^d1 + 3 (d2 - d1^d1) ^ d1.
inline Rdm valdemoro3(const Rdm& d1, const Rdm& d2) {
    if (d1.order != 1 || d2.order != 2)
        throw std::invalid_argument("valdemoro3: expected (1-RDM, 2-RDM)");
    if (d1.d1.n != d2.d2.n) throw std::invalid_argument("valdemoro3: dimension mismatch");
    const std::size_t n = d1.d1.n;
    Tensor4c ddd = wedge_11(d1, d1);
    Tensor4c delta2 = ddd;
    for (std::size_t i = 0; i < delta2.data.size(); ++i)
        delta2.data[i] = d2.d2.data[i] - delta2.data[i];

    Rdm out(3, n);
    Tensor6c t1 = wedge_21(ddd, d1);
    Tensor6c t2 = wedge_21(delta2, d1);
    for (std::size_t i = 0; i < out.d3.data.size(); ++i)
        out.d3.data[i] = t1.data[i] + 3.0 * t2.data[i];
    return out;
}

/// Energy as a 2-RDM functional: sum_pqrs H2(p,q,r,s) D2(p,q,r,s). The caller
/// adds the scalar core energy.
inline double energy_from_2rdm(const Tensor4d& h2_reduced, const Rdm& d2) {
    if (d2.order != 2) throw std::invalid_argument("energy_from_2rdm: need a 2-RDM");
    if (h2_reduced.n != d2.d2.n)
        throw std::invalid_argument("energy_from_2rdm: dimension mismatch");
    cplx e = 0.0;
    for (std::size_t i = 0; i < h2_reduced.data.size(); ++i)
        e += h2_reduced.data[i] * d2.d2.data[i];
    return e.real();
}

/// <[a^+_p a_q, H]> from the 1- and 2-RDM (H given by h1 and the
/// antisymmetrized two-electron tensor v2(p,q,r,s) = <pq||rs>).
inline double residual_one_body(const Rdm& d1, const Rdm& d2, const Tensor2d& h1,
                                const Tensor4d& v2, std::size_t p, std::size_t q) {
    const std::size_t n = h1.n;
    if (p >= n || q >= n) throw std::out_of_range("residual_one_body: index out of range");
    cplx acc = 0.0;
    for (std::size_t b = 0; b < n; ++b) acc += h1(q, b) * d1.d1(p, b);
    for (std::size_t a = 0; a < n; ++a) acc -= h1(a, p) * d1.d1(a, q);
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t d = 0; d < n; ++d) {
                acc += v2(q, b, c, d) * d2.d2(p, b, c, d);
                acc -= v2(b, c, d, p) * d2.d2(b, c, d, q);
            }
    return acc.real();
}

/// <[a^+_{p1} a^+_{p2} a_{q1} a_{q2}, H]> from the 2- and 3-RDM. The ten
/// contraction terms carry prefactors +-2 on the 2-RDM part and +-6 on the
/// 3-RDM part; d3 may be measured or reconstructed.
inline double residual_two_body(const Rdm& d2, const Rdm& d3, const Tensor2d& h1,
                                const Tensor4d& v2, std::size_t p1, std::size_t p2,
                                std::size_t q1, std::size_t q2) {
    const std::size_t n = h1.n;
    if (p1 >= n || p2 >= n || q1 >= n || q2 >= n)
        throw std::out_of_range("residual_two_body: index out of range");
    const auto& D2 = d2.d2;
    const auto& D3 = d3.d3;
    cplx acc = 0.0;
    // one-electron contractions
    for (std::size_t a = 0; a < n; ++a) {
        acc += 2.0 * h1(q2, a) * D2(p1, p2, a, q1);
        acc -= 2.0 * h1(q1, a) * D2(p1, p2, a, q2);
        acc -= 2.0 * h1(a, p1) * D2(a, p2, q2, q1);
        acc += 2.0 * h1(a, p2) * D2(a, p1, q2, q1);
    }
    // two-electron contractions against the 2-RDM (w = v2/2)
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            acc += v2(q2, q1, b, a) * D2(p1, p2, b, a);
            acc += v2(b, a, p1, p2) * D2(a, b, q2, q1);
        }
    // two-electron contractions against the 3-RDM (w = v2/2, prefactor 6)
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                acc -= 3.0 * v2(q2, a, c, b) * D3(p1, p2, a, c, b, q1);
                acc += 3.0 * v2(q1, a, c, b) * D3(p1, p2, a, c, b, q2);
                acc -= 3.0 * v2(b, a, p1, c) * D3(a, b, p2, q2, q1, c);
                acc += 3.0 * v2(a, b, c, p2) * D3(a, b, p1, q2, q1, c);
            }
    return acc.real();
}

}  // namespace adaptrdm
