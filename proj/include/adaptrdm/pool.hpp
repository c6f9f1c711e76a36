#pragma once

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "adaptrdm/fermion.hpp"
#include "adaptrdm/pauli.hpp"
#include "adaptrdm/spin_hamiltonian.hpp"

namespace adaptrdm {

enum class PoolKind { UnrestrictedGSD, SpinAdaptedGSD };

inline const char* to_string(PoolKind k) {
    return k == PoolKind::UnrestrictedGSD ? "unrestricted-GSD" : "spin-adapted-GSD";
}

struct PoolElement {
    std::string label;
    FermionOperator generator;   // anti-Hermitian, unit coefficient norm
    PauliSum qubit_generator;    // Jordan-Wigner image
};

struct OperatorPool {
    PoolKind kind = PoolKind::SpinAdaptedGSD;
    std::size_t n_spin_orbitals = 0;
    std::vector<PoolElement> elements;

    std::size_t size() const { return elements.size(); }
};

namespace detail {

inline void normalize_generator(FermionOperator& g) {
    double n2 = 0.0;
    for (const auto& [t, c] : g.terms()) n2 += std::norm(c);
    if (n2 > 0.0) g *= 1.0 / std::sqrt(n2);
}

/// Sign-normalized text signature used to deduplicate generators that are
/// equal up to overall scale.
inline std::string generator_signature(const FermionOperator& g) {
    if (g.is_zero()) return "0";
    const auto& first = *g.terms().begin();
    cplx lead = first.second;
    auto clean = [](double v) { return std::abs(v) < 1e-12 ? 0.0 : v; };
    std::ostringstream os;
    os.setf(std::ios::scientific);
    os.precision(10);
    for (const auto& [t, c] : g.terms()) {
        cplx r = c / lead;
        for (auto op : t) os << op << ',';
        os << ':' << clean(r.real()) << ':' << clean(r.imag()) << ';';
    }
    return os.str();
}

}  // namespace detail

/// Generalized-singles-and-doubles pool over spin orbitals (Sz-conserving,
/// duplicates under canonicalization removed) or its spin-adapted variant in
/// which same-spatial-index spin combinations share one parameter: singlet
/// singles sum_s (a^+_{Qs} a_{Ps} - h.c.) over spatial pairs, and spin-summed
/// doubles sum_{s,s'} (a^+_{Ps} a^+_{Qs'} a_{Rs'} a_{Ss} - h.c.) over spatial
/// quadruples.
inline OperatorPool build_pool(std::size_t n_spatial, PoolKind kind) {
    if (n_spatial < 1) throw std::invalid_argument("build_pool: need n_spatial >= 1");
    OperatorPool pool;
    pool.kind = kind;
    pool.n_spin_orbitals = 2 * n_spatial;
    const unsigned n_so = static_cast<unsigned>(pool.n_spin_orbitals);

    std::map<std::string, std::size_t> seen;
    auto push = [&](FermionOperator g, const std::string& label) {
        if (g.is_zero()) return;
        detail::normalize_generator(g);
        auto sig = detail::generator_signature(g);
        if (seen.count(sig)) return;
        seen[sig] = pool.elements.size();
        pool.elements.push_back({label, g, jordan_wigner(g, n_so)});
    };

    if (kind == PoolKind::UnrestrictedGSD) {
        for (unsigned p = 0; p < n_so; ++p)
            for (unsigned q = 0; q < p; ++q) {
                if (spin_of(p) != spin_of(q)) continue;
                auto a = FermionOperator::from_ops({{p, true}, {q, false}});
                std::ostringstream label;
                label << "single(" << p << "," << q << ")";
                push(a - a.adjoint(), label.str());
            }
        // creation/annihilation pairs p>q, r>s; strict pair ordering avoids
        // Hermitian self-pairs
        std::vector<std::pair<unsigned, unsigned>> pairs;
        for (unsigned p = 0; p < n_so; ++p)
            for (unsigned q = 0; q < p; ++q) pairs.emplace_back(p, q);
        for (std::size_t a_id = 0; a_id < pairs.size(); ++a_id)
            for (std::size_t b_id = 0; b_id < a_id; ++b_id) {
                auto [p, q] = pairs[a_id];
                auto [r, s] = pairs[b_id];
                if (spin_of(p) + spin_of(q) != spin_of(r) + spin_of(s)) continue;
                auto a = FermionOperator::from_ops(
                    {{p, true}, {q, true}, {r, false}, {s, false}});
                FermionOperator g = a - a.adjoint();
                std::ostringstream label;
                label << "double(" << p << "," << q << "|" << r << "," << s << ")";
                push(std::move(g), label.str());
            }
    } else {
        for (unsigned P = 0; P < n_spatial; ++P)
            for (unsigned Q = P + 1; Q < n_spatial; ++Q) {
                FermionOperator a;
                for (unsigned s = 0; s < 2; ++s)
                    a += FermionOperator::from_ops(
                        {{2 * Q + s, true}, {2 * P + s, false}});
                std::ostringstream label;
                label << "sa_single(" << P << "->" << Q << ")";
                push(a - a.adjoint(), label.str());
            }
        for (unsigned P = 0; P < n_spatial; ++P)
            for (unsigned Q = 0; Q < n_spatial; ++Q)
                for (unsigned R = 0; R < n_spatial; ++R)
                    for (unsigned S = 0; S < n_spatial; ++S) {
                        FermionOperator a;
                        for (unsigned s1 = 0; s1 < 2; ++s1)
                            for (unsigned s2 = 0; s2 < 2; ++s2)
                                a += FermionOperator::from_ops({{2 * P + s1, true},
                                                                {2 * Q + s2, true},
                                                                {2 * R + s2, false},
                                                                {2 * S + s1, false}});
                        FermionOperator g = a - a.adjoint();
                        std::ostringstream label;
                        label << "sa_double(" << P << "," << Q << "|" << R << "," << S
                              << ")";
                        push(std::move(g), label.str());
                    }
    }
    return pool;
}

/// Debug listing, one element per line: `label : generator terms`.
inline std::string dump_pool(const OperatorPool& pool) {
    std::ostringstream os;
    for (const auto& el : pool.elements) os << el.label << " : " << el.generator.str() << "\n";
    return os.str();
}

}  // namespace adaptrdm
