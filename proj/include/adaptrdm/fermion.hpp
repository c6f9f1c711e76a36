#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "adaptrdm/tensor.hpp"

namespace adaptrdm {

/// One ladder operator packed as (orbital << 1) | dagger.
using LadderOp = std::uint16_t;

inline LadderOp make_ladder(unsigned orbital, bool dagger) {
    return static_cast<LadderOp>((orbital << 1) | (dagger ? 1u : 0u));
}
inline unsigned ladder_orbital(LadderOp op) { return op >> 1; }
inline bool ladder_dagger(LadderOp op) { return op & 1u; }

constexpr double kCoeffPruneThreshold = 1e-14;

/// Weighted sum of normal-ordered ladder-operator products. Canonical form:
/// creations first in strictly decreasing orbital order, then annihilations in
/// strictly increasing order; Pauli-exclusion-violating products are dropped.
class FermionOperator {
  public:
    using Term = std::vector<LadderOp>;
    using TermMap = std::map<Term, cplx>;

    FermionOperator() = default;

    static FermionOperator identity(cplx coeff = 1.0) {
        FermionOperator op;
        op.add_term({}, coeff);
        return op;
    }

    /// Product of ladder operators given as (orbital, dagger) pairs, applied
    /// right-to-left like the written expression; normal-ordered on insertion.
    static FermionOperator from_ops(
        const std::vector<std::pair<unsigned, bool>>& ops, cplx coeff = 1.0) {
        Term t;
        t.reserve(ops.size());
        for (auto [orb, dag] : ops) t.push_back(make_ladder(orb, dag));
        FermionOperator op;
        op.add_term(t, coeff);
        return op;
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    /// Adds coeff * product, normal ordering as needed.
    void add_term(const Term& term, cplx coeff) {
        if (std::abs(coeff) < kCoeffPruneThreshold) return;
        normal_order_into(term, coeff);
        prune();
    }

    FermionOperator& operator+=(const FermionOperator& other) {
        for (const auto& [t, c] : other.terms_) accumulate(t, c);
        prune();
        return *this;
    }
    FermionOperator& operator-=(const FermionOperator& other) {
        for (const auto& [t, c] : other.terms_) accumulate(t, -c);
        prune();
        return *this;
    }
    FermionOperator& operator*=(cplx s) {
        for (auto& [t, c] : terms_) c *= s;
        prune();
        return *this;
    }

    friend FermionOperator operator+(FermionOperator a, const FermionOperator& b) {
        a += b;
        return a;
    }
    friend FermionOperator operator-(FermionOperator a, const FermionOperator& b) {
        a -= b;
        return a;
    }
    friend FermionOperator operator*(FermionOperator a, cplx s) {
        a *= s;
        return a;
    }
    friend FermionOperator operator*(cplx s, FermionOperator a) {
        a *= s;
        return a;
    }

    FermionOperator adjoint() const {
        FermionOperator out;
        for (const auto& [t, c] : terms_) {
            Term rev(t.rbegin(), t.rend());
            for (auto& op : rev) op ^= 1u;  // flip dagger
            out.normal_order_into(rev, std::conj(c));
        }
        out.prune();
        return out;
    }

    bool is_hermitian(double tol = 1e-12) const { return close_to(adjoint(), tol); }
    bool is_anti_hermitian(double tol = 1e-12) const {
        FermionOperator neg = *this;
        neg *= -1.0;
        return neg.close_to(adjoint(), tol);
    }

    bool close_to(const FermionOperator& other, double tol) const {
        FermionOperator diff = *this;
        diff -= other;
        for (const auto& [t, c] : diff.terms_)
            if (std::abs(c) > tol) return false;
        return true;
    }

    unsigned max_orbital_plus_one() const {
        unsigned m = 0;
        for (const auto& [t, c] : terms_)
            for (auto op : t) m = std::max(m, ladder_orbital(op) + 1);
        return m;
    }

    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (const auto& [t, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag())
               << "i)";
            for (auto op : t)
                os << " " << ladder_orbital(op) << (ladder_dagger(op) ? "^" : "");
            if (t.empty()) os << " 1";
        }
        if (first) os << "0";
        return os.str();
    }

  private:
    TermMap terms_;

    void accumulate(const Term& t, cplx c) {
        auto [it, inserted] = terms_.try_emplace(t, c);
        if (!inserted) it->second += c;
    }

    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (std::abs(it->second) < kCoeffPruneThreshold)
                it = terms_.erase(it);
            else
                ++it;
        }
    }

    // Iterative normal ordering via {a_p, a^+_q} = delta_pq.
    void normal_order_into(Term term, cplx coeff) {
        std::vector<std::pair<Term, cplx>> work;
        work.emplace_back(std::move(term), coeff);
        while (!work.empty()) {
            auto [t, c] = std::move(work.back());
            work.pop_back();
            bool changed = false;
            for (std::size_t i = 0; i + 1 < t.size(); ++i) {
                const bool d1 = ladder_dagger(t[i]);
                const bool d2 = ladder_dagger(t[i + 1]);
                const unsigned o1 = ladder_orbital(t[i]);
                const unsigned o2 = ladder_orbital(t[i + 1]);
                if (!d1 && d2) {
                    // a_p a^+_q = delta_pq - a^+_q a_p
                    Term swapped = t;
                    std::swap(swapped[i], swapped[i + 1]);
                    work.emplace_back(std::move(swapped), -c);
                    if (o1 == o2) {
                        Term contracted;
                        contracted.reserve(t.size() - 2);
                        contracted.insert(contracted.end(), t.begin(), t.begin() + i);
                        contracted.insert(contracted.end(), t.begin() + i + 2, t.end());
                        work.emplace_back(std::move(contracted), c);
                    }
                    changed = true;
                    break;
                }
                if (d1 == d2) {
                    if (o1 == o2) {  // Pauli exclusion
                        changed = true;
                        c = 0.0;
                        break;
                    }
                    const bool wrong_order = d1 ? (o1 < o2) : (o1 > o2);
                    if (wrong_order) {
                        Term swapped = t;
                        std::swap(swapped[i], swapped[i + 1]);
                        work.emplace_back(std::move(swapped), -c);
                        changed = true;
                        break;
                    }
                }
            }
            if (!changed && std::abs(c) > 0.0) accumulate(t, c);
        }
    }
};

inline FermionOperator multiply(const FermionOperator& a, const FermionOperator& b) {
    FermionOperator out;
    for (const auto& [ta, ca] : a.terms()) {
        for (const auto& [tb, cb] : b.terms()) {
            FermionOperator::Term t = ta;
            t.insert(t.end(), tb.begin(), tb.end());
            out.add_term(t, ca * cb);
        }
    }
    return out;
}

inline FermionOperator commutator(const FermionOperator& a, const FermionOperator& b) {
    return multiply(a, b) - multiply(b, a);
}

/// Total particle number operator on n spin orbitals.
inline FermionOperator number_operator(unsigned n_spin_orbitals) {
    FermionOperator op;
    for (unsigned p = 0; p < n_spin_orbitals; ++p)
        op.add_term({make_ladder(p, true), make_ladder(p, false)}, 1.0);
    return op;
}

/// Total S_z (interleaved convention: even spin orbitals alpha, odd beta).
inline FermionOperator sz_operator(unsigned n_spin_orbitals) {
    FermionOperator op;
    for (unsigned p = 0; p < n_spin_orbitals; ++p) {
        double s = (p % 2 == 0) ? 0.5 : -0.5;
        op.add_term({make_ladder(p, true), make_ladder(p, false)}, s);
    }
    return op;
}

}  // namespace adaptrdm
