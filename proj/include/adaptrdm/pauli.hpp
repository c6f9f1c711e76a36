#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "adaptrdm/fermion.hpp"
#include "adaptrdm/tensor.hpp"

namespace adaptrdm {

/// Pauli string in symplectic form: the string is the tensor product of
/// single-qubit letters with X where only x is set, Z where only z, Y where
/// both. Coefficients multiply the letter product (Y, not iXZ).
struct PauliString {
    std::uint64_t x = 0;
    std::uint64_t z = 0;

    friend bool operator<(const PauliString& a, const PauliString& b) {
        return a.z != b.z ? a.z < b.z : a.x < b.x;
    }
    friend bool operator==(const PauliString& a, const PauliString& b) {
        return a.x == b.x && a.z == b.z;
    }
};

inline int pauli_weight(const PauliString& s) {
    return std::popcount(s.x | s.z);
}

/// Letter-form product: returns (phase, string) with phase the ratio between
/// the letter-form coefficient of the product and the product of inputs.
inline std::pair<cplx, PauliString> multiply(const PauliString& a, const PauliString& b) {
    PauliString out{a.x ^ b.x, a.z ^ b.z};
    const int ya = std::popcount(a.x & a.z);
    const int yb = std::popcount(b.x & b.z);
    const int yo = std::popcount(out.x & out.z);
    // letters -> XZ form picks up i^(ya+yb), recombining costs i^(-yo),
    // and commuting Z^za past X^xb gives (-1)^|za & xb|
    int ipow = ((ya + yb - yo) % 4 + 4) % 4;
    static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    cplx phase = kIPow[ipow];
    if (std::popcount(a.z & b.x) & 1) phase = -phase;
    return {phase, out};
}

class PauliSum {
  public:
    using TermMap = std::map<PauliString, cplx>;

    PauliSum() = default;
    explicit PauliSum(unsigned n_qubits) : n_qubits_(n_qubits) {}

    unsigned n_qubits() const { return n_qubits_; }
    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    void add(const PauliString& s, cplx coeff) {
        auto [it, inserted] = terms_.try_emplace(s, coeff);
        if (!inserted) it->second += coeff;
        if (std::abs(it->second) < kCoeffPruneThreshold) terms_.erase(it);
    }

    PauliSum& operator+=(const PauliSum& other) {
        check_width(other);
        for (const auto& [s, c] : other.terms_) add(s, c);
        return *this;
    }
    PauliSum& operator-=(const PauliSum& other) {
        check_width(other);
        for (const auto& [s, c] : other.terms_) add(s, -c);
        return *this;
    }
    PauliSum& operator*=(cplx s) {
        for (auto& [k, c] : terms_) c *= s;
        prune();
        return *this;
    }
    friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
    friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
    friend PauliSum operator*(PauliSum a, cplx s) { return a *= s; }
    friend PauliSum operator*(cplx s, PauliSum a) { return a *= s; }

    friend PauliSum operator*(const PauliSum& a, const PauliSum& b) {
        a.check_width(b);
        PauliSum out(a.n_qubits_);
        for (const auto& [sa, ca] : a.terms_) {
            for (const auto& [sb, cb] : b.terms_) {
                auto [phase, s] = multiply(sa, sb);
                out.add(s, ca * cb * phase);
            }
        }
        return out;
    }

    PauliSum adjoint() const {
        PauliSum out(n_qubits_);
        for (const auto& [s, c] : terms_) out.add(s, std::conj(c));  // letters Hermitian
        return out;
    }

    /// True when every coefficient is real (the image of a Hermitian fermion op).
    bool has_real_coefficients(double tol = 1e-12) const {
        for (const auto& [s, c] : terms_)
            if (std::abs(c.imag()) > tol) return false;
        return true;
    }
    /// True when every coefficient is purely imaginary (anti-Hermitian image).
    bool has_imaginary_coefficients(double tol = 1e-12) const {
        for (const auto& [s, c] : terms_)
            if (std::abs(c.real()) > tol) return false;
        return true;
    }

    double coefficient_one_norm() const {
        double s = 0.0;
        for (const auto& [k, c] : terms_) s += std::abs(c);
        return s;
    }

    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (const auto& [s, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag())
               << "i)*";
            bool any = false;
            for (unsigned q = 0; q < n_qubits_; ++q) {
                bool xb = (s.x >> q) & 1, zb = (s.z >> q) & 1;
                if (!xb && !zb) continue;
                os << (xb && zb ? 'Y' : xb ? 'X' : 'Z') << q << ' ';
                any = true;
            }
            if (!any) os << "I";
        }
        if (first) os << "0";
        return os.str();
    }

  private:
    unsigned n_qubits_ = 0;
    TermMap terms_;

    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (std::abs(it->second) < kCoeffPruneThreshold)
                it = terms_.erase(it);
            else
                ++it;
        }
    }
    void check_width(const PauliSum& other) const {
        if (n_qubits_ != other.n_qubits_)
            throw std::invalid_argument("PauliSum width mismatch");
    }
};

/// a^+_p -> (X_p - iY_p)/2 (x) Z_{p-1}...Z_0, extended linearly over terms.
inline PauliSum jordan_wigner(const FermionOperator& op, unsigned n_qubits) {
    if (n_qubits > 64) throw std::invalid_argument("jordan_wigner: more than 64 qubits");
    PauliSum out(n_qubits);
    for (const auto& [term, coeff] : op.terms()) {
        PauliSum acc(n_qubits);
        acc.add(PauliString{0, 0}, coeff);
        for (auto lop : term) {
            const unsigned p = ladder_orbital(lop);
            if (p >= n_qubits)
                throw std::invalid_argument(
                    "jordan_wigner: orbital index " + std::to_string(p) +
                    " out of range for " + std::to_string(n_qubits) + " qubits");
            const std::uint64_t bit = 1ull << p;
            const std::uint64_t lower = bit - 1;
            PauliSum factor(n_qubits);
            const cplx y_coeff = ladder_dagger(lop) ? cplx(0, -0.5) : cplx(0, 0.5);
            factor.add(PauliString{bit, lower}, 0.5);
            factor.add(PauliString{bit, lower | bit}, y_coeff);
            acc = acc * factor;
        }
        out += acc;
    }
    return out;
}

}  // namespace adaptrdm
