#pragma once

#include <vector>

#include "adaptrdm/bfgs.hpp"
#include "adaptrdm/pool.hpp"
#include "adaptrdm/sector.hpp"
#include "adaptrdm/state.hpp"

namespace adaptrdm {

/// Pool generators compiled onto one sector basis, cached per system.
struct CompiledPool {
    const OperatorPool* pool = nullptr;
    std::vector<CompiledOp> ops;

    static CompiledPool build(const OperatorPool& pool, const SectorSpace& space) {
        CompiledPool cp;
        cp.pool = &pool;
        cp.ops.reserve(pool.size());
        for (const auto& el : pool.elements) cp.ops.push_back(compile(el.qubit_generator, space));
        return cp;
    }
};

/// Ordered operator sequence; entry l is applied l-th, one parameter each.
using OperatorSequence = std::vector<std::size_t>;

inline SectorVec build_ansatz_state(const CompiledPool& cp, const OperatorSequence& seq,
                                    const VectorXd& theta, const SectorVec& reference) {
    SectorVec s = reference;
    for (std::size_t l = 0; l < seq.size(); ++l)
        s = apply_exp_compiled(cp.ops[seq[l]], s, theta(l));
    return s;
}

/// Energy (core excluded) and analytic gradient by the two-sweep technique:
/// one forward build, then paired backward sweeps of |psi> and H_eff|psi>,
/// costing O(k) exponentials in total.
inline double ansatz_energy_and_gradient(const CompiledPool& cp,
                                         const OperatorSequence& seq,
                                         const VectorXd& theta,
                                         const SectorVec& reference,
                                         const EffectiveHamiltonian& heff,
                                         VectorXd& grad_out) {
    SectorVec right = build_ansatz_state(cp, seq, theta, reference);
    SectorVec left = heff.apply(right);
    const double energy = std::real(right.dot(left));
    grad_out.resize(seq.size());
    for (std::size_t li = seq.size(); li-- > 0;) {
        const CompiledOp& g = cp.ops[seq[li]];
        grad_out(li) = 2.0 * std::real(left.dot(g.mat * right));
        if (li > 0) {
            right = apply_exp_compiled(g, right, -theta(li));
            left = apply_exp_compiled(g, left, -theta(li));
        }
    }
    return energy;
}

inline ObjectiveBundle make_objective(const CompiledPool& cp, const OperatorSequence& seq,
                                      const SectorVec& reference,
                                      const EffectiveHamiltonian& heff) {
    ObjectiveBundle obj;
    obj.dimension = seq.size();
    obj.evaluate = [&cp, seq, reference, &heff](const VectorXd& th) {
        SectorVec s = build_ansatz_state(cp, seq, th, reference);
        return heff.expectation(s);
    };
    obj.evaluate_with_gradient = [&cp, seq, reference, &heff](const VectorXd& th,
                                                              VectorXd& g) {
        return ansatz_energy_and_gradient(cp, seq, th, reference, heff, g);
    };
    obj.gradient = [&cp, seq, reference, &heff](const VectorXd& th) {
        VectorXd g;
        ansatz_energy_and_gradient(cp, seq, th, reference, heff, g);
        return g;
    };
    return obj;
}

/// Statevector-level analytic gradient of <psi|h|psi| for an ordered generator
/// list, same two-sweep structure as the compiled path.
inline VectorXd analytic_gradient(const std::vector<PauliSum>& generators,
                                  const VectorXd& theta, const State& reference,
                                  const PauliSum& h) {
    State right = reference;
    for (std::size_t l = 0; l < generators.size(); ++l)
        right = apply_exp_generator(right, generators[l], theta(l));
    State left = apply(h, right);
    VectorXd grad(generators.size());
    for (std::size_t li = generators.size(); li-- > 0;) {
        grad(li) = 2.0 * std::real(overlap(left, apply(generators[li], right)));
        if (li > 0) {
            right = apply_exp_generator(right, generators[li], -theta(li));
            left = apply_exp_generator(left, generators[li], -theta(li));
        }
    }
    return grad;
}

}  // namespace adaptrdm
