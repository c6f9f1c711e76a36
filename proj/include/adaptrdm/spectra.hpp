#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adaptrdm/adapt.hpp"
#include "adaptrdm/sector.hpp"
#include "adaptrdm/spin_hamiltonian.hpp"

namespace adaptrdm {

struct Sector {
    unsigned n_electrons = 0;
    int sz2 = 0;
};

struct EigenSolution {
    Sector sector;
    std::vector<double> energies;     // ascending, core energy included
    std::vector<SectorVec> states;    // sector coordinates
    std::vector<State> full_states;   // lifted onto the full register
};

/// Lowest k eigenpairs of the Hamiltonian restricted to the given
/// particle-number/S_z sector of the full register.
inline EigenSolution fci_solve(const SpinHamiltonian& sh, Sector sector, std::size_t k) {
    auto space = SectorSpace::build(static_cast<unsigned>(sh.n_spin_orbitals),
                                    sector.n_electrons, sector.sz2);
    if (k > space.dim())
        throw std::invalid_argument("fci_solve: requested more roots than the sector holds");
    auto ch = compile(hamiltonian_pauli(sh), space);
    Eigen::MatrixXcd dense = ch.mat;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
    if (es.info() != Eigen::Success) throw std::runtime_error("fci_solve: eigensolver failed");

    EigenSolution sol;
    sol.sector = sector;
    for (std::size_t i = 0; i < k; ++i) {
        const double e = es.eigenvalues()(i);
        SectorVec v = es.eigenvectors().col(i);
        const double resid = (dense * v - e * v).norm();
        if (resid > 1e-9) throw std::runtime_error("fci_solve: eigenpair residual too large");
        sol.energies.push_back(e + sh.e_core);
        sol.states.push_back(v);
        sol.full_states.push_back(space.lift(v));
    }
    return sol;
}

/// Gershgorin upper bound on the sector spectrum (core energy excluded).
inline double gershgorin_upper_bound(const CompiledOp& h) {
    const auto& m = h.mat;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(m.rows());
    Eigen::VectorXd radius = Eigen::VectorXd::Zero(m.rows());
    for (int col = 0; col < m.outerSize(); ++col)
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(m, col); it; ++it) {
            if (it.row() == col)
                diag(it.row()) += it.value().real();
            else
                radius(it.row()) += std::abs(it.value());
        }
    return (diag + radius).maxCoeff();
}

/// Nonparallelity error: spread of the signed errors along a curve.
inline double npe(const std::vector<double>& errors) {
    if (errors.empty()) throw std::invalid_argument("npe: empty error list");
    double lo = errors.front(), hi = errors.front();
    for (double e : errors) {
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    return hi - lo;
}

enum class PenaltyMode { Penalty, Projector };

struct VqdConfig {
    PenaltyMode penalty_mode = PenaltyMode::Penalty;
    /// per-deflation-state weights; empty = 2 (Gershgorin bound - E_0)
    std::vector<double> betas;
    std::vector<SectorVec> deflation_states;
};

/// Deflated objective at fixed parameters: the overlap-penalty form
/// <psi|H|psi> + sum_I beta_I |<psi_I|psi>|^2 or the projected form
/// <psi|P^+ H P|psi>. Core energy excluded, as in the optimizer.
inline double vqd_objective(const VectorXd& theta, const CompiledPool& cp,
                            const OperatorSequence& seq, const SectorVec& reference,
                            const VqdConfig& cfg, const CompiledOp& h) {
    SectorVec psi = build_ansatz_state(cp, seq, theta, reference);
    if (cfg.penalty_mode == PenaltyMode::Penalty) {
        double e = std::real(psi.dot(h.mat * psi));
        for (std::size_t i = 0; i < cfg.deflation_states.size(); ++i) {
            const double beta = cfg.betas.empty() ? 1.0 : cfg.betas[i];
            e += beta * std::norm(cfg.deflation_states[i].dot(psi));
        }
        return e;
    }
    SectorVec proj = psi;
    for (const auto& d : cfg.deflation_states) proj -= d.dot(psi) * d;
    return std::real(proj.dot(h.mat * proj));
}

struct ReferenceCandidate {
    std::string label;
    SectorVec state;
};

/// Closed-shell determinant occupying the lowest spin orbitals.
inline std::vector<unsigned> hf_occupations(unsigned n_electrons) {
    std::vector<unsigned> occ(n_electrons);
    for (unsigned i = 0; i < n_electrons; ++i) occ[i] = i;
    return occ;
}

/// Spin-pure excitation configurations built by applying the singlet or
/// triplet combination of the spatial excitation from->to onto the
/// closed-shell reference. Spin-adapted generators preserve total spin, so a
/// spin-contaminated single determinant cannot relax onto one eigenstate;
/// these configuration-state functions can.
inline std::vector<ReferenceCandidate> excitation_candidates(const SectorSpace& space,
                                                             unsigned n_electrons,
                                                             unsigned from_spatial,
                                                             unsigned to_spatial) {
    SectorVec hf = space.determinant(hf_occupations(n_electrons));
    std::vector<ReferenceCandidate> out;
    for (int sign : {+1, -1}) {
        FermionOperator e_op;
        e_op += FermionOperator::from_ops(
            {{2 * to_spatial, true}, {2 * from_spatial, false}});
        e_op += FermionOperator::from_ops(
                    {{2 * to_spatial + 1, true}, {2 * from_spatial + 1, false}}) *
                cplx(static_cast<double>(sign));
        auto op = compile(jordan_wigner(e_op, space.n_qubits), space);
        SectorVec v = op.mat * hf;
        const double n = v.norm();
        if (n < 1e-12) continue;
        v /= n;
        std::string label = (sign > 0 ? "singlet(" : "triplet(") +
                            std::to_string(from_spatial) + "->" +
                            std::to_string(to_spatial) + ")";
        out.push_back({label, std::move(v)});
    }
    return out;
}

struct VqdResult {
    std::vector<AnsatzTrace> candidate_traces;
    std::optional<std::size_t> winner;  // lowest-energy converged candidate

    const AnsatzTrace& best() const {
        if (!winner) throw std::runtime_error("run_vqd: no candidate converged");
        return candidate_traces[*winner];
    }
};

/// Runs the configured ADAPT variant against the deflated objective for every
/// reference candidate and keeps the converged run with the lowest energy.
inline VqdResult run_vqd(const VqdConfig& vqd_cfg, const AdaptConfig& adapt_cfg,
                         const SpinHamiltonian& sh, const SectorSpace& space,
                         const CompiledPool& cp,
                         const std::vector<ReferenceCandidate>& candidates,
                         std::ostream* trace_log = nullptr) {
    if (vqd_cfg.penalty_mode != PenaltyMode::Penalty)
        throw std::invalid_argument("run_vqd: ansatz growth uses the penalty form");
    EffectiveHamiltonian heff;
    heff.h = compile(hamiltonian_pauli(sh), space);
    heff.e_core = sh.e_core;

    std::vector<double> betas = vqd_cfg.betas;
    if (betas.empty() && !vqd_cfg.deflation_states.empty()) {
        const double upper = gershgorin_upper_bound(heff.h);
        double e0 = std::numeric_limits<double>::max();
        for (const auto& d : vqd_cfg.deflation_states)
            e0 = std::min(e0, std::real(d.dot(heff.h.mat * d)));
        betas.assign(vqd_cfg.deflation_states.size(), 2.0 * (upper - e0));
    }
    for (std::size_t i = 0; i < vqd_cfg.deflation_states.size(); ++i) {
        if (betas[i] <= 0) throw std::invalid_argument("run_vqd: beta weights must be > 0");
        heff.penalties.emplace_back(betas[i], vqd_cfg.deflation_states[i]);
    }

    VqdResult result;
    for (const auto& cand : candidates) {
        if (trace_log) (*trace_log) << "# reference candidate: " << cand.label << "\n";
        result.candidate_traces.push_back(
            run_adapt(adapt_cfg, sh, space, cp, heff, cand.state, cand.label, trace_log));
        const auto& t = result.candidate_traces.back();
        if (t.converged &&
            (!result.winner || t.energy < result.candidate_traces[*result.winner].energy))
            result.winner = result.candidate_traces.size() - 1;
    }
    return result;
}

}  // namespace adaptrdm
