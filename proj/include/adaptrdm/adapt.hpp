#pragma once

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "adaptrdm/ansatz.hpp"
#include "adaptrdm/bfgs.hpp"
#include "adaptrdm/pool.hpp"
#include "adaptrdm/rdm.hpp"
#include "adaptrdm/sector.hpp"
#include "adaptrdm/spin_hamiltonian.hpp"

namespace adaptrdm {

enum class AdaptVariant { Adapt, AdaptRdm, AdaptV, AdaptVx };
enum class ConvergenceCriterion { Variance, ResidualNorm };
enum class StopReason {
    ConvergedVariance,
    ConvergedResidualNorm,
    EnergyStall,
    MaxIterations,
    PoolExhausted
};

inline const char* to_string(AdaptVariant v) {
    switch (v) {
        case AdaptVariant::Adapt: return "adapt";
        case AdaptVariant::AdaptRdm: return "adapt_rdm";
        case AdaptVariant::AdaptV: return "adapt_v";
        default: return "adapt_vx";
    }
}

inline const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::ConvergedVariance: return "variance_converged";
        case StopReason::ConvergedResidualNorm: return "residual_norm_converged";
        case StopReason::EnergyStall: return "energy_stall";
        case StopReason::MaxIterations: return "max_iterations";
        default: return "pool_exhausted";
    }
}

struct AdaptConfig {
    AdaptVariant variant = AdaptVariant::Adapt;
    std::size_t n_update = 1;  // operators appended per iteration
    std::size_t n_aux = 0;     // auxiliary pool size (Vx); 0 = max(30, n_update)
    double epsilon = 1e-4;
    ConvergenceCriterion criterion = ConvergenceCriterion::Variance;
    double energy_stall = 1e-10;
    std::size_t max_iterations = 300;
    PoolKind pool_kind = PoolKind::SpinAdaptedGSD;
    std::vector<unsigned> reference_occupations;
    /// operators whose |residual| falls below this are never appended
    double selection_floor = 1e-7;

    std::size_t aux_size() const { return n_aux ? n_aux : std::max<std::size_t>(30, n_update); }

    void validate() const {
        if (n_update < 1) throw std::invalid_argument("AdaptConfig: N_u must be >= 1");
        if (variant == AdaptVariant::AdaptVx && aux_size() < n_update)
            throw std::invalid_argument("AdaptConfig: N_m must be >= N_u");
        if (criterion == ConvergenceCriterion::ResidualNorm &&
            variant != AdaptVariant::Adapt && variant != AdaptVariant::AdaptRdm)
            throw std::invalid_argument(
                "AdaptConfig: the residual-norm criterion needs exact residuals");
        if (epsilon <= 0) throw std::invalid_argument("AdaptConfig: epsilon must be > 0");
    }
};

struct IterationRecord {
    std::size_t iteration = 0;
    std::vector<std::string> selected_labels;
    std::vector<double> selected_residuals;
    double residual_norm2 = 0.0;
    double energy = 0.0;  // optimized physical energy incl. core
    double variance = 0.0;
    std::size_t n_parameters = 0;  // cumulative
    std::size_t bfgs_iterations = 0;
};

struct AnsatzTrace {
    std::string variant;
    std::string reference_label;
    std::vector<IterationRecord> iterations;
    OperatorSequence sequence;
    VectorXd parameters;
    SectorVec final_state;
    double energy = 0.0;  // physical energy incl. core
    double variance = 0.0;
    StopReason reason = StopReason::MaxIterations;
    bool converged = false;

    std::size_t n_parameters() const { return sequence.size(); }
    std::size_t n_iterations() const { return iterations.size(); }
};

/// R_u = <[H_eff, tau_u]> for every pool element, two operator applications
/// per element and no Trotterization.
inline VectorXd residuals_exact(const SectorVec& s, const CompiledPool& cp,
                                const EffectiveHamiltonian& heff) {
    SectorVec hs = heff.apply(s);
    VectorXd r(cp.ops.size());
    for (std::size_t u = 0; u < cp.ops.size(); ++u)
        r(u) = 2.0 * std::real(hs.dot(cp.ops[u].mat * s));
    return r;
}

enum class RdmMode { Exact3, Valdemoro };

/// Residual gradients from measured RDMs: the 1- and 2-RDM (and the 3-RDM,
/// measured or reconstructed) feed the per-term contractions; a pool
/// element's residual is the coefficient-weighted sum over its normal-ordered
/// terms. Deflation penalties, when present, contribute through overlaps.
inline VectorXd residuals_rdm(const SectorVec& s, const SectorSpace& space,
                              const CompiledPool& cp, const SpinHamiltonian& sh,
                              RdmMode mode,
                              const EffectiveHamiltonian* heff = nullptr) {
    const State full = space.lift(s);
    const Rdm d1 = measure_rdm(full, 1);
    const Rdm d2 = measure_rdm(full, 2);
    const Rdm d3 = (mode == RdmMode::Exact3) ? measure_rdm(full, 3) : valdemoro3(d1, d2);

    const auto& pool = *cp.pool;
    VectorXd r(pool.size());
    for (std::size_t u = 0; u < pool.size(); ++u) {
        double acc = 0.0;
        for (const auto& [term, coeff] : pool.elements[u].generator.terms()) {
            double value;
            if (term.size() == 2) {
                value = residual_one_body(d1, d2, sh.h1, sh.v2, ladder_orbital(term[0]),
                                          ladder_orbital(term[1]));
            } else if (term.size() == 4) {
                value = residual_two_body(d2, d3, sh.h1, sh.v2, ladder_orbital(term[0]),
                                          ladder_orbital(term[1]), ladder_orbital(term[2]),
                                          ladder_orbital(term[3]));
            } else {
                throw std::logic_error("residuals_rdm: unexpected generator term rank");
            }
            // value is <[term, H]>; the residual is <[H, generator]>
            acc -= coeff.real() * value;
        }
        if (heff && !heff->penalties.empty()) {
            SectorVec ts = cp.ops[u].mat * s;
            for (const auto& [beta, psi] : heff->penalties)
                acc += beta * 2.0 * std::real(std::conj(psi.dot(s)) * psi.dot(ts));
        }
        r(u) = acc;
    }
    return r;
}

/// Indices of the n largest |residuals|, ties broken toward the lower pool
/// index; entries below the floor are dropped; n is clamped to the pool size.
inline std::vector<std::size_t> select_operators(const VectorXd& residuals, std::size_t n,
                                                 double floor = 0.0) {
    std::vector<std::size_t> order(residuals.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double fa = std::abs(residuals(a)), fb = std::abs(residuals(b));
        if (fa != fb) return fa > fb;
        return a < b;
    });
    n = std::min(n, order.size());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(residuals(order[i])) <= floor) break;
        out.push_back(order[i]);
    }
    return out;
}

/// One ADAPT run against an effective Hamiltonian, growing the ansatz from
/// `reference` until the configured criterion fires. Appended parameters
/// start at zero and all previous parameters are re-optimized (warm start),
/// which certifies a non-increasing energy across iterations.
inline AnsatzTrace run_adapt(const AdaptConfig& cfg, const SpinHamiltonian& sh,
                             const SectorSpace& space, const CompiledPool& cp,
                             const EffectiveHamiltonian& heff, const SectorVec& reference,
                             const std::string& reference_label = "custom",
                             std::ostream* trace_log = nullptr) {
    cfg.validate();
    AnsatzTrace trace;
    trace.variant = to_string(cfg.variant);
    trace.reference_label = reference_label;

    SectorVec state = reference;
    VectorXd theta(0);
    double objective_prev = heff.expectation(reference);
    trace.energy = heff.physical_energy(reference);
    trace.variance = heff.variance(reference);
    trace.final_state = state;
    trace.reason = StopReason::MaxIterations;

    char line[256];
    for (std::size_t k = 1; k <= cfg.max_iterations; ++k) {
        trace.variance = heff.variance(state);
        if (cfg.criterion == ConvergenceCriterion::Variance &&
            trace.variance < cfg.epsilon) {
            trace.reason = StopReason::ConvergedVariance;
            trace.converged = true;
            break;
        }

        // residual gradients per variant
        VectorXd residuals;
        std::vector<std::size_t> selected;
        switch (cfg.variant) {
            case AdaptVariant::Adapt:
                residuals = residuals_exact(state, cp, heff);
                selected = select_operators(residuals, cfg.n_update, cfg.selection_floor);
                break;
            case AdaptVariant::AdaptRdm:
                residuals = residuals_rdm(state, space, cp, sh, RdmMode::Exact3, &heff);
                selected = select_operators(residuals, cfg.n_update, cfg.selection_floor);
                break;
            case AdaptVariant::AdaptV:
                residuals = residuals_rdm(state, space, cp, sh, RdmMode::Valdemoro, &heff);
                selected = select_operators(residuals, cfg.n_update, cfg.selection_floor);
                break;
            case AdaptVariant::AdaptVx: {
                VectorXd approx =
                    residuals_rdm(state, space, cp, sh, RdmMode::Valdemoro, &heff);
                auto aux =
                    select_operators(approx, cfg.aux_size(), cfg.selection_floor);
                // recompute exactly on the auxiliary pool only
                SectorVec hs = heff.apply(state);
                residuals = VectorXd::Zero(cp.ops.size());
                for (std::size_t u : aux)
                    residuals(u) = 2.0 * std::real(hs.dot(cp.ops[u].mat * state));
                selected = select_operators(residuals, cfg.n_update, cfg.selection_floor);
                break;
            }
        }

        if (cfg.criterion == ConvergenceCriterion::ResidualNorm &&
            residuals.norm() < cfg.epsilon) {
            trace.reason = StopReason::ConvergedResidualNorm;
            trace.converged = true;
            break;
        }
        if (selected.empty()) {
            trace.reason = StopReason::PoolExhausted;
            break;
        }

        VectorXd theta_new = VectorXd::Zero(theta.size() + selected.size());
        theta_new.head(theta.size()) = theta;
        for (std::size_t u : selected) trace.sequence.push_back(u);
        theta = theta_new;

        auto obj = make_objective(cp, trace.sequence, reference, heff);
        MinimizeOptions opt;
        if (trace_log) {
            opt.on_iteration = [&](std::size_t it, double f, double gn, double step) {
                std::snprintf(line, sizeof(line), "  bfgs %4zu  E=%.12f  |g|=%.3e  step=%.3e",
                              it, f + heff.e_core, gn, step);
                (*trace_log) << line << "\n";
            };
        }
        auto res = minimize(obj, theta, opt);
        if (res.energy > objective_prev + 1e-10)
            throw std::logic_error(
                "run_adapt: energy increased across an iteration (optimizer fault)");
        theta = res.theta;
        state = build_ansatz_state(cp, trace.sequence, theta, reference);

        IterationRecord rec;
        rec.iteration = k;
        for (std::size_t u : selected) {
            rec.selected_labels.push_back(cp.pool->elements[u].label);
            rec.selected_residuals.push_back(residuals(u));
        }
        rec.residual_norm2 = residuals.norm();
        rec.energy = heff.physical_energy(state);
        rec.variance = heff.variance(state);
        rec.n_parameters = trace.sequence.size();
        rec.bfgs_iterations = res.iterations;
        trace.iterations.push_back(rec);

        if (trace_log) {
            std::snprintf(line, sizeof(line),
                          "iter %3zu  |R|2=%.6e  E=%.12f  var=%.6e  Ns=%zu  bfgs=%zu", k,
                          rec.residual_norm2, rec.energy, rec.variance, rec.n_parameters,
                          rec.bfgs_iterations);
            (*trace_log) << line;
            (*trace_log) << "  ops:";
            for (const auto& l : rec.selected_labels) (*trace_log) << ' ' << l;
            (*trace_log) << "\n";
        }

        const double delta = std::abs(res.energy - objective_prev);
        objective_prev = res.energy;
        trace.energy = rec.energy;
        trace.final_state = state;
        trace.parameters = theta;
        if (delta < cfg.energy_stall) {
            trace.reason = StopReason::EnergyStall;
            break;
        }
    }
    trace.variance = heff.variance(trace.final_state);
    return trace;
}

/// Convenience entry point: builds the sector, compiles the pool and the
/// Hamiltonian, and prepares the reference determinant from the config.
inline AnsatzTrace run_adapt(const AdaptConfig& cfg, const SpinHamiltonian& sh,
                             const OperatorPool& pool, std::ostream* trace_log = nullptr) {
    cfg.validate();
    if (cfg.reference_occupations.empty())
        throw std::invalid_argument("run_adapt: reference occupations required");
    int sz2 = 0;
    for (unsigned o : cfg.reference_occupations) sz2 += (o % 2 == 0) ? 1 : -1;
    auto space = SectorSpace::build(static_cast<unsigned>(sh.n_spin_orbitals),
                                    static_cast<unsigned>(cfg.reference_occupations.size()),
                                    sz2);
    auto cp = CompiledPool::build(pool, space);
    EffectiveHamiltonian heff;
    heff.h = compile(hamiltonian_pauli(sh), space);
    heff.e_core = sh.e_core;
    auto ref = space.determinant(cfg.reference_occupations);
    return run_adapt(cfg, sh, space, cp, heff, ref, "hf", trace_log);
}

}  // namespace adaptrdm
