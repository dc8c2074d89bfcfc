#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "sburg/config.hpp"
#include "sburg/report.hpp"

namespace sburg {

struct SuiteOptions {
    std::filesystem::path out_dir;
    int threads = 1;
    std::optional<std::uint64_t> seed_override;
};

/// Runs the configured ensemble and persists one "BFD1" field file per
/// (component, snapshot time) plus a manifest with seeds, the config hash,
/// and output file hashes.
Report run_simulate(const ExperimentConfig& cfg, const SuiteOptions& opts);

/// Noise-law acceptance: MC covariance of psi at the configured times versus
/// the fixed-time covariance curve, all lags, 5 standard errors.
Report run_covariance_check(const ExperimentConfig& cfg, const SuiteOptions& opts);

/// Exact discrete structure: comparison, L1-contraction, conservation of
/// mass, Y_G coupled monotonicity, sandwich preservation, and the
/// crossing-dissipation inequality audit.
Report run_structure_suite(const ExperimentConfig& cfg, const SuiteOptions& opts);

/// Moment bounds from a constant start, the stationary moment identities,
/// and the shear-invariance audit.
Report run_moments_suite(const ExperimentConfig& cfg, const SuiteOptions& opts);

/// Gamma structure from both stacks (polymer Monte Carlo and PDE heights),
/// their cross-check, and the Cole-Hopf ladder refinement study.
Report run_gamma_suite(const ExperimentConfig& cfg, const SuiteOptions& opts);

/// Basin stability experiment, ordering of equilibrated pairs, the coupled
/// uniqueness proxy, and variance minimality.
Report run_stability_suite(const ExperimentConfig& cfg, const SuiteOptions& opts);

/// Dispatch by cfg.experiment_kind; writes <kind>.report.json and the
/// manifest into opts.out_dir and returns the report.
Report run_suite(const ExperimentConfig& cfg, const SuiteOptions& opts);

}  // namespace sburg
