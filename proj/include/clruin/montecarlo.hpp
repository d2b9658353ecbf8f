#pragma once

#include <cstdint>

#include <json.hpp>

#include "clruin/scaling.hpp"

namespace clruin {

struct SimConfig {
    std::uint64_t paths = 100000;
    std::uint64_t seed = 1;
    // Survival is declared once the surplus reaches x + kappa / R, where R is
    // the scaled model's adjustment coefficient; ruin from that level has
    // probability at most e^{-kappa}, which caps the truncation bias.
    double kappa = 23.0;
    std::uint64_t max_claims = 10000000;  // per-path safety cap
    unsigned threads = 0;                 // 0 = hardware concurrency
};

struct SimEstimate {
    double p_hat = 0.0;
    double std_error = 0.0;
    double bias_bound = 0.0;  // e^{-kappa}
    std::uint64_t paths = 0;
    std::uint64_t seed = 0;
    std::uint64_t capped_paths = 0;  // discarded: hit max_claims unresolved

    nlohmann::json to_json() const;
};

// Estimates psi_n(x) by simulating the embedded claim-time chain of the
// scaled surplus process: between claims the surplus grows by an exponential
// premium increment, and ruin can only happen at a claim instant. Paths draw
// from per-path substreams, so the result is a pure function of (model, x,
// config) regardless of thread count or scheduling.
SimEstimate simulate_ruin(const ScaledModel& model, double x, const SimConfig& config);

}  // namespace clruin
