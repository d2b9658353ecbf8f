#include "clruin/montecarlo.hpp"

#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>
#include <vector>

#include "clruin/random.hpp"

namespace clruin {

namespace {

struct ChunkTally {
    std::uint64_t ruined = 0;
    std::uint64_t capped = 0;
};

enum class PathOutcome { Ruin, Survive, Capped };

PathOutcome run_path(const ClaimDistribution& claims, double start, double barrier,
                     double gain_rate, std::uint64_t max_claims, RandomStream& rs) {
    double surplus = start;
    if (surplus >= barrier) return PathOutcome::Survive;
    for (std::uint64_t i = 0; i < max_claims; ++i) {
        surplus += rs.next_exponential(gain_rate);  // premium income until next claim
        surplus -= claims.sample(rs);
        if (surplus < 0.0) return PathOutcome::Ruin;
        if (surplus >= barrier) return PathOutcome::Survive;
    }
    return PathOutcome::Capped;
}

}  // namespace

SimEstimate simulate_ruin(const ScaledModel& model, double x, const SimConfig& config) {
    if (config.paths == 0)
        throw std::invalid_argument("simulate_ruin: need at least one path");
    if (!(config.kappa > 0.0))
        throw std::invalid_argument("simulate_ruin: kappa must be positive");
    if (x < 0.0) throw std::invalid_argument("simulate_ruin: surplus must be >= 0");

    const double adjustment = rn_scaled(model);  // throws NoRoot if absent
    const double barrier = x + config.kappa / adjustment;
    const ClaimDistribution claims = model.scaled_claims();
    // premium gain between claims ~ Exp(lambda_n / c_n)
    const double gain_rate = model.lambda_n() / model.premium_rate_n();

    unsigned threads = config.threads;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(
        std::min<std::uint64_t>(threads, config.paths));

    const auto run_chunk = [&](std::uint64_t begin, std::uint64_t end) {
        ChunkTally tally;
        for (std::uint64_t p = begin; p < end; ++p) {
            RandomStream rs = RandomStream::substream(config.seed, p);
            switch (run_path(claims, x, barrier, gain_rate, config.max_claims, rs)) {
                case PathOutcome::Ruin: ++tally.ruined; break;
                case PathOutcome::Capped: ++tally.capped; break;
                case PathOutcome::Survive: break;
            }
        }
        return tally;
    };

    ChunkTally total;
    if (threads == 1) {
        total = run_chunk(0, config.paths);
    } else {
        std::vector<std::future<ChunkTally>> futures;
        const std::uint64_t chunk = (config.paths + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t begin = static_cast<std::uint64_t>(t) * chunk;
            const std::uint64_t end = std::min(begin + chunk, config.paths);
            if (begin >= end) break;
            futures.push_back(
                std::async(std::launch::async, run_chunk, begin, end));
        }
        for (auto& f : futures) {
            const ChunkTally tally = f.get();
            total.ruined += tally.ruined;
            total.capped += tally.capped;
        }
    }

    const std::uint64_t resolved = config.paths - total.capped;
    SimEstimate est;
    est.paths = config.paths;
    est.seed = config.seed;
    est.capped_paths = total.capped;
    est.bias_bound = std::exp(-config.kappa);
    if (resolved > 0) {
        est.p_hat = static_cast<double>(total.ruined) / static_cast<double>(resolved);
        est.std_error =
            std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(resolved));
    }
    return est;
}

nlohmann::json SimEstimate::to_json() const {
    return nlohmann::json{{"p_hat", p_hat},
                          {"stderr", std_error},
                          {"bias_bound", bias_bound},
                          {"paths", paths},
                          {"seed", seed}};
}

}  // namespace clruin
