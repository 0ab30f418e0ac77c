#pragma once

#include "polya/rng.hpp"
#include "polya/sampler.hpp"

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace polya {

enum class HistogramMode {
    // one uniformly chosen C-node per trial (independent, binomial errors)
    RandomNode,
    // every C-node of every trial (ratio estimator)
    AllNodes,
};

struct TrialRecord {
    std::uint32_t c_size = 0;
    std::uint32_t max_forest = 0;
    std::uint32_t node_forest = 0; // forest at the sampled C-node
    // (m, count) over all C-nodes; filled in AllNodes mode only
    std::vector<std::pair<std::uint32_t, std::uint32_t>> forest_counts;
};

struct LnSummary {
    double mean = 0;
    double variance = 0;
    double min = 0;
    double q25 = 0;
    double median = 0;
    double q75 = 0;
    double max = 0;

    friend bool operator==(const LnSummary &, const LnSummary &) = default;
};

struct ExperimentStats {
    std::size_t n = 0;
    std::size_t trials = 0;
    HistogramMode mode = HistogramMode::RandomNode;
    double mean_c = 0;
    double var_c = 0; // unbiased sample variance
    // (m, relative frequency), ascending m, sums to 1
    std::vector<std::pair<std::size_t, double>> forest_size_histogram;
    std::size_t histogram_total = 0; // number of C-nodes behind the histogram
    LnSummary ln_values;

    [[nodiscard]] double frequency(std::size_t m) const;
    friend bool operator==(const ExperimentStats &, const ExperimentStats &) = default;
};

/// One trial: sample a tree, an automorphism and summarize the decomposition.
/// `pool` and `scratch` are reusable buffers.
TrialRecord run_trial(const PolyaSampler &sampler, std::size_t n, RngStream rng, HistogramMode mode, ShapePool &pool,
                      ShapeDecomposition &scratch);

/// Aggregates records in index order.
ExperimentStats summarize(std::size_t n, HistogramMode mode, const std::vector<TrialRecord> &records);

/// Trials run in parallel on `workers` OpenMP threads. Trial i draws from
/// rng.substream(i), and the reduction is done in trial order, so the result
/// does not depend on `workers`.
ExperimentStats run_experiment(const PolyaSampler &sampler, std::size_t n, std::size_t trials, const RngStream &rng,
                               std::size_t workers, HistogramMode mode = HistogramMode::RandomNode);

/// Single-threaded reference for run_experiment.
ExperimentStats run_experiment_serial(const PolyaSampler &sampler, std::size_t n, std::size_t trials,
                                      const RngStream &rng, HistogramMode mode = HistogramMode::RandomNode);

} // namespace polya
