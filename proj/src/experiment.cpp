#include "polya/experiment.hpp"

#include "polya/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace polya {

namespace {

void check_request(const PolyaSampler &sampler, std::size_t n, std::size_t trials)
{
    require(trials > 0, "experiment needs at least one trial");
    require(n >= 1, "tree size must be positive");
    if (n > sampler.max_n()) {
        throw ResourceError("tree size " + std::to_string(n) + " exceeds the sampler table bound " +
                            std::to_string(sampler.max_n()));
    }
}

// type-7 quantile of sorted data
double quantile(const std::vector<double> &sorted, double p)
{
    const double h = (static_cast<double>(sorted.size()) - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

} // namespace

double ExperimentStats::frequency(std::size_t m) const
{
    for (const auto &[size, freq] : forest_size_histogram) {
        if (size == m) {
            return freq;
        }
    }
    return 0.0;
}

TrialRecord run_trial(const PolyaSampler &sampler, std::size_t n, RngStream rng, HistogramMode mode, ShapePool &pool,
                      ShapeDecomposition &scratch)
{
    pool.clear();
    const std::uint32_t root = sampler.sample_shape(n, rng, pool);
    decompose_shape(pool, root, rng, scratch);
    TrialRecord rec;
    rec.c_size = static_cast<std::uint32_t>(scratch.c_size);
    rec.max_forest = static_cast<std::uint32_t>(scratch.max_forest);
    rec.node_forest = scratch.forests[rng.below(scratch.forests.size())];
    if (mode == HistogramMode::AllNodes) {
        std::map<std::uint32_t, std::uint32_t> counts;
        for (auto f : scratch.forests) {
            ++counts[f];
        }
        rec.forest_counts.assign(counts.begin(), counts.end());
    }
    return rec;
}

ExperimentStats summarize(std::size_t n, HistogramMode mode, const std::vector<TrialRecord> &records)
{
    require(!records.empty(), "experiment needs at least one trial");
    ExperimentStats s;
    s.n = n;
    s.trials = records.size();
    s.mode = mode;
    const auto count = static_cast<double>(records.size());

    double sum = 0;
    for (const auto &r : records) {
        sum += r.c_size;
    }
    s.mean_c = sum / count;
    double sq = 0;
    for (const auto &r : records) {
        const double dev = r.c_size - s.mean_c;
        sq += dev * dev;
    }
    s.var_c = records.size() > 1 ? sq / (count - 1) : 0.0;

    std::map<std::size_t, std::size_t> hist;
    std::size_t total = 0;
    for (const auto &r : records) {
        if (mode == HistogramMode::RandomNode) {
            ++hist[r.node_forest];
            ++total;
        } else {
            for (const auto &[m, c] : r.forest_counts) {
                hist[m] += c;
                total += c;
            }
        }
    }
    s.histogram_total = total;
    for (const auto &[m, c] : hist) {
        s.forest_size_histogram.emplace_back(m, static_cast<double>(c) / static_cast<double>(total));
    }

    std::vector<double> ln;
    ln.reserve(records.size());
    for (const auto &r : records) {
        ln.push_back(r.max_forest);
    }
    double ln_sum = 0;
    for (double v : ln) {
        ln_sum += v;
    }
    s.ln_values.mean = ln_sum / count;
    double ln_sq = 0;
    for (double v : ln) {
        ln_sq += (v - s.ln_values.mean) * (v - s.ln_values.mean);
    }
    s.ln_values.variance = records.size() > 1 ? ln_sq / (count - 1) : 0.0;
    std::sort(ln.begin(), ln.end());
    s.ln_values.min = ln.front();
    s.ln_values.q25 = quantile(ln, 0.25);
    s.ln_values.median = quantile(ln, 0.5);
    s.ln_values.q75 = quantile(ln, 0.75);
    s.ln_values.max = ln.back();
    return s;
}

ExperimentStats run_experiment(const PolyaSampler &sampler, std::size_t n, std::size_t trials, const RngStream &rng,
                               std::size_t workers, HistogramMode mode)
{
    check_request(sampler, n, trials);
    require(workers >= 1, "experiment needs at least one worker");
    std::vector<TrialRecord> records(trials);
    const auto count = static_cast<long long>(trials);
#pragma omp parallel num_threads(static_cast<int>(workers))
    {
        ShapePool pool;
        ShapeDecomposition scratch;
#pragma omp for schedule(dynamic, 16)
        for (long long i = 0; i < count; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            records[idx] = run_trial(sampler, n, rng.substream(idx), mode, pool, scratch);
        }
    }
    return summarize(n, mode, records);
}

ExperimentStats run_experiment_serial(const PolyaSampler &sampler, std::size_t n, std::size_t trials,
                                      const RngStream &rng, HistogramMode mode)
{
    check_request(sampler, n, trials);
    std::vector<TrialRecord> records(trials);
    ShapePool pool;
    ShapeDecomposition scratch;
    for (std::size_t i = 0; i < trials; ++i) {
        records[i] = run_trial(sampler, n, rng.substream(i), mode, pool, scratch);
    }
    return summarize(n, mode, records);
}

} // namespace polya
