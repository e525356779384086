#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ggnlab/errors.hpp"

namespace ggnlab {

// Point estimate with a batch-means standard error. Autocorrelated series are
// split into fixed-count batches; the spread of per-batch values gives the SE
// without any regenerative-cycle assumption.
struct Estimate {
    double value = 0.0;
    double se = 0.0;
    int n_batches = 0;
    double ci_lo() const { return value - 1.96 * se; }
    double ci_hi() const { return value + 1.96 * se; }
    double z_against(double target) const {
        return se > 0.0 ? (value - target) / se : (value == target ? 0.0 : 1e300);
    }
};

// Accumulated sums for a whole run plus one snapshot per batch. Slot meaning
// is owned by the producer (see sim.hpp); this type only does the batch-means
// arithmetic. Merging replications concatenates batches and adds totals.
struct BatchTable {
    std::vector<double> totals;
    std::vector<std::vector<double>> batches;

    void merge(const BatchTable& other);
};

// Estimate of g evaluated on the run totals, with the SE taken from g over
// the per-batch sums. g may return NaN for a batch it cannot evaluate
// (e.g. no events of the needed class); such batches are skipped.
Estimate derived_estimate(const BatchTable& table,
                          const std::function<double(const double*)>& g);

// Plain ratio totals[num]/totals[den].
Estimate ratio_estimate(const BatchTable& table, int num_slot, int den_slot);

// Precision-weighted combination of independent estimates of one quantity.
Estimate merge_inverse_variance(std::span<const Estimate> parts);

// Throws InsufficientData unless the estimate has at least `min_batches`
// usable batches.
void require_batches(const Estimate& e, int min_batches = 8);

}  // namespace ggnlab
