#include "ggnlab/stats.hpp"

#include <cmath>
#include <limits>

namespace ggnlab {

void BatchTable::merge(const BatchTable& other) {
    if (totals.empty()) {
        totals = other.totals;
        batches = other.batches;
        return;
    }
    if (totals.size() != other.totals.size())
        throw Error("BatchTable::merge: incompatible slot layouts");
    for (size_t i = 0; i < totals.size(); i++) totals[i] += other.totals[i];
    batches.insert(batches.end(), other.batches.begin(), other.batches.end());
}

Estimate derived_estimate(const BatchTable& table,
                          const std::function<double(const double*)>& g) {
    Estimate out;
    out.value = g(table.totals.data());
    double sum = 0.0, sumsq = 0.0;
    int n = 0;
    for (const auto& b : table.batches) {
        const double v = g(b.data());
        if (!std::isfinite(v)) continue;
        sum += v;
        sumsq += v * v;
        n++;
    }
    out.n_batches = n;
    if (n >= 2) {
        const double mean = sum / n;
        const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1));
        out.se = std::sqrt(var / n);
    }
    return out;
}

Estimate ratio_estimate(const BatchTable& table, int num_slot, int den_slot) {
    return derived_estimate(table, [=](const double* s) {
        return s[den_slot] > 0.0 ? s[num_slot] / s[den_slot]
                                 : std::numeric_limits<double>::quiet_NaN();
    });
}

Estimate merge_inverse_variance(std::span<const Estimate> parts) {
    Estimate out;
    double wsum = 0.0, vsum = 0.0;
    for (const auto& e : parts) {
        if (e.se <= 0.0) continue;
        const double w = 1.0 / (e.se * e.se);
        wsum += w;
        vsum += w * e.value;
        out.n_batches += e.n_batches;
    }
    if (wsum > 0.0) {
        out.value = vsum / wsum;
        out.se = std::sqrt(1.0 / wsum);
    } else if (!parts.empty()) {
        out.value = parts[0].value;  // all exact: keep the first
        out.n_batches = parts[0].n_batches;
    }
    return out;
}

void require_batches(const Estimate& e, int min_batches) {
    if (e.n_batches < min_batches)
        throw InsufficientData("fewer than the required post-warmup batches");
}

}  // namespace ggnlab
