#include "ggnlab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace ggnlab {

double birth_death_mean_queue(double lambda, double mu) {
    if (lambda <= 0.0 || mu <= 0.0) throw Error("birth_death_mean_queue: rates must be > 0");
    const double rho = lambda / mu;
    if (rho >= 1.0) throw Unstable("birth_death_mean_queue: rho >= 1");
    // unnormalized stationary weights pi_k = rho^k, truncated once negligible
    double w = 1.0, norm = 0.0, acc = 0.0;
    for (long k = 0; k < 4000000; k++) {
        norm += w;
        acc += k * w;
        if (w < 1e-18 * norm) break;
        w *= rho;
    }
    return acc / norm;
}

double erlang_c(int n, double offered_load) {
    if (n < 1 || offered_load <= 0.0) throw Error("erlang_c: bad arguments");
    const double rho = offered_load / n;
    if (rho >= 1.0) throw Unstable("erlang_c: rho >= 1");
    // Erlang B recursion, then the standard B -> C conversion
    double b = 1.0;
    for (int k = 1; k <= n; k++) b = offered_load * b / (k + offered_load * b);
    return b / (1.0 - rho * (1.0 - b));
}

double erlang_c_mean_waiting(int n, double lambda, double mu) {
    const double a = lambda / mu;
    const double rho = a / n;
    if (rho >= 1.0) throw Unstable("erlang_c_mean_waiting: rho >= 1");
    return erlang_c(n, a) * rho / (1.0 - rho);
}

std::size_t verify_queue_log(long initial_queue, std::span<const EventRecord> log) {
    long net = 0;       // arrivals - completions so far
    long running_min = 0;  // min of net over all earlier boundaries (and t=0)
    std::size_t checked = 0;
    std::size_t i = 0;
    while (i < log.size()) {
        // fold every event sharing this timestamp: the formula sees the
        // post-instant counts, intermediate states are not boundaries
        std::size_t j = i;
        while (j < log.size() && log[j].time == log[i].time) {
            net += log[j].kind == 0 ? 1 : -1;
            j++;
        }
        running_min = std::min(running_min, net);
        const long expect = std::max(initial_queue + net, net - running_min);
        const long got = log[j - 1].q_post;
        if (expect != got) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "queue log diverges at t=%.12g: replay %ld, recorded %ld",
                          log[i].time, expect, got);
            throw LogInconsistent(buf);
        }
        checked++;
        i = j;
    }
    return checked;
}

}  // namespace ggnlab
