#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ggnlab/sim.hpp"

namespace ggnlab {

// Closed-form references used to cross-check simulated systems. These are the
// only exact stationary results kept in the project; everything else is
// measured.

// Mean queue length of the birth-death chain with birth rate lambda and death
// rate mu 1{Q>0}, solved by truncating the chain rather than by the geometric
// closed form, so it stays an independent route.
double birth_death_mean_queue(double lambda, double mu);

// Erlang C: probability an arrival waits in M/M/n with offered load a = Lambda/mu.
double erlang_c(int n, double offered_load);

// Mean number waiting in M/M/n: C(n, a) * rho / (1 - rho).
double erlang_c_mean_waiting(int n, double lambda, double mu);

// Replays a busy-server event log through the counting formula
//   Q(t) = max( Q0 + D(t), D(t) - min_{t' <= t} D(t') ),
// D = arrivals - total completions, and throws LogInconsistent at the first
// event boundary where it disagrees with the recorded queue length.
// Returns the number of boundaries checked.
std::size_t verify_queue_log(long initial_queue, std::span<const EventRecord> log);

}  // namespace ggnlab
