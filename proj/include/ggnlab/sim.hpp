#pragma once

#include <climits>
#include <cstdint>
#include <vector>

#include "ggnlab/model.hpp"
#include "ggnlab/rng.hpp"
#include "ggnlab/stats.hpp"

namespace ggnlab {

enum class ResidualInit { FreshDraws, EquilibriumDraws, Explicit };

struct InitConfig {
    long initial_queue = 0;
    ResidualInit rule = ResidualInit::EquilibriumDraws;
    std::vector<double> explicit_service;  // size n when rule == Explicit
    double explicit_arrival = -1.0;        // < 0: draw by rule
    std::vector<int> busy_servers;         // Original mode initial busy set
};

// Full state of one system: residual times fall at unit rate between events,
// an event fires exactly when its residual hits zero.
struct SimState {
    double clock = 0.0;
    double r_arrival = 0.0;
    std::vector<double> r_service;     // per server; 0 while idle (Original)
    std::vector<std::uint8_t> busy;    // Original mode; Modified: all 1
    long queue = 0;
    std::vector<int> loo_tracked;      // tracked leave-one-out server indices
    std::vector<long> queue_loo;       // parallel to loo_tracked
};

// kind: 0 = arrival, 1 = completion. Snapshot fields are pre-event; when
// several events share a timestamp they see the intermediate states, in the
// fixed order arrival first, then completions by ascending server index.
struct EventRecord {
    double time = 0.0;
    int kind = 0;
    int server = -1;
    long q_pre = 0;
    long q_post = 0;
    double ra_pre = 0.0;
    std::vector<double> rs_pre;
    std::vector<long> qloo_pre;
};

struct CoupledJob {
    double arrival_time = 0.0;
    double start_time = 0.0;
    double duration = 0.0;
    int server = -1;
};

// Per-job service data recorded from a run that keeps servers busy; drives
// the replay of the matching idle-server system under shared randomness.
struct CouplingTrace {
    std::vector<double> arrival_times;
    std::vector<CoupledJob> jobs;  // real jobs in service-start order
};

// Slot map into the BatchTable. One slot per accumulated statistic:
//   elapsed()     post-warmup simulated time
//   count(c)      events of class c (0 = arrival, 1+i = completion at i)
//   t_*           time integrals of Q, R_a, 1{Q=0}, R_s[i]
//   p_*(c, ...)   sums over class-c events of pre-event functionals
//   bin_*         (Q=0?) x (Qloo=0?) conditional cells for tracked.front()
class StatLayout {
public:
    StatLayout() = default;
    StatLayout(int n, std::vector<int> tracked, bool bins);

    int n() const { return n_; }
    const std::vector<int>& tracked() const { return tracked_; }
    bool has_bins() const { return bins_; }
    int classes() const { return n_ + 1; }

    int elapsed() const { return 0; }
    int count(int cls) const { return 1 + cls; }
    int t_q() const { return t0_; }
    int t_ra() const { return t0_ + 1; }
    int t_idle() const { return t0_ + 2; }
    int t_rs(int i) const { return t0_ + 3 + i; }
    int p_q0(int cls) const { return p0_ + cls * stride_; }
    int p_q(int cls) const { return p0_ + cls * stride_ + 1; }
    int p_ra(int cls) const { return p0_ + cls * stride_ + 2; }
    int p_q0_ra(int cls) const { return p0_ + cls * stride_ + 3; }
    int p_rs(int cls, int j) const { return p0_ + cls * stride_ + 4 + j; }
    int p_q0_rs(int cls, int j) const { return p0_ + cls * stride_ + 4 + n_ + j; }
    int p_loo0(int cls, int tj) const { return p0_ + cls * stride_ + 4 + 2 * n_ + tj; }
    int p_loo0_rs(int cls, int tj) const {
        return p0_ + cls * stride_ + 4 + 2 * n_ + static_cast<int>(tracked_.size()) + tj;
    }
    // cell = (q > 0 ? 1 : 0) + 2 * (qloo > 0 ? 1 : 0)
    int bin_time(int cell) const { return b0_ + cell * 6; }
    int bin_t_rs(int cell) const { return b0_ + cell * 6 + 1; }
    int bin_t_ra(int cell) const { return b0_ + cell * 6 + 2; }
    int bin_count(int cell) const { return b0_ + cell * 6 + 3; }
    int bin_p_rs(int cell) const { return b0_ + cell * 6 + 4; }
    int bin_p_ra(int cell) const { return b0_ + cell * 6 + 5; }

    int total_slots() const { return total_; }
    int tracked_pos(int server) const;

private:
    int n_ = 0;
    std::vector<int> tracked_;
    bool bins_ = false;
    int t0_ = 0, p0_ = 0, stride_ = 0, b0_ = 0, total_ = 0;
};

struct RunConfig {
    std::uint64_t seed = 1;
    std::uint64_t horizon_events = 1'000'000;
    // Events discarded before statistics start; default one tenth of horizon.
    std::uint64_t warmup_events = UINT64_MAX;
    std::vector<int> track_loo;  // Modified mode only
    InitConfig init;
    int batches = 32;
    bool bins = false;
    bool record_log = false;
    bool record_residuals = false;  // fill rs_pre / qloo_pre in the log
    bool record_coupling = false;

    std::uint64_t effective_warmup() const {
        return warmup_events == UINT64_MAX ? horizon_events / 10 : warmup_events;
    }
};

struct SimOutput {
    StatLayout layout;
    BatchTable table;
    Mode mode = Mode::Modified;
    std::uint64_t seed = 0;
    std::uint64_t horizon_events = 0;
    std::uint64_t warmup_events = 0;
    double horizon_time = 0.0;  // post-warmup elapsed time
    long min_loo_margin = LONG_MAX;
    std::vector<EventRecord> log;
    CouplingTrace coupling;

    double total(int slot) const { return table.totals[slot]; }
    double events_of(int cls) const { return total(layout.count(cls)); }
    double completions_total() const;

    Estimate time_avg_q() const;
    Estimate time_avg_ra() const;
    Estimate time_avg_rs(int i) const;
    Estimate idle_fraction() const;
    // Event-average of a recorded functional over one class.
    Estimate palm(int num_slot, int cls) const;

    // Associative merge across replications: sums add, batches concatenate.
    void merge(const SimOutput& other);
};

SimState init_state(const QueueModel& model, const InitConfig& init, RandomStream& stream);

// One macro step: advance to the next event instant and apply every event
// firing there (arrival first, completions by ascending index). Returns the
// fired events with their intermediate pre-state snapshots.
std::vector<EventRecord> advance(SimState& state, const QueueModel& model,
                                 RandomStream& stream);

SimOutput run(const QueueModel& model, const RunConfig& cfg);

}  // namespace ggnlab
