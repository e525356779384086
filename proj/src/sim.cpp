#include "ggnlab/sim.hpp"

#include <algorithm>
#include <cmath>

namespace ggnlab {

namespace {

// Residuals this close to the step minimum fire together. Deterministic
// inputs produce exact ties only up to float subtraction error.
double tie_epsilon(const QueueModel& model) {
    double scale = moments(model.arrival()).mean;
    for (int i = 0; i < model.n(); i++)
        scale = std::max(scale, moments(model.service(i)).mean);
    return 1e-12 * scale;
}

struct FiredSet {
    bool arrival = false;
    std::vector<int> completions;  // ascending
};

// Advance to the next event instant; on_span(dt) sees the pre-decrement
// residuals, then fired residuals are pinned to exactly zero.
template <class SpanFn>
FiredSet advance_clock(SimState& st, const QueueModel& model, double eps, SpanFn&& on_span) {
    const int n = model.n();
    double dt = st.r_arrival;
    for (int i = 0; i < n; i++)
        if (st.busy[i]) dt = std::min(dt, st.r_service[i]);
    on_span(dt);
    st.clock += dt;
    FiredSet fired;
    st.r_arrival -= dt;
    if (st.r_arrival <= eps) {
        st.r_arrival = 0.0;
        fired.arrival = true;
    }
    for (int i = 0; i < n; i++) {
        if (!st.busy[i]) continue;
        st.r_service[i] -= dt;
        if (st.r_service[i] <= eps) {
            st.r_service[i] = 0.0;
            fired.completions.push_back(i);
        }
    }
    return fired;
}

int pick_idle_server(const SimState& st, const QueueModel& model, RandomStream& rng) {
    int idle = 0;
    for (int i = 0; i < model.n(); i++)
        if (!st.busy[i]) idle++;
    if (idle == 0) return -1;
    if (model.routing() == Routing::FastestIdle) {
        int best = -1;
        for (int i = 0; i < model.n(); i++)
            if (!st.busy[i] && (best < 0 || model.service_rate(i) > model.service_rate(best)))
                best = i;
        return best;
    }
    int pick = std::min(idle - 1, static_cast<int>(rng.uniform() * idle));
    for (int i = 0; i < model.n(); i++) {
        if (st.busy[i]) {
            continue;
        }
        if (pick == 0) return i;
        pick--;
    }
    return -1;
}

// Applies every event at the current instant. pre(cls) runs against the
// intermediate state before each subroutine; post(cls, q_pre, fresh) after.
template <class PreFn, class PostFn>
void apply_events(SimState& st, const QueueModel& model, RandomStream& rng,
                  const FiredSet& fired, PreFn&& pre, PostFn&& post) {
    if (fired.arrival) {
        pre(0);
        const long q_pre = st.queue;
        const double a = sample(model.arrival(), rng);
        st.r_arrival = a;
        if (model.mode() == Mode::Modified) {
            st.queue++;
            for (long& q : st.queue_loo) q++;
        } else {
            const int target = pick_idle_server(st, model, rng);
            if (target >= 0) {
                st.busy[target] = 1;
                st.r_service[target] = sample(model.service(target), rng);
            } else {
                st.queue++;
            }
        }
        post(0, q_pre, a);
    }
    for (int i : fired.completions) {
        pre(1 + i);
        const long q_pre = st.queue;
        double fresh = 0.0;
        if (model.mode() == Mode::Modified) {
            fresh = sample(model.service(i), rng);
            st.r_service[i] = fresh;
            if (st.queue > 0) st.queue--;
            for (size_t tj = 0; tj < st.loo_tracked.size(); tj++)
                if (st.loo_tracked[tj] != i && st.queue_loo[tj] > 0) st.queue_loo[tj]--;
        } else {
            if (st.queue > 0) {
                st.queue--;
                fresh = sample(model.service(i), rng);
                st.r_service[i] = fresh;
            } else {
                st.busy[i] = 0;
                st.r_service[i] = 0.0;
            }
        }
        post(1 + i, q_pre, fresh);
    }
}

}  // namespace

StatLayout::StatLayout(int n, std::vector<int> tracked, bool bins)
    : n_(n), tracked_(std::move(tracked)), bins_(bins) {
    t0_ = 1 + classes();
    p0_ = t0_ + 3 + n_;
    stride_ = 4 + 2 * n_ + 2 * static_cast<int>(tracked_.size());
    b0_ = p0_ + classes() * stride_;
    total_ = b0_ + (bins_ ? 24 : 0);
}

int StatLayout::tracked_pos(int server) const {
    for (size_t i = 0; i < tracked_.size(); i++)
        if (tracked_[i] == server) return static_cast<int>(i);
    return -1;
}

double SimOutput::completions_total() const {
    double acc = 0.0;
    for (int i = 0; i < layout.n(); i++) acc += events_of(1 + i);
    return acc;
}

Estimate SimOutput::time_avg_q() const {
    return ratio_estimate(table, layout.t_q(), layout.elapsed());
}
Estimate SimOutput::time_avg_ra() const {
    return ratio_estimate(table, layout.t_ra(), layout.elapsed());
}
Estimate SimOutput::time_avg_rs(int i) const {
    return ratio_estimate(table, layout.t_rs(i), layout.elapsed());
}
Estimate SimOutput::idle_fraction() const {
    return ratio_estimate(table, layout.t_idle(), layout.elapsed());
}
Estimate SimOutput::palm(int num_slot, int cls) const {
    return ratio_estimate(table, num_slot, layout.count(cls));
}

void SimOutput::merge(const SimOutput& other) {
    table.merge(other.table);
    horizon_events += other.horizon_events;
    warmup_events += other.warmup_events;
    horizon_time += other.horizon_time;
    min_loo_margin = std::min(min_loo_margin, other.min_loo_margin);
}

SimState init_state(const QueueModel& model, const InitConfig& init, RandomStream& stream) {
    const int n = model.n();
    if (init.initial_queue < 0) throw InvalidInit("initial queue must be >= 0");
    SimState st;
    st.queue = init.initial_queue;
    st.r_service.assign(n, 0.0);
    st.busy.assign(n, model.mode() == Mode::Modified ? 1 : 0);

    auto draw = [&](const DistributionSpec& d) {
        return init.rule == ResidualInit::EquilibriumDraws ? equilibrium_sample(d, stream)
                                                           : sample(d, stream);
    };

    if (init.rule == ResidualInit::Explicit) {
        if (init.explicit_arrival < 0.0)
            throw InvalidInit("explicit init requires a nonnegative arrival residual");
        st.r_arrival = init.explicit_arrival;
    } else {
        st.r_arrival =
            init.explicit_arrival >= 0.0 ? init.explicit_arrival : draw(model.arrival());
    }

    if (model.mode() == Mode::Modified) {
        if (init.rule == ResidualInit::Explicit) {
            if (static_cast<int>(init.explicit_service.size()) != n)
                throw InvalidInit("explicit residual count must match the server count");
            for (double r : init.explicit_service)
                if (r < 0.0) throw InvalidInit("explicit residuals must be >= 0");
            st.r_service = init.explicit_service;
            // a zero residual means the completion fires immediately
        } else {
            for (int i = 0; i < n; i++) st.r_service[i] = draw(model.service(i));
        }
    } else {
        for (int i : init.busy_servers) {
            if (i < 0 || i >= n) throw InvalidInit("busy server index out of range");
            st.busy[i] = 1;
            st.r_service[i] = draw(model.service(i));
        }
        if (init.rule == ResidualInit::Explicit) {
            if (init.explicit_service.size() != init.busy_servers.size())
                throw InvalidInit("explicit residual count must match the busy set");
            for (size_t k = 0; k < init.busy_servers.size(); k++) {
                if (init.explicit_service[k] < 0.0)
                    throw InvalidInit("explicit residuals must be >= 0");
                st.r_service[init.busy_servers[k]] = init.explicit_service[k];
            }
        }
    }
    return st;
}

std::vector<EventRecord> advance(SimState& state, const QueueModel& model,
                                 RandomStream& stream) {
    const double eps = tie_epsilon(model);
    std::vector<EventRecord> out;
    FiredSet fired = advance_clock(state, model, eps, [](double) {});
    apply_events(
        state, model, stream, fired,
        [&](int cls) {
            EventRecord r;
            r.time = state.clock;
            r.kind = cls == 0 ? 0 : 1;
            r.server = cls == 0 ? -1 : cls - 1;
            r.q_pre = state.queue;
            r.ra_pre = state.r_arrival;
            r.rs_pre = state.r_service;
            r.qloo_pre = state.queue_loo;
            out.push_back(std::move(r));
        },
        [&](int, long, double) { out.back().q_post = state.queue; });
    return out;
}

SimOutput run(const QueueModel& model, const RunConfig& cfg) {
    const int n = model.n();
    std::vector<int> tracked = cfg.track_loo;
    if (model.mode() == Mode::Original && !tracked.empty())
        throw Error("run: leave-one-out tracking needs the busy-server mode");
    for (int j : tracked)
        if (j < 0 || j >= n) throw Error("run: tracked server index out of range");

    RandomStream rng(cfg.seed);
    SimState st = init_state(model, cfg.init, rng);
    st.loo_tracked = tracked;
    st.queue_loo.assign(tracked.size(), cfg.init.initial_queue);

    SimOutput out;
    out.layout = StatLayout(n, tracked, cfg.bins && !tracked.empty());
    out.mode = model.mode();
    out.seed = cfg.seed;
    out.horizon_events = cfg.horizon_events;
    out.warmup_events = cfg.effective_warmup();
    if (out.warmup_events >= cfg.horizon_events && cfg.horizon_events > 0)
        throw Error("run: warmup must be smaller than the horizon");
    if (cfg.record_coupling) {
        if (model.mode() != Mode::Modified)
            throw Error("run: coupling trace is recorded on the busy-server mode");
        if (cfg.init.initial_queue != 0)
            throw Error("run: coupling trace requires an initially empty queue");
    }

    const double eps = tie_epsilon(model);
    const std::uint64_t total_events = cfg.horizon_events;
    const std::uint64_t warmup = out.warmup_events;
    const std::uint64_t counted = total_events - warmup;
    const int n_batches = std::max(1, cfg.batches);

    const StatLayout& L = out.layout;
    std::vector<double> cur(static_cast<size_t>(L.total_slots()), 0.0);
    out.table.totals.assign(cur.size(), 0.0);
    out.table.batches.reserve(n_batches);

    const int bin_j = tracked.empty() ? -1 : tracked[0];
    std::uint64_t events_done = 0;
    std::uint64_t counted_done = 0;
    int batch_idx = 0;
    auto boundary_for = [&](int k) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(counted) * (k + 1)) / n_batches);
    };
    std::uint64_t next_boundary = boundary_for(0);
    bool recording = warmup == 0;
    std::uint64_t real_jobs_started = 0;

    double* s = cur.data();
    EventRecord pending;  // scratch for log capture; filled pre-mutation

    auto on_span = [&](double dt) {
        if (!recording) return;
        s[L.elapsed()] += dt;
        s[L.t_q()] += st.queue * dt;
        s[L.t_ra()] += (st.r_arrival - 0.5 * dt) * dt;
        if (st.queue == 0) s[L.t_idle()] += dt;
        for (int i = 0; i < n; i++)
            if (st.busy[i]) s[L.t_rs(i)] += (st.r_service[i] - 0.5 * dt) * dt;
        if (L.has_bins()) {
            const int cell =
                (st.queue > 0 ? 1 : 0) + 2 * (st.queue_loo[0] > 0 ? 1 : 0);
            s[L.bin_time(cell)] += dt;
            s[L.bin_t_rs(cell)] += (st.r_service[bin_j] - 0.5 * dt) * dt;
            s[L.bin_t_ra(cell)] += (st.r_arrival - 0.5 * dt) * dt;
        }
    };

    auto on_pre = [&](int cls) {
        // leave-one-out dominance margin, checked at every event boundary
        for (size_t tj = 0; tj < st.queue_loo.size(); tj++) {
            const long margin = st.queue_loo[tj] - st.queue;
            if (margin < out.min_loo_margin) out.min_loo_margin = margin;
        }
        if (cfg.record_log && recording) {
            pending.time = st.clock;
            pending.kind = cls == 0 ? 0 : 1;
            pending.server = cls == 0 ? -1 : cls - 1;
            pending.q_pre = st.queue;
            pending.ra_pre = st.r_arrival;
            if (cfg.record_residuals) {
                pending.rs_pre = st.r_service;
                pending.qloo_pre = st.queue_loo;
            }
        }
        if (!recording) return;
        s[L.count(cls)] += 1.0;
        const bool q0 = st.queue == 0;
        if (q0) s[L.p_q0(cls)] += 1.0;
        s[L.p_q(cls)] += static_cast<double>(st.queue);
        s[L.p_ra(cls)] += st.r_arrival;
        if (q0) s[L.p_q0_ra(cls)] += st.r_arrival;
        for (int j = 0; j < n; j++) {
            s[L.p_rs(cls, j)] += st.r_service[j];
            if (q0) s[L.p_q0_rs(cls, j)] += st.r_service[j];
        }
        for (size_t tj = 0; tj < st.queue_loo.size(); tj++) {
            if (st.queue_loo[tj] == 0) {
                s[L.p_loo0(cls, static_cast<int>(tj))] += 1.0;
                s[L.p_loo0_rs(cls, static_cast<int>(tj))] += st.r_service[tracked[tj]];
            }
        }
        if (L.has_bins() && cls >= 1 && cls != 1 + bin_j) {
            const int cell = (st.queue > 0 ? 1 : 0) + 2 * (st.queue_loo[0] > 0 ? 1 : 0);
            s[L.bin_count(cell)] += 1.0;
            s[L.bin_p_rs(cell)] += st.r_service[bin_j];
            s[L.bin_p_ra(cell)] += st.r_arrival;
        }
    };

    auto close_batch = [&] {
        out.table.batches.push_back(cur);
        for (size_t i = 0; i < cur.size(); i++) {
            out.table.totals[i] += cur[i];
            cur[i] = 0.0;
        }
    };

    auto on_post = [&](int cls, long q_pre, double fresh) {
        if (cfg.record_log && recording) {
            pending.q_post = st.queue;
            out.log.push_back(pending);
        }
        if (cfg.record_coupling) {
            if (cls == 0) {
                out.coupling.arrival_times.push_back(st.clock);
            } else if (q_pre > 0) {
                CoupledJob job;
                job.arrival_time = out.coupling.arrival_times[real_jobs_started];
                job.start_time = st.clock;
                job.duration = fresh;
                job.server = cls - 1;
                out.coupling.jobs.push_back(job);
                real_jobs_started++;
            }
        }
        events_done++;
        if (!recording) {
            if (events_done >= warmup) recording = true;
            return;
        }
        counted_done++;
        if (counted_done >= next_boundary && batch_idx < n_batches) {
            close_batch();
            batch_idx++;
            next_boundary = batch_idx < n_batches ? boundary_for(batch_idx) : UINT64_MAX;
        }
    };

    while (events_done < total_events) {
        FiredSet fired = advance_clock(st, model, eps, on_span);
        apply_events(st, model, rng, fired, on_pre, on_post);
    }
    while (batch_idx < n_batches) {  // flush if the horizon landed mid-batch
        close_batch();
        batch_idx++;
    }
    out.horizon_time = out.table.totals[L.elapsed()];
    return out;
}

}  // namespace ggnlab
