#include "lifopr/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <queue>
#include <set>
#include <stdexcept>

#include "lifopr/errors.hpp"
#include "lifopr/random_stream.hpp"

namespace lifopr {

namespace {

constexpr int kNoJob = -1;

enum class EventKind : int { completion = 0, arrival = 1 };

struct Event {
    double time;
    EventKind kind;
    std::uint64_t seq;
    std::size_t target;  // server for completions, class (1-based) for arrivals
    std::uint64_t token;

    bool operator>(const Event& o) const {
        if (time != o.time) return time > o.time;
        if (kind != o.kind) return kind > o.kind;
        return seq > o.seq;
    }
};

struct ActiveJob {
    JobRecord record;
    double remaining = 0.0;
    double resumed_at = 0.0;
    double suspended_at = 0.0;
    bool counted = false;
};

struct Server {
    int job = kNoJob;
    std::uint64_t token = 0;
};

struct PoolKey {
    std::size_t class_index;
    double order;  // -arrival for LIFO, +arrival for FIFO
    std::uint64_t insertion;
    int slot;

    bool operator<(const PoolKey& o) const {
        if (class_index != o.class_index) return class_index < o.class_index;
        if (order != o.order) return order < o.order;
        return insertion < o.insertion;
    }
};

class Engine {
public:
    Engine(const SystemModel& model, const PolicyConfig& policy)
        : model_(model), policy_(policy), servers_(static_cast<std::size_t>(model.servers)),
          idle_(static_cast<std::size_t>(model.servers)) {}

    RunResult run_stochastic(const RunConfig& cfg);
    RunResult run_trace(const TraceInput& trace);

private:
    // Generic loop; `on_arrival` supplies the next job for an arrival event
    // and may schedule the following one.
    void loop(double max_time, const std::function<void(const Event&)>& on_arrival);

    void push(double time, EventKind kind, std::size_t target, std::uint64_t token = 0) {
        calendar_.push(Event{time, kind, next_seq_++, target, token});
    }

    int allocate(ActiveJob job);
    void admit(int slot, double now);
    void start(int slot, std::size_t server, double now);
    void complete(std::size_t server, double now);
    void suspend(std::size_t server, double now);
    std::optional<std::size_t> choose_victim(std::size_t arriving_class) const;

    const SystemModel& model_;
    PolicyConfig policy_;
    std::vector<Server> servers_;
    std::size_t idle_;
    std::vector<ActiveJob> slots_;
    std::vector<int> free_slots_;
    std::set<PoolKey> pool_;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> calendar_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t next_insertion_ = 0;
    std::uint64_t next_job_id_ = 0;

    std::size_t counted_target_ = 0;
    std::size_t counted_created_ = 0;
    std::size_t counted_done_ = 0;
    double warmup_ = 0.0;
    RunResult result_;
};

int Engine::allocate(ActiveJob job) {
    if (!free_slots_.empty()) {
        const int slot = free_slots_.back();
        free_slots_.pop_back();
        slots_[static_cast<std::size_t>(slot)] = std::move(job);
        return slot;
    }
    slots_.push_back(std::move(job));
    return static_cast<int>(slots_.size() - 1);
}

std::optional<std::size_t> Engine::choose_victim(std::size_t arriving_class) const {
    std::optional<std::size_t> victim;
    for (std::size_t s = 0; s < servers_.size(); ++s) {
        const auto& cand = slots_[static_cast<std::size_t>(servers_[s].job)].record;
        if (!victim) {
            victim = s;
            continue;
        }
        const auto& best = slots_[static_cast<std::size_t>(servers_[*victim].job)].record;
        if (cand.class_index > best.class_index ||
            (cand.class_index == best.class_index && cand.arrival_time < best.arrival_time))
            victim = s;
    }
    const std::size_t victim_class = slots_[static_cast<std::size_t>(servers_[*victim].job)].record.class_index;
    const bool displaceable = victim_class > arriving_class ||
                              (policy_.equal_class_preemption && victim_class == arriving_class);
    if (!displaceable) return std::nullopt;
    return victim;
}

void Engine::start(int slot, std::size_t server, double now) {
    auto& job = slots_[static_cast<std::size_t>(slot)];
    if (!job.record.first_start_time) {
        job.record.first_start_time = now;
    } else {
        const double gap = now - job.suspended_at;
        job.record.interruption_intervals.push_back(gap);
        job.record.total_interruption_time += gap;
    }
    job.resumed_at = now;
    auto& srv = servers_[server];
    srv.job = slot;
    ++srv.token;
    --idle_;
    push(now + job.remaining, EventKind::completion, server, srv.token);
}

void Engine::suspend(std::size_t server, double now) {
    auto& srv = servers_[server];
    auto& job = slots_[static_cast<std::size_t>(srv.job)];
    job.remaining = std::max(0.0, job.remaining - (now - job.resumed_at));
    job.suspended_at = now;
    ++job.record.preemption_count;
    const double order = policy_.within_class_order == WithinClassOrder::lifo ? -job.record.arrival_time
                                                                              : job.record.arrival_time;
    pool_.insert(PoolKey{job.record.class_index, order, next_insertion_++, srv.job});
    srv.job = kNoJob;
    ++srv.token;  // invalidates the pending completion
    ++idle_;
}

void Engine::admit(int slot, double now) {
    const std::size_t cls = slots_[static_cast<std::size_t>(slot)].record.class_index;
    if (idle_ > 0) {
        for (std::size_t s = 0; s < servers_.size(); ++s) {
            if (servers_[s].job == kNoJob) {
                start(slot, s, now);
                return;
            }
        }
    }
    if (const auto victim = choose_victim(cls)) {
        suspend(*victim, now);
        start(slot, *victim, now);
        return;
    }
    const auto& rec = slots_[static_cast<std::size_t>(slot)].record;
    const double order = policy_.within_class_order == WithinClassOrder::lifo ? -rec.arrival_time : rec.arrival_time;
    pool_.insert(PoolKey{cls, order, next_insertion_++, slot});
}

void Engine::complete(std::size_t server, double now) {
    auto& srv = servers_[server];
    const int slot = srv.job;
    auto& job = slots_[static_cast<std::size_t>(slot)];
    job.record.completion_time = now;
    if (job.counted) {
        result_.records.push_back(std::move(job.record));
        ++counted_done_;
    }
    job = ActiveJob{};
    free_slots_.push_back(slot);
    srv.job = kNoJob;
    ++srv.token;
    ++idle_;

    if (!pool_.empty()) {
        const PoolKey next = *pool_.begin();
        pool_.erase(pool_.begin());
        start(next.slot, server, now);
    }
}

void Engine::loop(double max_time, const std::function<void(const Event&)>& on_arrival) {
    while (counted_done_ < counted_target_) {
        if (calendar_.empty()) break;
        const Event ev = calendar_.top();
        if (ev.time > max_time) {
            result_.truncated = true;
            result_.end_time = max_time;
            return;
        }
        calendar_.pop();
        if (ev.kind == EventKind::completion) {
            if (servers_[ev.target].token != ev.token) continue;  // stale after preemption
            complete(ev.target, ev.time);
        } else {
            on_arrival(ev);
        }
        ++result_.events;
        result_.end_time = ev.time;
        if (!pool_.empty() && idle_ > 0)
            throw std::logic_error("work conservation violated: idle server with nonempty pool");
    }
    if (counted_done_ < counted_target_) result_.truncated = true;
}

RunResult Engine::run_stochastic(const RunConfig& cfg) {
    if (cfg.target_completions == 0) throw InputError("target_completions must be > 0");
    if (!(cfg.warmup_time >= 0.0)) throw InputError("warmup_time must be >= 0");
    counted_target_ = cfg.target_completions;
    result_.counted_target = counted_target_;
    warmup_ = cfg.warmup_time;

    const RandomStream root(cfg.seed);
    const std::size_t n = model_.class_count();
    std::vector<RandomStream> arrival_streams;
    std::vector<RandomStream> service_streams;
    for (std::size_t k = 0; k < n; ++k) {
        arrival_streams.push_back(root.substream(2 * k));
        service_streams.push_back(root.substream(2 * k + 1));
    }
    auto interarrival = [&](std::size_t cls) {
        return -std::log(arrival_streams[cls - 1].uniform_open0()) / model_.priority(cls).lambda;
    };
    for (std::size_t cls = 1; cls <= n; ++cls) push(interarrival(cls), EventKind::arrival, cls);

    loop(cfg.max_simulated_time, [&](const Event& ev) {
        const std::size_t cls = ev.target;
        ActiveJob job;
        job.record.id = next_job_id_++;
        job.record.class_index = cls;
        job.record.arrival_time = ev.time;
        job.record.service_requirement = model_.priority(cls).service.sample(service_streams[cls - 1]);
        job.remaining = job.record.service_requirement;
        if (ev.time >= warmup_ && counted_created_ < counted_target_) {
            job.counted = true;
            ++counted_created_;
        }
        admit(allocate(std::move(job)), ev.time);
        push(ev.time + interarrival(cls), EventKind::arrival, cls);
    });

    std::sort(result_.records.begin(), result_.records.end(),
              [](const JobRecord& a, const JobRecord& b) { return a.id < b.id; });
    return std::move(result_);
}

RunResult Engine::run_trace(const TraceInput& trace) {
    const std::size_t n = model_.class_count();
    for (std::size_t k = 0; k < trace.arrivals.size(); ++k) {
        const auto& a = trace.arrivals[k];
        if (!std::isfinite(a.time) || a.time < 0.0) throw InputError("trace arrival time must be finite and >= 0");
        if (k > 0 && a.time < trace.arrivals[k - 1].time)
            throw InputError("trace arrival times must be nondecreasing (entry " + std::to_string(k + 1) + ")");
        if (a.class_index < 1 || a.class_index > n)
            throw InputError("trace entry " + std::to_string(k + 1) + ": class index out of range");
        if (!(std::isfinite(a.service_requirement) && a.service_requirement > 0.0))
            throw InputError("trace entry " + std::to_string(k + 1) + ": service requirement must be > 0");
    }
    counted_target_ = trace.arrivals.size();
    result_.counted_target = counted_target_;

    // Arrival events carry the trace index in `token`.
    for (std::size_t k = 0; k < trace.arrivals.size(); ++k)
        push(trace.arrivals[k].time, EventKind::arrival, trace.arrivals[k].class_index, k);

    loop(trace.max_simulated_time, [&](const Event& ev) {
        const auto& a = trace.arrivals[ev.token];
        ActiveJob job;
        job.record.id = ev.token;
        job.record.class_index = a.class_index;
        job.record.arrival_time = a.time;
        job.record.service_requirement = a.service_requirement;
        job.remaining = a.service_requirement;
        job.counted = true;
        ++counted_created_;
        admit(allocate(std::move(job)), ev.time);
    });

    std::sort(result_.records.begin(), result_.records.end(),
              [](const JobRecord& a, const JobRecord& b) { return a.id < b.id; });
    return std::move(result_);
}

} // namespace

RunResult run(const SystemModel& model, const PolicyConfig& policy, const Workload& workload) {
    model.validate();
    Engine engine(model, policy);
    if (const auto* cfg = std::get_if<RunConfig>(&workload)) return engine.run_stochastic(*cfg);
    return engine.run_trace(std::get<TraceInput>(workload));
}

std::vector<RawClassAggregate> per_class_raw(const std::vector<JobRecord>& records, std::size_t class_count) {
    struct Sums {
        std::size_t jobs = 0;
        double sojourn = 0.0;
        double service = 0.0;
        std::size_t delayed = 0;
        double delay = 0.0;
        double preemptions = 0.0;
        double interruption_total = 0.0;
        std::size_t interruption_count = 0;
    };
    std::vector<Sums> sums(class_count);
    for (const auto& r : records) {
        if (r.class_index < 1 || r.class_index > class_count)
            throw InputError("job record class index out of range");
        auto& s = sums[r.class_index - 1];
        ++s.jobs;
        s.sojourn += r.sojourn();
        s.service += r.service_requirement;
        const double delay = r.initial_delay();
        if (delay > 0.0) {
            ++s.delayed;
            s.delay += delay;
        }
        s.preemptions += r.preemption_count;
        for (double gap : r.interruption_intervals) s.interruption_total += gap;
        s.interruption_count += r.interruption_intervals.size();
    }

    std::vector<RawClassAggregate> out(class_count);
    for (std::size_t k = 0; k < class_count; ++k) {
        const auto& s = sums[k];
        auto& agg = out[k];
        agg.jobs = s.jobs;
        agg.interruption_count = s.interruption_count;
        agg.interruption_total = s.interruption_total;
        if (s.jobs == 0) continue;
        const double n = static_cast<double>(s.jobs);
        agg.sojourn = s.sojourn / n;
        agg.mean_service = s.service / n;
        agg.waiting = *agg.sojourn - *agg.mean_service;
        agg.delayed_fraction = static_cast<double>(s.delayed) / n;
        if (s.delayed > 0) agg.conditional_delay = s.delay / static_cast<double>(s.delayed);
        agg.preemptions = s.preemptions / n;
        if (s.interruption_count > 0)
            agg.interruption_length = s.interruption_total / static_cast<double>(s.interruption_count);
    }
    return out;
}

void write_job_records_csv(std::ostream& os, const std::vector<JobRecord>& records) {
    os << "class,arrival,service,first_start,completion,preemptions,interruption_total\n";
    char buf[256];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%d,%.17g\n", r.class_index, r.arrival_time,
                      r.service_requirement, r.first_start_time.value_or(std::nan("")), r.completion_time,
                      r.preemption_count, r.total_interruption_time);
        os << buf;
    }
}

} // namespace lifopr
