#include <algorithm>
#include <chrono>
#include <set>
#include <thread>

#include "mbc/autotest/autotest.hpp"
#include "mbc/model/json.hpp"

namespace mbc::autotest {

using namespace contracts;

nlohmann::ordered_json TraceCall::to_json() const
{
    nlohmann::ordered_json j;
    j["type"] = type;
    j["feature"] = feature;
    j["target"] = target ? nlohmann::ordered_json(*target) : nlohmann::ordered_json(nullptr);
    j["args"] = nlohmann::ordered_json::array();
    for (const auto& a : args) {
        nlohmann::ordered_json x;
        if (a.value) {
            x["value"] = model::to_json(*a.value);
        }
        else {
            x["slot"] = *a.slot;
        }
        j["args"].push_back(std::move(x));
    }
    if (creates) {
        j["creates"] = *creates;
    }
    return j;
}

TraceCall TraceCall::from_json(const nlohmann::ordered_json& j)
{
    TraceCall c;
    c.type = j.at("type").get<std::string>();
    c.feature = j.at("feature").get<std::string>();
    if (!j.at("target").is_null()) {
        c.target = j.at("target").get<std::size_t>();
    }
    for (const auto& a : j.at("args")) {
        TraceArg arg;
        if (a.contains("value")) {
            arg.value = model::value_from_json(a.at("value"));
        }
        else {
            arg.slot = a.at("slot").get<std::size_t>();
        }
        c.args.push_back(std::move(arg));
    }
    if (j.contains("creates")) {
        c.creates = j.at("creates").get<std::size_t>();
    }
    return c;
}

nlohmann::ordered_json FaultReport::to_json() const
{
    nlohmann::ordered_json j;
    j["schema"] = fault_report_schema;
    j["violation"] = violation.to_json();
    j["worker"] = worker;
    j["step"] = step;
    j["faults"] = faults;
    j["filter"] = contracts::to_string(filter);
    j["universe"] = universe;
    j["trace"] = nlohmann::ordered_json::array();
    for (const auto& c : trace) {
        j["trace"].push_back(c.to_json());
    }
    return j;
}

FaultReport FaultReport::from_json(const nlohmann::ordered_json& j)
{
    if (j.value("schema", "") != fault_report_schema) {
        throw UsageError("not a fault report");
    }
    FaultReport r;
    r.violation = ContractViolation::from_json(j.at("violation"));
    r.worker = j.at("worker").get<std::size_t>();
    r.step = j.at("step").get<std::uint64_t>();
    r.faults = j.at("faults").get<std::vector<std::string>>();
    auto filter = parse_clause_filter(j.at("filter").get<std::string>());
    if (!filter) {
        throw UsageError("unknown clause filter in fault report");
    }
    r.filter = *filter;
    r.universe = j.at("universe").get<std::size_t>();
    for (const auto& c : j.at("trace")) {
        r.trace.push_back(TraceCall::from_json(c));
    }
    return r;
}

void CampaignStats::merge(const CampaignStats& other)
{
    attempted += other.attempted;
    rejected += other.rejected;
    passed += other.passed;
    violations += other.violations;
    unreproduced += other.unreproduced;
    for (const auto& [k, n] : other.by_clause) {
        by_clause[k] += n;
    }
    for (const auto& [k, n] : other.by_kind) {
        by_kind[k] += n;
    }
    elapsed = std::max(elapsed, other.elapsed);
}

nlohmann::ordered_json CampaignResult::stats_json() const
{
    nlohmann::ordered_json j;
    j["schema"] = stats_schema;
    j["targets"] = config.targets;
    j["seed"] = config.budget.seed;
    j["workers"] = config.workers;
    j["max_calls"] = config.budget.max_calls;
    j["faults"] = std::vector<std::string>(config.faults.enabled().begin(), config.faults.enabled().end());
    j["filter"] = contracts::to_string(config.filter);
    j["attempted"] = stats.attempted;
    j["rejected"] = stats.rejected;
    j["passed"] = stats.passed;
    j["violations"] = stats.violations;
    j["unreproduced"] = stats.unreproduced;
    j["by_clause"] = stats.by_clause;
    j["by_kind"] = stats.by_kind;
    j["reports"] = reports.size();
    return j;
}

std::string CampaignResult::json_lines() const
{
    std::string out = stats_json().dump() + "\n";
    for (const auto& r : reports) {
        out += r.to_json().dump() + "\n";
    }
    return out;
}

std::vector<Argument> generate_arguments(const Feature& f, std::mt19937_64& rng, const ArgumentPools& pools,
                                         const std::vector<ObjectPtr>& objects, std::vector<std::size_t>* chosen)
{
    auto below = [&](std::uint64_t n) { return static_cast<std::size_t>(rng() % n); };
    std::vector<Argument> args;
    for (const auto& a : f.args) {
        switch (a.kind) {
        case ArgKind::element:
            args.emplace_back(Value::reference(static_cast<std::uint32_t>(below(pools.universe))));
            break;
        case ArgKind::integer:
            args.emplace_back(Value::integer(
                pools.min_int + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(pools.max_int - pools.min_int + 1)))));
            break;
        case ArgKind::boolean:
            args.emplace_back(Value::boolean(below(2) == 1));
            break;
        case ArgKind::path: {
            std::vector<Value> bits;
            for (std::size_t n = below(pools.max_path + 1); n > 0; --n) {
                bits.push_back(Value::boolean(below(2) == 1));
            }
            args.emplace_back(model::Sequence::of(std::move(bits)));
            break;
        }
        case ArgKind::object: {
            if (objects.empty()) {
                throw UsageError(f.name + ": no objects to draw an argument from");
            }
            auto i = below(objects.size());
            if (chosen != nullptr) {
                chosen->push_back(i);
            }
            args.emplace_back(objects[i]);
            break;
        }
        }
    }
    return args;
}

namespace {

struct Slot {
    ObjectPtr object;
    std::size_t id;
    std::int64_t head = -1;  ///< last logged call that touched the object
};

struct LoggedCall {
    TraceCall call;  ///< slots are campaign-wide ids here
    std::vector<std::int64_t> parents;
};

struct TargetPool {
    const ClassSpec* view;
    const ClassSpec* source;
    std::vector<const Feature*> features;  ///< non-constructor features of the view
    std::vector<Slot> slots;
};

class Worker {
public:
    Worker(const Registry& registry, const CampaignConfig& cfg, std::size_t index, std::uint64_t calls)
        : registry_(registry), cfg_(cfg), index_(index), calls_(calls), rng_(cfg.budget.seed + index)
    {
        run_.faults = cfg.faults;
        run_.universe = cfg.pools.universe;
        run_.filter = cfg.filter;
        run_.seed = cfg.budget.seed + index;
        for (const auto& name : cfg.targets) {
            TargetPool p{&registry.get(name), &registry.instance_source(name), {}, {}};
            for (const auto& f : p.view->features) {
                if (f.kind != FeatureKind::constructor && f.kind != FeatureKind::model_query) {
                    p.features.push_back(&f);
                }
            }
            pools_.push_back(std::move(p));
        }
    }

    void run()
    {
        auto start = std::chrono::steady_clock::now();
        for (std::uint64_t step = 0; step < calls_; ++step) {
            if (cfg_.budget.time_limit > 0 && step % 256 == 0) {
                std::chrono::duration<double> d = std::chrono::steady_clock::now() - start;
                if (d.count() > cfg_.budget.time_limit) {
                    break;
                }
            }
            one_call(step);
        }
        stats.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }

    CampaignStats stats;
    std::vector<FaultReport> reports;

private:
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

    void one_call(std::uint64_t step)
    {
        auto& pool = pools_[below(pools_.size())];
        auto ctors = pool.source->constructors();
        bool room = pool.slots.size() < cfg_.budget.max_objects;
        std::size_t choices = (room ? ctors.size() : 0) + (pool.slots.empty() ? 0 : pool.features.size());
        if (choices == 0) {
            return;
        }
        std::size_t pick = below(choices);
        bool constructing = room && pick < ctors.size();
        const Feature& f = constructing ? *ctors[pick] : *pool.features[pick - (room ? ctors.size() : 0)];
        const ClassSpec& spec = constructing ? *pool.source : *pool.view;

        std::optional<std::size_t> target;
        if (!constructing) {
            target = below(pool.slots.size());
        }
        std::vector<ObjectPtr> objects;
        for (const auto& s : pool.slots) {
            objects.push_back(s.object);
        }
        std::vector<std::size_t> chosen;
        auto args = generate_arguments(f, rng_, cfg_.pools, objects, &chosen);

        ++stats.attempted;
        auto out = checked_call(registry_, spec, f, target ? pool.slots[*target].object : ObjectPtr{}, args, run_);
        if (out.status == CallStatus::rejected) {
            ++stats.rejected;
            return;
        }

        // Log the call.
        LoggedCall logged;
        logged.call.type = spec.name;
        logged.call.feature = f.name;
        std::vector<std::size_t> touched;  // pool positions involved
        if (target) {
            logged.call.target = pool.slots[*target].id;
            touched.push_back(*target);
        }
        std::size_t k = 0;
        for (std::size_t i = 0; i < f.args.size(); ++i) {
            if (f.args[i].kind == ArgKind::object) {
                auto at = chosen[k++];
                logged.call.args.push_back(TraceArg{std::nullopt, pool.slots[at].id});
                touched.push_back(at);
            }
            else {
                logged.call.args.push_back(TraceArg{std::get<Value>(args[i]), std::nullopt});
            }
        }
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        for (auto at : touched) {
            logged.parents.push_back(pool.slots[at].head);
        }
        auto* created = std::get_if<ObjectPtr>(&out.result);
        bool keep_created = created != nullptr && *created && out.status == CallStatus::passed &&
                            pool.slots.size() < cfg_.budget.max_objects &&
                            (constructing || registry_.instance_source(f.result.object_type).name == pool.source->name);
        if (keep_created) {
            logged.call.creates = next_id_;
        }
        log_.push_back(std::move(logged));
        auto node = static_cast<std::int64_t>(log_.size() - 1);
        for (auto at : touched) {
            pool.slots[at].head = node;
        }

        if (out.status == CallStatus::passed) {
            ++stats.passed;
            if (keep_created) {
                pool.slots.push_back(Slot{*created, next_id_++, node});
            }
            return;
        }

        ++stats.violations;
        ++stats.by_clause[out.violation->clause];
        ++stats.by_kind[std::string(to_string(out.violation->kind))];
        report(node, *out.violation, step);
        // Objects involved may be corrupted; drop them.
        for (auto it = touched.rbegin(); it != touched.rend(); ++it) {
            pool.slots.erase(pool.slots.begin() + static_cast<std::ptrdiff_t>(*it));
        }
    }

    void report(std::int64_t node, const ContractViolation& v, std::uint64_t step)
    {
        // Collect ancestors of the violating call.
        std::set<std::int64_t> steps;
        std::vector<std::int64_t> work{node};
        while (!work.empty()) {
            auto n = work.back();
            work.pop_back();
            if (n < 0 || !steps.insert(n).second) {
                continue;
            }
            for (auto p : log_[static_cast<std::size_t>(n)].parents) {
                work.push_back(p);
            }
        }
        // Renumber slots by first appearance.
        std::map<std::size_t, std::size_t> renumber;
        auto slot_of = [&](std::size_t id) {
            auto [it, fresh] = renumber.emplace(id, renumber.size());
            return it->second;
        };
        FaultReport r;
        r.violation = v;
        for (auto n : steps) {
            auto c = log_[static_cast<std::size_t>(n)].call;
            if (c.creates && !c.target) {
                c.creates = slot_of(*c.creates);
            }
            if (c.target) {
                c.target = slot_of(*c.target);
            }
            for (auto& a : c.args) {
                if (a.slot) {
                    a.slot = slot_of(*a.slot);
                }
            }
            if (c.creates && c.target) {
                c.creates = slot_of(*c.creates);
            }
            r.trace.push_back(std::move(c));
        }
        r.faults.assign(cfg_.faults.enabled().begin(), cfg_.faults.enabled().end());
        r.filter = cfg_.filter;
        r.universe = cfg_.pools.universe;
        r.worker = index_;
        r.step = step;
        r.violation.seed = run_.seed;

        auto check = replay(registry_, r);
        if (check.status != ReplayStatus::reproduced) {
            ++stats.unreproduced;
            return;
        }
        reports.push_back(std::move(r));
    }

    const Registry& registry_;
    const CampaignConfig& cfg_;
    std::size_t index_;
    std::uint64_t calls_;
    std::mt19937_64 rng_;
    RunContext run_;
    std::vector<TargetPool> pools_;
    std::vector<LoggedCall> log_;
    std::size_t next_id_ = 0;
};

}  // namespace

CampaignResult run_campaign(const Registry& registry, const CampaignConfig& cfg)
{
    if (cfg.targets.empty()) {
        throw UsageError("no campaign targets");
    }
    for (const auto& t : cfg.targets) {
        registry.get(t);
    }
    if (cfg.budget.max_objects == 0 || cfg.pools.universe == 0 || cfg.pools.max_int < cfg.pools.min_int) {
        throw UsageError("campaign budget and pools must be positive");
    }
    std::size_t workers = std::max<std::size_t>(1, cfg.workers);
    std::vector<std::unique_ptr<Worker>> ws;
    for (std::size_t i = 0; i < workers; ++i) {
        std::uint64_t calls = cfg.budget.max_calls / workers + (i < cfg.budget.max_calls % workers ? 1 : 0);
        ws.push_back(std::make_unique<Worker>(registry, cfg, i, calls));
    }
    if (workers == 1) {
        ws.front()->run();
    }
    else {
        std::vector<std::thread> threads;
        for (auto& w : ws) {
            threads.emplace_back([&w] { w->run(); });
        }
        for (auto& t : threads) {
            t.join();
        }
    }
    CampaignResult result;
    result.config = cfg;
    result.config.workers = workers;
    for (auto& w : ws) {
        result.stats.merge(w->stats);
        for (auto& r : w->reports) {
            result.reports.push_back(std::move(r));
        }
    }
    return result;
}

}  // namespace mbc::autotest
