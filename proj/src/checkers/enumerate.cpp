#include <algorithm>
#include <deque>
#include <unordered_set>

#include "mbc/checkers/checkers.hpp"
#include "mbc/model/json.hpp"

namespace mbc::checkers {

using namespace contracts;

std::int64_t EnumerationConfig::result_bound() const
{
    return std::max<std::int64_t>(max_int, static_cast<std::int64_t>(max_size) + 1);
}

nlohmann::ordered_json EnumerationConfig::to_json() const
{
    nlohmann::ordered_json j;
    j["universe"] = universe;
    j["max_size"] = max_size;
    j["max_int"] = max_int;
    j["depth"] = depth;
    j["limit"] = limit;
    return j;
}

EnumerationRefused::EnumerationRefused(std::string subject, double estimate, double limit, std::string_view unit)
    : std::runtime_error("enumeration of " + subject + " refused: estimated " + std::to_string(std::llround(estimate)) +
                         " " + std::string(unit) + " exceeds the limit of " + std::to_string(std::llround(limit))),
      estimate_(estimate)
{
}

std::string to_string(const BuildTrace& t)
{
    std::string out;
    for (const auto& step : t) {
        if (!out.empty()) {
            out += "; ";
        }
        out += step.feature + "(";
        for (std::size_t i = 0; i < step.args.size(); ++i) {
            out += (i > 0 ? ", " : "") + model::to_string(step.args[i]);
        }
        out += ")";
    }
    return out;
}

nlohmann::ordered_json to_json(const BuildTrace& t)
{
    auto j = nlohmann::ordered_json::array();
    for (const auto& step : t) {
        nlohmann::ordered_json s;
        s["feature"] = step.feature;
        s["args"] = nlohmann::ordered_json::array();
        for (const auto& a : step.args) {
            s["args"].push_back(model::to_json(a));
        }
        j.push_back(std::move(s));
    }
    return j;
}

BuildTrace trace_from_json(const nlohmann::ordered_json& j)
{
    BuildTrace t;
    for (const auto& s : j) {
        Step step{s.at("feature").get<std::string>(), {}};
        for (const auto& a : s.at("args")) {
            step.args.push_back(model::value_from_json(a));
        }
        t.push_back(std::move(step));
    }
    return t;
}

std::vector<Value> argument_domain(ArgKind kind, const EnumerationConfig& cfg)
{
    std::vector<Value> out;
    switch (kind) {
    case ArgKind::element:
        for (std::size_t i = 0; i < cfg.universe; ++i) {
            out.push_back(Value::reference(static_cast<std::uint32_t>(i)));
        }
        break;
    case ArgKind::integer:
        for (auto i = -cfg.max_int; i <= cfg.max_int; ++i) {
            out.push_back(Value::integer(i));
        }
        break;
    case ArgKind::boolean:
        out = {Value::boolean(false), Value::boolean(true)};
        break;
    case ArgKind::path: {
        // Boolean sequences up to max_size long, shortest first.
        std::vector<std::vector<Value>> layer{{}};
        for (std::size_t len = 0; len <= cfg.max_size; ++len) {
            std::vector<std::vector<Value>> next;
            for (auto& bits : layer) {
                out.push_back(model::Sequence::of(bits));
                for (bool b : {false, true}) {
                    auto longer = bits;
                    longer.push_back(Value::boolean(b));
                    next.push_back(std::move(longer));
                }
            }
            layer = std::move(next);
        }
        break;
    }
    case ArgKind::object:
        throw UsageError("object arguments have no value domain");
    }
    return out;
}

namespace {

/// Cartesian product of the value domains of `f`'s arguments.
std::vector<std::vector<Value>> value_tuples(const Feature& f, const EnumerationConfig& cfg)
{
    std::vector<std::vector<Value>> tuples{{}};
    for (const auto& a : f.args) {
        auto dom = argument_domain(a.kind, cfg);
        std::vector<std::vector<Value>> next;
        for (const auto& t : tuples) {
            for (const auto& v : dom) {
                auto longer = t;
                longer.push_back(v);
                next.push_back(std::move(longer));
            }
        }
        tuples = std::move(next);
    }
    return tuples;
}

std::vector<Argument> as_arguments(const std::vector<Value>& values)
{
    return {values.begin(), values.end()};
}

}  // namespace

ObjectPtr rebuild(const Registry& registry, std::string_view type, const BuildTrace& trace, const RunContext& run)
{
    if (trace.empty()) {
        throw UsageError("empty build trace");
    }
    const auto& source = registry.instance_source(type);
    const auto& make = source.feature(trace.front().feature);
    if (make.kind != FeatureKind::constructor) {
        throw UsageError("build trace must start with a constructor");
    }
    auto args = as_arguments(trace.front().args);
    ObjectPtr obj = make.construct(args, run);
    for (std::size_t i = 1; i < trace.size(); ++i) {
        auto step_args = as_arguments(trace[i].args);
        obj->call(trace[i].feature, step_args);
    }
    return obj;
}

StateSpace enumerate_states(const Registry& registry, std::string_view type, const EnumerationConfig& cfg,
                            const RunContext& run, const std::set<std::string>& hidden)
{
    StateSpace space;
    space.spec = &registry.get(type);
    space.source = &registry.instance_source(type);
    const auto& estimator = space.spec->estimate ? space.spec->estimate : space.source->estimate;
    if (estimator) {
        space.estimate = estimator(cfg.universe, cfg.max_size, cfg.max_int);
        if (space.estimate > cfg.limit) {
            throw EnumerationRefused(std::string(type), space.estimate, cfg.limit);
        }
    }

    std::vector<const Feature*> commands;
    for (const auto& f : space.spec->features) {
        if (f.kind == FeatureKind::command && !f.has_object_args() && !hidden.contains(f.name)) {
            commands.push_back(&f);
        }
    }

    std::unordered_set<std::string> seen;
    std::deque<std::size_t> frontier;
    auto admit = [&](ObjectPtr obj, BuildTrace trace) {
        if (obj->measure() > cfg.max_size || !seen.insert(obj->concrete_key()).second) {
            return;
        }
        if (static_cast<double>(seen.size()) > cfg.limit) {
            throw EnumerationRefused(std::string(type), static_cast<double>(seen.size()), cfg.limit);
        }
        auto state = space.spec->abstract_state(*obj);
        space.objects.push_back(EnumeratedObject{std::move(obj), std::move(state), std::move(trace), {}, 0});
        frontier.push_back(space.objects.size() - 1);
    };

    for (const Feature* make : space.source->constructors()) {
        if (hidden.contains(make->name)) {
            continue;
        }
        for (auto& values : value_tuples(*make, cfg)) {
            auto args = as_arguments(values);
            if (!precondition_holds(*make, PreContext{nullptr, nullptr, args, &run})) {
                continue;
            }
            ObjectPtr obj;
            try {
                obj = make->construct(args, run);
            }
            catch (const model::ModelError&) {
                continue;
            }
            admit(std::move(obj), BuildTrace{Step{make->name, values}});
        }
    }

    while (!frontier.empty()) {
        std::size_t at = frontier.front();
        frontier.pop_front();
        for (const Feature* c : commands) {
            for (auto& values : value_tuples(*c, cfg)) {
                const auto& from = space.objects[at];
                auto args = as_arguments(values);
                if (!precondition_holds(*c, PreContext{from.object.get(), &from.state, args, &run})) {
                    continue;
                }
                ObjectPtr next = from.object->clone();
                try {
                    next->call(c->name, args);
                }
                catch (const model::ModelError&) {
                    continue;
                }
                auto trace = from.trace;
                trace.push_back(Step{c->name, values});
                admit(std::move(next), std::move(trace));
            }
        }
    }

    // Class ids in canonical state order.
    std::vector<std::size_t> order(space.objects.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return space.objects[a].state < space.objects[b].state; });
    for (std::size_t k = 0; k < order.size(); ++k) {
        auto& o = space.objects[order[k]];
        if (k > 0 && !(space.objects[order[k - 1]].state == o.state)) {
            ++space.classes;
        }
        o.cls = space.classes;
        o.text = to_string(o.state);
    }
    if (!space.objects.empty()) {
        ++space.classes;
    }
    return space;
}

}  // namespace mbc::checkers
