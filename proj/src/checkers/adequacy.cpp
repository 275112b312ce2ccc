#include "mbc/checkers/checkers.hpp"

namespace mbc::checkers {

using namespace contracts;

ModelProjection projection(const ClassSpec& spec, std::string_view name)
{
    if (name == "full") {
        return {"full", [](const AbstractState& s) { return std::vector<Value>(s.values().begin(), s.values().end()); }};
    }
    bool first = name == "count_first";
    if (!first && name != "count_last") {
        throw UsageError("unknown projection '" + std::string(name) + "'");
    }
    if (!spec.signature->has("sequence")) {
        throw UsageError("projection '" + std::string(name) + "' needs a sequence model");
    }
    return {std::string(name), [first](const AbstractState& s) {
                auto seq = s["sequence"].as_sequence();
                std::vector<Value> end;
                if (!seq.is_empty()) {
                    end.push_back(first ? seq.first() : seq.last());
                }
                return std::vector<Value>{Value::integer(seq.count()), model::Sequence::of(std::move(end))};
            }};
}

std::string_view to_string(Direction d)
{
    return d == Direction::distinguishable ? "distinguishable" : "indistinguishable";
}

namespace {

std::vector<std::vector<Value>> tuples_of(const Feature& f, const EnumerationConfig& cfg)
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

std::string call_text(const Feature& f, const std::vector<Value>& args)
{
    std::string s = f.name + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        s += (i > 0 ? ", " : "") + model::to_string(args[i]);
    }
    return s + ")";
}

/// Client-visible behaviour of objects up to a call depth.
class Observer {
public:
    Observer(const Registry& registry, const ClassSpec& spec, const EnumerationConfig& cfg,
             const std::set<std::string>& hidden, const RunContext& run)
        : registry_(registry), spec_(spec), run_(run)
    {
        for (const auto& f : spec.features) {
            if (hidden.contains(f.name) || f.has_object_args()) {
                continue;
            }
            if (f.kind == FeatureKind::value_query || f.kind == FeatureKind::reference_query) {
                for (auto& t : tuples_of(f, cfg)) {
                    queries_.push_back({&f, t, call_text(f, t)});
                }
            }
            else if (f.kind == FeatureKind::command) {
                for (auto& t : tuples_of(f, cfg)) {
                    commands_.push_back({&f, t, call_text(f, t)});
                }
            }
        }
    }

    std::vector<std::string> observe(const ObjectPtr& o, std::size_t depth) const
    {
        std::vector<std::string> lines;
        observe(o, depth, "", lines);
        return lines;
    }

private:
    struct Call {
        const Feature* f;
        std::vector<Value> args;
        std::string text;
    };

    bool applicable(const Call& c, const Object& o, std::span<const Argument> args) const
    {
        auto state = spec_.abstract_state(o);
        return precondition_holds(*c.f, PreContext{&o, &state, args, &run_});
    }

    std::string result_text(const Feature& f, const Result& r) const
    {
        if (auto* v = std::get_if<Value>(&r)) {
            return model::to_string(*v);
        }
        if (auto* o = std::get_if<ObjectPtr>(&r); o != nullptr && *o) {
            // Fresh objects are value-bound: compared through their model.
            return to_string(registry_.get(f.result.object_type).abstract_state(**o));
        }
        return "";
    }

    void observe(const ObjectPtr& o, std::size_t depth, const std::string& prefix, std::vector<std::string>& lines) const
    {
        for (const auto& q : queries_) {
            std::vector<Argument> args(q.args.begin(), q.args.end());
            if (!applicable(q, *o, args)) {
                lines.push_back(prefix + q.text + " n/a");
                continue;
            }
            auto copy = o->clone();
            try {
                lines.push_back(prefix + q.text + " = " + result_text(*q.f, copy->call(q.f->name, args)));
            }
            catch (const model::ModelError&) {
                lines.push_back(prefix + q.text + " raised");
            }
        }
        if (depth == 0) {
            return;
        }
        for (const auto& c : commands_) {
            std::vector<Argument> args(c.args.begin(), c.args.end());
            if (!applicable(c, *o, args)) {
                lines.push_back(prefix + c.text + " n/a");
                continue;
            }
            auto next = o->clone();
            try {
                next->call(c.f->name, args);
            }
            catch (const model::ModelError&) {
                lines.push_back(prefix + c.text + " raised");
                continue;
            }
            observe(next, depth - 1, prefix + c.text + "; ", lines);
        }
    }

    const Registry& registry_;
    const ClassSpec& spec_;
    const RunContext& run_;
    std::vector<Call> queries_;
    std::vector<Call> commands_;
};

std::string first_difference(const std::vector<std::string>& a, const std::vector<std::string>& b)
{
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] != b[i]) {
            return a[i] + "  vs  " + b[i];
        }
    }
    return "";
}

}  // namespace

nlohmann::ordered_json AdequacyVerdict::to_json() const
{
    nlohmann::ordered_json j;
    j["schema"] = adequacy_schema;
    j["type"] = type;
    j["projection"] = projection;
    j["depth"] = depth;
    j["label"] = "up to depth " + std::to_string(depth);
    j["hidden"] = hidden;
    j["adequate"] = adequate();
    j["coarse_ok"] = coarse_ok;
    j["minimal_ok"] = minimal_ok;
    j["objects"] = objects;
    j["pairs"] = pairs;
    j["witnesses"] = nlohmann::ordered_json::array();
    for (const auto& w : witnesses) {
        nlohmann::ordered_json x;
        x["direction"] = to_string(w.direction);
        x["first"] = checkers::to_json(w.first);
        x["second"] = checkers::to_json(w.second);
        x["first_text"] = w.first_text;
        x["second_text"] = w.second_text;
        x["observation"] = w.observation;
        j["witnesses"].push_back(std::move(x));
    }
    return j;
}

AdequacyVerdict check_observational_adequacy(const Registry& registry, std::string_view type,
                                             const EnumerationConfig& cfg, const AdequacyConfig& acfg,
                                             const RunContext& given)
{
    RunContext run = given;
    run.universe = cfg.universe;
    const auto& spec = registry.get(type);
    auto proj = projection(spec, acfg.projection);
    auto space = enumerate_states(registry, type, cfg, run, acfg.hidden);
    Observer observer(registry, spec, cfg, acfg.hidden, run);

    AdequacyVerdict v;
    v.type = spec.name;
    v.projection = proj.name;
    v.depth = acfg.depth;
    v.hidden.assign(acfg.hidden.begin(), acfg.hidden.end());
    v.objects = space.objects.size();

    std::vector<std::vector<Value>> models;
    std::vector<std::vector<std::string>> observations;
    for (const auto& o : space.objects) {
        models.push_back(proj.project(o.state));
        observations.push_back(observer.observe(o.object, acfg.depth));
    }
    auto text_of = [&](std::size_t i) {
        std::string s = "(";
        for (std::size_t k = 0; k < models[i].size(); ++k) {
            s += (k > 0 ? ", " : "") + model::to_string(models[i][k]);
        }
        return space.objects[i].text + " as " + s + ")";
    };

    for (std::size_t i = 0; i < space.objects.size(); ++i) {
        for (std::size_t j = i + 1; j < space.objects.size(); ++j) {
            ++v.pairs;
            bool same_model = models[i] == models[j];
            bool same_behaviour = observations[i] == observations[j];
            if (same_model == same_behaviour) {
                continue;
            }
            auto dir = same_model ? Direction::distinguishable : Direction::indistinguishable;
            bool& flag = same_model ? v.coarse_ok : v.minimal_ok;
            if (!flag) {
                continue;
            }
            flag = false;
            v.witnesses.push_back(AdequacyWitness{dir, space.objects[i].trace, space.objects[j].trace, text_of(i),
                                                  text_of(j),
                                                  same_model ? first_difference(observations[i], observations[j])
                                                             : std::string()});
        }
    }
    return v;
}

}  // namespace mbc::checkers
