#include "build.hpp"

namespace mbc::containers {

using namespace build;

namespace {

Bag bag_of(const Value& v)
{
    return v.as_bag();
}

Sequence seq_of(const Value& v)
{
    return v.as_sequence();
}

bool not_empty(const PreContext& c)
{
    return !c.model("sequence").as_sequence().is_empty();
}

template <class Items>
Value sequence_of(const Items& items)
{
    std::vector<Value> out(items.begin(), items.end());
    return Sequence::of(std::move(out));
}

template <class Items>
Value bag_from(const Items& items)
{
    // Counted directly from the representation, independently of `sequence`,
    // so the linking invariant compares two computations.
    std::map<std::uint32_t, std::int64_t> counts;
    for (auto r : items) {
        ++counts[r.id];
    }
    std::vector<Bag::Entry> entries;
    for (auto [id, n] : counts) {
        entries.emplace_back(Value::reference(id), n);
    }
    return Bag::of(std::move(entries));
}

template <class Items>
std::string key_of(const Items& items)
{
    return model::to_string(sequence_of(items));
}

std::size_t sequence_estimate(std::size_t universe, std::size_t max_size)
{
    std::size_t total = 0;
    std::size_t n = 1;
    for (std::size_t k = 0; k <= max_size; ++k) {
        total += n;
        n *= universe;
    }
    return total;
}

Feature count_feature()
{
    return Feature{
        .name = "count",
        .kind = FeatureKind::value_query,
        .result = returns(Sort::integer),
        .contract = {.post = {model_clause("count/result", [](const CallContext& c) {
                         return c.result().as_integer() == seq_of(c.old("sequence")).count();
                     })}},
    };
}

}  // namespace

bool dispenser_link(const AbstractState& state, const Value& bag)
{
    auto s = state["sequence"].as_sequence();
    auto b = bag.as_bag();
    if (!(b.domain() == s.range())) {
        return false;
    }
    return b.domain().for_all([&](const Value& x) { return b.multiplicity(x) == s.occurrences(x); });
}

// ---------------------------------------------------------------------------
// Implementations

Value Stack::model(std::string_view query) const
{
    if (query == "sequence") {
        return sequence_of(items_);
    }
    if (query == "bag") {
        return bag_from(items_);
    }
    throw UnknownFeature("Stack has no model query '" + std::string(query) + "'");
}

ObjectPtr Stack::clone() const
{
    return std::make_shared<Stack>(*this);
}

std::string Stack::concrete_key() const
{
    return key_of(items_);
}

Result Stack::call(std::string_view feature, std::span<const Argument> args)
{
    if (feature == "put") {
        items_.push_back(element_arg(args, 0));
        return {};
    }
    if (feature == "item") {
        if (items_.empty()) {
            throw model::DomainError("item on empty stack");
        }
        return Value(items_.back());
    }
    if (feature == "remove") {
        if (items_.empty()) {
            throw model::DomainError("remove on empty stack");
        }
        items_.pop_back();
        return {};
    }
    if (feature == "count") {
        return Value::integer(static_cast<std::int64_t>(items_.size()));
    }
    if (feature == "is_empty") {
        return Value::boolean(items_.empty());
    }
    if (feature == "wipe_out") {
        items_.clear();
        return {};
    }
    unknown_feature("Stack", feature);
}

Value Queue::model(std::string_view query) const
{
    if (query == "sequence") {
        return sequence_of(items_);
    }
    if (query == "bag") {
        return bag_from(items_);
    }
    throw UnknownFeature("Queue has no model query '" + std::string(query) + "'");
}

ObjectPtr Queue::clone() const
{
    return std::make_shared<Queue>(*this);
}

std::string Queue::concrete_key() const
{
    return key_of(items_);
}

Result Queue::call(std::string_view feature, std::span<const Argument> args)
{
    if (feature == "put") {
        items_.push_back(element_arg(args, 0));
        return {};
    }
    if (feature == "item") {
        if (items_.empty()) {
            throw model::DomainError("item on empty queue");
        }
        return Value(items_.front());
    }
    if (feature == "remove") {
        if (items_.empty()) {
            throw model::DomainError("remove on empty queue");
        }
        items_.pop_front();
        return {};
    }
    if (feature == "count") {
        return Value::integer(static_cast<std::int64_t>(items_.size()));
    }
    if (feature == "is_empty") {
        return Value::boolean(items_.empty());
    }
    if (feature == "wipe_out") {
        items_.clear();
        return {};
    }
    unknown_feature("Queue", feature);
}

// ---------------------------------------------------------------------------
// Specifications

ClassSpec collection_spec()
{
    ClassSpec s;
    s.name = "Collection";
    s.deferred = true;
    s.heirs = {"Stack", "Queue"};
    s.signature = signature({{"bag", Sort::bag}});

    s.features.push_back(Feature{
        .name = "is_empty",
        .kind = FeatureKind::value_query,
        .result = returns(Sort::boolean),
        .contract = {.post = {model_clause("is_empty/result", [](const CallContext& c) {
                         return c.result().as_boolean() == bag_of(c.old("bag")).is_empty();
                     })}},
    });

    s.features.push_back(Feature{
        .name = "wipe_out",
        .kind = FeatureKind::command,
        .contract = {.post = {model_clause("wipe_out/bag",
                                           [](const CallContext& c) { return bag_of(c.now("bag")).is_empty(); })},
                     .mentioned = {"bag"}},
    });

    s.features.push_back(Feature{
        .name = "put",
        .kind = FeatureKind::command,
        .args = {element("v")},
        .contract = {.post = {model_clause("put/bag",
                                           [](const CallContext& c) {
                                               return bag_of(c.now("bag")) == bag_of(c.old("bag")).extended(c.arg(0));
                                           })},
                     .mentioned = {"bag"}},
    });

    s.estimate = [](std::size_t universe, std::size_t max_size, std::int64_t) {
        return static_cast<double>(sequence_estimate(universe, max_size));
    };
    return s;
}

ClassSpec dispenser_spec()
{
    ClassSpec s;
    s.name = "Dispenser";
    s.deferred = true;
    s.heirs = {"Stack", "Queue"};
    s.signature = signature({{"sequence", Sort::sequence}});
    s.derived = {{"bag", Sort::bag, {"sequence"}}};

    // Where put inserts and which element item and remove see is left to heirs.
    s.features.push_back(Feature{
        .name = "put",
        .kind = FeatureKind::command,
        .args = {element("v")},
        .contract = {.incompleteness = Cause::inheritance},
    });

    s.features.push_back(Feature{
        .name = "item",
        .kind = FeatureKind::reference_query,
        .result = returns(Sort::reference),
        .contract = {.pre = not_empty,
                     .post = {model_clause("item/in_sequence",
                                           [](const CallContext& c) { return seq_of(c.old("sequence")).has(c.result()); })},
                     .incompleteness = Cause::inheritance},
    });

    s.features.push_back(Feature{
        .name = "remove",
        .kind = FeatureKind::command,
        .contract = {.pre = not_empty,
                     .post = {model_clause("remove/one_less",
                                           [](const CallContext& c) {
                                               auto old_bag = bag_of(c.old("bag"));
                                               auto now_bag = bag_of(c.now("bag"));
                                               return old_bag.domain().exists([&](const Value& x) {
                                                   return now_bag.extended(x) == old_bag;
                                               });
                                           })},
                     .mentioned = {"bag"},
                     .incompleteness = Cause::inheritance},
    });

    s.features.push_back(count_feature());

    s.invariant = {
        model_invariant("link/bag_domain",
                        [](const Object& o, const AbstractState& st) {
                            return o.model("bag").as_bag().domain() == st["sequence"].as_sequence().range();
                        }),
        model_invariant("link/occurrences",
                        [](const Object& o, const AbstractState& st) {
                            auto bag = o.model("bag").as_bag();
                            auto seq = st["sequence"].as_sequence();
                            return bag.domain().for_all(
                                [&](const Value& x) { return bag.multiplicity(x) == seq.occurrences(x); });
                        }),
    };

    inherit(s, collection_spec());
    s.estimate = [](std::size_t universe, std::size_t max_size, std::int64_t) {
        return static_cast<double>(sequence_estimate(universe, max_size));
    };
    return s;
}

namespace {

ClassSpec dispenser_heir(std::string name, std::function<ObjectPtr()> make,
                         std::function<Sequence(const Sequence&, const Value&)> put,
                         std::function<Value(const Sequence&)> item, std::function<Sequence(const Sequence&)> remove)
{
    ClassSpec s;
    s.name = name;
    s.signature = signature({{"sequence", Sort::sequence}});

    s.features.push_back(Feature{
        .name = "make",
        .kind = FeatureKind::constructor,
        .result = returns_object(name),
        .contract = {.post = {model_clause("make/sequence",
                                           [](const CallContext& c) { return seq_of(c.now("sequence")).is_empty(); })},
                     .mentioned = {"sequence"}},
        .construct = [make](std::span<const Argument>, const RunContext&) { return make(); },
    });

    s.features.push_back(Feature{
        .name = "put",
        .kind = FeatureKind::command,
        .args = {element("v")},
        .contract = {.post = {model_clause("put/sequence",
                                           [put](const CallContext& c) {
                                               return seq_of(c.now("sequence")) == put(seq_of(c.old("sequence")), c.arg(0));
                                           })},
                     .mentioned = {"sequence"}},
    });

    s.features.push_back(Feature{
        .name = "item",
        .kind = FeatureKind::reference_query,
        .result = returns(Sort::reference),
        .contract = {.pre = not_empty,
                     .post = {model_clause("item/result",
                                           [item](const CallContext& c) {
                                               return c.result() == item(seq_of(c.old("sequence")));
                                           })}},
    });

    s.features.push_back(Feature{
        .name = "remove",
        .kind = FeatureKind::command,
        .contract = {.pre = not_empty,
                     .post = {model_clause("remove/sequence",
                                           [remove](const CallContext& c) {
                                               return seq_of(c.now("sequence")) == remove(seq_of(c.old("sequence")));
                                           })},
                     .mentioned = {"sequence"}},
    });

    inherit(s, dispenser_spec());
    s.estimate = [](std::size_t universe, std::size_t max_size, std::int64_t) {
        return static_cast<double>(sequence_estimate(universe, max_size));
    };
    return s;
}

}  // namespace

ClassSpec stack_spec()
{
    return dispenser_heir(
        "Stack", [] { return std::make_shared<Stack>(); },
        [](const Sequence& s, const Value& v) { return s.extended(v); },
        [](const Sequence& s) { return s.last(); },
        [](const Sequence& s) { return s.front(s.count() - 1); });
}

ClassSpec queue_spec()
{
    return dispenser_heir(
        "Queue", [] { return std::make_shared<Queue>(); },
        [](const Sequence& s, const Value& v) { return s.extended(v); },
        [](const Sequence& s) { return s.first(); },
        [](const Sequence& s) { return s.tail(2); });
}

}  // namespace mbc::containers
