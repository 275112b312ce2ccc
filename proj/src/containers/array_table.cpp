#include <algorithm>

#include "build.hpp"

namespace mbc::containers {

using namespace build;

namespace {

Map map_of(const Value& v)
{
    return v.as_map();
}

bool key_in_domain(const PreContext& c, std::size_t arg)
{
    return c.model("map").as_map().has_key(c.arg(arg));
}

Set int_set(std::int64_t l, std::int64_t u)
{
    return IntInterval(l, u).to_set();
}

}  // namespace

// ---------------------------------------------------------------------------
// ArrayT

ArrayT::ArrayT(std::int64_t lower, std::int64_t upper, Ref v)
    : lower_(lower), items_(static_cast<std::size_t>(std::max<std::int64_t>(0, upper - lower + 1)), v),
      capacity_(static_cast<std::int64_t>(items_.size()))
{
}

Value ArrayT::model(std::string_view query) const
{
    if (query == "map") {
        std::vector<Map::Entry> entries;
        for (std::size_t i = 0; i < items_.size(); ++i) {
            entries.emplace_back(Value::integer(lower_ + static_cast<std::int64_t>(i)), Value(items_[i]));
        }
        return Map::of(std::move(entries));
    }
    if (query == "capacity") {
        return Value::integer(capacity_);
    }
    throw UnknownFeature("ArrayT has no model query '" + std::string(query) + "'");
}

ObjectPtr ArrayT::clone() const
{
    return std::make_shared<ArrayT>(*this);
}

std::string ArrayT::concrete_key() const
{
    std::string key = std::to_string(lower_) + "[";
    for (auto r : items_) {
        key += model::to_string(r) + " ";
    }
    return key + "]" + std::to_string(capacity_);
}

Result ArrayT::call(std::string_view feature, std::span<const Argument> args)
{
    auto slot = [&](std::int64_t k) -> Ref& {
        auto offset = k - lower_;
        if (offset < 0 || offset >= static_cast<std::int64_t>(items_.size())) {
            throw model::DomainError("index " + std::to_string(k) + " out of bounds");
        }
        return items_[static_cast<std::size_t>(offset)];
    };
    if (feature == "item") {
        return Value(slot(integer_arg(args, 0)));
    }
    if (feature == "put") {
        slot(integer_arg(args, 1)) = element_arg(args, 0);
        return {};
    }
    if (feature == "fill") {
        Ref v = element_arg(args, 0);
        for (auto k = integer_arg(args, 1); k <= integer_arg(args, 2); ++k) {
            slot(k) = v;
        }
        return {};
    }
    if (feature == "reserve") {
        capacity_ = std::max(capacity_, integer_arg(args, 0));
        return {};
    }
    if (feature == "count") {
        return Value::integer(static_cast<std::int64_t>(items_.size()));
    }
    if (feature == "has_index") {
        auto offset = integer_arg(args, 0) - lower_;
        return Value::boolean(offset >= 0 && offset < static_cast<std::int64_t>(items_.size()));
    }
    unknown_feature("ArrayT", feature);
}

ClassSpec array_spec()
{
    ClassSpec s;
    s.name = "ArrayT";
    s.signature = signature({{"map", Sort::map}, {"capacity", Sort::integer}});

    s.features.push_back(Feature{
        .name = "make",
        .kind = FeatureKind::constructor,
        .args = {integer("l"), integer("u"), element("v")},
        .result = returns_object("ArrayT"),
        .contract = {.pre = [](const PreContext& c) {
                         return c.arg(0).as_integer() <= c.arg(1).as_integer() + 1;
                     },
                     .post = {model_clause("make/domain",
                                           [](const CallContext& c) {
                                               return map_of(c.now("map")).domain() ==
                                                      int_set(c.arg(0).as_integer(), c.arg(1).as_integer());
                                           }),
                              model_clause("make/values",
                                           [](const CallContext& c) { return map_of(c.now("map")).is_constant(c.arg(2)); }),
                              model_clause("make/capacity",
                                           [](const CallContext& c) {
                                               return c.now("capacity").as_integer() == map_of(c.now("map")).count();
                                           })},
                     .mentioned = {"map", "capacity"}},
        .construct = [](std::span<const Argument> args, const RunContext&) -> ObjectPtr {
            return std::make_shared<ArrayT>(integer_arg(args, 0), integer_arg(args, 1), element_arg(args, 2));
        },
    });

    s.features.push_back(Feature{
        .name = "item",
        .kind = FeatureKind::reference_query,
        .args = {integer("k")},
        .result = returns(Sort::reference),
        .contract = {.pre = [](const PreContext& c) { return key_in_domain(c, 0); },
                     .post = {model_clause("item/result", [](const CallContext& c) {
                         return c.result() == map_of(c.old("map")).item(c.arg(0));
                     })}},
    });

    s.features.push_back(Feature{
        .name = "put",
        .kind = FeatureKind::command,
        .args = {element("v"), integer("k")},
        .contract = {.pre = [](const PreContext& c) { return key_in_domain(c, 1); },
                     .post = {model_clause("put/map",
                                           [](const CallContext& c) {
                                               return map_of(c.now("map")) ==
                                                      map_of(c.old("map")).replaced_at(c.arg(1), c.arg(0));
                                           })},
                     .mentioned = {"map"}},
    });

    s.features.push_back(Feature{
        .name = "fill",
        .kind = FeatureKind::command,
        .args = {element("v"), integer("l"), integer("u")},
        .contract =
            {.pre = [](const PreContext& c) { return key_in_domain(c, 1) && key_in_domain(c, 2); },
             .post = {model_clause("fill/domain",
                                   [](const CallContext& c) {
                                       return map_of(c.now("map")).domain() == map_of(c.old("map")).domain();
                                   }),
                      model_clause("fill/inside",
                                   [](const CallContext& c) {
                                       auto lu = int_set(c.arg(1).as_integer(), c.arg(2).as_integer());
                                       return map_of(c.now("map")).restricted(lu).is_constant(c.arg(0));
                                   }),
                      model_clause("fill/outside",
                                   [](const CallContext& c) {
                                       auto lu = int_set(c.arg(1).as_integer(), c.arg(2).as_integer());
                                       auto now = map_of(c.now("map"));
                                       auto old = map_of(c.old("map"));
                                       return now.restricted(now.domain() - lu) == old.restricted(old.domain() - lu);
                                   })},
             .mentioned = {"map"}},
    });

    s.features.push_back(Feature{
        .name = "reserve",
        .kind = FeatureKind::command,
        .args = {integer("n")},
        .contract = {.pre = [](const PreContext& c) { return c.arg(0).as_integer() >= 0; },
                     .post = {model_clause("reserve/capacity",
                                           [](const CallContext& c) {
                                               auto now = c.now("capacity").as_integer();
                                               return now >= c.arg(0).as_integer() &&
                                                      now >= c.old("capacity").as_integer();
                                           })},
                     .mentioned = {"capacity"},
                     .incompleteness = Cause::information_hiding},
    });

    s.features.push_back(Feature{
        .name = "count",
        .kind = FeatureKind::value_query,
        .result = returns(Sort::integer),
        .contract = {.post = {model_clause("count/result", [](const CallContext& c) {
                         return c.result().as_integer() == map_of(c.old("map")).count();
                     })}},
    });

    s.features.push_back(Feature{
        .name = "has_index",
        .kind = FeatureKind::value_query,
        .args = {integer("k")},
        .result = returns(Sort::boolean),
        .contract = {.post = {model_clause("has_index/result", [](const CallContext& c) {
                         return c.result().as_boolean() == map_of(c.old("map")).has_key(c.arg(0));
                     })}},
    });

    s.invariant = {
        model_invariant("domain_is_interval",
                        [](const Object&, const AbstractState& st) {
                            auto domain = st["map"].as_map().domain();
                            if (domain.is_empty()) {
                                return true;
                            }
                            auto lo = domain.elements().front().as_integer();
                            auto hi = domain.elements().back().as_integer();
                            return domain.count() == hi - lo + 1;
                        }),
        model_invariant("capacity_covers_count",
                        [](const Object&, const AbstractState& st) {
                            return st["capacity"].as_integer() >= st["map"].as_map().count();
                        }),
    };

    s.estimate = [](std::size_t universe, std::size_t max_size, std::int64_t max_int) {
        double total = 0;
        double fills = 1;
        for (std::size_t n = 0; n <= max_size; ++n) {
            double placements = static_cast<double>(2 * max_int + 2 - static_cast<std::int64_t>(n));
            total += std::max(0.0, placements) * fills * static_cast<double>(max_int + 1);
            fills *= static_cast<double>(universe);
        }
        return total;
    };
    return s;
}

// ---------------------------------------------------------------------------
// TableT and HashTable

Value HashTable::model(std::string_view query) const
{
    if (query == "map") {
        std::vector<Map::Entry> entries;
        for (const auto& [k, v] : items_) {
            entries.emplace_back(Value::reference(k), Value(v));
        }
        return Map::of(std::move(entries));
    }
    throw UnknownFeature("HashTable has no model query '" + std::string(query) + "'");
}

ObjectPtr HashTable::clone() const
{
    return std::make_shared<HashTable>(*this);
}

std::string HashTable::concrete_key() const
{
    return model::to_string(model("map"));
}

Result HashTable::call(std::string_view feature, std::span<const Argument> args)
{
    if (feature == "put") {
        auto it = items_.find(element_arg(args, 1).id);
        if (it == items_.end()) {
            throw model::DomainError("put on absent key");
        }
        it->second = element_arg(args, 0);
        return {};
    }
    if (feature == "force") {
        items_[element_arg(args, 1).id] = element_arg(args, 0);
        return {};
    }
    if (feature == "item") {
        return Value(items_.at(element_arg(args, 0).id));
    }
    if (feature == "has_key") {
        return Value::boolean(items_.contains(element_arg(args, 0).id));
    }
    if (feature == "count") {
        return Value::integer(static_cast<std::int64_t>(items_.size()));
    }
    if (feature == "remove") {
        items_.erase(element_arg(args, 0).id);
        return {};
    }
    if (feature == "wipe_out") {
        items_.clear();
        return {};
    }
    unknown_feature("HashTable", feature);
}

ClassSpec table_spec()
{
    ClassSpec s;
    s.name = "TableT";
    s.deferred = true;
    s.heirs = {"HashTable"};
    s.signature = signature({{"map", Sort::map}});

    s.features.push_back(Feature{
        .name = "put",
        .kind = FeatureKind::command,
        .args = {element("v"), element("k")},
        .contract = {.pre = [](const PreContext& c) { return key_in_domain(c, 1); },
                     .post = {model_clause("put/map",
                                           [](const CallContext& c) {
                                               return map_of(c.now("map")) ==
                                                      map_of(c.old("map")).replaced_at(c.arg(1), c.arg(0));
                                           })},
                     .mentioned = {"map"}},
    });

    s.features.push_back(Feature{
        .name = "force",
        .kind = FeatureKind::command,
        .args = {element("v"), element("k")},
        .contract = {.post = {model_clause("force/map",
                                           [](const CallContext& c) {
                                               return map_of(c.now("map")) ==
                                                      map_of(c.old("map")).updated(c.arg(1), c.arg(0));
                                           })},
                     .mentioned = {"map"}},
    });

    s.features.push_back(Feature{
        .name = "item",
        .kind = FeatureKind::reference_query,
        .args = {element("k")},
        .result = returns(Sort::reference),
        .contract = {.pre = [](const PreContext& c) { return key_in_domain(c, 0); },
                     .post = {model_clause("item/result", [](const CallContext& c) {
                         return c.result() == map_of(c.old("map")).item(c.arg(0));
                     })}},
    });

    s.features.push_back(Feature{
        .name = "has_key",
        .kind = FeatureKind::value_query,
        .args = {element("k")},
        .result = returns(Sort::boolean),
        .contract = {.post = {model_clause("has_key/result", [](const CallContext& c) {
                         return c.result().as_boolean() == map_of(c.old("map")).has_key(c.arg(0));
                     })}},
    });

    s.features.push_back(Feature{
        .name = "count",
        .kind = FeatureKind::value_query,
        .result = returns(Sort::integer),
        .contract = {.post = {model_clause("count/result", [](const CallContext& c) {
                         return c.result().as_integer() == map_of(c.old("map")).count();
                     })}},
    });

    s.features.push_back(Feature{
        .name = "remove",
        .kind = FeatureKind::command,
        .args = {element("k")},
        .contract = {.pre = [](const PreContext& c) { return key_in_domain(c, 0); },
                     .post = {model_clause("remove/map",
                                           [](const CallContext& c) {
                                               return map_of(c.now("map")) == map_of(c.old("map")).removed(c.arg(0));
                                           })},
                     .mentioned = {"map"}},
    });

    s.features.push_back(Feature{
        .name = "wipe_out",
        .kind = FeatureKind::command,
        .contract = {.post = {model_clause("wipe_out/map",
                                           [](const CallContext& c) { return map_of(c.now("map")).is_empty(); })},
                     .mentioned = {"map"}},
    });

    s.estimate = [](std::size_t universe, std::size_t max_size, std::int64_t) {
        // Partial maps over `universe` keys with at most max_size entries.
        double total = 0;
        double choose = 1;
        double values = 1;
        for (std::size_t n = 0; n <= std::min(max_size, universe); ++n) {
            total += choose * values;
            choose = choose * static_cast<double>(universe - n) / static_cast<double>(n + 1);
            values *= static_cast<double>(universe);
        }
        return total;
    };
    return s;
}

ClassSpec hash_table_spec()
{
    ClassSpec s;
    s.name = "HashTable";
    s.signature = signature({{"map", Sort::map}});
    s.features.push_back(Feature{
        .name = "make",
        .kind = FeatureKind::constructor,
        .result = returns_object("HashTable"),
        .contract = {.post = {model_clause("make/map",
                                           [](const CallContext& c) { return map_of(c.now("map")).is_empty(); })},
                     .mentioned = {"map"}},
        .construct = [](std::span<const Argument>, const RunContext&) -> ObjectPtr {
            return std::make_shared<HashTable>();
        },
    });
    auto parent = table_spec();
    inherit(s, parent);
    s.estimate = parent.estimate;
    return s;
}

}  // namespace mbc::containers
