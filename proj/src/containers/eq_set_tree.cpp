#include <algorithm>

#include "build.hpp"

namespace mbc::containers {

using namespace build;

// ---------------------------------------------------------------------------
// EqSet

EqSet::EqSet(std::int64_t modulus, std::size_t universe) : modulus_(modulus), universe_(universe) {}

bool EqSet::equivalent(Ref x, Ref y) const
{
    return static_cast<std::int64_t>(x.id) % modulus_ == static_cast<std::int64_t>(y.id) % modulus_;
}

Value EqSet::model(std::string_view query) const
{
    if (query == "set") {
        return Set::of(std::vector<Value>(items_.begin(), items_.end()));
    }
    if (query == "relation") {
        std::vector<Relation::Pair> pairs;
        for (std::uint32_t x = 0; x < universe_; ++x) {
            for (std::uint32_t y = 0; y < universe_; ++y) {
                if (equivalent(Ref{x}, Ref{y})) {
                    pairs.emplace_back(Value::reference(x), Value::reference(y));
                }
            }
        }
        return Relation::of(std::move(pairs));
    }
    throw UnknownFeature("EqSet has no model query '" + std::string(query) + "'");
}

ObjectPtr EqSet::clone() const
{
    return std::make_shared<EqSet>(*this);
}

std::string EqSet::concrete_key() const
{
    std::string key = std::to_string(modulus_) + "/" + std::to_string(universe_) + ":";
    for (auto r : items_) {
        key += model::to_string(r) + " ";
    }
    return key;
}

Result EqSet::call(std::string_view feature, std::span<const Argument> args)
{
    auto known = [&](Ref v) {
        if (v.id >= universe_) {
            throw model::DomainError("element outside the equivalence universe");
        }
        return v;
    };
    if (feature == "has") {
        Ref v = known(element_arg(args, 0));
        return Value::boolean(std::any_of(items_.begin(), items_.end(), [&](Ref x) { return equivalent(x, v); }));
    }
    if (feature == "add") {
        Ref v = known(element_arg(args, 0));
        if (std::none_of(items_.begin(), items_.end(), [&](Ref x) { return equivalent(x, v); })) {
            items_.push_back(v);
        }
        return {};
    }
    if (feature == "remove") {
        Ref v = known(element_arg(args, 0));
        std::erase_if(items_, [&](Ref x) { return equivalent(x, v); });
        return {};
    }
    if (feature == "count") {
        return Value::integer(static_cast<std::int64_t>(items_.size()));
    }
    if (feature == "is_empty") {
        return Value::boolean(items_.empty());
    }
    unknown_feature("EqSet", feature);
}

namespace {

Set set_of(const Value& v)
{
    return v.as_set();
}

Relation relation_of(const Value& v)
{
    return v.as_relation();
}

bool in_universe(const PreContext& c)
{
    return c.model("relation").as_relation().domain().has(c.arg(0));
}

/// Elements of `s` equivalent to `v`.
Set equivalents(const CallContext& c, const Value& v)
{
    return set_of(c.old("set")) * relation_of(c.old("relation")).image_of(v);
}

}  // namespace

ClassSpec eq_set_spec()
{
    ClassSpec s;
    s.name = "EqSet";
    s.signature = signature({{"set", Sort::set}, {"relation", Sort::relation}});

    s.features.push_back(Feature{
        .name = "make",
        .kind = FeatureKind::constructor,
        .args = {integer("k")},
        .result = returns_object("EqSet"),
        .contract = {.pre = [](const PreContext& c) { return c.arg(0).as_integer() >= 1; },
                     .post = {model_clause("make/set",
                                           [](const CallContext& c) { return set_of(c.now("set")).is_empty(); }),
                              model_clause("make/relation",
                                           [](const CallContext& c) {
                                               auto k = c.arg(0).as_integer();
                                               auto n = static_cast<std::uint32_t>(c.run().universe);
                                               std::vector<Relation::Pair> expected;
                                               for (std::uint32_t x = 0; x < n; ++x) {
                                                   for (std::uint32_t y = 0; y < n; ++y) {
                                                       if (x % k == y % k) {
                                                           expected.emplace_back(Value::reference(x), Value::reference(y));
                                                       }
                                                   }
                                               }
                                               return relation_of(c.now("relation")) == Relation::of(std::move(expected));
                                           })},
                     .mentioned = {"set", "relation"}},
        .construct = [](std::span<const Argument> args, const RunContext& run) -> ObjectPtr {
            return std::make_shared<EqSet>(integer_arg(args, 0), run.universe);
        },
    });

    s.features.push_back(Feature{
        .name = "has",
        .kind = FeatureKind::value_query,
        .args = {element("v")},
        .result = returns(Sort::boolean),
        .contract = {.pre = in_universe,
                     .post = {model_clause("has/result", [](const CallContext& c) {
                         return c.result().as_boolean() == !equivalents(c, c.arg(0)).is_empty();
                     })}},
    });

    s.features.push_back(Feature{
        .name = "add",
        .kind = FeatureKind::command,
        .args = {element("v")},
        .contract = {.pre = in_universe,
                     .post = {model_clause("add/set",
                                           [](const CallContext& c) {
                                               auto old = set_of(c.old("set"));
                                               auto expected =
                                                   equivalents(c, c.arg(0)).is_empty() ? old.extended(c.arg(0)) : old;
                                               return set_of(c.now("set")) == expected;
                                           })},
                     .mentioned = {"set"}},
    });

    s.features.push_back(Feature{
        .name = "remove",
        .kind = FeatureKind::command,
        .args = {element("v")},
        .contract = {.pre = in_universe,
                     .post = {model_clause("remove/set",
                                           [](const CallContext& c) {
                                               return set_of(c.now("set")) ==
                                                      set_of(c.old("set")) - relation_of(c.old("relation")).image_of(c.arg(0));
                                           })},
                     .mentioned = {"set"}},
    });

    s.features.push_back(Feature{
        .name = "count",
        .kind = FeatureKind::value_query,
        .result = returns(Sort::integer),
        .contract = {.post = {model_clause("count/result", [](const CallContext& c) {
                         return c.result().as_integer() == set_of(c.old("set")).count();
                     })}},
    });

    s.features.push_back(Feature{
        .name = "is_empty",
        .kind = FeatureKind::value_query,
        .result = returns(Sort::boolean),
        .contract = {.post = {model_clause("is_empty/result", [](const CallContext& c) {
                         return c.result().as_boolean() == set_of(c.old("set")).is_empty();
                     })}},
    });

    s.invariant = {
        model_invariant("relation_is_equivalence",
                        [](const Object&, const AbstractState& st) {
                            auto r = st["relation"].as_relation();
                            auto dom = r.domain();
                            for (const auto& x : dom.elements()) {
                                if (!r.has(x, x)) {
                                    return false;
                                }
                            }
                            for (const auto& [x, y] : r.pairs()) {
                                if (!r.has(y, x)) {
                                    return false;
                                }
                                auto image = r.image_of(y);
                                for (const auto& z : image.elements()) {
                                    if (!r.has(x, z)) {
                                        return false;
                                    }
                                }
                            }
                            return true;
                        }),
        model_invariant("no_two_equivalent",
                        [](const Object&, const AbstractState& st) {
                            auto set = st["set"].as_set();
                            auto r = st["relation"].as_relation();
                            return set.for_all([&](const Value& x) { return (set * r.image_of(x)).count() == 1; });
                        }),
    };

    s.estimate = [](std::size_t universe, std::size_t max_size, std::int64_t max_int) {
        // Subsets of the universe (bounded by max_size) times moduli, times insertion orders.
        double total = 0;
        double choose = 1;
        double orders = 1;
        for (std::size_t n = 0; n <= std::min(max_size, universe); ++n) {
            total += choose * orders;
            choose = choose * static_cast<double>(universe - n) / static_cast<double>(n + 1);
            orders *= static_cast<double>(n + 1);
        }
        return total * static_cast<double>(std::max<std::int64_t>(1, max_int));
    };
    return s;
}

// ---------------------------------------------------------------------------
// BinaryTree

BinaryTree::BinaryTree(const BinaryTree& other) : Object(other), root_(copy(other.root_.get())), count_(other.count_) {}

std::unique_ptr<BinaryTree::Node> BinaryTree::copy(const Node* n)
{
    if (n == nullptr) {
        return nullptr;
    }
    return std::make_unique<Node>(Node{n->item, copy(n->left.get()), copy(n->right.get())});
}

BinaryTree::Node* BinaryTree::find(const Sequence& path) const
{
    Node* n = root_.get();
    for (const auto& step : path.elements()) {
        if (n == nullptr) {
            return nullptr;
        }
        n = step.as_boolean() ? n->right.get() : n->left.get();
    }
    return n;
}

Value BinaryTree::model(std::string_view query) const
{
    if (query != "map") {
        throw UnknownFeature("BinaryTree has no model query '" + std::string(query) + "'");
    }
    std::vector<Map::Entry> entries;
    std::vector<std::pair<const Node*, std::vector<Value>>> todo;
    if (root_) {
        todo.push_back({root_.get(), {}});
    }
    while (!todo.empty()) {
        auto [n, path] = std::move(todo.back());
        todo.pop_back();
        entries.emplace_back(Sequence::of(path), Value(n->item));
        if (n->left) {
            auto p = path;
            p.push_back(Value::boolean(false));
            todo.push_back({n->left.get(), std::move(p)});
        }
        if (n->right) {
            auto p = path;
            p.push_back(Value::boolean(true));
            todo.push_back({n->right.get(), std::move(p)});
        }
    }
    return Map::of(std::move(entries));
}

ObjectPtr BinaryTree::clone() const
{
    return std::make_shared<BinaryTree>(*this);
}

std::string BinaryTree::concrete_key() const
{
    return model::to_string(model("map")) + "#" + std::to_string(count_);
}

Result BinaryTree::call(std::string_view feature, std::span<const Argument> args)
{
    if (feature == "add_root") {
        if (root_) {
            throw model::DomainError("tree already has a root");
        }
        root_ = std::make_unique<Node>(Node{element_arg(args, 0), nullptr, nullptr});
        count_ = 1;
        return {};
    }
    if (feature == "put_child") {
        Node* parent = find(value_arg(args, 0).as_sequence());
        if (parent == nullptr) {
            throw model::DomainError("no node at path");
        }
        auto& slot = boolean_arg(args, 1) ? parent->right : parent->left;
        if (slot) {
            throw model::DomainError("child already present");
        }
        slot = std::make_unique<Node>(Node{element_arg(args, 2), nullptr, nullptr});
        ++count_;
        return {};
    }
    if (feature == "put_at") {
        Node* n = find(value_arg(args, 0).as_sequence());
        if (n == nullptr) {
            throw model::DomainError("no node at path");
        }
        n->item = element_arg(args, 1);
        return {};
    }
    if (feature == "item_at") {
        Node* n = find(value_arg(args, 0).as_sequence());
        if (n == nullptr) {
            throw model::DomainError("no node at path");
        }
        return Value(n->item);
    }
    if (feature == "has_path") {
        return Value::boolean(find(value_arg(args, 0).as_sequence()) != nullptr);
    }
    if (feature == "count") {
        return Value::integer(static_cast<std::int64_t>(count_));
    }
    if (feature == "is_empty") {
        return Value::boolean(count_ == 0);
    }
    if (feature == "wipe_out") {
        root_.reset();
        count_ = 0;
        return {};
    }
    unknown_feature("BinaryTree", feature);
}

namespace {

Map tree_map(const Value& v)
{
    return v.as_map();
}

bool path_in_domain(const PreContext& c)
{
    return c.model("map").as_map().has_key(c.arg(0));
}

}  // namespace

ClassSpec binary_tree_spec()
{
    ClassSpec s;
    s.name = "BinaryTree";
    s.signature = signature({{"map", Sort::map}});

    s.features.push_back(Feature{
        .name = "make",
        .kind = FeatureKind::constructor,
        .result = returns_object("BinaryTree"),
        .contract = {.post = {model_clause("make/map",
                                           [](const CallContext& c) { return tree_map(c.now("map")).is_empty(); })},
                     .mentioned = {"map"}},
        .construct = [](std::span<const Argument>, const RunContext&) -> ObjectPtr {
            return std::make_shared<BinaryTree>();
        },
    });

    s.features.push_back(Feature{
        .name = "add_root",
        .kind = FeatureKind::command,
        .args = {element("v")},
        .contract = {.pre = [](const PreContext& c) { return c.model("map").as_map().is_empty(); },
                     .post = {model_clause("add_root/count",
                                           [](const CallContext& c) { return tree_map(c.now("map")).count() == 1; }),
                              model_clause("add_root/root",
                                           [](const CallContext& c) {
                                               return tree_map(c.now("map")).item(Sequence()) == c.arg(0);
                                           })},
                     .mentioned = {"map"}},
    });

    s.features.push_back(Feature{
        .name = "put_child",
        .kind = FeatureKind::command,
        .args = {path("path"), boolean("side"), element("v")},
        .contract = {.pre = [](const PreContext& c) {
                         auto m = c.model("map").as_map();
                         return m.has_key(c.arg(0)) && !m.has_key(c.arg(0).as_sequence().extended(c.arg(1)));
                     },
                     .post = {model_clause("put_child/map",
                                           [](const CallContext& c) {
                                               auto child = c.arg(0).as_sequence().extended(c.arg(1));
                                               return tree_map(c.now("map")) ==
                                                      tree_map(c.old("map")).updated(child, c.arg(2));
                                           })},
                     .mentioned = {"map"}},
    });

    s.features.push_back(Feature{
        .name = "put_at",
        .kind = FeatureKind::command,
        .args = {path("path"), element("v")},
        .contract = {.pre = path_in_domain,
                     .post = {model_clause("put_at/map",
                                           [](const CallContext& c) {
                                               return tree_map(c.now("map")) ==
                                                      tree_map(c.old("map")).replaced_at(c.arg(0), c.arg(1));
                                           })},
                     .mentioned = {"map"}},
    });

    s.features.push_back(Feature{
        .name = "item_at",
        .kind = FeatureKind::reference_query,
        .args = {path("path")},
        .result = returns(Sort::reference),
        .contract = {.pre = path_in_domain,
                     .post = {model_clause("item_at/result", [](const CallContext& c) {
                         return c.result() == tree_map(c.old("map")).item(c.arg(0));
                     })}},
    });

    s.features.push_back(Feature{
        .name = "has_path",
        .kind = FeatureKind::value_query,
        .args = {path("path")},
        .result = returns(Sort::boolean),
        .contract = {.post = {model_clause("has_path/result", [](const CallContext& c) {
                         return c.result().as_boolean() == tree_map(c.old("map")).has_key(c.arg(0));
                     })}},
    });

    s.features.push_back(Feature{
        .name = "count",
        .kind = FeatureKind::value_query,
        .result = returns(Sort::integer),
        .contract = {.post = {model_clause("count/result", [](const CallContext& c) {
                         return c.result().as_integer() == tree_map(c.old("map")).count();
                     })}},
    });

    s.features.push_back(Feature{
        .name = "is_empty",
        .kind = FeatureKind::value_query,
        .result = returns(Sort::boolean),
        .contract = {.post = {model_clause("is_empty/result", [](const CallContext& c) {
                         return c.result().as_boolean() == tree_map(c.old("map")).is_empty();
                     })}},
    });

    s.features.push_back(Feature{
        .name = "wipe_out",
        .kind = FeatureKind::command,
        .contract = {.post = {model_clause("wipe_out/map",
                                           [](const CallContext& c) { return tree_map(c.now("map")).is_empty(); })},
                     .mentioned = {"map"}},
    });

    s.invariant = {
        model_invariant("prefix_closed",
                        [](const Object&, const AbstractState& st) {
                            auto m = st["map"].as_map();
                            return m.domain().for_all([&](const Value& p) {
                                auto path = p.as_sequence();
                                return path.is_empty() || m.has_key(path.front(path.count() - 1));
                            });
                        }),
    };

    s.estimate = [](std::size_t universe, std::size_t max_size, std::int64_t) {
        // Catalan-bounded shapes times labelings.
        double total = 0;
        double catalan = 1;
        double labels = 1;
        for (std::size_t n = 0; n <= max_size; ++n) {
            total += catalan * labels;
            catalan = catalan * 2.0 * static_cast<double>(2 * n + 1) / static_cast<double>(n + 2);
            labels *= static_cast<double>(universe);
        }
        return total;
    };
    return s;
}

}  // namespace mbc::containers
