#include "build.hpp"

namespace mbc::containers {

using namespace build;

LinkedList::LinkedList(FaultSwitch faults) : faults_(std::move(faults)) {}

LinkedList::LinkedList(const LinkedList& other)
    : Object(other), count_(other.count_), index_(other.index_), faults_(other.faults_)
{
    std::unique_ptr<Cell>* tail = &first_;
    for (const Cell* c = other.first_.get(); c != nullptr; c = c->right.get()) {
        *tail = std::make_unique<Cell>(Cell{c->item, nullptr});
        tail = &(*tail)->right;
    }
}

LinkedList::~LinkedList()
{
    wipe_out();
}

void LinkedList::wipe_out()
{
    // Unlink iteratively; long chains would otherwise recurse in ~unique_ptr.
    while (first_) {
        first_ = std::move(first_->right);
    }
    count_ = 0;
    index_ = 0;
}

LinkedList::Cell* LinkedList::cell_at(std::int64_t i) const
{
    Cell* c = first_.get();
    for (std::int64_t k = 1; k < i && c != nullptr; ++k) {
        c = c->right.get();
    }
    if (c == nullptr || i < 1) {
        throw model::DomainError("no cell at position " + std::to_string(i));
    }
    return c;
}

model::Sequence LinkedList::chain() const
{
    std::vector<Value> items;
    for (const Cell* c = first_.get(); c != nullptr; c = c->right.get()) {
        items.emplace_back(c->item);
    }
    return Sequence::of(std::move(items));
}

Value LinkedList::model(std::string_view query) const
{
    if (query == "sequence") {
        return chain();
    }
    if (query == "index") {
        return Value::integer(index_);
    }
    throw contracts::UnknownFeature("LinkedList has no model query '" + std::string(query) + "'");
}

ObjectPtr LinkedList::clone() const
{
    return std::make_shared<LinkedList>(*this);
}

std::size_t LinkedList::measure() const
{
    std::size_t n = 0;
    for (const Cell* c = first_.get(); c != nullptr; c = c->right.get()) {
        ++n;
    }
    return n;
}

std::string LinkedList::concrete_key() const
{
    return model::to_string(chain()) + "|" + std::to_string(index_) + "|" + std::to_string(count_);
}

void LinkedList::put_right(Ref v)
{
    auto cell = std::make_unique<Cell>(Cell{v, nullptr});
    if (index_ == 0) {
        cell->right = std::move(first_);
        first_ = std::move(cell);
    }
    else {
        Cell* at = cell_at(index_);
        cell->right = std::move(at->right);
        at->right = std::move(cell);
    }
    ++count_;
}

void LinkedList::merge_right(LinkedList& other)
{
    if (!other.first_) {
        other.wipe_out();
        return;
    }
    std::unique_ptr<Cell> other_first = std::move(other.first_);
    std::int64_t other_count = other.count_;
    other.wipe_out();

    Cell* other_last = other_first.get();
    while (other_last->right) {
        other_last = other_last->right.get();
    }
    if (index_ == 0) {
        if (faults_.on(merge_right_missing_link)) {
            first_ = std::move(other_first);
        }
        else {
            other_last->right = std::move(first_);
            first_ = std::move(other_first);
        }
    }
    else {
        Cell* at = cell_at(index_);
        other_last->right = std::move(at->right);
        at->right = std::move(other_first);
    }
    count_ += other_count;
}

Result LinkedList::call(std::string_view feature, std::span<const Argument> args)
{
    if (feature == "count") {
        return Value::integer(count_);
    }
    if (feature == "is_empty") {
        return Value::boolean(count_ == 0);
    }
    if (feature == "item") {
        return Value(cell_at(index_)->item);
    }
    if (feature == "has") {
        Ref v = element_arg(args, 0);
        for (const Cell* c = first_.get(); c != nullptr; c = c->right.get()) {
            if (c->item == v) {
                return Value::boolean(true);
            }
        }
        return Value::boolean(false);
    }
    if (feature == "duplicate") {
        std::int64_t n = integer_arg(args, 0);
        auto copy = std::make_shared<LinkedList>(faults_);
        std::unique_ptr<Cell>* tail = &copy->first_;
        // Positions index .. index + n - 1, clipped to the list.
        std::int64_t pos = 1;
        for (const Cell* c = first_.get(); c != nullptr && pos < index_ + n; c = c->right.get(), ++pos) {
            if (pos >= index_) {
                *tail = std::make_unique<Cell>(Cell{c->item, nullptr});
                tail = &(*tail)->right;
                ++copy->count_;
            }
        }
        return ObjectPtr(copy);
    }
    if (feature == "put_right") {
        put_right(element_arg(args, 0));
        return {};
    }
    if (feature == "merge_right") {
        merge_right(object_arg_as<LinkedList>(args, 0));
        return {};
    }
    if (feature == "start") {
        index_ = 1;
        return {};
    }
    if (feature == "forth") {
        ++index_;
        return {};
    }
    if (feature == "go_before") {
        index_ = 0;
        return {};
    }
    if (feature == "wipe_out") {
        wipe_out();
        return {};
    }
    unknown_feature("LinkedList", feature);
}

namespace {

const LinkedList& as_list(const Object& o)
{
    return dynamic_cast<const LinkedList&>(o);
}

Sequence seq_of(const Value& v)
{
    return v.as_sequence();
}

bool cursor_within(const PreContext& c)
{
    auto index = c.model("index").as_integer();
    return 0 <= index && index <= c.model("sequence").as_sequence().count();
}

}  // namespace

ClassSpec linked_list_spec()
{
    ClassSpec s;
    s.name = "LinkedList";
    s.signature = signature({{"sequence", Sort::sequence}, {"index", Sort::integer}});

    s.features.push_back(Feature{
        .name = "make_empty",
        .kind = FeatureKind::constructor,
        .result = returns_object("LinkedList"),
        .contract = {.post = {model_clause("make_empty/sequence",
                                           [](const CallContext& c) { return seq_of(c.now("sequence")).is_empty(); }),
                              model_clause("make_empty/index",
                                           [](const CallContext& c) { return c.now("index").as_integer() == 0; })},
                     .mentioned = {"sequence", "index"}},
        .construct = [](std::span<const Argument>, const RunContext& run) -> ObjectPtr {
            return std::make_shared<LinkedList>(run.faults);
        },
    });

    s.features.push_back(Feature{
        .name = "count",
        .kind = FeatureKind::value_query,
        .result = returns(Sort::integer),
        .contract = {.post = {model_clause("count/result", [](const CallContext& c) {
                         return c.result().as_integer() == seq_of(c.old("sequence")).count();
                     })}},
    });

    s.features.push_back(Feature{
        .name = "is_empty",
        .kind = FeatureKind::value_query,
        .result = returns(Sort::boolean),
        .contract = {.post = {model_clause("is_empty/result", [](const CallContext& c) {
                         return c.result().as_boolean() == seq_of(c.old("sequence")).is_empty();
                     })}},
    });

    s.features.push_back(Feature{
        .name = "item",
        .kind = FeatureKind::reference_query,
        .result = returns(Sort::reference),
        .contract = {.pre = [](const PreContext& c) {
                         auto i = c.model("index").as_integer();
                         return 1 <= i && i <= c.model("sequence").as_sequence().count();
                     },
                     .post = {model_clause("item/result", [](const CallContext& c) {
                         return c.result() == seq_of(c.old("sequence")).item(c.old("index").as_integer());
                     })}},
    });

    s.features.push_back(Feature{
        .name = "has",
        .kind = FeatureKind::value_query,
        .args = {element("v")},
        .result = returns(Sort::boolean),
        .contract = {.post = {model_clause("has/result", [](const CallContext& c) {
                         return c.result().as_boolean() == seq_of(c.old("sequence")).has(c.arg(0));
                     })}},
    });

    s.features.push_back(Feature{
        .name = "duplicate",
        .kind = FeatureKind::value_query,
        .args = {integer("n")},
        .result = returns_object("LinkedList"),
        .contract = {.pre = [](const PreContext& c) { return c.arg(0).as_integer() >= 0; },
                     .post = {model_clause("duplicate/sequence",
                                           [](const CallContext& c) {
                                               auto index = c.old("index").as_integer();
                                               auto n = c.arg(0).as_integer();
                                               auto upper = model::checked_sub(model::checked_add(index, n), 1);
                                               return seq_of(c.result_model("sequence")) ==
                                                      seq_of(c.old("sequence")).interval(index, upper);
                                           }),
                              model_clause("duplicate/index", [](const CallContext& c) {
                                  return c.result_model("index").as_integer() == 0;
                              })}},
    });

    s.features.push_back(Feature{
        .name = "put_right",
        .kind = FeatureKind::command,
        .args = {element("v")},
        .contract = {.pre = cursor_within,
                     .post = {model_clause("put_right/sequence",
                                           [](const CallContext& c) {
                                               auto old_seq = seq_of(c.old("sequence"));
                                               auto index = c.old("index").as_integer();
                                               return seq_of(c.now("sequence")) ==
                                                      old_seq.front(index).extended(c.arg(0)) + old_seq.tail(index + 1);
                                           }),
                              model_clause("put_right/index",
                                           [](const CallContext& c) { return c.now("index") == c.old("index"); })},
                     .mentioned = {"sequence", "index"}},
    });

    s.features.push_back(Feature{
        .name = "merge_right",
        .kind = FeatureKind::command,
        .args = {object("other", "LinkedList")},
        .contract =
            {.pre = [](const PreContext& c) {
                 return c.object(0).identity() != c.target->identity() && cursor_within(c);
             },
             .post =
                 {model_clause("merge_right/sequence",
                               [](const CallContext& c) {
                                   auto old_seq = seq_of(c.old("sequence"));
                                   auto index = c.old("index").as_integer();
                                   return seq_of(c.now("sequence")) == old_seq.front(index) +
                                                                           seq_of(c.old_arg(0, "sequence")) +
                                                                           old_seq.tail(index + 1);
                               }),
                  model_clause("merge_right/other_sequence",
                               [](const CallContext& c) { return seq_of(c.now_arg(0, "sequence")).is_empty(); }),
                  model_clause("merge_right/other_index",
                               [](const CallContext& c) { return c.now_arg(0, "index").as_integer() == 0; }),
                  classic_clause("merge_right/count",
                                 [](const CallContext& c) {
                                     return as_list(c.target()).count_field() ==
                                            as_list(c.old_target()).count_field() +
                                                as_list(c.old_arg_object(0)).count_field();
                                 }),
                  classic_clause("merge_right/index",
                                 [](const CallContext& c) {
                                     return as_list(c.target()).index_field() == as_list(c.old_target()).index_field();
                                 }),
                  classic_clause("merge_right/other_is_empty",
                                 [](const CallContext& c) { return as_list(c.arg_object(0)).count_field() == 0; })},
             .mentioned = {"sequence", "index"}},
    });

    s.features.push_back(Feature{
        .name = "start",
        .kind = FeatureKind::command,
        .contract = {.post = {model_clause("start/index",
                                           [](const CallContext& c) { return c.now("index").as_integer() == 1; })},
                     .mentioned = {"index"}},
    });

    s.features.push_back(Feature{
        .name = "forth",
        .kind = FeatureKind::command,
        .contract = {.pre = [](const PreContext& c) {
                         return c.model("index").as_integer() <= c.model("sequence").as_sequence().count();
                     },
                     .post = {model_clause("forth/index",
                                           [](const CallContext& c) {
                                               return c.now("index").as_integer() == c.old("index").as_integer() + 1;
                                           })},
                     .mentioned = {"index"}},
    });

    s.features.push_back(Feature{
        .name = "go_before",
        .kind = FeatureKind::command,
        .contract = {.post = {model_clause("go_before/index",
                                           [](const CallContext& c) { return c.now("index").as_integer() == 0; })},
                     .mentioned = {"index"}},
    });

    s.features.push_back(Feature{
        .name = "wipe_out",
        .kind = FeatureKind::command,
        .contract = {.post = {model_clause("wipe_out/sequence",
                                           [](const CallContext& c) { return seq_of(c.now("sequence")).is_empty(); }),
                              model_clause("wipe_out/index",
                                           [](const CallContext& c) { return c.now("index").as_integer() == 0; })},
                     .mentioned = {"sequence", "index"}},
    });

    s.invariant = {
        classic_invariant("index_bounds",
                          [](const Object& o, const AbstractState&) {
                              const auto& l = as_list(o);
                              return 0 <= l.index_field() && l.index_field() <= l.count_field() + 1;
                          }),
        model_invariant("index_in_sequence",
                        [](const Object&, const AbstractState& st) {
                            auto i = st["index"].as_integer();
                            return 0 <= i && i <= st["sequence"].as_sequence().count() + 1;
                        }),
        model_invariant("count_is_sequence_count",
                        [](const Object& o, const AbstractState& st) {
                            return as_list(o).count_field() == st["sequence"].as_sequence().count();
                        }),
    };

    // Bound for enumeration: sequences times cursor positions.
    s.estimate = [](std::size_t universe, std::size_t max_size, std::int64_t) {
        double total = 0;
        double seqs = 1;
        for (std::size_t n = 0; n <= max_size; ++n) {
            total += seqs * static_cast<double>(n + 2);
            seqs *= static_cast<double>(universe);
        }
        return total;
    };
    return s;
}

}  // namespace mbc::containers
