// The contracted container library. Implementations are plain C++ classes;
// their model-based contracts live in the ClassSpec built for each type.

#pragma once

#include <deque>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "mbc/contracts/spec.hpp"

namespace mbc::containers {

using contracts::Argument;
using contracts::ClassSpec;
using contracts::FaultSwitch;
using contracts::Object;
using contracts::ObjectPtr;
using contracts::Result;
using model::Ref;
using model::Value;

/// Seeded bug: in the `before` branch merge_right forgets to link the end of
/// the merged chain to the old first cell; `count` is still updated.
inline constexpr std::string_view merge_right_missing_link = "merge_right_missing_link";

/// Every fault switch the library knows about.
std::vector<std::string> fault_names();

/// Singly linked list with a cursor. Model: (sequence, index).
class LinkedList final : public Object {
public:
    explicit LinkedList(FaultSwitch faults = {});
    LinkedList(const LinkedList& other);
    ~LinkedList() override;

    std::string_view type_name() const override { return "LinkedList"; }
    Value model(std::string_view query) const override;
    Result call(std::string_view feature, std::span<const Argument> args) override;
    ObjectPtr clone() const override;
    std::size_t measure() const override;
    std::string concrete_key() const override;

    // Concrete attributes (what the classic contract talks about).
    std::int64_t count_field() const { return count_; }
    std::int64_t index_field() const { return index_; }

    void put_right(Ref v);
    void merge_right(LinkedList& other);
    void wipe_out();

private:
    struct Cell {
        Ref item;
        std::unique_ptr<Cell> right;
    };

    Cell* cell_at(std::int64_t i) const;
    model::Sequence chain() const;

    std::unique_ptr<Cell> first_;
    std::int64_t count_ = 0;
    std::int64_t index_ = 0;
    FaultSwitch faults_;
};

/// Array with fixed bounds. Model: (map, capacity).
class ArrayT final : public Object {
public:
    ArrayT(std::int64_t lower, std::int64_t upper, Ref v);

    std::string_view type_name() const override { return "ArrayT"; }
    Value model(std::string_view query) const override;
    Result call(std::string_view feature, std::span<const Argument> args) override;
    ObjectPtr clone() const override;
    std::size_t measure() const override { return items_.size(); }
    std::string concrete_key() const override;

private:
    std::int64_t lower_;
    std::vector<Ref> items_;
    std::int64_t capacity_;
};

/// Concrete heir of the deferred TableT. Model: (map).
class HashTable final : public Object {
public:
    std::string_view type_name() const override { return "HashTable"; }
    Value model(std::string_view query) const override;
    Result call(std::string_view feature, std::span<const Argument> args) override;
    ObjectPtr clone() const override;
    std::size_t measure() const override { return items_.size(); }
    std::string concrete_key() const override;

private:
    std::unordered_map<std::uint32_t, Ref> items_;
};

/// LIFO dispenser; the top is the end of the sequence.
class Stack final : public Object {
public:
    std::string_view type_name() const override { return "Stack"; }
    Value model(std::string_view query) const override;
    Result call(std::string_view feature, std::span<const Argument> args) override;
    ObjectPtr clone() const override;
    std::size_t measure() const override { return items_.size(); }
    std::string concrete_key() const override;

private:
    std::vector<Ref> items_;
};

/// FIFO dispenser; `item` is the least recently inserted element.
class Queue final : public Object {
public:
    std::string_view type_name() const override { return "Queue"; }
    Value model(std::string_view query) const override;
    Result call(std::string_view feature, std::span<const Argument> args) override;
    ObjectPtr clone() const override;
    std::size_t measure() const override { return items_.size(); }
    std::string concrete_key() const override;

private:
    std::deque<Ref> items_;
};

/// Set parameterized by an equivalence on elements: x ~ y iff
/// x mod k = y mod k over the element universe. Model: (set, relation).
class EqSet final : public Object {
public:
    EqSet(std::int64_t modulus, std::size_t universe);

    std::string_view type_name() const override { return "EqSet"; }
    Value model(std::string_view query) const override;
    Result call(std::string_view feature, std::span<const Argument> args) override;
    ObjectPtr clone() const override;
    std::size_t measure() const override { return items_.size(); }
    std::string concrete_key() const override;

private:
    bool equivalent(Ref x, Ref y) const;

    std::int64_t modulus_;
    std::size_t universe_;
    std::vector<Ref> items_;  // insertion order, hidden
};

/// Binary tree. Model: (map) from boolean paths (false = left) to elements.
class BinaryTree final : public Object {
public:
    BinaryTree() = default;
    BinaryTree(const BinaryTree& other);

    std::string_view type_name() const override { return "BinaryTree"; }
    Value model(std::string_view query) const override;
    Result call(std::string_view feature, std::span<const Argument> args) override;
    ObjectPtr clone() const override;
    std::size_t measure() const override { return count_; }
    std::string concrete_key() const override;

private:
    struct Node {
        Ref item;
        std::unique_ptr<Node> left;
        std::unique_ptr<Node> right;
    };

    Node* find(const model::Sequence& path) const;
    static std::unique_ptr<Node> copy(const Node* n);

    std::unique_ptr<Node> root_;
    std::size_t count_ = 0;
};

ClassSpec linked_list_spec();
ClassSpec array_spec();
ClassSpec table_spec();
ClassSpec hash_table_spec();
ClassSpec collection_spec();
ClassSpec dispenser_spec();
ClassSpec stack_spec();
ClassSpec queue_spec();
ClassSpec eq_set_spec();
ClassSpec binary_tree_spec();

/// All library types, ancestors before heirs.
contracts::Registry standard_registry();

/// Dispenser linking invariant, as a predicate on a sequence-modeled state
/// and the bag its implementation reports.
bool dispenser_link(const contracts::AbstractState& state, const Value& bag);

}  // namespace mbc::containers
