// Immutable finite mathematical values used by model-based contracts.
//
// Every structure here is a value: operations never mutate their receiver and
// always return a fresh result. Structured values share their (immutable)
// storage, so copies are cheap. All values are finite and totally ordered
// (tag order first, then lexicographic content), which makes iteration over
// sets, bags, maps and relations deterministic.

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mbc::model {

/// Base of all errors raised by model operations.
class ModelError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// An operation was applied outside its mathematical domain
/// (for example `item` at a position outside `domain`).
class DomainError : public ModelError {
public:
    using ModelError::ModelError;
};

/// 64-bit integer arithmetic left the representable range.
class OverflowError : public ModelError {
public:
    using ModelError::ModelError;
};

/// A value was accessed as the wrong kind (e.g. a set read as an integer).
class SortError : public ModelError {
public:
    using ModelError::ModelError;
};

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_sub(std::int64_t a, std::int64_t b);

/// Opaque identity token standing for an element of a generic type G.
/// Reference equality on elements is token equality.
struct Ref {
    std::uint32_t id = 0;
    friend auto operator<=>(const Ref&, const Ref&) = default;
};

class Value;
class Set;
class Bag;

using Predicate = std::function<bool(const Value&)>;

class Sequence {
public:
    Sequence() = default;
    static Sequence of(std::vector<Value> items);

    std::int64_t count() const;
    bool is_empty() const;
    /// 1-based; throws DomainError outside 1..count.
    const Value& item(std::int64_t i) const;
    const Value& first() const;
    const Value& last() const;

    Sequence extended(const Value& x) const;
    Sequence prepended(const Value& x) const;
    /// Prefix of length n; requires 0 <= n <= count.
    Sequence front(std::int64_t n) const;
    /// Suffix starting at position n; requires 1 <= n <= count + 1.
    Sequence tail(std::int64_t n) const;
    Sequence concat(const Sequence& other) const;
    /// Positions max(1, l) .. min(count, u); clipped, never fails.
    Sequence interval(std::int64_t l, std::int64_t u) const;

    Set domain() const;
    Set range() const;
    bool has(const Value& v) const;
    std::int64_t occurrences(const Value& v) const;
    Bag to_bag() const;

    std::span<const Value> elements() const;

    friend Sequence operator+(const Sequence& a, const Sequence& b) { return a.concat(b); }
    friend bool operator==(const Sequence& a, const Sequence& b);
    friend std::strong_ordering operator<=>(const Sequence& a, const Sequence& b);

private:
    explicit Sequence(std::shared_ptr<const std::vector<Value>> items) : items_(std::move(items)) {}
    std::shared_ptr<const std::vector<Value>> items_;
};

class Set {
public:
    Set() = default;
    /// Sorts and removes duplicates.
    static Set of(std::vector<Value> items);

    std::int64_t count() const;
    bool is_empty() const;
    bool has(const Value& v) const;

    Set extended(const Value& v) const;
    Set removed(const Value& v) const;
    Set united(const Set& other) const;
    Set intersected(const Set& other) const;
    Set minus(const Set& other) const;
    bool is_subset_of(const Set& other) const;

    bool for_all(const Predicate& p) const;
    bool exists(const Predicate& p) const;

    std::span<const Value> elements() const;

    friend Set operator+(const Set& a, const Set& b) { return a.united(b); }
    friend Set operator*(const Set& a, const Set& b) { return a.intersected(b); }
    friend Set operator-(const Set& a, const Set& b) { return a.minus(b); }
    friend bool operator==(const Set& a, const Set& b);
    friend std::strong_ordering operator<=>(const Set& a, const Set& b);

private:
    explicit Set(std::shared_ptr<const std::vector<Value>> items) : items_(std::move(items)) {}
    std::shared_ptr<const std::vector<Value>> items_;
};

/// The integer set {lower, lower+1, ..., upper}; empty when upper < lower.
class IntInterval {
public:
    IntInterval(std::int64_t lower, std::int64_t upper) : lower_(lower), upper_(upper) {}

    std::int64_t lower() const { return lower_; }
    std::int64_t upper() const { return upper_; }
    std::int64_t count() const;
    bool has(std::int64_t i) const { return lower_ <= i && i <= upper_; }
    Set to_set() const;

private:
    std::int64_t lower_;
    std::int64_t upper_;
};

class Bag {
public:
    using Entry = std::pair<Value, std::int64_t>;

    Bag() = default;
    /// Merges duplicate keys by adding multiplicities; drops non-positive ones.
    static Bag of(std::vector<Entry> entries);

    Bag extended(const Value& v) const;
    Bag removed(const Value& v) const;
    std::int64_t multiplicity(const Value& v) const;
    Set domain() const;
    bool is_empty() const;
    /// Total number of elements, counting multiplicity.
    std::int64_t count() const;

    std::span<const Entry> entries() const;

    friend bool operator==(const Bag& a, const Bag& b);
    friend std::strong_ordering operator<=>(const Bag& a, const Bag& b);

private:
    explicit Bag(std::shared_ptr<const std::vector<Entry>> entries) : entries_(std::move(entries)) {}
    std::shared_ptr<const std::vector<Entry>> entries_;
};

class Map {
public:
    using Entry = std::pair<Value, Value>;

    Map() = default;
    /// Throws DomainError when two entries share a key.
    static Map of(std::vector<Entry> entries);

    std::int64_t count() const;
    bool is_empty() const;
    bool has_key(const Value& k) const;
    /// Throws DomainError when k is not in the domain.
    const Value& item(const Value& k) const;
    Set domain() const;
    Set range() const;

    /// Requires k in domain.
    Map replaced_at(const Value& k, const Value& v) const;
    /// Domain-extending write.
    Map updated(const Value& k, const Value& v) const;
    Map removed(const Value& k) const;
    Map restricted(const Set& keys) const;
    bool is_constant(const Value& v) const;

    std::span<const Entry> entries() const;

    friend bool operator==(const Map& a, const Map& b);
    friend std::strong_ordering operator<=>(const Map& a, const Map& b);

private:
    explicit Map(std::shared_ptr<const std::vector<Entry>> entries) : entries_(std::move(entries)) {}
    std::shared_ptr<const std::vector<Entry>> entries_;
};

class Relation {
public:
    using Pair = std::pair<Value, Value>;

    Relation() = default;
    static Relation of(std::vector<Pair> pairs);

    std::int64_t count() const;
    bool is_empty() const;
    bool has(const Value& x, const Value& y) const;
    Set image_of(const Value& x) const;
    Set domain() const;
    Set range() const;
    Relation extended(const Value& x, const Value& y) const;

    std::span<const Pair> pairs() const;

    friend bool operator==(const Relation& a, const Relation& b);
    friend std::strong_ordering operator<=>(const Relation& a, const Relation& b);

private:
    explicit Relation(std::shared_ptr<const std::vector<Pair>> pairs) : pairs_(std::move(pairs)) {}
    std::shared_ptr<const std::vector<Pair>> pairs_;
};

class Value {
public:
    /// Declaration order is the canonical tag order.
    enum class Tag { boolean, integer, reference, sequence, set, bag, map, relation };

    Value() : data_(false) {}
    Value(Ref r) : data_(r) {}
    Value(Sequence s) : data_(std::move(s)) {}
    Value(Set s) : data_(std::move(s)) {}
    Value(Bag b) : data_(std::move(b)) {}
    Value(Map m) : data_(std::move(m)) {}
    Value(Relation r) : data_(std::move(r)) {}

    static Value boolean(bool b);
    static Value integer(std::int64_t i);
    static Value reference(std::uint32_t id) { return Value(Ref{id}); }

    Tag tag() const { return static_cast<Tag>(data_.index()); }

    bool is_boolean() const { return tag() == Tag::boolean; }
    bool is_integer() const { return tag() == Tag::integer; }
    bool is_reference() const { return tag() == Tag::reference; }

    bool as_boolean() const;
    std::int64_t as_integer() const;
    Ref as_reference() const;
    const Sequence& as_sequence() const;
    const Set& as_set() const;
    const Bag& as_bag() const;
    const Map& as_map() const;
    const Relation& as_relation() const;

    friend bool operator==(const Value& a, const Value& b);
    friend std::strong_ordering operator<=>(const Value& a, const Value& b);

private:
    struct Integer {
        std::int64_t value;
    };
    using Storage = std::variant<bool, Integer, Ref, Sequence, Set, Bag, Map, Relation>;
    explicit Value(Storage s) : data_(std::move(s)) {}

    Storage data_;
};

std::string_view to_string(Value::Tag tag);

/// Canonical text form; see docs/serialization.md for the grammar.
std::string to_string(const Value& v);
std::string to_string(Ref r);
std::ostream& operator<<(std::ostream& os, const Value& v);

/// Convenience builders.
Value seq(std::initializer_list<Value> items);
Value set(std::initializer_list<Value> items);
Value boolean_path(std::initializer_list<bool> bits);

/// Names of every public model operation, used for export coverage checks.
std::span<const std::string_view> operation_names();

}  // namespace mbc::model
