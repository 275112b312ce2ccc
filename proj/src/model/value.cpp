#include "mbc/model/value.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace mbc::model {

std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) {
        throw OverflowError("integer overflow in " + std::to_string(a) + " + " + std::to_string(b));
    }
    return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b)
{
    std::int64_t r = 0;
    if (__builtin_sub_overflow(a, b, &r)) {
        throw OverflowError("integer overflow in " + std::to_string(a) + " - " + std::to_string(b));
    }
    return r;
}

namespace {

template <class T>
const std::vector<T>& storage(const std::shared_ptr<const std::vector<T>>& p)
{
    static const std::vector<T> empty;
    return p ? *p : empty;
}

template <class T>
std::shared_ptr<const std::vector<T>> share(std::vector<T> v)
{
    if (v.empty()) {
        return nullptr;
    }
    return std::make_shared<const std::vector<T>>(std::move(v));
}

template <class T>
std::strong_ordering lexicographic(const std::vector<T>& a, const std::vector<T>& b)
{
    return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
}

template <class A, class B>
std::strong_ordering compare_pair(const std::pair<A, B>& x, const std::pair<A, B>& y)
{
    if (auto c = x.first <=> y.first; c != 0) {
        return c;
    }
    return x.second <=> y.second;
}

template <class A, class B>
std::strong_ordering lexicographic_pairs(const std::vector<std::pair<A, B>>& a,
                                         const std::vector<std::pair<A, B>>& b)
{
    return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end(),
                                                  compare_pair<A, B>);
}

}  // namespace

// ---------------------------------------------------------------- Sequence

Sequence Sequence::of(std::vector<Value> items)
{
    return Sequence(share(std::move(items)));
}

std::int64_t Sequence::count() const
{
    return static_cast<std::int64_t>(storage(items_).size());
}

bool Sequence::is_empty() const
{
    return storage(items_).empty();
}

const Value& Sequence::item(std::int64_t i) const
{
    if (i < 1 || i > count()) {
        throw DomainError("sequence item " + std::to_string(i) + " outside 1.." + std::to_string(count()));
    }
    return storage(items_)[static_cast<std::size_t>(i - 1)];
}

const Value& Sequence::first() const
{
    return item(1);
}

const Value& Sequence::last() const
{
    return item(count());
}

Sequence Sequence::extended(const Value& x) const
{
    std::vector<Value> v = storage(items_);
    v.push_back(x);
    return of(std::move(v));
}

Sequence Sequence::prepended(const Value& x) const
{
    std::vector<Value> v;
    v.reserve(storage(items_).size() + 1);
    v.push_back(x);
    v.insert(v.end(), storage(items_).begin(), storage(items_).end());
    return of(std::move(v));
}

Sequence Sequence::front(std::int64_t n) const
{
    if (n < 0 || n > count()) {
        throw DomainError("sequence front " + std::to_string(n) + " outside 0.." + std::to_string(count()));
    }
    const auto& s = storage(items_);
    return of(std::vector<Value>(s.begin(), s.begin() + n));
}

Sequence Sequence::tail(std::int64_t n) const
{
    if (n < 1 || n > count() + 1) {
        throw DomainError("sequence tail " + std::to_string(n) + " outside 1.." + std::to_string(count() + 1));
    }
    const auto& s = storage(items_);
    return of(std::vector<Value>(s.begin() + (n - 1), s.end()));
}

Sequence Sequence::concat(const Sequence& other) const
{
    if (other.is_empty()) {
        return *this;
    }
    if (is_empty()) {
        return other;
    }
    std::vector<Value> v = storage(items_);
    v.insert(v.end(), storage(other.items_).begin(), storage(other.items_).end());
    return of(std::move(v));
}

Sequence Sequence::interval(std::int64_t l, std::int64_t u) const
{
    const std::int64_t lo = std::max<std::int64_t>(1, l);
    const std::int64_t hi = std::min<std::int64_t>(count(), u);
    if (hi < lo) {
        return {};
    }
    const auto& s = storage(items_);
    return of(std::vector<Value>(s.begin() + (lo - 1), s.begin() + hi));
}

Set Sequence::domain() const
{
    return IntInterval(1, count()).to_set();
}

Set Sequence::range() const
{
    return Set::of(storage(items_));
}

bool Sequence::has(const Value& v) const
{
    const auto& s = storage(items_);
    return std::find(s.begin(), s.end(), v) != s.end();
}

std::int64_t Sequence::occurrences(const Value& v) const
{
    const auto& s = storage(items_);
    return std::count(s.begin(), s.end(), v);
}

Bag Sequence::to_bag() const
{
    std::vector<Bag::Entry> entries;
    entries.reserve(storage(items_).size());
    for (const auto& x : storage(items_)) {
        entries.emplace_back(x, 1);
    }
    return Bag::of(std::move(entries));
}

std::span<const Value> Sequence::elements() const
{
    return storage(items_);
}

bool operator==(const Sequence& a, const Sequence& b)
{
    return a.items_ == b.items_ || storage(a.items_) == storage(b.items_);
}

std::strong_ordering operator<=>(const Sequence& a, const Sequence& b)
{
    return lexicographic(storage(a.items_), storage(b.items_));
}

// ---------------------------------------------------------------- Set

Set Set::of(std::vector<Value> items)
{
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    return Set(share(std::move(items)));
}

std::int64_t Set::count() const
{
    return static_cast<std::int64_t>(storage(items_).size());
}

bool Set::is_empty() const
{
    return storage(items_).empty();
}

bool Set::has(const Value& v) const
{
    const auto& s = storage(items_);
    return std::binary_search(s.begin(), s.end(), v);
}

Set Set::extended(const Value& v) const
{
    if (has(v)) {
        return *this;
    }
    std::vector<Value> out = storage(items_);
    out.insert(std::upper_bound(out.begin(), out.end(), v), v);
    return Set(share(std::move(out)));
}

Set Set::removed(const Value& v) const
{
    std::vector<Value> out;
    for (const auto& x : storage(items_)) {
        if (x != v) {
            out.push_back(x);
        }
    }
    return Set(share(std::move(out)));
}

Set Set::united(const Set& other) const
{
    std::vector<Value> out;
    const auto& a = storage(items_);
    const auto& b = storage(other.items_);
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return Set(share(std::move(out)));
}

Set Set::intersected(const Set& other) const
{
    std::vector<Value> out;
    const auto& a = storage(items_);
    const auto& b = storage(other.items_);
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return Set(share(std::move(out)));
}

Set Set::minus(const Set& other) const
{
    std::vector<Value> out;
    const auto& a = storage(items_);
    const auto& b = storage(other.items_);
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return Set(share(std::move(out)));
}

bool Set::is_subset_of(const Set& other) const
{
    const auto& a = storage(items_);
    const auto& b = storage(other.items_);
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool Set::for_all(const Predicate& p) const
{
    const auto& s = storage(items_);
    return std::all_of(s.begin(), s.end(), p);
}

bool Set::exists(const Predicate& p) const
{
    const auto& s = storage(items_);
    return std::any_of(s.begin(), s.end(), p);
}

std::span<const Value> Set::elements() const
{
    return storage(items_);
}

bool operator==(const Set& a, const Set& b)
{
    return a.items_ == b.items_ || storage(a.items_) == storage(b.items_);
}

std::strong_ordering operator<=>(const Set& a, const Set& b)
{
    return lexicographic(storage(a.items_), storage(b.items_));
}

// ---------------------------------------------------------------- IntInterval

std::int64_t IntInterval::count() const
{
    if (upper_ < lower_) {
        return 0;
    }
    return checked_add(checked_sub(upper_, lower_), 1);
}

Set IntInterval::to_set() const
{
    std::vector<Value> out;
    out.reserve(static_cast<std::size_t>(count()));
    for (std::int64_t i = lower_; i <= upper_; ++i) {
        out.push_back(Value::integer(i));
        if (i == upper_) {
            break;  // guards i++ overflow at INT64_MAX
        }
    }
    return Set::of(std::move(out));
}

// ---------------------------------------------------------------- Bag

Bag Bag::of(std::vector<Entry> entries)
{
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    std::vector<Entry> merged;
    for (auto& e : entries) {
        if (!merged.empty() && merged.back().first == e.first) {
            merged.back().second = checked_add(merged.back().second, e.second);
        } else {
            merged.push_back(std::move(e));
        }
    }
    std::erase_if(merged, [](const Entry& e) { return e.second <= 0; });
    return Bag(share(std::move(merged)));
}

Bag Bag::extended(const Value& v) const
{
    std::vector<Entry> out = storage(entries_);
    out.emplace_back(v, 1);
    return of(std::move(out));
}

Bag Bag::removed(const Value& v) const
{
    std::vector<Entry> out = storage(entries_);
    out.emplace_back(v, -1);
    return of(std::move(out));
}

std::int64_t Bag::multiplicity(const Value& v) const
{
    const auto& s = storage(entries_);
    auto it = std::lower_bound(s.begin(), s.end(), v,
                               [](const Entry& e, const Value& k) { return e.first < k; });
    return (it != s.end() && it->first == v) ? it->second : 0;
}

Set Bag::domain() const
{
    std::vector<Value> keys;
    for (const auto& e : storage(entries_)) {
        keys.push_back(e.first);
    }
    return Set::of(std::move(keys));
}

bool Bag::is_empty() const
{
    return storage(entries_).empty();
}

std::int64_t Bag::count() const
{
    std::int64_t n = 0;
    for (const auto& e : storage(entries_)) {
        n = checked_add(n, e.second);
    }
    return n;
}

std::span<const Bag::Entry> Bag::entries() const
{
    return storage(entries_);
}

bool operator==(const Bag& a, const Bag& b)
{
    return a.entries_ == b.entries_ || storage(a.entries_) == storage(b.entries_);
}

std::strong_ordering operator<=>(const Bag& a, const Bag& b)
{
    return lexicographic_pairs(storage(a.entries_), storage(b.entries_));
}

// ---------------------------------------------------------------- Map

Map Map::of(std::vector<Entry> entries)
{
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i - 1].first == entries[i].first) {
            throw DomainError("map built with duplicate key " + to_string(entries[i].first));
        }
    }
    return Map(share(std::move(entries)));
}

std::int64_t Map::count() const
{
    return static_cast<std::int64_t>(storage(entries_).size());
}

bool Map::is_empty() const
{
    return storage(entries_).empty();
}

namespace {

template <class Entries>
auto find_key(const Entries& s, const Value& k)
{
    auto it = std::lower_bound(s.begin(), s.end(), k,
                               [](const auto& e, const Value& key) { return e.first < key; });
    return (it != s.end() && it->first == k) ? it : s.end();
}

}  // namespace

bool Map::has_key(const Value& k) const
{
    const auto& s = storage(entries_);
    return find_key(s, k) != s.end();
}

const Value& Map::item(const Value& k) const
{
    const auto& s = storage(entries_);
    auto it = find_key(s, k);
    if (it == s.end()) {
        throw DomainError("map item: key " + to_string(k) + " not in domain");
    }
    return it->second;
}

Set Map::domain() const
{
    std::vector<Value> keys;
    for (const auto& e : storage(entries_)) {
        keys.push_back(e.first);
    }
    return Set::of(std::move(keys));
}

Set Map::range() const
{
    std::vector<Value> vals;
    for (const auto& e : storage(entries_)) {
        vals.push_back(e.second);
    }
    return Set::of(std::move(vals));
}

Map Map::replaced_at(const Value& k, const Value& v) const
{
    if (!has_key(k)) {
        throw DomainError("map replaced_at: key " + to_string(k) + " not in domain");
    }
    return updated(k, v);
}

Map Map::updated(const Value& k, const Value& v) const
{
    std::vector<Entry> out = storage(entries_);
    auto it = std::lower_bound(out.begin(), out.end(), k,
                               [](const Entry& e, const Value& key) { return e.first < key; });
    if (it != out.end() && it->first == k) {
        it->second = v;
    } else {
        out.insert(it, Entry{k, v});
    }
    return Map(share(std::move(out)));
}

Map Map::removed(const Value& k) const
{
    std::vector<Entry> out = storage(entries_);
    std::erase_if(out, [&](const Entry& e) { return e.first == k; });
    return Map(share(std::move(out)));
}

Map Map::restricted(const Set& keys) const
{
    std::vector<Entry> out;
    for (const auto& e : storage(entries_)) {
        if (keys.has(e.first)) {
            out.push_back(e);
        }
    }
    return Map(share(std::move(out)));
}

bool Map::is_constant(const Value& v) const
{
    const auto& s = storage(entries_);
    return std::all_of(s.begin(), s.end(), [&](const Entry& e) { return e.second == v; });
}

std::span<const Map::Entry> Map::entries() const
{
    return storage(entries_);
}

bool operator==(const Map& a, const Map& b)
{
    return a.entries_ == b.entries_ || storage(a.entries_) == storage(b.entries_);
}

std::strong_ordering operator<=>(const Map& a, const Map& b)
{
    return lexicographic_pairs(storage(a.entries_), storage(b.entries_));
}

// ---------------------------------------------------------------- Relation

Relation Relation::of(std::vector<Pair> pairs)
{
    std::sort(pairs.begin(), pairs.end(),
              [](const Pair& a, const Pair& b) { return compare_pair(a, b) < 0; });
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return Relation(share(std::move(pairs)));
}

std::int64_t Relation::count() const
{
    return static_cast<std::int64_t>(storage(pairs_).size());
}

bool Relation::is_empty() const
{
    return storage(pairs_).empty();
}

bool Relation::has(const Value& x, const Value& y) const
{
    const auto& s = storage(pairs_);
    const Pair key{x, y};
    return std::binary_search(s.begin(), s.end(), key,
                              [](const Pair& a, const Pair& b) { return compare_pair(a, b) < 0; });
}

Set Relation::image_of(const Value& x) const
{
    std::vector<Value> out;
    for (const auto& p : storage(pairs_)) {
        if (p.first == x) {
            out.push_back(p.second);
        }
    }
    return Set::of(std::move(out));
}

Set Relation::domain() const
{
    std::vector<Value> out;
    for (const auto& p : storage(pairs_)) {
        out.push_back(p.first);
    }
    return Set::of(std::move(out));
}

Set Relation::range() const
{
    std::vector<Value> out;
    for (const auto& p : storage(pairs_)) {
        out.push_back(p.second);
    }
    return Set::of(std::move(out));
}

Relation Relation::extended(const Value& x, const Value& y) const
{
    std::vector<Pair> out = storage(pairs_);
    out.emplace_back(x, y);
    return of(std::move(out));
}

std::span<const Relation::Pair> Relation::pairs() const
{
    return storage(pairs_);
}

bool operator==(const Relation& a, const Relation& b)
{
    return a.pairs_ == b.pairs_ || storage(a.pairs_) == storage(b.pairs_);
}

std::strong_ordering operator<=>(const Relation& a, const Relation& b)
{
    return lexicographic_pairs(storage(a.pairs_), storage(b.pairs_));
}

// ---------------------------------------------------------------- Value

Value Value::boolean(bool b)
{
    return Value(Storage(std::in_place_index<0>, b));
}

Value Value::integer(std::int64_t i)
{
    return Value(Storage(std::in_place_index<1>, Integer{i}));
}

namespace {

[[noreturn]] void wrong_sort(const Value& v, std::string_view wanted)
{
    throw SortError("expected " + std::string(wanted) + ", got " + std::string(to_string(v.tag())) +
                    " " + to_string(v));
}

}  // namespace

bool Value::as_boolean() const
{
    if (auto p = std::get_if<bool>(&data_)) {
        return *p;
    }
    wrong_sort(*this, "boolean");
}

std::int64_t Value::as_integer() const
{
    if (auto p = std::get_if<Integer>(&data_)) {
        return p->value;
    }
    wrong_sort(*this, "integer");
}

Ref Value::as_reference() const
{
    if (auto p = std::get_if<Ref>(&data_)) {
        return *p;
    }
    wrong_sort(*this, "reference");
}

const Sequence& Value::as_sequence() const
{
    if (auto p = std::get_if<Sequence>(&data_)) {
        return *p;
    }
    wrong_sort(*this, "sequence");
}

const Set& Value::as_set() const
{
    if (auto p = std::get_if<Set>(&data_)) {
        return *p;
    }
    wrong_sort(*this, "set");
}

const Bag& Value::as_bag() const
{
    if (auto p = std::get_if<Bag>(&data_)) {
        return *p;
    }
    wrong_sort(*this, "bag");
}

const Map& Value::as_map() const
{
    if (auto p = std::get_if<Map>(&data_)) {
        return *p;
    }
    wrong_sort(*this, "map");
}

const Relation& Value::as_relation() const
{
    if (auto p = std::get_if<Relation>(&data_)) {
        return *p;
    }
    wrong_sort(*this, "relation");
}

bool operator==(const Value& a, const Value& b)
{
    return (a <=> b) == 0;
}

std::strong_ordering operator<=>(const Value& a, const Value& b)
{
    if (auto c = a.data_.index() <=> b.data_.index(); c != 0) {
        return c;
    }
    return std::visit(
        [&](const auto& x) -> std::strong_ordering {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.data_);
            if constexpr (std::is_same_v<T, Value::Integer>) {
                return x.value <=> y.value;
            } else {
                return x <=> y;
            }
        },
        a.data_);
}

std::string_view to_string(Value::Tag tag)
{
    switch (tag) {
    case Value::Tag::boolean: return "boolean";
    case Value::Tag::integer: return "integer";
    case Value::Tag::reference: return "reference";
    case Value::Tag::sequence: return "sequence";
    case Value::Tag::set: return "set";
    case Value::Tag::bag: return "bag";
    case Value::Tag::map: return "map";
    case Value::Tag::relation: return "relation";
    }
    return "?";
}

std::string to_string(Ref r)
{
    if (r.id < 26) {
        return std::string(1, static_cast<char>('a' + r.id));
    }
    return "r" + std::to_string(r.id);
}

namespace {

void write(std::ostream& os, const Value& v);

template <class Range, class F>
void write_list(std::ostream& os, const Range& items, F&& each)
{
    bool first = true;
    for (const auto& x : items) {
        if (!first) {
            os << ',';
        }
        first = false;
        each(x);
    }
}

void write(std::ostream& os, const Value& v)
{
    switch (v.tag()) {
    case Value::Tag::boolean:
        os << (v.as_boolean() ? "true" : "false");
        break;
    case Value::Tag::integer:
        os << v.as_integer();
        break;
    case Value::Tag::reference:
        os << to_string(v.as_reference());
        break;
    case Value::Tag::sequence:
        os << "⟨";
        write_list(os, v.as_sequence().elements(), [&](const Value& x) { write(os, x); });
        os << "⟩";
        break;
    case Value::Tag::set:
        os << '{';
        write_list(os, v.as_set().elements(), [&](const Value& x) { write(os, x); });
        os << '}';
        break;
    case Value::Tag::bag:
        os << '{';
        write_list(os, v.as_bag().entries(), [&](const Bag::Entry& e) {
            write(os, e.first);
            os << ':' << e.second;
        });
        os << '}';
        break;
    case Value::Tag::map:
        os << '{';
        write_list(os, v.as_map().entries(), [&](const Map::Entry& e) {
            write(os, e.first);
            os << "→";
            write(os, e.second);
        });
        os << '}';
        break;
    case Value::Tag::relation:
        os << '{';
        write_list(os, v.as_relation().pairs(), [&](const Relation::Pair& p) {
            os << '(';
            write(os, p.first);
            os << ',';
            write(os, p.second);
            os << ')';
        });
        os << '}';
        break;
    }
}

}  // namespace

std::string to_string(const Value& v)
{
    std::ostringstream os;
    write(os, v);
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Value& v)
{
    write(os, v);
    return os;
}

Value seq(std::initializer_list<Value> items)
{
    return Sequence::of(std::vector<Value>(items));
}

Value set(std::initializer_list<Value> items)
{
    return Set::of(std::vector<Value>(items));
}

Value boolean_path(std::initializer_list<bool> bits)
{
    std::vector<Value> v;
    for (bool b : bits) {
        v.push_back(Value::boolean(b));
    }
    return Sequence::of(std::move(v));
}

std::span<const std::string_view> operation_names()
{
    static constexpr std::array<std::string_view, 52> names = {
        "seq_count", "seq_is_empty", "seq_item", "seq_first", "seq_last",
        "seq_extended", "seq_prepended", "seq_front", "seq_tail", "seq_concat",
        "seq_interval", "seq_domain", "seq_range", "seq_has", "seq_occurrences",
        "seq_to_bag",
        "set_count", "set_is_empty", "set_has", "set_extended", "set_removed",
        "set_union", "set_intersection", "set_difference", "set_is_subset",
        "set_for_all", "set_exists",
        "int_interval",
        "bag_extended", "bag_removed", "bag_multiplicity", "bag_domain",
        "bag_is_empty", "bag_count",
        "map_count", "map_is_empty", "map_has_key", "map_item", "map_domain",
        "map_range", "map_replaced_at", "map_updated", "map_removed",
        "map_restricted", "map_is_constant",
        "rel_count", "rel_is_empty", "rel_has", "rel_image_of", "rel_domain",
        "rel_range", "rel_extended",
    };
    return names;
}

}  // namespace mbc::model
