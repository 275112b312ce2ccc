#include <algorithm>
#include <map>
#include <set>

#include "mbc/model/json.hpp"
#include "support.hpp"

using namespace mbc;
using namespace mbc::model;
using namespace mbc::test;

namespace {

// Oracle representations: plain std containers over token ids.
using Vec = std::vector<std::uint32_t>;

Vec ids(const Sequence& s)
{
    Vec out;
    for (const auto& v : s.elements()) {
        out.push_back(v.as_reference().id);
    }
    return out;
}

Value seq_from(const Vec& v)
{
    std::vector<Value> items;
    for (auto id : v) {
        items.push_back(tok(id));
    }
    return Sequence::of(std::move(items));
}

std::vector<Set> all_sets(const std::vector<Value>& universe)
{
    std::vector<Set> out;
    for (std::size_t mask = 0; mask < (1u << universe.size()); ++mask) {
        std::vector<Value> items;
        for (std::size_t i = 0; i < universe.size(); ++i) {
            if ((mask & (1u << i)) != 0) {
                items.push_back(universe[i]);
            }
        }
        out.push_back(Set::of(items));
    }
    return out;
}

std::vector<Bag> all_bags(std::size_t universe, std::int64_t max_total)
{
    // multiplicities (m0, m1) with m0 + m1 <= max_total over a 2-token universe
    REQUIRE(universe == 2);
    std::vector<Bag> out;
    for (std::int64_t m0 = 0; m0 <= max_total; ++m0) {
        for (std::int64_t m1 = 0; m0 + m1 <= max_total; ++m1) {
            out.push_back(Bag::of({{a, m0}, {b, m1}}));
        }
    }
    return out;
}

std::vector<Map> all_maps(const std::vector<Value>& keys, const std::vector<Value>& values)
{
    std::vector<Map> out{Map()};
    for (const auto& k : keys) {
        std::vector<Map> next;
        for (const auto& m : out) {
            next.push_back(m);
            for (const auto& v : values) {
                next.push_back(m.updated(k, v));
            }
        }
        out = std::move(next);
    }
    return out;
}

bool even(const Value& v)
{
    return v.as_integer() % 2 == 0;
}

}  // namespace

TEST_CASE("seq_extended examples")
{
    CHECK(seq({}).as_sequence().extended(num(5)) == seq({num(5)}).as_sequence());
    CHECK(seq({num(1), num(2)}).as_sequence().extended(num(3)) == seq({num(1), num(2), num(3)}).as_sequence());
    CHECK(seq({num(7), num(7)}).as_sequence().extended(num(9)).count() == 3);
}

TEST_CASE("seq_front and seq_tail examples")
{
    auto s = seq({a, b, c}).as_sequence();
    CHECK(text(s.front(0)) == "⟨⟩");
    CHECK(text(s.front(2)) == "⟨a,b⟩");
    CHECK(text(seq({a}).as_sequence().front(1)) == "⟨a⟩");
    CHECK(text(s.tail(2)) == "⟨b,c⟩");
    CHECK(text(s.tail(4)) == "⟨⟩");
    CHECK(text(s.tail(1)) == "⟨a,b,c⟩");
    CHECK_THROWS_AS(s.front(4), DomainError);
    CHECK_THROWS_AS(s.front(-1), DomainError);
    CHECK_THROWS_AS(s.tail(0), DomainError);
    CHECK_THROWS_AS(s.tail(5), DomainError);
}

TEST_CASE("seq_concat examples")
{
    auto e = Sequence();
    auto x = seq({d}).as_sequence();
    CHECK(e + x == x);
    CHECK(text(seq({a}).as_sequence() + seq({b, c}).as_sequence()) == "⟨a,b,c⟩");
    auto sa = seq({a}).as_sequence();
    auto sb = seq({b}).as_sequence();
    auto sc = seq({c}).as_sequence();
    CHECK((sa + sb) + sc == sa + (sb + sc));
}

TEST_CASE("seq_interval clips to valid positions")
{
    CHECK(text(seq({a, b, c, d}).as_sequence().interval(2, 3)) == "⟨b,c⟩");
    CHECK(text(seq({a, b, c}).as_sequence().interval(2, 10)) == "⟨b,c⟩");
    CHECK(text(seq({a, b, c}).as_sequence().interval(3, 1)) == "⟨⟩");
    CHECK(text(seq({a, b, c}).as_sequence().interval(-5, 1)) == "⟨a⟩");
}

TEST_CASE("seq_item is 1-based")
{
    auto s = seq({a, b}).as_sequence();
    CHECK(s.item(1) == a);
    CHECK(s.item(2) == b);
    CHECK_THROWS_AS(seq({a}).as_sequence().item(0), DomainError);
    CHECK_THROWS_AS(Sequence().first(), DomainError);
    CHECK_THROWS_AS(Sequence().last(), DomainError);
}

TEST_CASE("sequence queries")
{
    auto s = seq({a, b, a}).as_sequence();
    CHECK(text(seq({a, b}).as_sequence().domain()) == "{1,2}");
    CHECK(s.occurrences(a) == 2);
    CHECK(text(s.to_bag()) == "{a:2,b:1}");
    CHECK(text(s.range()) == "{a,b}");
    CHECK(s.has(b));
    CHECK_FALSE(s.has(c));
    CHECK(Sequence().is_empty());
    CHECK(s.count() == 3);
}

TEST_CASE("set operations")
{
    auto s12 = set({num(1), num(2)}).as_set();
    auto s23 = set({num(2), num(3)}).as_set();
    CHECK(text(s12 * s23) == "{2}");
    CHECK(text(s12 + s23) == "{1,2,3}");
    CHECK(text(s12 - s23) == "{1}");
    CHECK(Set().for_all(even));
    CHECK(set({num(2), num(4)}).as_set().for_all(even));
    CHECK_FALSE(s12.for_all(even));
    CHECK_FALSE(Set().exists(even));
    CHECK(s12.exists(even));
    CHECK(text(set({b, a, b})) == "{a,b}");
    CHECK(s12.count() == 2);
    CHECK(Set().is_empty());
}

TEST_CASE("map operations")
{
    auto k1 = num(1);
    auto k2 = num(2);
    auto m = Map::of({{k1, a}});
    CHECK(text(m.replaced_at(k1, b)) == "{1→b}");
    CHECK(text(Map::of({{k1, a}, {k2, b}}).replaced_at(k2, c)) == "{1→a,2→c}");
    CHECK_THROWS_AS(Map().replaced_at(k1, a), DomainError);

    CHECK(text(Map().updated(k1, a)) == "{1→a}");
    CHECK(text(m.updated(k1, b)) == "{1→b}");
    CHECK(text(m.updated(k2, b)) == "{1→a,2→b}");

    auto abc = Map::of({{num(1), a}, {num(2), b}, {num(3), c}});
    CHECK(text(abc.restricted(set({num(1), num(3)}).as_set())) == "{1→a,3→c}");
    CHECK(text(abc.restricted(Set())) == "{}");
    CHECK(abc.restricted(abc.domain()) == abc);

    CHECK(Map().is_constant(a));
    CHECK(Map::of({{num(1), a}, {num(2), a}}).is_constant(a));
    CHECK_FALSE(Map::of({{num(1), a}, {num(2), b}}).is_constant(a));

    CHECK(text(m.domain()) == "{1}");
    CHECK(Map().count() == 0);
    CHECK(m.item(k1) == a);
    CHECK_THROWS_AS(m.item(k2), DomainError);
    CHECK_THROWS_AS(Map::of({{k1, a}, {k1, b}}), DomainError);
    CHECK(text(abc.range()) == "{a,b,c}");
    CHECK(text(abc.removed(num(2))) == "{1→a,3→c}");
}

TEST_CASE("bag operations")
{
    CHECK(text(Bag::of({{a, 1}}).extended(a)) == "{a:2}");
    CHECK(text(Bag().extended(a)) == "{a:1}");
    CHECK(Bag::of({{a, 2}}).multiplicity(b) == 0);
    CHECK(text(Bag::of({{a, 2}, {b, 1}}).domain()) == "{a,b}");
    CHECK(Bag().is_empty());
    CHECK(text(Bag::of({{a, 1}}).removed(a)) == "{}");
    CHECK(text(Bag::of({{a, 0}, {b, -1}})) == "{}");
    CHECK(Bag::of({{a, 2}, {b, 1}}).count() == 3);
}

TEST_CASE("relation operations")
{
    auto x = a;
    auto y = b;
    auto z = c;
    auto r = Relation::of({{x, y}, {x, z}});
    CHECK(text(r.image_of(x)) == "{b,c}");
    CHECK(text(Relation().image_of(x)) == "{}");
    CHECK(text(Relation::of({{x, y}}).image_of(y)) == "{}");
    CHECK(r.has(x, y));
    CHECK_FALSE(r.has(y, x));
    CHECK(text(r.domain()) == "{a}");
    CHECK(text(r) == "{(a,b),(a,c)}");
}

TEST_CASE("integer intervals")
{
    CHECK(text(IntInterval(1, 3).to_set()) == "{1,2,3}");
    CHECK(IntInterval(3, 1).count() == 0);
    CHECK(IntInterval(3, 1).to_set().is_empty());
    CHECK(IntInterval(2, 2).to_set() == set({num(2)}).as_set());
}

TEST_CASE("integers report overflow")
{
    auto max = std::numeric_limits<std::int64_t>::max();
    CHECK_THROWS_AS(checked_add(max, 1), OverflowError);
    CHECK_THROWS_AS(checked_sub(std::numeric_limits<std::int64_t>::min(), 1), OverflowError);
    CHECK(checked_add(2, 3) == 5);
}

TEST_CASE("sort errors")
{
    CHECK_THROWS_AS(a.as_integer(), SortError);
    CHECK_THROWS_AS(num(1).as_sequence(), SortError);
}

// ---------------------------------------------------------------------------
// Exhaustive properties: sequences up to length 3 over a 2-token universe.

TEST_CASE("extended matches the Boogie axioms for all small sequences")
{
    for (const auto& s : all_sequences({a, b}, 3)) {
        for (const auto& x : {a, b}) {
            auto e = s.extended(x);
            CHECK(e.count() == s.count() + 1);
            CHECK(e.item(s.count() + 1) == x);
            auto oracle = ids(s);
            oracle.push_back(x.as_reference().id);
            CHECK(Value(e) == seq_from(oracle));
        }
    }
}

TEST_CASE("front and tail recompose every small sequence")
{
    for (const auto& s : all_sequences({a, b}, 3)) {
        for (std::int64_t n = 0; n <= s.count(); ++n) {
            CHECK(s.front(n) + s.tail(n + 1) == s);
            auto v = ids(s);
            CHECK(Value(s.front(n)) == seq_from(Vec(v.begin(), v.begin() + n)));
            CHECK(Value(s.tail(n + 1)) == seq_from(Vec(v.begin() + n, v.end())));
        }
    }
}

TEST_CASE("concat is associative with the empty sequence as identity")
{
    auto all = all_sequences({a, b}, 3);
    for (const auto& s : all) {
        CHECK(Sequence() + s == s);
        CHECK(s + Sequence() == s);
        for (const auto& t : all) {
            auto oracle = ids(s);
            auto vt = ids(t);
            oracle.insert(oracle.end(), vt.begin(), vt.end());
            CHECK(Value(s + t) == seq_from(oracle));
            for (const auto& u : all) {
                CHECK((s + t) + u == s + (t + u));
            }
        }
    }
}

TEST_CASE("interval agrees with a clipping oracle")
{
    for (const auto& s : all_sequences({a, b}, 3)) {
        auto v = ids(s);
        for (std::int64_t l = -1; l <= 5; ++l) {
            for (std::int64_t u = -1; u <= 5; ++u) {
                std::int64_t lo = std::max<std::int64_t>(1, l);
                std::int64_t hi = std::min<std::int64_t>(s.count(), u);
                Vec expected;
                for (std::int64_t i = lo; i <= hi; ++i) {
                    expected.push_back(v[static_cast<std::size_t>(i - 1)]);
                }
                CHECK(Value(s.interval(l, u)) == seq_from(expected));
            }
        }
    }
}

TEST_CASE("to_bag multiplicities equal occurrences")
{
    for (const auto& s : all_sequences({a, b, c}, 3)) {
        auto bag = s.to_bag();
        CHECK(bag.domain() == s.range());
        for (const auto& x : {a, b, c}) {
            auto v = ids(s);
            auto n = std::count(v.begin(), v.end(), x.as_reference().id);
            CHECK(bag.multiplicity(x) == n);
            CHECK(s.occurrences(x) == n);
            CHECK(s.has(x) == (n > 0));
        }
        CHECK(bag.count() == s.count());
    }
}

TEST_CASE("domain is 1..count")
{
    for (const auto& s : all_sequences({a, b}, 3)) {
        CHECK(s.domain() == IntInterval(1, s.count()).to_set());
    }
}

TEST_CASE("set algebra agrees with std::set")
{
    auto sets = all_sets({a, b, c});
    auto as_std = [](const Set& s) {
        std::set<std::uint32_t> out;
        for (const auto& v : s.elements()) {
            out.insert(v.as_reference().id);
        }
        return out;
    };
    auto from_std = [](const std::set<std::uint32_t>& s) {
        std::vector<Value> items;
        for (auto id : s) {
            items.push_back(tok(id));
        }
        return Set::of(items);
    };
    for (const auto& s : sets) {
        for (const auto& t : sets) {
            auto x = as_std(s);
            auto y = as_std(t);
            std::set<std::uint32_t> u;
            std::set<std::uint32_t> i;
            std::set<std::uint32_t> m;
            std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::inserter(u, u.end()));
            std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::inserter(i, i.end()));
            std::set_difference(x.begin(), x.end(), y.begin(), y.end(), std::inserter(m, m.end()));
            CHECK(s + t == from_std(u));
            CHECK(s * t == from_std(i));
            CHECK(s - t == from_std(m));
            CHECK(s.is_subset_of(t) == std::includes(y.begin(), y.end(), x.begin(), x.end()));
        }
        for (const auto& v : {a, b, c}) {
            auto x = as_std(s);
            CHECK(s.has(v) == x.contains(v.as_reference().id));
            x.insert(v.as_reference().id);
            CHECK(s.extended(v) == from_std(x));
            x.erase(v.as_reference().id);
            CHECK(s.removed(v) == from_std(x));
        }
        CHECK(s.count() == static_cast<std::int64_t>(as_std(s).size()));
    }
}

TEST_CASE("bag algebra agrees with a multiplicity table")
{
    for (const auto& bag : all_bags(2, 3)) {
        for (const auto& v : {a, b}) {
            auto e = bag.extended(v);
            auto r = bag.removed(v);
            for (const auto& w : {a, b}) {
                auto m = bag.multiplicity(w);
                CHECK(e.multiplicity(w) == m + (w == v ? 1 : 0));
                CHECK(r.multiplicity(w) == std::max<std::int64_t>(0, m - (w == v ? 1 : 0)));
                CHECK(bag.domain().has(w) == (m > 0));
            }
        }
        CHECK(bag.is_empty() == (bag.count() == 0));
    }
}

TEST_CASE("map algebra agrees with std::map")
{
    auto keys = std::vector<Value>{num(1), num(2), num(3)};
    auto maps = all_maps(keys, {a, b});
    CHECK(maps.size() == 27);
    auto as_std = [](const Map& m) {
        std::map<std::int64_t, std::uint32_t> out;
        for (const auto& [k, v] : m.entries()) {
            out[k.as_integer()] = v.as_reference().id;
        }
        return out;
    };
    for (const auto& m : maps) {
        auto o = as_std(m);
        for (const auto& k : keys) {
            for (const auto& v : {a, b}) {
                auto expected = o;
                expected[k.as_integer()] = v.as_reference().id;
                CHECK(as_std(m.updated(k, v)) == expected);
                if (m.has_key(k)) {
                    CHECK(as_std(m.replaced_at(k, v)) == expected);
                }
                else {
                    CHECK_THROWS_AS(m.replaced_at(k, v), DomainError);
                }
            }
            auto erased = o;
            erased.erase(k.as_integer());
            CHECK(as_std(m.removed(k)) == erased);
        }
        for (const auto& keep : all_sets(keys)) {
            // Restricting to K and to domain - K reconstructs the map.
            auto left = m.restricted(keep);
            auto right = m.restricted(m.domain() - keep);
            auto merged = left;
            for (const auto& [k, v] : right.entries()) {
                merged = merged.updated(k, v);
            }
            CHECK(merged == m);
            CHECK(left.domain() == m.domain() * keep);
        }
    }
}

TEST_CASE("value semantics: operations never change their inputs")
{
    for (const auto& s : all_sequences({a, b}, 3)) {
        auto before = text(s);
        auto once = s.extended(a);
        auto twice = s.extended(a);
        CHECK(once == twice);
        (void)s.prepended(b);
        (void)s.concat(s);
        if (!s.is_empty()) {
            (void)s.front(s.count() - 1);
        }
        CHECK(text(s) == before);
    }
    auto m = Map::of({{num(1), a}});
    (void)m.updated(num(2), b);
    (void)m.removed(num(1));
    CHECK(text(m) == "{1→a}");
}

TEST_CASE("canonical order is total and consistent with equality")
{
    std::vector<Value> values;
    for (const auto& s : all_sequences({a, b}, 2)) {
        values.emplace_back(s);
    }
    for (const auto& s : all_sets({a, b})) {
        values.emplace_back(s);
    }
    for (const auto& bag : all_bags(2, 2)) {
        values.emplace_back(bag);
    }
    values.push_back(num(-1));
    values.push_back(num(3));
    values.push_back(Value::boolean(true));
    values.push_back(a);
    values.emplace_back(Map::of({{num(1), a}}));
    values.emplace_back(Relation::of({{a, b}}));
    for (const auto& x : values) {
        for (const auto& y : values) {
            auto xy = x <=> y;
            auto yx = y <=> x;
            CHECK((xy == 0) == (yx == 0));
            CHECK((xy < 0) == (yx > 0));
            CHECK((x == y) == (text(x) == text(y) && x.tag() == y.tag()));
            for (const auto& z : values) {
                if (x < y && y < z) {
                    CHECK(x < z);
                }
            }
        }
    }
}

TEST_CASE("serialization is deterministic and round-trips")
{
    auto s1 = Set::of({c, a, b});
    auto s2 = Set::of({b, c, a});
    CHECK(text(s1) == text(s2));
    CHECK(to_json(s1).dump() == to_json(s2).dump());
    std::vector<Value> samples{Value(Bag::of({{b, 1}, {a, 2}})),
                               Value(Map::of({{num(2), b}, {num(1), a}})),
                               Value(Relation::of({{b, a}, {a, b}})),
                               seq({a, num(3), Value::boolean(false)}),
                               boolean_path({true, false}),
                               set({seq({a}), seq({})}),
                               num(-7)};
    for (const auto& v : samples) {
        CHECK(value_from_json(to_json(v)) == v);
        CHECK(to_json(v).dump() == to_json(value_from_json(to_json(v))).dump());
    }
    CHECK_THROWS_AS(value_from_json(nlohmann::ordered_json::parse(R"({"nope": 1})")), ModelError);
    CHECK_THROWS_AS(value_from_json(nlohmann::ordered_json::parse(R"({"map": [[1, 2], [1, 3]]})")), ModelError);
}

TEST_CASE("text forms")
{
    CHECK(text(seq({a, b})) == "⟨a,b⟩");
    CHECK(text(set({a, b})) == "{a,b}");
    CHECK(text(Bag::of({{a, 2}})) == "{a:2}");
    CHECK(text(Map::of({{a, b}})) == "{a→b}");
    CHECK(text(Relation::of({{a, b}})) == "{(a,b)}");
    CHECK(text(boolean_path({true})) == "⟨true⟩");
}

TEST_CASE("every listed operation name is unique")
{
    auto names = operation_names();
    std::set<std::string_view> unique(names.begin(), names.end());
    CHECK(unique.size() == names.size());
    CHECK(unique.contains("seq_extended"));
    CHECK(unique.contains("rel_image_of"));
}
