#include "mbc/model/json.hpp"

namespace mbc::model {

using nlohmann::ordered_json;

ordered_json to_json(const Value& v)
{
    switch (v.tag()) {
    case Value::Tag::boolean:
        return v.as_boolean();
    case Value::Tag::integer:
        return v.as_integer();
    case Value::Tag::reference:
        return ordered_json{{"ref", v.as_reference().id}};
    case Value::Tag::sequence: {
        auto items = ordered_json::array();
        for (const auto& x : v.as_sequence().elements()) {
            items.push_back(to_json(x));
        }
        return ordered_json{{"seq", items}};
    }
    case Value::Tag::set: {
        auto items = ordered_json::array();
        for (const auto& x : v.as_set().elements()) {
            items.push_back(to_json(x));
        }
        return ordered_json{{"set", items}};
    }
    case Value::Tag::bag: {
        auto items = ordered_json::array();
        for (const auto& [x, n] : v.as_bag().entries()) {
            items.push_back(ordered_json::array({to_json(x), n}));
        }
        return ordered_json{{"bag", items}};
    }
    case Value::Tag::map: {
        auto items = ordered_json::array();
        for (const auto& [k, x] : v.as_map().entries()) {
            items.push_back(ordered_json::array({to_json(k), to_json(x)}));
        }
        return ordered_json{{"map", items}};
    }
    case Value::Tag::relation: {
        auto items = ordered_json::array();
        for (const auto& [x, y] : v.as_relation().pairs()) {
            items.push_back(ordered_json::array({to_json(x), to_json(y)}));
        }
        return ordered_json{{"rel", items}};
    }
    }
    throw ModelError("unreachable value tag");
}

namespace {

[[noreturn]] void malformed(const ordered_json& j)
{
    throw ModelError("malformed model value JSON: " + j.dump());
}

std::pair<Value, Value> pair_from(const ordered_json& j)
{
    if (!j.is_array() || j.size() != 2) {
        malformed(j);
    }
    return {value_from_json(j[0]), value_from_json(j[1])};
}

}  // namespace

Value value_from_json(const ordered_json& j)
{
    if (j.is_boolean()) {
        return Value::boolean(j.get<bool>());
    }
    if (j.is_number_integer()) {
        return Value::integer(j.get<std::int64_t>());
    }
    if (!j.is_object() || j.size() != 1) {
        malformed(j);
    }
    auto it = j.begin();
    const std::string& key = it.key();
    const ordered_json& body = it.value();
    if (key == "ref") {
        if (!body.is_number_unsigned() && !body.is_number_integer()) {
            malformed(j);
        }
        return Value::reference(body.get<std::uint32_t>());
    }
    if (!body.is_array()) {
        malformed(j);
    }
    if (key == "seq" || key == "set") {
        std::vector<Value> items;
        for (const auto& x : body) {
            items.push_back(value_from_json(x));
        }
        return key == "seq" ? Value(Sequence::of(std::move(items))) : Value(Set::of(std::move(items)));
    }
    if (key == "bag") {
        std::vector<Bag::Entry> entries;
        for (const auto& e : body) {
            if (!e.is_array() || e.size() != 2 || !e[1].is_number_integer()) {
                malformed(j);
            }
            entries.emplace_back(value_from_json(e[0]), e[1].get<std::int64_t>());
        }
        return Bag::of(std::move(entries));
    }
    if (key == "map") {
        std::vector<Map::Entry> entries;
        for (const auto& e : body) {
            entries.push_back(pair_from(e));
        }
        return Map::of(std::move(entries));
    }
    if (key == "rel") {
        std::vector<Relation::Pair> pairs;
        for (const auto& e : body) {
            pairs.push_back(pair_from(e));
        }
        return Relation::of(std::move(pairs));
    }
    malformed(j);
}

}  // namespace mbc::model
