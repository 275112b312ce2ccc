#include <algorithm>
#include <array>
#include <fstream>
#include <set>

#include "mbc/boogie/boogie.hpp"
#include "mbc/model/value.hpp"

namespace mbc::boogie {

namespace {

OperationTheory op(std::string operation, std::string feature, std::string mapped_to, std::string function,
                   std::vector<std::string> axioms)
{
    return {std::move(operation), std::move(feature), std::move(mapped_to), {std::move(function)}, std::move(axioms)};
}

SortTheory sequence_theory()
{
    SortTheory t{"Sequence", "Sequence G", "type Sequence T = [int] T ;", {}};
    auto& ops = t.operations;
    ops.push_back(op("seq_count", "count: INTEGER", "Sequence.count(Current)",
                     "function Sequence.count<T>(Sequence T) returns (int);",
                     {"axiom (forall <T> s: Sequence T :: {Sequence.count(s)}\n"
                      "  0 <= Sequence.count(s));"}));
    ops.push_back(op("seq_is_empty", "is_empty: BOOLEAN", "Sequence.is_empty(Current)",
                     "function Sequence.is_empty<T>(Sequence T) returns (bool);",
                     {"axiom (forall <T> s: Sequence T :: {Sequence.is_empty(s)}\n"
                      "  Sequence.is_empty(s) <==> Sequence.count(s) == 0);"}));
    ops.push_back(op("seq_item", "item (i: INTEGER): G", "Sequence.item(Current, i)",
                     "function Sequence.item<T>(Sequence T, int) returns (T);",
                     {"axiom (forall <T> s: Sequence T, i: int :: {Sequence.item(s, i)}\n"
                      "  Sequence.item(s, i) == s[i]);"}));
    ops.push_back(op("seq_first", "first: G", "Sequence.first(Current)",
                     "function Sequence.first<T>(Sequence T) returns (T);",
                     {"axiom (forall <T> s: Sequence T :: {Sequence.first(s)}\n"
                      "  Sequence.first(s) == s[1]);"}));
    ops.push_back(op("seq_last", "last: G", "Sequence.last(Current)",
                     "function Sequence.last<T>(Sequence T) returns (T);",
                     {"axiom (forall <T> s: Sequence T :: {Sequence.last(s)}\n"
                      "  Sequence.last(s) == s[Sequence.count(s)]);"}));
    ops.push_back(op("seq_extended", "extended (x: G): MML_SEQUENCE [G]", "Sequence.extended(Current, x)",
                     "function Sequence.extended<T>(Sequence T, T) returns (Sequence T);",
                     {"axiom (forall <T> s: Sequence T, x: T :: {Sequence.extended(s, x)}\n"
                      "  Sequence.extended(s, x) == s[Sequence.count(s)+1 := x]);",
                      "axiom (forall <T> s: Sequence T, x: T :: {Sequence.count(Sequence.extended(s, x))}\n"
                      "  Sequence.count(Sequence.extended(s, x)) == Sequence.count(s)+1);"}));
    ops.push_back(op("seq_prepended", "prepended (x: G): MML_SEQUENCE [G]", "Sequence.prepended(Current, x)",
                     "function Sequence.prepended<T>(Sequence T, T) returns (Sequence T);",
                     {"axiom (forall <T> s: Sequence T, x: T :: {Sequence.count(Sequence.prepended(s, x))}\n"
                      "  Sequence.count(Sequence.prepended(s, x)) == Sequence.count(s)+1);",
                      "axiom (forall <T> s: Sequence T, x: T :: {Sequence.prepended(s, x)}\n"
                      "  Sequence.prepended(s, x)[1] == x);",
                      "axiom (forall <T> s: Sequence T, x: T, i: int :: {Sequence.prepended(s, x)[i+1]}\n"
                      "  1 <= i && i <= Sequence.count(s) ==> Sequence.prepended(s, x)[i+1] == s[i]);"}));
    ops.push_back(op("seq_front", "front (n: INTEGER): MML_SEQUENCE [G]", "Sequence.front(Current, n)",
                     "function Sequence.front<T>(Sequence T, int) returns (Sequence T);",
                     {"axiom (forall <T> s: Sequence T, n: int :: {Sequence.count(Sequence.front(s, n))}\n"
                      "  0 <= n && n <= Sequence.count(s) ==> Sequence.count(Sequence.front(s, n)) == n);",
                      "axiom (forall <T> s: Sequence T, n: int, i: int :: {Sequence.front(s, n)[i]}\n"
                      "  1 <= i && i <= n ==> Sequence.front(s, n)[i] == s[i]);"}));
    ops.push_back(op("seq_tail", "tail (n: INTEGER): MML_SEQUENCE [G]", "Sequence.tail(Current, n)",
                     "function Sequence.tail<T>(Sequence T, int) returns (Sequence T);",
                     {"axiom (forall <T> s: Sequence T, n: int :: {Sequence.count(Sequence.tail(s, n))}\n"
                      "  1 <= n && n <= Sequence.count(s)+1 ==> Sequence.count(Sequence.tail(s, n)) == Sequence.count(s)-n+1);",
                      "axiom (forall <T> s: Sequence T, n: int, i: int :: {Sequence.tail(s, n)[i]}\n"
                      "  1 <= n && 1 <= i && i <= Sequence.count(s)-n+1 ==> Sequence.tail(s, n)[i] == s[i+n-1]);"}));
    ops.push_back(op("seq_concat", "concatenation alias \"+\" (other: MML_SEQUENCE [G]): MML_SEQUENCE [G]",
                     "Sequence.concat(Current, other)",
                     "function Sequence.concat<T>(Sequence T, Sequence T) returns (Sequence T);",
                     {"axiom (forall <T> s: Sequence T, t: Sequence T :: {Sequence.count(Sequence.concat(s, t))}\n"
                      "  Sequence.count(Sequence.concat(s, t)) == Sequence.count(s)+Sequence.count(t));",
                      "axiom (forall <T> s: Sequence T, t: Sequence T, i: int :: {Sequence.concat(s, t)[i]}\n"
                      "  1 <= i && i <= Sequence.count(s) ==> Sequence.concat(s, t)[i] == s[i]);",
                      "axiom (forall <T> s: Sequence T, t: Sequence T, i: int :: {Sequence.concat(s, t)[Sequence.count(s)+i]}\n"
                      "  1 <= i && i <= Sequence.count(t) ==> Sequence.concat(s, t)[Sequence.count(s)+i] == t[i]);"}));
    ops.push_back(op("seq_has", "has (x: G): BOOLEAN", "Sequence.has(Current, x)",
                     "function Sequence.has<T>(Sequence T, T) returns (bool);",
                     {"axiom (forall <T> s: Sequence T, x: T :: {Sequence.has(s, x)}\n"
                      "  Sequence.has(s, x) <==> (exists i: int :: 1 <= i && i <= Sequence.count(s) && s[i] == x));"}));
    ops.push_back(op("seq_domain", "domain: MML_SET [INTEGER]", "Sequence.domain(Current)",
                     "function Sequence.domain<T>(Sequence T) returns (Set int);",
                     {"axiom (forall <T> s: Sequence T, i: int :: {Sequence.domain(s)[i]}\n"
                      "  Sequence.domain(s)[i] <==> 1 <= i && i <= Sequence.count(s));"}));
    ops.push_back(op("seq_range", "range: MML_SET [G]", "Sequence.range(Current)",
                     "function Sequence.range<T>(Sequence T) returns (Set T);",
                     {"axiom (forall <T> s: Sequence T, x: T :: {Sequence.range(s)[x]}\n"
                      "  Sequence.range(s)[x] <==> Sequence.has(s, x));"}));
    return t;
}

SortTheory set_theory()
{
    SortTheory t{"Set", "Set G", "type Set T = [T] bool ;", {}};
    auto& ops = t.operations;
    ops.push_back(op("set_count", "count: INTEGER", "Set.count(Current)",
                     "function Set.count<T>(Set T) returns (int);",
                     {"axiom (forall <T> s: Set T :: {Set.count(s)}\n"
                      "  0 <= Set.count(s));"}));
    ops.push_back(op("set_is_empty", "is_empty: BOOLEAN", "Set.is_empty(Current)",
                     "function Set.is_empty<T>(Set T) returns (bool);",
                     {"axiom (forall <T> s: Set T :: {Set.is_empty(s)}\n"
                      "  Set.is_empty(s) <==> (forall x: T :: !s[x]));",
                      "axiom (forall <T> s: Set T :: {Set.is_empty(s)}\n"
                      "  Set.is_empty(s) <==> Set.count(s) == 0);"}));
    ops.push_back(op("set_has", "has (x: G): BOOLEAN", "Set.has(Current, x)",
                     "function Set.has<T>(Set T, T) returns (bool);",
                     {"axiom (forall <T> s: Set T, x: T :: {Set.has(s, x)}\n"
                      "  Set.has(s, x) <==> s[x]);"}));
    ops.push_back(op("set_extended", "extended (x: G): MML_SET [G]", "Set.extended(Current, x)",
                     "function Set.extended<T>(Set T, T) returns (Set T);",
                     {"axiom (forall <T> s: Set T, x: T, y: T :: {Set.extended(s, x)[y]}\n"
                      "  Set.extended(s, x)[y] <==> y == x || s[y]);",
                      "axiom (forall <T> s: Set T, x: T :: {Set.count(Set.extended(s, x))}\n"
                      "  !s[x] ==> Set.count(Set.extended(s, x)) == Set.count(s)+1);"}));
    ops.push_back(op("set_removed", "removed (x: G): MML_SET [G]", "Set.removed(Current, x)",
                     "function Set.removed<T>(Set T, T) returns (Set T);",
                     {"axiom (forall <T> s: Set T, x: T, y: T :: {Set.removed(s, x)[y]}\n"
                      "  Set.removed(s, x)[y] <==> y != x && s[y]);",
                      "axiom (forall <T> s: Set T, x: T :: {Set.count(Set.removed(s, x))}\n"
                      "  s[x] ==> Set.count(Set.removed(s, x)) == Set.count(s)-1);"}));
    ops.push_back(op("set_union", "union alias \"+\" (other: MML_SET [G]): MML_SET [G]", "Set.union(Current, other)",
                     "function Set.union<T>(Set T, Set T) returns (Set T);",
                     {"axiom (forall <T> s: Set T, t: Set T, y: T :: {Set.union(s, t)[y]}\n"
                      "  Set.union(s, t)[y] <==> s[y] || t[y]);"}));
    ops.push_back(op("set_intersection", "intersection alias \"*\" (other: MML_SET [G]): MML_SET [G]",
                     "Set.intersection(Current, other)",
                     "function Set.intersection<T>(Set T, Set T) returns (Set T);",
                     {"axiom (forall <T> s: Set T, t: Set T, y: T :: {Set.intersection(s, t)[y]}\n"
                      "  Set.intersection(s, t)[y] <==> s[y] && t[y]);"}));
    ops.push_back(op("set_difference", "difference alias \"-\" (other: MML_SET [G]): MML_SET [G]",
                     "Set.difference(Current, other)",
                     "function Set.difference<T>(Set T, Set T) returns (Set T);",
                     {"axiom (forall <T> s: Set T, t: Set T, y: T :: {Set.difference(s, t)[y]}\n"
                      "  Set.difference(s, t)[y] <==> s[y] && !t[y]);"}));
    ops.push_back(op("set_is_subset", "is_subset_of (other: MML_SET [G]): BOOLEAN", "Set.is_subset(Current, other)",
                     "function Set.is_subset<T>(Set T, Set T) returns (bool);",
                     {"axiom (forall <T> s: Set T, t: Set T :: {Set.is_subset(s, t)}\n"
                      "  Set.is_subset(s, t) <==> (forall y: T :: s[y] ==> t[y]));"}));
    return t;
}

SortTheory bag_theory()
{
    SortTheory t{"Bag", "Bag G", "type Bag T = [T] int ;", {}};
    auto& ops = t.operations;
    ops.push_back(op("bag_multiplicity", "occurrences (x: G): INTEGER", "Bag.multiplicity(Current, x)",
                     "function Bag.multiplicity<T>(Bag T, T) returns (int);",
                     {"axiom (forall <T> b: Bag T, x: T :: {Bag.multiplicity(b, x)}\n"
                      "  Bag.multiplicity(b, x) == b[x]);",
                      "axiom (forall <T> b: Bag T, x: T :: {b[x]}\n"
                      "  0 <= b[x]);"}));
    ops.push_back(op("bag_is_empty", "is_empty: BOOLEAN", "Bag.is_empty(Current)",
                     "function Bag.is_empty<T>(Bag T) returns (bool);",
                     {"axiom (forall <T> b: Bag T :: {Bag.is_empty(b)}\n"
                      "  Bag.is_empty(b) <==> (forall x: T :: b[x] == 0));"}));
    ops.push_back(op("bag_count", "count: INTEGER", "Bag.count(Current)",
                     "function Bag.count<T>(Bag T) returns (int);",
                     {"axiom (forall <T> b: Bag T :: {Bag.count(b)}\n"
                      "  Bag.count(b) == 0 <==> Bag.is_empty(b));",
                      "axiom (forall <T> b: Bag T, x: T :: {Bag.count(Bag.extended(b, x))}\n"
                      "  Bag.count(Bag.extended(b, x)) == Bag.count(b)+1);"}));
    ops.push_back(op("bag_extended", "extended (x: G): MML_BAG [G]", "Bag.extended(Current, x)",
                     "function Bag.extended<T>(Bag T, T) returns (Bag T);",
                     {"axiom (forall <T> b: Bag T, x: T, y: T :: {Bag.extended(b, x)[y]}\n"
                      "  Bag.extended(b, x)[y] == (if y == x then b[y]+1 else b[y]));"}));
    ops.push_back(op("bag_removed", "removed (x: G): MML_BAG [G]", "Bag.removed(Current, x)",
                     "function Bag.removed<T>(Bag T, T) returns (Bag T);",
                     {"axiom (forall <T> b: Bag T, x: T, y: T :: {Bag.removed(b, x)[y]}\n"
                      "  Bag.removed(b, x)[y] == (if y == x && 0 < b[y] then b[y]-1 else b[y]));"}));
    ops.push_back(op("bag_domain", "domain: MML_SET [G]", "Bag.domain(Current)",
                     "function Bag.domain<T>(Bag T) returns (Set T);",
                     {"axiom (forall <T> b: Bag T, x: T :: {Bag.domain(b)[x]}\n"
                      "  Bag.domain(b)[x] <==> 0 < b[x]);"}));
    return t;
}

SortTheory map_theory()
{
    SortTheory t{"Map", "Map K G", "type Map K V = [K] V ;", {}};
    auto& ops = t.operations;
    ops.push_back(op("map_domain", "domain: MML_SET [K]", "Map.domain(Current)",
                     "function Map.domain<K, V>(Map K V) returns (Set K);", {}));
    ops.push_back(op("map_has_key", "has_key (k: K): BOOLEAN", "Map.has_key(Current, k)",
                     "function Map.has_key<K, V>(Map K V, K) returns (bool);",
                     {"axiom (forall <K, V> m: Map K V, k: K :: {Map.has_key(m, k)}\n"
                      "  Map.has_key(m, k) <==> Map.domain(m)[k]);"}));
    ops.push_back(op("map_item", "item alias \"[]\" (k: K): G", "Map.item(Current, k)",
                     "function Map.item<K, V>(Map K V, K) returns (V);",
                     {"axiom (forall <K, V> m: Map K V, k: K :: {Map.item(m, k)}\n"
                      "  Map.item(m, k) == m[k]);"}));
    ops.push_back(op("map_count", "count: INTEGER", "Map.count(Current)",
                     "function Map.count<K, V>(Map K V) returns (int);",
                     {"axiom (forall <K, V> m: Map K V :: {Map.count(m)}\n"
                      "  Map.count(m) == Set.count(Map.domain(m)));"}));
    ops.push_back(op("map_is_empty", "is_empty: BOOLEAN", "Map.is_empty(Current)",
                     "function Map.is_empty<K, V>(Map K V) returns (bool);",
                     {"axiom (forall <K, V> m: Map K V :: {Map.is_empty(m)}\n"
                      "  Map.is_empty(m) <==> Set.is_empty(Map.domain(m)));"}));
    ops.push_back(op("map_updated", "updated (k: K; x: G): MML_MAP [K, G]", "Map.updated(Current, k, x)",
                     "function Map.updated<K, V>(Map K V, K, V) returns (Map K V);",
                     {"axiom (forall <K, V> m: Map K V, k: K, x: V :: {Map.updated(m, k, x)}\n"
                      "  Map.updated(m, k, x) == m[k := x]);",
                      "axiom (forall <K, V> m: Map K V, k: K, x: V :: {Map.domain(Map.updated(m, k, x))}\n"
                      "  Map.domain(Map.updated(m, k, x)) == Set.extended(Map.domain(m), k));"}));
    ops.push_back(op("map_replaced_at", "replaced_at (k: K; x: G): MML_MAP [K, G]", "Map.replaced_at(Current, k, x)",
                     "function Map.replaced_at<K, V>(Map K V, K, V) returns (Map K V);",
                     {"axiom (forall <K, V> m: Map K V, k: K, x: V :: {Map.replaced_at(m, k, x)}\n"
                      "  Map.replaced_at(m, k, x) == m[k := x]);",
                      "axiom (forall <K, V> m: Map K V, k: K, x: V :: {Map.domain(Map.replaced_at(m, k, x))}\n"
                      "  Map.domain(Map.replaced_at(m, k, x)) == Map.domain(m));"}));
    ops.push_back(op("map_removed", "removed (k: K): MML_MAP [K, G]", "Map.removed(Current, k)",
                     "function Map.removed<K, V>(Map K V, K) returns (Map K V);",
                     {"axiom (forall <K, V> m: Map K V, k: K, j: K :: {Map.removed(m, k)[j]}\n"
                      "  j != k ==> Map.removed(m, k)[j] == m[j]);",
                      "axiom (forall <K, V> m: Map K V, k: K :: {Map.domain(Map.removed(m, k))}\n"
                      "  Map.domain(Map.removed(m, k)) == Set.removed(Map.domain(m), k));"}));
    return t;
}

constexpr std::array<NotExported, 16> kNotExported{{
    {"seq_interval", "clipped bounds; contracts use front/tail instead"},
    {"seq_occurrences", "needs a recursive count over positions"},
    {"seq_to_bag", "needs a recursive count over positions"},
    {"set_for_all", "higher-order predicate argument"},
    {"set_exists", "higher-order predicate argument"},
    {"int_interval", "integer sets are written as explicit bounds in formulas"},
    {"map_range", "existential image; not needed by the exported contracts"},
    {"map_restricted", "not needed by the exported contracts"},
    {"map_is_constant", "not needed by the exported contracts"},
    {"rel_count", "relations are used by EqSet only; no relation theory"},
    {"rel_is_empty", "relations are used by EqSet only; no relation theory"},
    {"rel_has", "relations are used by EqSet only; no relation theory"},
    {"rel_image_of", "relations are used by EqSet only; no relation theory"},
    {"rel_domain", "relations are used by EqSet only; no relation theory"},
    {"rel_range", "relations are used by EqSet only; no relation theory"},
    {"rel_extended", "relations are used by EqSet only; no relation theory"},
}};

}  // namespace

std::string TheoryDoc::text() const
{
    std::string out;
    for (const auto& t : types) {
        out += t + "\n";
    }
    for (const auto& f : functions) {
        out += f + "\n";
    }
    for (const auto& a : axioms) {
        out += a + "\n";
    }
    return out;
}

void TheoryRegistry::add(SortTheory theory)
{
    if (find(theory.sort) != nullptr) {
        throw ExportError("sort " + theory.sort + " registered twice");
    }
    theories_.push_back(std::move(theory));
}

const SortTheory* TheoryRegistry::find(std::string_view sort) const
{
    for (const auto& t : theories_) {
        if (t.sort == sort) {
            return &t;
        }
    }
    return nullptr;
}

std::vector<std::string> TheoryRegistry::sorts() const
{
    std::vector<std::string> out;
    for (const auto& t : theories_) {
        out.push_back(t.sort);
    }
    std::sort(out.begin(), out.end());
    return out;
}

TheoryRegistry standard_theories()
{
    TheoryRegistry r;
    r.add(sequence_theory());
    r.add(set_theory());
    r.add(bag_theory());
    r.add(map_theory());
    return r;
}

TheoryDoc export_theory(const TheoryRegistry& registry, std::string_view sort)
{
    const auto* t = registry.find(sort);
    if (t == nullptr) {
        throw ExportError("no theory registered for sort '" + std::string(sort) + "'");
    }
    if (t->mapped_to.empty()) {
        throw ExportError("sort " + t->sort + " has no mapped_to annotation");
    }
    TheoryDoc doc;
    doc.sort = t->sort;
    doc.types.push_back("// " + t->sort + ": mapped_to \"" + t->mapped_to + "\"");
    doc.types.push_back(t->type_decl);
    for (const auto& o : t->operations) {
        if (o.mapped_to.empty()) {
            throw ExportError("operation " + o.operation + " of sort " + t->sort + " has no mapped_to annotation");
        }
        for (const auto& f : o.functions) {
            doc.functions.push_back(f);
        }
    }
    for (const auto& o : t->operations) {
        doc.axioms.push_back("// " + o.feature + ": mapped_to \"" + o.mapped_to + "\"");
        for (const auto& a : o.axioms) {
            doc.axioms.push_back(a);
        }
    }
    return doc;
}

std::string export_all(const TheoryRegistry& registry)
{
    std::string out(file_header);
    for (const auto& sort : registry.sorts()) {
        out += "\n" + export_theory(registry, sort).text();
    }
    return out;
}

void export_all(const TheoryRegistry& registry, const std::filesystem::path& out)
{
    auto text = export_all(registry);
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw ExportError("cannot open " + out.string() + " for writing");
    }
    f << text;
    f.close();
    if (!f) {
        throw ExportError("writing " + out.string() + " failed");
    }
}

std::span<const NotExported> not_exported()
{
    return kNotExported;
}

std::vector<std::string> coverage_gaps(const TheoryRegistry& registry)
{
    std::set<std::string> covered;
    for (const auto& sort : registry.sorts()) {
        for (const auto& o : registry.find(sort)->operations) {
            covered.insert(o.operation);
        }
    }
    for (const auto& n : not_exported()) {
        covered.insert(std::string(n.operation));
    }
    std::vector<std::string> gaps;
    for (auto name : model::operation_names()) {
        if (!covered.contains(std::string(name))) {
            gaps.emplace_back(name);
        }
    }
    return gaps;
}

}  // namespace mbc::boogie
