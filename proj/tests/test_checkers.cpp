#include "fixtures.hpp"
#include "support.hpp"

#include "mbc/checkers/checkers.hpp"

using namespace mbc;
using namespace mbc::test;
using checkers::Checker;
using checkers::EnumerationConfig;

namespace {

EnumerationConfig small(std::size_t universe = 2, std::size_t max_size = 3)
{
    EnumerationConfig cfg;
    cfg.universe = universe;
    cfg.max_size = max_size;
    return cfg;
}

contracts::RunContext run_for(const EnumerationConfig& cfg)
{
    contracts::RunContext run;
    run.universe = cfg.universe;
    return run;
}

std::set<std::string> class_texts(const checkers::StateSpace& space)
{
    std::set<std::string> out;
    for (const auto& o : space.objects) {
        out.insert(o.text);
    }
    return out;
}

std::vector<std::vector<Value>> tuples(const contracts::Feature& f, const EnumerationConfig& cfg)
{
    std::vector<std::vector<Value>> out{{}};
    for (const auto& a : f.args) {
        std::vector<std::vector<Value>> next;
        for (const auto& prefix : out) {
            for (const auto& v : checkers::argument_domain(a.kind, cfg)) {
                auto t = prefix;
                t.push_back(v);
                next.push_back(std::move(t));
            }
        }
        out = std::move(next);
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Enumeration

TEST_CASE("LinkedList with one token and size one has five abstract states")
{
    auto reg = containers::standard_registry();
    auto cfg = small(1, 1);
    auto space = checkers::enumerate_states(reg, "LinkedList", cfg, run_for(cfg));
    CHECK(space.classes == 5);
    CHECK(class_texts(space) ==
          std::set<std::string>{"(⟨⟩, 0)", "(⟨⟩, 1)", "(⟨a⟩, 0)", "(⟨a⟩, 1)", "(⟨a⟩, 2)"});
}

TEST_CASE("Collection with two tokens and size two has six bag classes")
{
    auto reg = containers::standard_registry();
    auto cfg = small(2, 2);
    auto space = checkers::enumerate_states(reg, "Collection", cfg, run_for(cfg));
    CHECK(space.classes == 6);
    // Multisets of size <= 2 over two elements, counted directly.
    std::set<std::string> expected;
    for (int na = 0; na <= 2; ++na) {
        for (int nb = 0; na + nb <= 2; ++nb) {
            std::vector<model::Bag::Entry> e;
            if (na > 0) {
                e.emplace_back(a, na);
            }
            if (nb > 0) {
                e.emplace_back(b, nb);
            }
            expected.insert("(" + model::to_string(model::Bag::of(e)) + ",)");
        }
    }
    CHECK(class_texts(space) == expected);
}

TEST_CASE("max size zero leaves the constructor states")
{
    auto reg = containers::standard_registry();
    auto cfg = small(2, 0);
    for (const char* type : {"Queue", "Stack", "HashTable", "BinaryTree", "Collection"}) {
        CAPTURE(type);
        auto space = checkers::enumerate_states(reg, type, cfg, run_for(cfg));
        CHECK(space.classes == 1);
        for (const auto& o : space.objects) {
            CHECK(o.trace.size() == 1);
        }
    }
    // Cursor moves keep the size, so an empty list still has both indices.
    auto lists = checkers::enumerate_states(reg, "LinkedList", cfg, run_for(cfg));
    CHECK(class_texts(lists) == std::set<std::string>{"(⟨⟩, 0)", "(⟨⟩, 1)"});
}

TEST_CASE("every enumerated object rebuilds from its trace")
{
    auto reg = containers::standard_registry();
    auto cfg = small();
    auto run = run_for(cfg);
    for (const char* type : {"LinkedList", "ArrayT", "Queue", "EqSet", "BinaryTree"}) {
        auto space = checkers::enumerate_states(reg, type, cfg, run);
        for (const auto& o : space.objects) {
            auto again = checkers::rebuild(reg, type, o.trace, run);
            CHECK(again->concrete_key() == o.object->concrete_key());
            CHECK(o.object->measure() <= cfg.max_size);
        }
    }
}

TEST_CASE("oversized enumerations are refused with an estimate")
{
    auto reg = containers::standard_registry();
    auto cfg = small(4, 6);
    cfg.limit = 100;
    try {
        checkers::enumerate_states(reg, "ArrayT", cfg, run_for(cfg));
        FAIL("expected a refusal");
    } catch (const checkers::EnumerationRefused& e) {
        CHECK(e.estimate() > 100);
        CHECK(std::string(e.what()).find("refused") != std::string::npos);
    }
    auto report = checkers::classify_library(reg, cfg, run_for(cfg), {"ArrayT", "Queue"});
    REQUIRE_FALSE(report.refused.empty());
    CHECK(report.refused.front().find("ArrayT") != std::string::npos);
    CHECK_FALSE(report.ok());
}

// ---------------------------------------------------------------------------
// Soundness and completeness

TEST_CASE("precondition soundness")
{
    auto reg = containers::standard_registry();
    Checker checker(reg, small(), run_for(small()));
    CHECK(checker.check_precondition_soundness("LinkedList", "put_right").pre_sound);
    CHECK(checker.check_precondition_soundness("TableT", "put").pre_sound);

    auto bins = bin_registry();
    Checker bin_checker(bins, small(), run_for(small()));
    auto v = bin_checker.check_precondition_soundness("Bin", "ready");
    CHECK_FALSE(v.pre_sound);
    REQUIRE_FALSE(v.witnesses.empty());
    const auto& w = v.witnesses.front();
    CHECK(w.kind == checkers::WitnessKind::precondition_unsound);
    REQUIRE(w.prestate.has_value());
    REQUIRE(w.other_prestate.has_value());
    // Same abstract state, different hidden flag.
    auto x = checkers::rebuild(bins, "Bin", *w.prestate, run_for(small()));
    auto y = checkers::rebuild(bins, "Bin", *w.other_prestate, run_for(small()));
    CHECK(x->model("set") == y->model("set"));
    CHECK(dynamic_cast<const Bin&>(*x).flag() != dynamic_cast<const Bin&>(*y).flag());
    CHECK(checkers::reverify(bins, v, w, run_for(small())));
}

TEST_CASE("Collection features are sound and complete")
{
    auto reg = containers::standard_registry();
    Checker checker(reg, small(), run_for(small()));
    for (const char* f : {"is_empty", "wipe_out", "put"}) {
        CAPTURE(f);
        auto v = checker.check_feature("Collection", f);
        CHECK(v.pre_sound);
        CHECK(v.post_sound);
        CHECK(v.post_complete);
        CHECK(v.witnesses.empty());
    }
}

TEST_CASE("Dispenser.put is incomplete: the element may go to either end")
{
    auto reg = containers::standard_registry();
    auto run = run_for(small());
    Checker checker(reg, small(), run);
    auto v = checker.check_command_completeness("Dispenser", "put");
    CHECK(v.pre_sound);
    CHECK(v.post_sound);
    CHECK_FALSE(v.post_complete);
    REQUIRE(v.tag.has_value());
    CHECK(*v.tag == contracts::Cause::inheritance);
    REQUIRE_FALSE(v.witnesses.empty());
    CHECK(v.witness_count >= v.witnesses.size());

    bool ends = false;
    for (const auto& w : v.witnesses) {
        CHECK(checkers::reverify(reg, v, w, run));
        auto pre = checkers::rebuild(reg, "Dispenser", *w.prestate, run)->model("sequence").as_sequence();
        auto x = checkers::rebuild(reg, "Dispenser", *w.first.main.trace, run)->model("sequence").as_sequence();
        auto y = checkers::rebuild(reg, "Dispenser", *w.second.main.trace, run)->model("sequence").as_sequence();
        const auto& v0 = *w.args.at(0).value;
        CHECK(x != y);
        // Both poststates are the prestate with v inserted somewhere.
        for (const auto& post : {x, y}) {
            bool inserted = false;
            for (std::int64_t i = 0; i <= pre.count(); ++i) {
                inserted = inserted || post == pre.front(i).extended(v0).concat(pre.tail(i + 1));
            }
            CHECK(inserted);
        }
        auto at_end = pre.extended(v0);
        auto at_start = pre.prepended(v0);
        ends = ends || (x == at_end && y == at_start) || (x == at_start && y == at_end);
    }
    CHECK(ends);
}

TEST_CASE("ArrayT.fill and TableT.put are complete")
{
    auto reg = containers::standard_registry();
    Checker checker(reg, small(), run_for(small()));
    auto fill = checker.check_feature("ArrayT", "fill");
    CHECK(fill.post_complete);
    CHECK(fill.post_sound);
    CHECK(fill.pre_sound);
    auto put = checker.check_feature("TableT", "put");
    CHECK(put.post_complete);
    CHECK(put.post_sound);
    CHECK(put.pre_sound);
    CHECK(put.states_checked > 0);
}

TEST_CASE("query completeness")
{
    auto reg = containers::standard_registry();
    Checker checker(reg, small(), run_for(small()));
    CHECK(checker.check_query_completeness("LinkedList", "duplicate").post_complete);
    CHECK(checker.check_query_completeness("LinkedList", "item").post_complete);
    CHECK(checker.check_query_completeness("LinkedList", "count").post_complete);

    auto bins = bin_registry();
    Checker bin_checker(bins, small(), run_for(small()));
    auto one = bin_checker.check_query_completeness("Bin", "one");
    CHECK_FALSE(one.post_complete);
    REQUIRE_FALSE(one.witnesses.empty());
    CHECK(one.witnesses.front().first.main.text != one.witnesses.front().second.main.text);
    CHECK(checkers::reverify(bins, one, one.witnesses.front(), run_for(small())));
}

TEST_CASE("an untagged incomplete fixture fails the library report")
{
    auto bins = bin_registry();
    auto report = checkers::classify_library(bins, small(), run_for(small()));
    CHECK_FALSE(report.ok());
    CHECK(std::find(report.untagged.begin(), report.untagged.end(), "Bin.one") != report.untagged.end());
    CHECK(report.unsound >= 1);
}

TEST_CASE("library report: tags, fraction and round trip")
{
    auto reg = containers::standard_registry();
    auto cfg = small();
    auto report = checkers::classify_library(reg, cfg, run_for(cfg));
    CHECK(report.ok());
    CHECK(report.refused.empty());
    CHECK(report.untagged.empty());
    CHECK(report.unsound == 0);
    CHECK(report.incomplete_fraction() <= 0.10);

    std::set<std::string> incomplete;
    for (const auto& v : report.verdicts) {
        if (!v.post_complete) {
            incomplete.insert(v.type + "." + v.feature);
            CHECK(v.tag.has_value());
            CHECK_FALSE(v.witnesses.empty());
            for (const auto& w : v.witnesses) {
                CHECK(checkers::reverify(reg, v, w, run_for(cfg)));
            }
        }
    }
    CHECK(incomplete.contains("Dispenser.put"));
    CHECK(incomplete.contains("ArrayT.reserve"));
    for (const auto& v : report.verdicts) {
        if (v.type == "ArrayT" && v.feature == "reserve") {
            CHECK(*v.tag == contracts::Cause::information_hiding);
        }
        if (v.type == "Collection" || v.type == "Stack" || v.type == "Queue" || v.type == "TableT" ||
            v.type == "LinkedList") {
            CAPTURE(v.type + "." + v.feature);
            CHECK(v.post_complete);
        }
    }

    auto back = checkers::LibraryReport::from_json(report.to_json());
    CHECK(back.to_json().dump() == report.to_json().dump());
    CHECK(back.table() == report.table());
}

TEST_CASE("verdicts are deterministic")
{
    auto reg = containers::standard_registry();
    auto cfg = small();
    std::vector<std::string> types{"Dispenser", "ArrayT", "LinkedList"};
    auto one = checkers::classify_library(reg, cfg, run_for(cfg), types).to_json().dump();
    auto two = checkers::classify_library(reg, cfg, run_for(cfg), types).to_json().dump();
    CHECK(one == two);
}

// Complete commands define a function: over the candidate space, the
// poststates satisfying the postcondition collapse to one abstract state,
// and it is the one execution produces.
TEST_CASE("complete commands have a single satisfying abstract poststate")
{
    auto reg = containers::standard_registry();
    auto cfg = small(2, 2);
    auto run = run_for(cfg);
    Checker checker(reg, cfg, run);
    const std::vector<std::pair<std::string, std::string>> commands{
        {"Queue", "put"},       {"Stack", "remove"},  {"TableT", "force"}, {"LinkedList", "put_right"},
        {"LinkedList", "forth"}, {"LinkedList", "start"}, {"ArrayT", "fill"}};

    for (const auto& [type, name] : commands) {
        CAPTURE(type + "." + name);
        REQUIRE(checker.check_command_completeness(type, name).post_complete);
        const auto& spec = reg.get(type);
        const auto& f = spec.feature(name);
        const auto& space = checker.space(type);
        std::size_t checked = 0;
        for (const auto& pre : space.objects) {
            for (const auto& values : tuples(f, cfg)) {
                std::vector<Argument> args(values.begin(), values.end());
                contracts::PreContext pc{pre.object.get(), &pre.state, args, &run};
                if (f.contract.pre && !f.contract.pre(pc)) {
                    continue;
                }
                auto done = pre.object->clone();
                try {
                    done->call(name, args);
                } catch (const std::exception&) {
                    continue;  // outside the representable bounds
                }
                auto executed = spec.abstract_state(*done);

                std::set<std::string> satisfying;
                for (const auto& cand : space.objects) {
                    contracts::CallContext ctx(spec, run, args);
                    ctx.set_target({pre.object.get(), &pre.state}, {cand.object.get(), &cand.state});
                    bool ok = true;
                    for (const auto& clause : f.effective_post) {
                        ok = ok && clause.holds(ctx);
                    }
                    if (ok) {
                        satisfying.insert(cand.text);
                    }
                }
                if (done->measure() > cfg.max_size) {
                    CHECK(satisfying.empty());
                    continue;
                }
                REQUIRE(satisfying.size() == 1);
                CHECK(*satisfying.begin() == contracts::to_string(executed));
                ++checked;
            }
        }
        CHECK(checked > 0);
    }
}

// Restating an implicit frame clause explicitly changes nothing.
TEST_CASE("an explicit duplicate of a frame clause never changes verdicts")
{
    auto reg = containers::standard_registry();
    auto spec = containers::linked_list_spec();
    for (auto& f : spec.features) {
        if (f.kind != contracts::FeatureKind::command) {
            continue;
        }
        for (const auto& mq : spec.signature->queries()) {
            std::string q = mq.name;
            if (f.contract.mentioned.contains(q) || f.contract.relevant.contains(q)) {
                continue;
            }
            contracts::Clause same;
            same.id = f.name + "/same:" + q;
            same.holds = [q](const contracts::CallContext& c) { return c.now(q) == c.old(q); };
            f.contract.post.push_back(same);
            f.contract.mentioned.insert(q);
        }
    }
    contracts::Registry restated;
    restated.add(spec);

    auto cfg = small(2, 2);
    Checker plain(reg, cfg, run_for(cfg));
    Checker other(restated, cfg, run_for(cfg));
    for (const auto& f : spec.features) {
        if (f.kind == contracts::FeatureKind::model_query || f.kind == contracts::FeatureKind::constructor) {
            continue;
        }
        CAPTURE(f.name);
        auto x = plain.check_feature("LinkedList", f.name);
        auto y = other.check_feature("LinkedList", f.name);
        CHECK(x.pre_sound == y.pre_sound);
        CHECK(x.post_sound == y.post_sound);
        CHECK(x.post_complete == y.post_complete);
        CHECK(x.witness_count == y.witness_count);
    }
}

// ---------------------------------------------------------------------------
// Adequacy

TEST_CASE("Queue with the full interface is adequate under its sequence model")
{
    auto reg = containers::standard_registry();
    auto cfg = small();
    checkers::AdequacyConfig acfg;
    auto v = checkers::check_observational_adequacy(reg, "Queue", cfg, acfg, run_for(cfg));
    CHECK(v.adequate());
    CHECK(v.depth == 3);
    CHECK(v.witnesses.empty());
    CHECK(v.objects > 0);
}

TEST_CASE("Queue without remove is not minimal under the full sequence")
{
    auto reg = containers::standard_registry();
    auto cfg = small();
    checkers::AdequacyConfig acfg;
    acfg.hidden = {"remove"};
    auto v = checkers::check_observational_adequacy(reg, "Queue", cfg, acfg, run_for(cfg));
    CHECK(v.coarse_ok);
    CHECK_FALSE(v.minimal_ok);
    REQUIRE(v.witnesses.size() == 1);
    const auto& w = v.witnesses.front();
    CHECK(w.direction == checkers::Direction::indistinguishable);
    auto run = run_for(cfg);
    auto x = checkers::rebuild(reg, "Queue", w.first, run)->model("sequence");
    auto y = checkers::rebuild(reg, "Queue", w.second, run)->model("sequence");
    CHECK(x != y);
    // Without remove only the front and the length are observable.
    CHECK(x.as_sequence().count() == y.as_sequence().count());
    CHECK(x.as_sequence().item(1) == y.as_sequence().item(1));
}

TEST_CASE("Queue without remove under count and first element is adequate")
{
    auto reg = containers::standard_registry();
    auto cfg = small();
    checkers::AdequacyConfig acfg;
    acfg.hidden = {"remove"};
    acfg.projection = "count_first";
    CHECK(checkers::check_observational_adequacy(reg, "Queue", cfg, acfg, run_for(cfg)).adequate());

    // Count and last element: the front is observable through item, so
    // equal models can be told apart.
    acfg.projection = "count_last";
    auto last = checkers::check_observational_adequacy(reg, "Queue", cfg, acfg, run_for(cfg));
    CHECK_FALSE(last.coarse_ok);
    CHECK_FALSE(last.adequate());
}

TEST_CASE("adequacy verdicts serialize with their depth label")
{
    auto reg = containers::standard_registry();
    auto cfg = small();
    checkers::AdequacyConfig acfg;
    acfg.hidden = {"remove"};
    auto one = checkers::check_observational_adequacy(reg, "Queue", cfg, acfg, run_for(cfg)).to_json();
    auto two = checkers::check_observational_adequacy(reg, "Queue", cfg, acfg, run_for(cfg)).to_json();
    CHECK(one.dump() == two.dump());
    CHECK(one["label"] == "up to depth 3");
    CHECK(one["adequate"] == false);
}
