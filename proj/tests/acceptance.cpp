// Acceptance gate: one PASS/FAIL line per criterion; exit 1 if any fails.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mbc/autotest/autotest.hpp"
#include "mbc/boogie/boogie.hpp"
#include "mbc/checkers/checkers.hpp"
#include "mbc/containers/containers.hpp"
#include "mbc/model/value.hpp"

using namespace mbc;
using model::Value;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

class Gate {
public:
    void run(int number, const std::string& title, double budget_seconds, const std::function<Verdict()>& body)
    {
        auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = body();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > budget_seconds) {
            v.pass = false;
            v.detail += "; over the time budget";
        }
        failed_ = failed_ || !v.pass;
        std::printf("%s %d %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", number, title.c_str(), v.detail.c_str(),
                    secs);
        std::fflush(stdout);
    }
    bool failed() const { return failed_; }

private:
    bool failed_ = false;
};

Value tok(int i)
{
    return Value::reference(static_cast<std::uint32_t>(i));
}

// ---------------------------------------------------------------------------
// 1. Model algebra against std containers over the tokens {0, 1}.

struct Tally {
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::string first;

    void expect(bool ok, const std::string& what)
    {
        ++checks;
        if (!ok && failures++ == 0) {
            first = what;
        }
    }
};

model::Sequence seq_of(const std::vector<int>& v)
{
    std::vector<Value> items;
    for (int x : v) {
        items.push_back(tok(x));
    }
    return model::Sequence::of(items);
}

std::vector<std::vector<int>> vectors_upto(int len)
{
    std::vector<std::vector<int>> out{{}};
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (static_cast<int>(out[i].size()) == len) {
            continue;
        }
        for (int t = 0; t < 2; ++t) {
            auto next = out[i];
            next.push_back(t);
            out.push_back(next);
        }
    }
    return out;
}

void sequences(Tally& t)
{
    for (const auto& v : vectors_upto(3)) {
        auto s = seq_of(v);
        auto n = static_cast<std::int64_t>(v.size());
        t.expect(s.count() == n, "count");
        t.expect(s.is_empty() == v.empty(), "is_empty");
        for (int x = 0; x < 2; ++x) {
            auto ext = v;
            ext.push_back(x);
            t.expect(s.extended(tok(x)) == seq_of(ext), "extended");
            t.expect(s.extended(tok(x)).count() == s.count() + 1, "count(extended(s,x)) = count(s)+1");
            t.expect(s.extended(tok(x)).item(n + 1) == tok(x), "extended item");
            auto pre = v;
            pre.insert(pre.begin(), x);
            t.expect(s.prepended(tok(x)) == seq_of(pre), "prepended");
            t.expect(s.has(tok(x)) == (std::count(v.begin(), v.end(), x) > 0), "has");
            t.expect(s.occurrences(tok(x)) == std::count(v.begin(), v.end(), x), "occurrences");
            t.expect(s.to_bag().multiplicity(tok(x)) == std::count(v.begin(), v.end(), x), "to_bag");
        }
        for (std::int64_t i = 1; i <= n; ++i) {
            t.expect(s.item(i) == tok(v[i - 1]), "item");
        }
        for (std::int64_t k = 0; k <= n; ++k) {
            std::vector<int> f(v.begin(), v.begin() + k);
            std::vector<int> r(v.begin() + k, v.end());
            t.expect(s.front(k) == seq_of(f), "front");
            t.expect(s.tail(k + 1) == seq_of(r), "tail");
            t.expect(s.front(k).concat(s.tail(k + 1)) == s, "front/tail recomposition");
        }
        for (const auto& w : vectors_upto(3 - static_cast<int>(v.size()))) {
            auto cat = v;
            cat.insert(cat.end(), w.begin(), w.end());
            t.expect(s.concat(seq_of(w)) == seq_of(cat), "concat");
        }
    }
}

model::Set set_of(const std::set<int>& v)
{
    std::vector<Value> items;
    for (int x : v) {
        items.push_back(tok(x));
    }
    return model::Set::of(items);
}

void sets(Tally& t)
{
    std::vector<std::set<int>> all{{}, {0}, {1}, {0, 1}};
    for (const auto& x : all) {
        auto s = set_of(x);
        t.expect(s.count() == static_cast<std::int64_t>(x.size()), "set count");
        for (int e = 0; e < 2; ++e) {
            auto ext = x;
            ext.insert(e);
            auto rem = x;
            rem.erase(e);
            t.expect(s.extended(tok(e)) == set_of(ext), "set extended");
            t.expect(s.removed(tok(e)) == set_of(rem), "set removed");
            t.expect(s.has(tok(e)) == x.contains(e), "set has");
        }
        for (const auto& y : all) {
            std::set<int> u;
            std::set<int> i;
            std::set<int> d;
            std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::inserter(u, u.end()));
            std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::inserter(i, i.end()));
            std::set_difference(x.begin(), x.end(), y.begin(), y.end(), std::inserter(d, d.end()));
            auto o = set_of(y);
            t.expect(s.united(o) == set_of(u), "union");
            t.expect(s.intersected(o) == set_of(i), "intersection");
            t.expect(s.minus(o) == set_of(d), "difference");
            t.expect(s.is_subset_of(o) == std::includes(y.begin(), y.end(), x.begin(), x.end()), "subset");
        }
    }
}

void bags(Tally& t)
{
    for (int na = 0; na <= 3; ++na) {
        for (int nb = 0; na + nb <= 3; ++nb) {
            std::vector<model::Bag::Entry> e;
            if (na > 0) {
                e.emplace_back(tok(0), na);
            }
            if (nb > 0) {
                e.emplace_back(tok(1), nb);
            }
            auto bag = model::Bag::of(e);
            int m[2] = {na, nb};
            t.expect(bag.count() == na + nb, "bag count");
            t.expect(bag.is_empty() == (na + nb == 0), "bag is_empty");
            for (int x = 0; x < 2; ++x) {
                t.expect(bag.multiplicity(tok(x)) == m[x], "multiplicity");
                t.expect(bag.extended(tok(x)).multiplicity(tok(x)) == m[x] + 1, "bag extended");
                t.expect(bag.extended(tok(x)).multiplicity(tok(1 - x)) == m[1 - x], "bag extended other");
                t.expect(bag.removed(tok(x)).multiplicity(tok(x)) == std::max(0, m[x] - 1), "bag removed");
                t.expect(bag.domain().has(tok(x)) == (m[x] > 0), "bag domain");
            }
        }
    }
}

void maps(Tally& t)
{
    // Keys and values over the two tokens; -1 marks an absent key.
    for (int k0 = -1; k0 < 2; ++k0) {
        for (int k1 = -1; k1 < 2; ++k1) {
            std::map<int, int> oracle;
            std::vector<model::Map::Entry> e;
            if (k0 >= 0) {
                oracle[0] = k0;
                e.emplace_back(tok(0), tok(k0));
            }
            if (k1 >= 0) {
                oracle[1] = k1;
                e.emplace_back(tok(1), tok(k1));
            }
            auto m = model::Map::of(e);
            t.expect(m.count() == static_cast<std::int64_t>(oracle.size()), "map count");
            for (int k = 0; k < 2; ++k) {
                t.expect(m.has_key(tok(k)) == oracle.contains(k), "has_key");
                if (oracle.contains(k)) {
                    t.expect(m.item(tok(k)) == tok(oracle[k]), "map item");
                }
                for (int v = 0; v < 2; ++v) {
                    auto up = oracle;
                    up[k] = v;
                    std::vector<model::Map::Entry> ue;
                    for (auto [x, y] : up) {
                        ue.emplace_back(tok(x), tok(y));
                    }
                    t.expect(m.updated(tok(k), tok(v)) == model::Map::of(ue), "updated");
                }
                auto rem = oracle;
                rem.erase(k);
                t.expect(m.removed(tok(k)).count() == static_cast<std::int64_t>(rem.size()), "map removed");
                t.expect(!m.removed(tok(k)).has_key(tok(k)), "map removed key");
            }
        }
    }
}

Verdict criterion1()
{
    Tally t;
    sequences(t);
    sets(t);
    bags(t);
    maps(t);
    std::ostringstream d;
    d << t.checks << " checks, " << t.failures << " failures";
    if (t.failures > 0) {
        d << ", first: " << t.first;
    }
    return {t.failures == 0, d.str()};
}

// ---------------------------------------------------------------------------
// 2. Completeness verdicts.

checkers::EnumerationConfig small()
{
    checkers::EnumerationConfig cfg;
    cfg.universe = 2;
    cfg.max_size = 3;
    return cfg;
}

contracts::RunContext run_for(const checkers::EnumerationConfig& cfg)
{
    contracts::RunContext run;
    run.universe = cfg.universe;
    return run;
}

bool sound_complete(const checkers::CheckVerdict& v)
{
    return v.pre_sound && v.post_sound && v.post_complete;
}

Verdict criterion2(const contracts::Registry& reg)
{
    auto cfg = small();
    auto run = run_for(cfg);
    checkers::Checker checker(reg, cfg, run);
    std::vector<std::string> problems;
    for (const char* f : {"is_empty", "wipe_out", "put"}) {
        if (!sound_complete(checker.check_feature("Collection", f))) {
            problems.push_back(std::string("Collection.") + f);
        }
    }
    if (!sound_complete(checker.check_feature("ArrayT", "fill"))) {
        problems.push_back("ArrayT.fill");
    }
    if (!sound_complete(checker.check_feature("TableT", "put"))) {
        problems.push_back("TableT.put");
    }

    auto put = checker.check_feature("Dispenser", "put");
    std::string witness;
    bool position_pair = false;
    if (put.post_complete || put.witnesses.empty()) {
        problems.push_back("Dispenser.put not flagged");
    } else {
        for (const auto& w : put.witnesses) {
            auto pre = checkers::rebuild(reg, "Dispenser", *w.prestate, run)->model("sequence").as_sequence();
            auto x = checkers::rebuild(reg, "Dispenser", *w.first.main.trace, run)->model("sequence").as_sequence();
            auto y = checkers::rebuild(reg, "Dispenser", *w.second.main.trace, run)->model("sequence").as_sequence();
            const auto& v = *w.args.at(0).value;
            if ((x == pre.extended(v) && y == pre.prepended(v)) || (x == pre.prepended(v) && y == pre.extended(v))) {
                if (!checkers::reverify(reg, put, w, run) || position_pair) {
                    continue;
                }
                position_pair = true;
                witness = w.prestate_text + ".put(" + w.args[0].text + ") -> " + w.first.main.text + " vs " +
                          w.second.main.text;
            }
        }
        if (!position_pair) {
            problems.push_back("Dispenser.put witness is not an insertion-position pair");
        }
    }
    std::string detail = problems.empty() ? "Collection.{is_empty,wipe_out,put}, ArrayT.fill, TableT.put complete; "
                                            "Dispenser.put incomplete, " + witness
                                          : "wrong verdicts:";
    for (const auto& p : problems) {
        detail += " " + p;
    }
    return {problems.empty(), detail};
}

// ---------------------------------------------------------------------------
// 3, 4: campaigns.

autotest::CampaignConfig fault_campaign()
{
    autotest::CampaignConfig cfg;
    cfg.targets = {"LinkedList"};
    cfg.budget.max_calls = 10000;
    cfg.budget.seed = 7;
    cfg.faults.enable(std::string(containers::merge_right_missing_link));
    return cfg;
}

autotest::CampaignConfig clean_campaign(const contracts::Registry& reg)
{
    autotest::CampaignConfig cfg;
    cfg.targets = reg.names();
    cfg.budget.max_calls = 100000;
    cfg.budget.seed = 7;
    return cfg;
}

std::string fault_json(const contracts::Registry& reg)
{
    auto cfg = fault_campaign();
    auto out = autotest::run_campaign(reg, cfg).json_lines();
    cfg.filter = contracts::ClauseFilter::classic_only;
    return out + autotest::run_campaign(reg, cfg).json_lines();
}

Verdict criterion3(const contracts::Registry& reg)
{
    auto cfg = fault_campaign();
    auto full = autotest::run_campaign(reg, cfg);
    auto on_clause = full.stats.by_clause.contains("merge_right/sequence") ? full.stats.by_clause.at("merge_right/sequence") : 0;

    // The same traces with classic clauses only.
    std::size_t classic_replays = 0;
    autotest::ReplayOptions classic;
    classic.filter = contracts::ClauseFilter::classic_only;
    for (const auto& rep : full.reports) {
        if (autotest::replay(reg, rep, classic).violation) {
            ++classic_replays;
        }
    }
    cfg.filter = contracts::ClauseFilter::classic_only;
    auto classic_run = autotest::run_campaign(reg, cfg);

    std::ostringstream d;
    d << full.stats.violations << " violations of merge_right/sequence in " << full.stats.attempted
      << " calls; classic clauses: " << classic_run.stats.violations << " in the campaign, " << classic_replays
      << " on " << full.reports.size() << " replayed fault traces";
    bool pass = on_clause >= 1 && classic_run.stats.violations == 0 && classic_replays == 0 &&
                classic_run.stats.attempted == full.stats.attempted;
    return {pass, d.str()};
}

Verdict criterion4(const contracts::Registry& reg)
{
    auto r = autotest::run_campaign(reg, clean_campaign(reg));
    auto invariants = r.stats.by_kind.contains("class_invariant") ? r.stats.by_kind.at("class_invariant") : 0;
    std::ostringstream d;
    d << r.stats.attempted << " calls over " << reg.names().size() << " types, " << r.stats.violations
      << " violations, " << invariants << " invariant failures";
    return {r.stats.attempted == 100000 && r.stats.violations == 0 && invariants == 0, d.str()};
}

// ---------------------------------------------------------------------------
// 5. Adequacy.

checkers::AdequacyVerdict queue_adequacy(const contracts::Registry& reg, bool hide_remove, const std::string& projection)
{
    auto cfg = small();
    checkers::AdequacyConfig acfg;
    acfg.depth = 3;
    acfg.projection = projection;
    if (hide_remove) {
        acfg.hidden = {"remove"};
    }
    return checkers::check_observational_adequacy(reg, "Queue", cfg, acfg, run_for(cfg));
}

std::string adequacy_json(const contracts::Registry& reg)
{
    return queue_adequacy(reg, false, "full").to_json().dump() + queue_adequacy(reg, true, "count_last").to_json().dump() +
           queue_adequacy(reg, true, "full").to_json().dump();
}

std::string describe(const checkers::AdequacyVerdict& v)
{
    std::string out = v.adequate() ? "adequate" : "not adequate";
    for (const auto& w : v.witnesses) {
        out += " [" + std::string(checkers::to_string(w.direction)) + ": " + w.first_text + " vs " + w.second_text;
        if (!w.observation.empty()) {
            out += ", " + w.observation;
        }
        out += "]";
    }
    return out;
}

Verdict criterion5(const contracts::Registry& reg)
{
    auto full = queue_adequacy(reg, false, "full");
    auto count_last = queue_adequacy(reg, true, "count_last");
    auto hidden_full = queue_adequacy(reg, true, "full");
    bool minimality_witness = !hidden_full.minimal_ok && hidden_full.coarse_ok;
    for (const auto& w : hidden_full.witnesses) {
        minimality_witness = minimality_witness && w.direction == checkers::Direction::indistinguishable;
    }
    std::string detail = "up to depth 3; Queue/sequence: " + describe(full) +
                         "; Queue without remove/(count, last): " + describe(count_last) +
                         "; Queue without remove/sequence: " + describe(hidden_full) +
                         "; supplementary, without remove/(count, first): " +
                         describe(queue_adequacy(reg, true, "count_first"));
    return {full.adequate() && count_last.adequate() && minimality_witness && !hidden_full.witnesses.empty(), detail};
}

// ---------------------------------------------------------------------------
// 6. Boogie export.

std::string squeeze(std::string s)
{
    std::erase_if(s, [](unsigned char ch) { return std::isspace(ch) != 0; });
    return s;
}

Verdict criterion6()
{
    std::ifstream in("tests/golden/sequence.bpl", std::ios::binary);
    if (!in) {
        return {false, "golden file tests/golden/sequence.bpl missing"};
    }
    std::stringstream ss;
    ss << in.rdbuf();
    auto golden = ss.str();
    auto text = boogie::export_theory(boogie::standard_theories(), "Sequence").text();
    bool exact = text == golden;

    const std::vector<std::string> lines{
        "type Sequence T = [int] T ;",
        "function Sequence.extended <T> (Sequence T, T)\n    returns (Sequence T);",
        "axiom (forall <T> s: Sequence T, x:T ::{Sequence.extended(s,x)}\n"
        "  Sequence.extended(s, x) == s[Sequence.count(s)+1 := x]);",
        "axiom (forall <T> s: Sequence T, x: T ::\n         {Sequence.count(Sequence.extended(s, x))}\n"
        "  Sequence.count(Sequence.extended(s, x)) ==\n           Sequence.count(s)+1);"};
    std::size_t found = 0;
    for (const auto& l : lines) {
        found += squeeze(golden).find(squeeze(l)) != std::string::npos ? 1 : 0;
    }
    bool type_verbatim = golden.find(lines[0] + "\n") != std::string::npos;
    auto errors = boogie::grammar_check(golden);
    std::ostringstream d;
    d << (exact ? "export matches golden byte-exactly" : "export differs from golden") << "; " << found << "/"
      << lines.size() << " reference lines present" << (type_verbatim ? " (type line verbatim)" : "")
      << "; grammar check " << (errors.empty() ? "clean" : errors.front());
    return {exact && found == lines.size() && type_verbatim && errors.empty(), d.str()};
}

// ---------------------------------------------------------------------------
// 7. Library report.

Verdict criterion7(const contracts::Registry& reg)
{
    auto cfg = small();
    auto report = checkers::classify_library(reg, cfg, run_for(cfg));
    std::size_t tagged = 0;
    std::vector<std::string> names;
    for (const auto& v : report.verdicts) {
        if (!v.post_complete) {
            tagged += v.tag ? 1 : 0;
            names.push_back(v.type + "." + v.feature + " (" + (v.tag ? std::string(contracts::to_string(*v.tag)) : "untagged") + ")");
        }
    }
    std::ostringstream d;
    d.precision(1);
    d << std::fixed << report.incomplete << "/" << report.features << " features incomplete ("
      << 100 * report.incomplete_fraction() << "%), " << tagged << " tagged, " << report.unsound << " unsound, "
      << report.refused.size() << " refused:";
    for (const auto& n : names) {
        d << " " << n;
    }
    bool pass = report.refused.empty() && report.untagged.empty() && tagged == report.incomplete &&
                report.incomplete_fraction() <= 0.10 && report.verdicts.size() == report.features;
    return {pass, d.str()};
}

// ---------------------------------------------------------------------------
// 8. Determinism.

Verdict criterion8(const contracts::Registry& reg)
{
    auto clean = [&] { return autotest::run_campaign(reg, clean_campaign(reg)).json_lines(); };
    bool c3 = fault_json(reg) == fault_json(reg);
    bool c4 = clean() == clean();
    bool c5 = adequacy_json(reg) == adequacy_json(reg);
    std::string detail = std::string("fault campaigns ") + (c3 ? "identical" : "differ") + ", clean campaign " +
                         (c4 ? "identical" : "differs") + ", adequacy reports " + (c5 ? "identical" : "differ");
    return {c3 && c4 && c5, detail};
}

}  // namespace

int main()
{
    auto reg = containers::standard_registry();
    Gate gate;
    gate.run(1, "model algebra", 30, criterion1);
    gate.run(2, "completeness verdicts", 60, [&] { return criterion2(reg); });
    gate.run(3, "merge_right fault experiment", 60, [&] { return criterion3(reg); });
    gate.run(4, "clean library", 300, [&] { return criterion4(reg); });
    gate.run(5, "adequacy", 120, [&] { return criterion5(reg); });
    gate.run(6, "Boogie export", 30, criterion6);
    gate.run(7, "library completeness report", 120, [&] { return criterion7(reg); });
    gate.run(8, "determinism", 600, [&] { return criterion8(reg); });
    return gate.failed() ? 1 : 0;
}
