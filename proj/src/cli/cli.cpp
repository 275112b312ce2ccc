#include "mbc/cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>

#include "mbc/autotest/autotest.hpp"
#include "mbc/boogie/boogie.hpp"
#include "mbc/checkers/checkers.hpp"
#include "mbc/containers/containers.hpp"

namespace mbc::cli {

namespace {

using contracts::Registry;

struct Options {
    std::vector<std::string> targets;
    bool all = false;
    checkers::EnumerationConfig enumeration;
    autotest::TestBudget budget;
    std::size_t pool_universe = 4;
    std::vector<std::string> inject;
    std::string filter = "all";
    std::size_t workers = 1;
    std::string out;
    std::string format = "text";
    std::vector<std::string> hide;
    std::string projection = "full";
    std::string sort;
};

struct Usage {
    std::string message;
};

void add_targets(CLI::App* sub, Options& o)
{
    auto* t = sub->add_option("--target", o.targets, "Container type to work on (repeatable)");
    auto* a = sub->add_flag("--all", o.all, "Every registered container type");
    t->excludes(a);
}

void add_enumeration(CLI::App* sub, Options& o)
{
    sub->add_option("--universe", o.enumeration.universe, "Distinct element tokens")->capture_default_str()
        ->check(CLI::Range(1, 26));
    sub->add_option("--max-size", o.enumeration.max_size, "Largest container measure enumerated")
        ->capture_default_str();
    sub->add_option("--max-int", o.enumeration.max_int, "Largest integer argument")->capture_default_str();
    sub->add_option("--depth", o.enumeration.depth, "Command sequence depth")->capture_default_str();
    sub->add_option("--limit", o.enumeration.limit, "Refuse state spaces or per-feature checks estimated above this")
        ->capture_default_str();
}

void add_output(CLI::App* sub, Options& o)
{
    sub->add_option("--out", o.out, "Write the result to this file instead of stdout");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
}

void add_faults(CLI::App* sub, Options& o)
{
    sub->add_option("--inject", o.inject, "Enable a seeded fault (repeatable)")
        ->check(CLI::IsMember(containers::fault_names()));
}

std::vector<std::string> resolve_targets(const Registry& registry, const Options& o, bool default_all)
{
    if (o.all || (o.targets.empty() && default_all)) {
        return registry.names();
    }
    if (o.targets.empty()) {
        throw Usage{"give --target NAME or --all"};
    }
    for (const auto& t : o.targets) {
        if (registry.find(t) == nullptr) {
            std::string known;
            for (const auto& n : registry.names()) {
                known += (known.empty() ? "" : ", ") + n;
            }
            throw Usage{"unknown target '" + t + "' (known: " + known + ")"};
        }
    }
    return o.targets;
}

void emit(const Options& o, const std::string& text, std::ostream& out)
{
    if (o.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
    f << text;
    f.close();
    if (!f) {
        throw Usage{"cannot write " + o.out};
    }
}

contracts::RunContext run_context(const Options& o)
{
    contracts::RunContext run;
    run.faults = contracts::FaultSwitch({o.inject.begin(), o.inject.end()});
    run.universe = o.enumeration.universe;
    run.seed = o.budget.seed;
    return run;
}

int cmd_test(const Registry& registry, const Options& o, std::ostream& out)
{
    autotest::CampaignConfig cfg;
    cfg.targets = resolve_targets(registry, o, false);
    cfg.budget = o.budget;
    cfg.faults = contracts::FaultSwitch({o.inject.begin(), o.inject.end()});
    cfg.filter = *contracts::parse_clause_filter(o.filter);
    cfg.pools.universe = o.pool_universe;
    cfg.workers = o.workers;
    auto result = autotest::run_campaign(registry, cfg);

    std::string text;
    if (o.format == "json") {
        text = result.json_lines();
    }
    else {
        const auto& s = result.stats;
        text += "calls: " + std::to_string(s.attempted) + " attempted, " + std::to_string(s.rejected) +
                " rejected by preconditions, " + std::to_string(s.passed) + " passed, " +
                std::to_string(s.violations) + " violations\n";
        if (s.unreproduced != 0) {
            text += "unreproduced violations (not reported): " + std::to_string(s.unreproduced) + "\n";
        }
        for (const auto& [clause, n] : s.by_clause) {
            text += "  " + clause + ": " + std::to_string(n) + "\n";
        }
        std::size_t k = 0;
        for (const auto& r : result.reports) {
            const auto& v = r.violation;
            text += "violation " + std::to_string(++k) + ": " + v.type + "." + v.feature + " " +
                    std::string(contracts::to_string(v.kind)) + " " + v.clause + " after " +
                    std::to_string(r.trace.size()) + " calls (worker " + std::to_string(r.worker) + ", step " +
                    std::to_string(r.step) + ")\n";
            if (!v.detail.empty()) {
                text += "  " + v.detail + "\n";
            }
        }
    }
    emit(o, text, out);
    return result.stats.violations == 0 ? exit_ok : exit_findings;
}

int library_report(const Registry& registry, const Options& o, bool default_all, std::ostream& out,
                   std::ostream& err)
{
    auto types = resolve_targets(registry, o, default_all);
    auto report = checkers::classify_library(registry, o.enumeration, run_context(o), types);
    emit(o, o.format == "json" ? report.to_json().dump(2) + "\n" : report.table(), out);
    if (!report.refused.empty()) {
        err << "mbc: " << report.refused.size() << " enumeration(s) refused; lower the bounds or raise --limit\n";
        return exit_usage;
    }
    return report.ok() ? exit_ok : exit_findings;
}

int cmd_adequacy(const Registry& registry, const Options& o, std::ostream& out)
{
    auto types = resolve_targets(registry, o, false);
    checkers::AdequacyConfig acfg;
    acfg.depth = o.enumeration.depth;
    acfg.hidden = {o.hide.begin(), o.hide.end()};
    acfg.projection = o.projection;
    for (const auto& h : o.hide) {
        for (const auto& t : types) {
            if (registry.get(t).find(h) == nullptr) {
                throw Usage{"--hide " + h + ": " + t + " has no such feature"};
            }
        }
    }

    bool adequate = true;
    std::string text;
    nlohmann::ordered_json all = nlohmann::ordered_json::array();
    for (const auto& t : types) {
        auto v = checkers::check_observational_adequacy(registry, t, o.enumeration, acfg, run_context(o));
        adequate = adequate && v.adequate();
        all.push_back(v.to_json());
        std::string hidden;
        for (const auto& h : v.hidden) {
            hidden += (hidden.empty() ? "" : ", ") + h;
        }
        text += t + " under model " + v.projection + ", up to depth " + std::to_string(v.depth) +
                (hidden.empty() ? "" : ", hidden: " + hidden) + "\n";
        text += "  states " + std::to_string(v.objects) + ", pairs " + std::to_string(v.pairs) + "\n";
        text += std::string("  equal models are indistinguishable: ") + (v.coarse_ok ? "yes" : "no") + "\n";
        text += std::string("  different models are distinguishable: ") + (v.minimal_ok ? "yes" : "no") + "\n";
        for (const auto& w : v.witnesses) {
            text += "  witness (" + std::string(checkers::to_string(w.direction)) + "): " + w.first_text + " vs " +
                    w.second_text;
            if (!w.observation.empty()) {
                text += ", observed by " + w.observation;
            }
            text += "\n";
        }
        text += std::string("  adequate: ") + (v.adequate() ? "yes" : "no") + "\n";
    }
    emit(o, o.format == "json" ? (all.size() == 1 ? all[0] : all).dump(2) + "\n" : text, out);
    return adequate ? exit_ok : exit_findings;
}

int cmd_export_boogie(const Options& o, std::ostream& out)
{
    auto theories = boogie::standard_theories();
    if (!o.sort.empty()) {
        emit(o, boogie::export_theory(theories, o.sort).text(), out);
    }
    else if (o.out.empty()) {
        out << boogie::export_all(theories);
    }
    else {
        boogie::export_all(theories, o.out);
    }
    return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Model-based contracts: runtime checking, random testing, completeness and adequacy checks"};
    app.name("mbc");
    app.require_subcommand(1);
    Options o;

    auto* test = app.add_subcommand("test", "Random contract-based testing");
    add_targets(test, o);
    test->add_option("--calls", o.budget.max_calls, "Calls across all workers")->capture_default_str();
    test->add_option("--seed", o.budget.seed, "Random seed")->envname("MBC_SEED")->capture_default_str();
    test->add_option("--max-objects", o.budget.max_objects, "Objects kept per target")->capture_default_str();
    test->add_option("--time-limit", o.budget.time_limit, "Seconds; 0 means no limit")->capture_default_str();
    test->add_option("--universe", o.pool_universe, "Distinct element tokens")->capture_default_str()
        ->check(CLI::Range(1, 26));
    test->add_option("--workers", o.workers, "Parallel workers")->check(CLI::Range(1, 256))->capture_default_str();
    test->add_option("--filter", o.filter, "Clauses checked")
        ->check(CLI::IsMember({"all", "classic-only", "model-only"}))->capture_default_str();
    add_faults(test, o);
    add_output(test, o);

    auto* complete = app.add_subcommand("complete", "Bounded completeness and soundness check");
    add_targets(complete, o);
    add_enumeration(complete, o);
    add_faults(complete, o);
    add_output(complete, o);

    auto* report = app.add_subcommand("report", "Completeness report over the library");
    add_targets(report, o);
    add_enumeration(report, o);
    add_faults(report, o);
    add_output(report, o);

    auto* adequacy = app.add_subcommand("adequacy", "Observational adequacy of the model");
    add_targets(adequacy, o);
    add_enumeration(adequacy, o);
    adequacy->add_option("--hide", o.hide, "Remove a feature from the interface (repeatable)");
    adequacy->add_option("--projection", o.projection, "Model projection")
        ->check(CLI::IsMember({"full", "count_last", "count_first"}))->capture_default_str();
    add_output(adequacy, o);

    auto* boogie_cmd = app.add_subcommand("export-boogie", "Boogie theories for the model sorts");
    boogie_cmd->add_option("--out", o.out, "Output file (default stdout)");
    boogie_cmd->add_option("--sort", o.sort, "Export one sort only");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        auto registry = containers::standard_registry();
        if (test->parsed()) {
            return cmd_test(registry, o, out);
        }
        if (complete->parsed()) {
            return library_report(registry, o, false, out, err);
        }
        if (report->parsed()) {
            return library_report(registry, o, true, out, err);
        }
        if (adequacy->parsed()) {
            return cmd_adequacy(registry, o, out);
        }
        return cmd_export_boogie(o, out);
    }
    catch (const Usage& u) {
        err << "mbc: " << u.message << "\n";
    }
    catch (const checkers::EnumerationRefused& e) {
        err << "mbc: " << e.what() << "\n";
    }
    catch (const contracts::UnknownType& e) {
        err << "mbc: " << e.what() << "\n";
    }
    catch (const contracts::UsageError& e) {
        err << "mbc: " << e.what() << "\n";
    }
    catch (const boogie::ExportError& e) {
        err << "mbc: " << e.what() << "\n";
    }
    return exit_usage;
}

}  // namespace mbc::cli
