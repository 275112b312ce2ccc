#include <cstdio>

#include "mbc/checkers/checkers.hpp"

namespace mbc::checkers {

using namespace contracts;

double LibraryReport::incomplete_fraction() const
{
    return features == 0 ? 0.0 : static_cast<double>(incomplete) / static_cast<double>(features);
}

bool LibraryReport::ok() const
{
    return untagged.empty() && unsound == 0 && refused.empty();
}

nlohmann::ordered_json LibraryReport::to_json() const
{
    nlohmann::ordered_json j;
    j["schema"] = report_schema;
    j["config"] = cfg.to_json();
    j["features"] = features;
    j["incomplete"] = incomplete;
    j["unsound"] = unsound;
    j["incomplete_fraction"] = incomplete_fraction();
    j["untagged"] = untagged;
    j["tagged_complete"] = tagged_complete;
    j["refused"] = refused;
    j["ok"] = ok();
    j["verdicts"] = nlohmann::ordered_json::array();
    for (const auto& v : verdicts) {
        j["verdicts"].push_back(v.to_json());
    }
    return j;
}

LibraryReport LibraryReport::from_json(const nlohmann::ordered_json& j)
{
    if (j.value("schema", "") != report_schema) {
        throw UsageError("not a completeness report");
    }
    LibraryReport r;
    const auto& c = j.at("config");
    r.cfg.universe = c.at("universe").get<std::size_t>();
    r.cfg.max_size = c.at("max_size").get<std::size_t>();
    r.cfg.max_int = c.at("max_int").get<std::int64_t>();
    r.cfg.depth = c.at("depth").get<std::size_t>();
    r.cfg.limit = c.at("limit").get<double>();
    r.features = j.at("features").get<std::size_t>();
    r.incomplete = j.at("incomplete").get<std::size_t>();
    r.unsound = j.at("unsound").get<std::size_t>();
    r.untagged = j.at("untagged").get<std::vector<std::string>>();
    r.tagged_complete = j.at("tagged_complete").get<std::vector<std::string>>();
    r.refused = j.at("refused").get<std::vector<std::string>>();
    for (const auto& v : j.at("verdicts")) {
        r.verdicts.push_back(CheckVerdict::from_json(v));
    }
    return r;
}

namespace {

std::string pad(std::string s, std::size_t width)
{
    // Column widths count code points, not bytes.
    std::size_t cps = 0;
    for (unsigned char ch : s) {
        cps += (ch & 0xC0) != 0x80;
    }
    if (cps < width) {
        s.append(width - cps, ' ');
    }
    return s;
}

std::string yes_no(bool b)
{
    return b ? "yes" : "NO";
}

}  // namespace

std::string LibraryReport::table() const
{
    std::string out;
    out += pad("feature", 28) + pad("kind", 23) + pad("pre-sound", 11) + pad("post-sound", 12) +
           pad("complete", 10) + pad("tag", 20) + "states\n";
    for (const auto& v : verdicts) {
        out += pad(v.type + "." + v.feature, 28) + pad(std::string(contracts::to_string(v.kind)), 23) +
               pad(yes_no(v.pre_sound), 11) + pad(yes_no(v.post_sound), 12) + pad(yes_no(v.post_complete), 10) +
               pad(v.tag ? std::string(contracts::to_string(*v.tag)) : "-", 20) + std::to_string(v.states_checked) +
               "\n";
    }
    char pct[32];
    std::snprintf(pct, sizeof pct, "%.1f%%", 100.0 * incomplete_fraction());
    out += "\n";
    out += "Incomplete postconditions: " + std::to_string(incomplete) + " of " + std::to_string(features) +
           " public features (" + pct + ")\n";
    out += "Unsound contracts: " + std::to_string(unsound) + "\n";
    out += "Bounds: universe " + std::to_string(cfg.universe) + ", max size " + std::to_string(cfg.max_size) +
           ", integers -" + std::to_string(cfg.max_int) + ".." + std::to_string(cfg.max_int) + "\n";
    for (const auto& u : untagged) {
        out += "error: " + u + " is incomplete without an incompleteness cause\n";
    }
    for (const auto& t : tagged_complete) {
        out += "note: " + t + " is tagged incomplete but was found complete within bounds\n";
    }
    for (const auto& r : refused) {
        out += "error: " + r + "\n";
    }
    return out;
}

LibraryReport classify_library(const Registry& registry, const EnumerationConfig& cfg, const RunContext& run,
                               const std::vector<std::string>& types)
{
    LibraryReport report;
    report.cfg = cfg;
    Checker checker(registry, cfg, run);
    const auto& names = types.empty() ? registry.names() : types;
    for (const auto& type : names) {
        const auto& spec = registry.get(type);
        try {
            checker.space(type);
        }
        catch (const EnumerationRefused& e) {
            report.refused.push_back(e.what());
            continue;
        }
        for (const auto& f : spec.features) {
            if (f.kind == FeatureKind::model_query) {
                continue;
            }
            CheckVerdict v;
            try {
                v = checker.check_feature(type, f.name);
            }
            catch (const EnumerationRefused& e) {
                report.refused.push_back(e.what());
                continue;
            }
            std::string name = type + "." + f.name;
            ++report.features;
            if (!v.post_complete) {
                ++report.incomplete;
                if (!v.tag) {
                    report.untagged.push_back(name);
                }
            }
            else if (v.tag) {
                report.tagged_complete.push_back(name);
            }
            if (!v.pre_sound || !v.post_sound) {
                ++report.unsound;
            }
            report.verdicts.push_back(std::move(v));
        }
    }
    return report;
}

}  // namespace mbc::checkers
