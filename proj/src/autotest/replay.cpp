#include "mbc/autotest/autotest.hpp"

namespace mbc::autotest {

using namespace contracts;

std::string_view to_string(ReplayStatus s)
{
    switch (s) {
    case ReplayStatus::reproduced: return "reproduced";
    case ReplayStatus::not_reproduced: return "fault not reproduced";
    case ReplayStatus::different: return "different violation";
    }
    return "?";
}

ReplayResult replay(const Registry& registry, const FaultReport& report, const ReplayOptions& options)
{
    if (report.trace.empty()) {
        throw ReplayError("empty trace");
    }
    RunContext run;
    run.faults = options.faults ? *options.faults : FaultSwitch({report.faults.begin(), report.faults.end()});
    run.filter = options.filter ? *options.filter : report.filter;
    run.universe = report.universe;
    run.seed = report.violation.seed;

    std::map<std::size_t, ObjectPtr> slots;
    auto slot = [&](std::size_t id) -> const ObjectPtr& {
        auto it = slots.find(id);
        if (it == slots.end()) {
            throw ReplayError("trace refers to slot " + std::to_string(id) + " before creating it");
        }
        return it->second;
    };

    ReplayResult result;
    for (std::size_t n = 0; n < report.trace.size(); ++n) {
        const auto& c = report.trace[n];
        bool last = n + 1 == report.trace.size();
        const ClassSpec* spec = registry.find(c.type);
        const Feature* f = spec != nullptr ? spec->find(c.feature) : nullptr;
        if (f == nullptr || f->args.size() != c.args.size()) {
            throw ReplayError("trace no longer valid: " + c.type + "." + c.feature + " is not registered as recorded");
        }
        std::vector<Argument> args;
        for (const auto& a : c.args) {
            if (a.value) {
                args.emplace_back(*a.value);
            }
            else if (a.slot) {
                args.emplace_back(slot(*a.slot));
            }
            else {
                throw ReplayError("trace argument without value or slot");
            }
        }
        ObjectPtr target = c.target ? slot(*c.target) : ObjectPtr{};
        CallOutcome out;
        try {
            out = checked_call(registry, *spec, *f, target, args, run);
        }
        catch (const std::logic_error& e) {
            throw ReplayError(std::string("trace no longer valid: ") + e.what());
        }
        ++result.calls;
        if (out.status == CallStatus::rejected) {
            throw ReplayError("trace no longer valid: precondition of " + c.type + "." + c.feature +
                              " rejects step " + std::to_string(n));
        }
        if (out.status == CallStatus::violated) {
            result.violation = out.violation;
            if (last && out.violation->same_fault(report.violation)) {
                result.status = ReplayStatus::reproduced;
                result.message = "reproduced " + out.violation->clause;
            }
            else {
                result.status = ReplayStatus::different;
                result.message = "step " + std::to_string(n) + " violated " + out.violation->clause;
            }
            return result;
        }
        if (c.creates) {
            auto* o = std::get_if<ObjectPtr>(&out.result);
            if (o == nullptr || !*o) {
                throw ReplayError("trace expects step " + std::to_string(n) + " to create an object");
            }
            slots[*c.creates] = *o;
        }
    }
    result.status = ReplayStatus::not_reproduced;
    result.message = "fault not reproduced";
    return result;
}

}  // namespace mbc::autotest
