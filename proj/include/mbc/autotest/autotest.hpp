// Contract-based random testing: build objects by random constructor and
// command calls, let preconditions filter inputs, report contract violations
// together with a replayable trace.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mbc/contracts/engine.hpp"

namespace mbc::autotest {

using contracts::Argument;
using contracts::ClauseFilter;
using contracts::ContractViolation;
using contracts::FaultSwitch;
using contracts::Feature;
using contracts::ObjectPtr;
using contracts::Registry;
using model::Value;

struct TestBudget {
    std::uint64_t max_calls = 10000;
    std::size_t max_objects = 8;  ///< live objects per target type
    double time_limit = 0;        ///< seconds; 0 means none
    std::uint64_t seed = 0;
};

/// Where generated arguments come from.
struct ArgumentPools {
    std::size_t universe = 4;  ///< element tokens a, b, c, d
    std::int64_t min_int = -1;
    std::int64_t max_int = 4;
    std::size_t max_path = 3;
};

struct CampaignConfig {
    std::vector<std::string> targets;
    TestBudget budget;
    FaultSwitch faults;
    ClauseFilter filter = ClauseFilter::all;
    ArgumentPools pools;
    std::size_t workers = 1;
};

/// An argument in a trace: a value, or the object in a trace slot.
struct TraceArg {
    std::optional<Value> value;
    std::optional<std::size_t> slot;
};

struct TraceCall {
    std::string type;  ///< specification the call is checked against
    std::string feature;
    std::optional<std::size_t> target;
    std::vector<TraceArg> args;
    std::optional<std::size_t> creates;  ///< slot receiving a created object

    nlohmann::ordered_json to_json() const;
    static TraceCall from_json(const nlohmann::ordered_json& j);
};

inline constexpr std::string_view fault_report_schema = "mbc.fault-report/1";
inline constexpr std::string_view stats_schema = "mbc.campaign-stats/1";

struct FaultReport {
    ContractViolation violation;
    /// Constructor and feature calls that lead to the violation; the last
    /// call is the violating one.
    std::vector<TraceCall> trace;
    std::vector<std::string> faults;
    ClauseFilter filter = ClauseFilter::all;
    std::size_t universe = 4;
    std::size_t worker = 0;
    std::uint64_t step = 0;  ///< call number within the worker

    nlohmann::ordered_json to_json() const;
    static FaultReport from_json(const nlohmann::ordered_json& j);
};

struct CampaignStats {
    std::uint64_t attempted = 0;
    std::uint64_t rejected = 0;  ///< filtered by preconditions, not faults
    std::uint64_t passed = 0;
    std::uint64_t violations = 0;
    std::uint64_t unreproduced = 0;  ///< violations whose trace failed self-validation
    std::map<std::string, std::uint64_t> by_clause;
    std::map<std::string, std::uint64_t> by_kind;
    double elapsed = 0;  ///< seconds; not serialized

    void merge(const CampaignStats& other);
};

struct CampaignResult {
    CampaignConfig config;
    CampaignStats stats;
    std::vector<FaultReport> reports;

    nlohmann::ordered_json stats_json() const;
    /// Statistics line followed by one line per report.
    std::string json_lines() const;
};

/// Throws contracts::UnknownType for unregistered targets.
CampaignResult run_campaign(const Registry& registry, const CampaignConfig& cfg);

/// Draws a value for every non-object argument and an object from
/// `objects` for every object argument. Contract-blind: preconditions decide
/// afterwards. `chosen` receives the index into `objects` per object argument.
std::vector<Argument> generate_arguments(const Feature& f, std::mt19937_64& rng, const ArgumentPools& pools,
                                         const std::vector<ObjectPtr>& objects,
                                         std::vector<std::size_t>* chosen = nullptr);

class ReplayError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ReplayStatus { reproduced, not_reproduced, different };

std::string_view to_string(ReplayStatus s);

struct ReplayOptions {
    std::optional<FaultSwitch> faults;   ///< default: the report's faults
    std::optional<ClauseFilter> filter;  ///< default: the report's filter
};

struct ReplayResult {
    ReplayStatus status = ReplayStatus::not_reproduced;
    std::optional<ContractViolation> violation;  ///< first violation met, if any
    std::size_t calls = 0;
    std::string message;
};

/// Re-executes the trace with checking on. Throws ReplayError when the trace
/// is empty or no longer executes (unknown feature, rejected step, bad slot).
ReplayResult replay(const Registry& registry, const FaultReport& report, const ReplayOptions& options = {});

}  // namespace mbc::autotest
