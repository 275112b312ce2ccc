// Boogie theories for the model sorts, driven by `mapped_to` annotations.
//
// Whitespace policy (fixed so golden files stay meaningful): one space
// around comparison and logical operators, `+1`/`-1` offsets written tight
// as in the hand-written theory, two-space indent for axiom bodies, one
// blank line between sorts.

#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mbc::boogie {

class ExportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Theory of one model operation.
struct OperationTheory {
    std::string operation;  ///< model_math operation name, e.g. "seq_extended"
    std::string feature;    ///< feature signature on the model class, e.g. "extended (x: G)"
    std::string mapped_to;  ///< target symbol, e.g. "Sequence.extended(Current, x)"
    std::vector<std::string> functions;
    std::vector<std::string> axioms;
};

struct SortTheory {
    std::string sort;       ///< Boogie type name, e.g. "Sequence"
    std::string mapped_to;  ///< e.g. "Sequence G"
    std::string type_decl;
    std::vector<OperationTheory> operations;
};

struct TheoryDoc {
    std::string sort;
    std::vector<std::string> types;
    std::vector<std::string> functions;
    std::vector<std::string> axioms;  ///< may include `//` comment lines

    std::string text() const;
};

class TheoryRegistry {
public:
    void add(SortTheory theory);
    const SortTheory* find(std::string_view sort) const;
    /// Alphabetical.
    std::vector<std::string> sorts() const;
    bool empty() const { return theories_.empty(); }

private:
    std::vector<SortTheory> theories_;
};

/// Sequence, Set, Bag and Map theories.
TheoryRegistry standard_theories();

/// Throws ExportError for unknown sorts or operations without annotation.
TheoryDoc export_theory(const TheoryRegistry& registry, std::string_view sort);

inline constexpr std::string_view file_header = "// Boogie theories for model sorts (generated by mbc export-boogie)\n";

/// Header comment plus every theory, sorts in alphabetical order.
std::string export_all(const TheoryRegistry& registry);
void export_all(const TheoryRegistry& registry, const std::filesystem::path& out);

struct NotExported {
    std::string_view operation;
    std::string_view reason;
};

/// Model operations deliberately left out of the theories.
std::span<const NotExported> not_exported();

/// Operations of the model library that are neither exported nor listed as
/// not exported. Empty when coverage is complete.
std::vector<std::string> coverage_gaps(const TheoryRegistry& registry);

/// Parses the Boogie subset the exporter emits (type, function and axiom
/// declarations with quantified expressions). Returns error messages;
/// empty means the text parses.
std::vector<std::string> grammar_check(std::string_view text);

}  // namespace mbc::boogie
