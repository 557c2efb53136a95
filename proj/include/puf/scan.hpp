#pragma once

// Batch analysis behind the command-line tool: per-field records, the
// parallel range scanner, CSV/JSON serialization, the unit cache file and
// the family verification report.

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "puf/family.hpp"
#include "puf/voronoi.hpp"

namespace puf {

std::vector<long> squarefree_sieve(long lo, long hi);

struct ClassSummary {
    PrimitivePair pair;
    Rat mu;
    std::size_t min_vector_count = 0;

    friend bool operator==(const ClassSummary&, const ClassSummary&) = default;
};

struct ScanRecord {
    long d = 0;
    int n_K = 0;
    Tag tag = Tag::Unclassified;
    Rat unit_alpha;
    Rat unit_beta;
    int norm_sign = 1;
    std::vector<ClassSummary> classes;
    std::optional<int> predicted_n_K;
    std::optional<bool> agree;

    friend bool operator==(const ScanRecord&, const ScanRecord&) = default;
};

// Full analysis of one field: unit, classification, walk.
struct Analysis {
    FieldDesc field;
    FundamentalUnit unit;
    DClass dclass;
    WalkResult walk;
    std::optional<int> predicted_n_K;
};

Analysis analyze(long d);
ScanRecord to_record(const Analysis& a);

struct ScanOptions {
    long lo = 2;
    long hi = 2;
    std::set<int> mod4{1, 2, 3};
    int jobs = 1;
};

// Ascending d, independent of the number of jobs.
std::vector<ScanRecord> run_scan(const ScanOptions& opts);

struct ScanSummary {
    std::map<int, long> count_by_n_K;
    std::vector<long> disagreements;
};

ScanSummary summarize(const std::vector<ScanRecord>& records);

// Columns: d,nK,tag,alpha,beta,norm,predicted_nK,agree
std::string scan_to_csv(const std::vector<ScanRecord>& records);
std::vector<ScanRecord> scan_from_csv(std::string_view text);

nlohmann::json scan_to_json(const std::vector<ScanRecord>& records);
std::vector<ScanRecord> scan_from_json(const nlohmann::json& j);

// Detailed single-field report; min vectors as basis coordinate pairs.
nlohmann::json analysis_to_json(const Analysis& a);
std::string analysis_to_text(const Analysis& a);

// "d alpha beta norm" per line. Loaded entries are inserted into
// UnitCache; a line whose norm does not match is a UsageError.
void load_unit_cache(const std::filesystem::path& path);
void save_unit_cache(const std::filesystem::path& path);

struct TheoremCheck {
    FamilyParams params;
    int n_K = 0;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

struct TheoremReport {
    std::vector<TheoremCheck> checks;
    std::vector<RejectedCandidate> rejected;

    bool ok() const;
    bool vacuous() const { return checks.empty(); }
};

// For every accepted family member: n_K = 3, walk classes are exactly
// {a1, a2, a3} up to equivalence, and mu / M agree with the closed forms.
TheoremReport verify_theorem(long m_max, long k_max, const Int& d_cap);

nlohmann::json theorem_report_to_json(const TheoremReport& r);

} // namespace puf
