#pragma once

/**
 * @file family.hpp
 * @brief Closed-form perfect forms and the families of fields where the
 * class count is known in advance.
 *
 * Write d = n^2 + r with -n < r <= n. For d = 2, 3 mod 4 and r != +-1 the
 * forms
 *
 *     a1 = 1/2 + (2n^2 + r - 1) / (4n(n^2 + r)) * sqrt(d),   a2 = conj(a1)
 *
 * are perfect with mu = 1. When the fundamental unit alpha + beta sqrt(d)
 * has beta = m(m+2), m odd >= 3, the residue of alpha mod beta^2 decides
 * between n_K = 2 (alpha = +-1) and n_K = 3 (alpha = +-((m-1)/2 (m+2)^2 + 1)),
 * the third class being a3 = alpha + beta sqrt(d) itself.
 *
 * Second-case remark: the reduction of a3 for alpha = k beta^2 - c uses the
 * same expressions as the alpha = k beta^2 + c case (the epsilon there is
 * d alpha + l^2 alpha - 2 l d beta); they are implemented once, with the
 * sign delta.
 */

#include <optional>
#include <string>
#include <vector>

#include "puf/quadfield.hpp"
#include "puf/units.hpp"

namespace puf {

struct NRDecomp {
    Int n; // > 0
    Int r; // -n < r <= n
};

NRDecomp nr_decompose(const Int& d);

enum class Tag { T1, T2, T3, T4, RdBullet1, Bullet2, Unclassified };

std::string to_string(Tag t);
Tag parse_tag(const std::string& s); // UsageError on unknown names

struct TheoremParams {
    Int m;
    Int k;
    int delta; // +1 or -1
};

struct DClass {
    Tag tag = Tag::Unclassified;
    std::optional<TheoremParams> params; // Bullet2 (and RdBullet1, informational)
    std::optional<Int> n;                // witness n for T1..T4
};

// T1: d = n^2 + 1, n odd    T2: d = n^2 - 1, n even
// T3: d = n^2 + 4, n odd    T4: d = n^2 - 4, n > 3 odd
std::optional<DClass> classify_T(const Int& d);

// NotApplicable for d = 1 mod 4.
DClass detect_theorem_case(const FieldDesc& field, const FundamentalUnit& unit);

// classify_T first, then (for d = 2,3 mod 4) detect_theorem_case.
DClass classify(const FieldDesc& field, const FundamentalUnit& unit);

// 1 for T1..T4, 2 for RdBullet1, 3 for Bullet2.
std::optional<int> predicted_class_count(Tag t);

struct A1A2 {
    UnaryForm a1;
    UnaryForm a2;
};

// HypothesisViolation for r = +-1, NotApplicable for d = 1 mod 4.
A1A2 construct_a1_a2(const FieldDesc& field);

// alpha + beta sqrt(d); requires the Bullet2 hypotheses.
UnaryForm construct_a3(const FieldDesc& field, const FundamentalUnit& unit);

enum class Which { A1, A2, A3 };

// Sorted like MinData::vectors so the two can be compared directly.
std::vector<FieldElem> predicted_minimal_set(Which which, const FieldDesc& field,
                                             const std::optional<FundamentalUnit>& unit);

// mu(a3) = 2 (k((m+1)^2 + 1) + delta (m+1)/2)
Int predicted_mu_a3(const TheoremParams& p);

struct FamilyParams {
    Int m;
    Int k;
    int delta;
    Int l;
    Int d;
    Int alpha;
    Int beta;
};

// Builds the (m, k, delta) member without any acceptance checks.
FamilyParams family_member(const Int& m, const Int& k, int delta);

struct RejectedCandidate {
    FamilyParams params;
    std::string reason;
};

struct FamilyReport {
    std::vector<FamilyParams> accepted;
    std::vector<RejectedCandidate> rejected;
};

// All members with m odd in [3, m_max], k <= k_max (k >= 0 for delta = +1,
// k >= 1 for delta = -1), in lexicographic (m, k, delta) order. A member is
// accepted when d <= d_cap is squarefree, d = 2,3 mod 4, r != +-1 and
// alpha + beta sqrt(d) is the fundamental unit.
FamilyReport generate_family(long m_max, long k_max, const Int& d_cap);

} // namespace puf
