#pragma once

// Continued fractions and fundamental units of real quadratic fields.

#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "puf/quadfield.hpp"

namespace puf {

struct CFExpansion {
    Int d;
    Int a0;
    std::vector<Int> period; // last element is 2*a0
};

// Periodic continued fraction of sqrt(d) via the integer (P, Q) recurrence.
// DomainError for perfect squares.
CFExpansion cf_sqrt(const Int& d);

struct FundamentalUnit {
    FieldElem value; // > 1 under the real embedding
    int norm_sign;   // +1 or -1

    friend bool operator==(const FundamentalUnit& x, const FundamentalUnit& y)
    {
        return x.value == y.value && x.norm_sign == y.norm_sign;
    }
};

// Memoized per d; safe to call from several threads.
FundamentalUnit fundamental_unit(const FieldDesc& field);

// Uncached computation behind fundamental_unit().
FundamentalUnit compute_fundamental_unit(const FieldDesc& field);

// eps^2: totally positive, norm +1, generates the action on forms.
FieldElem unit_square(const FundamentalUnit& u);

// Exhaustive search for the unit with the smallest sqrt(d)-coefficient
// b in (0, bound]. Independent of the continued fraction route.
// Throws SearchExhausted if no unit has b <= bound.
FundamentalUnit unit_brute_oracle(const FieldDesc& field, const Int& bound);

// Process-wide memo table used by fundamental_unit(). Entries may be
// preloaded (e.g. from an on-disk cache); preloaded values are trusted.
class UnitCache {
public:
    static UnitCache& instance();

    std::optional<FundamentalUnit> find(const Int& d) const;
    void insert(const Int& d, const FundamentalUnit& u);
    std::map<Int, FundamentalUnit> snapshot() const;
    void clear();

private:
    mutable std::mutex mutex_;
    std::map<Int, FundamentalUnit> table_;
};

} // namespace puf
