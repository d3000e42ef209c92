#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace charter {

/// Named non-negative quantities over resource dimensions. Used for budgets,
/// cumulative consumption and per-call deltas alike. Cost is carried in
/// micro-USD so every dimension stays integral.
///
/// A budget entry may be marked open (no bound on that dimension) with the
/// kOpen sentinel. Open entries only make sense on budgets; consumption and
/// deltas must be finite. Dimensions absent from a budget are bounded at 0,
/// i.e. consuming them at all is a breach.
class ResourceVector {
public:
    using Map = std::map<std::string, std::int64_t>;

    static constexpr std::int64_t kOpen = std::numeric_limits<std::int64_t>::max();

    ResourceVector() = default;
    ResourceVector(std::initializer_list<Map::value_type> init) : entries_(init) {}

    static ResourceVector open_on(const std::vector<std::string>& dimensions);

    /// Quantity on a dimension; absent dimensions read as 0.
    std::int64_t get(const std::string& dimension) const;
    bool is_open(const std::string& dimension) const;
    bool has(const std::string& dimension) const { return entries_.count(dimension) > 0; }

    /// Sets a quantity (or kOpen). Negative values are rejected by validate().
    void set(const std::string& dimension, std::int64_t quantity) { entries_[dimension] = quantity; }
    void mark_open(const std::string& dimension) { entries_[dimension] = kOpen; }

    /// Component-wise addition; open entries absorb (stay open).
    ResourceVector& operator+=(const ResourceVector& other);
    friend ResourceVector operator+(ResourceVector lhs, const ResourceVector& rhs) {
        lhs += rhs;
        return lhs;
    }

    /// Component-wise max(this - other, 0) over this vector's finite entries.
    /// Open entries are skipped; there is nothing left to return on them.
    ResourceVector saturating_minus(const ResourceVector& other) const;

    /// True iff every dimension of this vector fits within `budget`: absent
    /// budget dimensions bound at 0 unless explicitly open.
    bool fits_within(const ResourceVector& budget) const;

    /// True iff all entries are finite and zero.
    bool all_zero() const;
    /// True iff every entry is >= 0 (open counts as valid for budgets).
    bool all_non_negative() const;
    /// True iff no entry carries the open sentinel.
    bool all_finite() const;

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const Map& entries() const { return entries_; }

    bool operator==(const ResourceVector& other) const = default;

    std::string to_string() const;

private:
    Map entries_;
};

// Well-known dimension identifiers. User-defined dimensions are equally valid.
namespace dim {
inline constexpr const char* token = "token";
inline constexpr const char* api_call = "api_call";
inline constexpr const char* iteration = "iteration";
inline constexpr const char* web_search = "web_search";
inline constexpr const char* cpu_second = "cpu_second";
inline constexpr const char* cost_microusd = "cost_microusd";
inline constexpr const char* llm_call = "llm_call";
} // namespace dim

} // namespace charter
