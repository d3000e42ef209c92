#include "charter/resource_vector.hpp"

#include <sstream>

namespace charter {

ResourceVector ResourceVector::open_on(const std::vector<std::string>& dimensions) {
    ResourceVector v;
    for (const auto& d : dimensions) v.mark_open(d);
    return v;
}

std::int64_t ResourceVector::get(const std::string& dimension) const {
    auto it = entries_.find(dimension);
    return it == entries_.end() ? 0 : it->second;
}

bool ResourceVector::is_open(const std::string& dimension) const {
    auto it = entries_.find(dimension);
    return it != entries_.end() && it->second == kOpen;
}

ResourceVector& ResourceVector::operator+=(const ResourceVector& other) {
    for (const auto& [dimension, quantity] : other.entries_) {
        auto it = entries_.find(dimension);
        if (it == entries_.end()) {
            entries_.emplace(dimension, quantity);
        } else if (it->second == kOpen || quantity == kOpen) {
            it->second = kOpen;
        } else {
            it->second += quantity;
        }
    }
    return *this;
}

ResourceVector ResourceVector::saturating_minus(const ResourceVector& other) const {
    ResourceVector result;
    for (const auto& [dimension, quantity] : entries_) {
        if (quantity == kOpen) continue;
        const std::int64_t rest = quantity - other.get(dimension);
        if (rest > 0) result.set(dimension, rest);
    }
    return result;
}

bool ResourceVector::fits_within(const ResourceVector& budget) const {
    for (const auto& [dimension, quantity] : entries_) {
        if (quantity == 0) continue;
        if (budget.is_open(dimension)) continue;
        if (quantity > budget.get(dimension)) return false;
    }
    return true;
}

bool ResourceVector::all_zero() const {
    for (const auto& [dimension, quantity] : entries_)
        if (quantity != 0) return false;
    return true;
}

bool ResourceVector::all_non_negative() const {
    for (const auto& [dimension, quantity] : entries_)
        if (quantity < 0) return false;
    return true;
}

bool ResourceVector::all_finite() const {
    for (const auto& [dimension, quantity] : entries_)
        if (quantity == kOpen) return false;
    return true;
}

std::string ResourceVector::to_string() const {
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (const auto& [dimension, quantity] : entries_) {
        if (!first) out << ", ";
        first = false;
        out << dimension << ':';
        if (quantity == kOpen)
            out << "open";
        else
            out << quantity;
    }
    out << '}';
    return out.str();
}

} // namespace charter
