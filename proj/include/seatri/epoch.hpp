#pragma once

#include <cstdint>
#include <string>

namespace seatri {

// Months are counted on an absolute axis: year*12 + (month-1). Epoch labels
// are "YYYY-MM".
std::int64_t month_from_label(const std::string& label);
std::string label_from_month(std::int64_t month);

// Contiguous monthly axis; epoch indices are 0-based ranks on it.
struct EpochAxis {
    std::int64_t first_month{};
    std::int64_t count{};

    bool contains_month(std::int64_t month) const {
        return month >= first_month && month < first_month + count;
    }
    std::int64_t index_of_month(std::int64_t month) const; // throws when outside the axis
    std::int64_t month_of(std::int64_t index) const;       // throws when index out of range
    std::string label_of(std::int64_t index) const { return label_from_month(month_of(index)); }
};

} // namespace seatri
