#include "seatri/epoch.hpp"

#include <charconv>
#include <stdexcept>

namespace seatri {

std::int64_t month_from_label(const std::string& label) {
    if (label.size() != 7 || label[4] != '-')
        throw std::invalid_argument("epoch label must be YYYY-MM: '" + label + "'");
    std::int64_t year = 0;
    std::int64_t month = 0;
    auto r1 = std::from_chars(label.data(), label.data() + 4, year);
    auto r2 = std::from_chars(label.data() + 5, label.data() + 7, month);
    if (r1.ec != std::errc{} || r1.ptr != label.data() + 4 || r2.ec != std::errc{} ||
        r2.ptr != label.data() + 7)
        throw std::invalid_argument("epoch label must be YYYY-MM: '" + label + "'");
    if (month < 1 || month > 12)
        throw std::invalid_argument("epoch label month out of range: '" + label + "'");
    return year * 12 + (month - 1);
}

std::string label_from_month(std::int64_t month) {
    if (month < 0) throw std::invalid_argument("negative absolute month");
    const std::int64_t year = month / 12;
    const std::int64_t m = month % 12 + 1;
    if (year > 9999) throw std::invalid_argument("absolute month beyond year 9999");
    std::string out(7, '0');
    out[4] = '-';
    out[0] = static_cast<char>('0' + year / 1000 % 10);
    out[1] = static_cast<char>('0' + year / 100 % 10);
    out[2] = static_cast<char>('0' + year / 10 % 10);
    out[3] = static_cast<char>('0' + year % 10);
    out[5] = static_cast<char>('0' + m / 10);
    out[6] = static_cast<char>('0' + m % 10);
    return out;
}

std::int64_t EpochAxis::index_of_month(std::int64_t month) const {
    if (!contains_month(month))
        throw std::out_of_range("month " + label_from_month(month) + " outside epoch axis " +
                                label_from_month(first_month) + ".." +
                                label_from_month(first_month + count - 1));
    return month - first_month;
}

std::int64_t EpochAxis::month_of(std::int64_t index) const {
    if (index < 0 || index >= count) throw std::out_of_range("epoch index out of range");
    return first_month + index;
}

} // namespace seatri
