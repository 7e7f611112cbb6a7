#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace policysim {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input-data problem tied to a file position.
class DataError : public Error {
public:
    DataError(const std::filesystem::path& file, std::size_t line, const std::string& message)
        : Error(file.string() + ":" + std::to_string(line) + ": " + message),
          file_(file), line_(line) {}

    const std::filesystem::path& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::filesystem::path file_;
    std::size_t line_;
};

template <class Tag>
struct Id {
    std::uint32_t value = 0;

    constexpr Id() = default;
    constexpr explicit Id(std::uint32_t v) : value(v) {}
    constexpr explicit Id(std::size_t v) : value(static_cast<std::uint32_t>(v)) {}

    constexpr std::size_t index() const noexcept { return value; }
    constexpr auto operator<=>(const Id&) const = default;
};

using CitizenId = Id<struct CitizenTag>;
using FamilyId = Id<struct FamilyTag>;
using HouseId = Id<struct HouseTag>;
using FirmId = Id<struct FirmTag>;
using MunicipalityId = Id<struct MunicipalityTag>;

struct Location {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Location&) const = default;
};

struct BoundingBox {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;
    bool operator==(const BoundingBox&) const = default;
};

/// Planar distance in km.
inline double distance(Location a, Location b) noexcept {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Sorted-vector set helpers. Membership sets (family members, employees, owned
// houses) are kept sorted so iteration order is deterministic.
template <class T>
void insert_sorted(std::vector<T>& v, T item) {
    auto it = std::lower_bound(v.begin(), v.end(), item);
    if (it == v.end() || *it != item) v.insert(it, item);
}

template <class T>
bool erase_sorted(std::vector<T>& v, T item) {
    auto it = std::lower_bound(v.begin(), v.end(), item);
    if (it == v.end() || *it != item) return false;
    v.erase(it);
    return true;
}

template <class T>
bool contains_sorted(const std::vector<T>& v, T item) {
    return std::binary_search(v.begin(), v.end(), item);
}

/// Hamilton (largest remainder) apportionment of `total` seats by `weights`.
/// Ties in the remainder go to the lower index. All-zero weights split evenly.
inline std::vector<std::int64_t> apportion(std::int64_t total, std::span<const double> weights) {
    std::vector<std::int64_t> seats(weights.size(), 0);
    if (weights.empty() || total <= 0) return seats;
    double sum = 0.0;
    for (double w : weights) sum += w;
    std::vector<double> quota(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i)
        quota[i] = sum > 0.0 ? static_cast<double>(total) * weights[i] / sum
                             : static_cast<double>(total) / static_cast<double>(weights.size());
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < quota.size(); ++i) {
        seats[i] = static_cast<std::int64_t>(std::floor(quota[i]));
        assigned += seats[i];
    }
    std::vector<std::size_t> order(quota.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return quota[a] - std::floor(quota[a]) > quota[b] - std::floor(quota[b]);
    });
    for (std::size_t k = 0; assigned < total; k = (k + 1) % order.size()) {
        ++seats[order[k]];
        ++assigned;
    }
    return seats;
}

/// Splits `amount` proportionally to `weights` so that the parts sum back to
/// `amount`: the last recipient with positive weight takes the remainder.
inline std::vector<double> split_proportional(double amount, std::span<const double> weights) {
    std::vector<double> parts(weights.size(), 0.0);
    if (weights.empty()) return parts;
    double sum = 0.0;
    std::size_t last = weights.size() - 1;
    bool any_positive = false;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        sum += weights[i];
        if (weights[i] > 0.0) {
            last = i;
            any_positive = true;
        }
    }
    if (!any_positive) {
        std::vector<double> even(weights.size(), 1.0);
        return split_proportional(amount, even);
    }
    double given = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (i == last) continue;
        parts[i] = amount * (weights[i] / sum);
        given += parts[i];
    }
    parts[last] = amount - given;
    return parts;
}

}  // namespace policysim
