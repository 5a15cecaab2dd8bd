// Copyright 2026 The relaxplace Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RELAXPLACE_COST_HPP
#define RELAXPLACE_COST_HPP

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace relaxplace {

/// Priority-levelled cost.  Higher levels dominate lower ones; a level that
/// is not stored counts as zero.  Zero totals are never stored, so two
/// vectors describing the same costs compare equal with `==`.
class CostVector {
public:
    CostVector() = default;
    CostVector(std::initializer_list<std::pair<const std::int64_t, std::int64_t>> init) {
        for (const auto& [level, total] : init) add(level, total);
    }

    void add(std::int64_t level, std::int64_t amount) {
        if (amount < 0) throw std::invalid_argument("negative cost");
        if (amount == 0) return;
        totals_[level] += amount;
    }

    void add(const CostVector& other) {
        for (const auto& [level, total] : other.totals_) add(level, total);
    }

    std::int64_t at(std::int64_t level) const {
        auto it = totals_.find(level);
        return it == totals_.end() ? 0 : it->second;
    }

    bool is_zero() const { return totals_.empty(); }

    /// Non-zero totals in ascending level order.
    const std::map<std::int64_t, std::int64_t>& levels() const { return totals_; }

    friend bool operator==(const CostVector&, const CostVector&) = default;

    std::string to_string() const {
        std::string out = "{";
        bool first = true;
        for (auto it = totals_.rbegin(); it != totals_.rend(); ++it) {
            if (!first) out += ", ";
            first = false;
            out += "L" + std::to_string(it->first) + ":" + std::to_string(it->second);
        }
        return out + "}";
    }

private:
    std::map<std::int64_t, std::int64_t> totals_;
};

/// Lexicographic comparison from the highest populated level downward.
inline std::strong_ordering compare_costs(const CostVector& a, const CostVector& b) {
    const auto& la = a.levels();
    const auto& lb = b.levels();
    auto ia = la.rbegin();
    auto ib = lb.rbegin();
    while (ia != la.rend() || ib != lb.rend()) {
        // Walk the union of levels top-down; a level missing on one side is zero there.
        std::int64_t level;
        if (ib == lb.rend() || (ia != la.rend() && ia->first > ib->first)) level = ia->first;
        else level = ib->first;
        std::int64_t va = (ia != la.rend() && ia->first == level) ? (ia++)->second : 0;
        std::int64_t vb = (ib != lb.rend() && ib->first == level) ? (ib++)->second : 0;
        if (va != vb) return va <=> vb;
    }
    return std::strong_ordering::equal;
}

inline bool cost_less(const CostVector& a, const CostVector& b) { return compare_costs(a, b) < 0; }

}  // namespace relaxplace

#endif  // RELAXPLACE_COST_HPP
