#include "mst/text_distance.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace mst {

std::size_t edit_distance(std::string_view a, std::string_view b) {
    if (a.size() < b.size()) std::swap(a, b);
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t up = row[j];
            std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
            diag = up;
        }
    }
    return row[b.size()];
}

std::optional<std::size_t> bounded_edit_distance(std::string_view a, std::string_view b,
                                                 std::size_t limit) {
    const std::size_t la = a.size(), lb = b.size();
    const std::size_t gap = la > lb ? la - lb : lb - la;
    if (gap > limit) return std::nullopt;
    if (la == 0 || lb == 0) return std::max(la, lb);

    constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 2;
    std::vector<std::size_t> prev(lb + 1, kInf), cur(lb + 1, kInf);
    for (std::size_t j = 0; j <= std::min(lb, limit); ++j) prev[j] = j;

    for (std::size_t i = 1; i <= la; ++i) {
        const std::size_t lo = i > limit ? i - limit : 0;
        const std::size_t hi = std::min(lb, i + limit);
        std::fill(cur.begin(), cur.end(), kInf);
        if (lo == 0) cur[0] = i;
        std::size_t row_min = lo == 0 ? cur[0] : kInf;
        for (std::size_t j = std::max<std::size_t>(lo, 1); j <= hi; ++j) {
            std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
            std::size_t v = prev[j - 1] + cost;
            v = std::min(v, prev[j] + 1);
            v = std::min(v, cur[j - 1] + 1);
            cur[j] = v;
            row_min = std::min(row_min, v);
        }
        if (row_min > limit) return std::nullopt;
        std::swap(prev, cur);
    }
    if (prev[lb] > limit) return std::nullopt;
    return prev[lb];
}

bool within_relative_distance(std::string_view a, std::string_view b, double fraction) {
    const double budget = fraction * static_cast<double>(std::max(a.size(), b.size()));
    const auto limit = static_cast<std::size_t>(std::floor(budget + 1e-9));
    return bounded_edit_distance(a, b, limit).has_value();
}

}  // namespace mst
