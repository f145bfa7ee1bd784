#include "crashrepro/harness/stats.hpp"

#include <algorithm>
#include <stdexcept>

namespace crashrepro::harness {

double vargha_delaney_a12(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
    // Midrank the combined sample, then read A12 off b's rank sum:
    // A12 = (R_b / n - (n + 1) / 2) / m.
    struct Entry {
        double value;
        bool from_b;
    };
    std::vector<Entry> all;
    for (double v : a) all.push_back({v, false});
    for (double v : b) all.push_back({v, true});
    std::stable_sort(all.begin(), all.end(),
                     [](const Entry& x, const Entry& y) { return x.value < y.value; });

    double rank_b = 0.0;
    std::size_t i = 0;
    while (i < all.size()) {
        std::size_t j = i;
        while (j < all.size() && all[j].value == all[i].value) ++j;
        double midrank = ((double)(i + 1) + (double)j) / 2.0;
        for (std::size_t t = i; t < j; ++t)
            if (all[t].from_b) rank_b += midrank;
        i = j;
    }
    double m = (double)a.size(), n = (double)b.size();
    return (rank_b / n - (n + 1.0) / 2.0) / m;
}

}  // namespace crashrepro::harness
