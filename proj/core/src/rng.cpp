#include "qflux/rng.hpp"

#include <algorithm>

#include "qflux/errors.hpp"

namespace qflux {

std::vector<uint64_t> multinomial_counts(const std::vector<double> &weights, uint64_t shots,
                                         CounterRng &rng) {
    if (weights.empty())
        throw ParameterOutOfRange("multinomial over zero categories");
    std::vector<double> cdf(weights.size());
    double acc = 0;
    for (size_t n = 0; n < weights.size(); ++n) {
        if (weights[n] < 0)
            throw ParameterOutOfRange("negative multinomial weight");
        acc += weights[n];
        cdf[n] = acc;
    }
    if (acc <= 0)
        throw ParameterOutOfRange("multinomial weights sum to zero");

    std::vector<uint64_t> counts(weights.size(), 0);
    for (uint64_t s = 0; s < shots; ++s) {
        const double u = rng.next_double() * acc;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const size_t idx = std::min<size_t>(it - cdf.begin(), weights.size() - 1);
        ++counts[idx];
    }
    return counts;
}

} // namespace qflux
