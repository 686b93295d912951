#pragma once

// Shared low-level utilities: deterministic RNG, validation errors, and a
// few numeric helpers used across the solver.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ucsched {

// Thrown when an input document or in-memory instance breaks an invariant.
// Messages are path-qualified, e.g. "sections[3].min_fraction: ...".
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// mt19937_64 wrapper with hand-rolled draws. std::uniform_int_distribution
// and std::shuffle are implementation-defined, which would break the
// byte-stable output contract across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [lo, hi], inclusive on both ends. Unbiased via rejection.
    int uniform_int(int lo, int hi) {
        if (lo >= hi) return lo;
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / span * span;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return lo + static_cast<int>(x % span);
    }

    // Uniform in [0, n). n must be > 0.
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(uniform_int(0, static_cast<int>(n) - 1));
    }

    double uniform_real(double lo, double hi) {
        const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

    bool bernoulli(double p) { return uniform_real(0.0, 1.0) < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[uniform_index(i)]);
        }
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[uniform_index(v.size())];
    }

private:
    std::mt19937_64 gen_;
};

// Smallest meeting count that satisfies "at least `fraction` of `total`".
// The epsilon keeps ceil() from overshooting when fraction*total lands a few
// ulps above an integer (e.g. 0.1 * 30).
inline int fraction_quota(double fraction, int total) {
    if (total <= 0) return 0;
    return static_cast<int>(std::ceil(fraction * static_cast<double>(total) - 1e-9));
}

// Largest-remainder allocation of `total` over weights given as counts.
// Used by the instance generator to scale histograms exactly.
inline std::vector<int> allocate_quota(const std::vector<int>& counts, int total) {
    const double base = static_cast<double>(
        std::max<long long>(1, std::accumulate(counts.begin(), counts.end(), 0LL)));
    std::vector<int> out(counts.size(), 0);
    std::vector<std::pair<double, std::size_t>> rema;
    int assigned = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double exact = static_cast<double>(total) * static_cast<double>(counts[i]) / base;
        out[i] = static_cast<int>(std::floor(exact));
        assigned += out[i];
        rema.emplace_back(exact - std::floor(exact), i);
    }
    std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t j = 0; assigned < total && j < rema.size(); ++j, ++assigned) {
        ++out[rema[j].second];
    }
    // Over-assignment can only happen when total < sum of floors, i.e. never.
    return out;
}

}  // namespace ucsched
