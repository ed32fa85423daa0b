#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vander/common.hpp"
#include "vander/rng.hpp"

namespace vander {

/// Phases live on [0,1) and enter matrix entries only through exp(2*pi*i*k*theta),
/// which needs frac(k*theta) accurately for exponents k far beyond 2^53. Each
/// phase is therefore stored as a fixed-point binary fraction of `words` 64-bit
/// words (word 0 most significant); frac(k*theta) is computed exactly on the
/// stored bits and only the result is rounded to double.
class PhaseVector {
public:
    PhaseVector(int count, int dim, int words = 2)
        : L_(count), d_(dim), words_(words), bits_(static_cast<size_t>(count) * dim * words, 0) {
        if (count < 1 || dim < 1 || words < 1) throw std::invalid_argument("PhaseVector: bad shape");
    }

    int count() const { return L_; }
    int dim() const { return d_; }
    int words() const { return words_; }

    std::span<uint64_t> entry_words(int q, int j) {
        return {bits_.data() + offset(q, j), static_cast<size_t>(words_)};
    }
    std::span<const uint64_t> entry_words(int q, int j) const {
        return {bits_.data() + offset(q, j), static_cast<size_t>(words_)};
    }

    /// theta_{q,j} rounded to double, in [0,1).
    double value(int q, int j = 0) const {
        auto w = entry_words(q, j);
        double x = std::ldexp(static_cast<double>(w[0]), -64);
        if (words_ > 1) x += std::ldexp(static_cast<double>(w[1]), -128);
        return x < 1.0 ? x : std::nextafter(1.0, 0.0);
    }

    /// frac(k * theta_{q,j}) for a 64-bit integer exponent, exact on the stored bits.
    double frac_mul(int q, int j, uint64_t k) const {
        auto w = entry_words(q, j);
        uint64_t out[2] = {0, 0}; // top two fractional words of k*theta
        unsigned __int128 carry = 0;
        for (int i = words_ - 1; i >= 0; --i) {
            unsigned __int128 p = static_cast<unsigned __int128>(w[i]) * k + carry;
            const uint64_t lo = static_cast<uint64_t>(p);
            carry = p >> 64;
            if (i <= 1) out[i] = lo;
        }
        return words_to_double(out[0], words_ > 1 ? out[1] : 0);
    }

    /// frac(2^p * theta_{q,j}): a left shift of the stored bits. At least 64
    /// random bits must remain past the shift or the result degrades.
    double frac_shift(int q, int j, int p) const {
        if (p < 0) throw std::invalid_argument("frac_shift: negative exponent");
        const int word_off = p / 64, sh = p % 64;
        if (p + 64 > 64 * words_)
            throw budget_error("frac_shift: phase vector carries too few bits for exponent 2^" +
                               std::to_string(p));
        auto w = entry_words(q, j);
        auto at = [&](int i) -> uint64_t { return i < words_ ? w[i] : 0; };
        uint64_t w0, w1;
        if (sh == 0) {
            w0 = at(word_off);
            w1 = at(word_off + 1);
        } else {
            w0 = (at(word_off) << sh) | (at(word_off + 1) >> (64 - sh));
            w1 = (at(word_off + 1) << sh) | (at(word_off + 2) >> (64 - sh));
        }
        return words_to_double(w0, w1);
    }

    /// frac(sum_j ell_j * theta_{q,j}) for a multi-index of small nonnegative
    /// integers; the d-fold row phase <ell, x_q> mod 1.
    double frac_dot(int q, std::span<const int> ell) const {
        if (static_cast<int>(ell.size()) != d_) throw std::invalid_argument("frac_dot: bad index size");
        std::vector<uint64_t> acc(words_, 0);
        for (int j = 0; j < d_; ++j) {
            auto w = entry_words(q, j);
            const uint64_t k = static_cast<uint64_t>(ell[j]);
            unsigned __int128 carry = 0;
            for (int i = words_ - 1; i >= 0; --i) {
                unsigned __int128 p = static_cast<unsigned __int128>(w[i]) * k +
                                      static_cast<unsigned __int128>(acc[i]) + carry;
                acc[i] = static_cast<uint64_t>(p);
                carry = p >> 64;
            }
        }
        return words_to_double(acc[0], words_ > 1 ? acc[1] : 0);
    }

    /// Overwrite one entry with the binary expansion of a double in [0,1).
    void set_value(int q, int j, double x) {
        if (x < 0.0 || x >= 1.0) throw std::invalid_argument("set_value: phase outside [0,1)");
        auto w = entry_words(q, j);
        double r = x;
        for (int i = 0; i < words_; ++i) {
            const double scaled = std::ldexp(r, 64);
            const double ip = std::floor(scaled);
            w[i] = ip >= 0x1.0p64 ? ~0ull : static_cast<uint64_t>(ip);
            r = scaled - ip;
        }
    }

private:
    static double words_to_double(uint64_t w0, uint64_t w1) {
        const double x = std::ldexp(static_cast<double>(w0), -64) +
                         std::ldexp(static_cast<double>(w1), -128);
        return x < 1.0 ? x : std::nextafter(1.0, 0.0);
    }
    size_t offset(int q, int j) const {
        return (static_cast<size_t>(q) * d_ + j) * words_;
    }

    int L_, d_, words_;
    std::vector<uint64_t> bits_;
};

/// Phase density: uniform on [0,1), or a tabulated inverse CDF with linear
/// interpolation (u-grid strictly increasing from 0 to 1, x-values
/// nondecreasing in [0,1)).
struct DensitySpec {
    std::vector<double> u; // empty means uniform
    std::vector<double> x;

    static DensitySpec uniform() { return {}; }
    bool is_uniform() const { return u.empty(); }

    void validate() const {
        if (is_uniform()) return;
        if (u.size() != x.size() || u.size() < 2 || u.front() != 0.0 || u.back() != 1.0)
            throw std::invalid_argument("density table must map u in [0,1] with endpoints");
        for (size_t i = 1; i < u.size(); ++i)
            if (u[i] <= u[i - 1] || x[i] < x[i - 1])
                throw std::invalid_argument("density table must be monotone");
        if (x.front() < 0.0 || x.back() > 1.0)
            throw std::invalid_argument("density table values must lie in [0,1)");
    }

    double map(double t) const {
        size_t hi = 1;
        while (hi + 1 < u.size() && u[hi] < t) ++hi;
        const double w = (t - u[hi - 1]) / (u[hi] - u[hi - 1]);
        double v = x[hi - 1] + w * (x[hi] - x[hi - 1]);
        if (v >= 1.0) v = std::nextafter(1.0, 0.0);
        return v < 0.0 ? 0.0 : v;
    }
};

/// L*d i.i.d. phase draws, deterministic given the seed. Draw order is fixed
/// (entry-major, then word); two calls with one SeedSpec agree bit for bit.
inline PhaseVector sample_phases(int L, int d, const DensitySpec& density, const SeedSpec& seed,
                                 int words = 2) {
    density.validate();
    PhaseVector pv(L, d, words);
    Rng rng(trial_seed(seed.base, "phases", seed.trial));
    for (int q = 0; q < L; ++q) {
        for (int j = 0; j < d; ++j) {
            auto w = pv.entry_words(q, j);
            for (auto& word : w) word = rng.next_u64();
            if (!density.is_uniform()) pv.set_value(q, j, density.map(pv.value(q, j)));
        }
    }
    return pv;
}

inline PhaseVector sample_phases(int L, int d, const SeedSpec& seed, int words = 2) {
    return sample_phases(L, d, DensitySpec::uniform(), seed, words);
}

} // namespace vander
