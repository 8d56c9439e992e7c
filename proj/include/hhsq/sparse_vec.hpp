#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "hhsq/prime_field.hpp"

namespace hhsq {

// Sparse F_p vector: (index, coefficient) pairs, sorted by index, no zeros.
// Indices are interned labels or basis positions depending on context.
struct SparseVec {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> terms;

    bool zero() const { return terms.empty(); }
    std::size_t nnz() const { return terms.size(); }

    std::uint32_t coeff(std::uint32_t idx) const {
        auto it = std::lower_bound(terms.begin(), terms.end(), idx,
                                   [](const auto& t, std::uint32_t i) { return t.first < i; });
        return (it != terms.end() && it->first == idx) ? it->second : 0;
    }

    static SparseVec unit(std::uint32_t idx, std::uint32_t c = 1) {
        SparseVec v;
        if (c)
            v.terms.emplace_back(idx, c);
        return v;
    }

    // this += c * other
    void axpy(const PrimeField& F, std::uint32_t c, const SparseVec& other) {
        if (c == 0 || other.terms.empty())
            return;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
        out.reserve(terms.size() + other.terms.size());
        auto a = terms.begin(), ae = terms.end();
        auto b = other.terms.begin(), be = other.terms.end();
        while (a != ae || b != be) {
            if (b == be || (a != ae && a->first < b->first)) {
                out.push_back(*a++);
            } else if (a == ae || b->first < a->first) {
                std::uint32_t v = F.mul(c, b->second);
                if (v)
                    out.emplace_back(b->first, v);
                ++b;
            } else {
                std::uint32_t v = F.add(a->second, F.mul(c, b->second));
                if (v)
                    out.emplace_back(a->first, v);
                ++a;
                ++b;
            }
        }
        terms = std::move(out);
    }

    void scale(const PrimeField& F, std::uint32_t c) {
        if (c == 1)
            return;
        if (c == 0) {
            terms.clear();
            return;
        }
        for (auto& t : terms)
            t.second = F.mul(t.second, c);
    }

    void add_term(const PrimeField& F, std::uint32_t idx, std::uint32_t c) {
        axpy(F, 1, unit(idx, F.reduce(c)));
    }

    bool operator==(const SparseVec& o) const { return terms == o.terms; }
    bool operator!=(const SparseVec& o) const { return !(*this == o); }
};

// Accumulator for building sums term by term without repeated merging costs.
class VecAccum {
public:
    explicit VecAccum(const PrimeField& F) : F_(F) {}

    void add(std::uint32_t idx, std::uint32_t c) {
        if (c % F_.p())
            buf_.emplace_back(idx, c % F_.p());
    }
    void add(const SparseVec& v, std::uint32_t c = 1) {
        for (const auto& t : v.terms)
            add(t.first, F_.mul(t.second, c));
    }

    SparseVec take() {
        std::sort(buf_.begin(), buf_.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        SparseVec out;
        std::size_t i = 0;
        while (i < buf_.size()) {
            std::uint32_t idx = buf_[i].first, acc = 0;
            while (i < buf_.size() && buf_[i].first == idx) {
                acc = F_.add(acc, buf_[i].second);
                ++i;
            }
            if (acc)
                out.terms.emplace_back(idx, acc);
        }
        buf_.clear();
        return out;
    }

private:
    PrimeField F_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> buf_;
};

}  // namespace hhsq
