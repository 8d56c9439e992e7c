#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "hhsq/linalg.hpp"
#include "hhsq/wres.hpp"

namespace hhsq {

// W (x)_pi M for a pi-complex M. The orbit identification normalizes every
// e_i tau^s (x) m to e_i (x) tau^s m, so labels are plain (tier, m) pairs.
// |e_i (x) m| = |m| - i and d(e_i (x) m) = del e_i (x) m + (-1)^i e_i (x) d m.
//
// M must provide: field(), truncation(), degree(l), basis(n), d(l),
// involution(l), name(l).
template <class M>
class WQuotientComplex {
public:
    WQuotientComplex(const WRes& W, std::shared_ptr<const M> m, int tier_cap)
        : W_(W), m_(std::move(m)), tier_cap_(tier_cap) {}

    const WRes& w() const { return W_; }
    const std::shared_ptr<const M>& inner() const { return m_; }
    int tier_cap() const { return tier_cap_; }
    const PrimeField& field() const { return m_->field(); }

    using QLabel = std::uint32_t;

    QLabel at(int tier, std::uint32_t mlabel) const {
        return const_cast<WQuotientComplex*>(this)->intern(tier, mlabel);
    }
    int tier(QLabel q) const { return records_[q].first; }
    std::uint32_t inner_label(QLabel q) const { return records_[q].second; }
    int degree(QLabel q) const { return m_->degree(records_[q].second) - records_[q].first; }

    std::string name(QLabel q) const {
        return "e" + std::to_string(tier(q)) + "(x)" + m_->name(inner_label(q));
    }

    std::string describe(const SparseVec& v) const {
        if (v.zero())
            return "0";
        std::string out;
        for (const auto& t : v.terms) {
            if (!out.empty())
                out += " + ";
            if (t.second != 1)
                out += std::to_string(t.second) + "*";
            out += name(t.first);
        }
        return out;
    }

    SparseVec d(QLabel q) const {
        const PrimeField& F = field();
        auto [i, ml] = records_[q];
        VecAccum acc(F);
        for (const auto& [b, c] : W_.boundary(WIdx{i, 0})) {
            // e_{i-1} tau^s (x) m -> e_{i-1} (x) tau^s m
            SparseVec twisted = SparseVec::unit(ml);
            for (int s = 0; s < b.power; ++s) {
                VecAccum tw(F);
                for (const auto& t : twisted.terms)
                    tw.add(m_->involution(t.first), t.second);
                twisted = tw.take();
            }
            for (const auto& t : twisted.terms)
                acc.add(at(b.tier, t.first), F.mul(c, t.second));
        }
        std::uint32_t sgn = F.sign(i);
        for (const auto& t : m_->d(ml).terms)
            acc.add(at(i, t.first), F.mul(sgn, t.second));
        return acc.take();
    }

    SparseVec d(const SparseVec& v) const {
        VecAccum acc(field());
        for (const auto& t : v.terms)
            acc.add(d(t.first), t.second);
        return acc.take();
    }

    // Basis of the total degree n slice within the tier cap, ordered by tier
    // then by the inner basis order.
    const std::vector<QLabel>& basis(int n) const {
        auto it = basis_cache_.find(n);
        if (it != basis_cache_.end())
            return it->second;
        std::vector<QLabel> out;
        for (int i = 0; i <= tier_cap_; ++i) {
            int mdeg = n + i;
            if (mdeg < 0 || mdeg > m_->truncation())
                continue;
            for (std::uint32_t ml : m_->basis(mdeg))
                out.push_back(at(i, ml));
        }
        auto& slot = basis_cache_[n];
        slot = std::move(out);
        for (std::uint32_t j = 0; j < slot.size(); ++j)
            basis_pos_[slot[j]] = j;
        return slot;
    }

    std::uint32_t basis_index(QLabel q) const {
        auto it = basis_pos_.find(q);
        if (it == basis_pos_.end()) {
            basis(degree(q));
            it = basis_pos_.find(q);
            if (it == basis_pos_.end())
                throw PipelineError("quotient label outside the enumerated window: " + name(q));
        }
        return it->second;
    }

    const SparseMatrix& d_matrix(int n) const {
        auto it = dmat_cache_.find(n);
        if (it != dmat_cache_.end())
            return it->second;
        const auto& from = basis(n);
        const auto& to = basis(n + 1);
        SparseMatrix dm(static_cast<std::uint32_t>(to.size()),
                        static_cast<std::uint32_t>(from.size()));
        for (std::uint32_t j = 0; j < from.size(); ++j)
            for (const auto& t : d(from[j]).terms)
                dm.row[basis_index(t.first)].terms.emplace_back(j, t.second);
        for (auto& r : dm.row)
            std::sort(r.terms.begin(), r.terms.end());
        return dmat_cache_.emplace(n, std::move(dm)).first->second;
    }

    const HomologySpace& homology(int n) const {
        auto it = hom_cache_.find(n);
        if (it != hom_cache_.end())
            return it->second;
        return hom_cache_.emplace(n, HomologySpace(field(), d_matrix(n - 1), d_matrix(n)))
            .first->second;
    }

private:
    QLabel intern(int tier, std::uint32_t mlabel) {
        std::uint64_t key = (static_cast<std::uint64_t>(tier) << 32) | mlabel;
        auto it = index_.find(key);
        if (it != index_.end())
            return it->second;
        QLabel q = static_cast<QLabel>(records_.size());
        records_.emplace_back(tier, mlabel);
        index_.emplace(key, q);
        return q;
    }

    const WRes& W_;
    std::shared_ptr<const M> m_;
    int tier_cap_;
    mutable std::vector<std::pair<int, std::uint32_t>> records_;
    mutable std::unordered_map<std::uint64_t, QLabel> index_;
    mutable std::map<int, std::vector<QLabel>> basis_cache_;
    mutable std::unordered_map<QLabel, std::uint32_t> basis_pos_;
    mutable std::map<int, SparseMatrix> dmat_cache_;
    mutable std::map<int, HomologySpace> hom_cache_;
};

// Small explicit pi-complex for quotient tests: a finite labelled basis with
// a signed tau permutation and a differential table.
class SimplePiModule {
public:
    struct Entry {
        std::string name;
        int degree = 0;
    };

    SimplePiModule(PrimeField F, int truncation, std::vector<Entry> entries)
        : F_(F), N_(truncation), entries_(std::move(entries)) {
        d_.assign(entries_.size(), SparseVec{});
        tau_.assign(entries_.size(), SparseVec{});
        for (std::uint32_t i = 0; i < entries_.size(); ++i)
            tau_[i] = SparseVec::unit(i);
    }

    void set_tau(std::uint32_t from, std::uint32_t to, std::uint32_t coeff = 1) {
        tau_[from] = SparseVec::unit(to, coeff);
    }
    void set_d(std::uint32_t from, SparseVec image) { d_[from] = std::move(image); }

    const PrimeField& field() const { return F_; }
    int truncation() const { return N_; }
    int degree(std::uint32_t l) const { return entries_[l].degree; }
    std::string name(std::uint32_t l) const { return entries_[l].name; }
    SparseVec d(std::uint32_t l) const { return d_[l]; }
    SparseVec involution(std::uint32_t l) const { return tau_[l]; }

    const std::vector<std::uint32_t>& basis(int n) const {
        auto it = basis_cache_.find(n);
        if (it != basis_cache_.end())
            return it->second;
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 0; i < entries_.size(); ++i)
            if (entries_[i].degree == n)
                out.push_back(i);
        return basis_cache_.emplace(n, std::move(out)).first->second;
    }

private:
    PrimeField F_;
    int N_;
    std::vector<Entry> entries_;
    std::vector<SparseVec> d_;
    std::vector<SparseVec> tau_;
    mutable std::map<int, std::vector<std::uint32_t>> basis_cache_;
};

}  // namespace hhsq
