#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hhsq/errors.hpp"
#include "hhsq/prime_field.hpp"
#include "hhsq/sparse_vec.hpp"

namespace hhsq {

using Label = std::uint32_t;

class Algebra;

// A homogeneous element of a graded algebra: sparse scalar map over interned
// basis labels.
struct Element {
    const Algebra* alg = nullptr;
    SparseVec v;

    bool zero() const { return v.zero(); }
    bool operator==(const Element& o) const { return alg == o.alg && v == o.v; }
};

// Basis-labelled graded algebra over F_p, degree-truncated at N. Labels are
// interned; all instances are immutable after construction apart from the
// intern/enumeration caches, which are guarded by one mutex.
class Algebra {
public:
    Algebra(PrimeField F, int truncation) : F_(F), N_(truncation) {
        if (N_ < 2)
            throw ValidationError("truncation bound must be at least 2");
    }
    virtual ~Algebra() = default;

    const PrimeField& field() const { return F_; }
    int truncation() const { return N_; }

    virtual Label unit() const = 0;
    virtual int degree(Label) const = 0;
    virtual std::string name(Label) const = 0;

    // All basis labels of degree n in the algebra's deterministic order.
    const std::vector<Label>& basis(int n) const {
        if (n > N_)
            throw TruncationExceeded(n, N_);
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto it = basis_cache_.find(n);
        if (it != basis_cache_.end())
            return it->second;
        std::vector<Label> b = n < 0 ? std::vector<Label>{} : enumerate(n);
        auto& slot = basis_cache_[n];
        slot = std::move(b);
        for (std::uint32_t i = 0; i < slot.size(); ++i)
            basis_pos_[slot[i]] = i;
        return slot;
    }

    // Position of a label within basis(degree(label)).
    std::uint32_t basis_index(Label l) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto it = basis_pos_.find(l);
        if (it == basis_pos_.end()) {
            basis(degree(l));
            it = basis_pos_.find(l);
            if (it == basis_pos_.end())
                throw PipelineError("label not part of its degree basis: " + name(l));
        }
        return it->second;
    }

    virtual Element mul(Label, Label) const = 0;
    virtual Element d(Label) const = 0;

    // Optional pi-action (tensor squares and their models override this).
    virtual bool has_involution() const { return false; }
    virtual Element involution(Label) const {
        throw PipelineError("algebra carries no involution");
    }

    // Graded commutativity, checked on all basis pairs within truncation.
    bool commutative() const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        if (!commutative_)
            commutative_ = check_commutative();
        return *commutative_;
    }

    Element element(SparseVec v) const { return Element{this, std::move(v)}; }
    Element zero() const { return Element{this, {}}; }
    Element unit_element() const { return Element{this, SparseVec::unit(unit())}; }

    Element add(const Element& a, const Element& b) const {
        Element out = a;
        out.alg = this;
        out.v.axpy(F_, 1, b.v);
        return out;
    }

    Element scale(const Element& a, std::uint32_t c) const {
        Element out = a;
        out.v.scale(F_, c);
        return out;
    }

    Element mul(const Element& a, const Element& b) const {
        VecAccum acc(F_);
        for (const auto& ta : a.v.terms)
            for (const auto& tb : b.v.terms) {
                Element prod = mul(ta.first, tb.first);
                acc.add(prod.v, F_.mul(ta.second, tb.second));
            }
        return element(acc.take());
    }

    Element d(const Element& a) const {
        VecAccum acc(F_);
        for (const auto& t : a.v.terms)
            acc.add(d(t.first).v, t.second);
        return element(acc.take());
    }

    Element involution(const Element& a) const {
        VecAccum acc(F_);
        for (const auto& t : a.v.terms)
            acc.add(involution(t.first).v, t.second);
        return element(acc.take());
    }

    // Augmentation: coefficient of the unit label.
    std::uint32_t augmentation(const Element& a) const { return a.v.coeff(unit()); }

    int element_degree(const Element& a) const {
        if (a.zero())
            return -1;
        int n = degree(a.v.terms.front().first);
        for (const auto& t : a.v.terms)
            if (degree(t.first) != n)
                throw PipelineError("element is not homogeneous");
        return n;
    }

    std::string describe(const Element& a) const {
        if (a.zero())
            return "0";
        std::string out;
        for (const auto& t : a.v.terms) {
            if (!out.empty())
                out += " + ";
            if (t.second != 1)
                out += std::to_string(t.second) + "*";
            out += name(t.first);
        }
        return out;
    }

protected:
    virtual std::vector<Label> enumerate(int n) const = 0;

    bool check_commutative() const {
        for (int i = 0; i <= N_; ++i)
            for (int j = i; i + j <= N_; ++j)
                for (Label a : basis(i))
                    for (Label b : basis(j)) {
                        Element ab = mul(a, b);
                        Element ba = scale(mul(b, a), F_.sign(static_cast<long>(i) * j));
                        if (!(ab.v == ba.v))
                            return false;
                    }
        return true;
    }

    PrimeField F_;
    int N_;
    mutable std::recursive_mutex mu_;
    mutable std::map<int, std::vector<Label>> basis_cache_;
    mutable std::unordered_map<Label, std::uint32_t> basis_pos_;
    mutable std::optional<bool> commutative_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

namespace detail {
struct WordHash {
    std::size_t operator()(const std::vector<std::uint32_t>& w) const {
        std::size_t h = 1469598103934665603ull;
        for (std::uint32_t x : w) {
            h ^= x;
            h *= 1099511628211ull;
        }
        return h;
    }
};
}  // namespace detail

struct FreeGenerator {
    std::string name;
    int degree = 0;
};

// Free tensor algebra T(V) on generators of degree >= 2 with a derivation
// differential given on generators. Words are interned; the basis order is
// graded-lexicographic on generator indices.
class FreeAlgebra : public Algebra {
public:
    using Word = std::vector<std::uint32_t>;

    FreeAlgebra(PrimeField F, int truncation, std::vector<FreeGenerator> gens)
        : Algebra(F, truncation), gens_(std::move(gens)) {
        for (const auto& g : gens_)
            if (g.degree < 2)
                throw ValidationError("free algebra generator " + g.name +
                                      " must have degree >= 2 (1-connected)");
        for (std::size_t i = 0; i < gens_.size(); ++i)
            gen_index_[gens_[i].name] = static_cast<std::uint32_t>(i);
        if (gen_index_.size() != gens_.size())
            throw ValidationError("duplicate generator names");
        unit_ = intern({});
        d_gen_.assign(gens_.size(), SparseVec{});
    }

    // d(gen) as a list of (word over generator names, coefficient). Must be
    // set before the algebra is shared; degree +1 and d.d = 0 are validated.
    void set_differential(const std::string& gen,
                          const std::vector<std::pair<std::vector<std::string>, std::int64_t>>& image) {
        std::uint32_t gi = gen_id(gen);
        VecAccum acc(F_);
        for (const auto& [names, coeff] : image) {
            Word w;
            int deg = 0;
            for (const auto& n : names) {
                std::uint32_t id = gen_id(n);
                w.push_back(id);
                deg += gens_[id].degree;
            }
            if (deg != gens_[gi].degree + 1)
                throw ValidationError("differential of " + gen + " is not of degree +1");
            acc.add(intern(w), F_.reduce(coeff));
        }
        d_gen_[gi] = acc.take();
    }

    // d restricted to generators lands in words of length >= 2.
    bool minimal() const {
        for (const auto& dv : d_gen_)
            for (const auto& t : dv.terms)
                if (word_of(t.first).size() < 2)
                    return false;
        return true;
    }

    std::uint32_t generator_count() const { return static_cast<std::uint32_t>(gens_.size()); }
    const FreeGenerator& generator(std::uint32_t i) const { return gens_[i]; }
    Label generator_label(std::uint32_t i) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        return const_cast<FreeAlgebra*>(this)->intern({i});
    }
    std::uint32_t gen_id(const std::string& n) const {
        auto it = gen_index_.find(n);
        if (it == gen_index_.end())
            throw ValidationError("unknown generator: " + n);
        return it->second;
    }
    bool generator_closed(std::uint32_t i) const { return d_gen_[i].zero(); }

    const Word& word_of(Label l) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        return records_[l].word;
    }

    Label label_of_word(const Word& w) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        return const_cast<FreeAlgebra*>(this)->intern(w);
    }

    Label unit() const override { return unit_; }

    int degree(Label l) const override {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        return records_[l].degree;
    }

    std::string name(Label l) const override {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        const Word& w = records_[l].word;
        if (w.empty())
            return "1";
        std::string out;
        std::size_t i = 0;
        while (i < w.size()) {
            std::size_t j = i;
            while (j < w.size() && w[j] == w[i])
                ++j;
            if (!out.empty())
                out += "*";
            out += gens_[w[i]].name;
            if (j - i > 1)
                out += "^" + std::to_string(j - i);
            i = j;
        }
        return out;
    }

    Element mul(Label a, Label b) const override {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        const auto& ra = records_[a];
        const auto& rb = records_[b];
        int deg = ra.degree + rb.degree;
        if (deg > N_)
            throw TruncationExceeded(deg, N_);
        Word w = ra.word;
        w.insert(w.end(), rb.word.begin(), rb.word.end());
        return element(SparseVec::unit(const_cast<FreeAlgebra*>(this)->intern(w)));
    }

    Element d(Label l) const override {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        const Word w = records_[l].word;
        VecAccum acc(F_);
        int prefix_deg = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const SparseVec& dg = d_gen_[w[i]];
            if (!dg.zero()) {
                std::uint32_t sgn = F_.sign(prefix_deg);
                for (const auto& t : dg.terms) {
                    Word spliced(w.begin(), w.begin() + static_cast<long>(i));
                    const Word& mid = records_[t.first].word;
                    spliced.insert(spliced.end(), mid.begin(), mid.end());
                    spliced.insert(spliced.end(), w.begin() + static_cast<long>(i) + 1, w.end());
                    acc.add(const_cast<FreeAlgebra*>(this)->intern(spliced),
                            F_.mul(sgn, t.second));
                }
            }
            prefix_deg += gens_[w[i]].degree;
        }
        return element(acc.take());
    }

protected:
    std::vector<Label> enumerate(int n) const override {
        std::vector<Label> out;
        Word cur;
        std::lock_guard<std::recursive_mutex> lock(mu_);
        enumerate_rec(n, cur, out);
        return out;
    }

    Label intern(const Word& w) {
        auto it = word_index_.find(w);
        if (it != word_index_.end())
            return it->second;
        int deg = 0;
        for (std::uint32_t g : w)
            deg += gens_[g].degree;
        Label l = static_cast<Label>(records_.size());
        records_.push_back({w, deg});
        word_index_.emplace(w, l);
        return l;
    }

private:
    void enumerate_rec(int remaining, Word& cur, std::vector<Label>& out) const {
        if (remaining == 0) {
            out.push_back(const_cast<FreeAlgebra*>(this)->intern(cur));
            return;
        }
        for (std::uint32_t g = 0; g < gens_.size(); ++g) {
            if (gens_[g].degree > remaining)
                continue;
            cur.push_back(g);
            enumerate_rec(remaining - gens_[g].degree, cur, out);
            cur.pop_back();
        }
    }

    struct Record {
        Word word;
        int degree;
    };

    std::vector<FreeGenerator> gens_;
    std::unordered_map<std::string, std::uint32_t> gen_index_;
    Label unit_;
    std::vector<SparseVec> d_gen_;
    mutable std::vector<Record> records_;
    mutable std::unordered_map<Word, Label, detail::WordHash> word_index_;
};

// Finite-basis algebra with explicit multiplication and differential tables
// (e.g. F_2[u]/(u^k)). Unspecified products of non-unit elements are zero.
class TableAlgebra : public Algebra {
public:
    struct BasisEntry {
        std::string name;
        int degree = 0;
    };

    TableAlgebra(PrimeField F, int truncation, std::vector<BasisEntry> entries)
        : Algebra(F, truncation), entries_(std::move(entries)) {
        int units = 0;
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (entries_[i].degree == 0) {
                ++units;
                unit_ = static_cast<Label>(i);
            }
            if (entries_[i].degree < 0)
                throw ValidationError("negative degree in table basis");
            index_[entries_[i].name] = static_cast<Label>(i);
        }
        if (units != 1)
            throw ValidationError("table algebra needs exactly one degree-0 label (the unit)");
        d_.assign(entries_.size(), SparseVec{});
    }

    void set_product(const std::string& a, const std::string& b,
                     const std::vector<std::pair<std::string, std::int64_t>>& value) {
        VecAccum acc(F_);
        for (const auto& [n, c] : value)
            acc.add(id(n), F_.reduce(c));
        products_[{id(a), id(b)}] = acc.take();
    }

    void set_differential(const std::string& a,
                          const std::vector<std::pair<std::string, std::int64_t>>& value) {
        VecAccum acc(F_);
        for (const auto& [n, c] : value) {
            if (entries_[id(n)].degree != entries_[id(a)].degree + 1)
                throw ValidationError("differential of " + a + " is not of degree +1");
            acc.add(id(n), F_.reduce(c));
        }
        d_[id(a)] = acc.take();
    }

    Label id(const std::string& n) const {
        auto it = index_.find(n);
        if (it == index_.end())
            throw ValidationError("unknown table basis label: " + n);
        return it->second;
    }

    Label unit() const override { return unit_; }
    int degree(Label l) const override { return entries_[l].degree; }
    std::string name(Label l) const override { return entries_[l].name; }

    Element mul(Label a, Label b) const override {
        if (a == unit_)
            return element(SparseVec::unit(b));
        if (b == unit_)
            return element(SparseVec::unit(a));
        auto it = products_.find({a, b});
        return it == products_.end() ? zero() : element(it->second);
    }

    Element d(Label l) const override { return element(d_[l]); }

protected:
    std::vector<Label> enumerate(int n) const override {
        std::vector<Label> out;
        for (std::size_t i = 0; i < entries_.size(); ++i)
            if (entries_[i].degree == n)
                out.push_back(static_cast<Label>(i));
        return out;
    }

private:
    std::vector<BasisEntry> entries_;
    std::unordered_map<std::string, Label> index_;
    Label unit_ = 0;
    std::vector<SparseVec> d_;
    std::map<std::pair<Label, Label>, SparseVec> products_;
};

}  // namespace hhsq
