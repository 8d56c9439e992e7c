#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "hhsq/algebra.hpp"
#include "hhsq/linalg.hpp"
#include "hhsq/tensor_square.hpp"
#include "hhsq/wres.hpp"

namespace hhsq {

using HLabel = std::uint32_t;

// The normalized Hochschild chain complex cA: words a0[a1|...|ak] with bar
// letters from the augmentation ideal, differential d = d1 + d2. Words are
// interned; the per-degree basis is ordered by bar length, then head, then
// letters (graded-lexicographically).
class HochschildComplex {
public:
    explicit HochschildComplex(AlgebraPtr A) : A_(std::move(A)) {
        if (!A_->basis(1).empty())
            throw ValidationError(
                "Hochschild complex needs A^1 = 0; otherwise degree slices are infinite");
        unit_word_ = intern(A_->unit(), {});
    }

    const AlgebraPtr& algebra() const { return A_; }
    const PrimeField& field() const { return A_->field(); }
    int truncation() const { return A_->truncation(); }

    HLabel word(Label head, std::vector<Label> letters) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        return const_cast<HochschildComplex*>(this)->intern(head, std::move(letters));
    }
    HLabel unit_word() const { return unit_word_; }

    Label head(HLabel h) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        return records_[h].head;
    }
    const std::vector<Label>& letters(HLabel h) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        return records_[h].letters;
    }
    int degree(HLabel h) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        return records_[h].degree;
    }
    int bar_length(HLabel h) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        return static_cast<int>(records_[h].letters.size());
    }

    std::string name(HLabel h) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        const Record& r = records_[h];
        std::string out = A_->name(r.head) + "[";
        for (std::size_t i = 0; i < r.letters.size(); ++i) {
            if (i)
                out += "|";
            out += A_->name(r.letters[i]);
        }
        return out + "]";
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

    const std::vector<HLabel>& basis(int n) const {
        if (n > truncation())
            throw TruncationExceeded(n, truncation());
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto it = basis_cache_.find(n);
        if (it != basis_cache_.end())
            return it->second;
        std::vector<HLabel> out;
        if (n >= 0)
            enumerate(n, out);
        auto& slot = basis_cache_[n];
        slot = std::move(out);
        for (std::uint32_t i = 0; i < slot.size(); ++i)
            basis_pos_[slot[i]] = i;
        return slot;
    }

    std::uint32_t basis_index(HLabel h) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto it = basis_pos_.find(h);
        if (it == basis_pos_.end()) {
            basis(degree(h));
            it = basis_pos_.find(h);
            if (it == basis_pos_.end())
                throw PipelineError("hochschild word missing from its basis: " + name(h));
        }
        return it->second;
    }

    // epsilon_i = |a0| + sum_{j<i} |s a_j|.
    SparseVec d1(HLabel h) const {
        const PrimeField& F = field();
        Label a0 = head(h);
        std::vector<Label> ls = letters(h);
        VecAccum acc(F);
        Element dh = A_->d(a0);
        for (const auto& t : dh.v.terms)
            acc.add(word(t.first, ls), t.second);
        long eps = A_->degree(a0);
        for (std::size_t i = 0; i < ls.size(); ++i) {
            std::uint32_t sgn = F.neg(F.sign(eps));
            Element dl = A_->d(ls[i]);
            for (const auto& t : dl.v.terms) {
                std::vector<Label> nl = ls;
                nl[i] = t.first;
                acc.add(word(a0, std::move(nl)), F.mul(sgn, t.second));
            }
            eps += A_->degree(ls[i]) - 1;
        }
        return acc.take();
    }

    SparseVec d2(HLabel h) const {
        const PrimeField& F = field();
        Label a0 = head(h);
        const std::vector<Label> ls = letters(h);
        std::size_t k = ls.size();
        VecAccum acc(F);
        if (k == 0)
            return acc.take();
        {
            std::uint32_t sgn = F.sign(A_->degree(a0));
            Element prod = A_->mul(a0, ls[0]);
            std::vector<Label> rest(ls.begin() + 1, ls.end());
            for (const auto& t : prod.v.terms)
                acc.add(word(t.first, rest), F.mul(sgn, t.second));
        }
        long eps = A_->degree(a0) + (A_->degree(ls[0]) - 1);
        for (std::size_t i = 2; i <= k; ++i) {
            std::uint32_t sgn = F.sign(eps);
            Element prod = A_->mul(ls[i - 2], ls[i - 1]);
            for (const auto& t : prod.v.terms) {
                std::vector<Label> nl;
                nl.reserve(k - 1);
                nl.insert(nl.end(), ls.begin(), ls.begin() + static_cast<long>(i) - 2);
                nl.push_back(t.first);
                nl.insert(nl.end(), ls.begin() + static_cast<long>(i), ls.end());
                acc.add(word(a0, std::move(nl)), F.mul(sgn, t.second));
            }
            eps += A_->degree(ls[i - 1]) - 1;
        }
        {
            // wrap-around term -(-1)^{|s a_k| eps_k} a_k a0 [a1|...|a_{k-1}]
            long eps_k = A_->degree(a0);
            for (std::size_t j = 0; j + 1 < k; ++j)
                eps_k += A_->degree(ls[j]) - 1;
            std::uint32_t sgn =
                F.neg(F.sign(static_cast<long>(A_->degree(ls[k - 1]) - 1) * eps_k));
            Element prod = A_->mul(ls[k - 1], a0);
            std::vector<Label> rest(ls.begin(), ls.end() - 1);
            for (const auto& t : prod.v.terms)
                acc.add(word(t.first, rest), F.mul(sgn, t.second));
        }
        return acc.take();
    }

    const SparseVec& d(HLabel h) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto it = d_cache_.find(h);
        if (it != d_cache_.end())
            return it->second;
        SparseVec v = d1(h);
        v.axpy(field(), 1, d2(h));
        return d_cache_.emplace(h, std::move(v)).first->second;
    }

    SparseVec d(const SparseVec& v) const {
        VecAccum acc(field());
        for (const auto& t : v.terms)
            acc.add(d(t.first), t.second);
        return acc.take();
    }

    // Diagonal pi-action, defined when the coefficient algebra carries one.
    SparseVec involution(HLabel h) const {
        const PrimeField& F = field();
        Element th = A_->involution(head(h));
        std::vector<std::pair<std::vector<Label>, std::uint32_t>> partial{{{}, 1}};
        for (Label l : letters(h)) {
            Element tl = A_->involution(l);
            std::vector<std::pair<std::vector<Label>, std::uint32_t>> next;
            for (const auto& [pref, c] : partial)
                for (const auto& t : tl.v.terms) {
                    auto p2 = pref;
                    p2.push_back(t.first);
                    next.emplace_back(std::move(p2), F.mul(c, t.second));
                }
            partial = std::move(next);
        }
        VecAccum acc(F);
        for (const auto& th_t : th.v.terms)
            for (const auto& [lts, c] : partial)
                acc.add(word(th_t.first, lts), F.mul(th_t.second, c));
        return acc.take();
    }

    SparseVec involution(const SparseVec& v) const {
        VecAccum acc(field());
        for (const auto& t : v.terms)
            acc.add(involution(t.first), t.second);
        return acc.take();
    }

    // Matrix of d from degree n to n+1 over the per-degree bases.
    const SparseMatrix& d_matrix(int n) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto it = dmat_cache_.find(n);
        if (it != dmat_cache_.end())
            return it->second;
        const auto& from = basis(n);
        const auto& to = basis(n + 1);
        SparseMatrix m(static_cast<std::uint32_t>(to.size()),
                       static_cast<std::uint32_t>(from.size()));
        for (std::uint32_t j = 0; j < from.size(); ++j)
            for (const auto& t : d(from[j]).terms)
                m.row[basis_index(t.first)].terms.emplace_back(j, t.second);
        for (auto& r : m.row)
            std::sort(r.terms.begin(), r.terms.end());
        return dmat_cache_.emplace(n, std::move(m)).first->second;
    }

    // Homology in degree n (cached). Degree n+1 must stay within truncation.
    const HomologySpace& homology(int n) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto it = hom_cache_.find(n);
        if (it != hom_cache_.end())
            return it->second;
        const SparseMatrix& din = d_matrix(n - 1);
        const SparseMatrix& dout = d_matrix(n);
        return hom_cache_.emplace(n, HomologySpace(field(), din, dout)).first->second;
    }

    // Coordinates of a cycle in homology; throws NotACycle otherwise.
    SparseVec project(int n, const SparseVec& cycle) const {
        auto p = homology(n).project(cycle);
        if (!p)
            throw NotACycle("projection to HH in degree " + std::to_string(n));
        return *p;
    }

private:
    struct Record {
        Label head;
        std::vector<Label> letters;
        int degree;
    };

    struct KeyHash {
        std::size_t operator()(const std::pair<Label, std::vector<Label>>& k) const {
            std::size_t h = std::hash<Label>()(k.first) * 1099511628211ull;
            for (Label l : k.second) {
                h ^= l + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            }
            return h;
        }
    };

    HLabel intern(Label head, std::vector<Label> letters) {
        for (Label l : letters)
            if (A_->degree(l) <= 0)
                throw PipelineError("bar letter of non-positive degree (normalization)");
        std::pair<Label, std::vector<Label>> key{head, letters};
        auto it = index_.find(key);
        if (it != index_.end())
            return it->second;
        int deg = A_->degree(head);
        for (Label l : letters)
            deg += A_->degree(l) - 1;
        if (deg > truncation())
            throw TruncationExceeded(deg, truncation());
        HLabel h = static_cast<HLabel>(records_.size());
        records_.push_back({head, std::move(letters), deg});
        index_.emplace(std::move(key), h);
        return h;
    }

    void enumerate(int n, std::vector<HLabel>& out) const {
        for (int h = 0; h <= n; ++h) {
            for (Label a0 : A_->basis(h)) {
                std::vector<Label> cur;
                enumerate_letters(n - h, a0, cur, out);
            }
        }
        // bar length ascending, then head, then letters (graded-lex)
        auto key = [&](HLabel x) {
            const Record& r = records_[x];
            std::vector<std::uint32_t> k;
            k.push_back(static_cast<std::uint32_t>(r.letters.size()));
            k.push_back(static_cast<std::uint32_t>(A_->degree(r.head)));
            k.push_back(A_->basis_index(r.head));
            for (Label l : r.letters) {
                k.push_back(static_cast<std::uint32_t>(A_->degree(l)));
                k.push_back(A_->basis_index(l));
            }
            return k;
        };
        std::sort(out.begin(), out.end(), [&](HLabel a, HLabel b) { return key(a) < key(b); });
    }

    void enumerate_letters(int remaining, Label head, std::vector<Label>& cur,
                           std::vector<HLabel>& out) const {
        if (remaining == 0) {
            out.push_back(const_cast<HochschildComplex*>(this)->intern(head, cur));
            return;
        }
        // a letter of degree m contributes m - 1 >= 1 (A^1 = 0)
        for (int m = 2; m - 1 <= remaining && m <= truncation(); ++m) {
            for (Label l : A_->basis(m)) {
                cur.push_back(l);
                enumerate_letters(remaining - (m - 1), head, cur, out);
                cur.pop_back();
            }
        }
    }

    AlgebraPtr A_;
    HLabel unit_word_;
    mutable std::recursive_mutex mu_;
    mutable std::vector<Record> records_;
    mutable std::unordered_map<std::pair<Label, std::vector<Label>>, HLabel, KeyHash> index_;
    mutable std::map<int, std::vector<HLabel>> basis_cache_;
    mutable std::unordered_map<HLabel, std::uint32_t> basis_pos_;
    mutable std::unordered_map<HLabel, SparseVec> d_cache_;
    mutable std::map<int, SparseMatrix> dmat_cache_;
    mutable std::map<int, HomologySpace> hom_cache_;
};

using HochschildPtr = std::shared_ptr<HochschildComplex>;

// c(g) for an algebra chain map g given on labels: acts letterwise.
inline SparseVec apply_chain_algebra_map(const HochschildComplex& src,
                                         const HochschildComplex& dst,
                                         const std::function<Element(Label)>& g, HLabel h) {
    const PrimeField& F = src.field();
    Element gh = g(src.head(h));
    std::vector<std::pair<std::vector<Label>, std::uint32_t>> partial{{{}, 1}};
    for (Label l : src.letters(h)) {
        Element gl = g(l);
        if (gl.zero())
            return {};
        std::vector<std::pair<std::vector<Label>, std::uint32_t>> next;
        for (const auto& [pref, c] : partial)
            for (const auto& t : gl.v.terms) {
                auto p2 = pref;
                p2.push_back(t.first);
                next.emplace_back(std::move(p2), F.mul(c, t.second));
            }
        partial = std::move(next);
    }
    VecAccum acc(F);
    for (const auto& ht : gh.v.terms)
        for (const auto& [lts, c] : partial)
            acc.add(dst.word(ht.first, lts), F.mul(ht.second, c));
    return acc.take();
}

// Binary shuffle sh : cA (x) cA -> c(A (x) A). Interleaves the suspended bar
// letters a_i (x) 1 and 1 (x) b_j over the head a0 (x) b0, with Koszul signs
// on suspended degrees.
inline SparseVec shuffle(const HochschildComplex& cA, HLabel x, HLabel y,
                         const HochschildComplex& cAA) {
    auto tensor = std::dynamic_pointer_cast<const TensorSquareAlgebra>(cAA.algebra());
    if (!tensor || tensor->base().get() != cA.algebra().get())
        throw PipelineError("shuffle target must be the Hochschild complex of A (x) A");
    const PrimeField& F = cA.field();
    const auto& A = *cA.algebra();
    Label a0 = cA.head(x);
    Label b0 = cA.head(y);
    const auto& as = cA.letters(x);
    const auto& bs = cA.letters(y);
    // move b0 past the suspended a-letters
    long sa_total = 0;
    for (Label l : as)
        sa_total += A.degree(l) - 1;
    std::uint32_t head_sign = F.sign(static_cast<long>(A.degree(b0)) * sa_total);
    Label head = tensor->pair_label(a0, b0);

    VecAccum acc(F);
    // Recursive interleaving with running Koszul sign: when a b-letter moves
    // past the remaining a-letters the sign picks up |s b_j| * |s a_i|.
    std::vector<Label> cur;
    cur.reserve(as.size() + bs.size());
    std::function<void(std::size_t, std::size_t, std::uint32_t)> rec =
        [&](std::size_t i, std::size_t j, std::uint32_t sgn) {
            if (i == as.size() && j == bs.size()) {
                acc.add(cAA.word(head, cur), F.mul(head_sign, sgn));
                return;
            }
            if (i < as.size()) {
                cur.push_back(tensor->pair_label(as[i], A.unit()));
                rec(i + 1, j, sgn);
                cur.pop_back();
            }
            if (j < bs.size()) {
                long sb = A.degree(bs[j]) - 1;
                long crossed = 0;
                for (std::size_t t = i; t < as.size(); ++t)
                    crossed += A.degree(as[t]) - 1;
                cur.push_back(tensor->pair_label(A.unit(), bs[j]));
                rec(i, j + 1, F.mul(sgn, F.sign(sb * crossed)));
                cur.pop_back();
            }
        };
    rec(0, 0, 1);
    return acc.take();
}

inline SparseVec shuffle_chain(const HochschildComplex& cA, const SparseVec& x,
                               const SparseVec& y, const HochschildComplex& cAA) {
    const PrimeField& F = cA.field();
    VecAccum acc(F);
    for (const auto& tx : x.terms)
        for (const auto& ty : y.terms)
            acc.add(shuffle(cA, tx.first, ty.first, cAA), F.mul(tx.second, ty.second));
    return acc.take();
}

// Iterated shuffle sh^{(n)}; the engine instantiates tensor factors for
// n = 2 only (the p = 2 pipeline), where it coincides with the binary map.
inline SparseVec iterated_shuffle(const HochschildComplex& cA, const std::vector<HLabel>& xs,
                                  const HochschildComplex& cTarget) {
    if (xs.size() != 2)
        throw PipelineError("iterated shuffle: only p = 2 tensor factors are materialized");
    return shuffle(cA, xs[0], xs[1], cTarget);
}

// Shuffle product on cA for commutative A: c(m) o sh.
inline SparseVec shuffle_product(const HochschildComplex& cA, const HochschildComplex& cAA,
                                 const SparseVec& x, const SparseVec& y) {
    if (!cA.algebra()->commutative())
        throw NotCommutative("shuffle product requires a commutative coefficient algebra");
    auto tensor = std::dynamic_pointer_cast<const TensorSquareAlgebra>(cAA.algebra());
    SparseVec sh = shuffle_chain(cA, x, y, cAA);
    VecAccum acc(cA.field());
    auto mul_map = [&](Label l) {
        auto [a, b] = tensor->components(l);
        return cA.algebra()->mul(a, b);
    };
    for (const auto& t : sh.terms)
        acc.add(apply_chain_algebra_map(cAA, cA, mul_map, t.first), t.second);
    return acc.take();
}

// phi(f0[f1|...|fk]) evaluated at w: expand the iterated diagonal of w and
// emit f0(w0)[f1(w1)|...|fk(wk)] with the Koszul signs of moving the w_i
// past the f_j. Letters of degree 0 are killed by the suspension.
inline SparseVec phi_evaluate(const WRes& W, const std::vector<HomW>& fs,
                              const HochschildComplex& cA, WIdx w) {
    if (fs.empty())
        throw PipelineError("phi: empty word");
    const PrimeField& F = cA.field();
    int k = static_cast<int>(fs.size()) - 1;
    VecAccum acc(F);
    for (const auto& [tens, c0] : W.iterated_diagonal(w, k)) {
        std::uint32_t sgn = c0;
        long tier_prefix = 0;
        bool dead = false;
        std::vector<Element> vals;
        vals.reserve(fs.size());
        for (int j = 0; j <= k; ++j) {
            if (j > 0)
                sgn = F.mul(sgn, F.sign(static_cast<long>(fs[j].degree()) * tier_prefix));
            Element e = fs[j].at(tens[j]);
            if (e.zero() || (j > 0 && cA.algebra()->element_degree(e) == 0)) {
                dead = true;
                break;
            }
            vals.push_back(std::move(e));
            tier_prefix += tens[j].tier;
        }
        if (dead)
            continue;
        // expand the product of sums into Hochschild words
        std::vector<std::pair<std::vector<Label>, std::uint32_t>> partial{{{}, 1}};
        for (int j = 1; j <= k; ++j) {
            std::vector<std::pair<std::vector<Label>, std::uint32_t>> next;
            for (const auto& [pref, c] : partial)
                for (const auto& t : vals[j].v.terms) {
                    auto p2 = pref;
                    p2.push_back(t.first);
                    next.emplace_back(std::move(p2), F.mul(c, t.second));
                }
            partial = std::move(next);
        }
        for (const auto& ht : vals[0].v.terms)
            for (const auto& [lts, c] : partial)
                acc.add(cA.word(ht.first, lts), F.mul(sgn, F.mul(ht.second, c)));
    }
    return acc.take();
}

}  // namespace hhsq
