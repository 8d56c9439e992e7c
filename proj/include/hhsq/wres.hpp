#pragma once

#include <map>
#include <string>
#include <vector>

#include "hhsq/algebra.hpp"

namespace hhsq {

// Basis element e_i tau^s of the standard small free resolution W of Z/p.
struct WIdx {
    int tier = 0;     // homological degree i
    int power = 0;    // s, 0 <= s < p
    auto operator<=>(const WIdx&) const = default;
};

// W_i = e_i F_p[pi] with boundary alternating between (1+tau) and the norm,
// the explicit diagonal approximation, augmentation and unit section. All
// formulas are local in the tier, so W is materialized only as far as asked.
class WRes {
public:
    explicit WRes(PrimeField F) : F_(F), p_(static_cast<int>(F.p())) {}

    const PrimeField& field() const { return F_; }
    int p() const { return p_; }

    using Chain = std::vector<std::pair<WIdx, std::uint32_t>>;
    using PairChain = std::vector<std::pair<std::pair<WIdx, WIdx>, std::uint32_t>>;
    using Tensor = std::vector<WIdx>;
    using TensorChain = std::vector<std::pair<Tensor, std::uint32_t>>;

    Chain boundary(WIdx w) const {
        Chain out;
        if (w.tier == 0)
            return out;
        if (w.tier % 2 == 1) {
            // (1 + tau) e_{i-1}
            out.emplace_back(WIdx{w.tier - 1, w.power}, 1);
            out.emplace_back(WIdx{w.tier - 1, shift(w.power, 1)}, 1);
        } else {
            // norm element
            for (int s = 0; s < p_; ++s)
                out.emplace_back(WIdx{w.tier - 1, shift(w.power, s)}, 1);
        }
        normalize(out);
        return out;
    }

    // psi(e_i tau^s) = psi(e_i)(tau^s (x) tau^s).
    PairChain diagonal(WIdx w) const {
        PairChain out;
        int i = w.tier;
        if (i % 2 == 1) {
            int l = (i - 1) / 2;
            for (int j = 0; j <= l; ++j) {
                int k = l - j;
                out.emplace_back(std::make_pair(WIdx{2 * j, 0}, WIdx{2 * k + 1, 0}), 1);
                out.emplace_back(std::make_pair(WIdx{2 * j + 1, 0}, WIdx{2 * k, shift(0, -1)}),
                                 1);
            }
        } else {
            int l = i / 2;
            for (int j = 0; j <= l; ++j)
                out.emplace_back(std::make_pair(WIdx{2 * j, 0}, WIdx{2 * (l - j), 0}), 1);
            for (int j = 0; 2 * j + 2 <= i; ++j) {
                int k = l - 1 - j;
                for (int r = 0; r < p_; ++r)
                    for (int s = r + 1; s < p_; ++s)
                        out.emplace_back(std::make_pair(WIdx{2 * j + 1, shift(0, -r)},
                                                        WIdx{2 * k + 1, shift(0, -s)}),
                                         1);
            }
        }
        for (auto& t : out) {
            t.first.first.power = shift(t.first.first.power, w.power);
            t.first.second.power = shift(t.first.second.power, w.power);
        }
        return out;
    }

    // Iterated diagonal with k+1 output factors: psi^{(1)} = psi,
    // psi^{(k+1)} = (id (x) psi) o psi^{(k)}.
    TensorChain iterated_diagonal(WIdx w, int k) const {
        if (k == 0)
            return {{Tensor{w}, 1}};
        TensorChain cur;
        for (const auto& [pair, c] : diagonal(w))
            cur.emplace_back(Tensor{pair.first, pair.second}, c);
        for (int step = 1; step < k; ++step) {
            TensorChain next;
            for (const auto& [tens, c] : cur) {
                for (const auto& [pair, c2] : diagonal(tens.back())) {
                    Tensor t(tens.begin(), tens.end() - 1);
                    t.push_back(pair.first);
                    t.push_back(pair.second);
                    next.emplace_back(std::move(t), F_.mul(c, c2));
                }
            }
            cur = std::move(next);
        }
        return cur;
    }

    std::uint32_t augmentation(WIdx w) const { return w.tier == 0 ? 1u : 0u; }
    WIdx eta() const { return WIdx{0, 0}; }

    int shift(int s, int by) const {
        int v = (s + by) % p_;
        return v < 0 ? v + p_ : v;
    }

    static std::string name(WIdx w) {
        std::string out = "e" + std::to_string(w.tier);
        for (int s = 0; s < w.power; ++s)
            out += "t";
        return out;
    }

private:
    static void normalize(Chain& c) {
        std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    }

    PrimeField F_;
    int p_;
};

// Element of Hom^k(W, A): the finite family w -> f(w) in A^{k - tier(w)}.
class HomW {
public:
    HomW(AlgebraPtr A, int degree) : A_(std::move(A)), deg_(degree) {}

    const AlgebraPtr& coefficients() const { return A_; }
    int degree() const { return deg_; }

    void set(WIdx w, Element value) {
        if (value.zero()) {
            vals_.erase(w);
            return;
        }
        if (A_->element_degree(value) != deg_ - w.tier)
            throw DegreeMismatch("Hom(W,A) value at " + WRes::name(w) + " must lie in A^" +
                                 std::to_string(deg_ - w.tier));
        vals_[w] = std::move(value);
    }

    Element at(WIdx w) const {
        auto it = vals_.find(w);
        return it == vals_.end() ? A_->zero() : it->second;
    }

    const std::map<WIdx, Element>& support() const { return vals_; }

    bool zero() const { return vals_.empty(); }

    Element ev0() const { return at(WIdx{0, 0}); }

    HomW plus(const HomW& other, std::uint32_t c = 1) const {
        HomW out(A_, deg_);
        out.vals_ = vals_;
        const PrimeField& F = A_->field();
        for (const auto& [w, v] : other.vals_) {
            auto it = out.vals_.find(w);
            if (it == out.vals_.end()) {
                Element e = A_->scale(v, c);
                if (!e.zero())
                    out.vals_[w] = e;
            } else {
                it->second.v.axpy(F, c, v.v);
                if (it->second.zero())
                    out.vals_.erase(it);
            }
        }
        return out;
    }

    // (sigma^t f)(w) = f(w sigma^t)
    HomW act(const WRes& W, int t) const {
        HomW out(A_, deg_);
        for (const auto& [w, v] : vals_)
            out.vals_[WIdx{w.tier, W.shift(w.power, -t)}] = v;
        return out;
    }

    bool operator==(const HomW& o) const {
        if (deg_ != o.deg_ || vals_.size() != o.vals_.size())
            return false;
        for (const auto& [w, v] : vals_) {
            auto it = o.vals_.find(w);
            if (it == o.vals_.end() || !(it->second.v == v.v))
                return false;
        }
        return true;
    }

private:
    AlgebraPtr A_;
    int deg_;
    std::map<WIdx, Element> vals_;
};

// The unit rho(1): e_0 tau^s -> 1, zero above tier 0.
inline HomW hom_unit(const WRes& W, AlgebraPtr A) {
    HomW out(A, 0);
    for (int s = 0; s < W.p(); ++s)
        out.set(WIdx{0, s}, A->unit_element());
    return out;
}

// Df = d o f - (-1)^k f o del.
inline HomW hom_differential(const WRes& W, const HomW& f) {
    const AlgebraPtr& A = f.coefficients();
    const PrimeField& F = A->field();
    HomW out(A, f.degree() + 1);
    std::uint32_t sgn = F.neg(F.sign(f.degree()));
    std::map<WIdx, Element> acc;
    auto add = [&](WIdx w, const Element& e, std::uint32_t c) {
        if (e.zero() || c == 0)
            return;
        auto it = acc.find(w);
        if (it == acc.end())
            acc.emplace(w, A->scale(e, c));
        else
            it->second.v.axpy(F, c, e.v);
    };
    int max_tier = 0;
    for (const auto& [w, v] : f.support()) {
        add(w, A->d(v), 1);
        max_tier = std::max(max_tier, w.tier + 1);
    }
    for (int i = 0; i <= max_tier; ++i)
        for (int s = 0; s < W.p(); ++s) {
            WIdx w{i, s};
            for (const auto& [b, c] : W.boundary(w))
                add(w, f.at(b), F.mul(sgn, c));
        }
    for (auto& [w, v] : acc)
        out.set(w, v);
    return out;
}

// f cup g = m o (f (x) g) o psi, with the Koszul sign (-1)^{|g| tier(w')}.
inline HomW cup(const WRes& W, const HomW& f, const HomW& g) {
    const AlgebraPtr& A = f.coefficients();
    if (A.get() != g.coefficients().get())
        throw PipelineError("cup: mismatched coefficient algebras");
    const PrimeField& F = A->field();
    HomW out(A, f.degree() + g.degree());
    // support of f cup g sits in tiers <= deg f + deg g
    std::map<WIdx, Element> acc;
    for (int i = 0; i <= f.degree() + g.degree(); ++i)
        for (int s = 0; s < W.p(); ++s) {
            WIdx w{i, s};
            VecAccum a(F);
            for (const auto& [pair, c] : W.diagonal(w)) {
                const Element fv = f.at(pair.first);
                if (fv.zero())
                    continue;
                const Element gv = g.at(pair.second);
                if (gv.zero())
                    continue;
                std::uint32_t sgn = F.sign(static_cast<long>(g.degree()) * pair.first.tier);
                Element prod = A->mul(fv, gv);
                a.add(prod.v, F.mul(c, sgn));
            }
            SparseVec v = a.take();
            if (!v.zero())
                acc[w] = A->element(std::move(v));
        }
    for (auto& [w, v] : acc)
        out.set(w, v);
    return out;
}

}  // namespace hhsq
