#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "hhsq/algebra.hpp"

namespace hhsq {

// A (x) A with the Koszul product (a(x)b)(a'(x)b') = (-1)^{|b||a'|} aa'(x)bb'
// and the transposition involution tau(a(x)b) = (-1)^{|a||b|} b(x)a.
class TensorSquareAlgebra : public Algebra {
public:
    explicit TensorSquareAlgebra(AlgebraPtr base)
        : Algebra(base->field(), base->truncation()), base_(std::move(base)) {
        unit_ = intern(base_->unit(), base_->unit());
    }

    const AlgebraPtr& base() const { return base_; }

    Label pair_label(Label a, Label b) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        return const_cast<TensorSquareAlgebra*>(this)->intern(a, b);
    }
    std::pair<Label, Label> components(Label l) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        return records_[l];
    }

    Label unit() const override { return unit_; }

    int degree(Label l) const override {
        auto [a, b] = components(l);
        return base_->degree(a) + base_->degree(b);
    }

    std::string name(Label l) const override {
        auto [a, b] = components(l);
        return base_->name(a) + "⊗" + base_->name(b);
    }

    Element mul(Label x, Label y) const override {
        auto [a, b] = components(x);
        auto [a2, b2] = components(y);
        int deg = degree(x) + degree(y);
        if (deg > N_)
            throw TruncationExceeded(deg, N_);
        std::uint32_t sgn = F_.sign(static_cast<long>(base_->degree(b)) * base_->degree(a2));
        Element left = base_->mul(a, a2);
        Element right = base_->mul(b, b2);
        VecAccum acc(F_);
        for (const auto& ta : left.v.terms)
            for (const auto& tb : right.v.terms)
                acc.add(pair_label(ta.first, tb.first),
                        F_.mul(sgn, F_.mul(ta.second, tb.second)));
        return element(acc.take());
    }

    Element d(Label l) const override {
        auto [a, b] = components(l);
        VecAccum acc(F_);
        Element da = base_->d(a);
        for (const auto& t : da.v.terms)
            acc.add(pair_label(t.first, b), t.second);
        Element db = base_->d(b);
        std::uint32_t sgn = F_.sign(base_->degree(a));
        for (const auto& t : db.v.terms)
            acc.add(pair_label(a, t.first), F_.mul(sgn, t.second));
        return element(acc.take());
    }

    bool has_involution() const override { return true; }

    Element involution(Label l) const override {
        auto [a, b] = components(l);
        std::uint32_t sgn = F_.sign(static_cast<long>(base_->degree(a)) * base_->degree(b));
        return element(SparseVec::unit(pair_label(b, a), sgn));
    }

    // a (x) b as an element, from base components.
    Element tensor(Label a, Label b) const { return element(SparseVec::unit(pair_label(a, b))); }

protected:
    std::vector<Label> enumerate(int n) const override {
        std::vector<Label> out;
        for (int da = 0; da <= n; ++da)
            for (Label a : base_->basis(da))
                for (Label b : base_->basis(n - da))
                    out.push_back(pair_label(a, b));
        return out;
    }

private:
    Label intern(Label a, Label b) {
        auto key = (static_cast<std::uint64_t>(a) << 32) | b;
        auto it = index_.find(key);
        if (it != index_.end())
            return it->second;
        Label l = static_cast<Label>(records_.size());
        records_.emplace_back(a, b);
        index_.emplace(key, l);
        return l;
    }

    AlgebraPtr base_;
    Label unit_;
    mutable std::vector<std::pair<Label, Label>> records_;
    mutable std::unordered_map<std::uint64_t, Label> index_;
};

}  // namespace hhsq
