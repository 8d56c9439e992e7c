#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hhsq/algebra.hpp"
#include "hhsq/tensor_square.hpp"

namespace hhsq {

// The free model T(V^) on V^ = V' + V'' + V'#V'' for a minimal algebra
// (TV, d_V), with the projection q : T(V^) -> TV (x) TV and the involution
// swapping the two copies. Sharp generators v'#w'' (degree |v|+|w|-1) carry
// the differential v'w'' + w''v' and are created only for pairs within the
// truncation bound; p = 2 throughout.
class VhatAlgebra : public FreeAlgebra {
public:
    enum class Kind { Primed, DoublePrimed, Sharp };

    struct GenInfo {
        Kind kind;
        std::uint32_t v = 0;  // base generator index
        std::uint32_t w = 0;  // second base generator index (Sharp only)
    };

    VhatAlgebra(PrimeField F, int truncation, std::vector<FreeGenerator> gens,
                std::vector<GenInfo> info, std::shared_ptr<const FreeAlgebra> base,
                std::shared_ptr<const TensorSquareAlgebra> tensor)
        : FreeAlgebra(F, truncation, std::move(gens)),
          info_(std::move(info)),
          base_(std::move(base)),
          tensor_(std::move(tensor)) {}

    const std::shared_ptr<const FreeAlgebra>& base() const { return base_; }
    const std::shared_ptr<const TensorSquareAlgebra>& tensor() const { return tensor_; }
    const GenInfo& info(std::uint32_t gen) const { return info_[gen]; }

    std::uint32_t primed(std::uint32_t v) const { return primed_at_ + v; }
    std::uint32_t doubleprimed(std::uint32_t v) const { return doubleprimed_at_ + v; }
    bool has_sharp(std::uint32_t v, std::uint32_t w) const {
        return sharp_at_.count((static_cast<std::uint64_t>(v) << 32) | w) > 0;
    }
    std::uint32_t sharp(std::uint32_t v, std::uint32_t w) const {
        return sharp_at_.at((static_cast<std::uint64_t>(v) << 32) | w);
    }

    // q on a word: algebra-map image in TV (x) TV (zero on sharp letters).
    Element q(Label l) const {
        Element out = tensor_->unit_element();
        for (std::uint32_t g : word_of(l)) {
            const GenInfo& gi = info_[g];
            if (gi.kind == Kind::Sharp)
                return tensor_->zero();
            Label vg = base_->generator_label(gi.v);
            Element factor = gi.kind == Kind::Primed ? tensor_->tensor(vg, base_->unit())
                                                     : tensor_->tensor(base_->unit(), vg);
            out = tensor_->mul(out, factor);
        }
        return out;
    }

    Element q(const Element& e) const {
        VecAccum acc(F_);
        for (const auto& t : e.v.terms)
            acc.add(q(t.first).v, t.second);
        return tensor_->element(acc.take());
    }

    bool has_involution() const override { return true; }

    // tau swaps primed and double-primed copies letterwise; on sharp
    // generators v'#w'' -> w'#v''. Signs vanish at p = 2 (the only prime the
    // V^ pipeline supports).
    Element involution(Label l) const override {
        Word w = word_of(l);
        for (auto& g : w) {
            const GenInfo& gi = info_[g];
            switch (gi.kind) {
                case Kind::Primed: g = doubleprimed(gi.v); break;
                case Kind::DoublePrimed: g = primed(gi.v); break;
                case Kind::Sharp: g = sharp(gi.w, gi.v); break;
            }
        }
        return element(SparseVec::unit(label_of_word(w)));
    }

    friend std::shared_ptr<VhatAlgebra> build_vhat(std::shared_ptr<const FreeAlgebra> base);

private:
    std::vector<GenInfo> info_;
    std::shared_ptr<const FreeAlgebra> base_;
    std::shared_ptr<const TensorSquareAlgebra> tensor_;
    std::uint32_t primed_at_ = 0, doubleprimed_at_ = 0;
    std::unordered_map<std::uint64_t, std::uint32_t> sharp_at_;
};

// Assemble T(V^) from a 1-connected minimal algebra. Sharp pairs are created
// lazily for |v|+|w|-1 within the truncation bound and require d_V = 0 on
// both members.
inline std::shared_ptr<VhatAlgebra> build_vhat(std::shared_ptr<const FreeAlgebra> base) {
    if (base->field().p() != 2)
        throw ValidationError("the V^ model is built for p = 2 only");
    if (!base->minimal())
        throw ValidationError("V^ requires a minimal algebra (d V in T^{>=2} V)");
    int N = base->truncation();
    std::vector<FreeGenerator> gens;
    std::vector<VhatAlgebra::GenInfo> info;
    std::uint32_t n = base->generator_count();
    std::uint32_t primed_at = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
        gens.push_back({base->generator(v).name + "'", base->generator(v).degree});
        info.push_back({VhatAlgebra::Kind::Primed, v, 0});
    }
    std::uint32_t doubleprimed_at = n;
    for (std::uint32_t v = 0; v < n; ++v) {
        gens.push_back({base->generator(v).name + "''", base->generator(v).degree});
        info.push_back({VhatAlgebra::Kind::DoublePrimed, v, 0});
    }
    std::unordered_map<std::uint64_t, std::uint32_t> sharp_at;
    for (std::uint32_t v = 0; v < n; ++v)
        for (std::uint32_t w = 0; w < n; ++w) {
            int deg = base->generator(v).degree + base->generator(w).degree - 1;
            if (deg > N)
                continue;
            if (!base->generator_closed(v))
                throw UnsupportedDifferential(base->generator(v).name);
            if (!base->generator_closed(w))
                throw UnsupportedDifferential(base->generator(w).name);
            sharp_at[(static_cast<std::uint64_t>(v) << 32) | w] =
                static_cast<std::uint32_t>(gens.size());
            info.push_back({VhatAlgebra::Kind::Sharp, v, w});
            gens.push_back(
                {base->generator(v).name + "'#" + base->generator(w).name + "''", deg});
        }

    auto tensor = std::make_shared<TensorSquareAlgebra>(base);
    auto out = std::make_shared<VhatAlgebra>(base->field(), N, gens, info, base, tensor);
    out->primed_at_ = primed_at;
    out->doubleprimed_at_ = doubleprimed_at;
    out->sharp_at_ = sharp_at;

    // d on the primed/double-primed copies: two copies of d_V.
    auto copy_diff = [&](std::uint32_t v, const char* suffix) {
        Element dv = base->d(base->generator_label(v));
        std::vector<std::pair<std::vector<std::string>, std::int64_t>> image;
        for (const auto& t : dv.v.terms) {
            std::vector<std::string> names;
            for (std::uint32_t g : base->word_of(t.first))
                names.push_back(base->generator(g).name + suffix);
            image.emplace_back(std::move(names), t.second);
        }
        out->set_differential(base->generator(v).name + suffix, image);
    };
    for (std::uint32_t v = 0; v < n; ++v) {
        copy_diff(v, "'");
        copy_diff(v, "''");
    }
    for (const auto& [key, g] : sharp_at) {
        std::uint32_t v = static_cast<std::uint32_t>(key >> 32);
        std::uint32_t w = static_cast<std::uint32_t>(key & 0xffffffffu);
        std::string vp = base->generator(v).name + "'";
        std::string wpp = base->generator(w).name + "''";
        out->set_differential(out->generator(g).name,
                              {{{vp, wpp}, 1}, {{wpp, vp}, 1}});
    }
    return out;
}

}  // namespace hhsq
