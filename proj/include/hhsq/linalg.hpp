#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hhsq/prime_field.hpp"
#include "hhsq/sparse_vec.hpp"

namespace hhsq {

struct CompositionNotZero : std::runtime_error {
    CompositionNotZero() : std::runtime_error("homology: d_out * d_in != 0") {}
};

// Row-major sparse matrix acting on column vectors: m : F^cols -> F^rows.
struct SparseMatrix {
    std::uint32_t rows = 0, cols = 0;
    std::vector<SparseVec> row;

    SparseMatrix() = default;
    SparseMatrix(std::uint32_t r, std::uint32_t c) : rows(r), cols(c), row(r) {}

    void set(const PrimeField& F, std::uint32_t r, std::uint32_t c, std::int64_t v) {
        row[r].add_term(F, c, F.reduce(v));
    }

    SparseVec apply(const PrimeField& F, const SparseVec& v) const {
        SparseVec out;
        VecAccum acc(F);
        for (std::uint32_t r = 0; r < rows; ++r) {
            std::uint32_t dot = 0;
            auto a = row[r].terms.begin();
            auto b = v.terms.begin();
            while (a != row[r].terms.end() && b != v.terms.end()) {
                if (a->first < b->first)
                    ++a;
                else if (b->first < a->first)
                    ++b;
                else
                    dot = F.add(dot, F.mul(a->second, b->second)), ++a, ++b;
            }
            if (dot)
                acc.add(r, dot);
        }
        return acc.take();
    }

    // Column c as a vector in F^rows.
    SparseVec column(std::uint32_t c) const {
        SparseVec out;
        for (std::uint32_t r = 0; r < rows; ++r) {
            std::uint32_t v = row[r].coeff(c);
            if (v)
                out.terms.emplace_back(r, v);
        }
        return out;
    }

    static SparseMatrix compose(const PrimeField& F, const SparseMatrix& a, const SparseMatrix& b) {
        // (a*b) : F^{b.cols} -> F^{a.rows}
        SparseMatrix out(a.rows, b.cols);
        for (std::uint32_t r = 0; r < a.rows; ++r) {
            VecAccum acc(F);
            for (const auto& t : a.row[r].terms)
                acc.add(b.row[t.first], t.second);
            out.row[r] = acc.take();
        }
        return out;
    }

    bool is_zero() const {
        for (const auto& r : row)
            if (!r.zero())
                return false;
        return true;
    }
};

// Gauss-Jordan elimination with leftmost-column pivoting. The pivot column
// set it produces is the canonical (RREF) one, so kernels, particular
// solutions and homology representatives are reproducible. Within a pivot
// column the sparsest row wins (Markowitz-style row choice); below
// kDenseCols columns a dense working representation is used instead.
class Eliminated {
public:
    static constexpr std::uint32_t kDenseCols = 64;
    static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

    Eliminated(const PrimeField& F, const SparseMatrix& m) : F_(F), rows_(m.rows), cols_(m.cols) {
        if (cols_ < kDenseCols)
            run_dense(m);
        else
            run_sparse(m);
    }

    std::uint32_t rank() const { return static_cast<std::uint32_t>(piv_.size()); }
    std::uint32_t rows() const { return rows_; }
    std::uint32_t cols() const { return cols_; }

    // Pivot columns in increasing order; these index an independent set of
    // columns of the original matrix (a basis of its image).
    std::vector<std::uint32_t> pivot_columns() const {
        std::vector<std::uint32_t> out;
        out.reserve(piv_.size());
        for (const auto& pc : piv_)
            out.push_back(pc.second);
        return out;
    }

    // Canonical kernel basis: one vector per free column, in increasing
    // free-column order, with unit coefficient at the free column.
    std::vector<SparseVec> kernel_basis() const {
        std::vector<char> is_pivot(cols_, 0);
        for (const auto& pc : piv_)
            is_pivot[pc.second] = 1;
        std::vector<SparseVec> out;
        for (std::uint32_t f = 0; f < cols_; ++f) {
            if (is_pivot[f])
                continue;
            VecAccum acc(F_);
            acc.add(f, 1);
            // Jordan form: each pivot row has support {pivot col} + free cols.
            for (const auto& pc : piv_) {
                std::uint32_t c = reduced_[pc.first].coeff(f);
                if (c)
                    acc.add(pc.second, F_.neg(c));
            }
            out.push_back(acc.take());
        }
        return out;
    }

    // Particular solution of m x = b with free variables set to zero, or
    // nullopt when b is not in the image.
    std::optional<SparseVec> solve(const SparseVec& b) const {
        std::vector<std::uint32_t> bb(rows_, 0);
        for (const auto& t : b.terms) {
            if (t.first >= rows_)
                return std::nullopt;
            bb[t.first] = t.second % F_.p();
        }
        for (const auto& op : ops_) {
            if (op.target == op.source)
                bb[op.target] = F_.mul(bb[op.target], op.coeff);
            else
                bb[op.target] = F_.add(bb[op.target], F_.mul(op.coeff, bb[op.source]));
        }
        std::vector<char> has_pivot(rows_, 0);
        for (const auto& pc : piv_)
            has_pivot[pc.first] = 1;
        for (std::uint32_t r = 0; r < rows_; ++r)
            if (!has_pivot[r] && bb[r])
                return std::nullopt;
        VecAccum acc(F_);
        for (const auto& pc : piv_)
            if (bb[pc.first])
                acc.add(pc.second, bb[pc.first]);
        return acc.take();
    }

private:
    struct Op {
        std::uint32_t target, source, coeff;
    };

    void record_scale(std::uint32_t r, std::uint32_t c) { ops_.push_back({r, r, c}); }
    void record_axpy(std::uint32_t t, std::uint32_t s, std::uint32_t c) { ops_.push_back({t, s, c}); }

    void run_dense(const SparseMatrix& m) {
        std::vector<std::vector<std::uint32_t>> a(rows_, std::vector<std::uint32_t>(cols_, 0));
        for (std::uint32_t r = 0; r < rows_; ++r)
            for (const auto& t : m.row[r].terms)
                a[r][t.first] = t.second % F_.p();
        std::vector<char> done(rows_, 0);
        for (std::uint32_t c = 0; c < cols_; ++c) {
            std::uint32_t pr = kNone;
            for (std::uint32_t r = 0; r < rows_; ++r)
                if (!done[r] && a[r][c]) {
                    pr = r;
                    break;
                }
            if (pr == kNone)
                continue;
            std::uint32_t inv = F_.inv(a[pr][c]);
            if (inv != 1) {
                for (auto& v : a[pr])
                    v = F_.mul(v, inv);
                record_scale(pr, inv);
            }
            for (std::uint32_t r = 0; r < rows_; ++r) {
                if (r == pr || !a[r][c])
                    continue;
                std::uint32_t f = F_.neg(a[r][c]);
                for (std::uint32_t j = 0; j < cols_; ++j)
                    a[r][j] = F_.add(a[r][j], F_.mul(f, a[pr][j]));
                record_axpy(r, pr, f);
            }
            done[pr] = 1;
            piv_.emplace_back(pr, c);
        }
        reduced_.assign(rows_, SparseVec{});
        for (std::uint32_t r = 0; r < rows_; ++r)
            for (std::uint32_t j = 0; j < cols_; ++j)
                if (a[r][j])
                    reduced_[r].terms.emplace_back(j, a[r][j]);
    }

    void run_sparse(const SparseMatrix& m) {
        reduced_ = m.row;
        reduced_.resize(rows_);
        // column -> candidate rows (lazily cleaned)
        std::vector<std::vector<std::uint32_t>> col_rows(cols_);
        for (std::uint32_t r = 0; r < rows_; ++r)
            for (const auto& t : reduced_[r].terms)
                col_rows[t.first].push_back(r);
        std::vector<char> done(rows_, 0);
        for (std::uint32_t c = 0; c < cols_; ++c) {
            std::uint32_t pr = kNone;
            std::size_t best = 0;
            auto& cand = col_rows[c];
            std::size_t w = 0;
            for (std::size_t i = 0; i < cand.size(); ++i) {
                std::uint32_t r = cand[i];
                std::uint32_t v = reduced_[r].coeff(c);
                if (!v)
                    continue;  // stale entry
                cand[w++] = r;
                if (done[r])
                    continue;
                if (pr == kNone || reduced_[r].nnz() < best) {
                    pr = r;
                    best = reduced_[r].nnz();
                }
            }
            cand.resize(w);
            if (pr == kNone)
                continue;
            std::uint32_t inv = F_.inv(reduced_[pr].coeff(c));
            if (inv != 1) {
                reduced_[pr].scale(F_, inv);
                record_scale(pr, inv);
            }
            for (std::uint32_t r : cand) {
                if (r == pr)
                    continue;
                std::uint32_t v = reduced_[r].coeff(c);
                if (!v)
                    continue;
                std::uint32_t f = F_.neg(v);
                std::size_t before = reduced_[r].nnz();
                reduced_[r].axpy(F_, f, reduced_[pr]);
                record_axpy(r, pr, f);
                // register fill-in
                (void)before;
                for (const auto& t : reduced_[r].terms)
                    if (t.first > c)
                        col_rows[t.first].push_back(r);
            }
            done[pr] = 1;
            piv_.emplace_back(pr, c);
        }
        // prune duplicate registrations lazily; correctness does not depend on it
    }

    PrimeField F_;
    std::uint32_t rows_, cols_;
    std::vector<SparseVec> reduced_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> piv_;  // (row, col)
    std::vector<Op> ops_;
};

inline std::uint32_t rank(const PrimeField& F, const SparseMatrix& m) {
    return Eliminated(F, m).rank();
}

inline std::vector<SparseVec> kernel_basis(const PrimeField& F, const SparseMatrix& m) {
    return Eliminated(F, m).kernel_basis();
}

inline std::optional<SparseVec> solve_consistent(const PrimeField& F, const SparseMatrix& m,
                                                 const SparseVec& b) {
    return Eliminated(F, m).solve(b);
}

// ker(d_out) / im(d_in) with chosen cycle representatives and a projection
// onto homology coordinates. Representatives are the first canonical kernel
// vectors (in basis order) that complete im(d_in) to ker(d_out).
class HomologySpace {
public:
    HomologySpace(const PrimeField& F, const SparseMatrix& d_in, const SparseMatrix& d_out)
        : F_(F), space_dim_(d_out.cols) {
        if (d_in.cols > 0 && !SparseMatrix::compose(F, d_out, d_in).is_zero())
            throw CompositionNotZero();
        Eliminated in_elim(F, d_in);
        std::vector<SparseVec> image;
        for (std::uint32_t c : in_elim.pivot_columns())
            image.push_back(d_in.column(c));
        Eliminated out_elim(F, d_out);
        std::vector<SparseVec> cycles = out_elim.kernel_basis();

        // Greedily extend the image basis by canonical cycles.
        SparseMatrix probe(space_dim_, static_cast<std::uint32_t>(image.size() + cycles.size()));
        auto put_col = [&](std::uint32_t c, const SparseVec& v) {
            for (const auto& t : v.terms)
                probe.row[t.first].terms.emplace_back(c, t.second);
        };
        for (std::uint32_t j = 0; j < image.size(); ++j)
            put_col(j, image[j]);
        for (std::uint32_t j = 0; j < cycles.size(); ++j)
            put_col(static_cast<std::uint32_t>(image.size()) + j, cycles[j]);
        for (auto& r : probe.row)
            std::sort(r.terms.begin(), r.terms.end());
        Eliminated probe_elim(F, probe);
        for (std::uint32_t c : probe_elim.pivot_columns())
            if (c >= image.size())
                reps_.push_back(cycles[c - image.size()]);

        // Projection data: columns = image basis then representatives.
        SparseMatrix proj(space_dim_, static_cast<std::uint32_t>(image.size() + reps_.size()));
        for (std::uint32_t j = 0; j < image.size(); ++j)
            for (const auto& t : image[j].terms)
                proj.row[t.first].terms.emplace_back(j, t.second);
        for (std::uint32_t j = 0; j < reps_.size(); ++j)
            for (const auto& t : reps_[j].terms)
                proj.row[t.first].terms.emplace_back(static_cast<std::uint32_t>(image.size()) + j,
                                                     t.second);
        for (auto& r : proj.row)
            std::sort(r.terms.begin(), r.terms.end());
        image_dim_ = static_cast<std::uint32_t>(image.size());
        proj_ = std::make_shared<Eliminated>(F, proj);
    }

    std::uint32_t dim() const { return static_cast<std::uint32_t>(reps_.size()); }
    const std::vector<SparseVec>& representatives() const { return reps_; }

    // Coordinates of a cycle in the homology basis; nullopt if the vector is
    // not in ker(d_out) + im(d_in) (i.e. the caller's cycle check failed).
    std::optional<SparseVec> project(const SparseVec& cycle) const {
        auto sol = proj_->solve(cycle);
        if (!sol)
            return std::nullopt;
        SparseVec out;
        for (const auto& t : sol->terms)
            if (t.first >= image_dim_)
                out.terms.emplace_back(t.first - image_dim_, t.second);
        return out;
    }

private:
    PrimeField F_;
    std::uint32_t space_dim_;
    std::uint32_t image_dim_ = 0;
    std::vector<SparseVec> reps_;
    std::shared_ptr<Eliminated> proj_;
};

inline HomologySpace homology_decomposition(const PrimeField& F, const SparseMatrix& d_in,
                                            const SparseMatrix& d_out) {
    return HomologySpace(F, d_in, d_out);
}

}  // namespace hhsq
