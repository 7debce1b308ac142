#pragma once

#include <optional>
#include <vector>

#include "linalg.hpp"

namespace qtorsion {

/**
 * Affine system in unknown matrix blocks X_b with equations Σ_t L_t X_{b_t} R_t = C.
 *
 * Each equation contributes rows(C)·cols(C) scalar rows; the unknown entry
 * X_b(u, v) enters row (i, j) with coefficient L(i, u)·R(v, j).
 */
template <class F>
class LinearSystem
{
public:
    using T = typename F::value_type;
    using M = Matrix<T>;

    struct Term
    {
        std::size_t block;
        M L, R;
    };

    explicit LinearSystem(const F& field) : field_(field) {}

    std::size_t add_block(std::size_t rows, std::size_t cols)
    {
        blocks_.push_back({rows, cols, unknowns_});
        unknowns_ += rows * cols;
        return blocks_.size() - 1;
    }

    /// Term L X_block R.
    Term term(std::size_t block, M L, M R) const { return {block, std::move(L), std::move(R)}; }

    /// Term X_block R.
    Term right(std::size_t block, M R) const
    {
        return {block, identity(field_, blocks_[block].rows), std::move(R)};
    }

    /// Term L X_block.
    Term left(std::size_t block, M L) const
    {
        return {block, std::move(L), identity(field_, blocks_[block].cols)};
    }

    void add_equation(const std::vector<Term>& terms, const M& rhs)
    {
        equations_.push_back({terms, rhs});
    }

    struct Entry
    {
        std::size_t block, row, col;
        T coef;
    };

    /// Scalar equation Σ coef · X_block(row, col) = rhs.
    void add_scalar_equation(const std::vector<Entry>& entries, const T& rhs)
    {
        scalars_.push_back({entries, rhs});
    }

    std::size_t unknowns() const { return unknowns_; }

    struct Solution
    {
        std::vector<M> blocks;
        std::size_t freedom = 0; ///< dimension of the solution space
    };

    /// A solution, shifted by a random kernel element when rng is given: uniform over F_p, in [-2, 2] over Q.
    std::optional<Solution> solve(Rng* rng = nullptr) const
    {
        std::size_t rows = scalars_.size();
        for (const auto& e : equations_)
            rows += e.rhs.rows() * e.rhs.cols();
        M a = zeros(field_, rows, unknowns_), c = zeros(field_, rows, 1);
        std::size_t row0 = 0;
        for (const auto& e : scalars_) {
            for (const auto& en : e.entries)
                a(row0, blocks_[en.block].offset + en.row * blocks_[en.block].cols + en.col) += en.coef;
            c(row0, 0) = e.rhs;
            ++row0;
        }
        for (const auto& e : equations_) {
            const std::size_t er = e.rhs.rows(), ec = e.rhs.cols();
            for (const auto& t : e.terms) {
                const auto& bl = blocks_[t.block];
                if (t.L.rows() != er || t.L.cols() != bl.rows || t.R.rows() != bl.cols || t.R.cols() != ec)
                    throw InternalError("linear system term has inconsistent shape");
                for (std::size_t i = 0; i < er; ++i)
                    for (std::size_t u = 0; u < bl.rows; ++u) {
                        const T& l = t.L(i, u);
                        if (field_.is_zero(l))
                            continue;
                        for (std::size_t v = 0; v < bl.cols; ++v)
                            for (std::size_t j = 0; j < ec; ++j) {
                                const T& r = t.R(v, j);
                                if (field_.is_zero(r))
                                    continue;
                                a(row0 + i * ec + j, bl.offset + u * bl.cols + v) += l * r;
                            }
                    }
            }
            for (std::size_t i = 0; i < er; ++i)
                for (std::size_t j = 0; j < ec; ++j)
                    c(row0 + i * ec + j, 0) = e.rhs(i, j);
            row0 += er * ec;
        }
        auto x = qtorsion::solve(field_, a, c);
        if (!x)
            return std::nullopt;
        Solution s;
        const auto k = kernel_basis(field_, a);
        s.freedom = k.cols();
        if (rng && k.cols() > 0) {
            auto coef = zeros(field_, k.cols(), 1);
            for (std::size_t i = 0; i < k.cols(); ++i)
                coef(i, 0) = field_.random(*rng);
            *x = *x + k * coef;
        }
        for (const auto& bl : blocks_) {
            M m = zeros(field_, bl.rows, bl.cols);
            for (std::size_t u = 0; u < bl.rows; ++u)
                for (std::size_t v = 0; v < bl.cols; ++v)
                    m(u, v) = (*x)(bl.offset + u * bl.cols + v, 0);
            s.blocks.push_back(std::move(m));
        }
        return s;
    }

private:
    struct Block
    {
        std::size_t rows, cols, offset;
    };
    struct Equation
    {
        std::vector<Term> terms;
        M rhs;
    };

    struct ScalarEquation
    {
        std::vector<Entry> entries;
        T rhs;
    };

    F field_;
    std::vector<Block> blocks_;
    std::vector<Equation> equations_;
    std::vector<ScalarEquation> scalars_;
    std::size_t unknowns_ = 0;
};

} // namespace qtorsion
