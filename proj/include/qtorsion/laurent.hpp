#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "errors.hpp"
#include "scalar.hpp"

namespace qtorsion {

/// Integer-coefficient Laurent polynomial in b variables. No stored coefficient is zero.
class LaurentPolynomial
{
public:
    using Exponent = std::vector<std::int64_t>;
    using Terms = std::map<Exponent, BigInt>;

    explicit LaurentPolynomial(std::size_t vars = 0) : vars_(vars) {}

    static LaurentPolynomial monomial(const Exponent& e, const BigInt& c)
    {
        LaurentPolynomial p(e.size());
        p.add_term(e, c);
        return p;
    }

    static LaurentPolynomial constant(std::size_t vars, const BigInt& c)
    {
        return monomial(Exponent(vars, 0), c);
    }

    std::size_t variables() const noexcept { return vars_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    /// True iff every term has exponent 0.
    bool is_constant() const
    {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponent(vars_, 0));
    }

    void add_term(const Exponent& e, const BigInt& c)
    {
        if (e.size() != vars_)
            throw InputError("exponent length " + std::to_string(e.size()) + " but polynomial has " +
                             std::to_string(vars_) + " variables");
        if (c == 0)
            return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
            return;
        }
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }

    friend LaurentPolynomial operator+(LaurentPolynomial a, const LaurentPolynomial& b)
    {
        a.check_vars(b);
        for (const auto& [e, c] : b.terms_)
            a.add_term(e, c);
        return a;
    }

    friend LaurentPolynomial operator-(LaurentPolynomial a, const LaurentPolynomial& b)
    {
        a.check_vars(b);
        for (const auto& [e, c] : b.terms_)
            a.add_term(e, -c);
        return a;
    }

    friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b)
    {
        a.check_vars(b);
        LaurentPolynomial p(a.vars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponent e(a.vars_);
                for (std::size_t i = 0; i < a.vars_; ++i)
                    e[i] = ea[i] + eb[i];
                p.add_term(e, ca * cb);
            }
        return p;
    }

    friend bool operator==(const LaurentPolynomial& a, const LaurentPolynomial& b)
    {
        return a.vars_ == b.vars_ && a.terms_ == b.terms_;
    }

    /// Formal ∂/∂z_i.
    LaurentPolynomial partial(std::size_t i) const
    {
        if (i >= vars_)
            throw InputError("variable index " + std::to_string(i) + " out of range for " + std::to_string(vars_) +
                             " variables");
        LaurentPolynomial p(vars_);
        for (const auto& [e, c] : terms_) {
            if (e[i] == 0)
                continue;
            Exponent f = e;
            f[i] -= 1;
            p.add_term(f, c * e[i]);
        }
        return p;
    }

    /// z_i ∂/∂z_i, which multiplies each term by its i-th exponent.
    LaurentPolynomial log_partial(std::size_t i) const
    {
        if (i >= vars_)
            throw InputError("variable index out of range");
        LaurentPolynomial p(vars_);
        for (const auto& [e, c] : terms_)
            p.add_term(e, c * e[i]);
        return p;
    }

    /// Exact value at a point of the torus; every coordinate must be nonzero.
    template <class F>
    typename F::value_type evaluate(const F& field, const std::vector<typename F::value_type>& point) const
    {
        if (point.size() != vars_)
            throw InputError("point has " + std::to_string(point.size()) + " coordinates, expected " +
                             std::to_string(vars_));
        std::vector<typename F::value_type> inv;
        inv.reserve(vars_);
        for (std::size_t i = 0; i < vars_; ++i) {
            if (field.is_zero(point[i]))
                throw InputError("coordinate z" + std::to_string(i + 1) + " is zero", "point");
            inv.push_back(field.inverse(point[i]));
        }
        auto sum = field.zero();
        for (const auto& [e, c] : terms_) {
            auto term = field.from_integer(c);
            for (std::size_t i = 0; i < vars_; ++i) {
                const auto& base = e[i] < 0 ? inv[i] : point[i];
                for (std::int64_t k = 0, n = e[i] < 0 ? -e[i] : e[i]; k < n; ++k)
                    term = term * base;
            }
            sum = sum + term;
        }
        return sum;
    }

    /// Human-readable form such as "z1 + -2*z1^-1*z2".
    std::string str() const
    {
        if (terms_.empty())
            return "0";
        std::string s;
        for (const auto& [e, c] : terms_) {
            if (!s.empty())
                s += " + ";
            std::string mono;
            for (std::size_t i = 0; i < vars_; ++i) {
                if (e[i] == 0)
                    continue;
                if (!mono.empty())
                    mono += "*";
                mono += "z" + std::to_string(i + 1);
                if (e[i] != 1)
                    mono += "^" + std::to_string(e[i]);
            }
            if (mono.empty())
                s += c.str();
            else if (c == 1)
                s += mono;
            else if (c == -1)
                s += "-" + mono;
            else
                s += c.str() + "*" + mono;
        }
        return s;
    }

private:
    void check_vars(const LaurentPolynomial& o) const
    {
        if (o.vars_ != vars_)
            throw InputError("variable count mismatch");
    }

    std::size_t vars_;
    Terms terms_;
};

} // namespace qtorsion
