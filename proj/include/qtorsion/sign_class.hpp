#pragma once

#include <string>

#include "scalar.hpp"

namespace qtorsion {

inline Rational sign_canonical(const Rational& a) { return a < 0 ? Rational(-a) : a; }
inline Fp sign_canonical(const Fp& a) { return a.v > a.p / 2 ? -a : a; }

inline bool is_zero_scalar(const Rational& a) { return a == 0; }
inline bool is_zero_scalar(const Fp& a) { return a.v == 0; }

inline std::string scalar_str(const Rational& a) { return a.str(); }
inline std::string scalar_str(const Fp& a) { return std::to_string(a.v); }

/// A nonzero field element modulo ±1.
template <class T>
class SignClass
{
public:
    explicit SignClass(const T& v) : value_(v)
    {
        if (is_zero_scalar(v))
            throw InternalError("sign class of zero");
    }

    const T& value() const noexcept { return value_; }

    /// Positive over Q; in [1, (p-1)/2] over F_p.
    T canonical() const { return sign_canonical(value_); }

    std::string str() const { return scalar_str(canonical()); }

    friend bool operator==(const SignClass& a, const SignClass& b)
    {
        return a.value_ == b.value_ || a.value_ == -b.value_;
    }

    friend SignClass operator*(const SignClass& a, const SignClass& b) { return SignClass(a.value_ * b.value_); }
    friend SignClass operator/(const SignClass& a, const SignClass& b) { return SignClass(a.value_ / b.value_); }

    SignClass pow(long long e) const
    {
        T base = e < 0 ? T(one_like() / value_) : value_;
        unsigned long long n = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
        T acc = one_like();
        while (n) {
            if (n & 1)
                acc = acc * base;
            base = base * base;
            n >>= 1;
        }
        return SignClass(acc);
    }

private:
    T one_like() const
    {
        if constexpr (std::is_same_v<T, Fp>)
            return Fp{1, value_.p};
        else
            return T(1);
    }

    T value_;
};

/// value^e for a field element, e possibly negative.
template <class T>
T scalar_pow(const T& value, long long e)
{
    return SignClass<T>(value).pow(e).value();
}

} // namespace qtorsion
