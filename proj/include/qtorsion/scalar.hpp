#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

#include "errors.hpp"
#include "rng.hpp"

namespace qtorsion {

using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

namespace detail {

inline bool is_decimal(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (c < '0' || c > '9')
            return false;
    return true;
}

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

} // namespace detail

/// Parses "[-]digits".
inline BigInt parse_integer(std::string_view text)
{
    std::string_view s = detail::trim(text);
    bool neg = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!detail::is_decimal(s))
        throw InputError("malformed integer '" + std::string(text) + "'");
    BigInt v{std::string(s)};
    return neg ? BigInt(-v) : v;
}

/// Parses "[-]n" or "[-]n/d" with d nonzero; returns numerator and denominator, d > 0.
inline std::pair<BigInt, BigInt> parse_fraction(std::string_view text)
{
    std::string_view s = detail::trim(text);
    const auto slash = s.find('/');
    if (slash == std::string_view::npos)
        return {parse_integer(s), BigInt(1)};
    BigInt n = parse_integer(s.substr(0, slash));
    std::string_view ds = detail::trim(s.substr(slash + 1));
    if (!detail::is_decimal(ds))
        throw InputError("malformed rational '" + std::string(text) + "'");
    BigInt d{std::string(ds)};
    if (d == 0)
        throw InputError("zero denominator in '" + std::string(text) + "'");
    return {n, d};
}

inline bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t q = 2; q * q <= n; ++q)
        if (n % q == 0)
            return false;
    return true;
}

/// Element of Z/p. Both operands of a binary operation carry the same p.
struct Fp
{
    std::uint32_t v = 0;
    std::uint32_t p = 0;

    friend bool operator==(const Fp& a, const Fp& b) noexcept { return a.v == b.v && a.p == b.p; }

    friend Fp operator+(const Fp& a, const Fp& b)
    {
        check(a, b);
        std::uint64_t s = std::uint64_t(a.v) + b.v;
        return {std::uint32_t(s >= a.p ? s - a.p : s), a.p};
    }
    friend Fp operator-(const Fp& a, const Fp& b)
    {
        check(a, b);
        return {a.v >= b.v ? a.v - b.v : std::uint32_t(std::uint64_t(a.v) + a.p - b.v), a.p};
    }
    friend Fp operator-(const Fp& a) { return {a.v == 0 ? 0u : a.p - a.v, a.p}; }
    friend Fp operator*(const Fp& a, const Fp& b)
    {
        check(a, b);
        return {std::uint32_t(std::uint64_t(a.v) * b.v % a.p), a.p};
    }
    friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inverse(); }

    Fp& operator+=(const Fp& o) { return *this = *this + o; }
    Fp& operator-=(const Fp& o) { return *this = *this - o; }
    Fp& operator*=(const Fp& o) { return *this = *this * o; }
    Fp& operator/=(const Fp& o) { return *this = *this / o; }

    Fp inverse() const
    {
        if (v == 0)
            throw InternalError("inverse of zero in F_" + std::to_string(p));
        // Extended Euclid on (v, p).
        std::int64_t r0 = p, r1 = v, s0 = 0, s1 = 1;
        while (r1 != 0) {
            std::int64_t q = r0 / r1;
            std::int64_t t = r0 - q * r1;
            r0 = r1;
            r1 = t;
            t = s0 - q * s1;
            s0 = s1;
            s1 = t;
        }
        if (s0 < 0)
            s0 += p;
        return {std::uint32_t(s0), p};
    }

private:
    static void check(const Fp& a, const Fp& b)
    {
        if (a.p != b.p)
            throw InternalError("mixed moduli " + std::to_string(a.p) + " and " + std::to_string(b.p));
    }
};

/// The field Q.
struct RationalField
{
    using value_type = Rational;

    value_type zero() const { return Rational(0); }
    value_type one() const { return Rational(1); }
    value_type from_integer(const BigInt& n) const { return Rational(n); }
    value_type from_int(long long n) const { return Rational(n); }
    value_type from_fraction(const BigInt& n, const BigInt& d) const { return Rational(n, d); }
    bool is_zero(const value_type& a) const { return a == 0; }
    value_type inverse(const value_type& a) const
    {
        if (a == 0)
            throw InternalError("inverse of zero in Q");
        return 1 / a;
    }
    value_type parse(std::string_view s) const
    {
        auto [n, d] = parse_fraction(s);
        return Rational(n, d);
    }
    std::string format(const value_type& a) const { return a.str(); }
    std::uint32_t characteristic() const { return 0; }
    std::string name() const { return "Q"; }

    /// Representative of a modulo sign.
    value_type sign_canonical(const value_type& a) const { return a < 0 ? value_type(-a) : a; }

    /// Small integer in [-2, 2].
    value_type random(Rng& rng) const { return Rational(rng.uniform(-2, 2)); }
};

/// The field Z/p for an odd prime p.
struct PrimeField
{
    using value_type = Fp;

    std::uint32_t p;

    explicit PrimeField(std::uint32_t prime) : p(prime) {}

    value_type zero() const { return {0, p}; }
    value_type one() const { return {1 % p, p}; }
    value_type from_integer(const BigInt& n) const
    {
        BigInt r = n % p;
        if (r < 0)
            r += p;
        return {r.convert_to<std::uint32_t>(), p};
    }
    value_type from_int(long long n) const
    {
        long long r = n % static_cast<long long>(p);
        if (r < 0)
            r += p;
        return {std::uint32_t(r), p};
    }
    value_type from_fraction(const BigInt& n, const BigInt& d) const
    {
        value_type dd = from_integer(d);
        if (dd.v == 0)
            throw InadmissibleCharacteristic("denominator " + d.str() + " vanishes in F_" + std::to_string(p),
                                             d.str());
        return from_integer(n) / dd;
    }
    value_type from_rational(const Rational& q) const
    {
        return from_fraction(boost::multiprecision::numerator(q), boost::multiprecision::denominator(q));
    }
    bool is_zero(const value_type& a) const { return a.v == 0; }
    value_type inverse(const value_type& a) const { return a.inverse(); }
    value_type parse(std::string_view s) const
    {
        auto [n, d] = parse_fraction(s);
        return from_fraction(n, d);
    }
    std::string format(const value_type& a) const { return std::to_string(a.v); }
    std::uint32_t characteristic() const { return p; }
    std::string name() const { return "Fp:" + std::to_string(p); }

    /// Representative of ±a in [0, (p-1)/2].
    value_type sign_canonical(const value_type& a) const { return a.v > p / 2 ? -a : a; }

    value_type random(Rng& rng) const { return {std::uint32_t(rng.below(p)), p}; }
};

/// Converts a rational into any field; over F_p the denominator must be a unit.
template <class F>
typename F::value_type from_rational(const F& field, const Rational& q)
{
    return field.from_fraction(boost::multiprecision::numerator(q), boost::multiprecision::denominator(q));
}

/// Runtime selection of the coefficient field.
struct FieldSpec
{
    enum class Kind { Q, Fp };
    Kind kind = Kind::Q;
    std::uint32_t p = 0;

    static FieldSpec rationals() { return {}; }

    static FieldSpec prime(std::uint64_t p)
    {
        if (p == 2)
            throw InadmissibleCharacteristic("characteristic 2 is not supported", "2");
        if (p > 0x7fffffffull || !is_prime(p))
            throw InputError("field modulus " + std::to_string(p) + " is not an odd prime below 2^31", "field");
        FieldSpec f;
        f.kind = Kind::Fp;
        f.p = static_cast<std::uint32_t>(p);
        return f;
    }

    /// Accepts "Q" or "Fp:<p>".
    static FieldSpec parse(std::string_view s)
    {
        if (s == "Q")
            return rationals();
        if (s.substr(0, 3) == "Fp:" && detail::is_decimal(s.substr(3)) && s.size() <= 14)
            return prime(std::stoull(std::string(s.substr(3))));
        throw InputError("unknown field '" + std::string(s) + "', expected Q or Fp:<p>", "field");
    }

    std::string str() const { return kind == Kind::Q ? "Q" : "Fp:" + std::to_string(p); }

    bool is_rational() const { return kind == Kind::Q; }

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

/// Invokes f with RationalField or PrimeField according to spec.
template <class Fn>
decltype(auto) visit_field(const FieldSpec& spec, Fn&& f)
{
    if (spec.kind == FieldSpec::Kind::Q)
        return f(RationalField{});
    return f(PrimeField{spec.p});
}

template <class F>
inline constexpr bool is_rational_field_v = std::is_same_v<F, RationalField>;

} // namespace qtorsion
