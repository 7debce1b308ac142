#pragma once

#include <stdexcept>
#include <string>

namespace qtorsion {

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
    explicit Error(const std::string& what, std::string where = {})
        : std::runtime_error(what), where_(std::move(where))
    {
    }

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

/// Malformed input or a violated precondition.
class InputError : public Error
{
public:
    using Error::Error;
};

/// Raised when a torsion is requested for a complex that is not acyclic.
class NotNarrowError : public Error
{
public:
    using Error::Error;
};

/// The characteristic of the field divides an invariant factor (or is 2).
class InadmissibleCharacteristic : public Error
{
public:
    InadmissibleCharacteristic(const std::string& what, std::string factor)
        : Error(what, "characteristic"), factor_(std::move(factor))
    {
    }

    const std::string& factor() const noexcept { return factor_; }

private:
    std::string factor_;
};

/// An internal consistency check failed.
class InternalError : public Error
{
public:
    using Error::Error;
};

} // namespace qtorsion
