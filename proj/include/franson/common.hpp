#ifndef FRANSON_COMMON_HPP
#define FRANSON_COMMON_HPP

#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace franson
{

// Exact SI value, m/s.
inline constexpr double kSpeedOfLight = 299'792'458.0;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr const char* kEngineVersion = "franson-sim 1.0.0";

// A value outside the mathematical domain of an operation (non-positive
// bandwidth, detuning outside the source support, negative path difference).
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// A malformed argument (even grid size, inverted sweep range, ...).
class ArgumentError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Visibility of a series whose max + min is zero.
class UndefinedVisibility : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// One or more configuration invariants failed. Carries every message, not just
// the first one encountered.
class ConfigError : public std::runtime_error
{
public:
    explicit ConfigError(std::vector<std::string> errors)
        : std::runtime_error(join(errors)), errors_(std::move(errors))
    {
    }

    const std::vector<std::string>& errors() const noexcept { return errors_; }

private:
    static std::string join(const std::vector<std::string>& errors)
    {
        std::string out;
        for (const auto& e : errors)
        {
            if (!out.empty()) out += "; ";
            out += e;
        }
        return out;
    }

    std::vector<std::string> errors_;
};

class ParseError : public std::runtime_error
{
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : std::runtime_error(what), line_(line), column_(column)
    {
    }

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace franson

#endif
