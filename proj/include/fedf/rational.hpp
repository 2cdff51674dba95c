#ifndef FEDF_RATIONAL_HPP
#define FEDF_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace fedf {

/**
 * Exact rational number with arbitrary-precision fallback.
 *
 * Values whose reduced numerator and denominator both fit in 64 bits are
 * kept inline and operated on with 128-bit intermediates; anything larger
 * is promoted to a GMP rational and demoted again as soon as it fits.
 * Every value is in lowest terms with a positive denominator, so two equal
 * rationals always have the same representation.
 */
class Rat {
public:
    Rat() noexcept = default;
    Rat(std::int64_t value) noexcept : num_(value) {}  // NOLINT: implicit by design of arithmetic code
    Rat(std::int64_t num, std::int64_t den);

    Rat(const Rat& other) : num_(other.num_), den_(other.den_)
    {
        if (other.big_) copy_big(other);
    }
    Rat(Rat&& other) noexcept : num_(other.num_), den_(other.den_), big_(other.big_)
    {
        other.big_ = nullptr;
    }
    Rat& operator=(const Rat& other);
    Rat& operator=(Rat&& other) noexcept
    {
        if (this != &other) {
            if (big_) drop_big();
            num_ = other.num_;
            den_ = other.den_;
            big_ = other.big_;
            other.big_ = nullptr;
        }
        return *this;
    }
    ~Rat()
    {
        if (big_) drop_big();
    }

    /// Parses "n", "n/d", or a finite decimal such as "2.5" or "-0.125".
    static Rat parse(std::string_view text);

    /// Builds n/d from decimal digit strings of any length.
    static Rat from_strings(std::string_view num, std::string_view den);

    /// Exact value of a finite double (every double is a dyadic rational).
    static Rat from_double(double value);

    bool is_small() const noexcept { return !big_; }
    bool is_integer() const;
    int sign() const noexcept;

    /// Numerator/denominator when is_small(); throws std::overflow_error otherwise.
    std::int64_t num64() const;
    std::int64_t den64() const;

    std::string num_string() const;
    std::string den_string() const;
    /// "n" for integers, "n/d" otherwise.
    std::string to_string() const;
    double to_double() const;

    Rat floor() const;
    Rat ceil() const;
    /// floor() as an integer; throws std::overflow_error when out of range.
    std::int64_t floor_int() const;
    std::int64_t ceil_int() const;

    Rat operator-() const;
    Rat& operator+=(const Rat& rhs);
    Rat& operator-=(const Rat& rhs);
    Rat& operator*=(const Rat& rhs);
    Rat& operator/=(const Rat& rhs);

    friend Rat operator+(Rat lhs, const Rat& rhs) { return lhs += rhs; }
    friend Rat operator-(Rat lhs, const Rat& rhs) { return lhs -= rhs; }
    friend Rat operator*(Rat lhs, const Rat& rhs) { return lhs *= rhs; }
    friend Rat operator/(Rat lhs, const Rat& rhs) { return lhs /= rhs; }

    friend bool operator==(const Rat& a, const Rat& b) noexcept;
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) noexcept;

    friend std::ostream& operator<<(std::ostream& os, const Rat& r);

private:
    struct Big;
    struct Access;
    friend struct Access;

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    Big* big_ = nullptr;

    void copy_big(const Rat& other);
    void drop_big() noexcept;
};

Rat abs(const Rat& r);
Rat min(const Rat& a, const Rat& b);
Rat max(const Rat& a, const Rat& b);

}  // namespace fedf

#endif  // FEDF_RATIONAL_HPP
