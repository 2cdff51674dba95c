#include "fedf/rational.hpp"

#include <gmpxx.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace fedf {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr i128 kMin64 = std::numeric_limits<std::int64_t>::min();
constexpr i128 kMax64 = std::numeric_limits<std::int64_t>::max();

bool fits64(i128 v) { return v >= kMin64 && v <= kMax64; }

std::uint64_t gcd64(std::uint64_t a, std::uint64_t b)
{
    if (a == 0) return b;
    if (b == 0) return a;
    const int shift = __builtin_ctzll(a | b);
    a >>= __builtin_ctzll(a);
    do {
        b >>= __builtin_ctzll(b);
        if (a > b) std::swap(a, b);
        b -= a;
    } while (b != 0);
    return a << shift;
}

int ctz128(u128 v)
{
    const auto lo = static_cast<std::uint64_t>(v);
    if (lo != 0) return __builtin_ctzll(lo);
    return 64 + __builtin_ctzll(static_cast<std::uint64_t>(v >> 64));
}

u128 gcd128(u128 a, u128 b)
{
    if (a == 0) return b;
    if (b == 0) return a;
    const int shift = ctz128(a | b);
    a >>= ctz128(a);
    do {
        b >>= ctz128(b);
        if (a > b) std::swap(a, b);
        b -= a;
    } while (b != 0);
    return a << shift;
}

u128 abs128(i128 v) { return v < 0 ? -static_cast<u128>(v) : static_cast<u128>(v); }

mpz_class to_mpz(i128 v)
{
    const u128 mag = abs128(v);
    mpz_class z(static_cast<unsigned long>(static_cast<std::uint64_t>(mag >> 64)));
    z <<= 64;
    z += static_cast<unsigned long>(static_cast<std::uint64_t>(mag));
    if (v < 0) z = -z;
    return z;
}

// d > 0
std::int64_t floor_div(std::int64_t n, std::int64_t d)
{
    std::int64_t q = n / d;
    if (n % d != 0 && n < 0) --q;
    return q;
}

bool all_digits(std::string_view s)
{
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

}  // namespace

struct Rat::Big {
    mpq_class q;
};

struct Rat::Access {
    static void set_small(Rat& r, std::int64_t n, std::int64_t d)
    {
        if (r.big_) r.drop_big();
        r.num_ = n;
        r.den_ = d;
    }

    // d > 0; reduces and stores.
    static void set_i128(Rat& r, i128 n, i128 d)
    {
        if (n == 0) {
            set_small(r, 0, 1);
            return;
        }
        if (fits64(n) && fits64(d)) {
            const auto g = static_cast<std::int64_t>(
                gcd64(static_cast<std::uint64_t>(abs128(n)), static_cast<std::uint64_t>(d)));
            set_small(r, static_cast<std::int64_t>(n) / g, static_cast<std::int64_t>(d) / g);
            return;
        }
        const u128 g = gcd128(abs128(n), static_cast<u128>(d));
        n /= static_cast<i128>(g);
        d /= static_cast<i128>(g);
        if (fits64(n) && fits64(d)) {
            set_small(r, static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
            return;
        }
        mpq_class q(to_mpz(n), to_mpz(d));
        set_mpq(r, std::move(q));
    }

    // q must be canonical.
    static void set_mpq(Rat& r, mpq_class q)
    {
        if (mpz_fits_slong_p(q.get_num_mpz_t()) && mpz_fits_slong_p(q.get_den_mpz_t())) {
            set_small(r, q.get_num().get_si(), q.get_den().get_si());
            return;
        }
        if (r.big_)
            r.big_->q = std::move(q);
        else
            r.big_ = new Big{std::move(q)};
    }

    static mpq_class to_mpq(const Rat& r)
    {
        if (r.big_) return r.big_->q;
        mpq_class q(mpz_class(static_cast<long>(r.num_)), mpz_class(static_cast<long>(r.den_)));
        return q;
    }
};

Rat::Rat(std::int64_t num, std::int64_t den)
{
    if (den == 0) throw std::domain_error("Rat: zero denominator");
    i128 n = num;
    i128 d = den;
    if (d < 0) {
        n = -n;
        d = -d;
    }
    Access::set_i128(*this, n, d);
}

void Rat::copy_big(const Rat& other)
{
    big_ = new Big(*other.big_);
}

void Rat::drop_big() noexcept
{
    delete big_;
    big_ = nullptr;
}

Rat& Rat::operator=(const Rat& other)
{
    if (this == &other) return *this;
    num_ = other.num_;
    den_ = other.den_;
    if (other.big_) {
        if (big_)
            big_->q = other.big_->q;
        else
            big_ = new Big(*other.big_);
    } else if (big_) {
        drop_big();
    }
    return *this;
}

Rat Rat::from_strings(std::string_view num, std::string_view den)
{
    bool neg = false;
    if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
        neg = num.front() == '-';
        num.remove_prefix(1);
    }
    if (!all_digits(num) || !all_digits(den))
        throw std::invalid_argument("Rat: malformed rational '" + std::string(num) + "/" +
                                    std::string(den) + "'");
    mpz_class n(std::string(num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) throw std::invalid_argument("Rat: zero denominator");
    if (neg) n = -n;
    mpq_class q(n, d);
    q.canonicalize();
    Rat r;
    Access::set_mpq(r, std::move(q));
    return r;
}

Rat Rat::parse(std::string_view text)
{
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
    if (text.empty()) throw std::invalid_argument("Rat: empty number");

    if (const auto slash = text.find('/'); slash != std::string_view::npos)
        return from_strings(text.substr(0, slash), text.substr(slash + 1));

    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        bool neg = false;
        if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) {
            neg = whole.front() == '-';
            whole.remove_prefix(1);
        }
        if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
            (!frac.empty() && !all_digits(frac)))
            throw std::invalid_argument("Rat: malformed decimal '" + std::string(text) + "'");
        std::string digits = std::string(whole) + std::string(frac);
        if (neg) digits.insert(digits.begin(), '-');
        return from_strings(digits, "1" + std::string(frac.size(), '0'));
    }

    std::int64_t v = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec == std::errc() && ptr == last) return Rat(v);
    return from_strings(text, "1");
}

Rat Rat::from_double(double value)
{
    if (!std::isfinite(value)) throw std::invalid_argument("Rat: non-finite double");
    mpq_class q(value);
    q.canonicalize();
    Rat r;
    Access::set_mpq(r, std::move(q));
    return r;
}

bool Rat::is_integer() const
{
    if (!big_) return den_ == 1;
    return big_->q.get_den() == 1;
}

int Rat::sign() const noexcept
{
    if (!big_) return (num_ > 0) - (num_ < 0);
    return sgn(big_->q);
}

std::int64_t Rat::num64() const
{
    if (big_) throw std::overflow_error("Rat: numerator exceeds 64 bits");
    return num_;
}

std::int64_t Rat::den64() const
{
    if (big_) throw std::overflow_error("Rat: denominator exceeds 64 bits");
    return den_;
}

std::string Rat::num_string() const
{
    return big_ ? big_->q.get_num().get_str() : std::to_string(num_);
}

std::string Rat::den_string() const
{
    return big_ ? big_->q.get_den().get_str() : std::to_string(den_);
}

std::string Rat::to_string() const
{
    if (is_integer()) return num_string();
    return num_string() + "/" + den_string();
}

double Rat::to_double() const
{
    if (!big_) return static_cast<double>(num_) / static_cast<double>(den_);
    return big_->q.get_d();
}

Rat Rat::floor() const
{
    if (!big_) return Rat(floor_div(num_, den_));
    mpz_class z;
    mpz_fdiv_q(z.get_mpz_t(), big_->q.get_num_mpz_t(), big_->q.get_den_mpz_t());
    Rat r;
    Access::set_mpq(r, mpq_class(z));
    return r;
}

Rat Rat::ceil() const
{
    if (!big_) {
        std::int64_t q = num_ / den_;
        if (num_ % den_ != 0 && num_ > 0) ++q;
        return Rat(q);
    }
    mpz_class z;
    mpz_cdiv_q(z.get_mpz_t(), big_->q.get_num_mpz_t(), big_->q.get_den_mpz_t());
    Rat r;
    Access::set_mpq(r, mpq_class(z));
    return r;
}

std::int64_t Rat::floor_int() const
{
    return floor().num64();
}

std::int64_t Rat::ceil_int() const
{
    return ceil().num64();
}

Rat Rat::operator-() const
{
    Rat r;
    if (!big_) {
        Access::set_i128(r, -static_cast<i128>(num_), den_);
        return r;
    }
    Access::set_mpq(r, mpq_class(-big_->q));
    return r;
}

Rat& Rat::operator+=(const Rat& rhs)
{
    if (!big_ && !rhs.big_) {
        if (den_ == rhs.den_) {
            Access::set_i128(*this, static_cast<i128>(num_) + rhs.num_, den_);
        } else {
            const i128 n = static_cast<i128>(num_) * rhs.den_ + static_cast<i128>(rhs.num_) * den_;
            Access::set_i128(*this, n, static_cast<i128>(den_) * rhs.den_);
        }
        return *this;
    }
    Access::set_mpq(*this, mpq_class(Access::to_mpq(*this) + Access::to_mpq(rhs)));
    return *this;
}

Rat& Rat::operator-=(const Rat& rhs)
{
    if (!big_ && !rhs.big_) {
        if (den_ == rhs.den_) {
            Access::set_i128(*this, static_cast<i128>(num_) - rhs.num_, den_);
        } else {
            const i128 n = static_cast<i128>(num_) * rhs.den_ - static_cast<i128>(rhs.num_) * den_;
            Access::set_i128(*this, n, static_cast<i128>(den_) * rhs.den_);
        }
        return *this;
    }
    Access::set_mpq(*this, mpq_class(Access::to_mpq(*this) - Access::to_mpq(rhs)));
    return *this;
}

Rat& Rat::operator*=(const Rat& rhs)
{
    if (!big_ && !rhs.big_) {
        Access::set_i128(*this, static_cast<i128>(num_) * rhs.num_,
                         static_cast<i128>(den_) * rhs.den_);
        return *this;
    }
    Access::set_mpq(*this, mpq_class(Access::to_mpq(*this) * Access::to_mpq(rhs)));
    return *this;
}

Rat& Rat::operator/=(const Rat& rhs)
{
    if (rhs.sign() == 0) throw std::domain_error("Rat: division by zero");
    if (!big_ && !rhs.big_) {
        i128 n = static_cast<i128>(num_) * rhs.den_;
        i128 d = static_cast<i128>(den_) * rhs.num_;
        if (d < 0) {
            n = -n;
            d = -d;
        }
        Access::set_i128(*this, n, d);
        return *this;
    }
    Access::set_mpq(*this, mpq_class(Access::to_mpq(*this) / Access::to_mpq(rhs)));
    return *this;
}

bool operator==(const Rat& a, const Rat& b) noexcept
{
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.big_ && b.big_) return a.big_->q == b.big_->q;
    return false;  // canonical: a big value never fits the inline form
}

std::strong_ordering operator<=>(const Rat& a, const Rat& b) noexcept
{
    if (!a.big_ && !b.big_) {
        if (a.den_ == b.den_) return a.num_ <=> b.num_;
        const i128 lhs = static_cast<i128>(a.num_) * b.den_;
        const i128 rhs = static_cast<i128>(b.num_) * a.den_;
        return lhs < rhs ? std::strong_ordering::less
                         : (lhs > rhs ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    const int c = cmp(Rat::Access::to_mpq(a), Rat::Access::to_mpq(b));
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::ostream& operator<<(std::ostream& os, const Rat& r)
{
    return os << r.to_string();
}

Rat abs(const Rat& r)
{
    return r.sign() < 0 ? -r : r;
}

Rat min(const Rat& a, const Rat& b)
{
    return b < a ? b : a;
}

Rat max(const Rat& a, const Rat& b)
{
    return a < b ? b : a;
}

}  // namespace fedf
