#include <doctest.h>

#include "fedf/rational.hpp"
#include "gen_util.hpp"

#include <gmpxx.h>

#include <sstream>

using fedf::Rat;

namespace {

// Reference value via GMP directly, never through Rat arithmetic.
mpq_class ref(const Rat& r)
{
    mpq_class q(mpz_class(r.num_string()), mpz_class(r.den_string()));
    q.canonicalize();
    return q;
}

void check_canonical(const Rat& r)
{
    const mpz_class n(r.num_string());
    const mpz_class d(r.den_string());
    CHECK(d > 0);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    CHECK((n == 0 ? d == 1 : g == 1));
    const bool fits = mpz_fits_slong_p(n.get_mpz_t()) && mpz_fits_slong_p(d.get_mpz_t());
    CHECK(r.is_small() == fits);
}

}  // namespace

TEST_CASE("construction reduces to lowest terms")
{
    CHECK(Rat(6, 8).to_string() == "3/4");
    CHECK(Rat(-6, -8).to_string() == "3/4");
    CHECK(Rat(6, -8).to_string() == "-3/4");
    CHECK(Rat(0, -5).to_string() == "0");
    CHECK(Rat(14, 7).to_string() == "2");
    CHECK_THROWS_AS(Rat(1, 0), std::domain_error);
    CHECK(Rat(INT64_MIN, -1).to_string() == "9223372036854775808");
    CHECK_FALSE(Rat(INT64_MIN, -1).is_small());
}

TEST_CASE("parse accepts integers, fractions and decimals exactly")
{
    CHECK(Rat::parse("7/20") == Rat(7, 20));
    CHECK(Rat::parse("-12") == Rat(-12));
    CHECK(Rat::parse("2.5") == Rat(5, 2));
    CHECK(Rat::parse("-0.125") == Rat(-1, 8));
    CHECK(Rat::parse("0.1") == Rat(1, 10));
    CHECK(Rat::parse("123456789012345678901234567890/3").num_string() ==
          "41152263004115226300411522630");
    CHECK_THROWS(Rat::parse(""));
    CHECK_THROWS(Rat::parse("1/0"));
    CHECK_THROWS(Rat::parse("abc"));
    CHECK_THROWS(Rat::parse("1/2/3"));
}

TEST_CASE("floor and ceil")
{
    CHECK(Rat(7, 2).floor() == Rat(3));
    CHECK(Rat(7, 2).ceil() == Rat(4));
    CHECK(Rat(-7, 2).floor() == Rat(-4));
    CHECK(Rat(-7, 2).ceil() == Rat(-3));
    CHECK(Rat(6).floor_int() == 6);
    CHECK(Rat(6).ceil_int() == 6);
    CHECK(Rat(48, 7).floor_int() == 6);
}

TEST_CASE("from_double is exact")
{
    CHECK(Rat::from_double(0.5) == Rat(1, 2));
    CHECK(Rat::from_double(-3.0) == Rat(-3));
    CHECK(Rat::from_double(0.1).den_string() == "36028797018963968");
    CHECK(Rat::from_double(0.1).to_double() == 0.1);
}

TEST_CASE("arithmetic agrees with GMP on random mixed-size values")
{
    std::mt19937_64 rng(0xfeed);
    for (int i = 0; i < 4000; ++i) {
        const Rat a = fedf::testgen::wild_rat(rng);
        const Rat b = fedf::testgen::wild_rat(rng);
        const mpq_class qa = ref(a), qb = ref(b);
        const Rat sum = a + b, diff = a - b, prod = a * b;
        CHECK(ref(sum) == mpq_class(qa + qb));
        CHECK(ref(diff) == mpq_class(qa - qb));
        CHECK(ref(prod) == mpq_class(qa * qb));
        check_canonical(sum);
        check_canonical(diff);
        check_canonical(prod);
        if (b.sign() != 0) {
            const Rat quot = a / b;
            CHECK(ref(quot) == mpq_class(qa / qb));
            check_canonical(quot);
        }
        CHECK((a < b) == (qa < qb));
        CHECK((a == b) == (qa == qb));
        CHECK(a.sign() == sgn(qa));
    }
}

TEST_CASE("round trips are exact")
{
    std::mt19937_64 rng(42);
    for (int i = 0; i < 3000; ++i) {
        const Rat a = fedf::testgen::wild_rat(rng);
        const Rat b = fedf::testgen::wild_rat(rng);
        CHECK((a + b) - b == a);
        if (b.sign() != 0) CHECK((a * b) / b == a);
        CHECK(Rat::parse(a.to_string()) == a);
        std::ostringstream os;
        os << a;
        CHECK(os.str() == a.to_string());
    }
}

TEST_CASE("big values demote once they fit again")
{
    const Rat huge = Rat(INT64_MAX) * Rat(INT64_MAX);
    CHECK_FALSE(huge.is_small());
    const Rat back = huge / Rat(INT64_MAX);
    CHECK(back.is_small());
    CHECK(back == Rat(INT64_MAX));
    CHECK_THROWS_AS(huge.num64(), std::overflow_error);
}

TEST_CASE("copies and moves keep values independent")
{
    Rat a = Rat(INT64_MAX) * Rat(3);
    Rat b = a;
    b += Rat(1);
    CHECK(a != b);
    Rat c = std::move(b);
    CHECK(c - a == Rat(1));
    a = c;
    CHECK(a == c);
    a = Rat(5);
    CHECK(a.is_small());
}
