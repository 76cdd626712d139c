#include "doctest.h"

#include "nnfock/scalar.hpp"

using nnfock::Rational;
using nnfock::parse_rational;
using nnfock::rational_to_string;

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/2") == Rational(3, 2));
  CHECK(parse_rational("-7/4") == Rational(-7, 4));
  CHECK(parse_rational("5") == Rational(5));
  CHECK(parse_rational("0.5") == Rational(1, 2));
  CHECK(parse_rational("-0.125") == Rational(-1, 8));
  CHECK(parse_rational("2.5e2") == Rational(250));
  CHECK(parse_rational("25e-1") == Rational(5, 2));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("rational printing round-trips") {
  for (const char* s : {"3/2", "-7/4", "5", "0"}) {
    Rational r = parse_rational(s);
    CHECK(parse_rational(rational_to_string(r)) == r);
  }
  CHECK(rational_to_string(Rational(4, 2)) == "2");
}
