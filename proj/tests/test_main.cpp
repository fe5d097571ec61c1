#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "machina/error.hpp"
#include "machina/format.hpp"

using namespace machina;

TEST_CASE("number formatting") {
  CHECK(format_number(0.25) == "0.25");
  CHECK(format_number(1.0 / 3, 6) == "0.333333");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  double v = 0.0;
  CHECK(parse_number("1/3", v));
  CHECK(v == doctest::Approx(1.0 / 3));
  CHECK(parse_number("inf", v));
  CHECK(std::isinf(v));
  CHECK(parse_number("2.5e-1", v));
  CHECK(v == 0.25);
  CHECK_FALSE(parse_number("abc", v));
  CHECK_FALSE(parse_number("1/0", v));
  CHECK_FALSE(parse_number("0.5x", v));
}

TEST_CASE("error messages") {
  const Error e(ErrorCode::UnknownSymbol, "bad", 4);
  CHECK(std::string(e.what()) == "UnknownSymbol (line 4): bad");
  CHECK(e.line() == 4);
  CHECK(is_parse_error(ErrorCode::SyntaxError));
  CHECK_FALSE(is_parse_error(ErrorCode::NotStochastic));
}
