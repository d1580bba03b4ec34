#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "pakf/error.hpp"
#include "pakf/types.hpp"

using namespace pakf;

namespace {

std::vector<double> ramp(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i);
  return v;
}

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("validate_volume accepts a well-formed 2x2x4 volume") {
  const auto data = ramp(16);
  const Volume v = validate_volume({2, 2, 4}, 1e-8, data);
  CHECK(v.nx() == 2);
  CHECK(v.ny() == 2);
  CHECK(v.nt() == 4);
  CHECK(std::equal(v.data().begin(), v.data().end(), data.begin()));
  CHECK(validate_volume(v) == v);
}

TEST_CASE("validate_volume rejects a length mismatch") {
  const auto msg = error_of([] { validate_volume({2, 2, 4}, 1e-8, ramp(15)); });
  CHECK(msg.find("length mismatch") != std::string::npos);
  CHECK(msg.find("16") != std::string::npos);
  CHECK_THROWS_AS(validate_volume({2, 2, 4}, 1e-8, ramp(15)), DataError);
}

TEST_CASE("validate_volume names the non-finite sample") {
  auto data = ramp(16);
  data[(1 * 2 + 0) * 4 + 3] = std::numeric_limits<double>::quiet_NaN();
  const auto msg = error_of([&] { validate_volume({2, 2, 4}, 1e-8, data); });
  CHECK(msg.find("non-finite") != std::string::npos);
  CHECK(msg.find("(1,0,3)") != std::string::npos);
}

TEST_CASE("validate_volume rejects bad dt and empty dimensions") {
  CHECK_THROWS_AS(validate_volume({2, 2, 4}, 0.0, ramp(16)), DataError);
  CHECK_THROWS_AS(validate_volume({2, 2, 4}, -1.0, ramp(16)), DataError);
  CHECK_THROWS_AS(validate_volume({2, 2, 4}, std::nan(""), ramp(16)), DataError);
  CHECK_THROWS_AS(validate_volume({0, 2, 4}, 1.0, {}), DataError);
}

TEST_CASE("trace extraction returns the stored samples in time order") {
  const auto data = ramp(2 * 3 * 5);
  const Volume v = validate_volume({2, 3, 5}, 0.5, data);
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 3; ++y) {
      const Trace t = v.trace({x, y});
      REQUIRE(t.size() == 5);
      CHECK(t.dt() == 0.5);
      for (std::size_t k = 0; k < 5; ++k) CHECK(t[k] == data[(x * 3 + y) * 5 + k]);
    }
  }
  CHECK(v.grid_index(4).x == 1);
  CHECK(v.grid_index(4).y == 1);
  CHECK_THROWS_AS(v.trace({2, 0}), DataError);
}

TEST_CASE("Trace invariants") {
  CHECK_THROWS_AS(Trace({}, 1.0), DataError);
  CHECK_THROWS_AS(Trace({1.0, INFINITY}, 1.0), DataError);
  CHECK_THROWS_AS(Trace({1.0}, 0.0), DataError);
  CHECK_NOTHROW(Trace({1.0}, 1.0));
}

TEST_CASE("FilterParams validation") {
  CHECK_NOTHROW(FilterParams::random_walk(0.1, 1.0, 0.0, 1.0).validate());
  CHECK_NOTHROW(FilterParams::random_walk(0.0, 1.0, 0.0, 0.0).validate());
  CHECK_THROWS_AS(FilterParams::random_walk(-1.0, 1.0, 0.0, 1.0).validate(), DataError);
  CHECK_THROWS_AS(FilterParams::random_walk(1.0, -1.0, 0.0, 1.0).validate(), DataError);
  CHECK_THROWS_AS(FilterParams::random_walk(1.0, 1.0, 0.0, -1.0).validate(), DataError);
  CHECK_THROWS_AS(FilterParams::random_walk(0.0, 0.0, 0.0, 1.0).validate(), NumericalError);
  FilterParams p = FilterParams::random_walk(1.0, 1.0, 0.0, 1.0);
  p.f = std::nan("");
  CHECK_THROWS_AS(p.validate(), DataError);
}

TEST_CASE("RoiSpec bounds") {
  CHECK_NOTHROW((RoiSpec{0, 10}.validate(10)));
  CHECK_THROWS_AS((RoiSpec{5, 5}.validate(10)), DataError);
  CHECK_THROWS_AS((RoiSpec{0, 11}.validate(10)), DataError);
  CHECK((RoiSpec{10, 90}.avoids_edges(100)));
  CHECK_FALSE((RoiSpec{9, 50}.avoids_edges(100)));
  CHECK_FALSE((RoiSpec{50, 91}.avoids_edges(100)));
}

TEST_CASE("EnvelopeImage rejects negative or non-finite pixels") {
  CHECK_NOTHROW(EnvelopeImage(1, 2, {0.0, 1.0}));
  CHECK_THROWS_AS(EnvelopeImage(1, 2, {0.0, -1.0}), DataError);
  CHECK_THROWS_AS(EnvelopeImage(1, 2, {0.0}), DataError);
  CHECK_THROWS_AS(EnvelopeImage(1, 1, {NAN}), DataError);
}
