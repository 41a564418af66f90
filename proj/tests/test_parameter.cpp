#include <doctest.h>

#include "rbbound/parameter.hpp"
#include "test_helpers.hpp"

using namespace rb;
using rbtest::mu1;
using rbtest::mu2;
using rbtest::vec;

TEST_CASE("box basics") {
  ParameterBox box(vec({0.0, -1.0}), vec({1.0, 2.0}));
  CHECK(box.dim() == 2);
  CHECK(box.measure() == doctest::Approx(3.0));
  CHECK(box.contains(mu2(0.5, 0.0)));
  CHECK(box.contains(mu2(0.0, -1.0)));  // boundary included
  CHECK(!box.contains(mu2(1.5, 0.0)));
  CHECK_THROWS_AS(box.require_inside(mu2(2.0, 0.0)), DomainError);
  CHECK_THROWS_AS(box.require_inside(mu1(0.5)), ContractError);  // wrong dim
}

TEST_CASE("box rejects inverted bounds") {
  CHECK_THROWS_AS(ParameterBox(vec({1.0}), vec({0.0})), ContractError);
  CHECK_THROWS_AS(ParameterBox(vec({0.0}), vec({0.0})), ContractError);
}

TEST_CASE("sampling is inside the box and seed-reproducible") {
  ParameterBox box(vec({0.5, -2.0}), vec({1.0, 3.0}));
  auto a = box.sample_many(50, 42);
  auto b = box.sample_many(50, 42);
  auto c = box.sample_many(50, 43);
  REQUIRE(a.size() == 50);
  for (const auto& mu : a) CHECK(box.contains(mu));
  for (size_t i = 0; i < a.size(); ++i)
    CHECK((a[i].coords.array() == b[i].coords.array()).all());  // bitwise
  bool any_diff = false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!(a[i].coords.array() == c[i].coords.array()).all()) any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("sample stream continuity") {
  ParameterBox box(vec({0.0}), vec({1.0}));
  std::mt19937_64 rng(7);
  auto p1 = box.sample(rng);
  auto p2 = box.sample(rng);
  CHECK(p1.coords[0] != p2.coords[0]);
}

TEST_CASE("uniform grid partition covers and indexes") {
  ParameterBox box(vec({0.0, 0.0}), vec({1.0, 2.0}));
  auto part = Partition::uniform_grid(box, std::vector<int>{2, 3});
  CHECK(part.size() == 6);
  double total = 0;
  for (const auto& c : part.cells()) total += (c.hi - c.lo).prod();
  CHECK(total == doctest::Approx(box.measure()));
  // every sampled point lands in exactly one cell
  for (const auto& mu : box.sample_many(200, 5)) {
    int k = part.cell_of(mu);
    REQUIRE(k >= 0);
    REQUIRE(k < part.size());
    int hits = 0;
    for (const auto& c : part.cells()) {
      bool in = true;
      for (Index i = 0; i < 2; ++i)
        if (mu[i] < c.lo[i] || mu[i] > c.hi[i]) in = false;
      if (in) ++hits;
    }
    CHECK(hits >= 1);
  }
}

TEST_CASE("boundary ties resolve to the lower-index cell") {
  ParameterBox box(vec({0.0}), vec({1.0}));
  auto part = Partition::uniform_grid(box, 2);
  CHECK(part.cell_of(mu1(0.5)) == 0);
  CHECK(part.cell_of(mu1(0.0)) == 0);
  CHECK(part.cell_of(mu1(1.0)) == 1);
  CHECK(part.cell_of(mu1(0.75)) == 1);
}

TEST_CASE("from_cells round trip and covering check") {
  ParameterBox box(vec({0.0}), vec({1.0}));
  auto part = Partition::uniform_grid(box, 3);
  auto rebuilt = Partition::from_cells(box, part.cells());
  CHECK(rebuilt.size() == 3);
  CHECK(rebuilt.cell_of(mu1(0.9)) == part.cell_of(mu1(0.9)));

  std::vector<Partition::Cell> bad = {{vec({0.0}), vec({0.5})}};
  CHECK_THROWS_AS(Partition::from_cells(box, bad), ContractError);
}

TEST_CASE("trivial partition K=1") {
  ParameterBox box(vec({0.5}), vec({1.0}));
  auto part = Partition::uniform_grid(box, 1);
  CHECK(part.size() == 1);
  CHECK(part.cell_of(mu1(0.7)) == 0);
}
