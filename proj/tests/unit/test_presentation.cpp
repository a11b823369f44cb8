#include <doctest.h>

#include <random>

#include "cosetgap/error.hpp"
#include "cosetgap/homology.hpp"
#include "cosetgap/presentation.hpp"
#include "fixtures.hpp"

using namespace cosetgap;

TEST_CASE("parse: free group on one generator") {
  auto p = parse_presentation("gens: a\nrels:");
  CHECK(p.num_generators() == 1);
  CHECK(p.relators().empty());
}

TEST_CASE("parse: trefoil relator read letter by letter") {
  auto p = parse_presentation("gens: x y\nrels: xxYYY");
  REQUIRE(p.relators().size() == 1);
  CHECK(p.relators()[0] == Word{1, 1, -2, -2, -2});
  CHECK(p.relators()[0].length() == 5);
}

TEST_CASE("parse: trivial relator rejected") {
  CHECK_THROWS_AS(parse_presentation("gens: a\nrels: aA"), ParseError);
}

TEST_CASE("parse: errors carry exit code 2") {
  for (const char* bad : {"gens: a a\nrels:", "gens: a\nrels: ab", "rels: a\ngens: a", "gens: a\nrels: a$",
                          "nonsense"}) {
    CAPTURE(bad);
    try {
      parse_presentation(bad);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ExitCode::parse);
    }
  }
}

TEST_CASE("parse: relators are freely reduced") {
  auto p = parse_presentation("gens: a b\nrels: abBaa");
  CHECK(p.relators()[0] == Word{1, 1, 1});
}

TEST_CASE("parse: multi-character names with ^-1 suffix") {
  auto p = parse_presentation("gens: x1 x2\nrels: x1*x1*x2^-1");
  CHECK(p.relators()[0] == Word{1, 1, -2});
}

TEST_CASE("serialize round trip") {
  for (const char* text : {"gens: a\nrels:", "gens: x y\nrels: xxYYY", "gens: a b\nrels: aa bbb abab",
                           "gens: x1 x2\nrels: x1*x1*x2^-1"}) {
    auto p = parse_presentation(text);
    CHECK(parse_presentation(serialize_presentation(p)) == p);
  }
}

TEST_CASE("free_reduce examples") {
  CHECK(free_reduce(Word{1, -1}).empty());
  CHECK(free_reduce(Word{1, 1, -2, 2, -1}) == Word{1});
  Word w{1, 2, -1, -2};
  CHECK(free_reduce(w) == w);
}

TEST_CASE("free_reduce: idempotent and length nonincreasing on random words") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> letter(-3, 3);
  for (int trial = 0; trial < 500; ++trial) {
    Word w;
    int len = trial % 20;
    for (int i = 0; i < len; ++i) {
      int x = 0;
      while (x == 0) x = letter(rng);
      w.push_back(x);
    }
    Word r = free_reduce(w);
    CHECK(r.length() <= w.length());
    CHECK(free_reduce(r) == r);
    CHECK(r.is_freely_reduced());
    // w and its reduction agree on every exponent sum
    for (int g = 1; g <= 3; ++g) CHECK(exponent_sum(w, g) == exponent_sum(r, g));
  }
}

TEST_CASE("exponent_sum examples and laws") {
  Word t{1, 1, -2, -2, -2};
  CHECK(exponent_sum(t, 1) == 2);
  CHECK(exponent_sum(t, 2) == -3);
  CHECK(exponent_sum(Word{}, 1) == 0);
  Word u{2, 1, -1, 2};
  for (int g = 1; g <= 2; ++g) {
    CHECK(exponent_sum(t * u, g) == exponent_sum(t, g) + exponent_sum(u, g));
    CHECK(exponent_sum(t.inverted(), g) == -exponent_sum(t, g));
  }
}

TEST_CASE("triangularize: trefoil") {
  auto p = parse_presentation("gens: x y\nrels: xxYYY");
  auto t = triangularize(p);
  CHECK(t.presentation.is_triangular());
  CHECK(t.presentation.relators().size() == 3);
  CHECK(t.padding_generator == 0);
  CHECK(first_betti(t.presentation) == first_betti(p));
  CHECK(first_betti(t.presentation) == 1);
  // every definition is a word in the original generators
  CHECK(t.definitions.size() == t.presentation.num_generators());
  CHECK(t.definitions[0] == Word{1});
  CHECK(t.definitions[1] == Word{2});
}

TEST_CASE("triangularize: already triangular input unchanged") {
  auto p = parse_presentation("gens: a\nrels: aaa");
  auto t = triangularize(p);
  CHECK(t.presentation.relators() == p.relators());
  CHECK(t.presentation.num_generators() == 1);
}

TEST_CASE("triangularize: short relator padded with g") {
  auto p = parse_presentation("gens: a\nrels: aa");
  auto t = triangularize(p);
  CHECK(t.presentation.is_triangular());
  REQUIRE(t.padding_generator != 0);
  CHECK(t.presentation.generator_names()[static_cast<std::size_t>(t.padding_generator - 1)] == "g");
  int g = t.padding_generator;
  CHECK(t.presentation.relators().back() == Word{g, g, -g});
  for (const auto& r : t.presentation.relators()) CHECK(r.length() == 3);
}

TEST_CASE("triangularize: betti preserved over a corpus") {
  for (const char* name : {"free1.pres", "free2.pres", "s3.pres", "d4.pres", "q8.pres", "z2xz2.pres", "z2.pres",
                           "trefoil.pres", "trefoil_fibred.pres", "z6_ab.pres", "z10xz10.pres"}) {
    CAPTURE(name);
    auto p = fixture::data(name);
    auto t = triangularize(p);
    CHECK(t.presentation.is_triangular());
    CHECK(first_betti(t.presentation) == first_betti(p));
  }
}
