#include <doctest.h>

#include <numeric>
#include <random>

#include "../oracles.hpp"
#include "cosetgap/coset.hpp"
#include "cosetgap/error.hpp"
#include "cosetgap/graph.hpp"
#include "fixtures.hpp"

using namespace cosetgap;
using oracle::Perm;

namespace {

// A finite group given twice: by a presentation and by faithful permutations
// of its generators.
struct PermGroup {
  const char* file;
  std::vector<Perm> gens;
  std::size_t degree;
};

Perm cycle_perm(std::size_t n, long shift) {
  Perm p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<int>((static_cast<long>(i) + shift) % static_cast<long>(n));
  return p;
}

// Right regular representation of Q8. Elements 0..7 are 1,i,j,k,-1,-i,-j,-k.
Perm q8_right(int unit) {
  // unit products among 1,i,j,k: table[a][b] = (sign, unit)
  static const int sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  static const int prod[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  Perm p(8);
  for (int x = 0; x < 8; ++x) {
    int s = x < 4 ? 1 : -1, u = x % 4;
    int t = s * sign[u][unit];
    int v = prod[u][unit];
    p[static_cast<std::size_t>(x)] = t > 0 ? v : v + 4;
  }
  return p;
}

std::vector<PermGroup> corpus() {
  Perm z2z2a{1, 0, 3, 2}, z2z2b{2, 3, 0, 1};
  Perm z10x10a(100), z10x10b(100);
  for (int x = 0; x < 10; ++x)
    for (int y = 0; y < 10; ++y) {
      z10x10a[static_cast<std::size_t>(10 * x + y)] = 10 * ((x + 1) % 10) + y;
      z10x10b[static_cast<std::size_t>(10 * x + y)] = 10 * x + (y + 1) % 10;
    }
  return {
      {"s3.pres", {{1, 0, 2}, {1, 2, 0}}, 3},
      {"d4.pres", {cycle_perm(4, 1), {0, 3, 2, 1}}, 4},
      {"q8.pres", {q8_right(1), q8_right(2)}, 8},
      {"z2xz2.pres", {z2z2a, z2z2b}, 4},
      {"z2.pres", {{1, 0}}, 2},
      {"z6_ab.pres", {cycle_perm(6, 1), cycle_perm(6, 2)}, 6},
      {"z10xz10.pres", {z10x10a, z10x10b}, 100},
  };
}

void check_table_invariants(const CosetTable& t, const FinitePresentation& p, const SubgroupSpec& h) {
  std::size_t n = t.size();
  for (std::size_t g = 1; g <= p.num_generators(); ++g) {
    std::vector<bool> hit(n, false);
    for (std::size_t c = 0; c < n; ++c) {
      auto img = t.act(c, static_cast<Letter>(g));
      REQUIRE(img >= 0);
      REQUIRE(static_cast<std::size_t>(img) < n);
      CHECK_FALSE(hit[static_cast<std::size_t>(img)]);
      hit[static_cast<std::size_t>(img)] = true;
      CHECK(t.act(static_cast<std::size_t>(img), -static_cast<Letter>(g)) == static_cast<std::int32_t>(c));
    }
  }
  for (const auto& r : p.relators())
    for (std::size_t c = 0; c < n; ++c) CHECK(t.act(c, r) == static_cast<std::int32_t>(c));
  for (const auto& w : h.generators) CHECK(t.act(0, w) == 0);
  // transitivity: the Schreier graph constructor rejects disconnected actions
  CHECK_NOTHROW(schreier_graph(t, p));
}

}  // namespace

TEST_CASE("enumerate: hand examples") {
  auto z6 = fixture::cyclic(6);
  CHECK(fixture::table(z6, "aa").size() == 2);
  auto trefoil = fixture::data("trefoil.pres");
  CHECK(fixture::table(trefoil, "x y").size() == 1);
  auto s3 = fixture::data("s3.pres");
  CHECK(fixture::table(s3, "a").size() == 3);
}

TEST_CASE("enumerate: limit exceeded reports enumeration error") {
  auto free1 = fixture::data("free1.pres");
  try {
    enumerate_cosets(free1, SubgroupSpec{}, 50);
    FAIL("no error");
  } catch (const EnumerationError& e) {
    CHECK(e.code() == ExitCode::enumeration);
    CHECK(std::string(e.what()).find("index not determined") != std::string::npos);
  }
}

TEST_CASE("enumerate: group orders match permutation closures") {
  for (const auto& g : corpus()) {
    CAPTURE(g.file);
    auto p = fixture::data(g.file);
    for (const auto& r : p.relators()) CHECK(oracle::evaluate(r, g.gens, g.degree) == oracle::evaluate({}, g.gens, g.degree));
    auto t = enumerate_cosets(p, SubgroupSpec{});
    check_table_invariants(t, p, SubgroupSpec{});
    CHECK(t.size() == oracle::closure(g.gens, g.degree).size());
  }
}

TEST_CASE("enumerate and normalizer: random subgroups against permutation oracle") {
  std::mt19937 rng(11);
  for (const auto& g : corpus()) {
    CAPTURE(g.file);
    auto p = fixture::data(g.file);
    auto group = oracle::closure(g.gens, g.degree);
    std::uniform_int_distribution<int> letter(1, static_cast<int>(p.num_generators()));
    std::uniform_int_distribution<int> sign(0, 1), len(1, 5), count(0, 2);
    for (int trial = 0; trial < 15; ++trial) {
      SubgroupSpec h;
      int k = count(rng);
      for (int i = 0; i < k; ++i) {
        Word w;
        int l = len(rng);
        for (int j = 0; j < l; ++j) w.push_back(sign(rng) ? letter(rng) : -letter(rng));
        h.generators.push_back(free_reduce(w));
      }
      std::vector<Perm> hp;
      for (const auto& w : h.generators) hp.push_back(oracle::evaluate(w, g.gens, g.degree));
      auto sub = oracle::closure(hp, g.degree);
      auto t = enumerate_cosets(p, h);
      check_table_invariants(t, p, h);
      CHECK(t.size() * sub.size() == group.size());

      // |N(H)| by conjugating every element of H
      std::size_t normalizer = 0;
      for (const auto& x : group) {
        bool normalizes = true;
        for (const auto& y : sub) {
          if (!sub.contains(oracle::compose(oracle::compose(oracle::invert(x), y), x))) {
            normalizes = false;
            break;
          }
        }
        normalizer += normalizes;
      }
      auto idx = normalizer_indices(t, h);
      CHECK(idx.index_over_subgroup == normalizer / sub.size());
      CHECK(idx.index_of_normalizer == group.size() / normalizer);
      CHECK(idx.index_of_normalizer * idx.index_over_subgroup == t.size());
      CHECK(normalizer_indices(t).index_over_subgroup == idx.index_over_subgroup);
      CHECK(normalizer_table(t).size() == idx.index_of_normalizer);
    }
  }
}

TEST_CASE("enumerate: deterministic numbering") {
  auto p = fixture::data("q8.pres");
  auto h = fixture::sub(p, "i");
  CHECK(enumerate_cosets(p, h) == enumerate_cosets(p, h));
}

TEST_CASE("normalizer: S3 examples") {
  auto s3 = fixture::data("s3.pres");
  auto ha = fixture::sub(s3, "a");
  auto ta = enumerate_cosets(s3, ha);
  CHECK(normalizer_indices(ta, ha).index_of_normalizer == 3);
  CHECK(normalizer_indices(ta, ha).index_over_subgroup == 1);
  auto hb = fixture::sub(s3, "b");
  auto tb = enumerate_cosets(s3, hb);
  CHECK(normalizer_indices(tb, hb).index_of_normalizer == 1);
  CHECK(normalizer_indices(tb, hb).index_over_subgroup == 2);
}

TEST_CASE("normalizer: normal subgroups have index one") {
  auto free1 = fixture::data("free1.pres");
  for (int k = 1; k <= 7; ++k) {
    auto t = enumerate_cosets(free1, SubgroupSpec{{Word(std::vector<Letter>(static_cast<std::size_t>(k), 1))}, ""});
    CHECK(normalizer_indices(t).index_of_normalizer == 1);
  }
  auto q8 = fixture::data("q8.pres");
  CHECK(normalizer_indices(fixture::table(q8, "i")).index_of_normalizer == 1);
}

TEST_CASE("intersect_subgroups") {
  auto free1 = fixture::data("free1.pres");
  auto t2 = fixture::table(free1, "aa");
  auto t3 = fixture::table(free1, "aaa");
  CHECK(intersect_subgroups(t2, t3).size() == 6);
  CHECK(intersect_subgroups(t2, t2) == t2);
  auto whole = fixture::table(free1, "a");
  CHECK(intersect_subgroups(t3, whole) == t3);

  auto s3 = fixture::data("s3.pres");
  auto a = fixture::table(s3, "a");
  auto bab = fixture::table(s3, "baB");
  auto i = intersect_subgroups(a, bab);
  CHECK(i.size() == 6);
  // [G:H1 n H2] <= [G:H1][G:H2] and need not divide it: 6 does not divide 9
  CHECK(i.size() <= a.size() * bab.size());
  CHECK((a.size() * bab.size()) % i.size() != 0);
  CHECK(i.size() % a.size() == 0);
  CHECK(i.size() % bab.size() == 0);
}

TEST_CASE("covering_map sends base to base and commutes with the action") {
  auto free2 = fixture::data("free2.pres");
  auto coarse = fixture::table(free2, "aa b aBA");
  auto fine = intersect_subgroups(coarse, fixture::table(free2, "a bbb baB bbaBB"));
  auto cover = covering_map(fine, coarse);
  CHECK(cover[0] == 0);
  for (std::size_t c = 0; c < fine.size(); ++c)
    for (Letter x : {1, -1, 2, -2})
      CHECK(cover[static_cast<std::size_t>(fine.act(c, x))] == coarse.act(static_cast<std::size_t>(cover[c]), x));
}

TEST_CASE("schreier generators generate the subgroup and count by Nielsen-Schreier") {
  auto free2 = fixture::data("free2.pres");
  auto h = fixture::sub(free2, "aaa b abA aabAA");
  auto t = enumerate_cosets(free2, h);
  auto gens = schreier_generators(t);
  CHECK(gens.size() == t.size() * 2 - (t.size() - 1));
  for (const auto& w : gens) CHECK(t.act(0, w) == 0);
  CHECK(enumerate_cosets(free2, SubgroupSpec{gens, ""}) == t);
}

TEST_CASE("cyclic_tower: circle cover") {
  auto free1 = fixture::data("free1.pres");
  auto base = fixture::table(free1, "a");
  auto level = cyclic_tower(free1, base, {1}, 6);
  CHECK(level.table.size() == 6);
  auto g = schreier_graph(level.table, free1);
  for (std::size_t v = 0; v < 6; ++v) CHECK(level.psi[g.target(g.edge(v, 0))] == (level.psi[v] + 1) % 6);
  CHECK(level.psi[0] == 0);
  CHECK(level.max_phi == 1);
}

TEST_CASE("cyclic_tower: trefoil labels are phi values mod n") {
  auto trefoil = fixture::data("trefoil.pres");
  auto base = fixture::table(trefoil, "x y");
  auto level = cyclic_tower(trefoil, base, {3, 2}, 5);
  REQUIRE(level.table.size() == 5);
  for (std::size_t v = 0; v < 5; ++v) {
    CHECK(level.psi[static_cast<std::size_t>(level.table.act(v, 1))] == (level.psi[v] + 3) % 5);
    CHECK(level.psi[static_cast<std::size_t>(level.table.act(v, 2))] == (level.psi[v] + 2) % 5);
  }
  CHECK(level.max_phi == 3);
}

TEST_CASE("cyclic_tower: index multiplicativity over a proper base") {
  auto free2 = fixture::data("free2.pres");
  auto base = fixture::table(free2, "aa b aBA");
  std::vector<long> phi(schreier_generators(base).size(), 0);
  phi[0] = 1;
  for (long n : {3, 4, 7, 10}) {
    auto level = cyclic_tower(free2, base, phi, n);
    CHECK(level.table.size() == static_cast<std::size_t>(n) * base.size());
    for (std::size_t c = 0; c < level.table.size(); ++c)
      for (Letter x : {1, 2})
        CHECK(level.below[static_cast<std::size_t>(level.table.act(c, x))] ==
              base.act(static_cast<std::size_t>(level.below[c]), x));
  }
}

TEST_CASE("cyclic_tower: preconditions") {
  auto free1 = fixture::data("free1.pres");
  auto base = fixture::table(free1, "a");
  CHECK_THROWS(cyclic_tower(free1, base, {1}, 1));
  auto trefoil = fixture::data("trefoil.pres");
  auto tb = fixture::table(trefoil, "x y");
  CHECK_THROWS_AS(cyclic_tower(trefoil, tb, {1, 1}, 5), InvalidPhiError);
}

TEST_CASE("coset table CSV export") {
  auto s3 = fixture::data("s3.pres");
  auto csv = fixture::table(s3, "a").to_csv(s3);
  CHECK(csv.rfind("coset,generator,image", 0) == 0);
}
