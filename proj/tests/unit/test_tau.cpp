#include <doctest.h>

#include <json.hpp>

#include "../oracles.hpp"
#include "cosetgap/error.hpp"
#include "cosetgap/homology.hpp"
#include "cosetgap/tau.hpp"
#include "fixtures.hpp"

using namespace cosetgap;

namespace {

SubgroupSpec whole_group(const FinitePresentation& p) {
  SubgroupSpec s{{}, "G"};
  for (std::size_t g = 1; g <= p.num_generators(); ++g) s.generators.push_back(Word{static_cast<Letter>(g)});
  return s;
}

// Each q recomputed from its factors.
void check_products(const TauRecord& r) {
  double gn = static_cast<double>(r.index_of_normalizer);
  double nh = static_cast<double>(r.index_over_subgroup);
  double v = static_cast<double>(r.index);
  CHECK(r.index_of_normalizer * r.index_over_subgroup == r.index);
  if (!r.lambda1) return;
  double hv = r.h ? r.h->to_double() : r.h_upper;
  CHECK(*r.q3 == doctest::Approx(*r.lambda1 * gn * gn * v * v));
  CHECK(*r.q4 == doctest::Approx(*r.lambda1 * gn * gn * gn * gn * nh));
  CHECK(*r.q5 == doctest::Approx(hv * gn * v));
  CHECK(*r.q6 == doctest::Approx(hv * gn * gn * std::sqrt(nh)));
}

}  // namespace

TEST_CASE("evaluate_subgroup: 6Z in Z") {
  auto p = fixture::data("free1.pres");
  auto r = evaluate_subgroup(p, fixture::sub(p, "aaaaaa"));
  CHECK(r.index == 6);
  CHECK(r.index_of_normalizer == 1);
  CHECK(r.index_over_subgroup == 6);
  CHECK(r.h_exact);
  CHECK(*r.h == Rational(2, 3));
  CHECK(*r.lambda1 == doctest::Approx(1.0));
  CHECK(*r.q3 == doctest::Approx(36.0));
  CHECK(*r.q5 == doctest::Approx(4.0));
  CHECK(*r.q5_exact == Rational(4));
  CHECK(*r.betti == 1);
  check_products(r);
}

TEST_CASE("evaluate_subgroup: improper subgroup") {
  auto p = fixture::data("s3.pres");
  auto r = evaluate_subgroup(p, fixture::sub(p, "a b"));
  CHECK(r.index == 1);
  CHECK_FALSE(r.lambda1);
  CHECK_FALSE(r.q3);
  CHECK_FALSE(r.q5);
  CHECK_FALSE(r.h);
  CHECK_FALSE(r.bounds.applicable);
}

TEST_CASE("evaluate_subgroup: S3 over <a>") {
  auto p = fixture::data("s3.pres");
  auto r = evaluate_subgroup(p, fixture::sub(p, "a"));
  CHECK(r.index == 3);
  CHECK(r.index_of_normalizer == 3);
  CHECK(r.index_over_subgroup == 1);
  CHECK(*r.betti == 0);
  check_products(r);
}

TEST_CASE("evaluate_subgroup: over the ceiling gives bounds only") {
  auto p = fixture::data("z10xz10.pres");
  auto r = evaluate_subgroup(p, SubgroupSpec{{}, "trivial"});
  CHECK(r.index == 100);
  CHECK_FALSE(r.h_exact);
  CHECK_FALSE(r.h);
  CHECK(r.h_lower == Rational(2, 100));
  REQUIRE(r.lambda1);
  CHECK(r.h_upper <= std::sqrt(4 * 2 * *r.lambda1) + 1e-12);
  CHECK(r.h_upper >= r.h_lower.to_double());
  auto j = nlohmann::json::parse(record_to_json(r));
  CHECK(j["record"]["h"]["exact"] == false);
  check_products(r);
}

TEST_CASE("evaluate_subgroup: every corpus record satisfies the elementary bounds") {
  for (const char* f : {"s3.pres", "d4.pres", "q8.pres", "z2xz2.pres", "z6_ab.pres"}) {
    auto p = fixture::data(f);
    for (const std::string& w : {std::string(""), p.generator_names()[0], p.generator_names()[1]}) {
      auto r = evaluate_subgroup(p, fixture::sub(p, w));
      check_products(r);
      if (r.index < 2) continue;
      CHECK(r.bounds.applicable);
      CHECK(r.bounds.lambda_lower_slack >= 0);
      CHECK(r.bounds.h_lower_slack >= Rational(0));
      CHECK(r.bounds.h_upper_slack >= 0);
      CHECK(*r.lambda1 == doctest::Approx(oracle::naive_lambda1(fixture::graph(p, w))).epsilon(1e-8));
      CHECK(*r.h == oracle::naive_cheeger(fixture::graph(p, w)).h);
    }
  }
}

TEST_CASE("evaluate_cyclic_tower: Z tower") {
  auto p = fixture::data("free1.pres");
  auto report = evaluate_cyclic_tower(p, whole_group(p), {1}, {6, 12, 24, 48});
  REQUIRE(report.levels.size() == 4);
  REQUIRE(report.records.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& l = report.levels[i];
    double n = static_cast<double>(l.n);
    CHECK(l.record.index == static_cast<std::size_t>(l.n));
    CHECK(*l.record.lambda1 == doctest::Approx(2 * (1 - std::cos(2 * M_PI / n))).epsilon(1e-9));
    CHECK(*l.record.lambda1 <= 32 * M_PI * M_PI / (n * n));
    CHECK(l.collapsed_bound == doctest::Approx(32 * M_PI * M_PI / (n * n)));
    CHECK(*l.record.h == Rational(2, l.n / 2));
    CHECK(*l.record.q5_exact == Rational(4));
    CHECK(l.norm2 >= n / 8);
    CHECK(l.dirichlet <= l.dirichlet_bound * (1 + check_tolerance));
    CHECK(l.rayleigh >= *l.record.lambda1 * (1 - check_tolerance));
    CHECK(l.rayleigh <= l.rayleigh_bound * (1 + check_tolerance));
    CHECK(l.half_interval.boundary == 2);
    CHECK(l.half_interval.size == static_cast<std::size_t>(l.n / 2));
    CHECK(*l.record.betti == 1);
    check_products(l.record);
  }
  CHECK_FALSE(report.boundary_growth);
  CHECK(*report.levels[3].record.q3 == doctest::Approx(4 * M_PI * M_PI).epsilon(0.05));

  auto s = bounded_subsequence_summary(report);
  CHECK(s.index == std::vector<std::size_t>{6, 12, 24, 48});
  CHECK(*s.min_q3.back() == doctest::Approx(36.0));
  CHECK(*s.min_q5.back() == doctest::Approx(4.0));
  CHECK(std::abs(*s.slope_q5) < 1e-9);
  CHECK(std::abs(*s.slope_q3) < 0.1);
  CHECK(s.note.find("finite-range") != std::string::npos);
}

TEST_CASE("evaluate_cyclic_tower: trefoil levels") {
  auto p = fixture::data("trefoil.pres");
  auto report = evaluate_cyclic_tower(p, whole_group(p), {3, 2}, {5, 10, 20});
  REQUIRE(report.levels.size() == 3);
  CHECK(report.max_phi == 3);
  for (const auto& l : report.levels) {
    double n = static_cast<double>(l.n);
    CHECK(*l.record.betti >= 1);
    CHECK(l.norm2 >= n / 8);
    CHECK(l.dirichlet <= l.dirichlet_bound * (1 + check_tolerance));
    CHECK(l.rayleigh >= *l.record.lambda1 * (1 - check_tolerance));
    CHECK(l.rayleigh <= l.rayleigh_bound * (1 + check_tolerance));
    CHECK(*l.record.lambda1 <= l.collapsed_bound * (1 + check_tolerance));
    CHECK(l.half_interval.boundary <= l.half_interval.boundary_bound);
    check_products(l.record);
  }
}

TEST_CASE("evaluate_cyclic_tower: proper base subgroup") {
  auto p = fixture::data("free2.pres");
  auto base = fixture::sub(p, "aa b aBA");
  auto t = enumerate_cosets(p, base);
  auto phi = automatic_phi(p, t);
  auto report = evaluate_cyclic_tower(p, base, phi, {3, 4, 6});
  CHECK(report.base_index == 2);
  for (const auto& l : report.levels) {
    CHECK(l.record.index == 2 * static_cast<std::size_t>(l.n));
    CHECK(l.rayleigh <= l.rayleigh_bound * (1 + check_tolerance));
    CHECK(l.collapse.lambda_checked);
    CHECK(l.collapse.lambda_slack >= -1e-9);
    CHECK(*l.record.betti >= 1);
  }
}

TEST_CASE("evaluate_cyclic_tower: preconditions") {
  auto p = fixture::data("free1.pres");
  auto g = whole_group(p);
  for (std::vector<long> bad : {std::vector<long>{2, 6}, std::vector<long>{6, 6}, std::vector<long>{12, 6},
                                std::vector<long>{}}) {
    try {
      evaluate_cyclic_tower(p, g, {1}, bad);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ExitCode::parse);
    }
  }
  auto trefoil = fixture::data("trefoil.pres");
  CHECK_THROWS_AS(evaluate_cyclic_tower(trefoil, whole_group(trefoil), {1, 1}, {5}), InvalidPhiError);
}

TEST_CASE("evaluate_cyclic_tower: report independent of thread count") {
  auto p = fixture::data("trefoil.pres");
  EvaluationOptions one, many;
  many.cheeger.threads = 8;
  auto a = report_to_json(evaluate_cyclic_tower(p, whole_group(p), {3, 2}, {5, 7, 10, 20}, one));
  auto b = report_to_json(evaluate_cyclic_tower(p, whole_group(p), {3, 2}, {5, 7, 10, 20}, many));
  CHECK(a == b);
  CHECK(a == report_to_json(evaluate_cyclic_tower(p, whole_group(p), {3, 2}, {5, 7, 10, 20}, one)));
}

TEST_CASE("bounded_subsequence_summary: finite family has no decay") {
  auto p = fixture::data("s3.pres");
  TauReport report;
  report.family = "subgroups of S3";
  for (const char* w : {"", "a", "b", "ab"}) report.records.push_back(evaluate_subgroup(p, fixture::sub(p, w)));
  std::sort(report.records.begin(), report.records.end(),
            [](const TauRecord& a, const TauRecord& b) { return a.index < b.index; });
  auto s = bounded_subsequence_summary(report);
  for (const auto& m : s.min_q3) {
    REQUIRE(m);
    CHECK(*m > 1.0);
  }
  CHECK_THROWS(bounded_subsequence_summary(TauReport{}));
}

TEST_CASE("report JSON and CSV") {
  auto p = fixture::data("free1.pres");
  auto report = evaluate_cyclic_tower(p, whole_group(p), {1}, {6, 12});
  auto j = nlohmann::json::parse(report_to_json(report));
  CHECK(j["schema"] == report_schema_version);
  CHECK(j["levels"].size() == 2);
  auto csv = report_to_csv(report);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
