#include "cosetgap/tau.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

#include "cosetgap/error.hpp"
#include "cosetgap/homology.hpp"

namespace cosetgap {

TauRecord evaluate_table(const FinitePresentation& p, const CosetTable& t, std::string label,
                         const EvaluationOptions& options) {
  TauRecord r;
  r.label = std::move(label);
  LabeledMultigraph x = schreier_graph(t, p);
  const std::size_t n = x.num_vertices();
  r.index = n;
  r.num_generators = p.num_generators();
  auto idx = normalizer_indices(t);
  r.index_of_normalizer = idx.index_of_normalizer;
  r.index_over_subgroup = idx.index_over_subgroup;
  COSETGAP_ASSERT(r.index_of_normalizer * r.index_over_subgroup == r.index,
                  "[G:N] [N:H] differs from [G:H]");
  if (options.compute_betti) r.betti = first_betti(reidemeister_schreier(p, t));
  if (n < 2) return r;

  auto gap = lambda1(x, options.tol);
  r.lambda1 = gap->value;
  r.lambda1_residual = gap->residual;
  r.h_lower = Rational(2, static_cast<std::int64_t>(n));
  try {
    auto exact = cheeger_exact(x, options.cheeger);
    r.h_exact = true;
    r.h = exact.h;
    r.h_lower = exact.h;
    r.h_upper = exact.h.to_double();
    r.h_witness = exact.witness;
    r.h_method = exact.method;
  } catch (const TooLargeError&) {
    auto b = cheeger_bounds(x, gap->value, &gap->vector);
    r.h_upper = b.upper;
    r.h_witness = b.best_cut;
    r.h_method = "bounds";
  }

  const double gn = static_cast<double>(r.index_of_normalizer);
  const double nh = static_cast<double>(r.index_over_subgroup);
  const double gh = static_cast<double>(r.index);
  r.q3 = *r.lambda1 * gn * gn * gh * gh;
  r.q4 = *r.lambda1 * gn * gn * gn * gn * nh;
  const double h_hi = r.h_upper;
  r.q5 = h_hi * gn * gh;
  r.q6 = h_hi * gn * gn * std::sqrt(nh);
  if (r.h_exact) {
    r.q5_exact = *r.h * Rational(static_cast<std::int64_t>(r.index_of_normalizer * r.index));
    COSETGAP_ASSERT(std::abs(r.q5_exact->to_double() - *r.q5) <= 1e-9 * std::max(1.0, *r.q5),
                    "q5 disagrees with its factors");
  } else {
    r.q5_lower = r.h_lower.to_double() * gn * gh;
    r.q6_lower = r.h_lower.to_double() * gn * gn * std::sqrt(nh);
  }
  r.bounds = spectral_bound_check(n, x.num_labels(), *r.lambda1, r.h_lower,
                                  r.h_exact ? r.h_upper : r.h_lower.to_double());
  return r;
}

TauRecord evaluate_subgroup(const FinitePresentation& p, const SubgroupSpec& h,
                            const EvaluationOptions& options) {
  CosetTable t = enumerate_cosets(p, h, options.coset_limit);
  return evaluate_table(p, t, h.label, options);
}

std::vector<long> automatic_phi(const FinitePresentation& p, const CosetTable& base) {
  return phi_from_abelianization(reidemeister_schreier(p, base)).values;
}

namespace {

TowerLevelReport evaluate_level(const FinitePresentation& p, const CosetTable& base,
                                const std::vector<long>& phi, long n,
                                const EvaluationOptions& options) {
  TowerLevelReport out;
  out.n = n;
  TowerLevel level = cyclic_tower(p, base, phi, n);
  out.record = evaluate_table(p, level.table, "n=" + std::to_string(n), options);

  LabeledMultigraph x = schreier_graph(level.table, p);
  x.set_vertex_labels(std::vector<std::int64_t>(level.psi.begin(), level.psi.end()));
  CollapseResult quotient = collapse_forest(x, base);
  const LabeledMultigraph& q = quotient.graph;
  COSETGAP_ASSERT(q.num_vertices() == static_cast<std::size_t>(n),
                  "X(G_i/G_i^n) does not have n vertices");

  const double nd = static_cast<double>(n);
  const double big_n = static_cast<double>(level.max_phi);
  const double s = static_cast<double>(p.num_generators());
  const double gi = static_cast<double>(base.size());
  const double pi2 = M_PI * M_PI;
  std::vector<double> f(q.num_vertices());
  for (std::size_t v = 0; v < f.size(); ++v) {
    f[v] = std::sin(2.0 * M_PI * static_cast<double>((*q.vertex_labels())[v]) / nd);
  }
  out.dirichlet = dirichlet_energy(q, f);
  out.norm2 = std::inner_product(f.begin(), f.end(), f.begin(), 0.0);
  out.rayleigh = rayleigh_quotient(q, f);
  out.dirichlet_bound = gi / nd * 4.0 * pi2 * big_n * big_n * s;
  out.rayleigh_bound = gi / (nd * nd) * 32.0 * pi2 * big_n * big_n * s;
  out.collapsed_bound = 32.0 * pi2 * big_n * big_n * s / (nd * nd);
  auto gap_q = lambda1(q, options.tol);
  out.lambda_quotient = gap_q->value;
  const double slack = 1 + check_tolerance;
  COSETGAP_ASSERT(out.lambda_quotient <= out.rayleigh * slack, "rayleigh quotient below lambda1");
  COSETGAP_ASSERT(out.dirichlet <= out.dirichlet_bound * slack, "||df||^2 above its bound");
  COSETGAP_ASSERT(out.norm2 * slack >= nd / 8.0, "||f||^2 below n/8");
  COSETGAP_ASSERT(out.rayleigh <= out.rayleigh_bound * slack, "rayleigh quotient above its bound");
  COSETGAP_ASSERT(*out.record.lambda1 <= out.collapsed_bound * slack,
                  "lambda1 of the tower level above 32 pi^2 N^2 |S| / n^2");
  out.collapse = lemma25_check(x, q, base.size(), options.cheeger, options.tol);

  std::vector<std::size_t> a;
  for (std::size_t v = 0; v < x.num_vertices(); ++v) {
    if (level.psi[v] >= 1 && level.psi[v] <= n / 2) a.push_back(v);
  }
  COSETGAP_ASSERT(2 * a.size() <= x.num_vertices(), "half interval exceeds half the vertices");
  auto cut = make_cut(x, a);
  out.half_interval.size = a.size();
  out.half_interval.boundary = cut.boundary;
  out.half_interval.ratio = Rational(static_cast<std::int64_t>(cut.boundary),
                                     static_cast<std::int64_t>(a.size()));
  std::size_t bound = 0;
  for (long v : phi) bound += static_cast<std::size_t>(std::abs(v));
  out.half_interval.boundary_bound = 2 * bound;
  COSETGAP_ASSERT(cut.boundary <= out.half_interval.boundary_bound,
                  "half interval boundary exceeds 2 sum |phi|");
  return out;
}

}  // namespace

TauReport evaluate_cyclic_tower(const FinitePresentation& p, const SubgroupSpec& base_spec,
                                const std::vector<long>& phi, const std::vector<long>& n_list,
                                const EvaluationOptions& options) {
  if (n_list.empty()) throw Error("tower needs at least one level", ExitCode::parse);
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] <= 2) {
      throw Error("tower level n = " + std::to_string(n_list[i]) + " rejected: need n > 2",
                  ExitCode::parse);
    }
    if (i > 0 && n_list[i] <= n_list[i - 1]) {
      throw Error("tower levels must be strictly increasing", ExitCode::parse);
    }
  }
  CosetTable base = enumerate_cosets(p, base_spec, options.coset_limit);
  TauReport report;
  report.family = "cyclic tower over " + (base_spec.label.empty() ? std::string("H") : base_spec.label);
  report.presentation = serialize_presentation(p);
  report.phi = phi;
  report.base_index = base.size();
  report.levels.resize(n_list.size());

  unsigned threads = std::max(1u, options.cheeger.threads);
  EvaluationOptions inner = options;
  if (threads > 1 && n_list.size() > 1) inner.cheeger.threads = 1;
  std::vector<std::exception_ptr> errors(n_list.size());
  auto work = [&](std::size_t id, std::size_t stride) {
    for (std::size_t i = id; i < n_list.size(); i += stride) {
      try {
        report.levels[i] = evaluate_level(p, base, phi, n_list[i], inner);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 1 || n_list.size() == 1) {
    work(0, 1);
  } else {
    std::size_t count = std::min<std::size_t>(threads, n_list.size());
    std::vector<std::thread> pool;
    for (std::size_t id = 0; id < count; ++id) pool.emplace_back(work, id, count);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (const auto& level : report.levels) {
    report.records.push_back(level.record);
    if (level.half_interval.boundary > report.levels.front().half_interval.boundary) {
      report.boundary_growth = true;
    }
  }
  for (long v : phi) report.max_phi = std::max(report.max_phi, std::abs(v));
  return report;
}

SubsequenceSummary bounded_subsequence_summary(const TauReport& report) {
  if (report.records.empty()) throw Error("summary of an empty report");
  SubsequenceSummary s;
  s.note = "running minima and log-log slopes over the computed range; finite-range evidence only";
  std::vector<const TauRecord*> recs;
  for (const auto& r : report.records) recs.push_back(&r);
  std::stable_sort(recs.begin(), recs.end(),
                   [](const TauRecord* a, const TauRecord* b) { return a->index < b->index; });
  auto track = [&](auto field, std::vector<std::optional<double>>& mins, std::optional<double>& slope) {
    std::optional<double> running;
    std::vector<std::pair<double, double>> pts;
    for (const auto* r : recs) {
      const std::optional<double>& q = r->*field;
      if (q) {
        running = running ? std::min(*running, *q) : *q;
        if (*q > 0) pts.push_back({std::log(static_cast<double>(r->index)), std::log(*q)});
      }
      mins.push_back(running);
    }
    if (pts.size() >= 2) {
      double mx = 0, my = 0;
      for (auto [x, y] : pts) {
        mx += x;
        my += y;
      }
      mx /= static_cast<double>(pts.size());
      my /= static_cast<double>(pts.size());
      double sxy = 0, sxx = 0;
      for (auto [x, y] : pts) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
      }
      if (sxx > 0) slope = sxy / sxx;
    }
  };
  for (const auto* r : recs) s.index.push_back(r->index);
  track(&TauRecord::q3, s.min_q3, s.slope_q3);
  track(&TauRecord::q4, s.min_q4, s.slope_q4);
  track(&TauRecord::q5, s.min_q5, s.slope_q5);
  track(&TauRecord::q6, s.min_q6, s.slope_q6);
  return s;
}

namespace {

using nlohmann::ordered_json;

template <typename T>
ordered_json opt(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json record_json(const TauRecord& r) {
  ordered_json j;
  j["label"] = r.label;
  j["index"] = r.index;
  j["index_of_normalizer"] = r.index_of_normalizer;
  j["index_over_subgroup"] = r.index_over_subgroup;
  j["generators"] = r.num_generators;
  ordered_json h;
  h["exact"] = r.h_exact;
  h["method"] = r.h_method;
  if (r.index >= 2) {
    if (r.h) h["value"] = r.h->str();
    h["lower"] = r.h_lower.str();
    h["upper"] = r.h_upper;
    if (r.h_witness) {
      h["witness"] = {{"vertices", r.h_witness->vertices},
                      {"boundary", r.h_witness->boundary},
                      {"ratio", r.h_witness->ratio.str()}};
    }
  }
  j["h"] = std::move(h);
  j["lambda1"] = opt(r.lambda1);
  j["lambda1_residual"] = opt(r.lambda1_residual);
  j["q3"] = opt(r.q3);
  j["q4"] = opt(r.q4);
  j["q5"] = opt(r.q5);
  j["q6"] = opt(r.q6);
  if (r.q5_exact) j["q5_exact"] = r.q5_exact->str();
  if (r.q5_lower) j["q5_lower"] = *r.q5_lower;
  if (r.q6_lower) j["q6_lower"] = *r.q6_lower;
  j["betti"] = opt(r.betti);
  if (r.bounds.applicable) {
    j["elementary_bounds"] = {{"lambda1_minus_inverse_square", r.bounds.lambda_lower_slack},
                              {"h_minus_two_over_v", r.bounds.h_lower_slack.str()},
                              {"sqrt_bound_minus_h", r.bounds.h_upper_slack}};
  }
  return j;
}

}  // namespace

std::string record_to_json(const TauRecord& r) {
  ordered_json j;
  j["schema"] = report_schema_version;
  j["record"] = record_json(r);
  return j.dump(2) + "\n";
}

std::string report_to_json(const TauReport& r) {
  ordered_json j;
  j["schema"] = report_schema_version;
  j["family"] = r.family;
  j["presentation"] = r.presentation;
  if (!r.phi.empty()) {
    j["phi"] = r.phi;
    j["max_phi"] = r.max_phi;
    j["base_index"] = r.base_index;
  }
  ordered_json recs = ordered_json::array();
  for (const auto& rec : r.records) recs.push_back(record_json(rec));
  j["records"] = std::move(recs);
  if (!r.levels.empty()) {
    ordered_json levels = ordered_json::array();
    for (const auto& l : r.levels) {
      ordered_json lj;
      lj["n"] = l.n;
      lj["test_function"] = {{"lambda1_quotient", l.lambda_quotient},
                             {"dirichlet", l.dirichlet},
                             {"dirichlet_bound", l.dirichlet_bound},
                             {"norm2", l.norm2},
                             {"rayleigh", l.rayleigh},
                             {"rayleigh_bound", l.rayleigh_bound},
                             {"collapsed_bound", l.collapsed_bound}};
      ordered_json cj;
      cj["lambda1_level"] = l.collapse.lambda_gh;
      cj["lambda1_quotient"] = opt(l.collapse.lambda_kh);
      cj["lambda_checked"] = l.collapse.lambda_checked;
      cj["h_proviso"] = l.collapse.proviso;
      cj["h_checked"] = l.collapse.h_checked;
      if (l.collapse.h_kh) cj["h_quotient"] = l.collapse.h_kh->str();
      lj["collapse"] = std::move(cj);
      lj["half_interval"] = {{"size", l.half_interval.size},
                             {"boundary", l.half_interval.boundary},
                             {"ratio", l.half_interval.ratio.str()},
                             {"boundary_bound", l.half_interval.boundary_bound}};
      levels.push_back(std::move(lj));
    }
    j["levels"] = std::move(levels);
    j["half_interval_boundary_growth"] = r.boundary_growth;
  }
  if (!r.records.empty()) {
    auto s = bounded_subsequence_summary(r);
    ordered_json sj;
    sj["note"] = s.note;
    sj["index"] = s.index;
    auto mins = [](const std::vector<std::optional<double>>& v) {
      ordered_json a = ordered_json::array();
      for (const auto& x : v) a.push_back(opt(x));
      return a;
    };
    sj["running_min_q3"] = mins(s.min_q3);
    sj["running_min_q4"] = mins(s.min_q4);
    sj["running_min_q5"] = mins(s.min_q5);
    sj["running_min_q6"] = mins(s.min_q6);
    sj["slope_q3"] = opt(s.slope_q3);
    sj["slope_q4"] = opt(s.slope_q4);
    sj["slope_q5"] = opt(s.slope_q5);
    sj["slope_q6"] = opt(s.slope_q6);
    j["summary"] = std::move(sj);
  }
  return j.dump(2) + "\n";
}

std::string report_to_csv(const TauReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "label,index,index_of_normalizer,index_over_subgroup,h_exact,h,h_lower,h_upper,lambda1,"
         "q3,q4,q5,q6,betti\n";
  auto cell = [&](const std::optional<double>& v) {
    if (v) out << *v;
  };
  for (const auto& rec : r.records) {
    out << rec.label << ',' << rec.index << ',' << rec.index_of_normalizer << ','
        << rec.index_over_subgroup << ',' << (rec.h_exact ? "true" : "false") << ','
        << (rec.h ? rec.h->str() : "") << ',' << rec.h_lower.str() << ',' << rec.h_upper << ',';
    cell(rec.lambda1);
    out << ',';
    cell(rec.q3);
    out << ',';
    cell(rec.q4);
    out << ',';
    cell(rec.q5);
    out << ',';
    cell(rec.q6);
    out << ',';
    if (rec.betti) out << *rec.betti;
    out << '\n';
  }
  return out.str();
}

}  // namespace cosetgap
