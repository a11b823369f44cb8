#include "cosetgap/cocycle.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>

#include "cosetgap/error.hpp"
#include "cosetgap/homology.hpp"

namespace cosetgap {
namespace {

std::size_t step_start(const LabeledMultigraph& g, std::pair<std::size_t, int> s) {
  return s.second > 0 ? g.source(s.first) : g.target(s.first);
}
std::size_t step_end(const LabeledMultigraph& g, std::pair<std::size_t, int> s) {
  return s.second > 0 ? g.target(s.first) : g.source(s.first);
}

// Breadth-first path inside the subgraph induced on `members`.
EdgePath induced_path(const LabeledMultigraph& g, const std::vector<bool>& members,
                      std::size_t from, std::size_t to) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<std::pair<std::size_t, int>>> adj(n);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (!members[g.source(e)] || !members[g.target(e)]) continue;
    adj[g.source(e)].push_back({e, 1});
    adj[g.target(e)].push_back({e, -1});
  }
  std::vector<std::pair<std::size_t, int>> via(n, {0, 0});
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> queue{from};
  seen[from] = true;
  for (std::size_t i = 0; i < queue.size() && !seen[to]; ++i) {
    for (auto step : adj[queue[i]]) {
      std::size_t w = step_end(g, step);
      if (seen[w]) continue;
      seen[w] = true;
      via[w] = step;
      queue.push_back(w);
    }
  }
  COSETGAP_ASSERT(seen[to], "induced subgraph is not connected");
  EdgePath path;
  for (std::size_t v = to; v != from; v = step_start(g, via[v])) path.push_back(via[v]);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<bool> complement(const std::vector<bool>& s) {
  std::vector<bool> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = !s[i];
  return out;
}

}  // namespace

Cochain Cochain::coboundary(const LabeledMultigraph& g, const std::vector<std::int64_t>& f) {
  if (f.size() != g.num_vertices()) throw Error("function has the wrong length");
  Cochain c = zero(g);
  for (std::size_t e = 0; e < g.num_edges(); ++e) c.values[e] = f[g.target(e)] - f[g.source(e)];
  return c;
}

std::pair<std::size_t, std::size_t> path_ends(const LabeledMultigraph& g, const EdgePath& path) {
  if (path.empty()) throw Error("empty path");
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i].first >= g.num_edges() || (path[i].second != 1 && path[i].second != -1)) {
      throw Error("path step is malformed");
    }
    if (i > 0 && step_end(g, path[i - 1]) != step_start(g, path[i])) {
      throw Error("path is not connected at step " + std::to_string(i));
    }
  }
  return {step_start(g, path.front()), step_end(g, path.back())};
}

std::int64_t evaluate_on_path(const LabeledMultigraph& g, const Cochain& c, const EdgePath& path) {
  if (c.values.size() != g.num_edges()) throw Error("cochain has the wrong length");
  if (path.empty()) return 0;
  path_ends(g, path);
  std::int64_t s = 0;
  for (auto [e, dir] : path) s += dir * c.values[e];
  return s;
}

bool is_meta_cocycle(const LabeledMultigraph& g, const Cochain& c) {
  if (c.values.size() != g.num_edges()) throw Error("cochain has the wrong length");
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> out(n);  // (head, value)
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    out[g.source(e)].push_back({g.target(e), c.values[e]});
    out[g.target(e)].push_back({g.source(e), -c.values[e]});
  }
  for (std::size_t v = 0; v < n; ++v) {
    for (auto [w1, a] : out[v]) {
      if (w1 == v && a != 0) return false;
      for (auto [w2, b] : out[w1]) {
        if (w2 == v && a + b != 0) return false;
        for (auto [w3, d] : out[w2]) {
          if (w3 == v && a + b + d != 0) return false;
        }
      }
    }
  }
  return true;
}

CoboundaryTest is_coboundary(const LabeledMultigraph& g, const Cochain& c) {
  if (c.values.size() != g.num_edges()) throw Error("cochain has the wrong length");
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<std::pair<std::size_t, int>>> adj(n);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    adj[g.source(e)].push_back({e, 1});
    adj[g.target(e)].push_back({e, -1});
  }
  std::vector<std::int64_t> f(n, 0);
  std::vector<bool> seen(n, false);
  std::vector<std::pair<std::size_t, int>> via(n, {0, 0});
  std::vector<bool> tree(g.num_edges(), false);
  std::vector<std::size_t> queue{0};
  seen[0] = true;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    std::size_t v = queue[i];
    for (auto step : adj[v]) {
      std::size_t w = step_end(g, step);
      if (seen[w]) continue;
      seen[w] = true;
      via[w] = step;
      tree[step.first] = true;
      f[w] = f[v] + step.second * c.values[step.first];
      queue.push_back(w);
    }
  }
  auto root_path = [&](std::size_t v) {
    EdgePath p;
    for (; v != 0; v = step_start(g, via[v])) p.push_back(via[v]);
    std::reverse(p.begin(), p.end());
    return p;
  };
  CoboundaryTest out;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (tree[e] || c.values[e] == f[g.target(e)] - f[g.source(e)]) continue;
    out.coboundary = false;
    EdgePath loop = root_path(g.source(e));
    loop.push_back({e, 1});
    EdgePath back = root_path(g.target(e));
    for (auto it = back.rbegin(); it != back.rend(); ++it) loop.push_back({it->first, -it->second});
    out.witness_loop = std::move(loop);
    return out;
  }
  return out;
}

bool below_cocycle_threshold(const Rational& h, std::size_t num_vertices) {
  return h.square_compare(Rational(2, 3 * static_cast<std::int64_t>(num_vertices))) < 0;
}

CocycleCertificate build_meta_cocycle(const LabeledMultigraph& x, const CheegerOptions& options) {
  const std::size_t n = x.num_vertices();
  if (n < 2) throw InapplicableError("lemma inapplicable: single vertex quotient");
  CheegerResult hr;
  try {
    hr = cheeger_exact(x, options);
  } catch (const TooLargeError& e) {
    throw InapplicableError(std::string("lemma inapplicable: ") + e.what());
  }
  if (!below_cocycle_threshold(hr.h, n)) {
    throw InapplicableError("lemma inapplicable: h = " + hr.h.str() + " is not below sqrt(2/(3*" +
                            std::to_string(n) + "))");
  }
  const auto& a_list = hr.witness.vertices;
  COSETGAP_ASSERT(4 * a_list.size() > n, "minimizing set has at most |V|/4 vertices");
  std::vector<bool> in_a(n, false);
  for (auto v : a_list) in_a[v] = true;
  COSETGAP_ASSERT(induced_connected(x, in_a) && induced_connected(x, complement(in_a)),
                  "minimizing set or its complement is disconnected");

  auto translations = left_translations(x);
  std::vector<bool> in_boundary(x.num_edges(), false);
  for (std::size_t e = 0; e < x.num_edges(); ++e) {
    in_boundary[e] = in_a[x.source(e)] != in_a[x.target(e)];
  }
  // g_i is the identity; search g_j over the vertices in order.
  std::optional<std::size_t> chosen;
  for (std::size_t u = 1; u < n && !chosen; ++u) {
    const auto& tr = translations[u];
    bool disjoint = true;
    for (std::size_t e = 0; e < x.num_edges() && disjoint; ++e) {
      if (!in_boundary[e]) continue;
      std::size_t image = x.edge(static_cast<std::size_t>(tr[x.source(e)]), x.label(e));
      if (in_boundary[image]) disjoint = false;
    }
    if (!disjoint) continue;
    bool meet = false;
    bool meet_c = false;
    for (std::size_t v = 0; v < n; ++v) {
      bool img_in = in_a[static_cast<std::size_t>(tr[v])];
      meet = meet || (in_a[v] && img_in);
      meet_c = meet_c || (!in_a[v] && !img_in);
    }
    if (meet && meet_c) chosen = u;
  }
  COSETGAP_ASSERT(chosen.has_value(), "no translate with disjoint boundary exists");

  CocycleCertificate cert;
  cert.h = hr.h;
  cert.cayley_vertices = n;
  cert.minimizing_set = a_list;
  cert.translate = *chosen;

  std::vector<bool> in_b(n, false);  // g_j A
  for (auto v : a_list) in_b[static_cast<std::size_t>(translations[*chosen][v])] = true;
  COSETGAP_ASSERT(induced_connected(x, in_b) && induced_connected(x, complement(in_b)),
                  "translated minimizing set or its complement is disconnected");

  cert.cochain = Cochain::zero(x);
  std::optional<std::size_t> e1, e2;
  for (std::size_t e = 0; e < x.num_edges(); ++e) {
    if (!in_boundary[e]) continue;
    bool s = in_b[x.source(e)];
    bool t = in_b[x.target(e)];
    if (s && t) {
      cert.cochain.values[e] = (in_a[x.target(e)] ? 1 : 0) - (in_a[x.source(e)] ? 1 : 0);
      if (!e1) e1 = e;
    }
    if (!s && !t && !e2) e2 = e;
  }
  COSETGAP_ASSERT(e1 && e2, "boundary edges inside and outside the translate not found");
  cert.e1 = *e1;
  cert.e2 = *e2;

  // e1 from its A end to its A^c end, alpha_2 in A^c, e2 back into A,
  // alpha_1 in A.
  auto oriented_out_of_a = [&](std::size_t e) {
    return std::make_pair(e, in_a[x.source(e)] ? 1 : -1);
  };
  auto s1 = oriented_out_of_a(*e1);
  auto s2 = oriented_out_of_a(*e2);
  EdgePath loop{s1};
  auto alpha2 = induced_path(x, complement(in_a), step_end(x, s1), step_end(x, s2));
  loop.insert(loop.end(), alpha2.begin(), alpha2.end());
  loop.push_back({s2.first, -s2.second});
  auto alpha1 = induced_path(x, in_a, step_start(x, s2), step_start(x, s1));
  loop.insert(loop.end(), alpha1.begin(), alpha1.end());
  auto [start, end] = path_ends(x, loop);
  COSETGAP_ASSERT(start == end, "witness loop is not closed");
  cert.witness_loop = std::move(loop);
  cert.witness_value = evaluate_on_path(x, cert.cochain, cert.witness_loop);

  COSETGAP_ASSERT(is_meta_cocycle(x, cert.cochain), "constructed cochain is not a meta-cocycle");
  COSETGAP_ASSERT(cert.witness_value != 0, "witness loop evaluates to zero");
  COSETGAP_ASSERT(!is_coboundary(x, cert.cochain).coboundary, "constructed cochain is a coboundary");
  return cert;
}

CocycleCertificate pullback_certificate(const CocycleCertificate& cert, const LabeledMultigraph& x_gh,
                                        const CollapseResult& collapse) {
  const LabeledMultigraph& q = collapse.graph;
  if (cert.cochain.values.size() != q.num_edges()) {
    throw Error("certificate does not live on the collapsed graph");
  }
  CocycleCertificate out = cert;
  out.cochain = Cochain::zero(x_gh);
  std::vector<std::int64_t> lift(q.num_edges(), -1);
  for (std::size_t e = 0; e < x_gh.num_edges(); ++e) {
    if (collapse.in_forest[e]) continue;
    auto image = static_cast<std::size_t>(collapse.edge_image[e]);
    COSETGAP_ASSERT(lift[image] < 0, "two edges collapse onto one quotient edge");
    lift[image] = static_cast<std::int64_t>(e);
    out.cochain.values[e] = cert.cochain.values[image];
  }

  auto start_component = static_cast<std::int32_t>(path_ends(q, cert.witness_loop).first);
  std::size_t v0 = 0;
  while (collapse.component[v0] != start_component) ++v0;
  EdgePath loop;
  std::size_t at = v0;
  for (auto [qe, dir] : cert.witness_loop) {
    COSETGAP_ASSERT(lift[qe] >= 0, "quotient edge without a lift");
    auto e = static_cast<std::size_t>(lift[qe]);
    std::size_t from = dir > 0 ? x_gh.source(e) : x_gh.target(e);
    if (from != at) {
      auto bridge = collapse.forest_path(x_gh, at, from);
      loop.insert(loop.end(), bridge.begin(), bridge.end());
    }
    loop.push_back({e, dir});
    at = dir > 0 ? x_gh.target(e) : x_gh.source(e);
  }
  if (at != v0) {
    auto bridge = collapse.forest_path(x_gh, at, v0);
    loop.insert(loop.end(), bridge.begin(), bridge.end());
  }
  auto [s, t] = path_ends(x_gh, loop);
  COSETGAP_ASSERT(s == t, "lifted witness loop is not closed");
  out.witness_loop = std::move(loop);
  out.witness_value = evaluate_on_path(x_gh, out.cochain, out.witness_loop);
  COSETGAP_ASSERT(out.witness_value == cert.witness_value,
                  "lifted witness loop changed its evaluation");
  COSETGAP_ASSERT(is_meta_cocycle(x_gh, out.cochain), "pulled back cochain is not a meta-cocycle");
  return out;
}

namespace {

std::size_t check_relator_loops(const LabeledMultigraph& x, const CosetTable& t,
                                const FinitePresentation& p, const Cochain& c) {
  std::size_t loops = 0;
  for (std::size_t coset = 0; coset < t.size(); ++coset) {
    for (const Word& r : p.relators()) {
      std::int64_t s = 0;
      std::size_t at = coset;
      for (Letter l : r) {
        if (l > 0) {
          s += c.values[x.edge(at, static_cast<std::size_t>(l - 1))];
          at = static_cast<std::size_t>(t.act(at, l));
        } else {
          at = static_cast<std::size_t>(t.act(at, l));
          s -= c.values[x.edge(at, static_cast<std::size_t>(-l - 1))];
        }
      }
      if (at != coset || s != 0) return SIZE_MAX;
      ++loops;
    }
  }
  return loops;
}

}  // namespace

Certification certify_infinite_abelianization(const FinitePresentation& p, const CosetTable& t,
                                              const CheegerOptions& options) {
  if (!p.is_triangular()) throw Error("certification needs a triangular presentation");
  LabeledMultigraph x_gh = schreier_graph(t, p);
  auto indices = normalizer_indices(t);
  CosetTable t_gn = normalizer_table(t);
  COSETGAP_ASSERT(t_gn.size() == indices.index_of_normalizer, "normalizer table has the wrong size");
  CollapseResult collapse = collapse_forest(x_gh, t_gn);
  COSETGAP_ASSERT(collapse.graph.num_vertices() == indices.index_over_subgroup,
                  "collapsed graph size differs from [N(H):H]");
  CocycleCertificate quotient = build_meta_cocycle(collapse.graph, options);
  Certification out;
  out.certificate = pullback_certificate(quotient, x_gh, collapse);
  out.certificate.index_of_normalizer = indices.index_of_normalizer;
  out.certificate.index_over_subgroup = indices.index_over_subgroup;
  COSETGAP_ASSERT(!is_coboundary(x_gh, out.certificate.cochain).coboundary,
                  "pulled back cochain is a coboundary");
  COSETGAP_ASSERT(check_relator_loops(x_gh, t, p, out.certificate.cochain) != SIZE_MAX,
                  "cocycle does not vanish on a relator loop");
  out.betti = first_betti(reidemeister_schreier(p, t));
  COSETGAP_ASSERT(out.betti >= 1, "homology reports a finite abelianization for a certified subgroup");
  out.digest = graph_digest(x_gh);
  return out;
}

std::string certificate_to_json(const Certification& c, const LabeledMultigraph& x_gh) {
  using nlohmann::ordered_json;
  const auto& cert = c.certificate;
  ordered_json j;
  j["format"] = "cosetgap-certificate";
  j["version"] = 1;
  j["graph"] = {{"sha256", c.digest},
                {"vertices", x_gh.num_vertices()},
                {"labels", x_gh.label_names()}};
  ordered_json values = ordered_json::array();
  for (std::size_t e = 0; e < cert.cochain.values.size(); ++e) {
    if (cert.cochain.values[e] != 0) values.push_back({e, cert.cochain.values[e]});
  }
  j["cochain"] = std::move(values);
  ordered_json loop = ordered_json::array();
  for (auto [e, dir] : cert.witness_loop) loop.push_back({e, dir});
  j["witness_loop"] = std::move(loop);
  j["witness_value"] = cert.witness_value;
  j["provenance"] = {
      {"index_of_normalizer", cert.index_of_normalizer},
      {"index_over_subgroup", cert.index_over_subgroup},
      {"cayley_vertices", cert.cayley_vertices},
      {"h", cert.h.str()},
      {"minimizing_set", cert.minimizing_set},
      {"translate", cert.translate},
      {"e1", cert.e1},
      {"e2", cert.e2},
      {"betti", c.betti},
  };
  return j.dump(2) + "\n";
}

VerifyReport verify_certificate(const std::string& text, const FinitePresentation& p,
                                const CosetTable& t) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw RejectedError(std::string("certificate is not valid JSON: ") + e.what());
  }
  auto reject = [](const std::string& why) { throw RejectedError("certificate rejected: " + why); };
  if (!p.is_triangular()) reject("presentation is not triangular");
  LabeledMultigraph x = schreier_graph(t, p);
  VerifyReport report;
  report.vertices = x.num_vertices();
  try {
    if (j.at("format") != "cosetgap-certificate" || j.at("version") != 1) reject("unknown format");
    if (j.at("graph").at("sha256").get<std::string>() != graph_digest(x)) reject("graph hash mismatch");
    if (j.at("graph").at("vertices").get<std::size_t>() != x.num_vertices()) reject("vertex count mismatch");
    Cochain c = Cochain::zero(x);
    for (const auto& entry : j.at("cochain")) {
      auto e = entry.at(0).get<std::size_t>();
      if (e >= x.num_edges()) reject("cochain edge out of range");
      c.values[e] = entry.at(1).get<std::int64_t>();
    }
    EdgePath loop;
    for (const auto& step : j.at("witness_loop")) {
      loop.push_back({step.at(0).get<std::size_t>(), step.at(1).get<int>()});
    }
    if (loop.empty()) reject("empty witness loop");
    std::pair<std::size_t, std::size_t> ends;
    try {
      ends = path_ends(x, loop);
    } catch (const Error& e) {
      reject(e.what());
    }
    if (ends.first != ends.second) reject("witness loop is not closed");
    if (!is_meta_cocycle(x, c)) reject("cochain is not a meta-cocycle");
    report.witness_value = evaluate_on_path(x, c, loop);
    if (report.witness_value == 0) reject("witness loop evaluates to zero");
    if (report.witness_value != j.at("witness_value").get<std::int64_t>()) {
      reject("recorded witness value differs");
    }
    report.relator_loops = check_relator_loops(x, t, p, c);
    if (report.relator_loops == SIZE_MAX) reject("cocycle is nonzero on a relator loop");
  } catch (const json::exception& e) {
    reject(std::string("malformed field: ") + e.what());
  }
  return report;
}

}  // namespace cosetgap
