#include "cosetgap/graph.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "cosetgap/error.hpp"

namespace cosetgap {

LabeledMultigraph::LabeledMultigraph(std::size_t num_vertices,
                                     std::vector<std::string> label_names,
                                     std::vector<std::int32_t> targets)
    : n_(num_vertices), names_(std::move(label_names)), targets_(std::move(targets)) {
  const std::size_t L = names_.size();
  if (n_ == 0) throw Error("graph must have at least one vertex");
  if (L == 0) throw Error("graph must have at least one label");
  if (targets_.size() != n_ * L) throw Error("edge array has the wrong size");
  std::vector<char> hit(n_ * L, 0);
  for (std::size_t e = 0; e < targets_.size(); ++e) {
    std::int32_t t = targets_[e];
    if (t < 0 || static_cast<std::size_t>(t) >= n_) {
      throw Error("edge target out of range");
    }
    char& h = hit[static_cast<std::size_t>(t) * L + e % L];
    if (h != 0) throw Error("label does not act as a permutation");
    h = 1;
  }
  std::vector<bool> all(n_, true);
  if (!induced_connected(*this, all)) throw Error("graph is not connected");
}

void LabeledMultigraph::set_vertex_labels(std::vector<std::int64_t> labels) {
  if (labels.size() != n_) throw Error("vertex label count mismatch");
  vertex_labels_ = std::move(labels);
}

std::vector<std::size_t> LabeledMultigraph::neighbours(std::size_t v) const {
  std::vector<std::size_t> out;
  const std::size_t L = names_.size();
  for (std::size_t l = 0; l < L; ++l) {
    auto t = static_cast<std::size_t>(targets_[v * L + l]);
    if (t != v) out.push_back(t);
  }
  for (std::size_t e = 0; e < targets_.size(); ++e) {
    if (static_cast<std::size_t>(targets_[e]) == v && e / L != v) {
      out.push_back(e / L);
    }
  }
  return out;
}

LabeledMultigraph schreier_graph(const CosetTable& t, const FinitePresentation& p) {
  const std::size_t k = t.num_generators();
  if (p.num_generators() != k) {
    throw Error("table and presentation disagree on generator count");
  }
  std::vector<std::int32_t> targets(t.size() * k);
  for (std::size_t c = 0; c < t.size(); ++c) {
    for (std::size_t s = 0; s < k; ++s) {
      targets[c * k + s] = t.act(c, static_cast<Letter>(s + 1));
    }
  }
  return LabeledMultigraph(t.size(), p.generator_names(), std::move(targets));
}

LabeledMultigraph schreier_graph(const CosetTable& t,
                                 const std::vector<Word>& generators,
                                 std::vector<std::string> names) {
  if (names.size() != generators.size()) {
    throw Error("one name per generator word required");
  }
  const std::size_t L = generators.size();
  std::vector<std::int32_t> targets(t.size() * L);
  for (std::size_t c = 0; c < t.size(); ++c) {
    for (std::size_t l = 0; l < L; ++l) targets[c * L + l] = t.act(c, generators[l]);
  }
  return LabeledMultigraph(t.size(), std::move(names), std::move(targets));
}

std::string graph_digest(const LabeledMultigraph& g) {
  std::ostringstream canon;
  canon << g.num_vertices() << ' ' << g.num_labels() << '\n';
  for (auto t : g.targets()) canon << t << ' ';
  const std::string text = canon.str();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[i]);
  }
  return hex.str();
}

std::string to_dot(const LabeledMultigraph& g) {
  std::ostringstream out;
  out << "digraph X {\n";
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    out << "  " << v;
    if (g.vertex_labels()) {
      out << " [label=\"" << v << "\\npsi=" << (*g.vertex_labels())[v] << "\"]";
    }
    out << ";\n";
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    out << "  " << g.source(e) << " -> " << g.target(e) << " [label=\""
        << g.label_names()[g.label(e)] << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string to_edge_csv(const LabeledMultigraph& g) {
  std::ostringstream out;
  out << "source,target,label\n";
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    out << g.source(e) << ',' << g.target(e) << ','
        << g.label_names()[g.label(e)] << '\n';
  }
  return out.str();
}

LabeledMultigraph from_edge_csv(std::string_view text) {
  struct Row {
    std::size_t source, target, label;
  };
  std::vector<Row> rows;
  std::vector<std::string> labels;
  std::map<std::string, std::size_t, std::less<>> label_index;
  std::size_t n = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("source", 0) == 0) continue;
    auto c1 = line.find(',');
    auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw ParseError("expected 3 fields", line_no, 1);
    auto number = [&](std::string_view s, int col) {
      std::size_t v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw ParseError("malformed vertex '" + std::string(s) + "'", line_no, col);
      }
      return v;
    };
    std::string_view sv(line);
    std::size_t s = number(sv.substr(0, c1), 1);
    std::size_t t = number(sv.substr(c1 + 1, c2 - c1 - 1), static_cast<int>(c1) + 2);
    std::string name(sv.substr(c2 + 1));
    auto [it, inserted] = label_index.try_emplace(name, labels.size());
    if (inserted) labels.push_back(name);
    rows.push_back({s, t, it->second});
    n = std::max({n, s + 1, t + 1});
  }
  const std::size_t L = labels.size();
  std::vector<std::int32_t> targets(n * L, -1);
  for (const auto& r : rows) {
    auto& slot = targets[r.source * L + r.label];
    if (slot >= 0) throw Error("vertex has two edges with the same label", ExitCode::parse);
    slot = static_cast<std::int32_t>(r.target);
  }
  if (std::find(targets.begin(), targets.end(), -1) != targets.end()) {
    throw Error("some vertex lacks an edge for some label", ExitCode::parse);
  }
  return LabeledMultigraph(n, std::move(labels), std::move(targets));
}

bool induced_connected(const LabeledMultigraph& g, const std::vector<bool>& members) {
  const std::size_t n = g.num_vertices();
  std::vector<std::size_t> root(n);
  std::iota(root.begin(), root.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (root[v] != v) {
      root[v] = root[root[v]];
      v = root[v];
    }
    return v;
  };
  std::size_t components = 0;
  for (std::size_t v = 0; v < n; ++v) components += members[v] ? 1 : 0;
  if (components == 0) return true;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    std::size_t a = g.source(e);
    std::size_t b = g.target(e);
    if (!members[a] || !members[b]) continue;
    std::size_t ra = find(a);
    std::size_t rb = find(b);
    if (ra != rb) {
      root[ra] = rb;
      --components;
    }
  }
  return components == 1;
}

std::vector<std::vector<std::int32_t>> left_translations(const LabeledMultigraph& g) {
  const std::size_t n = g.num_vertices();
  const std::size_t L = g.num_labels();
  std::vector<std::int32_t> back(n * L);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    back[g.target(e) * L + g.label(e)] = static_cast<std::int32_t>(g.source(e));
  }
  // breadth-first order with the step used to reach each vertex
  std::vector<std::size_t> order{0};
  std::vector<std::pair<std::size_t, std::int64_t>> via(n, {0, 0});
  std::vector<bool> seen(n, false);
  seen[0] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::size_t v = order[i];
    for (std::size_t l = 0; l < L; ++l) {
      for (int dir : {1, -1}) {
        auto w = static_cast<std::size_t>(dir > 0 ? g.targets()[v * L + l] : back[v * L + l]);
        if (seen[w]) continue;
        seen[w] = true;
        via[w] = {v, dir * static_cast<std::int64_t>(l + 1)};
        order.push_back(w);
      }
    }
  }
  std::vector<std::vector<std::int32_t>> out(n);
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<std::int32_t> image(n, -1);
    image[0] = static_cast<std::int32_t>(u);
    for (std::size_t i = 1; i < order.size(); ++i) {
      std::size_t w = order[i];
      auto [v, step] = via[w];
      auto l = static_cast<std::size_t>((step > 0 ? step : -step) - 1);
      auto iv = static_cast<std::size_t>(image[v]);
      image[w] = step > 0 ? g.targets()[iv * L + l] : back[iv * L + l];
    }
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      auto is = static_cast<std::size_t>(image[g.source(e)]);
      COSETGAP_ASSERT(g.targets()[is * L + g.label(e)] == image[g.target(e)],
                      "graph is not a Cayley graph: translation is not an automorphism");
    }
    out[u] = std::move(image);
  }
  return out;
}

LabeledMultigraph square_generators(const LabeledMultigraph& x) {
  const std::size_t n = x.num_vertices();
  const std::size_t L = x.num_labels();
  using Perm = std::vector<std::int32_t>;
  std::vector<Perm> letter_perm;
  std::vector<std::string> letter_name;
  std::vector<Letter> letters;
  for (std::size_t l = 0; l < L; ++l) {
    Perm fwd(n), inv(n);
    for (std::size_t v = 0; v < n; ++v) {
      fwd[v] = x.targets()[v * L + l];
      inv[static_cast<std::size_t>(fwd[v])] = static_cast<std::int32_t>(v);
    }
    letter_perm.push_back(fwd);
    letter_perm.push_back(inv);
    letter_name.push_back(x.label_names()[l]);
    letter_name.push_back(x.label_names()[l] + "^-1");
    letters.push_back(static_cast<Letter>(l + 1));
    letters.push_back(-static_cast<Letter>(l + 1));
  }

  Perm identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  std::set<Perm> seen;
  std::vector<Perm> kept;
  std::vector<std::string> names;
  auto offer = [&](Perm p, std::string name) {
    if (p == identity || seen.contains(p)) return;
    Perm inv(n);
    for (std::size_t v = 0; v < n; ++v) inv[static_cast<std::size_t>(p[v])] = static_cast<std::int32_t>(v);
    if (seen.contains(inv)) return;
    seen.insert(p);
    kept.push_back(std::move(p));
    names.push_back(std::move(name));
  };
  // S itself is kept label for label, so X is a subgraph of the result and
  // h can only grow; only the new length-two words are deduplicated.
  for (std::size_t l = 0; l < L; ++l) {
    seen.insert(letter_perm[2 * l]);
    kept.push_back(letter_perm[2 * l]);
    names.push_back(letter_name[2 * l]);
  }
  for (std::size_t i = 0; i < letters.size(); ++i) {
    for (std::size_t j = 0; j < letters.size(); ++j) {
      if (letters[j] == -letters[i]) continue;
      Perm p(n);
      for (std::size_t v = 0; v < n; ++v) {
        p[v] = letter_perm[j][static_cast<std::size_t>(letter_perm[i][v])];
      }
      offer(std::move(p), letter_name[i] + "*" + letter_name[j]);
    }
  }
  std::vector<std::int32_t> targets(n * kept.size());
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t l = 0; l < kept.size(); ++l) targets[v * kept.size() + l] = kept[l][v];
  }
  return LabeledMultigraph(n, std::move(names), std::move(targets));
}

std::vector<std::pair<std::size_t, int>> CollapseResult::forest_path(
    const LabeledMultigraph& x_gh, std::size_t from, std::size_t to) const {
  if (component[from] != component[to]) {
    throw InvariantViolation("forest path requested across components");
  }
  const std::size_t n = x_gh.num_vertices();
  std::vector<std::vector<std::pair<std::size_t, int>>> adj(n);
  for (std::size_t e = 0; e < x_gh.num_edges(); ++e) {
    if (!in_forest[e]) continue;
    adj[x_gh.source(e)].push_back({e, 1});
    adj[x_gh.target(e)].push_back({e, -1});
  }
  std::vector<std::int64_t> via(n, -1);
  std::vector<int> via_dir(n, 0);
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> queue{from};
  seen[from] = true;
  for (std::size_t i = 0; i < queue.size() && !seen[to]; ++i) {
    std::size_t v = queue[i];
    for (auto [e, dir] : adj[v]) {
      std::size_t w = dir > 0 ? x_gh.target(e) : x_gh.source(e);
      if (seen[w]) continue;
      seen[w] = true;
      via[w] = static_cast<std::int64_t>(e);
      via_dir[w] = dir;
      queue.push_back(w);
    }
  }
  COSETGAP_ASSERT(seen[to], "forest component is not connected");
  std::vector<std::pair<std::size_t, int>> path;
  for (std::size_t v = to; v != from;) {
    auto e = static_cast<std::size_t>(via[v]);
    path.push_back({e, via_dir[v]});
    v = via_dir[v] > 0 ? x_gh.source(e) : x_gh.target(e);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

CollapseResult collapse_forest(const LabeledMultigraph& x_gh, const CosetTable& t_gk) {
  const std::size_t n = x_gh.num_vertices();
  const std::size_t k = x_gh.num_labels();
  if (t_gk.num_generators() != k) {
    throw Error("inputs do not form a covering pair: generator counts differ");
  }
  if (n % t_gk.size() != 0) throw Error("inputs do not form a covering pair");

  CollapseResult out;
  out.projection.assign(n, -1);
  out.projection[0] = 0;
  {
    std::vector<std::size_t> back(n * k);
    for (std::size_t e = 0; e < x_gh.num_edges(); ++e) {
      back[x_gh.target(e) * k + x_gh.label(e)] = x_gh.source(e);
    }
    std::vector<std::size_t> queue{0};
    for (std::size_t i = 0; i < queue.size(); ++i) {
      std::size_t v = queue[i];
      auto pv = static_cast<std::size_t>(out.projection[v]);
      for (std::size_t l = 0; l < k; ++l) {
        for (int dir : {1, -1}) {
          Letter x = dir * static_cast<Letter>(l + 1);
          std::size_t w = dir > 0 ? x_gh.target(x_gh.edge(v, l)) : back[v * k + l];
          std::int32_t expected = t_gk.act(pv, x);
          if (out.projection[w] < 0) {
            out.projection[w] = expected;
            queue.push_back(w);
          } else if (out.projection[w] != expected) {
            throw Error("inputs do not form a covering pair");
          }
        }
      }
    }
  }

  auto tree = spanning_tree(t_gk);
  out.in_forest.assign(x_gh.num_edges(), false);
  std::vector<std::size_t> root(n);
  std::iota(root.begin(), root.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (root[v] != v) {
      root[v] = root[root[v]];
      v = root[v];
    }
    return v;
  };
  for (std::size_t e = 0; e < x_gh.num_edges(); ++e) {
    auto c = static_cast<std::size_t>(out.projection[x_gh.source(e)]);
    if (tree.is_tree_edge[c * k + x_gh.label(e)]) {
      out.in_forest[e] = true;
      std::size_t a = find(x_gh.source(e));
      std::size_t b = find(x_gh.target(e));
      COSETGAP_ASSERT(a != b, "lift of the maximal tree contains a cycle");
      root[std::max(a, b)] = std::min(a, b);
    }
  }

  out.component.assign(n, -1);
  std::vector<std::int32_t> root_index(n, -1);
  std::size_t m = 0;
  std::vector<std::size_t> sizes;
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t r = find(v);
    if (root_index[r] < 0) {
      root_index[r] = static_cast<std::int32_t>(m++);
      sizes.push_back(0);
    }
    out.component[v] = root_index[r];
    ++sizes[static_cast<std::size_t>(root_index[r])];
  }
  for (auto s : sizes) {
    COSETGAP_ASSERT(s == t_gk.size(), "forest component size differs from [G:K]");
  }
  out.component_size = t_gk.size();

  auto labels = schreier_edges(t_gk, tree);
  std::vector<std::int64_t> label_of_edge(t_gk.size() * k, -1);
  std::vector<std::string> names;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    label_of_edge[labels[j]] = static_cast<std::int64_t>(j);
    names.push_back(std::to_string(labels[j] / k) + "." +
                    x_gh.label_names()[labels[j] % k]);
  }
  const std::size_t L = labels.size();
  std::vector<std::int32_t> targets(m * L, -1);
  out.edge_image.assign(x_gh.num_edges(), -1);
  for (std::size_t e = 0; e < x_gh.num_edges(); ++e) {
    if (out.in_forest[e]) continue;
    auto c = static_cast<std::size_t>(out.projection[x_gh.source(e)]);
    auto j = static_cast<std::size_t>(label_of_edge[c * k + x_gh.label(e)]);
    auto from = static_cast<std::size_t>(out.component[x_gh.source(e)]);
    targets[from * L + j] = out.component[x_gh.target(e)];
    out.edge_image[e] = static_cast<std::int64_t>(from * L + j);
  }
  if (L == 0) {
    // K = H with a trivial quotient; keep a single loop so the graph is
    // well formed.
    names.push_back("1");
    targets.assign(m, 0);
  }
  out.graph = LabeledMultigraph(m, std::move(names), std::move(targets));

  if (x_gh.vertex_labels()) {
    std::vector<std::int64_t> psi(m, 0);
    std::vector<bool> set(m, false);
    for (std::size_t v = 0; v < n; ++v) {
      auto c = static_cast<std::size_t>(out.component[v]);
      std::int64_t val = (*x_gh.vertex_labels())[v];
      if (!set[c]) {
        psi[c] = val;
        set[c] = true;
      } else {
        COSETGAP_ASSERT(psi[c] == val, "vertex labels vary along a forest component");
      }
    }
    out.graph.set_vertex_labels(std::move(psi));
  }
  return out;
}

}  // namespace cosetgap
