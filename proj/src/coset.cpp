#include "cosetgap/coset.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "cosetgap/error.hpp"

namespace cosetgap {

SubgroupSpec parse_subgroup(std::string_view text, const FinitePresentation& p,
                            std::string label) {
  SubgroupSpec h;
  h.generators = parse_word_list(text, p);
  h.label = std::move(label);
  return h;
}

CosetTable CosetTable::standardized(std::size_t num_generators,
                                    const std::vector<std::int32_t>& action,
                                    std::size_t base,
                                    std::vector<std::int32_t>& order) {
  const std::size_t cols = 2 * num_generators;
  if (cols == 0 || action.size() % cols != 0) {
    throw Error("coset table has the wrong shape");
  }
  const std::size_t n = action.size() / cols;
  if (base >= n) throw Error("base coset out of range");
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t col = 0; col < cols; ++col) {
      std::int32_t d = action[c * cols + col];
      if (d < 0 || static_cast<std::size_t>(d) >= n) {
        throw Error("coset table is incomplete");
      }
      std::size_t inv = col ^ 1U;
      if (action[static_cast<std::size_t>(d) * cols + inv] !=
          static_cast<std::int32_t>(c)) {
        throw Error("coset table columns are not inverse permutations");
      }
    }
  }

  std::vector<std::int32_t> renumber(n, -1);
  order.clear();
  order.reserve(n);
  order.push_back(static_cast<std::int32_t>(base));
  renumber[base] = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::size_t c = static_cast<std::size_t>(order[i]);
    for (std::size_t col = 0; col < cols; ++col) {
      std::int32_t d = action[c * cols + col];
      if (renumber[static_cast<std::size_t>(d)] < 0) {
        renumber[static_cast<std::size_t>(d)] =
            static_cast<std::int32_t>(order.size());
        order.push_back(d);
      }
    }
  }
  if (order.size() != n) throw Error("coset action is not transitive");

  CosetTable t;
  t.n_ = n;
  t.k_ = num_generators;
  t.action_.resize(n * cols);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t old = static_cast<std::size_t>(order[i]);
    for (std::size_t col = 0; col < cols; ++col) {
      t.action_[i * cols + col] =
          renumber[static_cast<std::size_t>(action[old * cols + col])];
    }
  }
  return t;
}

CosetTable::CosetTable(std::size_t num_generators,
                       std::vector<std::int32_t> action, std::size_t base) {
  std::vector<std::int32_t> order;
  *this = standardized(num_generators, action, base, order);
}

CosetTable CosetTable::from_permutations(
    const std::vector<std::vector<std::int32_t>>& images, std::size_t base) {
  const std::size_t k = images.size();
  if (k == 0) throw Error("a coset table needs at least one generator");
  const std::size_t n = images[0].size();
  std::vector<std::int32_t> action(n * 2 * k, -1);
  for (std::size_t s = 0; s < k; ++s) {
    if (images[s].size() != n) throw Error("permutations of unequal degree");
    for (std::size_t c = 0; c < n; ++c) {
      std::int32_t d = images[s][c];
      if (d < 0 || static_cast<std::size_t>(d) >= n) {
        throw Error("permutation image out of range");
      }
      action[c * 2 * k + 2 * s] = d;
      if (action[static_cast<std::size_t>(d) * 2 * k + 2 * s + 1] != -1) {
        throw Error("generator image is not a permutation");
      }
      action[static_cast<std::size_t>(d) * 2 * k + 2 * s + 1] =
          static_cast<std::int32_t>(c);
    }
  }
  return CosetTable(k, std::move(action), base);
}

std::int32_t CosetTable::act(std::size_t coset, const Word& w) const noexcept {
  std::size_t c = coset;
  for (Letter x : w) c = static_cast<std::size_t>(act(c, x));
  return static_cast<std::int32_t>(c);
}

void CosetTable::verify(const FinitePresentation& p,
                        const SubgroupSpec* subgroup) const {
  COSETGAP_ASSERT(p.num_generators() == k_,
                  "table and presentation disagree on generator count");
  for (std::size_t c = 0; c < n_; ++c) {
    for (const auto& r : p.relators()) {
      COSETGAP_ASSERT(act(c, r) == static_cast<std::int32_t>(c),
                      "relator does not close at coset " + std::to_string(c));
    }
  }
  if (subgroup != nullptr) {
    for (const auto& w : subgroup->generators) {
      COSETGAP_ASSERT(act(0, w) == 0,
                      "subgroup generator does not fix the base coset");
    }
  }
  std::vector<bool> seen(n_, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    std::size_t c = stack.back();
    stack.pop_back();
    for (std::size_t col = 0; col < 2 * k_; ++col) {
      auto d = static_cast<std::size_t>(action_[c * 2 * k_ + col]);
      if (!seen[d]) {
        seen[d] = true;
        ++reached;
        stack.push_back(d);
      }
    }
  }
  COSETGAP_ASSERT(reached == n_, "coset action is not transitive");
}

std::string CosetTable::to_csv(const FinitePresentation& p) const {
  std::ostringstream out;
  out << "coset,generator,image\n";
  for (std::size_t c = 0; c < n_; ++c) {
    for (std::size_t s = 0; s < k_; ++s) {
      out << c << ',' << p.generator_names()[s] << ','
          << act(c, static_cast<Letter>(s + 1)) << '\n';
    }
  }
  return out.str();
}

SpanningTree spanning_tree(const CosetTable& t) {
  const std::size_t n = t.size();
  const std::size_t k = t.num_generators();
  SpanningTree tree;
  tree.parent.assign(n, -1);
  tree.parent_letter.assign(n, 0);
  tree.is_tree_edge.assign(n * k, false);
  tree.transversal.assign(n, Word{});
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> queue{0};
  seen[0] = true;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    std::size_t c = queue[i];
    for (std::size_t col = 0; col < 2 * k; ++col) {
      Letter x = column_letter(col);
      auto d = static_cast<std::size_t>(t.act(c, x));
      if (seen[d]) continue;
      seen[d] = true;
      queue.push_back(d);
      tree.parent[d] = static_cast<std::int32_t>(c);
      tree.parent_letter[d] = x;
      tree.transversal[d] = tree.transversal[c] * Word{x};
      // the oriented edge is (c, x) for a generator, (d, x^-1) for an inverse
      std::size_t edge = x > 0 ? c * k + static_cast<std::size_t>(x - 1)
                               : d * k + static_cast<std::size_t>(-x - 1);
      tree.is_tree_edge[edge] = true;
    }
  }
  return tree;
}

std::vector<std::size_t> schreier_edges(const CosetTable& t,
                                        const SpanningTree& tree) {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < t.size() * t.num_generators(); ++e) {
    if (!tree.is_tree_edge[e]) out.push_back(e);
  }
  return out;
}

std::vector<Word> schreier_generators(const CosetTable& t) {
  auto tree = spanning_tree(t);
  std::vector<Word> out;
  const std::size_t k = t.num_generators();
  for (std::size_t e : schreier_edges(t, tree)) {
    std::size_t c = e / k;
    Letter s = static_cast<Letter>(e % k) + 1;
    auto d = static_cast<std::size_t>(t.act(c, s));
    out.push_back(
        free_reduce(tree.transversal[c] * Word{s} * tree.transversal[d].inverted()));
  }
  return out;
}

namespace {

constexpr std::int32_t undefined = -1;

class ToddCoxeter {
 public:
  ToddCoxeter(const FinitePresentation& p, const SubgroupSpec& h,
              std::size_t limit)
      : cols_(2 * p.num_generators()), limit_(limit), p_(p), h_(h) {
    if (limit_ < 1) throw Error("coset limit must be at least 1");
    new_coset();
  }

  CosetTable run() {
    for (;;) {
      if (try_run()) break;
      lookahead();
      if (live_ >= limit_) {
        throw EnumerationError("index not determined within limit of " +
                               std::to_string(limit_) + " cosets");
      }
    }
    return compact();
  }

 private:
  enum class Scan { done, blocked };

  std::size_t cols_;
  std::size_t limit_;
  const FinitePresentation& p_;
  const SubgroupSpec& h_;
  std::vector<std::int32_t> table_;
  std::vector<std::int32_t> parent_;
  std::vector<std::int32_t> queue_;
  std::size_t live_ = 0;
  std::size_t cursor_ = 0;
  bool subgroup_done_ = false;

  std::int32_t& entry(std::int32_t c, Letter x) {
    return table_[static_cast<std::size_t>(c) * cols_ + letter_column(x)];
  }

  bool alive(std::int32_t c) const {
    return parent_[static_cast<std::size_t>(c)] == c;
  }

  std::int32_t new_coset() {
    auto c = static_cast<std::int32_t>(parent_.size());
    parent_.push_back(c);
    table_.resize(table_.size() + cols_, undefined);
    ++live_;
    return c;
  }

  bool define(std::int32_t c, Letter x) {
    if (live_ >= limit_) return false;
    if (parent_.size() >= 4 * limit_ + 16) {
      throw EnumerationError("index not determined within limit of " +
                             std::to_string(limit_) + " cosets");
    }
    std::int32_t d = new_coset();
    entry(c, x) = d;
    entry(d, -x) = c;
    return true;
  }

  std::int32_t rep(std::int32_t c) {
    std::int32_t r = c;
    while (parent_[static_cast<std::size_t>(r)] != r) {
      r = parent_[static_cast<std::size_t>(r)];
    }
    while (parent_[static_cast<std::size_t>(c)] != r) {
      std::int32_t next = parent_[static_cast<std::size_t>(c)];
      parent_[static_cast<std::size_t>(c)] = r;
      c = next;
    }
    return r;
  }

  void merge(std::int32_t a, std::int32_t b) {
    std::int32_t ra = rep(a);
    std::int32_t rb = rep(b);
    if (ra == rb) return;
    std::int32_t lo = std::min(ra, rb);
    std::int32_t hi = std::max(ra, rb);
    parent_[static_cast<std::size_t>(hi)] = lo;
    queue_.push_back(hi);
    --live_;
  }

  void coincidence(std::int32_t a, std::int32_t b) {
    queue_.clear();
    merge(a, b);
    for (std::size_t i = 0; i < queue_.size(); ++i) {
      std::int32_t g = queue_[i];
      for (std::size_t col = 0; col < cols_; ++col) {
        Letter x = column_letter(col);
        std::int32_t d = entry(g, x);
        if (d == undefined) continue;
        entry(d, -x) = undefined;
        std::int32_t mu = rep(g);
        std::int32_t nu = rep(d);
        if (entry(mu, x) != undefined) {
          merge(nu, entry(mu, x));
        } else if (entry(nu, -x) != undefined) {
          merge(mu, entry(nu, -x));
        } else {
          entry(mu, x) = nu;
          entry(nu, -x) = mu;
        }
      }
    }
  }

  // Scans w from c in both directions, filling the gap by deduction, and
  // by definition when `fill` is set.
  Scan scan(std::int32_t c, const Word& w, bool fill) {
    std::int32_t f = c;
    std::int32_t b = c;
    std::ptrdiff_t i = 0;
    std::ptrdiff_t j = static_cast<std::ptrdiff_t>(w.length()) - 1;
    for (;;) {
      while (i <= j && entry(f, w[static_cast<std::size_t>(i)]) != undefined) {
        f = entry(f, w[static_cast<std::size_t>(i)]);
        ++i;
      }
      if (i > j) {
        if (f != b) coincidence(f, b);
        return Scan::done;
      }
      while (j >= i && entry(b, -w[static_cast<std::size_t>(j)]) != undefined) {
        b = entry(b, -w[static_cast<std::size_t>(j)]);
        --j;
      }
      if (j < i) {
        coincidence(f, b);
        return Scan::done;
      }
      if (i == j) {
        Letter x = w[static_cast<std::size_t>(i)];
        entry(f, x) = b;
        entry(b, -x) = f;
        return Scan::done;
      }
      if (!fill) return Scan::done;
      if (!define(f, w[static_cast<std::size_t>(i)])) return Scan::blocked;
    }
  }

  // One HLT pass. Returns false when the live coset limit blocks a
  // definition.
  bool try_run() {
    if (!subgroup_done_) {
      for (const auto& w : h_.generators) {
        if (scan(rep(0), w, true) == Scan::blocked) return false;
      }
      subgroup_done_ = true;
    }
    while (cursor_ < parent_.size()) {
      auto c = static_cast<std::int32_t>(cursor_);
      for (const auto& r : p_.relators()) {
        if (!alive(c)) break;
        if (scan(c, r, true) == Scan::blocked) return false;
      }
      if (alive(c)) {
        for (std::size_t col = 0; col < cols_; ++col) {
          Letter x = column_letter(col);
          if (entry(c, x) == undefined && !define(c, x)) return false;
        }
      }
      ++cursor_;
    }
    return true;
  }

  void lookahead() {
    for (const auto& w : h_.generators) scan(rep(0), w, false);
    for (std::size_t c = 0; c < parent_.size(); ++c) {
      for (const auto& r : p_.relators()) {
        if (!alive(static_cast<std::int32_t>(c))) break;
        scan(static_cast<std::int32_t>(c), r, false);
      }
    }
  }

  CosetTable compact() {
    std::vector<std::int32_t> index(parent_.size(), -1);
    std::size_t n = 0;
    for (std::size_t c = 0; c < parent_.size(); ++c) {
      if (alive(static_cast<std::int32_t>(c))) {
        index[c] = static_cast<std::int32_t>(n++);
      }
    }
    std::vector<std::int32_t> action(n * cols_);
    for (std::size_t c = 0; c < parent_.size(); ++c) {
      if (index[c] < 0) continue;
      for (std::size_t col = 0; col < cols_; ++col) {
        std::int32_t d = table_[c * cols_ + col];
        COSETGAP_ASSERT(d != undefined && alive(d),
                        "incomplete table after enumeration");
        action[static_cast<std::size_t>(index[c]) * cols_ + col] =
            index[static_cast<std::size_t>(d)];
      }
    }
    return CosetTable(cols_ / 2, std::move(action),
                      static_cast<std::size_t>(index[static_cast<std::size_t>(rep(0))]));
  }
};

std::vector<std::int32_t> translate_from_base(const CosetTable& t,
                                              std::size_t target) {
  // The map fixing the labelled graph structure that sends 0 to target, or
  // an empty vector if none exists.
  const std::size_t n = t.size();
  const std::size_t k = t.num_generators();
  std::vector<std::int32_t> image(n, -1);
  image[0] = static_cast<std::int32_t>(target);
  std::vector<std::size_t> queue{0};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    std::size_t c = queue[i];
    auto mc = static_cast<std::size_t>(image[c]);
    for (std::size_t col = 0; col < 2 * k; ++col) {
      Letter x = column_letter(col);
      auto d = static_cast<std::size_t>(t.act(c, x));
      std::int32_t md = t.act(mc, x);
      if (image[d] < 0) {
        image[d] = md;
        queue.push_back(d);
      } else if (image[d] != md) {
        return {};
      }
    }
  }
  return image;
}

}  // namespace

CosetTable enumerate_cosets(const FinitePresentation& p, const SubgroupSpec& h,
                            std::size_t limit) {
  if (p.num_generators() == 0) {
    throw Error("presentation has no generators");
  }
  for (const auto& w : h.generators) {
    if (static_cast<std::size_t>(w.max_generator()) > p.num_generators()) {
      throw Error("subgroup word references an unknown generator",
                  ExitCode::parse);
    }
  }
  ToddCoxeter tc(p, h, limit);
  CosetTable t = tc.run();
  t.verify(p, &h);
  return t;
}

NormalizerIndices normalizer_indices(const CosetTable& t,
                                     const SubgroupSpec& h) {
  std::size_t count = 0;
  for (std::size_t c = 0; c < t.size(); ++c) {
    bool fixes = std::all_of(h.generators.begin(), h.generators.end(),
                             [&](const Word& w) {
                               return t.act(c, w) == static_cast<std::int32_t>(c);
                             });
    if (fixes) ++count;
  }
  COSETGAP_ASSERT(count >= 1 && t.size() % count == 0,
                  "normalizer count does not divide the index");
  return {t.size() / count, count};
}

NormalizerIndices normalizer_indices(const CosetTable& t) {
  SubgroupSpec h{schreier_generators(t), {}};
  return normalizer_indices(t, h);
}

std::vector<std::size_t> normalizing_cosets(const CosetTable& t) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < t.size(); ++c) {
    if (!translate_from_base(t, c).empty()) out.push_back(c);
  }
  return out;
}

CosetTable normalizer_table(const CosetTable& t) {
  const std::size_t n = t.size();
  const std::size_t k = t.num_generators();
  std::vector<std::size_t> orbit_root(n);
  std::iota(orbit_root.begin(), orbit_root.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (orbit_root[v] != v) {
      orbit_root[v] = orbit_root[orbit_root[v]];
      v = orbit_root[v];
    }
    return v;
  };
  for (std::size_t c : normalizing_cosets(t)) {
    auto image = translate_from_base(t, c);
    for (std::size_t v = 0; v < n; ++v) {
      std::size_t a = find(v);
      std::size_t b = find(static_cast<std::size_t>(image[v]));
      if (a != b) orbit_root[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::int32_t> orbit(n, -1);
  std::size_t m = 0;
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t r = find(v);
    if (orbit[r] < 0) orbit[r] = static_cast<std::int32_t>(m++);
    orbit[v] = orbit[r];
  }
  std::vector<std::int32_t> action(m * 2 * k, -1);
  for (std::size_t v = 0; v < n; ++v) {
    auto o = static_cast<std::size_t>(orbit[v]);
    for (std::size_t col = 0; col < 2 * k; ++col) {
      std::int32_t image =
          orbit[static_cast<std::size_t>(t.act(v, column_letter(col)))];
      std::int32_t& slot = action[o * 2 * k + col];
      COSETGAP_ASSERT(slot < 0 || slot == image,
                      "normalizer orbits are not blocks of the action");
      slot = image;
    }
  }
  return CosetTable(k, std::move(action), static_cast<std::size_t>(orbit[0]));
}

CosetTable intersect_subgroups(const CosetTable& t1, const CosetTable& t2) {
  if (t1.num_generators() != t2.num_generators()) {
    throw Error("tables over different presentations");
  }
  const std::size_t k = t1.num_generators();
  const std::size_t n2 = t2.size();
  std::unordered_map<std::size_t, std::int32_t> index;
  std::vector<std::pair<std::size_t, std::size_t>> pairs{{0, 0}};
  index[0] = 0;
  std::vector<std::int32_t> action;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [a, b] = pairs[i];
    for (std::size_t col = 0; col < 2 * k; ++col) {
      Letter x = column_letter(col);
      auto na = static_cast<std::size_t>(t1.act(a, x));
      auto nb = static_cast<std::size_t>(t2.act(b, x));
      std::size_t key = na * n2 + nb;
      auto [it, inserted] =
          index.try_emplace(key, static_cast<std::int32_t>(pairs.size()));
      if (inserted) pairs.emplace_back(na, nb);
      action.push_back(it->second);
    }
  }
  return CosetTable(k, std::move(action), 0);
}

std::vector<std::int32_t> covering_map(const CosetTable& fine,
                                       const CosetTable& coarse) {
  if (fine.num_generators() != coarse.num_generators()) {
    throw Error("tables over different presentations");
  }
  if (fine.size() % coarse.size() != 0) {
    throw Error("inputs do not form a covering pair");
  }
  const std::size_t k = fine.num_generators();
  std::vector<std::int32_t> image(fine.size(), -1);
  image[0] = 0;
  std::vector<std::size_t> queue{0};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    std::size_t c = queue[i];
    for (std::size_t col = 0; col < 2 * k; ++col) {
      Letter x = column_letter(col);
      auto d = static_cast<std::size_t>(fine.act(c, x));
      std::int32_t expected =
          coarse.act(static_cast<std::size_t>(image[c]), x);
      if (image[d] < 0) {
        image[d] = expected;
        queue.push_back(d);
      } else if (image[d] != expected) {
        throw Error("inputs do not form a covering pair");
      }
    }
  }
  return image;
}

std::vector<long> edge_values(const CosetTable& t, const SpanningTree& tree,
                              const std::vector<long>& per_generator) {
  auto edges = schreier_edges(t, tree);
  if (per_generator.size() != edges.size()) {
    throw InvalidPhiError("phi has " + std::to_string(per_generator.size()) +
                          " values but the subgroup has " +
                          std::to_string(edges.size()) +
                          " Schreier generators");
  }
  std::vector<long> out(t.size() * t.num_generators(), 0);
  for (std::size_t i = 0; i < edges.size(); ++i) out[edges[i]] = per_generator[i];
  return out;
}

long evaluate_along(const CosetTable& t, const std::vector<long>& edge_value,
                    const Word& w, std::size_t start) {
  const std::size_t k = t.num_generators();
  long sum = 0;
  std::size_t c = start;
  for (Letter x : w) {
    auto d = static_cast<std::size_t>(t.act(c, x));
    if (x > 0) {
      sum += edge_value[c * k + static_cast<std::size_t>(x - 1)];
    } else {
      sum -= edge_value[d * k + static_cast<std::size_t>(-x - 1)];
    }
    c = d;
  }
  return sum;
}

TowerLevel cyclic_tower(const FinitePresentation& p, const CosetTable& base,
                        const std::vector<long>& phi, long n) {
  if (n < 2) throw Error("tower modulus must be at least 2");
  if (p.num_generators() != base.num_generators()) {
    throw Error("table and presentation disagree on generator count");
  }
  auto tree = spanning_tree(base);
  auto value = edge_values(base, tree, phi);
  for (std::size_t c = 0; c < base.size(); ++c) {
    for (const auto& r : p.relators()) {
      if (evaluate_along(base, value, r, c) != 0) {
        throw InvalidPhiError("phi not a homomorphism: nonzero on a relator at coset " +
                              std::to_string(c));
      }
    }
  }
  long g = 0;
  long max_abs = 0;
  for (long v : phi) {
    g = std::gcd(g, v);
    max_abs = std::max(max_abs, std::labs(v));
  }
  if (g != 1) throw InvalidPhiError("phi is not surjective onto Z");

  const std::size_t m = base.size();
  const std::size_t k = base.num_generators();
  const auto un = static_cast<std::size_t>(n);
  auto mod = [n](long v) { return static_cast<std::size_t>(((v % n) + n) % n); };
  std::vector<std::int32_t> action(m * un * 2 * k);
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t lvl = 0; lvl < un; ++lvl) {
      std::size_t v = c * un + lvl;
      for (std::size_t s = 0; s < k; ++s) {
        auto d = static_cast<std::size_t>(base.act(c, static_cast<Letter>(s + 1)));
        long step = value[c * k + s];
        std::size_t w = d * un + mod(static_cast<long>(lvl) + step);
        action[v * 2 * k + 2 * s] = static_cast<std::int32_t>(w);
        action[w * 2 * k + 2 * s + 1] = static_cast<std::int32_t>(v);
      }
    }
  }
  TowerLevel level;
  std::vector<std::int32_t> order;
  level.table = CosetTable::standardized(k, action, 0, order);
  level.psi.resize(order.size());
  level.below.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto old = static_cast<std::size_t>(order[i]);
    level.below[i] = static_cast<std::int32_t>(old / un);
    level.psi[i] = static_cast<std::int32_t>(old % un);
  }
  level.max_phi = max_abs;
  level.modulus = n;
  return level;
}

}  // namespace cosetgap
