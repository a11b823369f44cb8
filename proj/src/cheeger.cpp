#include "cosetgap/cheeger.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <thread>

#include "cosetgap/error.hpp"

namespace cosetgap {
namespace {

// Undirected non-loop adjacency with multiplicities.
std::vector<std::vector<std::pair<std::size_t, int>>> adjacency(const LabeledMultigraph& g) {
  std::vector<std::map<std::size_t, int>> m(g.num_vertices());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    std::size_t a = g.source(e);
    std::size_t b = g.target(e);
    if (a == b) continue;
    ++m[a][b];
    ++m[b][a];
  }
  std::vector<std::vector<std::pair<std::size_t, int>>> out(g.num_vertices());
  for (std::size_t v = 0; v < m.size(); ++v) out[v].assign(m[v].begin(), m[v].end());
  return out;
}

std::vector<std::size_t> mask_to_vertices(std::uint64_t mask) {
  std::vector<std::size_t> out;
  while (mask != 0) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

// Candidate ordering: ratio, then size, then lexicographic order of the
// sorted vertex list. For equal sizes X precedes Y exactly when the lowest
// element of the symmetric difference lies in X.
struct Candidate {
  std::uint64_t boundary = 1;
  std::uint64_t size = 0;  // 0 marks "none yet"
  std::uint64_t mask = 0;

  bool better_than(const Candidate& o) const {
    if (o.size == 0) return true;
    std::uint64_t l = boundary * o.size;
    std::uint64_t r = o.boundary * size;
    if (l != r) return l < r;
    if (size != o.size) return size < o.size;
    std::uint64_t diff = mask ^ o.mask;
    return diff != 0 && (mask & (diff & (~diff + 1))) != 0;
  }
  bool same_ratio(const Candidate& o) const {
    return boundary * o.size == o.boundary * size;
  }
};

struct ChunkResult {
  Candidate best;
  std::vector<std::uint64_t> minimizers;  // small sides attaining best ratio
};

class Enumerator {
 public:
  Enumerator(const LabeledMultigraph& g, bool collect)
      : n_(g.num_vertices()), collect_(collect) {
    auto adj = adjacency(g);
    full_ = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
    layers_.assign(n_, {});
    degree_.assign(n_, 0);
    for (std::size_t v = 0; v < n_; ++v) {
      for (auto [u, mult] : adj[v]) {
        degree_[v] += mult;
        for (int j = 0; j < mult; ++j) {
          if (layers_[v].size() <= static_cast<std::size_t>(j)) layers_[v].push_back(0);
          layers_[v][static_cast<std::size_t>(j)] |= std::uint64_t{1} << u;
        }
      }
    }
  }

  int inside(std::size_t v, std::uint64_t set) const {
    int c = 0;
    for (auto layer : layers_[v]) c += std::popcount(layer & set);
    return c;
  }

  std::int64_t boundary_of(std::uint64_t set) const {
    std::int64_t b = 0;
    for (std::size_t v = 0; v < n_; ++v) {
      if ((set >> v & 1) != 0) b += degree_[v] - inside(v, set);
    }
    return b;
  }

  // Sets containing vertex 0 whose bits above `low_bits` equal `high`.
  ChunkResult run_chunk(std::size_t low_bits, std::uint64_t high) const {
    ChunkResult res;
    std::uint64_t set = 1 | high;
    std::int64_t b = boundary_of(set);
    std::uint64_t count = static_cast<std::uint64_t>(std::popcount(set));
    auto consider = [&] {
      if (count == n_) return;
      Candidate c;
      c.boundary = static_cast<std::uint64_t>(b);
      bool small_is_set = 2 * count <= n_;
      c.size = small_is_set ? count : n_ - count;
      c.mask = small_is_set ? set : (full_ & ~set);
      if (collect_) {
        if (res.best.size == 0 || !c.same_ratio(res.best)) {
          if (c.better_than(res.best)) res.minimizers.clear();
          else return;
        }
        res.minimizers.push_back(c.mask);
        if (2 * count == n_) res.minimizers.push_back(full_ & ~set);
      }
      if (c.better_than(res.best)) res.best = c;
    };
    consider();
    const std::uint64_t steps = std::uint64_t{1} << low_bits;
    for (std::uint64_t i = 1; i < steps; ++i) {
      std::size_t v = static_cast<std::size_t>(std::countr_zero(i)) + 1;
      std::uint64_t bit = std::uint64_t{1} << v;
      int in = inside(v, set);
      if ((set & bit) == 0) {
        b += degree_[v] - 2 * in;
        set |= bit;
        ++count;
      } else {
        b += 2 * in - degree_[v];
        set &= ~bit;
        --count;
      }
      consider();
    }
    return res;
  }

 private:
  std::size_t n_;
  bool collect_;
  std::uint64_t full_ = 0;
  std::vector<std::vector<std::uint64_t>> layers_;
  std::vector<int> degree_;
};

CheegerResult enumerate(const LabeledMultigraph& g, const CheegerOptions& opt) {
  const std::size_t n = g.num_vertices();
  Enumerator en(g, opt.all_minimizers);
  const std::size_t free_bits = n - 1;
  std::size_t high_bits = 0;
  unsigned threads = std::max(1u, opt.threads);
  while (high_bits < free_bits && high_bits < 8 &&
         (std::size_t{1} << high_bits) < 4 * static_cast<std::size_t>(threads) &&
         free_bits - high_bits > 12) {
    ++high_bits;
  }
  const std::size_t low_bits = free_bits - high_bits;
  const std::size_t chunks = std::size_t{1} << high_bits;
  std::vector<ChunkResult> results(chunks);
  auto work = [&](unsigned id) {
    for (std::size_t c = id; c < chunks; c += threads) {
      results[c] = en.run_chunk(low_bits, static_cast<std::uint64_t>(c) << (low_bits + 1));
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned id = 0; id < threads; ++id) pool.emplace_back(work, id);
    for (auto& t : pool) t.join();
  }
  Candidate best;
  for (const auto& r : results) {
    if (r.best.size != 0 && r.best.better_than(best)) best = r.best;
  }
  CheegerResult out;
  out.method = "enumeration";
  out.witness = make_cut(g, mask_to_vertices(best.mask));
  out.h = out.witness.ratio;
  if (opt.all_minimizers) {
    std::vector<std::uint64_t> all;
    for (const auto& r : results) {
      if (r.best.size != 0 && r.best.same_ratio(best)) {
        all.insert(all.end(), r.minimizers.begin(), r.minimizers.end());
      }
    }
    std::sort(all.begin(), all.end(), [](std::uint64_t a, std::uint64_t b) {
      Candidate ca{0, static_cast<std::uint64_t>(std::popcount(a)), a};
      Candidate cb{0, static_cast<std::uint64_t>(std::popcount(b)), b};
      if (ca.size != cb.size) return ca.size < cb.size;
      return a != b && ca.better_than(cb);
    });
    all.erase(std::unique(all.begin(), all.end()), all.end());
    std::vector<std::vector<std::size_t>> sets;
    for (auto m : all) sets.push_back(mask_to_vertices(m));
    out.minimizers = std::move(sets);
  }
  return out;
}

// Path decomposition search: vertices are introduced in a fixed order and the
// state is the side of every vertex that still has an unintroduced
// neighbour, together with |A| (capped at |V|/2). The result is the least
// boundary for each cardinality.
class Frontier {
 public:
  explicit Frontier(const LabeledMultigraph& g)
      : n_(g.num_vertices()), adj_(adjacency(g)) {
    order_ = best_order();
    pos_.assign(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) pos_[order_[i]] = i;
    last_.assign(n_, 0);
    for (std::size_t v = 0; v < n_; ++v) {
      last_[v] = pos_[v];
      for (auto [u, m] : adj_[v]) last_[v] = std::max(last_[v], pos_[u]);
    }
    width_ = width_of(order_);
  }

  std::size_t width() const { return width_; }

  // min_boundary[k] for 0 <= k <= n/2 under forced sides (-1 free).
  std::vector<std::int64_t> run(const std::vector<int>& forced) const {
    constexpr std::int64_t inf = INT64_MAX / 4;
    const std::size_t kmax = n_ / 2;
    const std::size_t stride = kmax + 1;
    std::vector<std::int64_t> dp(stride, inf);
    dp[0] = 0;
    std::size_t states = 1;
    std::vector<std::int64_t> slot_of(n_, -1);
    std::vector<bool> slot_used;
    for (std::size_t i = 0; i < n_; ++i) {
      std::size_t v = order_[i];
      std::size_t slot = 0;
      while (slot < slot_used.size() && slot_used[slot]) ++slot;
      if (slot == slot_used.size()) {
        slot_used.push_back(false);
        std::vector<std::int64_t> grown(2 * states * stride, inf);
        std::copy(dp.begin(), dp.end(), grown.begin());
        dp.swap(grown);
        states *= 2;
      }
      slot_used[slot] = true;
      slot_of[v] = static_cast<std::int64_t>(slot);
      std::vector<std::pair<std::size_t, int>> earlier;
      for (auto [u, m] : adj_[v]) {
        if (pos_[u] < i) earlier.push_back({static_cast<std::size_t>(slot_of[u]), m});
      }
      std::vector<std::int64_t> next(states * stride, inf);
      const std::size_t vbit = std::size_t{1} << slot;
      for (std::size_t mask = 0; mask < states; ++mask) {
        if ((mask & vbit) != 0) continue;
        const std::int64_t* row = &dp[mask * stride];
        for (int side = 0; side < 2; ++side) {
          if (forced[v] >= 0 && forced[v] != side) continue;
          std::int64_t cross = 0;
          for (auto [s, m] : earlier) {
            if (static_cast<int>((mask >> s) & 1) != side) cross += m;
          }
          std::size_t target = side != 0 ? (mask | vbit) : mask;
          std::int64_t* out = &next[target * stride];
          for (std::size_t k = 0; k + static_cast<std::size_t>(side) <= kmax; ++k) {
            if (row[k] >= inf) continue;
            std::int64_t val = row[k] + cross;
            std::int64_t& cell = out[k + static_cast<std::size_t>(side)];
            cell = std::min(cell, val);
          }
        }
      }
      dp.swap(next);
      // retire vertices whose neighbourhoods are complete
      for (std::size_t u = 0; u < n_; ++u) {
        if (slot_of[u] < 0 || last_[u] != i) continue;
        auto s = static_cast<std::size_t>(slot_of[u]);
        const std::size_t bit = std::size_t{1} << s;
        for (std::size_t mask = 0; mask < states; ++mask) {
          if ((mask & bit) == 0) continue;
          std::int64_t* from = &dp[mask * stride];
          std::int64_t* to = &dp[(mask & ~bit) * stride];
          for (std::size_t k = 0; k < stride; ++k) {
            to[k] = std::min(to[k], from[k]);
            from[k] = inf;
          }
        }
        slot_used[s] = false;
        slot_of[u] = -1;
      }
    }
    std::vector<std::int64_t> best(stride, inf);
    for (std::size_t mask = 0; mask < states; ++mask) {
      for (std::size_t k = 0; k < stride; ++k) best[k] = std::min(best[k], dp[mask * stride + k]);
    }
    return best;
  }

 private:
  std::size_t width_of(const std::vector<std::size_t>& order) const {
    std::vector<std::size_t> pos(n_);
    for (std::size_t i = 0; i < n_; ++i) pos[order[i]] = i;
    std::vector<int> delta(n_ + 1, 0);
    for (std::size_t v = 0; v < n_; ++v) {
      std::size_t last = pos[v];
      for (auto [u, m] : adj_[v]) last = std::max(last, pos[u]);
      // live from pos[v] through last inclusive (while being introduced)
      ++delta[pos[v]];
      --delta[last + 1];
    }
    std::size_t w = 0;
    int live = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      live += delta[i];
      w = std::max(w, static_cast<std::size_t>(live));
    }
    return w;
  }

  std::vector<std::size_t> bfs_order(std::size_t start) const {
    std::vector<std::size_t> order{start};
    std::vector<bool> seen(n_, false);
    seen[start] = true;
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (auto [u, m] : adj_[order[i]]) {
        if (!seen[u]) {
          seen[u] = true;
          order.push_back(u);
        }
      }
    }
    return order;
  }

  std::vector<std::size_t> best_order() const {
    std::vector<std::size_t> natural(n_);
    std::iota(natural.begin(), natural.end(), std::size_t{0});
    std::vector<std::size_t> best = natural;
    std::size_t best_w = width_of(natural);
    auto bfs = bfs_order(0);
    if (width_of(bfs) < best_w) {
      best_w = width_of(bfs);
      best = bfs;
    }
    // a far vertex as the start of a second sweep (Cuthill-McKee style)
    auto second = bfs_order(bfs.back());
    if (width_of(second) < best_w) best = second;
    return best;
  }

  std::size_t n_;
  std::vector<std::vector<std::pair<std::size_t, int>>> adj_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> pos_;
  std::vector<std::size_t> last_;
  std::size_t width_ = 0;
};

CheegerResult frontier_search(const LabeledMultigraph& g, const Frontier& fr) {
  const std::size_t n = g.num_vertices();
  std::vector<int> forced(n, -1);
  auto best = fr.run(forced);
  std::size_t k_star = 0;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    if (k_star == 0 || Rational(best[k], static_cast<std::int64_t>(k)) <
                           Rational(best[k_star], static_cast<std::int64_t>(k_star))) {
      k_star = k;
    }
  }
  const std::int64_t b_star = best[k_star];
  std::size_t chosen = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (chosen == k_star) {
      forced[v] = 0;
      continue;
    }
    forced[v] = 1;
    if (fr.run(forced)[k_star] == b_star) {
      ++chosen;
    } else {
      forced[v] = 0;
    }
  }
  std::vector<std::size_t> a;
  for (std::size_t v = 0; v < n; ++v) {
    if (forced[v] == 1) a.push_back(v);
  }
  CheegerResult out;
  out.method = "frontier";
  out.witness = make_cut(g, std::move(a));
  COSETGAP_ASSERT(out.witness.boundary == static_cast<std::size_t>(b_star),
                  "frontier reconstruction lost the optimum");
  out.h = out.witness.ratio;
  return out;
}

}  // namespace

std::size_t boundary_count(const LabeledMultigraph& g,
                           const std::vector<std::size_t>& vertices) {
  std::vector<bool> in(g.num_vertices(), false);
  std::size_t count = 0;
  for (auto v : vertices) {
    if (v >= g.num_vertices()) throw Error("vertex out of range");
    if (!in[v]) ++count;
    in[v] = true;
  }
  if (count == 0 || count == g.num_vertices()) {
    throw Error("cut set must be proper and nonempty");
  }
  std::size_t b = 0;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (in[g.source(e)] != in[g.target(e)]) ++b;
  }
  return b;
}

CutWitness make_cut(const LabeledMultigraph& g, std::vector<std::size_t> vertices) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  CutWitness w;
  w.boundary = boundary_count(g, vertices);
  std::size_t small = std::min(vertices.size(), g.num_vertices() - vertices.size());
  w.ratio = Rational(static_cast<std::int64_t>(w.boundary), static_cast<std::int64_t>(small));
  w.vertices = std::move(vertices);
  return w;
}

std::size_t frontier_width(const LabeledMultigraph& g) { return Frontier(g).width(); }

CheegerResult cheeger_exact(const LabeledMultigraph& g, const CheegerOptions& options) {
  const std::size_t n = g.num_vertices();
  if (n < 2) throw Error("h is undefined on a single vertex graph");
  if (n > 64 && options.all_minimizers) {
    throw TooLargeError("minimizer enumeration needs at most 64 vertices");
  }
  bool enumerable = n <= options.exhaustive_ceiling && n <= 63;
  if (options.all_minimizers || (enumerable && n <= options.small_graph) ||
      (enumerable && !options.allow_frontier)) {
    if (!enumerable) {
      throw TooLargeError("graph has " + std::to_string(n) +
                          " vertices, above the exhaustive search ceiling");
    }
    return enumerate(g, options);
  }
  if (options.allow_frontier) {
    Frontier fr(g);
    std::size_t states = std::size_t{1} << std::min<std::size_t>(fr.width(), 40);
    if (fr.width() <= options.frontier_width_cap && states * (n / 2 + 1) <= (std::size_t{1} << 25)) {
      return frontier_search(g, fr);
    }
  }
  if (enumerable) return enumerate(g, options);
  throw TooLargeError("graph has " + std::to_string(n) +
                      " vertices, above the exhaustive search ceiling");
}

CheegerBounds cheeger_bounds(const LabeledMultigraph& g, double lambda1,
                             const std::vector<double>* ordering_values) {
  const std::size_t n = g.num_vertices();
  CheegerBounds out;
  out.lower = Rational(2, static_cast<std::int64_t>(n));
  out.spectral_upper = std::sqrt(4.0 * static_cast<double>(g.num_labels()) * lambda1);
  out.upper = out.spectral_upper;
  if (ordering_values != nullptr && ordering_values->size() == n && n >= 2) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return (*ordering_values)[a] < (*ordering_values)[b];
    });
    auto adj = adjacency(g);
    std::vector<bool> in(n, false);
    std::int64_t b = 0;
    std::optional<std::pair<Rational, std::size_t>> best;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      std::size_t v = idx[i];
      for (auto [u, m] : adj[v]) b += in[u] ? -m : m;
      in[v] = true;
      std::size_t small = std::min(i + 1, n - i - 1);
      Rational r(b, static_cast<std::int64_t>(small));
      if (!best || r < best->first) best = {{r, i + 1}};
    }
    std::vector<std::size_t> prefix(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(best->second));
    if (2 * prefix.size() > n) {
      std::vector<bool> mark(n, false);
      for (auto v : prefix) mark[v] = true;
      prefix.clear();
      for (std::size_t v = 0; v < n; ++v) {
        if (!mark[v]) prefix.push_back(v);
      }
    }
    out.best_cut = make_cut(g, std::move(prefix));
    out.upper = std::min(out.upper, out.best_cut->ratio.to_double());
  }
  return out;
}

}  // namespace cosetgap
