#include "gaugemc/toric.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "gaugemc/lattice.hpp"

namespace gaugemc::toric {

namespace {

Lattice torus(int L) { return Lattice(2, L); }

void check_same_size(const Chain& a, const Chain& b) {
  if (a.L != b.L) throw std::invalid_argument("chains live on different tori");
}

// Lexicographic order on the sorted link lists of two equal-weight chains:
// the chain containing the lowest differing link id comes first.
bool lex_less(std::uint32_t a, std::uint32_t b) {
  std::uint32_t diff = a ^ b;
  if (diff == 0) return false;
  return (a & (diff & -diff)) != 0;
}

}  // namespace

Chain empty_chain(int L) {
  if (L < 2) throw std::invalid_argument("torus size must be >= 2");
  Chain c;
  c.L = L;
  c.links.resize(2 * L * L);
  return c;
}

Chain chain_from_links(int L, const std::vector<int>& link_ids) {
  Chain c = empty_chain(L);
  for (int id : link_ids) {
    if (id < 0 || id >= c.n_links()) throw std::out_of_range("link id out of range");
    c.links.set(id, 1);
  }
  return c;
}

std::vector<int> chain_links(const Chain& chain) {
  std::vector<int> ids;
  for (int i = 0; i < chain.n_links(); ++i)
    if (chain.links.get(i)) ids.push_back(i);
  return ids;
}

Chain chain_sum(Chain a, const Chain& b) {
  check_same_size(a, b);
  a.links.xor_with(b.links);
  return a;
}

int chain_weight(const Chain& chain) { return chain.links.count(); }

Syndrome boundary(const Chain& chain) {
  Lattice lat = torus(chain.L);
  std::vector<std::uint8_t> odd(lat.n_sites(), 0);
  for (int l = 0; l < chain.n_links(); ++l) {
    if (!chain.links.get(l)) continue;
    int s = lat.link_site(l);
    odd[s] ^= 1;
    odd[lat.shift_site(s, lat.link_dir(l), 1)] ^= 1;
  }
  Syndrome out;
  for (int s = 0; s < lat.n_sites(); ++s)
    if (odd[s]) out.push_back(s);
  return out;
}

bool is_cycle(const Chain& chain) { return boundary(chain).empty(); }

int seam_crossing_parity(const Chain& chain, int axis, int offset) {
  if (axis < 0 || axis > 1) throw std::invalid_argument("seam axis must be 0 or 1");
  Lattice lat = torus(chain.L);
  offset = ((offset % chain.L) + chain.L) % chain.L;
  int parity = 0;
  for (int s = 0; s < lat.n_sites(); ++s)
    if (lat.site_coords(s)[axis] == offset)
      parity ^= chain.links.get(lat.link_id(s, axis));
  return parity;
}

HomologyClass homology_class(const Chain& cycle) {
  if (!is_cycle(cycle))
    throw std::invalid_argument("homology class is defined only for cycles");
  return {seam_crossing_parity(cycle, 0, 0), seam_crossing_parity(cycle, 1, 0)};
}

Chain sample_error_chain(int L, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("error probability must be in [0, 1]");
  Chain c = empty_chain(L);
  for (int l = 0; l < c.n_links(); ++l)
    if (rng.uniform() < p) c.links.set(l, 1);
  return c;
}

double chain_log_prob(const Chain& chain, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("chain_log_prob requires 0 < p < 1");
  int w = chain_weight(chain);
  return w * std::log(p) + (chain.n_links() - w) * std::log(1.0 - p);
}

bool correction_succeeds(const Chain& error, const Chain& correction) {
  check_same_size(error, correction);
  if (boundary(error) != boundary(correction))
    throw std::invalid_argument("correction does not match the error boundary");
  return homology_class(chain_sum(error, correction)).trivial();
}

namespace {

Syndrome normalize_syndrome(const Syndrome& syndrome, int n_sites) {
  Syndrome s = syndrome;
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end())
    throw std::invalid_argument("syndrome has repeated sites");
  if (!s.empty() && (s.front() < 0 || s.back() >= n_sites))
    throw std::out_of_range("syndrome site out of range");
  if (s.size() % 2 != 0)
    throw std::invalid_argument("syndrome must have even cardinality");
  return s;
}

int torus_distance(const Lattice& lat, int u, int v) {
  auto cu = lat.site_coords(u);
  auto cv = lat.site_coords(v);
  int d = 0;
  for (int axis = 0; axis < 2; ++axis) {
    int delta = std::abs(cu[axis] - cv[axis]);
    d += std::min(delta, lat.size() - delta);
  }
  return d;
}

// Deterministic L-shaped geodesic: walk axis 0 then axis 1, wrapping toward
// the shorter side (ties go in the positive direction).
void toggle_path(Chain& chain, const Lattice& lat, int u, int v) {
  auto cu = lat.site_coords(u);
  auto cv = lat.site_coords(v);
  int cur = u;
  for (int axis = 0; axis < 2; ++axis) {
    int L = lat.size();
    int forward = ((cv[axis] - cu[axis]) % L + L) % L;
    int steps = std::min(forward, L - forward);
    int dir = forward <= L - forward ? +1 : -1;
    for (int k = 0; k < steps; ++k) {
      int base = dir > 0 ? cur : lat.shift_site(cur, axis, -1);
      chain.links.flip(lat.link_id(base, axis));
      cur = lat.shift_site(cur, axis, dir);
    }
  }
}

Chain pairing_correction(const Syndrome& defects, int L) {
  Lattice lat = torus(L);
  Chain out = empty_chain(L);
  const int k = static_cast<int>(defects.size());
  if (k == 0) return out;

  std::vector<std::pair<int, int>> pairs;
  if (k <= 16) {
    // Exact minimum-weight pairing over all perfect matchings.
    std::vector<std::vector<int>> dist(k, std::vector<int>(k, 0));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) dist[i][j] = torus_distance(lat, defects[i], defects[j]);
    const int full = 1 << k;
    std::vector<int> dp(full, std::numeric_limits<int>::max());
    std::vector<std::pair<int, int>> choice(full, {-1, -1});
    dp[0] = 0;
    for (int mask = 1; mask < full; ++mask) {
      if (std::popcount(static_cast<unsigned>(mask)) % 2 != 0) continue;
      int i = std::countr_zero(static_cast<unsigned>(mask));
      for (int j = i + 1; j < k; ++j) {
        if (!(mask >> j & 1)) continue;
        int rest = mask ^ (1 << i) ^ (1 << j);
        if (dp[rest] == std::numeric_limits<int>::max()) continue;
        int cand = dp[rest] + dist[i][j];
        if (cand < dp[mask]) {
          dp[mask] = cand;
          choice[mask] = {i, j};
        }
      }
    }
    int mask = full - 1;
    while (mask) {
      auto [i, j] = choice[mask];
      pairs.emplace_back(i, j);
      mask ^= (1 << i) | (1 << j);
    }
  } else {
    // Greedy closest-pair fallback for dense syndromes.
    std::vector<int> remaining(k);
    for (int i = 0; i < k; ++i) remaining[i] = i;
    while (!remaining.empty()) {
      int bi = 0, bj = 1, bd = std::numeric_limits<int>::max();
      for (std::size_t a = 0; a < remaining.size(); ++a)
        for (std::size_t b = a + 1; b < remaining.size(); ++b) {
          int d = torus_distance(lat, defects[remaining[a]], defects[remaining[b]]);
          if (d < bd) {
            bd = d;
            bi = static_cast<int>(a);
            bj = static_cast<int>(b);
          }
        }
      pairs.emplace_back(remaining[bi], remaining[bj]);
      remaining.erase(remaining.begin() + bj);
      remaining.erase(remaining.begin() + bi);
    }
  }
  for (auto [i, j] : pairs) toggle_path(out, lat, defects[i], defects[j]);
  return out;
}

struct LinkTables {
  std::vector<std::uint32_t> site_toggle;  // link -> its two endpoint bits
  std::uint32_t seam0 = 0, seam1 = 0;      // link masks of the two seams
};

LinkTables build_link_tables(int L) {
  Lattice lat = torus(L);
  LinkTables t;
  t.site_toggle.resize(lat.n_links());
  for (int l = 0; l < lat.n_links(); ++l) {
    int s = lat.link_site(l);
    int dir = lat.link_dir(l);
    t.site_toggle[l] = (std::uint32_t{1} << s) |
                       (std::uint32_t{1} << lat.shift_site(s, dir, 1));
    if (lat.site_coords(s)[dir] == 0) {
      if (dir == 0)
        t.seam0 |= std::uint32_t{1} << l;
      else
        t.seam1 |= std::uint32_t{1} << l;
    }
  }
  return t;
}

}  // namespace

std::vector<std::uint32_t> exhaustive_decode_map(int L) {
  if (L > 3) throw std::invalid_argument("exhaustive decoding capped at L = 3");
  Lattice lat = torus(L);
  const int n_links = lat.n_links();
  const int n_sites = lat.n_sites();
  LinkTables tables = build_link_tables(L);

  std::vector<std::uint32_t> best(std::size_t{1} << n_sites,
                                  std::numeric_limits<std::uint32_t>::max());
  std::vector<std::uint8_t> best_weight(std::size_t{1} << n_sites, 255);

  std::uint32_t gray = 0, synd = 0;
  best[0] = 0;
  best_weight[0] = 0;
  const std::uint64_t total = std::uint64_t{1} << n_links;
  for (std::uint64_t i = 1; i < total; ++i) {
    int v = std::countr_zero(i);
    gray ^= std::uint32_t{1} << v;
    synd ^= tables.site_toggle[v];
    auto w = static_cast<std::uint8_t>(std::popcount(gray));
    if (w < best_weight[synd] ||
        (w == best_weight[synd] && lex_less(gray, best[synd]))) {
      best_weight[synd] = w;
      best[synd] = gray;
    }
  }
  return best;
}

Chain min_weight_correction(const Syndrome& syndrome, int L) {
  if (L < 2) throw std::invalid_argument("torus size must be >= 2");
  Lattice lat = torus(L);
  Syndrome s = normalize_syndrome(syndrome, lat.n_sites());
  if (L <= 3) {
    auto map = exhaustive_decode_map(L);
    std::uint32_t mask = 0;
    for (int site : s) mask |= std::uint32_t{1} << site;
    Chain out = empty_chain(L);
    std::uint32_t m = map[mask];
    for (int l = 0; l < lat.n_links(); ++l)
      if (m >> l & 1) out.links.set(l, 1);
    return out;
  }
  return pairing_correction(s, L);
}

Chain pairing_min_weight(const Syndrome& syndrome, int L) {
  if (L < 2) throw std::invalid_argument("torus size must be >= 2");
  Lattice lat = torus(L);
  return pairing_correction(normalize_syndrome(syndrome, lat.n_sites()), L);
}

double exact_success_probability(int L, double p) {
  if (L > 3) throw std::invalid_argument("exact success probability capped at L = 3");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("error probability must be in [0, 1]");
  Lattice lat = torus(L);
  const int n_links = lat.n_links();
  LinkTables tables = build_link_tables(L);
  auto decode = exhaustive_decode_map(L);

  std::vector<std::uint64_t> success(n_links + 1, 0);
  std::uint32_t gray = 0, synd = 0;
  auto tally = [&]() {
    std::uint32_t closed = gray ^ decode[synd];
    bool ok = (std::popcount(closed & tables.seam0) & 1) == 0 &&
              (std::popcount(closed & tables.seam1) & 1) == 0;
    if (ok) ++success[std::popcount(gray)];
  };
  tally();
  const std::uint64_t total = std::uint64_t{1} << n_links;
  for (std::uint64_t i = 1; i < total; ++i) {
    int v = std::countr_zero(i);
    gray ^= std::uint32_t{1} << v;
    synd ^= tables.site_toggle[v];
    tally();
  }

  double prob = 0.0;
  for (int w = 0; w <= n_links; ++w) {
    if (!success[w]) continue;
    prob += static_cast<double>(success[w]) * std::pow(p, w) *
            std::pow(1.0 - p, n_links - w);
  }
  return prob;
}

void write_chain(std::ostream& out, const Chain& chain) {
  for (int id : chain_links(chain)) out << id << '\n';
}

Chain read_chain(std::istream& in, int L) {
  std::vector<int> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ids.push_back(std::stoi(line));
  }
  return chain_from_links(L, ids);
}

}  // namespace gaugemc::toric
