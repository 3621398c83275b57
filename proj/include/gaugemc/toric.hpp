#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gaugemc/packed_bits.hpp"
#include "gaugemc/rng.hpp"

namespace gaugemc::toric {

// Z2 chain on the links of a 2D L x L torus. Link ids follow the lattice
// module convention (dir * L^2 + site). Chains form an abelian group under
// symmetric difference.
struct Chain {
  int L = 0;
  PackedBits links;

  int n_links() const { return 2 * L * L; }
  bool operator==(const Chain&) const = default;
};

Chain empty_chain(int L);
Chain chain_from_links(int L, const std::vector<int>& link_ids);
std::vector<int> chain_links(const Chain& chain);  // sorted ids
Chain chain_sum(Chain a, const Chain& b);          // symmetric difference
int chain_weight(const Chain& chain);

// Sites with an odd number of incident chain links; always even in number.
using Syndrome = std::vector<std::int32_t>;

Syndrome boundary(const Chain& chain);
bool is_cycle(const Chain& chain);

struct HomologyClass {
  int w1 = 0;  // winding parity around axis 0
  int w2 = 0;  // winding parity around axis 1
  bool trivial() const { return w1 == 0 && w2 == 0; }
  bool operator==(const HomologyClass&) const = default;
};

// Parity of crossings of a transverse seam: links in direction `axis` whose
// coordinate along that axis equals `offset`. Any offset gives the same
// parity for a cycle.
int seam_crossing_parity(const Chain& chain, int axis, int offset);

// Winding parities with both seams at coordinate 0. Throws on non-cycles.
HomologyClass homology_class(const Chain& cycle);

// Each link joins the chain independently with probability p.
Chain sample_error_chain(int L, double p, Rng& rng);

// sum over links of n*ln(p) + (1-n)*ln(1-p); p in (0,1).
double chain_log_prob(const Chain& chain, double p);

// True iff error + correction is a homologically trivial cycle. Requires
// equal boundaries.
bool correction_succeeds(const Chain& error, const Chain& correction);

// Minimum-weight chain with the given boundary. L <= 3 uses exhaustive
// search over all chains with lexicographic tie-breaking (lowest link id
// decides); larger lattices use the pairing decoder below.
Chain min_weight_correction(const Syndrome& syndrome, int L);

// Pairs the defects by torus geodesic distance (exact subset-DP pairing up
// to 16 defects, greedy closest-pair beyond) and realizes each pair with a
// deterministic L-shaped path. Reaches the true minimum weight whenever the
// pairing is exact.
Chain pairing_min_weight(const Syndrome& syndrome, int L);

// Decoded chain for every syndrome of the L <= 3 torus, indexed by the
// site-parity bitmask. One Gray-code pass over all 2^(2L^2) chains.
std::vector<std::uint32_t> exhaustive_decode_map(int L);

// Probability that min-weight correction of the boundary syndrome restores
// the trivial class, summed exactly over all error chains. L <= 3.
double exact_success_probability(int L, double p);

// Text fixture format: one sorted link id per line.
void write_chain(std::ostream& out, const Chain& chain);
Chain read_chain(std::istream& in, int L);

}  // namespace gaugemc::toric
