#pragma once

#include <random>

#include "graph.hpp"

namespace expanders {

// d-regular multigraph from floor(d/2) random permutations (each adds
// P + P^T) plus, for odd d, a random involution whose fixed points become
// single loops. Loops and parallel edges are kept.
inline RegularMultigraph random_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw InvalidInput("random_regular needs n, d >= 1");
  std::mt19937_64 rng(seed);
  std::vector<Edge> es;
  std::vector<vid_t> p(n);
  for (std::size_t r = 0; r < d / 2; ++r) {
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    for (std::size_t i = 0; i < n; ++i) {
      if (p[i] == i) es.push_back({static_cast<vid_t>(i), static_cast<vid_t>(i), 2});
      else es.push_back({static_cast<vid_t>(i), p[i], 1});
    }
  }
  if (d % 2 == 1) {
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    for (std::size_t i = 0; i + 1 < n; i += 2) es.push_back({p[i], p[i + 1], 1});
    if (n % 2 == 1) es.push_back({p[n - 1], p[n - 1], 1});
  }
  return build_graph(n, es);
}

// Retries successive seeds until the sample is connected and not
// bipartite, so that its absolute spectral gap is positive.
inline RegularMultigraph random_expander(std::size_t n, std::size_t d, std::uint64_t seed,
                                         std::size_t max_tries = 1000) {
  for (std::size_t i = 0; i < max_tries; ++i) {
    RegularMultigraph g = random_regular(n, d, seed + i);
    if (is_connected(g) && !is_bipartite(g)) return g;
  }
  throw NotFound("no connected non-bipartite sample in " + std::to_string(max_tries) + " tries");
}

}  // namespace expanders
