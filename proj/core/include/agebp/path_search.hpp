#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "agebp/process.hpp"
#include "agebp/rng.hpp"

namespace agebp {

struct PathSearchResult {
  bool success = false;
  std::vector<double> path_partial_sums;  // cumulative lifetimes along the path
  std::optional<int> failure_generation;
  nlohmann::json to_json() const;
};

struct PathSearchOptions {
  bool throw_on_failure = false;   // raise TerminatedInFailure instead of returning
  double enumerate_limit = 1.0e4;  // option sets up to this size are drawn one by one
};

// Greedy search for a fast path through a forward incubation tree with
// heavy-tailed offspring. The root starts with D_0 >= f(0); at generation n the
// node needs D_n >= f(n) = m^{alpha^{-n/2}}, at least c f(n) children born after
// its incubation ends, and moves to the option with the smallest lifetime plus
// incubation among the W_n = c f(n)^{1 - sqrt(alpha)} / 2 alive children with
// the most offspring. c = (1 - G(delta)) / 2.
PathSearchResult exploding_path_search(const ForwardIncubation& spec, double delta, double m, int max_gen, Rng& rng,
                                       const PathSearchOptions& opts = {});

}  // namespace agebp
