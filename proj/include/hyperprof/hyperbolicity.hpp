#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "hyperprof/metric.hpp"

namespace hyperprof {

struct HyperbolicityOptions {
  bool all_basepoints = true;
  bool slim = false;
  bool naive_oracle = false;
  std::size_t naive_cap = kDefaultNaiveCap;
  std::size_t slim_cap = kDefaultSlimCap;
  unsigned threads = 1;
};

struct HyperbolicityReport {
  TripleWitness base;                       // basepoint = identity (vertex 0)
  std::optional<QuadrupleWitness> all;
  std::optional<SlimWitness> slim;          // all-geodesics variant
  std::optional<QuadrupleWitness> naive;
  std::size_t core_size = 0;
  double elapsed_ms = 0;

  bool naive_agrees() const { return !naive || (all && naive->delta == all->delta && naive->wxyz == all->wxyz); }

  std::string method() const {
    std::string m = "four-point max-min product";
    if (all) m += ", all core basepoints";
    if (slim) m += ", slim (all-geodesics variant)";
    if (naive) m += ", naive quadruple oracle";
    return m;
  }
};

inline HyperbolicityReport compute_hyperbolicity(DistanceMatrix const& d, HyperbolicityOptions const& opts = {}) {
  auto start = std::chrono::steady_clock::now();
  HyperbolicityReport rep;
  rep.core_size = d.core().size();
  rep.base = delta_base(d, 0);
  if (opts.all_basepoints || opts.naive_oracle) rep.all = delta_all(d, opts.threads);
  if (opts.slim) rep.slim = delta_slim(d, opts.slim_cap, opts.threads);
  if (opts.naive_oracle) rep.naive = naive_delta_all(d, opts.naive_cap);
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace hyperprof
