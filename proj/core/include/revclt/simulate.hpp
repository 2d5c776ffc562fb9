#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "revclt/chain.hpp"
#include "revclt/rng.hpp"

namespace revclt {

enum class SimMode { stepwise, regenerative };

const char* to_string(SimMode m);
SimMode sim_mode_from_string(const std::string& s);

// One regeneration pair: the jump target w ~ nu and the geometric holding
// time delta_tau >= 1 with P[dtau >= k | w] = p(w)^(k-1).
struct RegenBlock {
  std::int64_t delta_tau;
  double w;
};

struct PathResult {
  double s_n = 0.0;
  double w0 = 0.0;
  std::int64_t tau0 = 0;
  std::int64_t n = 0;
  SimMode mode = SimMode::regenerative;
};

// Compressed regenerative path: W_0 held through tau0, then blocks covering
// the horizon (the last block may overshoot; lengths are unclipped).
struct BlockPath {
  double w0 = 0.0;
  std::int64_t tau0 = 0;
  std::vector<RegenBlock> blocks;
  std::int64_t n = 0;
};

struct NuStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepts = 0;
  double rate() const {
    return proposals ? static_cast<double>(accepts) / static_cast<double>(proposals) : 0.0;
  }
};

double sample_pi(const ChainSpec& spec, RngStream& rng);
// rejection from the stationary proposal with envelope sup(1-p)
double sample_nu(const ChainSpec& spec, RngStream& rng, NuStats* stats = nullptr);
// geometric on {0,1,...} with P[tau0 >= k] = p(w0)^k
std::int64_t sample_tau0(const ChainSpec& spec, double w0, RngStream& rng);
// geometric holding time on {1,2,...} given the block state
std::int64_t sample_holding(const ChainSpec& spec, double w, RngStream& rng);
RegenBlock sample_block(const ChainSpec& spec, RngStream& rng, NuStats* stats = nullptr);

BlockPath simulate_block_path(const ChainSpec& spec, std::int64_t n, RngStream& rng);
// S_n assembled from a block path with the final block clipped at the horizon
double assemble_sn(const ChainSpec& spec, const BlockPath& path);

PathResult simulate_Sn(const ChainSpec& spec, std::int64_t n, SimMode mode,
                       RngStream& rng);
// sum of m i.i.d. block variables Y = delta_tau * g(w)
double simulate_Tm(const ChainSpec& spec, std::int64_t m, RngStream& rng);

// expands a block path to the explicit state sequence W_0..W_n
std::vector<double> expand_states(const BlockPath& path);

// Deterministic parallel replicate runner: body(r, rng) runs with the stream
// keyed by (seed, replicate_stream(purpose, r)); results must be written to
// per-replicate slots so thread scheduling cannot matter.
void run_replicates(std::uint64_t seed, std::uint64_t purpose, std::int64_t reps,
                    int threads,
                    const std::function<void(std::int64_t, RngStream&)>& body);

// REVCLT_THREADS, else hardware concurrency
int default_thread_count();

}  // namespace revclt
