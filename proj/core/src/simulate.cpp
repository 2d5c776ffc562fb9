#include "revclt/simulate.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace revclt {
namespace {

constexpr double kMaxHolding = 4.0e18;  // below int64 range

std::int64_t geometric_from_log(double log_u, double log_p) {
  // count of successes before failure when P[survive] = exp(log_p)
  if (log_p >= 0.0) throw std::domain_error("holding probability must be < 1");
  const double v = log_u / log_p;
  if (v >= kMaxHolding) return static_cast<std::int64_t>(kMaxHolding);
  return static_cast<std::int64_t>(std::floor(v));
}

}  // namespace

const char* to_string(SimMode m) {
  return m == SimMode::stepwise ? "stepwise" : "regenerative";
}

SimMode sim_mode_from_string(const std::string& s) {
  if (s == "stepwise") return SimMode::stepwise;
  if (s == "regenerative") return SimMode::regenerative;
  throw std::invalid_argument("unknown simulation mode: " + s);
}

double sample_pi(const ChainSpec& spec, RngStream& rng) {
  const double sign = rng.next_sign();
  switch (spec.variant()) {
    case ChainVariant::heavy_tail:
      return sign / rng.next_unit();
    case ChainVariant::stable_tail:
      return sign * std::pow(rng.next_unit(), -1.0 / (spec.alpha() - 1.0));
    case ChainVariant::constant_p:
      return sign;
  }
  return sign;
}

double sample_nu(const ChainSpec& spec, RngStream& rng, NuStats* stats) {
  if (spec.discrete()) return rng.next_sign();  // nu = uniform on {-1,+1}
  const double envelope = spec.one_minus_p_max();
  for (int tries = 0; tries < 200'000; ++tries) {
    const double w = sample_pi(spec, rng);
    const double accept = -std::expm1(spec.log_p(w)) / envelope;
    if (stats) ++stats->proposals;
    if (rng.next_unit() < accept) {
      if (stats) ++stats->accepts;
      return w;
    }
  }
  throw std::runtime_error(
      "sample_nu: acceptance rate below 1e-3, jump measure looks pathological");
}

std::int64_t sample_tau0(const ChainSpec& spec, double w0, RngStream& rng) {
  return geometric_from_log(std::log(rng.next_unit()), spec.log_p(w0));
}

std::int64_t sample_holding(const ChainSpec& spec, double w, RngStream& rng) {
  return 1 + geometric_from_log(std::log(rng.next_unit()), spec.log_p(w));
}

RegenBlock sample_block(const ChainSpec& spec, RngStream& rng, NuStats* stats) {
  const double w = sample_nu(spec, rng, stats);
  return {sample_holding(spec, w, rng), w};
}

BlockPath simulate_block_path(const ChainSpec& spec, std::int64_t n,
                              RngStream& rng) {
  if (n < 1) throw std::invalid_argument("simulate_block_path: n >= 1");
  BlockPath path;
  path.n = n;
  path.w0 = sample_pi(spec, rng);
  path.tau0 = sample_tau0(spec, path.w0, rng);
  std::int64_t covered = std::min(path.tau0, n);
  while (covered < n) {
    RegenBlock b = sample_block(spec, rng);
    covered += b.delta_tau;  // overshoot kept; consumers clip
    path.blocks.push_back(b);
  }
  return path;
}

double assemble_sn(const ChainSpec& spec, const BlockPath& path) {
  const std::int64_t n = path.n;
  double s = static_cast<double>(std::min(path.tau0, n)) * spec.g(path.w0);
  std::int64_t t = std::min(path.tau0, n);
  for (const auto& b : path.blocks) {
    if (t >= n) break;
    const std::int64_t len = std::min(b.delta_tau, n - t);
    s += static_cast<double>(len) * spec.g(b.w);
    t += len;
  }
  return s;
}

PathResult simulate_Sn(const ChainSpec& spec, std::int64_t n, SimMode mode,
                       RngStream& rng) {
  if (n < 1) throw std::invalid_argument("simulate_Sn: n >= 1");
  if (n > (std::int64_t{1} << 40))
    throw std::invalid_argument("simulate_Sn: horizon beyond 2^40");
  PathResult out;
  out.n = n;
  out.mode = mode;
  if (mode == SimMode::regenerative) {
    BlockPath path = simulate_block_path(spec, n, rng);
    out.w0 = path.w0;
    out.tau0 = path.tau0;
    out.s_n = assemble_sn(spec, path);
    return out;
  }
  double w = sample_pi(spec, rng);
  out.w0 = w;
  double s = 0.0;
  bool still_initial = true;
  std::int64_t tau0 = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    if (std::log(rng.next_unit()) >= spec.log_p(w)) {
      // hold
      if (still_initial) ++tau0;
    } else {
      w = sample_nu(spec, rng);
      still_initial = false;
    }
    s += spec.g(w);
  }
  out.tau0 = still_initial ? n : tau0;  // censored at the horizon when no jump
  out.s_n = s;
  return out;
}

double simulate_Tm(const ChainSpec& spec, std::int64_t m, RngStream& rng) {
  if (m < 1) throw std::invalid_argument("simulate_Tm: m >= 1");
  double t = 0.0;
  for (std::int64_t j = 0; j < m; ++j) {
    const RegenBlock b = sample_block(spec, rng);
    t += static_cast<double>(b.delta_tau) * spec.g(b.w);
  }
  return t;
}

std::vector<double> expand_states(const BlockPath& path) {
  std::vector<double> w(static_cast<std::size_t>(path.n) + 1);
  std::int64_t i = 0;
  const std::int64_t head = std::min(path.tau0, path.n);
  for (; i <= head; ++i) w[static_cast<std::size_t>(i)] = path.w0;
  for (const auto& b : path.blocks) {
    for (std::int64_t k = 0; k < b.delta_tau && i <= path.n; ++k, ++i)
      w[static_cast<std::size_t>(i)] = b.w;
  }
  if (i != path.n + 1)
    throw std::logic_error("expand_states: block path does not cover the horizon");
  return w;
}

void run_replicates(std::uint64_t seed, std::uint64_t purpose, std::int64_t reps,
                    int threads,
                    const std::function<void(std::int64_t, RngStream&)>& body) {
  if (threads <= 0) threads = default_thread_count();
  threads = static_cast<int>(std::min<std::int64_t>(threads, std::max<std::int64_t>(reps, 1)));
  std::atomic<std::int64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::int64_t r = next.fetch_add(1);
      if (r >= reps) return;
      RngStream rng(seed, replicate_stream(purpose, static_cast<std::uint64_t>(r)));
      body(r, rng);
    }
  };
  if (threads == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

int default_thread_count() {
  if (const char* env = std::getenv("REVCLT_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

}  // namespace revclt
