#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "quanuml/bundled.hpp"
#include "quanuml/parser.hpp"
#include "quanuml/lowering.hpp"
#include "quanuml/simulator.hpp"

namespace quml {

enum class OrderBackend { SimulatedCircuit, ClassicalOracle };

enum class FactorStatus { Factored, TrivialEven, PerfectPower, GcdShortcut, Failed };

/// One order-finding step: which base was tried, the measured phase numerator
/// (-1 on the classical path), the candidate order, and whether it verified.
struct TranscriptEntry {
  uint64_t x = 0;
  long long measuredPhaseNumerator = -1;
  uint64_t candidateOrder = 0;
  bool accepted = false;
  std::string note;
};

struct FactorResult {
  FactorStatus status = FactorStatus::Failed;
  uint64_t p = 0;  // Factored: smaller factor; PerfectPower: the base a; GcdShortcut: the gcd
  uint64_t q = 0;  // Factored: cofactor; PerfectPower: the exponent b
  uint64_t usedBase = 0;  // the x that produced the result, when one was tried
  uint64_t order = 0;     // the recovered order, when status == Factored
  int attempts = 0;
  std::vector<TranscriptEntry> transcript;
};

namespace detail {

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

}  // namespace detail

inline uint64_t powmod(uint64_t base, uint64_t exp, uint64_t mod) {
  uint64_t result = 1 % mod;
  base %= mod;
  while (exp > 0) {
    if (exp & 1) result = detail::mulmod(result, base, mod);
    base = detail::mulmod(base, base, mod);
    exp >>= 1;
  }
  return result;
}

/// Smallest b >= 2 with an integer a such that a^b = N, if any.
inline std::optional<std::pair<uint64_t, uint64_t>> perfect_power(uint64_t N) {
  if (N < 4) return std::nullopt;
  for (uint64_t b = 2; (uint64_t(1) << b) <= N; ++b) {
    uint64_t a = static_cast<uint64_t>(std::llround(std::pow(double(N), 1.0 / double(b))));
    for (uint64_t cand = a > 2 ? a - 2 : 1; cand <= a + 2; ++cand) {
      if (cand < 2) continue;
      uint64_t v = 1;
      bool overflow = false;
      for (uint64_t i = 0; i < b; ++i) {
        if (v > N / cand) {
          overflow = true;
          break;
        }
        v *= cand;
      }
      if (!overflow && v == N) return std::make_pair(cand, b);
    }
  }
  return std::nullopt;
}

/// Largest continued-fraction convergent denominator of num/den below N.
/// A zero numerator yields candidate 1, which callers reject.
inline uint64_t continued_fraction_order(uint64_t phaseNumerator, uint64_t phaseDenominator,
                                         uint64_t N) {
  uint64_t n = phaseNumerator, d = phaseDenominator;
  uint64_t k1 = 1, k2 = 0;  // convergent denominators k_{n-2}, k_{n-1}
  uint64_t best = 1;
  while (d != 0) {
    uint64_t a = n / d;
    uint64_t r = n % d;
    uint64_t k = a * k2 + k1;
    k1 = k2;
    k2 = k;
    if (k >= 1 && k < N) best = std::max(best, k);
    n = d;
    d = r;
  }
  return best;
}

namespace detail {

constexpr int kCountingBits = 3;

inline bool sim_backend_covers(uint64_t x, uint64_t N) {
  if (N != 15) return false;
  for (uint64_t covered : {2, 4, 7, 8, 11, 13})
    if (x == covered) return true;
  return false;
}

/// Exact counting-register distribution of the bundled period-finding circuit.
inline std::map<int, double> sim_counting_distribution(uint64_t x) {
  Model model = parse(bundled::kShor15, "examples:shor15");
  CircuitIR ir = lower(model, "PeriodFinding" + std::to_string(x));
  std::vector<StateBranch> branches = run_exact(ir);
  std::map<int, double> dist;
  for (const auto& b : branches) {
    int m = 0;
    for (int bit = 0; bit < kCountingBits; ++bit) m = m * 2 + b.cbits[bit];
    dist[m] += b.probability;
  }
  return dist;
}

/// Continued-fraction recovery for one measured numerator; optionally tests
/// small multiples (2..4x) of the candidate.
inline std::optional<uint64_t> recover_order(int m, uint64_t x, uint64_t N, bool multipleTesting,
                                             uint64_t* candidateOut = nullptr) {
  uint64_t candidate = continued_fraction_order(uint64_t(m), uint64_t(1) << kCountingBits, N);
  if (candidateOut) *candidateOut = candidate;
  if (candidate < 2) return std::nullopt;  // zero phase carries no information
  int kMax = multipleTesting ? 4 : 1;
  for (int k = 1; k <= kMax; ++k) {
    uint64_t r = candidate * uint64_t(k);
    if (r >= N) break;
    if (powmod(x, r, N) == 1) return r;
  }
  return std::nullopt;
}

}  // namespace detail

/// Exact probability that one shot of the simulated period-finding circuit
/// recovers a verified order for base x (branch-enumerated, no sampling).
inline double order_success_probability(uint64_t x, uint64_t N, bool multipleTesting) {
  if (!detail::sim_backend_covers(x, N)) {
    throw Error("UnsupportedModulus", {},
                "no bundled period-finding circuit for x=" + std::to_string(x) +
                    ", N=" + std::to_string(N));
  }
  double p = 0;
  for (const auto& [m, prob] : detail::sim_counting_distribution(x)) {
    if (detail::recover_order(m, x, N, multipleTesting)) p += prob;
  }
  return p;
}

/// Multiplicative order of x modulo N. The simulated path enumerates the
/// counting-register outcomes and applies continued-fraction recovery; the
/// classical path is a direct modular power loop. Returns 0 when no outcome
/// yields a verified order.
inline uint64_t find_order(uint64_t x, uint64_t N, OrderBackend backend,
                           std::vector<TranscriptEntry>& transcript) {
  if (backend == OrderBackend::ClassicalOracle) {
    uint64_t r = 1;
    uint64_t v = x % N;
    while (v != 1) {
      v = detail::mulmod(v, x, N);
      ++r;
      if (r > N) return 0;  // not coprime; no order exists
    }
    transcript.push_back({x, -1, r, true, "classical power loop"});
    return r;
  }

  if (!detail::sim_backend_covers(x, N)) {
    throw Error("UnsupportedModulus", {},
                "no bundled period-finding circuit for x=" + std::to_string(x) +
                    ", N=" + std::to_string(N));
  }
  uint64_t bestOrder = 0;
  for (const auto& [m, prob] : detail::sim_counting_distribution(x)) {
    uint64_t candidate = 0;
    auto r = detail::recover_order(m, x, N, /*multipleTesting=*/true, &candidate);
    TranscriptEntry entry;
    entry.x = x;
    entry.measuredPhaseNumerator = m;
    entry.candidateOrder = r.value_or(candidate);
    entry.accepted = r.has_value();
    transcript.push_back(entry);
    if (r && (bestOrder == 0 || *r < bestOrder)) bestOrder = *r;
  }
  return bestOrder;
}

inline uint64_t find_order(uint64_t x, uint64_t N, OrderBackend backend) {
  std::vector<TranscriptEntry> transcript;
  return find_order(x, N, backend, transcript);
}

/// Factors N by the classical driver around order finding: even check,
/// perfect-power check, random base with gcd shortcut, order finding, and the
/// gcd(x^{r/2} +- 1, N) extraction; retries up to maxAttempts bases.
inline FactorResult factor(uint64_t N, std::optional<uint64_t> forcedX, uint64_t seed,
                           OrderBackend backend, int maxAttempts = 16) {
  FactorResult result;
  if (N < 2) {
    throw Error("BadModulus", {}, "N must be at least 2");
  }

  if (N % 2 == 0) {
    result.status = FactorStatus::TrivialEven;
    result.p = 2;
    result.q = N / 2;
    return result;
  }
  if (auto pp = perfect_power(N)) {
    result.status = FactorStatus::PerfectPower;
    result.p = pp->first;   // base a
    result.q = pp->second;  // exponent b
    return result;
  }

  std::mt19937_64 gen(seed);
  auto drawBase = [&]() -> uint64_t {
    // uniform in [1, N-1] without distribution-object portability concerns
    uint64_t span = N - 1;
    uint64_t limit = (~uint64_t(0) / span) * span;
    uint64_t v;
    do {
      v = gen();
    } while (v >= limit);
    return 1 + v % span;
  };

  for (int attempt = 0; attempt < maxAttempts; ++attempt) {
    ++result.attempts;
    uint64_t x = forcedX ? *forcedX : drawBase();

    uint64_t g = std::gcd(x, N);
    if (g > 1 && g < N) {
      result.status = FactorStatus::GcdShortcut;
      result.p = g;
      result.q = N / g;
      result.usedBase = x;
      return result;
    }
    if (g == N || x == 1) {
      result.transcript.push_back({x, -1, 0, false, "uninformative base"});
      if (forcedX) break;
      continue;
    }
    if (backend == OrderBackend::SimulatedCircuit && !detail::sim_backend_covers(x, N)) {
      if (forcedX || N != 15) {
        throw Error("UnsupportedModulus", {},
                    "no bundled period-finding circuit for x=" + std::to_string(x) +
                        ", N=" + std::to_string(N));
      }
      result.transcript.push_back({x, -1, 0, false, "no bundled circuit for this base"});
      continue;
    }

    uint64_t r = find_order(x, N, backend, result.transcript);
    if (r == 0 || r % 2 != 0) {
      if (forcedX) break;
      continue;
    }
    uint64_t y = powmod(x, r / 2, N);
    if (y == N - 1) {  // x^{r/2} = -1 (mod N): the method yields nothing
      if (forcedX) break;
      continue;
    }
    for (uint64_t cand : {std::gcd(y - 1, N), std::gcd(y + 1, N)}) {
      if (cand > 1 && cand < N) {
        result.status = FactorStatus::Factored;
        result.p = std::min(cand, N / cand);
        result.q = std::max(cand, N / cand);
        result.usedBase = x;
        result.order = r;
        return result;
      }
    }
    if (forcedX) break;
  }
  result.status = FactorStatus::Failed;
  return result;
}

}  // namespace quml
