#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "quanuml/lowering.hpp"

namespace quml {

using Amplitude = std::complex<double>;

/// One classical-outcome branch of an exact run: the probability of reaching
/// it, the cbit values recorded along the way (-1 = unset), and the
/// renormalized statevector. Qubit 0 is the most significant bit of the
/// basis-state label.
struct StateBranch {
  double probability = 1.0;
  std::vector<int8_t> cbits;
  std::vector<Amplitude> amplitudes;

  std::string cbit_string() const {
    std::string s;
    s.reserve(cbits.size());
    for (int8_t b : cbits) s += b < 0 ? '-' : char('0' + b);
    return s;
  }
};

using OutcomeDistribution = std::map<std::string, double>;

namespace detail {

constexpr int kMaxQubits = 24;
constexpr double kMinBranchProbability = 1e-14;

inline std::array<Amplitude, 4> gate_matrix(GateKind g, const std::optional<Angle>& angle) {
  const double invSqrt2 = 0.70710678118654752440;
  const Amplitude i{0, 1};
  switch (g) {
    case GateKind::H: return {invSqrt2, invSqrt2, invSqrt2, -invSqrt2};
    case GateKind::X: return {0, 1, 1, 0};
    case GateKind::Y: return {0, -i, i, 0};
    case GateKind::Z: return {1, 0, 0, -1};
    case GateKind::S: return {1, 0, 0, i};
    case GateKind::Sdg: return {1, 0, 0, -i};
    case GateKind::T: return {1, 0, 0, std::polar(1.0, 0.78539816339744830962)};
    case GateKind::Tdg: return {1, 0, 0, std::polar(1.0, -0.78539816339744830962)};
    case GateKind::RX: {
      double t = angle->value() / 2;
      return {std::cos(t), -i * std::sin(t), -i * std::sin(t), std::cos(t)};
    }
    case GateKind::RY: {
      double t = angle->value() / 2;
      return {std::cos(t), -std::sin(t), std::sin(t), std::cos(t)};
    }
    case GateKind::RZ: {
      double t = angle->value() / 2;
      return {std::polar(1.0, -t), 0, 0, std::polar(1.0, t)};
    }
    case GateKind::P: return {1, 0, 0, std::polar(1.0, angle->value())};
  }
  return {1, 0, 0, 1};
}

struct Executor {
  int numQubits;

  uint64_t qubit_mask(int q) const { return uint64_t(1) << (numQubits - 1 - q); }

  void apply_controlled(std::vector<Amplitude>& amps, const std::vector<int>& controls, int target,
                        const std::array<Amplitude, 4>& m) const {
    uint64_t ctrlMask = 0;
    for (int c : controls) ctrlMask |= qubit_mask(c);
    uint64_t tMask = qubit_mask(target);
    uint64_t size = amps.size();
    for (uint64_t idx = 0; idx < size; ++idx) {
      if ((idx & tMask) != 0) continue;
      if ((idx & ctrlMask) != ctrlMask) continue;
      Amplitude a0 = amps[idx];
      Amplitude a1 = amps[idx | tMask];
      amps[idx] = m[0] * a0 + m[1] * a1;
      amps[idx | tMask] = m[2] * a0 + m[3] * a1;
    }
  }

  void apply_unitary(std::vector<Amplitude>& amps, const UnitaryI& u) const {
    auto m = gate_matrix(u.gate, u.angle);
    std::vector<int> controls(u.qubits.begin(), u.qubits.begin() + u.numControls);
    for (size_t t = u.numControls; t < u.qubits.size(); ++t) {
      apply_controlled(amps, controls, u.qubits[t], m);
    }
  }

  void apply_swap(std::vector<Amplitude>& amps, int a, int b) const {
    uint64_t ma = qubit_mask(a), mb = qubit_mask(b);
    uint64_t size = amps.size();
    for (uint64_t idx = 0; idx < size; ++idx) {
      if ((idx & ma) != 0 && (idx & mb) == 0) {
        std::swap(amps[idx], amps[(idx & ~ma) | mb]);
      }
    }
  }

  double prob_one(const std::vector<Amplitude>& amps, int q) const {
    uint64_t mask = qubit_mask(q);
    double p = 0;
    for (uint64_t idx = 0; idx < amps.size(); ++idx) {
      if (idx & mask) p += std::norm(amps[idx]);
    }
    return p;
  }

  void collapse(std::vector<Amplitude>& amps, int q, int outcome, double prob) const {
    uint64_t mask = qubit_mask(q);
    double scale = 1.0 / std::sqrt(prob);
    for (uint64_t idx = 0; idx < amps.size(); ++idx) {
      bool bit = (idx & mask) != 0;
      if (bit != (outcome == 1)) {
        amps[idx] = 0;
      } else {
        amps[idx] *= scale;
      }
    }
  }
};

inline bool eval_cond(const CondIR& c, const std::vector<int8_t>& cbits, const std::string& irName) {
  switch (c.kind) {
    case CondIR::Kind::Leaf: {
      int8_t v = cbits[c.cbit];
      if (v < 0) {
        throw Error("UnmeasuredCondBit", SourceSpan{irName, 1, 1, 1, 1},
                    "conditional reads cbit " + std::to_string(c.cbit) +
                        " before any measurement set it");
      }
      return v == c.value;
    }
    case CondIR::Kind::Xor:
      return eval_cond(c.kids[0], cbits, irName) != eval_cond(c.kids[1], cbits, irName);
    case CondIR::Kind::And:
      return eval_cond(c.kids[0], cbits, irName) && eval_cond(c.kids[1], cbits, irName);
  }
  return false;
}

inline void run_instrs(const Executor& ex, const std::vector<Instr>& instrs,
                       std::vector<StateBranch>& branches, const std::string& irName) {
  for (const Instr& instr : instrs) {
    if (const auto* u = std::get_if<UnitaryI>(&instr.op)) {
      for (auto& b : branches) ex.apply_unitary(b.amplitudes, *u);
    } else if (const auto* s = std::get_if<SwapI>(&instr.op)) {
      for (auto& b : branches) ex.apply_swap(b.amplitudes, s->a, s->b);
    } else if (const auto* m = std::get_if<MeasureI>(&instr.op)) {
      std::vector<StateBranch> next;
      next.reserve(branches.size() * 2);
      for (auto& b : branches) {
        double p1 = ex.prob_one(b.amplitudes, m->qubit);
        double p0 = 1.0 - p1;
        for (int outcome : {0, 1}) {
          double p = outcome ? p1 : p0;
          if (p < kMinBranchProbability) continue;
          StateBranch child;
          child.probability = b.probability * p;
          child.cbits = b.cbits;
          child.cbits[m->cbit] = static_cast<int8_t>(outcome);
          child.amplitudes = b.amplitudes;
          ex.collapse(child.amplitudes, m->qubit, outcome, p);
          next.push_back(std::move(child));
        }
      }
      branches = std::move(next);
    } else if (const auto* c = std::get_if<CondI>(&instr.op)) {
      std::vector<StateBranch> taken, skipped;
      for (auto& b : branches) {
        (eval_cond(c->condition, b.cbits, irName) ? taken : skipped).push_back(std::move(b));
      }
      run_instrs(ex, c->body, taken, irName);
      run_instrs(ex, c->elseBody, skipped, irName);
      branches.clear();
      for (auto& b : taken) branches.push_back(std::move(b));
      for (auto& b : skipped) branches.push_back(std::move(b));
    }
  }
}

inline std::vector<Amplitude> initial_state(const CircuitIR& ir) {
  std::vector<Amplitude> amps(uint64_t(1) << ir.numQubits, Amplitude(0));
  uint64_t idx = 0;
  for (int q : ir.initOnes) idx |= uint64_t(1) << (ir.numQubits - 1 - q);
  amps[idx] = 1;
  return amps;
}

inline void check_size(const CircuitIR& ir) {
  if (ir.numQubits > kMaxQubits) {
    throw Error("TooManyQubits", SourceSpan{ir.name, 1, 1, 1, 1},
                std::to_string(ir.numQubits) + " qubits exceed the exact-simulation limit of " +
                    std::to_string(kMaxQubits));
  }
}

}  // namespace detail

/// Exact execution: unitaries act on the statevector, each measurement forks
/// the branch by outcome, conditionals evaluate against the branch's cbits.
/// Returns every leaf branch; probabilities sum to 1.
inline std::vector<StateBranch> run_exact(const CircuitIR& ir) {
  detail::check_size(ir);
  detail::Executor ex{ir.numQubits};
  std::vector<StateBranch> branches(1);
  branches[0].probability = 1.0;
  branches[0].cbits.assign(ir.numCbits, -1);
  branches[0].amplitudes = detail::initial_state(ir);
  detail::run_instrs(ex, ir.instructions, branches, ir.name);
  return branches;
}

/// Aggregates leaf branches by their cbit strings.
inline OutcomeDistribution exact_distribution(const std::vector<StateBranch>& branches) {
  OutcomeDistribution dist;
  for (const auto& b : branches) dist[b.cbit_string()] += b.probability;
  return dist;
}

/// Distribution of a computational-basis measurement of the named qubits
/// (in the given order), aggregated across branches.
inline OutcomeDistribution marginal(const std::vector<StateBranch>& branches,
                                    const std::vector<int>& qubits) {
  OutcomeDistribution dist;
  for (const auto& b : branches) {
    int n = 0;
    while ((size_t(1) << n) < b.amplitudes.size()) ++n;
    for (uint64_t idx = 0; idx < b.amplitudes.size(); ++idx) {
      double p = std::norm(b.amplitudes[idx]) * b.probability;
      if (p <= 0) continue;
      std::string key;
      key.reserve(qubits.size());
      for (int q : qubits) key += char('0' + ((idx >> (n - 1 - q)) & 1));
      dist[key] += p;
    }
  }
  for (auto it = dist.begin(); it != dist.end();) {
    it = it->second < 1e-12 ? dist.erase(it) : std::next(it);
  }
  return dist;
}

/// Shot sampling with a deterministic generator: identical (ir, shots, seed)
/// give identical counts.
inline OutcomeDistribution sample(const CircuitIR& ir, long long shots, uint64_t seed) {
  detail::check_size(ir);
  if (shots < 1) {
    throw Error("BadShots", SourceSpan{ir.name, 1, 1, 1, 1}, "shots must be at least 1");
  }
  detail::Executor ex{ir.numQubits};
  std::mt19937_64 gen(seed);
  auto uniform = [&gen]() { return double(gen() >> 11) * 0x1.0p-53; };

  OutcomeDistribution counts;
  for (long long s = 0; s < shots; ++s) {
    std::vector<Amplitude> amps = detail::initial_state(ir);
    std::vector<int8_t> cbits(ir.numCbits, -1);

    auto runSeq = [&](const std::vector<Instr>& instrs, auto&& self) -> void {
      for (const Instr& instr : instrs) {
        if (const auto* u = std::get_if<UnitaryI>(&instr.op)) {
          ex.apply_unitary(amps, *u);
        } else if (const auto* sw = std::get_if<SwapI>(&instr.op)) {
          ex.apply_swap(amps, sw->a, sw->b);
        } else if (const auto* m = std::get_if<MeasureI>(&instr.op)) {
          double p1 = ex.prob_one(amps, m->qubit);
          int outcome = uniform() < p1 ? 1 : 0;
          ex.collapse(amps, m->qubit, outcome, outcome ? p1 : 1.0 - p1);
          cbits[m->cbit] = static_cast<int8_t>(outcome);
        } else if (const auto* c = std::get_if<CondI>(&instr.op)) {
          if (detail::eval_cond(c->condition, cbits, ir.name)) {
            self(c->body, self);
          } else {
            self(c->elseBody, self);
          }
        }
      }
    };
    runSeq(ir.instructions, runSeq);

    std::string key;
    key.reserve(cbits.size());
    for (int8_t b : cbits) key += b < 0 ? '-' : char('0' + b);
    counts[key] += 1.0;
  }
  return counts;
}

}  // namespace quml
