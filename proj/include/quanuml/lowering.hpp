#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "quanuml/ast.hpp"
#include "quanuml/resolve.hpp"

namespace quml {

/// Condition over cbit indices (the lowered form of CondExpr).
struct CondIR {
  enum class Kind { Leaf, Xor, And };
  Kind kind = Kind::Leaf;
  int cbit = 0;   // Leaf
  int value = 0;  // Leaf
  std::vector<CondIR> kids;

  static CondIR leaf(int cbit, int value) {
    CondIR c;
    c.cbit = cbit;
    c.value = value;
    return c;
  }

  friend bool operator==(const CondIR& a, const CondIR& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == Kind::Leaf) return a.cbit == b.cbit && a.value == b.value;
    return a.kids == b.kids;
  }
};

/// Gate application; qubits hold the controls first, then the targets.
struct UnitaryI {
  GateKind gate = GateKind::H;
  std::optional<Angle> angle;
  std::vector<int> qubits;
  int numControls = 0;

  friend bool operator==(const UnitaryI&, const UnitaryI&) = default;
};

struct MeasureI {
  int qubit = 0;
  int cbit = 0;
  friend bool operator==(const MeasureI&, const MeasureI&) = default;
};

struct SwapI {
  int a = 0, b = 0;
  friend bool operator==(const SwapI&, const SwapI&) = default;
};

struct Instr;

struct CondI {
  CondIR condition;
  std::vector<Instr> body;
  std::vector<Instr> elseBody;
};
bool operator==(const CondI&, const CondI&);

struct Instr {
  std::variant<UnitaryI, MeasureI, SwapI, CondI> op;
};
inline bool operator==(const Instr& a, const Instr& b) { return a.op == b.op; }
inline bool operator==(const CondI& a, const CondI& b) {
  return a.condition == b.condition && a.body == b.body && a.elseBody == b.elseBody;
}

/// Flat, lowered circuit over indexed qubit/cbit registers.
struct CircuitIR {
  std::string name;
  int numQubits = 0;
  int numCbits = 0;
  std::vector<std::string> qubitNames;
  std::vector<std::string> cbitNames;
  std::set<int> initOnes;
  std::vector<Instr> instructions;

  friend bool operator==(const CircuitIR&, const CircuitIR&) = default;
};

namespace detail {

constexpr int kMaxInlineDepth = 32;
constexpr int kMaxCondDepth = 8;

struct LoweringContext {
  const Model& model;
  const SymbolTable& table;
  CircuitIR& ir;
  int inlineSites = 0;
};

inline CondIR lower_cond(const CondExpr& cond, const std::map<std::string, int>& cbits) {
  CondIR c;
  switch (cond.kind) {
    case CondExpr::Kind::Leaf:
      c.kind = CondIR::Kind::Leaf;
      c.cbit = cbits.at(cond.cbit);
      c.value = cond.value;
      break;
    case CondExpr::Kind::Xor:
    case CondExpr::Kind::And:
      c.kind = cond.kind == CondExpr::Kind::Xor ? CondIR::Kind::Xor : CondIR::Kind::And;
      for (const auto& k : cond.kids) c.kids.push_back(lower_cond(k, cbits));
      break;
  }
  return c;
}

inline void lower_events(LoweringContext& ctx, const SeqDiagram& diagram,
                         const std::vector<Event>& events,
                         const std::map<std::string, int>& qubits,
                         const std::map<std::string, int>& cbits, std::vector<Instr>& out,
                         int useDepth, int condDepth) {
  for (const Event& e : events) {
    if (const auto* g = std::get_if<SingleGate>(&e.body)) {
      out.push_back({UnitaryI{g->gate, g->angle, {qubits.at(g->qubit)}, 0}});
    } else if (const auto* m = std::get_if<MultiGate>(&e.body)) {
      UnitaryI u;
      u.gate = m->gate;
      u.angle = m->angle;
      for (const auto& q : m->controls) u.qubits.push_back(qubits.at(q));
      for (const auto& q : m->targets) u.qubits.push_back(qubits.at(q));
      u.numControls = static_cast<int>(m->controls.size());
      out.push_back({std::move(u)});
    } else if (const auto* sw = std::get_if<SwapGate>(&e.body)) {
      out.push_back({SwapI{qubits.at(sw->a), qubits.at(sw->b)}});
    } else if (const auto* me = std::get_if<MeasureEvent>(&e.body)) {
      out.push_back({MeasureI{qubits.at(me->qubit), cbits.at(me->cbit)}});
    } else if (const auto* alt = std::get_if<AltEvent>(&e.body)) {
      if (condDepth + 1 > kMaxCondDepth) {
        throw Error("CondDepthExceeded", e.span,
                    "conditional blocks nest deeper than " + std::to_string(kMaxCondDepth));
      }
      CondI c;
      c.condition = lower_cond(alt->condition, cbits);
      lower_events(ctx, diagram, alt->thenEvents, qubits, cbits, c.body, useDepth, condDepth + 1);
      lower_events(ctx, diagram, alt->elseEvents, qubits, cbits, c.elseBody, useDepth,
                   condDepth + 1);
      out.push_back({std::move(c)});
    } else if (const auto* u = std::get_if<UseEvent>(&e.body)) {
      if (useDepth + 1 > kMaxInlineDepth) {
        throw Error("InliningDepthExceeded", e.span,
                    "sub-diagram uses nest deeper than " + std::to_string(kMaxInlineDepth));
      }
      const SeqDiagram* callee = ctx.model.find_sequence(u->subName);
      int site = ++ctx.inlineSites;
      std::map<std::string, int> calleeQubits;
      for (size_t i = 0; i < callee->formalQubits.size(); ++i) {
        calleeQubits[callee->formalQubits[i]] = qubits.at(u->actuals[i]);
      }
      // Callee-local cbits are freshly indexed per inlining site.
      std::map<std::string, int> calleeCbits;
      for (const auto& cb : callee->cbitDecls) {
        calleeCbits[cb.name] = ctx.ir.numCbits++;
        ctx.ir.cbitNames.push_back(callee->name + "." + cb.name + "#" + std::to_string(site));
      }
      lower_events(ctx, *callee, callee->events, calleeQubits, calleeCbits, out, useDepth + 1,
                   condDepth);
    }
  }
}

}  // namespace detail

/// Flattens a validated top-level diagram: indexes lifelines in declaration
/// order, splices every `use` in place, and compiles alt fragments to
/// conditional blocks.
inline CircuitIR lower(const Model& model, const std::string& diagramName) {
  SymbolTable table = resolve(model);
  const SeqDiagram* diagram = model.find_sequence(diagramName);
  if (!diagram) {
    throw Error("UnknownDiagram", model.span, "no sequence diagram named '" + diagramName + "'");
  }
  if (diagram->parameterized()) {
    throw Error("NotTopLevel", diagram->span,
                "diagram '" + diagramName + "' is parameterized and cannot be lowered directly");
  }

  CircuitIR ir;
  ir.name = diagramName;
  std::map<std::string, int> qubits;
  std::map<std::string, int> cbits;
  for (const auto& q : diagram->qubitDecls) {
    int idx = ir.numQubits++;
    qubits[q.name] = idx;
    ir.qubitNames.push_back(q.name);
    if (q.init && *q.init == 1) ir.initOnes.insert(idx);
  }
  for (const auto& c : diagram->cbitDecls) {
    cbits[c.name] = ir.numCbits++;
    ir.cbitNames.push_back(c.name);
  }

  detail::LoweringContext ctx{model, table, ir, 0};
  detail::lower_events(ctx, *diagram, diagram->events, qubits, cbits, ir.instructions, 0, 0);
  return ir;
}

// ---------------------------------------------------------------------------
// Circuit statistics.
// ---------------------------------------------------------------------------

struct IrStats {
  int depth = 0;
  int gateCount = 0;
  int measureCount = 0;
  int condBlockCount = 0;

  friend bool operator==(const IrStats&, const IrStats&) = default;
};

namespace detail {

inline void collect_wires(const Instr& instr, int numQubits, std::set<int>& wires);

inline void collect_cond_cbits(const CondIR& c, int numQubits, std::set<int>& wires) {
  if (c.kind == CondIR::Kind::Leaf) {
    wires.insert(numQubits + c.cbit);
    return;
  }
  for (const auto& k : c.kids) collect_cond_cbits(k, numQubits, wires);
}

inline void collect_wires(const Instr& instr, int numQubits, std::set<int>& wires) {
  if (const auto* u = std::get_if<UnitaryI>(&instr.op)) {
    wires.insert(u->qubits.begin(), u->qubits.end());
  } else if (const auto* m = std::get_if<MeasureI>(&instr.op)) {
    wires.insert(m->qubit);
    wires.insert(numQubits + m->cbit);
  } else if (const auto* s = std::get_if<SwapI>(&instr.op)) {
    wires.insert(s->a);
    wires.insert(s->b);
  } else if (const auto* c = std::get_if<CondI>(&instr.op)) {
    collect_cond_cbits(c->condition, numQubits, wires);
    for (const auto& i : c->body) collect_wires(i, numQubits, wires);
    for (const auto& i : c->elseBody) collect_wires(i, numQubits, wires);
  }
}

inline int sequence_depth(const std::vector<Instr>& instrs, int numQubits,
                          std::map<int, int>& wireDepth);

/// Depth contribution of one instruction given current wire depths.
inline int instr_depth(const Instr& instr, int numQubits, std::map<int, int>& wireDepth) {
  std::set<int> wires;
  int weight = 1;
  if (const auto* c = std::get_if<CondI>(&instr.op)) {
    std::map<int, int> bodyDepth, elseDepth;
    int inner = std::max(sequence_depth(c->body, numQubits, bodyDepth),
                         sequence_depth(c->elseBody, numQubits, elseDepth));
    weight = 1 + inner;  // the block itself plus whichever branch is deeper
  }
  collect_wires(instr, numQubits, wires);
  int base = 0;
  for (int w : wires) {
    auto it = wireDepth.find(w);
    if (it != wireDepth.end()) base = std::max(base, it->second);
  }
  int d = base + weight;
  for (int w : wires) wireDepth[w] = d;
  return d;
}

inline int sequence_depth(const std::vector<Instr>& instrs, int numQubits,
                          std::map<int, int>& wireDepth) {
  int depth = 0;
  for (const auto& i : instrs) depth = std::max(depth, instr_depth(i, numQubits, wireDepth));
  return depth;
}

inline void count_instrs(const std::vector<Instr>& instrs, IrStats& stats) {
  for (const auto& i : instrs) {
    if (std::holds_alternative<UnitaryI>(i.op) || std::holds_alternative<SwapI>(i.op)) {
      ++stats.gateCount;
    } else if (std::holds_alternative<MeasureI>(i.op)) {
      ++stats.measureCount;
    } else if (const auto* c = std::get_if<CondI>(&i.op)) {
      ++stats.condBlockCount;
      count_instrs(c->body, stats);
      count_instrs(c->elseBody, stats);
    }
  }
}

}  // namespace detail

/// Depth is the longest chain of instructions sharing a qubit/cbit wire; a
/// conditional block weighs 1 plus the deeper of its two branches.
inline IrStats ir_stats(const CircuitIR& ir) {
  IrStats stats;
  std::map<int, int> wireDepth;
  stats.depth = detail::sequence_depth(ir.instructions, ir.numQubits, wireDepth);
  detail::count_instrs(ir.instructions, stats);
  return stats;
}

}  // namespace quml
