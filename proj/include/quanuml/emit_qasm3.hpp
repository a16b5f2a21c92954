#pragma once

#include <cstdio>
#include <string>

#include "quanuml/lowering.hpp"

namespace quml {

namespace detail {

inline std::string qasm_angle(const Angle& angle) {
  Angle a = angle.canonical();
  if (!a.isRational) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", a.radians);
    return buf;
  }
  if (a.num == 0) return "0";
  std::string s;
  if (a.num < 0) s += "-";
  long long n = a.num < 0 ? -a.num : a.num;
  if (n != 1) s += std::to_string(n) + "*";
  s += "pi";
  if (a.den != 1) s += "/" + std::to_string(a.den);
  return s;
}

inline std::string qasm_base_gate(GateKind g, const std::optional<Angle>& angle) {
  std::string name;
  switch (g) {
    case GateKind::H: name = "h"; break;
    case GateKind::X: name = "x"; break;
    case GateKind::Y: name = "y"; break;
    case GateKind::Z: name = "z"; break;
    case GateKind::S: name = "s"; break;
    case GateKind::Sdg: name = "sdg"; break;
    case GateKind::T: name = "t"; break;
    case GateKind::Tdg: name = "tdg"; break;
    case GateKind::RX: name = "rx"; break;
    case GateKind::RY: name = "ry"; break;
    case GateKind::RZ: name = "rz"; break;
    case GateKind::P: name = "p"; break;
  }
  if (gate_takes_angle(g)) name += "(" + qasm_angle(*angle) + ")";
  return name;
}

inline std::string qasm_cond(const CondIR& c) {
  auto wrap = [](const CondIR& k) {
    std::string s = qasm_cond(k);
    return k.kind == CondIR::Kind::Leaf ? s : "(" + s + ")";
  };
  switch (c.kind) {
    case CondIR::Kind::Leaf:
      return "c[" + std::to_string(c.cbit) + "] == " + std::to_string(c.value);
    case CondIR::Kind::Xor: {
      const CondIR& l = c.kids[0];
      const CondIR& r = c.kids[1];
      if (l.kind == CondIR::Kind::Leaf && r.kind == CondIR::Kind::Leaf && l.value == 1 &&
          r.value == 1) {
        // parity of two raw bits reads best in feedforward corrections
        return "(c[" + std::to_string(l.cbit) + "] ^ c[" + std::to_string(r.cbit) + "]) == 1";
      }
      return wrap(l) + " != " + wrap(r);
    }
    case CondIR::Kind::And:
      return wrap(c.kids[0]) + " && " + wrap(c.kids[1]);
  }
  return "";
}

struct QasmEmitter {
  std::string out;
  int indent = 0;

  void line(const std::string& s) {
    for (int i = 0; i < indent; ++i) out += "  ";
    out += s;
    out += "\n";
  }

  static std::string q(int idx) { return "q[" + std::to_string(idx) + "]"; }

  void emit_unitary(const UnitaryI& u) {
    std::string base = qasm_base_gate(u.gate, u.angle);
    for (size_t t = u.numControls; t < u.qubits.size(); ++t) {
      std::string args;
      for (int i = 0; i < u.numControls; ++i) args += q(u.qubits[i]) + ", ";
      args += q(u.qubits[t]);
      if (u.numControls == 0) {
        line(base + " " + args + ";");
      } else if (u.numControls == 1 && u.gate == GateKind::X) {
        line("cx " + args + ";");
      } else if (u.numControls == 1 && u.gate == GateKind::Z) {
        line("cz " + args + ";");
      } else if (u.numControls == 1 && u.gate == GateKind::P) {
        line("cp(" + qasm_angle(*u.angle) + ") " + args + ";");
      } else if (u.numControls == 2 && u.gate == GateKind::X) {
        line("ccx " + args + ";");
      } else {
        line("ctrl(" + std::to_string(u.numControls) + ") @ " + base + " " + args + ";");
      }
    }
  }

  static bool single_simple_body(const std::vector<Instr>& body) {
    return body.size() == 1 && !std::holds_alternative<CondI>(body[0].op);
  }

  std::string render_inline(const Instr& instr) {
    QasmEmitter sub;
    sub.emit_instr(instr);
    std::string s = sub.out;
    if (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
  }

  void emit_cond(const CondI& c) {
    std::string head = "if (" + qasm_cond(c.condition) + ")";
    if (single_simple_body(c.body) && c.elseBody.empty()) {
      line(head + " { " + render_inline(c.body[0]) + " }");
      return;
    }
    line(head + " {");
    ++indent;
    for (const auto& i : c.body) emit_instr(i);
    --indent;
    if (c.elseBody.empty()) {
      line("}");
      return;
    }
    line("} else {");
    ++indent;
    for (const auto& i : c.elseBody) emit_instr(i);
    --indent;
    line("}");
  }

  void emit_instr(const Instr& instr) {
    if (const auto* u = std::get_if<UnitaryI>(&instr.op)) {
      emit_unitary(*u);
    } else if (const auto* m = std::get_if<MeasureI>(&instr.op)) {
      line("c[" + std::to_string(m->cbit) + "] = measure " + q(m->qubit) + ";");
    } else if (const auto* s = std::get_if<SwapI>(&instr.op)) {
      line("swap " + q(s->a) + ", " + q(s->b) + ";");
    } else if (const auto* c = std::get_if<CondI>(&instr.op)) {
      emit_cond(*c);
    }
  }
};

}  // namespace detail

/// OpenQASM 3 serialization. Deterministic bytes; every instruction variant
/// has an emission rule.
inline std::string emit_qasm3(const CircuitIR& ir) {
  detail::QasmEmitter e;
  e.line("OPENQASM 3.0;");
  e.line("include \"stdgates.inc\";");
  if (ir.numQubits > 0) e.line("qubit[" + std::to_string(ir.numQubits) + "] q;");
  if (ir.numCbits > 0) e.line("bit[" + std::to_string(ir.numCbits) + "] c;");
  for (int idx : ir.initOnes) e.line("x q[" + std::to_string(idx) + "];");
  for (const auto& i : ir.instructions) e.emit_instr(i);
  return e.out;
}

}  // namespace quml
