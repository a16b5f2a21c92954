#pragma once

#include <string>

#include <json.hpp>

#include "quanuml/lowering.hpp"

namespace quml {

namespace detail {

using nlohmann::json;

inline json angle_to_json(const Angle& angle) {
  Angle a = angle.canonical();
  if (a.isRational) return json{{"type", "rational"}, {"num", a.num}, {"den", a.den}};
  return json{{"type", "radians"}, {"value", a.radians}};
}

inline Angle angle_from_json(const json& j) {
  if (j.at("type") == "rational") {
    return Angle::rational(j.at("num").get<long long>(), j.at("den").get<long long>());
  }
  return Angle::from_radians(j.at("value").get<double>());
}

inline json cond_to_json(const CondIR& c) {
  switch (c.kind) {
    case CondIR::Kind::Leaf:
      return json{{"type", "eq"}, {"cbit", c.cbit}, {"value", c.value}};
    case CondIR::Kind::Xor:
      return json{{"type", "xor"}, {"lhs", cond_to_json(c.kids[0])}, {"rhs", cond_to_json(c.kids[1])}};
    case CondIR::Kind::And:
      return json{{"type", "and"}, {"lhs", cond_to_json(c.kids[0])}, {"rhs", cond_to_json(c.kids[1])}};
  }
  return json();
}

inline CondIR cond_from_json(const json& j) {
  CondIR c;
  std::string type = j.at("type").get<std::string>();
  if (type == "eq") {
    c.kind = CondIR::Kind::Leaf;
    c.cbit = j.at("cbit").get<int>();
    c.value = j.at("value").get<int>();
  } else {
    c.kind = type == "xor" ? CondIR::Kind::Xor : CondIR::Kind::And;
    c.kids.push_back(cond_from_json(j.at("lhs")));
    c.kids.push_back(cond_from_json(j.at("rhs")));
  }
  return c;
}

inline json instrs_to_json(const std::vector<Instr>& instrs);

inline json instr_to_json(const Instr& instr) {
  if (const auto* u = std::get_if<UnitaryI>(&instr.op)) {
    json j{{"op", "unitary"},
           {"gate", to_string(u->gate)},
           {"qubits", u->qubits},
           {"controls", u->numControls}};
    if (u->angle) j["angle"] = angle_to_json(*u->angle);
    return j;
  }
  if (const auto* m = std::get_if<MeasureI>(&instr.op)) {
    return json{{"op", "measure"}, {"qubit", m->qubit}, {"cbit", m->cbit}};
  }
  if (const auto* s = std::get_if<SwapI>(&instr.op)) {
    return json{{"op", "swap"}, {"a", s->a}, {"b", s->b}};
  }
  const auto& c = std::get<CondI>(instr.op);
  return json{{"op", "cond"},
              {"cond", cond_to_json(c.condition)},
              {"body", instrs_to_json(c.body)},
              {"else", instrs_to_json(c.elseBody)}};
}

inline json instrs_to_json(const std::vector<Instr>& instrs) {
  json arr = json::array();
  for (const auto& i : instrs) arr.push_back(instr_to_json(i));
  return arr;
}

inline std::vector<Instr> instrs_from_json(const json& arr);

inline Instr instr_from_json(const json& j) {
  std::string op = j.at("op").get<std::string>();
  if (op == "unitary") {
    UnitaryI u;
    auto gate = gate_from_string(j.at("gate").get<std::string>());
    if (!gate) throw Error("BadIrJson", {}, "unknown gate '" + j.at("gate").get<std::string>() + "'");
    u.gate = *gate;
    u.qubits = j.at("qubits").get<std::vector<int>>();
    u.numControls = j.at("controls").get<int>();
    if (j.contains("angle")) u.angle = angle_from_json(j.at("angle"));
    return {std::move(u)};
  }
  if (op == "measure") return {MeasureI{j.at("qubit").get<int>(), j.at("cbit").get<int>()}};
  if (op == "swap") return {SwapI{j.at("a").get<int>(), j.at("b").get<int>()}};
  if (op == "cond") {
    CondI c;
    c.condition = cond_from_json(j.at("cond"));
    c.body = instrs_from_json(j.at("body"));
    c.elseBody = instrs_from_json(j.at("else"));
    return {std::move(c)};
  }
  throw Error("BadIrJson", {}, "unknown instruction op '" + op + "'");
}

inline std::vector<Instr> instrs_from_json(const json& arr) {
  std::vector<Instr> out;
  for (const auto& j : arr) out.push_back(instr_from_json(j));
  return out;
}

}  // namespace detail

/// Canonical JSON: sorted keys, shortest round-trip floats, newline-terminated.
/// load_ir_json(emit_ir_json(ir)) == ir.
inline std::string emit_ir_json(const CircuitIR& ir) {
  detail::json j;
  j["name"] = ir.name;
  j["qubits"] = ir.numQubits;
  j["cbits"] = ir.numCbits;
  j["names"] = detail::json{{"qubits", ir.qubitNames}, {"cbits", ir.cbitNames}};
  j["initOnes"] = std::vector<int>(ir.initOnes.begin(), ir.initOnes.end());
  j["instructions"] = detail::instrs_to_json(ir.instructions);
  return j.dump() + "\n";
}

inline CircuitIR load_ir_json(const std::string& text) {
  detail::json j;
  try {
    j = detail::json::parse(text);
  } catch (const detail::json::exception& e) {
    throw Error("BadIrJson", {}, e.what());
  }
  try {
    CircuitIR ir;
    ir.name = j.at("name").get<std::string>();
    ir.numQubits = j.at("qubits").get<int>();
    ir.numCbits = j.at("cbits").get<int>();
    ir.qubitNames = j.at("names").at("qubits").get<std::vector<std::string>>();
    ir.cbitNames = j.at("names").at("cbits").get<std::vector<std::string>>();
    for (int i : j.at("initOnes").get<std::vector<int>>()) ir.initOnes.insert(i);
    ir.instructions = detail::instrs_from_json(j.at("instructions"));
    return ir;
  } catch (const detail::json::exception& e) {
    throw Error("BadIrJson", {}, e.what());
  }
}

}  // namespace quml
