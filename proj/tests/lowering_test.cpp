#include <gtest/gtest.h>

#include "quanuml/bundled.hpp"
#include "quanuml/lowering.hpp"
#include "quanuml/parser.hpp"

using namespace quml;

TEST(Lowering, BellInstructionSequence) {
  CircuitIR ir = lower(parse(bundled::kBell, "bell"), "Main");
  EXPECT_EQ(ir.numQubits, 2);
  EXPECT_EQ(ir.numCbits, 2);
  EXPECT_TRUE(ir.initOnes.empty());
  ASSERT_EQ(ir.instructions.size(), 4u);

  const auto& h = std::get<UnitaryI>(ir.instructions[0].op);
  EXPECT_EQ(h.gate, GateKind::H);
  EXPECT_EQ(h.qubits, std::vector<int>{0});
  EXPECT_EQ(h.numControls, 0);

  const auto& cx = std::get<UnitaryI>(ir.instructions[1].op);
  EXPECT_EQ(cx.gate, GateKind::X);
  EXPECT_EQ(cx.qubits, (std::vector<int>{0, 1}));
  EXPECT_EQ(cx.numControls, 1);

  EXPECT_EQ(std::get<MeasureI>(ir.instructions[2].op), (MeasureI{0, 0}));
  EXPECT_EQ(std::get<MeasureI>(ir.instructions[3].op), (MeasureI{1, 1}));
}

TEST(Lowering, QubitIndicesFollowDeclarationOrder) {
  CircuitIR ir = lower(parse(bundled::kShor15, "shor"), "PeriodFinding7");
  EXPECT_EQ(ir.qubitNames,
            (std::vector<std::string>{"c0", "c1", "c2", "t0", "t1", "t2", "t3"}));
  EXPECT_EQ(ir.initOnes, std::set<int>{6});
}

TEST(Lowering, UseIsEventSplicing) {
  Model m = parse(
      "model M { seq Sub(a, b) { gate H on a gate X control a target b gate H on b } "
      "seq Main { qubit q0, q1 cbit c0 gate X on q0 use Sub on (q0, q1) measure q0 -> c0 } }",
      "t");
  CircuitIR ir = lower(m, "Main");
  // 2 own events + 3 spliced callee events
  EXPECT_EQ(ir.instructions.size(), 5u);
  // the callee's H lands on the actual q0 (index 0) and the CX on (0,1)
  EXPECT_EQ(std::get<UnitaryI>(ir.instructions[1].op).qubits, std::vector<int>{0});
  EXPECT_EQ(std::get<UnitaryI>(ir.instructions[2].op).qubits, (std::vector<int>{0, 1}));
  EXPECT_EQ(std::get<UnitaryI>(ir.instructions[3].op).qubits, std::vector<int>{1});
}

TEST(Lowering, PeriodFinding7InstructionCount) {
  // Hand count from the bundled text: 3 H + 10 (CMul7) + 6 (CMul4) + 7 (QFTDagger)
  // + 7 measures = 33, with uses replaced one-for-one by callee events.
  CircuitIR ir = lower(parse(bundled::kShor15, "shor"), "PeriodFinding7");
  EXPECT_EQ(ir.instructions.size(), 33u);
}

TEST(Lowering, CalleeLocalCbitsFreshPerSite) {
  Model m = parse(
      "model M { seq Sub(a) { cbit k measure a -> k } "
      "seq Main { qubit q0, q1 use Sub on (q0) use Sub on (q1) } }",
      "t");
  CircuitIR ir = lower(m, "Main");
  EXPECT_EQ(ir.numCbits, 2);
  EXPECT_EQ(ir.cbitNames[0], "Sub.k#1");
  EXPECT_EQ(ir.cbitNames[1], "Sub.k#2");
  EXPECT_EQ(std::get<MeasureI>(ir.instructions[0].op), (MeasureI{0, 0}));
  EXPECT_EQ(std::get<MeasureI>(ir.instructions[1].op), (MeasureI{1, 1}));
}

TEST(Lowering, AltBecomesCond) {
  CircuitIR ir = lower(parse(bundled::kTeleportCnotDynamic, "tp"), "Main");
  int conds = 0;
  for (const auto& i : ir.instructions) conds += std::holds_alternative<CondI>(i.op);
  EXPECT_EQ(conds, 2);
  // first correction: (m1 ^ m3) over cbit indices 0 and 2, X on qubit 5
  for (const auto& i : ir.instructions) {
    if (const auto* c = std::get_if<CondI>(&i.op)) {
      EXPECT_EQ(c->condition.kind, CondIR::Kind::Xor);
      ASSERT_EQ(c->body.size(), 1u);
      EXPECT_TRUE(c->elseBody.empty());
      break;
    }
  }
}

TEST(Lowering, NotTopLevel) {
  try {
    lower(parse(bundled::kShor15, "shor"), "QFTDagger");
    FAIL() << "expected NotTopLevel";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "NotTopLevel");
  }
}

TEST(Lowering, UnknownDiagram) {
  try {
    lower(parse(bundled::kBell, "bell"), "Nope");
    FAIL() << "expected UnknownDiagram";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "UnknownDiagram");
  }
}

TEST(Lowering, InliningDepthLimit) {
  std::string text = "model M { ";
  // D0 uses D1 uses ... uses D33 (no cycle, too deep)
  for (int i = 0; i < 34; ++i) {
    if (i == 0) {
      text += "seq Main { qubit q use D1 on (q) } ";
    } else {
      text += "seq D" + std::to_string(i) + "(a) { ";
      if (i < 33) text += "use D" + std::to_string(i + 1) + " on (a) ";
      else text += "gate H on a ";
      text += "} ";
    }
  }
  text += "}";
  try {
    lower(parse(text, "deep"), "Main");
    FAIL() << "expected InliningDepthExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "InliningDepthExceeded");
  }
}

TEST(Lowering, CondDepthLimit) {
  std::string open, close;
  for (int i = 0; i < 9; ++i) {
    open += "alt c == 1 { ";
    close += "} ";
  }
  std::string text =
      "model M { seq Main { qubit q cbit c measure q -> c " + open + "gate X on q " + close + "} }";
  try {
    lower(parse(text, "deep"), "Main");
    FAIL() << "expected CondDepthExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "CondDepthExceeded");
  }
}

TEST(Lowering, DeterministicAcrossRuns) {
  Model m = parse(bundled::kShor15, "shor");
  EXPECT_EQ(lower(m, "PeriodFinding7"), lower(m, "PeriodFinding7"));
}

TEST(Lowering, QubitConservation) {
  for (const auto& bm : bundled::all()) {
    Model m = parse(bm.text, bm.name);
    for (const auto& d : m.sequences) {
      if (d.parameterized()) continue;
      CircuitIR ir = lower(m, d.name);
      EXPECT_EQ(ir.numQubits, int(d.qubitDecls.size())) << bm.name << "/" << d.name;
    }
  }
}

TEST(IrStats, BellDepthChain) {
  CircuitIR ir = lower(parse(bundled::kBell, "bell"), "Main");
  EXPECT_EQ(ir_stats(ir), (IrStats{3, 2, 2, 0}));
}

TEST(IrStats, EmptyCircuit) {
  CircuitIR ir;
  EXPECT_EQ(ir_stats(ir), (IrStats{0, 0, 0, 0}));
}

TEST(IrStats, CondCountsAsOnePlusBodyDepth) {
  // measure q0 -> c; if (c) { x q0; h q0; }  =>  depth 1 (measure) + (1 + 2)
  CircuitIR ir;
  ir.numQubits = 1;
  ir.numCbits = 1;
  ir.qubitNames = {"q0"};
  ir.cbitNames = {"c"};
  ir.instructions.push_back({MeasureI{0, 0}});
  CondI c;
  c.condition = CondIR::leaf(0, 1);
  c.body.push_back({UnitaryI{GateKind::X, {}, {0}, 0}});
  c.body.push_back({UnitaryI{GateKind::H, {}, {0}, 0}});
  ir.instructions.push_back({std::move(c)});
  IrStats s = ir_stats(ir);
  EXPECT_EQ(s.depth, 4);
  EXPECT_EQ(s.gateCount, 2);
  EXPECT_EQ(s.measureCount, 1);
  EXPECT_EQ(s.condBlockCount, 1);
}

TEST(IrStats, BranchesCountOnceAtMax) {
  CircuitIR ir;
  ir.numQubits = 2;
  ir.numCbits = 1;
  ir.qubitNames = {"q0", "q1"};
  ir.cbitNames = {"c"};
  ir.instructions.push_back({MeasureI{0, 0}});
  CondI c;
  c.condition = CondIR::leaf(0, 1);
  c.body.push_back({UnitaryI{GateKind::X, {}, {1}, 0}});
  c.elseBody.push_back({UnitaryI{GateKind::Z, {}, {1}, 0}});
  c.elseBody.push_back({UnitaryI{GateKind::H, {}, {1}, 0}});
  ir.instructions.push_back({std::move(c)});
  IrStats s = ir_stats(ir);
  EXPECT_EQ(s.depth, 1 + 1 + 2);  // measure, then block = 1 + max(1, 2)
  EXPECT_EQ(s.gateCount, 3);      // static count over both branches
  EXPECT_EQ(s.condBlockCount, 1);
}

TEST(IrStats, TeleportPreMeasureEntanglingDepth) {
  CircuitIR ir = lower(parse(bundled::kTeleportCnotDynamic, "tp"), "Main");
  // prefix before the first measurement, entangling (>= 2 qubit) gates only
  CircuitIR prefix;
  prefix.numQubits = ir.numQubits;
  prefix.numCbits = ir.numCbits;
  for (const auto& i : ir.instructions) {
    if (std::holds_alternative<MeasureI>(i.op)) break;
    if (const auto* u = std::get_if<UnitaryI>(&i.op)) {
      if (u->qubits.size() >= 2) prefix.instructions.push_back(i);
    } else if (std::holds_alternative<SwapI>(i.op)) {
      prefix.instructions.push_back(i);
    }
  }
  EXPECT_EQ(prefix.instructions.size(), 5u);  // two Bell-pair CXs + three fusion CXs
  EXPECT_EQ(ir_stats(prefix).depth, 2);
}
