#include <gtest/gtest.h>

#include "quanuml/bundled.hpp"
#include "quanuml/parser.hpp"
#include "quanuml/printer.hpp"
#include "quanuml/resolve.hpp"
#include "test_support.hpp"

using namespace quml;

namespace {
const char* kBellOneLiner =
    "model Bell { seq Main <<Quantum>> { qubit q0, q1 cbit c0, c1 gate H on q0 "
    "gate X control q0 target q1 measure q0 -> c0 measure q1 -> c1 } }";
}

TEST(Parser, BellOneLiner) {
  Model m = parse(kBellOneLiner, "bell.quml");
  EXPECT_EQ(m.name, "Bell");
  ASSERT_EQ(m.sequences.size(), 1u);
  const SeqDiagram& d = m.sequences[0];
  EXPECT_EQ(d.name, "Main");
  EXPECT_TRUE(d.stereotypes.count(Stereotype::Quantum));
  EXPECT_EQ(d.qubitDecls.size(), 2u);
  EXPECT_EQ(d.cbitDecls.size(), 2u);
  EXPECT_EQ(d.events.size(), 4u);  // H, CX, two measures; declarations are not events
  EXPECT_TRUE(std::holds_alternative<SingleGate>(d.events[0].body));
  EXPECT_TRUE(std::holds_alternative<MultiGate>(d.events[1].body));
  EXPECT_TRUE(std::holds_alternative<MeasureEvent>(d.events[2].body));
  EXPECT_TRUE(std::holds_alternative<MeasureEvent>(d.events[3].body));
}

TEST(Parser, EmptyInput) {
  try {
    parse("", "empty.quml");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    ASSERT_FALSE(e.expected().empty());
    EXPECT_NE(e.expected()[0].find("model"), std::string::npos);
  }
}

TEST(Parser, SyntaxOnlyPhaseSeparation) {
  // An undeclared qubit parses fine; resolution is a separate pass.
  Model m = parse("model M { seq Main { gate H on q0 } }", "t");
  EXPECT_EQ(m.sequences[0].events.size(), 1u);
  EXPECT_THROW(resolve(m), Error);
}

TEST(Parser, RejectsByteOrderMark) {
  std::string bom = "\xEF\xBB\xBF";
  EXPECT_THROW(parse(bom + "model M { }", "t"), ParseError);
}

TEST(Parser, UnknownStereotypeIsParseError) {
  for (const char* tag : {"Entangled", "QUBIT", "quantum", "q"}) {
    std::string text = std::string("model M { seq Main <<") + tag + ">> { qubit q0 } }";
    EXPECT_THROW(parse(text, "t"), ParseError) << tag;
  }
}

TEST(Parser, UnknownGateIsParseError) {
  EXPECT_THROW(parse("model M { seq Main { qubit q gate CNOT on q } }", "t"), ParseError);
  EXPECT_THROW(parse("model M { seq Main { qubit q gate h on q } }", "t"), ParseError);
}

TEST(Parser, AngleArityEnforced) {
  // H takes no angle: the '(' can only be a syntax error.
  EXPECT_THROW(parse("model M { seq Main { qubit q gate H(pi/2) on q } }", "t"), ParseError);
  // RX requires one.
  EXPECT_THROW(parse("model M { seq Main { qubit q gate RX on q } }", "t"), ParseError);
}

TEST(Parser, ControlledFormOnlyForXZP) {
  EXPECT_THROW(parse("model M { seq Main { qubit a, b gate H control a target b } }", "t"),
               ParseError);
  EXPECT_NO_THROW(parse("model M { seq Main { qubit a, b gate P(pi/2) control a target b } }", "t"));
}

TEST(Parser, AngleForms) {
  Model m = parse("model M { seq Main { qubit q "
                  "gate P(2pi/8) on q gate P(pi/4) on q gate P(-pi) on q gate P(3pi) on q "
                  "gate P(0.5) on q gate P(-0.25) on q } }",
                  "t");
  const auto& ev = m.sequences[0].events;
  EXPECT_EQ(*std::get<SingleGate>(ev[0].body).angle, Angle::rational(1, 4));
  EXPECT_EQ(*std::get<SingleGate>(ev[1].body).angle, Angle::rational(1, 4));
  EXPECT_EQ(*std::get<SingleGate>(ev[2].body).angle, Angle::rational(-1, 1));
  EXPECT_EQ(*std::get<SingleGate>(ev[3].body).angle, Angle::rational(3, 1));
  EXPECT_EQ(*std::get<SingleGate>(ev[4].body).angle, Angle::from_radians(0.5));
  EXPECT_EQ(*std::get<SingleGate>(ev[5].body).angle, Angle::from_radians(-0.25));
}

TEST(Parser, AngleRejectsBareIntegerAndZeroDenominator) {
  EXPECT_THROW(parse("model M { seq Main { qubit q gate P(2) on q } }", "t"), ParseError);
  EXPECT_THROW(parse("model M { seq Main { qubit q gate P(1pi/0) on q } }", "t"), ParseError);
}

TEST(Parser, MultiControlsAndKickback) {
  Model m = parse("model M { seq Main { qubit a, b, t "
                  "gate X control a, b target t kickback } }",
                  "t");
  const auto& g = std::get<MultiGate>(m.sequences[0].events[0].body);
  EXPECT_EQ(g.controls, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(g.targets, (std::vector<std::string>{"t"}));
  EXPECT_TRUE(g.kickback);
}

TEST(Parser, AltConditionGrammar) {
  Model m = parse("model M { seq Main { qubit q cbit a, b, c "
                  "alt a == 1 ^ b == 0 && (c == 1 ^ a == 0) { gate X on q } else { gate Z on q } } }",
                  "t");
  const auto& alt = std::get<AltEvent>(m.sequences[0].events[0].body);
  EXPECT_EQ(alt.condition.kind, CondExpr::Kind::Xor);
  EXPECT_EQ(alt.thenEvents.size(), 1u);
  EXPECT_EQ(alt.elseEvents.size(), 1u);
  // '&&' binds tighter than '^': rhs of the xor is the && node
  EXPECT_EQ(alt.condition.kids[1].kind, CondExpr::Kind::And);
}

TEST(Parser, ParameterizedDiagramCannotDeclareQubits) {
  EXPECT_THROW(parse("model M { seq S(a) { qubit q gate H on q } }", "t"), ParseError);
  EXPECT_NO_THROW(parse("model M { seq S(a) { cbit k gate H on a measure a -> k } }", "t"));
}

TEST(Parser, ClassBlock) {
  Model m = parse("model M { classes { "
                  "class Solution { op main() } "
                  "class Algo <<Quantum>> { attr n : Int op run(x : Int) : Int circuit Main } "
                  "Solution --> Algo "
                  "Algo --|> Solution "
                  "Solution *--> Algo "
                  "} seq Main { qubit q cbit c gate H on q measure q -> c } }",
                  "t");
  ASSERT_EQ(m.classes.size(), 2u);
  EXPECT_EQ(m.classes[1].attributes.size(), 1u);
  EXPECT_EQ(m.classes[1].operations.size(), 1u);
  EXPECT_EQ(m.classes[1].operations[0].params.size(), 1u);
  EXPECT_EQ(*m.classes[1].operations[0].returnType, "Int");
  EXPECT_EQ(*m.classes[1].circuitRef, "Main");
  ASSERT_EQ(m.relations.size(), 3u);
  EXPECT_EQ(m.relations[0].kind, RelationKind::Association);
  EXPECT_EQ(m.relations[1].kind, RelationKind::Generalization);
  EXPECT_EQ(m.relations[2].kind, RelationKind::Composition);
}

TEST(Parser, LineComments) {
  Model m = parse("model M { // comment\n seq Main { qubit q // trailing\n gate H on q } }", "t");
  EXPECT_EQ(m.sequences[0].events.size(), 1u);
}

TEST(Parser, ErrorSpansWithinInput) {
  const char* text = "model M {\n  seq Main {\n    qubit q\n    gate H onn q\n  }\n}";
  try {
    parse(text, "t");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    int lines = 1;
    for (const char* p = text; *p; ++p) lines += *p == '\n';
    EXPECT_GE(e.span().startLine, 1);
    EXPECT_LE(e.span().startLine, lines);
    EXPECT_GE(e.span().startCol, 1);
  }
}

TEST(Parser, RoundTripBundledModels) {
  for (const auto& bm : bundled::all()) {
    Model m = parse(bm.text, bm.name);
    std::string printed = pretty_print(m);
    Model again = parse(printed, bm.name);
    EXPECT_EQ(again, canonicalize(m)) << bm.name;
    // and printing is a fixpoint
    EXPECT_EQ(pretty_print(again), printed) << bm.name;
  }
}

TEST(Parser, RoundTripRandomModels) {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    testsup::ModelGen gen(seed);
    Model m = gen.model();
    std::string printed = pretty_print(m);
    Model again;
    try {
      again = parse(printed, "gen");
    } catch (const ParseError& e) {
      FAIL() << "seed " << seed << ": " << e.what() << "\n" << printed;
    }
    EXPECT_EQ(again, canonicalize(m)) << "seed " << seed << "\n" << printed;
  }
}

TEST(Parser, TotalityOnRandomBytes) {
  std::mt19937_64 gen(1234);
  for (int iter = 0; iter < 500; ++iter) {
    size_t len = gen() % 200;
    std::string text;
    for (size_t i = 0; i < len; ++i) text += char(gen() % 256);
    try {
      parse(text, "fuzz");
    } catch (const ParseError&) {
      // expected outcome for junk
    }
  }
  SUCCEED();
}

TEST(Parser, TotalityOnTruncatedAndMutatedInput) {
  std::string base = bundled::kBell;
  for (size_t cut = 0; cut <= base.size(); cut += 3) {
    try {
      parse(base.substr(0, cut), "fuzz");
    } catch (const ParseError&) {
    }
  }
  std::mt19937_64 gen(99);
  for (int iter = 0; iter < 300; ++iter) {
    std::string text = base;
    text[gen() % text.size()] = char(gen() % 256);
    try {
      parse(text, "fuzz");
    } catch (const ParseError&) {
    }
  }
  SUCCEED();
}
