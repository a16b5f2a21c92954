#pragma once

#include <map>
#include <string>
#include <vector>

#include "quanuml/source.hpp"

namespace quml {

// ---------------------------------------------------------------------------
// Built-in model library, resolvable through the `examples:` prefix without
// touching the filesystem.
// ---------------------------------------------------------------------------

namespace bundled {

inline constexpr const char* kBell = R"(model Bell {
  seq Main <<Quantum>> {
    qubit q0, q1
    cbit c0, c1
    gate H on q0
    gate X control q0 target q1
    measure q0 -> c0
    measure q1 -> c1
  }
}
)";

inline constexpr const char* kGhz3 = R"(model Ghz3 {
  seq Main <<Quantum>> {
    qubit q0, q1, q2
    cbit c0, c1, c2
    gate H on q0
    gate X control q0 target q1
    gate X control q1 target q2
    measure q0 -> c0
    measure q1 -> c1
    measure q2 -> c2
  }
}
)";

// One Grover iteration over two qubits with the oracle marking |11>; exact
// after a single iteration.
inline constexpr const char* kGrover2 = R"(model Grover2 {
  seq Main <<Quantum>> {
    qubit q0, q1
    cbit c0, c1
    gate H on q0
    gate H on q1
    gate Z control q0 target q1
    gate H on q0
    gate H on q1
    gate X on q0
    gate X on q1
    gate Z control q0 target q1
    gate X on q0
    gate X on q1
    gate H on q0
    gate H on q1
    measure q0 -> c0
    measure q1 -> c1
  }
}
)";

// Ripple full adder on |a=1, b=1, cin=0, cout=0>: sum lands in cin, carry in
// cout, b ends as a^b. Every controlled gate carries its kickback reply to
// document the control relationships.
inline constexpr const char* kFullAdder4 = R"(model FullAdder4 {
  seq Main <<Quantum>> {
    qubit a = |1>, b = |1>, cin, cout
    cbit ma, mb, sum, carry
    gate X control a, b target cout kickback
    gate X control a target b kickback
    gate X control b, cin target cout kickback
    gate X control b target cin kickback
    measure a -> ma
    measure b -> mb
    measure cin -> sum
    measure cout -> carry
  }
}
)";

// Long-range CNOT from q0 to q5 over four ancillas: two Bell pairs, one
// fusion layer, mid-circuit measurement of the ancillas, then parity-driven
// feedforward corrections.
inline constexpr const char* kTeleportCnotDynamic = R"(model TeleportCnotDynamic {
  seq Main <<Quantum>> {
    qubit q0 = |1>, q1, q2, q3, q4, q5
    cbit m1, m2, m3, m4, out0, out5
    gate H on q1
    gate H on q3
    gate X control q1 target q2
    gate X control q3 target q4
    gate X control q0 target q1
    gate X control q2 target q3
    gate X control q4 target q5
    gate H on q2
    gate H on q4
    measure q1 -> m1
    measure q2 -> m2
    measure q3 -> m3
    measure q4 -> m4
    alt m1 == 1 ^ m3 == 1 {
      gate X on q5
    }
    alt m2 == 1 ^ m4 == 1 {
      gate Z on q0
    }
    measure q0 -> out0
    measure q5 -> out5
  }
}
)";

// Period finding for N = 15, one diagram per base. Counting register c0..c2
// (c0 = most significant phase bit), work register t0..t3 (t3 = least
// significant bit) starting at |0001> = 1. Controlled multiplication mod 15
// uses wire rotations (controlled swaps from CX/CCX) plus a controlled
// bitwise complement for the bases congruent to -2^k.
inline constexpr const char* kShor15 = R"(model Shor15 {
  classes {
    class Solution {
      op main()
    }
    class ShorAlgorithm <<Quantum>> {
      attr modulus : Int
      op factor(x : Int) : Int
    }
    class PeriodFinding <<Quantum>> {
      op findPeriod(x : Int) : Int
      circuit PeriodFinding7
    }
    class CalculateFactor {
      op fromOrder(x : Int, r : Int) : Int
    }
    Solution --> ShorAlgorithm
    ShorAlgorithm *--> PeriodFinding
    ShorAlgorithm --> CalculateFactor
  }
  seq QFTDagger(a, b, c) {
    swap a, c
    gate H on c
    gate P(-pi/2) control c target b
    gate H on b
    gate P(-pi/4) control c target a
    gate P(-pi/2) control b target a
    gate H on a
  }
  seq CMul2(k, t0, t1, t2, t3) {
    gate X control t1 target t0
    gate X control k, t0 target t1
    gate X control t1 target t0
    gate X control t2 target t1
    gate X control k, t1 target t2
    gate X control t2 target t1
    gate X control t3 target t2
    gate X control k, t2 target t3
    gate X control t3 target t2
  }
  seq CMul4(k, t0, t1, t2, t3) {
    gate X control t2 target t0
    gate X control k, t0 target t2
    gate X control t2 target t0
    gate X control t3 target t1
    gate X control k, t1 target t3
    gate X control t3 target t1
  }
  seq CMul7(k, t0, t1, t2, t3) {
    gate X control t3 target t2
    gate X control k, t2 target t3
    gate X control t3 target t2
    gate X control t2 target t1
    gate X control k, t1 target t2
    gate X control t2 target t1
    gate X control t1 target t0
    gate X control k, t0 target t1
    gate X control t1 target t0
    gate X control k target t0, t1, t2, t3
  }
  seq CMul8(k, t0, t1, t2, t3) {
    gate X control t3 target t2
    gate X control k, t2 target t3
    gate X control t3 target t2
    gate X control t2 target t1
    gate X control k, t1 target t2
    gate X control t2 target t1
    gate X control t1 target t0
    gate X control k, t0 target t1
    gate X control t1 target t0
  }
  seq CMul11(k, t0, t1, t2, t3) {
    gate X control t2 target t0
    gate X control k, t0 target t2
    gate X control t2 target t0
    gate X control t3 target t1
    gate X control k, t1 target t3
    gate X control t3 target t1
    gate X control k target t0, t1, t2, t3
  }
  seq CMul13(k, t0, t1, t2, t3) {
    gate X control t1 target t0
    gate X control k, t0 target t1
    gate X control t1 target t0
    gate X control t2 target t1
    gate X control k, t1 target t2
    gate X control t2 target t1
    gate X control t3 target t2
    gate X control k, t2 target t3
    gate X control t3 target t2
    gate X control k target t0, t1, t2, t3
  }
  seq PeriodFinding2 <<Quantum>> {
    qubit c0, c1, c2, t0, t1, t2, t3 = |1>
    cbit m0, m1, m2, r0, r1, r2, r3
    gate H on c0
    gate H on c1
    gate H on c2
    use CMul2 on (c2, t0, t1, t2, t3)
    use CMul4 on (c1, t0, t1, t2, t3)
    use QFTDagger on (c0, c1, c2)
    measure c0 -> m0
    measure c1 -> m1
    measure c2 -> m2
    measure t0 -> r0
    measure t1 -> r1
    measure t2 -> r2
    measure t3 -> r3
  }
  seq PeriodFinding4 <<Quantum>> {
    qubit c0, c1, c2, t0, t1, t2, t3 = |1>
    cbit m0, m1, m2, r0, r1, r2, r3
    gate H on c0
    gate H on c1
    gate H on c2
    use CMul4 on (c2, t0, t1, t2, t3)
    use QFTDagger on (c0, c1, c2)
    measure c0 -> m0
    measure c1 -> m1
    measure c2 -> m2
    measure t0 -> r0
    measure t1 -> r1
    measure t2 -> r2
    measure t3 -> r3
  }
  seq PeriodFinding7 <<Quantum>> {
    qubit c0, c1, c2, t0, t1, t2, t3 = |1>
    cbit m0, m1, m2, r0, r1, r2, r3
    gate H on c0
    gate H on c1
    gate H on c2
    use CMul7 on (c2, t0, t1, t2, t3)
    use CMul4 on (c1, t0, t1, t2, t3)
    use QFTDagger on (c0, c1, c2)
    measure c0 -> m0
    measure c1 -> m1
    measure c2 -> m2
    measure t0 -> r0
    measure t1 -> r1
    measure t2 -> r2
    measure t3 -> r3
  }
  seq PeriodFinding8 <<Quantum>> {
    qubit c0, c1, c2, t0, t1, t2, t3 = |1>
    cbit m0, m1, m2, r0, r1, r2, r3
    gate H on c0
    gate H on c1
    gate H on c2
    use CMul8 on (c2, t0, t1, t2, t3)
    use CMul4 on (c1, t0, t1, t2, t3)
    use QFTDagger on (c0, c1, c2)
    measure c0 -> m0
    measure c1 -> m1
    measure c2 -> m2
    measure t0 -> r0
    measure t1 -> r1
    measure t2 -> r2
    measure t3 -> r3
  }
  seq PeriodFinding11 <<Quantum>> {
    qubit c0, c1, c2, t0, t1, t2, t3 = |1>
    cbit m0, m1, m2, r0, r1, r2, r3
    gate H on c0
    gate H on c1
    gate H on c2
    use CMul11 on (c2, t0, t1, t2, t3)
    use QFTDagger on (c0, c1, c2)
    measure c0 -> m0
    measure c1 -> m1
    measure c2 -> m2
    measure t0 -> r0
    measure t1 -> r1
    measure t2 -> r2
    measure t3 -> r3
  }
  seq PeriodFinding13 <<Quantum>> {
    qubit c0, c1, c2, t0, t1, t2, t3 = |1>
    cbit m0, m1, m2, r0, r1, r2, r3
    gate H on c0
    gate H on c1
    gate H on c2
    use CMul13 on (c2, t0, t1, t2, t3)
    use CMul4 on (c1, t0, t1, t2, t3)
    use QFTDagger on (c0, c1, c2)
    measure c0 -> m0
    measure c1 -> m1
    measure c2 -> m2
    measure t0 -> r0
    measure t1 -> r1
    measure t2 -> r2
    measure t3 -> r3
  }
}
)";

struct BundledModel {
  const char* name;
  const char* text;
  const char* defaultDiagram;  // empty = must be named explicitly
};

inline const std::vector<BundledModel>& all() {
  static const std::vector<BundledModel> models = {
      {"bell", kBell, "Main"},
      {"ghz3", kGhz3, "Main"},
      {"grover2", kGrover2, "Main"},
      {"fulladder4", kFullAdder4, "Main"},
      {"teleport-cnot-dynamic", kTeleportCnotDynamic, "Main"},
      {"shor15", kShor15, ""},
  };
  return models;
}

inline const BundledModel* find(const std::string& name) {
  for (const auto& m : all())
    if (name == m.name) return &m;
  return nullptr;
}

inline std::string text_or_throw(const std::string& name) {
  const BundledModel* m = find(name);
  if (!m) {
    throw Error("UnknownExample", SourceSpan{"examples:" + name, 1, 1, 1, 1},
                "no bundled model named '" + name + "'");
  }
  return m->text;
}

}  // namespace bundled
}  // namespace quml
