#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "quanuml/bundled.hpp"
#include "quanuml/emit_diagram.hpp"
#include "quanuml/emit_json.hpp"
#include "quanuml/emit_qasm3.hpp"
#include "quanuml/lowering.hpp"
#include "quanuml/metrics.hpp"
#include "quanuml/parser.hpp"
#include "quanuml/printer.hpp"
#include "quanuml/shor.hpp"
#include "quanuml/simulator.hpp"
#include "quanuml/validator.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string load_input(const std::string& spec) {
  constexpr const char* kPrefix = "examples:";
  if (spec.rfind(kPrefix, 0) == 0) {
    return quml::bundled::text_or_throw(spec.substr(std::string(kPrefix).size()));
  }
  std::ifstream in(spec, std::ios::binary);
  if (!in) {
    throw quml::Error("FileNotFound", quml::SourceSpan{spec, 1, 1, 1, 1}, "cannot open file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

quml::Model parse_input(const std::string& spec) {
  return quml::parse(load_input(spec), spec);
}

/// Picks the diagram to operate on: an explicit --seq, or the single
/// non-parameterized diagram when the model has exactly one.
std::string pick_diagram(const quml::Model& model, const std::string& requested) {
  if (!requested.empty()) {
    if (!model.find_sequence(requested)) {
      throw quml::Error("UnknownDiagram", model.span,
                        "no sequence diagram named '" + requested + "'");
    }
    return requested;
  }
  std::vector<std::string> topLevel;
  for (const auto& d : model.sequences)
    if (!d.parameterized()) topLevel.push_back(d.name);
  if (topLevel.size() == 1) return topLevel.front();
  std::string names;
  for (const auto& n : topLevel) names += (names.empty() ? "" : ", ") + n;
  throw UsageError("--seq is required; top-level diagrams: " + (names.empty() ? "(none)" : names));
}

/// Parse + resolve + validate; prints diagnostics to stderr. Returns the
/// diagnostics so callers can gate on errors.
std::vector<quml::Diagnostic> check_model(const quml::Model& model, bool printText = true) {
  auto diagnostics = quml::validate(model);
  if (printText) {
    for (const auto& d : diagnostics) std::cerr << d.render() << "\n";
  }
  return diagnostics;
}

void require_valid(const quml::Model& model) {
  if (quml::has_errors(check_model(model))) {
    throw quml::Error("Invalid", model.span, "model has validation errors");
  }
}

void write_payload(const std::string& payload, const std::string& outPath) {
  if (outPath.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(outPath, std::ios::binary);
  if (!out) {
    throw quml::Error("FileNotFound", quml::SourceSpan{outPath, 1, 1, 1, 1},
                      "cannot open output file");
  }
  out << payload;
}

std::string format_probability_lines(const quml::OutcomeDistribution& dist, bool counts) {
  std::string out;
  char buf[64];
  for (const auto& [key, value] : dist) {
    if (counts) {
      std::snprintf(buf, sizeof(buf), "%s %lld\n", key.c_str(), static_cast<long long>(value));
    } else {
      std::snprintf(buf, sizeof(buf), "%s %.12f\n", key.c_str(), value);
    }
    out += buf;
  }
  return out;
}

std::string distribution_json(const quml::OutcomeDistribution& dist) {
  nlohmann::json j(dist);
  return j.dump() + "\n";
}

int run_shor(uint64_t n, std::optional<uint64_t> x, uint64_t seed, const std::string& backendName) {
  quml::OrderBackend backend = backendName == "oracle" ? quml::OrderBackend::ClassicalOracle
                                                       : quml::OrderBackend::SimulatedCircuit;
  quml::FactorResult r = quml::factor(n, x, seed, backend);

  std::printf("N = %llu\n", static_cast<unsigned long long>(n));
  if (x) std::printf("x = %llu (forced)\n", static_cast<unsigned long long>(*x));
  std::printf("backend: %s\n", backendName.c_str());
  if (!r.transcript.empty()) {
    std::printf("order finding transcript:\n");
    for (const auto& t : r.transcript) {
      if (!t.note.empty()) {
        std::printf("  x=%llu %s\n", static_cast<unsigned long long>(t.x), t.note.c_str());
      } else if (t.measuredPhaseNumerator >= 0) {
        std::printf("  x=%llu m=%lld candidate r=%llu %s\n",
                    static_cast<unsigned long long>(t.x), t.measuredPhaseNumerator,
                    static_cast<unsigned long long>(t.candidateOrder),
                    t.accepted ? "accepted" : "rejected");
      }
    }
  }
  switch (r.status) {
    case quml::FactorStatus::TrivialEven:
      std::printf("N is even\nfactors: %llu x %llu\n", static_cast<unsigned long long>(r.p),
                  static_cast<unsigned long long>(r.q));
      return kExitOk;
    case quml::FactorStatus::PerfectPower:
      std::printf("perfect power: %llu = %llu^%llu\nfactor: %llu\n",
                  static_cast<unsigned long long>(n), static_cast<unsigned long long>(r.p),
                  static_cast<unsigned long long>(r.q), static_cast<unsigned long long>(r.p));
      return kExitOk;
    case quml::FactorStatus::GcdShortcut:
      std::printf("gcd shortcut: gcd(%llu, %llu) = %llu\nfactors: %llu x %llu\n",
                  static_cast<unsigned long long>(r.usedBase), static_cast<unsigned long long>(n),
                  static_cast<unsigned long long>(r.p), static_cast<unsigned long long>(r.p),
                  static_cast<unsigned long long>(r.q));
      return kExitOk;
    case quml::FactorStatus::Factored: {
      uint64_t y = quml::powmod(r.usedBase, r.order / 2, n);
      std::printf("order r = %llu\n", static_cast<unsigned long long>(r.order));
      std::printf("%llu^%llu mod %llu = %llu\n", static_cast<unsigned long long>(r.usedBase),
                  static_cast<unsigned long long>(r.order / 2), static_cast<unsigned long long>(n),
                  static_cast<unsigned long long>(y));
      std::printf("gcd(%llu - 1, %llu) = %llu\n", static_cast<unsigned long long>(y),
                  static_cast<unsigned long long>(n),
                  static_cast<unsigned long long>(std::gcd(y - 1, n)));
      std::printf("gcd(%llu + 1, %llu) = %llu\n", static_cast<unsigned long long>(y),
                  static_cast<unsigned long long>(n),
                  static_cast<unsigned long long>(std::gcd(y + 1, n)));
      std::printf("factors: %llu x %llu\n", static_cast<unsigned long long>(r.p),
                  static_cast<unsigned long long>(r.q));
      return kExitOk;
    }
    case quml::FactorStatus::Failed:
      std::printf("failed after %d attempt%s\n", r.attempts, r.attempts == 1 ? "" : "s");
      return kExitError;
  }
  return kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QuanUML compiler toolchain: parse, validate, lower, emit and simulate "
               "quantum-classical sequence-diagram models"};
  app.require_subcommand(1);

  std::string inFile, seqName, target = "qasm3", outPath, backendName = "sim";
  bool jsonOut = false, exactSim = false;
  long long shots = 0;
  uint64_t seed = 0, shorN = 0;
  std::optional<uint64_t> shorX;

  auto* cmdCheck = app.add_subcommand("check", "Parse and validate a model");
  cmdCheck->add_option("file", inFile)->required();
  cmdCheck->add_flag("--json", jsonOut, "machine-readable diagnostics on stdout");

  auto* cmdFmt = app.add_subcommand("fmt", "Pretty-print a model in canonical form");
  cmdFmt->add_option("file", inFile)->required();

  auto* cmdRender = app.add_subcommand("render", "Emit sequence-diagram text");
  cmdRender->add_option("file", inFile)->required();
  cmdRender->add_option("--seq", seqName, "diagram name");

  auto* cmdCompile = app.add_subcommand("compile", "Lower a diagram and emit code");
  cmdCompile->add_option("file", inFile)->required();
  cmdCompile->add_option("--seq", seqName, "diagram name");
  cmdCompile->add_option("--target", target, "qasm3 or ir-json")
      ->check(CLI::IsMember({"qasm3", "ir-json"}));
  cmdCompile->add_option("-o,--output", outPath, "output file (default stdout)");

  auto* cmdSim = app.add_subcommand("sim", "Simulate a diagram");
  cmdSim->add_option("file", inFile)->required();
  cmdSim->add_option("--seq", seqName, "diagram name");
  auto* exactFlag = cmdSim->add_flag("--exact", exactSim, "exact branch enumeration (default)");
  auto* shotsOpt = cmdSim->add_option("--shots", shots, "sample this many shots");
  cmdSim->add_option("--seed", seed, "sampling seed");
  cmdSim->add_flag("--json", jsonOut, "JSON output");
  shotsOpt->excludes(exactFlag);

  auto* cmdMetrics = app.add_subcommand("metrics", "Element counts under both rule sets");
  cmdMetrics->add_option("file", inFile)->required();
  cmdMetrics->add_option("--seq", seqName, "diagram name");
  cmdMetrics->add_flag("--json", jsonOut, "JSON output");

  auto* cmdShor = app.add_subcommand("shor", "Factor N with the period-finding driver");
  cmdShor->add_option("--n", shorN, "number to factor")->required();
  uint64_t xValue = 0;
  auto* xOpt = cmdShor->add_option("--x", xValue, "forced base");
  cmdShor->add_option("--seed", seed, "base-selection seed");
  cmdShor->add_option("--backend", backendName, "sim or oracle")
      ->check(CLI::IsMember({"sim", "oracle"}));

  auto* cmdExamples = app.add_subcommand("examples", "Bundled model library");
  std::string examplesAction = "list", examplesArg;
  cmdExamples->add_option("action", examplesAction)->check(CLI::IsMember({"list", "show", "export"}));
  cmdExamples->add_option("name", examplesArg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*cmdCheck) {
      quml::Model model = parse_input(inFile);
      auto diagnostics = check_model(model, !jsonOut);
      if (jsonOut) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& d : diagnostics) {
          arr.push_back({{"code", d.code},
                         {"severity", d.severity == quml::Severity::Error ? "error" : "warning"},
                         {"message", d.message},
                         {"file", d.span.file},
                         {"line", d.span.startLine},
                         {"col", d.span.startCol}});
        }
        std::cout << arr.dump() << "\n";
      }
      return quml::has_errors(diagnostics) ? kExitError : kExitOk;
    }

    if (*cmdFmt) {
      std::cout << quml::pretty_print(parse_input(inFile));
      return kExitOk;
    }

    if (*cmdRender) {
      quml::Model model = parse_input(inFile);
      std::cout << quml::emit_diagram_text(model, pick_diagram(model, seqName));
      return kExitOk;
    }

    if (*cmdCompile) {
      quml::Model model = parse_input(inFile);
      std::string diagram = pick_diagram(model, seqName);
      require_valid(model);
      quml::CircuitIR ir = quml::lower(model, diagram);
      write_payload(target == "qasm3" ? quml::emit_qasm3(ir) : quml::emit_ir_json(ir), outPath);
      return kExitOk;
    }

    if (*cmdSim) {
      quml::Model model = parse_input(inFile);
      std::string diagram = pick_diagram(model, seqName);
      require_valid(model);
      quml::CircuitIR ir = quml::lower(model, diagram);
      quml::OutcomeDistribution dist;
      bool counts = false;
      if (shotsOpt->count() > 0) {
        dist = quml::sample(ir, shots, seed);
        counts = true;
      } else {
        dist = quml::exact_distribution(quml::run_exact(ir));
      }
      std::cout << (jsonOut ? distribution_json(dist) : format_probability_lines(dist, counts));
      return kExitOk;
    }

    if (*cmdMetrics) {
      quml::Model model = parse_input(inFile);
      std::string diagram = pick_diagram(model, seqName);
      quml::MetricsComparison cmp = quml::compare(model, diagram);
      if (jsonOut) {
        auto countJson = [](const quml::ElementCount& c) {
          return nlohmann::json{{"lifelines", c.lifelines},
                                {"messages", c.messages},
                                {"fragments", c.fragments},
                                {"stereotypeLabels", c.stereotypeLabels},
                                {"total", c.total}};
        };
        nlohmann::json j{{"quanuml", countJson(cmp.quanuml)},
                         {"baseline", countJson(cmp.baseline)},
                         {"ratio", cmp.ratio}};
        std::cout << j.dump() << "\n";
      } else {
        std::printf("metric             quanuml  baseline\n");
        std::printf("lifelines         %8d  %8d\n", cmp.quanuml.lifelines, cmp.baseline.lifelines);
        std::printf("messages          %8d  %8d\n", cmp.quanuml.messages, cmp.baseline.messages);
        std::printf("fragments         %8d  %8d\n", cmp.quanuml.fragments, cmp.baseline.fragments);
        std::printf("stereotype-labels %8d  %8d\n", cmp.quanuml.stereotypeLabels,
                    cmp.baseline.stereotypeLabels);
        std::printf("total             %8d  %8d\n", cmp.quanuml.total, cmp.baseline.total);
        std::printf("ratio %.6f\n", cmp.ratio);
      }
      return kExitOk;
    }

    if (*cmdShor) {
      if (xOpt->count() > 0) shorX = xValue;
      return run_shor(shorN, shorX, seed, backendName);
    }

    if (*cmdExamples) {
      if (examplesAction == "list") {
        for (const auto& m : quml::bundled::all()) std::cout << m.name << "\n";
        return kExitOk;
      }
      if (examplesArg.empty()) {
        throw UsageError("examples " + examplesAction + " requires a name argument");
      }
      if (examplesAction == "show") {
        std::cout << quml::bundled::text_or_throw(examplesArg);
        return kExitOk;
      }
      // export
      std::filesystem::create_directories(examplesArg);
      for (const auto& m : quml::bundled::all()) {
        std::ofstream out(std::filesystem::path(examplesArg) / (std::string(m.name) + ".quml"),
                          std::ios::binary);
        out << m.text;
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const quml::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}
