// gforge: command-line front end for presentations of graded simple algebras.

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <string>

#include "gforge/gforge.hpp"

using namespace gforge;
using io::json;

namespace {

struct RunConfig {
  std::string command;
  std::string input, input2;
  int wordBound = 4;
  unsigned long long budget = 10'000'000ULL;
  bool json = false;
  int workers = 0;
};

std::string elemList(const Group& G, const std::vector<Elem>& xs) {
  std::string s = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + G.name(xs[i]);
  return s + "}";
}

/// Flat "key: value" rendering for the text mode.
void textLines(const json& j, const std::string& prefix, std::string& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) textLines(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    return;
  }
  if (j.is_array() && std::any_of(j.begin(), j.end(), [](const json& x) { return x.is_structured(); })) {
    out += prefix + ": " + std::to_string(j.size()) + " entries (see --json)\n";
    return;
  }
  out += prefix + ": " + (j.is_string() ? j.get<std::string>() : j.dump()) + "\n";
}

Presentation loadPresentation(const std::string& path) {
  if (path.empty()) throw ParseError("--input is required");
  return io::parsePresentation(io::readFile(path));
}

json runValidate(const RunConfig& cfg) {
  auto P = loadPresentation(cfg.input);
  auto r = validatePresentation(P);
  return {{"wellformed", r.wellformed}, {"connected", r.connected}, {"problems", r.problems},
          {"dimension", static_cast<long long>(P.H.order()) * P.size() * P.size()}};
}

json runNormalize(const RunConfig& cfg) {
  auto P = loadPresentation(cfg.input);
  auto Q = normalize(P, cfg.wordBound);
  const Group& G = Q.group();
  std::vector<std::string> names;
  for (Elem g : Q.tuple) names.push_back(G.name(g));
  return {{"presentation", io::toJson(Q)}, {"tupleNames", names}, {"lambda", io::toJson(Q.lambda())}};
}

json runInvariants(const RunConfig& cfg) {
  auto P = loadPresentation(cfg.input);
  auto c = computeKNS(P, cfg.wordBound);
  json j = io::toJson(c);
  const Group& G = P.group();
  j["names"] = {{"K", elemList(G, c.K)}, {"N", elemList(G, c.N)}, {"S", elemList(G, c.S)}};
  return j;
}

json runClassify(const RunConfig& cfg) { return io::toJson(classify(loadPresentation(cfg.input), cfg.wordBound)); }

json runIso(const RunConfig& cfg) {
  if (cfg.input2.empty()) throw ParseError("iso needs --input2");
  auto P1 = loadPresentation(cfg.input), P2 = loadPresentation(cfg.input2);
  if (!(P1.group() == P2.group())) throw PreconditionError("presentations are over different group tables");
  auto w = isoWitness(P1, P2);
  json j{{"isomorphic", w.has_value()}};
  if (w) j["witness"] = *w;
  return j;
}

json runIdentity(const RunConfig& cfg) {
  auto P = loadPresentation(cfg.input);
  if (cfg.input2.empty()) throw ParseError("identity needs --input2 with a polynomial");
  auto p = io::parsePolynomial(P.group(), io::readFile(cfg.input2));
  GradedAlgebra A(P);
  IdentityOptions opt;
  opt.budget = cfg.budget;
  opt.workers = cfg.workers;
  return io::toJson(A, isIdentity(p, A, opt));
}

json runWitness(const RunConfig& cfg) {
  auto P = loadPresentation(cfg.input);
  GradedAlgebra A(P);
  auto w = buildWitness(A);
  json j = io::toJson(A, w, checkE0(A, w));
  std::vector<int> id(w.de);
  for (int i = 0; i < w.de; ++i) id[i] = i;
  j["identityNonvanishing"] = nonvanishingWitness(A, w, id).has_value();
  auto chain = computeKNS(P, cfg.wordBound);
  if (chain.n > 1) {
    auto d = primitiveBinomial(P.alpha, chain.n, cfg.wordBound);
    if (!d) throw PreconditionError("no primitive binomial witness within the word bound");
    auto m = buildMProduct(*d, chain.n, chain.sBarImage);
    j["mProduct"] = {{"word", d->word}, {"perm", d->perm}, {"ratio", d->ratio}, {"polynomial", io::toJson(m)},
                     {"partsOverK", decomposeOverField(m, chain.k).size()}};
  }
  return j;
}

json runH2(const RunConfig& cfg) {
  if (cfg.input.empty()) throw ParseError("--input is required");
  json in = io::readFile(cfg.input);
  GroupPtr G = io::parseGroup(io::detail::field(in, "group"));
  SubgroupData H(G, io::parseElems(*G, io::detail::field(in, "subgroup")));
  const int m = io::detail::as<int>(io::detail::field(in, "modulus"), "modulus");
  auto classes = h2Classes(H, m);
  json cs = json::array();
  for (const auto& c : classes) cs.push_back(io::toJson(c));
  return {{"count", classes.size()}, {"modulus", m}, {"classes", cs}};
}

json runKForm(const RunConfig& cfg) {
  GradedAlgebra A(loadPresentation(cfg.input));
  auto f = buildKForm(A, KFormReading::Conjugation, cfg.wordBound);
  json j = io::toJson(f);
  j["labels"] = f.labels;
  return j;
}

json dispatch(const RunConfig& cfg) {
  if (cfg.command == "validate") return runValidate(cfg);
  if (cfg.command == "normalize") return runNormalize(cfg);
  if (cfg.command == "invariants") return runInvariants(cfg);
  if (cfg.command == "classify") return runClassify(cfg);
  if (cfg.command == "iso") return runIso(cfg);
  if (cfg.command == "identity") return runIdentity(cfg);
  if (cfg.command == "witness") return runWitness(cfg);
  if (cfg.command == "h2") return runH2(cfg);
  if (cfg.command == "kform") return runKForm(cfg);
  throw ParseError("unknown command " + cfg.command);
}

const char* kindName(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Budget: return "budget";
    case ErrorKind::Internal: return "internal";
  }
  return "internal";
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"gforge: presentations, invariants and identities of graded simple algebras"};
  app.add_option("command", cfg.command, "validate | normalize | invariants | classify | iso | identity | witness | h2 | kform")
      ->required()
      ->check(CLI::IsMember({"validate", "normalize", "invariants", "classify", "iso", "identity", "witness", "h2", "kform"}));
  app.add_option("--input", cfg.input, "presentation JSON (h2: group, subgroup and modulus)");
  app.add_option("--input2", cfg.input2, "second presentation (iso) or polynomial (identity)");
  app.add_option("--word-bound", cfg.wordBound, "binomial word length bound L")->check(CLI::Range(2, 64));
  app.add_option("--budget", cfg.budget, "identity search budget")->check(CLI::Range(1ULL, ~0ULL));
  app.add_flag("--json", cfg.json, "emit the JSON report");
  app.add_option("--workers", cfg.workers, "worker threads, 0 = hardware concurrency")->check(CLI::Range(0, 1024));
  app.footer("Exit codes: 1 parse error, 2 precondition violation, 3 budget or cap exceeded, 4 internal error.\n"
             "GFORGE_CAPS=order=N,h2=N,algebra=N,designated=N overrides size caps.");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  workerSetting() = cfg.workers;
  try {
    json report = dispatch(cfg);
    if (cfg.json) {
      std::cout << io::dump(report) << "\n";
    } else {
      std::string text;
      textLines(report, "", text);
      std::cout << cfg.command << "\n" << text;
    }
    return 0;
  } catch (const Error& e) {
    if (cfg.json) std::cout << io::dump(json{{"error", kindName(e.kind())}, {"reason", e.what()}}) << "\n";
    else std::cerr << "error (" << kindName(e.kind()) << "): " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    if (cfg.json) std::cout << io::dump(json{{"error", "internal"}, {"reason", e.what()}}) << "\n";
    else std::cerr << "error (internal): " << e.what() << "\n";
    return 4;
  }
}
