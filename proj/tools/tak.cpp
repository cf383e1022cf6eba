// tak: proof checking, finite-model evaluation and search, pushouts, and
// canonical formatting for transition-algebra documents.
//
// Exit codes: 0 success (all proofs accepted / all sentences true / model
// found / legs disjoint), 1 negative outcome (rejection, false sentence,
// search exhausted, entangled legs), 2 usage, parse or budget failure.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tak/surface.hpp"

using namespace tak;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string ext_of(const std::string& path) {
  size_t slash = path.find_last_of('/');
  size_t dot = path.rfind('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return "";
  return path.substr(dot);
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << text;
}

// One symbol per line, matching the document map syntax.
void print_maps(std::string& out, const GenMorphism& m, const std::string& pad) {
  for (const auto& [a, b] : m.sort_map) out += pad + "map sort " + a + " => " + b + "\n";
  for (const auto& [f, img] : m.func_map) {
    bool plain = true;
    for (size_t i = 0; i < img.args.size(); ++i)
      if (!is_hole(img.args[i]) || img.args[i].sym != "$" + std::to_string(i + 1))
        plain = false;
    out += pad + "map func " + f + " => " + (plain ? img.sym : pretty(img)) + "\n";
  }
  for (const auto& [l, img] : m.label_map)
    out += pad + "map label " + l + " => " + pretty(img) + "\n";
}

struct CliError : std::runtime_error {
  explicit CliError(const std::string& what) : std::runtime_error(what) {}
};

TheoryDoc load_theory(const std::string& path) {
  try {
    return parse_theory(slurp(path));
  } catch (const ParseError& e) {
    throw CliError(path + ":" + e.what());
  }
}

int run_check(const std::string& theory_path, const std::string& mode,
              const std::string& rules, const std::vector<std::string>& files) {
  TheoryDoc th = load_theory(theory_path);
  if (files.empty()) {
    fputs("0 proofs\n", stdout);
    return 0;
  }
  bool all_ok = true;
  for (const std::string& f : files) {
    ProofDoc doc;
    try {
      doc = parse_proof(slurp(f), &th);
    } catch (const ParseError& e) {
      throw CliError(f + ":" + e.what());
    }
    if (mode == "classical") doc.intuitionistic = false;
    if (mode == "int") doc.intuitionistic = true;
    if (rules == "ind") doc.ruleset = RuleSet::Ind;
    if (rules == "kel") doc.ruleset = RuleSet::Kel;
    Verdict v = check_proof(th.sig, doc);
    if (v.ok) {
      std::printf("ACCEPT %s %s\n", f.c_str(), doc.name.c_str());
    } else {
      all_ok = false;
      std::string where = v.node_path.empty() ? "root" : v.node_path;
      std::printf("REJECT %s %s at %s", f.c_str(), doc.name.c_str(), where.c_str());
      if (!v.rule.empty()) std::printf(" (%s)", v.rule.c_str());
      std::printf(": %s\n", v.message.c_str());
    }
  }
  return all_ok ? 0 : 1;
}

int run_eval(const std::string& theory_path, const std::string& model_path,
             const std::string& semantics, const std::vector<std::string>& sents) {
  TheoryDoc th = load_theory(theory_path);
  ModelDoc md;
  try {
    md = parse_model(slurp(model_path), th);
  } catch (const ParseError& e) {
    throw CliError(model_path + ":" + e.what());
  }
  KleeneModel m = semantics == "ta" ? standard(md.model.base) : md.model;
  bool all_true = true;
  for (const std::string& s : sents) {
    Sentence sen;
    try {
      sen = parse_sentence(s, th.sig, &th);
    } catch (const ParseError& e) {
      throw CliError("sentence '" + s + "': " + e.what());
    }
    bool v;
    try {
      v = satisfies(m, sen);
    } catch (const BudgetError& e) {
      throw CliError(std::string("budget: ") + e.what());
    }
    all_true = all_true && v;
    std::printf("%s\n", v ? "true" : "false");
  }
  return all_true ? 0 : 1;
}

int run_search(const std::string& theory_path, uint32_t bound,
               const std::string& out_path, const std::vector<std::string>& sents) {
  TheoryDoc th = load_theory(theory_path);
  std::vector<Sentence> require_true;
  for (const auto& [n, s] : th.axioms) {
    (void)n;
    require_true.push_back(s);
  }
  std::vector<Sentence> require_false;
  for (const std::string& s : sents) {
    try {
      require_false.push_back(parse_sentence(s, th.sig, &th));
    } catch (const ParseError& e) {
      throw CliError("sentence '" + s + "': " + e.what());
    }
  }
  SearchOutcome outcome;
  try {
    outcome = bounded_model_search(th.sig, require_true, require_false, bound);
  } catch (const BudgetError& e) {
    throw CliError(std::string("budget: ") + e.what());
  }
  if (!outcome.model) {
    emit(out_path, "exhausted\n");
    return 1;
  }
  ModelDoc found;
  found.name = "witness";
  found.theory = th.name;
  found.model = standard(std::move(*outcome.model));
  emit(out_path, pretty(found));
  return 0;
}

int run_pushout(const std::string& file, const std::string& out_path) {
  CospanDoc doc;
  try {
    doc = parse_cospan(slurp(file));
  } catch (const ParseError& e) {
    throw CliError(file + ":" + e.what());
  }
  PushoutResult p = pushout(doc.cospan);
  DisjointReport rep = is_disjoint(doc.cospan);
  std::string text = "pushout " + doc.name + "\n\n" + pretty(p.sig) + "\nleft\n";
  print_maps(text, p.inj0, "  ");
  text += "\nright\n";
  print_maps(text, p.inj1, "  ");
  text += "\ndisjoint: ";
  if (rep.disjoint) {
    text += "yes\n";
  } else {
    text += "no (witness " + *rep.witness + ")\n";
  }
  emit(out_path, text);
  return rep.disjoint ? 0 : 1;
}

int run_fmt(const std::string& theory_path, const std::string& out_path,
            const std::vector<std::string>& files) {
  std::string text;
  const TheoryDoc* th = nullptr;
  TheoryDoc th_store;
  if (!theory_path.empty()) {
    th_store = load_theory(theory_path);
    th = &th_store;
  }
  for (const std::string& f : files) {
    std::string ext = ext_of(f);
    std::string body = slurp(f);
    try {
      if (ext == ".ta") {
        text += pretty(parse_theory(body));
      } else if (ext == ".tap") {
        if (!th) throw CliError(f + ": proof scripts need --theory");
        text += pretty(parse_proof(body, th));
      } else if (ext == ".tam") {
        if (!th) throw CliError(f + ": models need --theory");
        text += pretty(parse_model(body, *th));
      } else if (ext == ".tac") {
        text += pretty(parse_cospan(body));
      } else {
        throw CliError(f + ": unknown document kind '" + ext + "'");
      }
    } catch (const ParseError& e) {
      throw CliError(f + ":" + e.what());
    }
  }
  emit(out_path, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transition-algebra proof checker and finite-model workbench"};
  app.require_subcommand(1);

  std::string theory_path, mode, rules, semantics = "tak", out_path, model_path,
      cospan_path;
  uint32_t bound = 3;
  std::vector<std::string> files, sents;

  CLI::App* check = app.add_subcommand("check", "check proof scripts");
  check->add_option("--theory", theory_path, "theory document")->required();
  check->add_option("--mode", mode, "override the script mode")
      ->check(CLI::IsMember({"classical", "int"}));
  check->add_option("--rules", rules, "override the script rule set")
      ->check(CLI::IsMember({"ind", "kel"}));
  check->add_option("scripts", files, "proof scripts (.tap)");

  CLI::App* eval = app.add_subcommand("eval", "evaluate sentences in a model");
  eval->add_option("--theory", theory_path, "theory document")->required();
  eval->add_option("--semantics", semantics, "ta drops designated families")
      ->check(CLI::IsMember({"ta", "tak"}));
  eval->add_option("model", model_path, "model document (.tam)")->required();
  eval->add_option("sentences", sents, "sentences to evaluate");

  CLI::App* search = app.add_subcommand("search", "search for a standard model");
  search->add_option("--theory", theory_path, "theory document; axioms must hold")
      ->required();
  search->add_option("--bound", bound, "maximum carrier size")
      ->check(CLI::PositiveNumber);
  search->add_option("--out", out_path, "write the result here");
  search->add_option("sentences", sents, "sentences the model must refute");

  CLI::App* push = app.add_subcommand("pushout", "amalgamate a cospan of signatures");
  push->add_option("cospan", cospan_path, "cospan document (.tac)")->required();
  push->add_option("--out", out_path, "write the result here");

  CLI::App* fmt = app.add_subcommand("fmt", "print documents in canonical form");
  fmt->add_option("--theory", theory_path, "theory for proof and model documents");
  fmt->add_option("--out", out_path, "write the result here");
  fmt->add_option("files", files, "documents to format")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (check->parsed()) return run_check(theory_path, mode, rules, files);
    if (eval->parsed()) return run_eval(theory_path, model_path, semantics, sents);
    if (search->parsed()) return run_search(theory_path, bound, out_path, sents);
    if (push->parsed()) return run_pushout(cospan_path, out_path);
    if (fmt->parsed()) return run_fmt(theory_path, out_path, files);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "tak: %s\n", e.what());
    return 2;
  }
  return 2;
}
