// expramsey command line front end.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "expramsey/colourings/colouring.hpp"
#include "expramsey/error.hpp"
#include "expramsey/patterns/pattern_set.hpp"
#include "expramsey/patterns/shape.hpp"
#include "expramsey/search/certificate.hpp"
#include "expramsey/search/family.hpp"
#include "expramsey/search/ramsey.hpp"
#include "expramsey/tower/eval.hpp"

namespace {

using namespace expramsey;
using nlohmann::ordered_json;

enum Exit { kVerified = 0, kCounterexample = 1, kParse = 2, kBudget = 3, kEvaluation = 4 };

struct Global {
  std::string out;
  std::string format = "json";
  double budget_secs = 0;
  std::uint64_t cap = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool timing = false;
};

int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse:
    case ErrorKind::InvalidArgument:
    case ErrorKind::ArityMismatch:
    case ErrorKind::SequenceNotSufficientlyLacunary:
      return kParse;
    case ErrorKind::BudgetExceeded:
    case ErrorKind::FactorizationBudgetExceeded:
      return kBudget;
    default:
      return kEvaluation;
  }
}

void emit(const Global& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + g.out + "'");
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

search::SearchBudget budget_of(const Global& g) {
  search::SearchBudget b;
  if (g.budget_secs > 0) b = search::SearchBudget::seconds(g.budget_secs);
  if (g.cap > 0) b.max_instances = g.cap;
  return b;
}

void apply_cutoff_env() {
  const char* env = std::getenv("EXPRAMSEY_CUTOFF");
  if (!env || !*env) return;
  const auto t = tower::parse_term(env);
  const auto v = tower::eval_exact(t, BigInt(1) << (1 << 20));
  if (v.is_huge() || v.value() < 2) throw Error(ErrorKind::Parse, "EXPRAMSEY_CUTOFF must be an integer in [2, 2^(2^20)]");
  auto cfg = tower::default_config();
  cfg.cutoff = v.value();
  tower::set_default_config(std::move(cfg));
}

// gen ---------------------------------------------------------------------

struct GenArgs {
  std::string pattern;
  std::vector<std::string> generators;
  std::string edges;
  std::string weight = "1";
  std::string support;
};

patterns::WeightFn load_weight(const std::string& w) {
  if (!w.empty() && w.find_first_not_of("0123456789") == std::string::npos) {
    return patterns::WeightFn::constant(std::stoull(w));
  }
  std::ifstream in(w);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open weight file '" + w + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return patterns::WeightFn::from_json(ss.str());
}

std::vector<unsigned> parse_support(const std::string& s, std::size_t m) {
  std::vector<unsigned> out;
  if (s.empty()) {
    for (unsigned i = 1; i <= m; ++i) out.push_back(i);
    return out;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(item, &used);
      if (used != item.size() || v < 1 || v > m) throw std::out_of_range(item);
      out.push_back(static_cast<unsigned>(v));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Parse, "bad support index '" + item + "'");
    }
  }
  return out;
}

int run_gen(const Global& g, const GenArgs& a) {
  std::vector<tower::ExpTerm> xs;
  for (const auto& s : a.generators) xs.push_back(tower::parse_term(s));
  const std::size_t cap = g.cap ? g.cap : patterns::kDefaultElementCap;

  std::optional<patterns::PatternSet> set;
  if (a.pattern == "fs") {
    set = patterns::finite_sums(xs);
  } else if (a.pattern == "fp") {
    set = patterns::finite_products(xs);
  } else if (a.pattern == "fe") {
    set = patterns::finite_exponentials(xs, cap);
  } else if (a.pattern == "fpw") {
    set = patterns::weighted_products(parse_support(a.support, xs.size()), load_weight(a.weight), xs, cap);
  } else if (a.pattern == "fep") {
    set = patterns::fep(load_weight(a.weight), xs, cap);
  } else if (a.pattern == "shape") {
    if (a.edges.empty()) throw Error(ErrorKind::Parse, "shape needs --edges");
    set = patterns::shape_pattern(patterns::ShapeRelation::parse(static_cast<unsigned>(xs.size()), a.edges), xs);
  } else {
    throw Error(ErrorKind::Parse, "unknown pattern '" + a.pattern + "'");
  }

  if (g.format == "csv") {
    std::string text = "term,value,recipe\n";
    for (const auto& e : set->elements()) {
      text += csv_field(e.term.to_string()) + "," + (e.exact_key ? tower::value_key(e.term) : "") + "," +
              csv_field(e.provenance.recipe) + "\n";
    }
    emit(g, text);
  } else {
    auto j = ordered_json::parse(set->to_json());
    j["seed"] = g.seed;
    emit(g, j.dump(2));
  }
  return kVerified;
}

// colour ------------------------------------------------------------------

int run_colour(const Global& g, const std::string& spec, const std::vector<std::string>& values) {
  const auto c = colourings::parse_colouring(spec);
  std::vector<tower::ExpTerm> xs;
  for (const auto& v : values) xs.push_back(tower::parse_term(v));

  if (g.format == "csv") {
    std::string text = "value,colour,label\n";
    for (const auto& x : xs) {
      const unsigned col = c->colour(x);
      text += csv_field(x.to_string()) + "," + std::to_string(col) + "," + csv_field(c->label(col)) + "\n";
    }
    emit(g, text);
    return kVerified;
  }
  ordered_json j;
  j["schema_version"] = 1;
  j["kind"] = "colours";
  j["colouring"] = c->descriptor();
  j["k"] = c->k();
  j["seed"] = g.seed;
  auto arr = ordered_json::array();
  for (const auto& x : xs) {
    const unsigned col = c->colour(x);
    arr.push_back({{"value", x.to_string()}, {"colour", col}, {"label", c->label(col)}});
  }
  j["assignments"] = arr;
  emit(g, j.dump(2));
  return kVerified;
}

// verify / search ------------------------------------------------------------

search::Certificate certify(const Global& g, const std::string& spec, const std::string& family, std::uint64_t bound) {
  const auto c = colourings::parse_colouring(spec);
  const auto f = search::parse_family(family);
  search::SearchOptions opt;
  opt.threads = g.threads;
  opt.budget = budget_of(g);
  opt.timing = g.timing;
  opt.seed = g.seed;
  return search::find_monochromatic(c, f, bound, opt);
}

std::string render(const Global& g, const search::Certificate& cert) {
  return g.format == "csv" ? cert.to_csv() : cert.to_json();
}

int run_verify(const Global& g, const std::string& spec, const std::string& family, std::uint64_t bound) {
  const auto cert = certify(g, spec, family, bound);
  emit(g, render(g, cert));
  return cert.avoidance_verified() ? kVerified : kCounterexample;
}

int run_search(const Global& g, const std::string& spec, const std::string& family, std::uint64_t bound) {
  const auto cert = certify(g, spec, family, bound);
  if (cert.witness) {
    std::string line = "counterexample after " + std::to_string(cert.instances_checked) + " instances: {";
    for (std::size_t i = 0; i < cert.witness->elements.size(); ++i) {
      line += (i ? ", " : "") + cert.witness->elements[i];
    }
    std::cerr << line << "} colour " << cert.witness->colour << "\n";
  } else {
    std::cerr << "no monochromatic instance among " << cert.instances_checked << "\n";
  }
  if (!g.out.empty()) emit(g, render(g, cert));
  return cert.avoidance_verified() ? kVerified : kCounterexample;
}

// ramsey ------------------------------------------------------------------

int run_ramsey(const Global& g, const std::string& kind, unsigned k, unsigned len, std::uint64_t nmax) {
  search::RamseyOptions opt;
  opt.budget = budget_of(g);
  opt.seed = g.seed;
  search::RamseyComputation r;
  if (kind == "exptriple") {
    r = search::exp_ramsey_number(k, nmax ? nmax : 100000, opt);
  } else if (kind == "vdw") {
    if (len < 1) throw Error(ErrorKind::Parse, "vdw needs --len");
    r = search::vdw_number(k, len, nmax ? nmax : 1000, opt);
  } else {
    throw Error(ErrorKind::Parse, "unknown ramsey kind '" + kind + "'");
  }
  if (g.format == "csv") {
    emit(g, "kind,k,length,status,value,n_max,cross_check_agreed,seed\n" + r.kind + "," + std::to_string(r.k) + "," +
                std::to_string(r.length) + "," + (r.exact ? "exact" : "exceeds_budget") + "," +
                std::to_string(r.value) + "," + std::to_string(r.n_max) + "," +
                (r.cross_check.agreed ? "true" : "false") + "," + std::to_string(r.seed) + "\n");
  } else {
    emit(g, r.to_json());
  }
  return r.exact ? kVerified : kBudget;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponential patterns in arithmetic Ramsey theory"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--out", g.out, "Write output to this file");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--budget-secs", g.budget_secs, "Wall-clock budget in seconds")->check(CLI::PositiveNumber);
  app.add_option("--cap", g.cap, "Element cap (gen) or instance cap (verify, search)")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for randomised components");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  app.add_flag("--timing", g.timing, "Record wall time in certificates");
  // Subcommands inherit this, so global flags may follow them.
  app.fallthrough();

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a pattern set");
  gen_cmd->add_option("pattern", gen.pattern, "fs|fp|fe|fpw|fep|shape")->required();
  gen_cmd->add_option("generators", gen.generators, "Generators in tower syntax")->required();
  gen_cmd->add_option("--edges", gen.edges, "Shape relation, e.g. 1-2,2-3");
  gen_cmd->add_option("--weight", gen.weight, "Constant weight or weight JSON file");
  gen_cmd->add_option("--support", gen.support, "fpw support indices, e.g. 1,3");

  std::string spec;
  std::vector<std::string> values;
  auto* colour_cmd = app.add_subcommand("colour", "Colour values");
  colour_cmd->add_option("spec", spec, "Colouring spec")->required();
  colour_cmd->add_option("values", values, "Values in tower syntax")->required();

  std::string family;
  std::uint64_t bound = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Check every instance below a bound and write a certificate");
  auto* search_cmd = app.add_subcommand("search", "Report the first monochromatic instance");
  for (auto* cmd : {verify_cmd, search_cmd}) {
    cmd->add_option("spec", spec, "Colouring spec")->required();
    cmd->add_option("family", family, "Family spec")->required();
    cmd->add_option("--bound", bound, "Bound")->required();
  }

  std::string ramsey_kind;
  unsigned k = 2, len = 0;
  std::uint64_t nmax = 0;
  auto* ramsey_cmd = app.add_subcommand("ramsey", "Compute a small Ramsey-type number");
  ramsey_cmd->add_option("kind", ramsey_kind, "exptriple|vdw")->required();
  ramsey_cmd->add_option("--k", k, "Number of colours")->check(CLI::Range(1u, 64u));
  ramsey_cmd->add_option("--len", len, "Progression length (vdw)");
  ramsey_cmd->add_option("--nmax", nmax, "Largest N to try");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kParse;
  }

  try {
    apply_cutoff_env();
    if (*gen_cmd) return run_gen(g, gen);
    if (*colour_cmd) return run_colour(g, spec, values);
    if (*verify_cmd) return run_verify(g, spec, family, bound);
    if (*search_cmd) return run_search(g, spec, family, bound);
    if (*ramsey_cmd) return run_ramsey(g, ramsey_kind, k, len, nmax);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kEvaluation;
  }
  return kParse;
}
