#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "metafib/analysis.hpp"
#include "metafib/ceiling.hpp"
#include "metafib/engine.hpp"
#include "metafib/reference.hpp"
#include "metafib/search.hpp"
#include "metafib/spec.hpp"
#include "metafib/transforms.hpp"
#include "metafib/trees.hpp"

using namespace metafib;
using json = nlohmann::json;

namespace {

// What a subcommand produces; exit_code 1 marks a domain failure.
struct Output {
  json result;
  std::string plain;
  std::string csv;
  int exit_code = 0;
};

// Bad input that CLI11 cannot see: malformed specs, boxes, lists.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string join(const std::vector<Value>& values, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(values[i]);
  }
  return out;
}

std::vector<Value> parse_list(const std::string& text) {
  std::vector<Value> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError("not an integer list: " + text);
    }
  }
  return out;
}

RecursionSpec read_spec(const std::string& text, bool relaxed) {
  try {
    return parse_spec(text, ParseOptions{relaxed, false});
  } catch (const ParseError& e) {
    throw UsageError(std::string(e.what()) + " in \"" + text + "\"");
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(e.what()) + " in \"" + text + "\"");
  }
}

ParameterBox read_box(const std::string& text) {
  try {
    return parse_box(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json death_json(const Death& death) {
  return {{"index", death.index}, {"term", death.term}, {"argument", death.argument}};
}

std::string death_text(const Death& death) {
  return "died at n=" + std::to_string(death.index) + ": term " + std::to_string(death.term) +
         " asked for argument " + std::to_string(death.argument);
}

int default_jobs() {
  if (const char* env = std::getenv("METAFIB_JOBS")) {
    try {
      const int jobs = std::stoi(env);
      if (jobs >= 1) return jobs;
    } catch (const std::logic_error&) {
    }
    std::cerr << "metafib: ignoring METAFIB_JOBS=" << env << "\n";
  }
  return 1;
}

// ---- eval ----------------------------------------------------------------

struct EvalArgs {
  std::string spec;
  Value n = 20;
  bool relaxed = false;
};

Output run_eval(const EvalArgs& args) {
  const auto spec = read_spec(args.spec, args.relaxed);
  const auto run = evaluate(spec, args.n);
  Output out;
  out.result = {{"spec", print_spec(spec)}, {"values", run.values}};
  out.plain = join(run.values, " ") + "\n";
  out.csv = join(run.values, ",") + "\n";
  if (run.death) {
    out.result["death"] = death_json(*run.death);
    out.plain += death_text(*run.death) + "\n";
    out.exit_code = 1;
  }
  return out;
}

// ---- analyze -------------------------------------------------------------

struct AnalyzeArgs {
  std::string spec;
  bool from_stdin = false;
  Value n = 10000;
  bool relaxed = false;
};

Output run_analyze(const AnalyzeArgs& args) {
  Output out;
  std::vector<Value> values;
  if (args.from_stdin) {
    std::string token;
    while (std::cin >> token) {
      for (Value v : parse_list(token)) values.push_back(v);
    }
    out.result["source"] = "stdin";
  } else {
    if (args.spec.empty()) throw UsageError("analyze needs a spec or --stdin");
    const auto spec = read_spec(args.spec, args.relaxed);
    auto run = evaluate(spec, args.n);
    values = std::move(run.values);
    out.result["source"] = print_spec(spec);
    if (run.death) {
      out.result["death"] = death_json(*run.death);
      out.plain += death_text(*run.death) + "\n";
      out.exit_code = 1;
    }
  }
  out.result["length"] = values.size();
  const bool slow = is_slow(values);
  out.result["slow"] = slow;
  out.plain += "length " + std::to_string(values.size()) + "\nslow " + (slow ? "yes" : "no") + "\n";
  out.csv = "key,value\nlength," + std::to_string(values.size()) + "\nslow," + (slow ? "1" : "0") + "\n";

  bool monotone = true;
  for (std::size_t i = 1; i < values.size(); ++i) monotone = monotone && values[i - 1] <= values[i];
  if (monotone) {
    const auto profile = frequency(values);
    out.result["frequency"] = {{"counts", profile.counts}, {"complete_upto", profile.complete_upto}};
    std::vector<Value> head(profile.counts.begin(),
                            profile.counts.begin() + std::min<std::ptrdiff_t>(32, std::ssize(profile.counts)));
    out.plain += "frequency " + join(head, " ") + (profile.counts.size() > head.size() ? " ..." : "") + "\n";
    if (auto fit = fit_conolly(profile)) {
      out.result["fit"] = {{"alpha", fit->alpha},
                           {"beta", fit->beta},
                           {"order_p", fit->order_p().str()},
                           {"degenerate", fit->degenerate()}};
      out.plain += "fit (" + std::to_string(fit->alpha) + "," + std::to_string(fit->beta) + ")" +
                   (fit->degenerate() ? " degenerate" : "") + "\n";
      out.csv += "alpha," + std::to_string(fit->alpha) + "\nbeta," + std::to_string(fit->beta) + "\n";
    } else {
      out.result["fit"] = nullptr;
      out.plain += "fit none\n";
    }
  } else {
    out.result["frequency"] = nullptr;
    out.result["fit"] = nullptr;
    out.plain += "frequency n/a (not nondecreasing)\n";
  }

  if (values.size() >= 1000) {
    const auto ratio = ratio_estimate(values);
    json checkpoints = json::array();
    for (const auto& c : ratio.checkpoints) {
      checkpoints.push_back({{"n", c.n}, {"value", c.value}, {"ratio", c.ratio}});
      out.plain += "ratio A(" + std::to_string(c.n) + ")/" + std::to_string(c.n) + " = " + std::to_string(c.ratio) +
                   "\n";
    }
    out.result["ratio_checkpoints"] = checkpoints;
    out.result["ratio"] = {{"final", ratio.final_ratio.str()},
                           {"even", ratio.even_ratio.str()},
                           {"odd", ratio.odd_ratio.str()}};
  } else {
    out.result["ratio_checkpoints"] = nullptr;
  }
  return out;
}

// ---- reference / pairs ---------------------------------------------------

struct ReferenceArgs {
  Value alpha = 0;
  Value beta = 1;
  Value n = 20;
  bool recursion = false;
};

Output run_reference(const ReferenceArgs& args) {
  Output out;
  std::vector<Value> values;
  try {
    values = definitional_sequence(args.alpha, args.beta, args.n);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  out.result = {{"alpha", args.alpha}, {"beta", args.beta}, {"values", values}};
  out.plain = join(values, " ") + "\n";
  out.csv = join(values, ",") + "\n";
  if (args.recursion) {
    const auto text = print_spec(canonical_recursion(args.alpha, args.beta));
    out.result["recursion"] = text;
    out.plain += text + "\n";
  }
  return out;
}

Output run_pairs(Value order) {
  if (order < 1) throw UsageError("order must be positive");
  Output out;
  out.result = json::array();
  out.csv = "alpha,beta,order_p,recursion\n";
  for (const auto& pair : admissible_pairs(order)) {
    const auto text = print_spec(canonical_recursion(pair.alpha, pair.beta).with_initial({}));
    out.result.push_back({{"alpha", pair.alpha}, {"beta", pair.beta}, {"order_p", pair.order_p}, {"recursion", text}});
    out.plain += "(" + std::to_string(pair.alpha) + "," + std::to_string(pair.beta) + ") " + text + "\n";
    out.csv += std::to_string(pair.alpha) + "," + std::to_string(pair.beta) + "," + std::to_string(pair.order_p) +
               "," + csv_quote(text) + "\n";
  }
  return out;
}

// ---- construct -----------------------------------------------------------

struct ConstructArgs {
  std::string spec;
  std::vector<std::string> inits;
  Value n = 1000;
  Value m = 2;
  std::string alphas;
  std::string betas;
  Value alpha = 2;
  bool check = false;
};

Output spec_output(const RecursionSpec& spec) {
  Output out;
  const auto text = print_spec(spec);
  out.result = {{"spec", text}};
  out.plain = text + "\n";
  out.csv = csv_quote(text) + "\n";
  return out;
}

Output run_weave(const ConstructArgs& args) {
  WeaveInput input{read_spec(args.spec, true), {}};
  for (const auto& init : args.inits) input.inits.push_back(parse_list(init));
  WeaveResult woven;
  try {
    woven = weave_fixed_order(input, args.n);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Output out = spec_output(woven.spec);
  out.result["verified_terms"] = woven.values.size();
  if (woven.values.size() >= 1000) {
    const auto ratio = ratio_estimate(woven.values);
    out.result["ratio"] = {{"even", ratio.even_ratio.str()}, {"odd", ratio.odd_ratio.str()}};
  }
  return out;
}

Output with_interleave_check(Output out, const RecursionSpec& base, const RecursionSpec& derived,
                             const ConstructArgs& args) {
  if (!args.check) return out;
  const auto report = check_interleaving(base, derived, args.m, args.n);
  out.result["interleaves"] = report.interleaves;
  if (report.derived_death) out.result["death"] = death_json(*report.derived_death);
  if (report.first_mismatch) out.result["first_mismatch"] = report.first_mismatch;
  out.plain += std::string(report.interleaves ? "interleaves" : "does not interleave") + " the base for " +
               std::to_string(args.n) + " terms\n";
  if (!report.interleaves) out.exit_code = 1;
  return out;
}

Output run_interleave(const ConstructArgs& args) {
  const auto base = read_spec(args.spec, false);
  RecursionSpec derived;
  try {
    derived = interleave_order_multiplying(base, args.m);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return with_interleave_check(spec_output(derived), base, derived, args);
}

Output run_perturb(const ConstructArgs& args) {
  const auto base = read_spec(args.spec, false);
  RecursionSpec derived;
  try {
    derived = perturb(base, args.m, parse_list(args.alphas), parse_list(args.betas));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return with_interleave_check(spec_output(derived), base, derived, args);
}

Output run_shift(const ConstructArgs& args) {
  const auto spec = read_spec(args.spec, false);
  // The shift only makes sense for a recursion solved by ceil(n / alpha).
  if (spec.arity() == 2 && spec.uniform_order()) {
    const Value p = spec.order();
    if (args.alpha != 2 * p || !check_conditions(spec, p).satisfied) {
      throw UsageError("ceil(n/" + std::to_string(args.alpha) + ") does not satisfy " +
                       print_spec(spec.with_initial({})));
    }
  }
  try {
    return spec_output(shift_alpha_zero(spec, args.alpha));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// ---- tree ----------------------------------------------------------------

struct TreeArgs {
  std::string model = "T";
  Value alpha = 0;
  Value beta = 1;
  Value n = 20;
  std::string dot;
  bool relabel = false;
};

std::string label_text(Value label) { return label == kAddedLabel ? "x" : std::to_string(label); }

std::string cells_text(const std::vector<std::vector<Value>>& cells) {
  std::string out = "{";
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (c) out += ",";
    out += "{";
    for (std::size_t i = 0; i < cells[c].size(); ++i) {
      if (i) out += ",";
      out += label_text(cells[c][i]);
    }
    out += "}";
  }
  return out + "}";
}

json tree_json(const TreePrefix& tree) {
  json nodes = json::array();
  for (int idx : tree.order) {
    const auto& node = tree.nodes[static_cast<std::size_t>(idx)];
    if (node.kind == NodeKind::SNode) continue;
    json cells = json::array();
    for (const auto& cell : node.cells) {
      json labels = json::array();
      for (Value v : cell) labels.push_back(v == kAddedLabel ? json("x") : json(v));
      cells.push_back(labels);
    }
    nodes.push_back({{"kind", node.kind == NodeKind::Leaf ? "leaf" : "regular"},
                     {"block", node.block},
                     {"side", node.side == Side::Left ? "left" : node.side == Side::Right ? "right" : "none"},
                     {"cells", cells}});
  }
  const auto [left, right] = count_by_side(tree);
  json out = {{"model", tree.model == TreeModel::T ? "T" : "U"},
              {"labels", tree.label_count()},
              {"left", left},
              {"right", right},
              {"nodes", nodes}};
  if (tree.model == TreeModel::T) {
    out["L"] = count_cells_L(tree);
  } else {
    out["alpha"] = tree.alpha;
    out["beta"] = tree.beta;
    out["M"] = count_leaves_M(tree);
  }
  return out;
}

// One line per block, non-empty nodes only.
std::string tree_plain(const TreePrefix& tree) {
  std::vector<std::string> lines(static_cast<std::size_t>(tree.blocks));
  for (int idx : tree.order) {
    const auto& node = tree.nodes[static_cast<std::size_t>(idx)];
    if (node.kind == NodeKind::SNode || node.empty()) continue;
    auto& line = lines[static_cast<std::size_t>(node.block)];
    line += (line.empty() ? "" : " ") + cells_text(node.cells);
  }
  std::string out;
  if (tree.model == TreeModel::T) {
    out += "T(" + std::to_string(tree.label_count()) + ") L=" + std::to_string(count_cells_L(tree)) + "\n";
  } else {
    out += "U(" + std::to_string(tree.label_count()) + ") alpha=" + std::to_string(tree.alpha) +
           " beta=" + std::to_string(tree.beta) + " M=" + std::to_string(count_leaves_M(tree)) + "\n";
  }
  for (std::size_t b = 0; b < lines.size(); ++b) {
    if (!lines[b].empty()) out += "block " + std::to_string(b) + ": " + lines[b] + "\n";
  }
  return out;
}

Output run_tree(const TreeArgs& args, bool prune) {
  if (args.model != "T" && args.model != "U") throw UsageError("--model must be T or U");
  TreePrefix tree;
  try {
    tree = args.model == "T" ? build_T(args.n) : build_U(args.alpha, args.beta, args.n);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Output out;
  out.result["input"] = tree_json(tree);
  if (prune) {
    PruneResult pruned;
    try {
      pruned = tree.model == TreeModel::T ? prune_T(tree) : prune_U(tree);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (args.relabel) relabel(pruned.tree);
    out.result["pruned"] = tree_json(pruned.tree);
    out.result["spill"] = pruned.spill;
    out.plain = tree_plain(tree) + "pruned to\n" + tree_plain(pruned.tree);
    tree = pruned.tree;
  } else {
    out.plain = tree_plain(tree);
  }
  out.csv = "block,kind,cells\n";
  for (int idx : tree.order) {
    const auto& node = tree.nodes[static_cast<std::size_t>(idx)];
    if (node.kind == NodeKind::SNode || node.empty()) continue;
    out.csv += std::to_string(node.block) + "," + (node.kind == NodeKind::Leaf ? "leaf" : "regular") + "," +
               csv_quote(cells_text(node.cells)) + "\n";
  }
  if (!args.dot.empty()) {
    std::ofstream file(args.dot);
    if (!file) throw UsageError("cannot write " + args.dot);
    file << to_dot(tree, prune ? "pruned" : "tree");
    std::cerr << "metafib: wrote " << args.dot << "\n";
  }
  return out;
}

// ---- ceiling -------------------------------------------------------------

struct CeilingArgs {
  std::string spec;
  Value p = 1;
  std::string expect;
  Value window = 0;
  std::string box = "s=0..6,t=0..6,a=1..13,b=1..13";
  bool oracle = false;
  bool all = false;
  int jobs = 1;
};

int expectation_exit(const std::string& expect, bool got) {
  if (expect.empty()) return 0;
  if (expect != "true" && expect != "false") throw UsageError("--expect must be true or false");
  return (expect == "true") == got ? 0 : 1;
}

std::string verdict_text(const CeilingVerdict& verdict) {
  if (verdict.satisfied) {
    return "satisfied d=" + std::to_string(*verdict.d) + (verdict.swapped ? " (terms swapped)" : "");
  }
  std::string out = "not satisfied: condition " + std::to_string(verdict.failure->condition) + " fails";
  if (verdict.failure->witness) out += " at j=" + std::to_string(*verdict.failure->witness);
  return out;
}

json verdict_json(const CeilingVerdict& verdict) {
  json out = {{"satisfied", verdict.satisfied}};
  if (verdict.satisfied) {
    out["d"] = *verdict.d;
    out["swapped"] = verdict.swapped;
  } else {
    out["condition"] = verdict.failure->condition;
    out["witness"] = verdict.failure->witness ? json(*verdict.failure->witness) : json(nullptr);
  }
  return out;
}

Output run_ceiling_check(const CeilingArgs& args) {
  const auto spec = read_spec(args.spec, true);
  CeilingVerdict verdict;
  try {
    verdict = check_conditions(spec, args.p);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Output out;
  out.result = verdict_json(verdict);
  out.result["spec"] = print_spec(spec.with_initial({}));
  out.plain = verdict_text(verdict) + "\n";
  out.csv = "spec,verdict,d\n" + csv_quote(print_spec(spec.with_initial({}))) + "," +
            (verdict.satisfied ? "1," + std::to_string(*verdict.d) : "0,") + "\n";
  if (verdict.satisfied) {
    try {
      const Value c = min_initial_conditions(spec, args.p);
      out.result["min_initial_conditions"] = c;
      out.plain += "seed with " + std::to_string(c) + " ceiling values\n";
    } catch (const std::invalid_argument&) {
      // negative parameters: no forward-evaluation guarantee
    }
  }
  out.exit_code = expectation_exit(args.expect, verdict.satisfied);
  return out;
}

Output run_ceiling_oracle(const CeilingArgs& args) {
  const auto spec = read_spec(args.spec, true);
  bool holds = false;
  Value window = 0;
  try {
    window = args.window ? args.window : default_oracle_window(spec, args.p);
    holds = formal_satisfy_oracle(spec, args.p, window);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Output out;
  out.result = {{"spec", print_spec(spec.with_initial({}))}, {"window", window}, {"satisfied", holds}};
  out.plain = std::string(holds ? "satisfied" : "not satisfied") + " on [-" + std::to_string(window) + ", " +
              std::to_string(window) + "]\n";
  out.csv = "spec,window,satisfied\n" + csv_quote(print_spec(spec.with_initial({}))) + "," + std::to_string(window) +
            "," + (holds ? "1" : "0") + "\n";
  out.exit_code = expectation_exit(args.expect, holds);
  return out;
}

Output run_ceiling_sweep(const CeilingArgs& args) {
  if (args.p < 1) throw UsageError("--p must be positive");
  CeilingSweepOptions options;
  options.p = args.p;
  options.box = read_box(args.box);
  options.jobs = args.jobs;
  options.with_oracle = args.oracle;
  options.keep_all = args.all;
  options.window = args.window;
  const auto report = ceiling_sweep(options);

  Output out;
  json rows = json::array();
  out.csv = "spec,verdict,d,kappa\n";
  for (const auto& row : report.rows) {
    const auto text = print_spec(row.spec);
    json entry = verdict_json(row.verdict);
    entry["spec"] = text;
    if (row.oracle) entry["oracle"] = *row.oracle;
    if (row.kappa) entry["kappa"] = *row.kappa;
    rows.push_back(entry);
    const std::string d = row.verdict.satisfied ? std::to_string(*row.verdict.d) : "";
    const std::string kappa = row.kappa ? std::to_string(*row.kappa) : "";
    out.csv += csv_quote(text) + "," + (row.verdict.satisfied ? "1" : "0") + "," + d + "," + kappa + "\n";
    out.plain += text + " " + verdict_text(row.verdict) + (row.kappa ? " kappa=" + kappa : "") + "\n";
  }
  out.result = {{"p", args.p},
                {"box", format_box(options.box)},
                {"examined", report.examined},
                {"satisfied", report.satisfied},
                {"oracle_disagreements", report.oracle_disagreements},
                {"shortcut_disagreements", report.shortcut_disagreements},
                {"rows", rows}};
  std::cerr << "metafib: examined " << report.examined << ", satisfied " << report.satisfied
            << ", oracle disagreements " << report.oracle_disagreements << ", shortcut disagreements "
            << report.shortcut_disagreements << "\n";
  if (report.oracle_disagreements || report.shortcut_disagreements) out.exit_code = 1;
  return out;
}

// ---- search --------------------------------------------------------------

struct SearchArgs {
  SearchConfig config;
  std::string box;
  std::string out;
  bool no_dedup = false;
};

Output run_search_command(SearchArgs args) {
  if (!args.box.empty()) args.config.box = read_box(args.box);
  args.config.dedup = !args.no_dedup;
  try {
    validate_search(args.config);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto report = run_search(args.config);
  std::cerr << "metafib: examined " << report.examined << ", died " << report.died << ", mismatched "
            << report.mismatched << ", hits " << report.hits.size() << "\n";

  Output out;
  json hits = json::array();
  out.csv = "spec,matched_len,alpha,beta\n";
  for (const auto& hit : report.hits) {
    const auto text = print_spec(hit.spec);
    hits.push_back({{"spec", text},
                    {"matched_len", hit.matched_len},
                    {"alpha", hit.signature.alpha},
                    {"beta", hit.signature.beta}});
    out.csv += csv_quote(text) + "," + std::to_string(hit.matched_len) + "," + std::to_string(hit.signature.alpha) +
               "," + std::to_string(hit.signature.beta) + "\n";
    out.plain += print_spec(hit.spec.with_initial({})) + "\n";
  }
  out.result = {{"order", args.config.order},
                {"alpha", args.config.alpha},
                {"beta", args.config.beta},
                {"box", format_box(args.config.box)},
                {"seed", args.config.seed_len},
                {"compare", args.config.compare_len},
                {"examined", report.examined},
                {"died", report.died},
                {"mismatched", report.mismatched},
                {"hits", hits}};
  if (!args.out.empty()) {
    std::ofstream file(args.out);
    if (!file) throw UsageError("cannot write " + args.out);
    file << out.csv;
    std::cerr << "metafib: wrote " << report.hits.size() << " hits to " << args.out << "\n";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nested recurrence laboratory: evaluate, classify, construct and search meta-Fibonacci recursions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("metafib ") + METAFIB_VERSION);
  std::string format = "plain";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"plain", "csv", "json"}))
      ->capture_default_str();
  app.fallthrough();
  // Options for a subcommand go under its [section], e.g. [search].
  app.set_config("--config", "", "Read options from a key = value file");

  std::function<Output()> action;
  const int jobs = default_jobs();

  // eval
  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate a recursion");
  eval->add_option("spec", eval_args.spec, "Recursion such as \"<0;1:1;2>[1,2]\"")->required();
  eval->add_option("--n", eval_args.n, "Number of terms")->check(CLI::NonNegativeNumber)->capture_default_str();
  eval->add_flag("--relaxed", eval_args.relaxed, "Allow negative shifts and offsets");
  eval->callback([&] { action = [&] { return run_eval(eval_args); }; });

  // analyze
  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand("analyze", "Slowness, frequencies, Conolly fit and ratio trend");
  analyze->add_option("spec", analyze_args.spec, "Recursion to evaluate");
  analyze->add_flag("--stdin", analyze_args.from_stdin, "Read values from standard input instead");
  analyze->add_option("--n", analyze_args.n, "Number of terms")->check(CLI::PositiveNumber)->capture_default_str();
  analyze->add_flag("--relaxed", analyze_args.relaxed, "Allow negative shifts and offsets");
  analyze->callback([&] { action = [&] { return run_analyze(analyze_args); }; });

  // reference
  ReferenceArgs reference_args;
  auto* reference = app.add_subcommand("reference", "The (alpha,beta)-Conolly sequence by its definition");
  reference->add_option("--alpha", reference_args.alpha)->capture_default_str();
  reference->add_option("--beta", reference_args.beta)->capture_default_str();
  reference->add_option("--n", reference_args.n)->check(CLI::NonNegativeNumber)->capture_default_str();
  reference->add_flag("--recursion", reference_args.recursion, "Also print the canonical recursion");
  reference->callback([&] { action = [&] { return run_reference(reference_args); }; });

  // pairs
  Value pairs_order = 1;
  auto* pairs = app.add_subcommand("pairs", "Admissible (alpha,beta) pairs of an order");
  pairs->add_option("--order", pairs_order)->capture_default_str();
  pairs->callback([&] { action = [&] { return run_pairs(pairs_order); }; });

  // construct
  ConstructArgs construct_args;
  auto* construct = app.add_subcommand("construct", "Build new recursions from old ones");
  construct->require_subcommand(1);
  auto* weave = construct->add_subcommand("weave", "Weave several solutions of one recursion");
  weave->add_option("spec", construct_args.spec)->required();
  weave->add_option("--init", construct_args.inits, "Initial conditions of one solution, comma separated")
      ->required();
  weave->add_option("--n", construct_args.n, "Terms verified by substitution")->capture_default_str();
  weave->callback([&] { action = [&] { return run_weave(construct_args); }; });
  auto* interleave = construct->add_subcommand("interleave", "Order-multiplying m-interleaving");
  interleave->add_option("spec", construct_args.spec)->required();
  interleave->add_option("--m", construct_args.m)->capture_default_str();
  interleave->add_flag("--check", construct_args.check, "Verify the interleaving for --n terms");
  interleave->add_option("--n", construct_args.n)->capture_default_str();
  interleave->callback([&] { action = [&] { return run_interleave(construct_args); }; });
  auto* perturbation = construct->add_subcommand("perturb", "Interleaving with perturbed offsets");
  perturbation->add_option("spec", construct_args.spec)->required();
  perturbation->add_option("--m", construct_args.m)->capture_default_str();
  perturbation->add_option("--alphas", construct_args.alphas, "m comma separated perturbations")->required();
  perturbation->add_option("--betas", construct_args.betas, "m comma separated perturbations")->required();
  perturbation->add_flag("--check", construct_args.check, "Verify the interleaving for --n terms");
  perturbation->add_option("--n", construct_args.n)->capture_default_str();
  perturbation->callback([&] { action = [&] { return run_perturb(construct_args); }; });
  auto* shift = construct->add_subcommand("shift", "Shift an alpha = 0 recursion to a positive alpha");
  shift->add_option("spec", construct_args.spec)->required();
  shift->add_option("--alpha", construct_args.alpha)->capture_default_str();
  shift->callback([&] { action = [&] { return run_shift(construct_args); }; });

  // tree
  TreeArgs tree_args;
  auto* tree = app.add_subcommand("tree", "Labelled trees T(n), U(n) and their pruning");
  tree->require_subcommand(1);
  auto tree_options = [&](CLI::App* sub) {
    sub->add_option("--model", tree_args.model)->check(CLI::IsMember({"T", "U"}))->capture_default_str();
    sub->add_option("--alpha", tree_args.alpha)->capture_default_str();
    sub->add_option("--beta", tree_args.beta)->capture_default_str();
    sub->add_option("--n", tree_args.n)->check(CLI::NonNegativeNumber)->capture_default_str();
    sub->add_option("--dot", tree_args.dot, "Write a Graphviz rendering of the (pruned) tree");
  };
  auto* tree_build = tree->add_subcommand("build", "Build a labelled tree");
  tree_options(tree_build);
  tree_build->callback([&] { action = [&] { return run_tree(tree_args, false); }; });
  auto* tree_prune = tree->add_subcommand("prune", "Build and prune a labelled tree");
  tree_options(tree_prune);
  tree_prune->add_flag("--relabel", tree_args.relabel, "Renumber labels 1..k after pruning");
  tree_prune->callback([&] { action = [&] { return run_tree(tree_args, true); }; });

  // ceiling
  CeilingArgs ceiling_args;
  ceiling_args.jobs = jobs;
  auto* ceiling = app.add_subcommand("ceiling", "Does ceil(n/2p) satisfy a recursion?");
  ceiling->require_subcommand(1);
  auto* ceiling_check = ceiling->add_subcommand("check", "Remainder and quotient conditions");
  ceiling_check->add_option("spec", ceiling_args.spec)->required();
  ceiling_check->add_option("--p", ceiling_args.p)->capture_default_str();
  ceiling_check->add_option("--expect", ceiling_args.expect, "Exit 1 unless the verdict is this (true|false)");
  ceiling_check->callback([&] { action = [&] { return run_ceiling_check(ceiling_args); }; });
  auto* ceiling_oracle = ceiling->add_subcommand("oracle", "Brute-force check over a window of n");
  ceiling_oracle->add_option("spec", ceiling_args.spec)->required();
  ceiling_oracle->add_option("--p", ceiling_args.p)->capture_default_str();
  ceiling_oracle->add_option("--window", ceiling_args.window, "Half-width of the window (default 4p + max|param|)");
  ceiling_oracle->add_option("--expect", ceiling_args.expect, "Exit 1 unless the verdict is this (true|false)");
  ceiling_oracle->callback([&] { action = [&] { return run_ceiling_oracle(ceiling_args); }; });
  auto* ceiling_sweep_cmd = ceiling->add_subcommand("sweep", "Check every tuple of a box");
  ceiling_sweep_cmd->add_option("--p", ceiling_args.p)->capture_default_str();
  ceiling_sweep_cmd->add_option("--box", ceiling_args.box, "Ranges such as s=0..6,t=0..6,a=1..13,b=1..13")
      ->capture_default_str();
  ceiling_sweep_cmd->add_flag("--oracle", ceiling_args.oracle, "Cross-check every tuple with the oracle");
  ceiling_sweep_cmd->add_flag("--all", ceiling_args.all, "List failing tuples too");
  ceiling_sweep_cmd->add_option("--window", ceiling_args.window, "Oracle window");
  ceiling_sweep_cmd->add_option("--jobs", ceiling_args.jobs, "Worker threads (default METAFIB_JOBS or 1)")
      ->check(CLI::PositiveNumber);
  ceiling_sweep_cmd->callback([&] { action = [&] { return run_ceiling_sweep(ceiling_args); }; });

  // search
  SearchArgs search_args;
  search_args.config.box = default_search_box();
  search_args.config.jobs = jobs;
  auto* search = app.add_subcommand("search", "Exhaustive search for Conolly-like recursions");
  search->add_option("--order", search_args.config.order)->capture_default_str();
  search->add_option("--alpha", search_args.config.alpha)->capture_default_str();
  search->add_option("--beta", search_args.config.beta)->capture_default_str();
  search->add_option("--box", search_args.box, "Ranges such as s=0..0,t=0..10,a=1..12,b=1..30");
  search->add_option("--seed", search_args.config.seed_len, "Seed length")->capture_default_str();
  search->add_option("--compare", search_args.config.compare_len, "Terms compared")->capture_default_str();
  search->add_option("--jobs", search_args.config.jobs, "Worker threads (default METAFIB_JOBS or 1)")
      ->check(CLI::PositiveNumber);
  search->add_flag("--no-dedup", search_args.no_dedup, "Keep both orders of the two terms when s = t");
  search->add_option("--out", search_args.out, "Also write the hits as CSV");
  search->callback([&] { action = [&] { return run_search_command(search_args); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Output out;
  const auto start = std::chrono::steady_clock::now();
  try {
    out = action();
  } catch (const UsageError& e) {
    std::cerr << "metafib: " << e.what() << "\n";
    return 2;
  } catch (const OverflowError& e) {
    std::cerr << "metafib: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "metafib: " << e.what() << "\n";
    return 1;
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  if (format == "json") {
    std::vector<std::string> words(argv + 1, argv + argc);
    json envelope = {{"command", words}, {"result", out.result}, {"timing_ms", ms}, {"version", METAFIB_VERSION}};
    std::cout << envelope.dump(2) << "\n";
  } else if (format == "csv") {
    std::cout << out.csv;
  } else {
    std::cout << out.plain;
  }
  return out.exit_code;
}
