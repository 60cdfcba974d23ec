#include "vbs/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <span>

#include <CLI11.hpp>

#include "vbs/model_io.hpp"
#include "vbs/propagation.hpp"
#include "vbs/query.hpp"
#include "vbs/setchain.hpp"

namespace vbs::cli {

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

VarSet resolve_names(const Model& model, const std::string& csv) {
  std::vector<VarId> ids;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t end = csv.find(',', start);
    if (end == std::string::npos) end = csv.size();
    std::string name = csv.substr(start, end - start);
    while (!name.empty() && name.front() == ' ') name.erase(name.begin());
    while (!name.empty() && name.back() == ' ') name.pop_back();
    if (!name.empty()) {
      const auto id = model.find(name);
      if (!id) throw ModelError("unknown variable '" + name + "'");
      ids.push_back(*id);
    }
    if (end == csv.size()) break;
    start = end + 1;
  }
  if (ids.empty()) throw ModelError("no variables given");
  return VarSet::from_unsorted(std::move(ids));
}

std::string config_label(const Model& model, const ConfigIndexer& idx,
                         std::size_t index) {
  if (idx.scope().empty()) return "()";
  std::string out;
  for (std::size_t p = 0; p < idx.arity(); ++p) {
    if (p) out += " ";
    const Variable& var = model.var(idx.scope()[p]);
    out += var.name + "=" +
           var.frame[static_cast<std::size_t>(idx.digit(index, p))];
  }
  return out;
}

void print_table(std::ostream& out, const ProbabilityPotential& p) {
  const ConfigIndexer idx = p.indexer();
  for (std::size_t i = 0; i < idx.size(); ++i)
    out << config_label(*p.model(), idx, i) << " " << format_value(p.value_at(i))
        << "\n";
}

void print_table(std::ostream& out, const BooleanRelation& r) {
  const ConfigIndexer idx = r.indexer();
  for (std::size_t i = 0; i < idx.size(); ++i)
    out << config_label(*r.model(), idx, i) << " " << (r.holds_at(i) ? 1 : 0)
        << "\n";
}

void print_table(std::ostream& out, const CommonalityTable& q) {
  const ConfigIndexer idx = q.indexer();
  for (std::uint32_t mask = 1; mask < q.mask_count(); ++mask) {
    out << "{";
    bool first = true;
    for (std::size_t c = 0; c < idx.size(); ++c) {
      if (!(mask & (std::uint32_t{1} << c))) continue;
      if (!first) out << ", ";
      first = false;
      out << config_label(*q.model(), idx, c);
    }
    out << "} " << format_value(q.of_mask(mask)) << "\n";
  }
}

int cmd_check(const std::string& path, const std::string& keep_csv,
              std::ostream& out) {
  const LoadedModel loaded = load_model_file(path);
  const Hypergraph h = loaded.hypergraph();
  out << "hypergraph with " << h.edges.size() << " edges over "
      << h.variables().size() << " variables\n";

  VarSet keep;
  if (!keep_csv.empty()) {
    keep = resolve_names(*loaded.model, keep_csv);
    out << "keep: " << loaded.model->render(keep) << "\n";
  }
  const GrahamResult g =
      keep.empty() ? graham_test(h) : modified_graham(h, keep);
  for (const GrahamStep& s : g.trace)
    out << render_step(*loaded.model, s) << "\n";
  if (g.terminal_edge)
    out << "terminal edge " << g.terminal_edge->first + 1 << " "
        << loaded.model->render(g.terminal_edge->second) << "\n";
  if (keep.empty())
    out << "verdict: " << (g.fully_reduced ? "hypertree" : "not a hypertree")
        << "\n";
  else
    out << "residual edges: " << g.residual.size() << "\n";
  for (const auto& [idx, content] : g.residual)
    out << "residual edge " << idx + 1 << " " << loaded.model->render(content)
        << "\n";
  return 0;
}

MarkovTree tree_for(const LoadedModel& loaded) {
  return build_markov_tree(cover_hypertree(loaded.hypergraph()));
}

int checked_root(const MarkovTree& tree, int root_1based) {
  if (root_1based == 0) return tree.construction_order().front();
  if (root_1based < 1 || static_cast<std::size_t>(root_1based) > tree.size())
    throw ModelError("--root must name a tree node between 1 and " +
                     std::to_string(tree.size()));
  return root_1based - 1;
}

int cmd_plan(const std::string& path, const std::string& vars_csv,
             std::ostream& out) {
  const LoadedModel loaded = load_model_file(path);
  const MarkovTree tree = tree_for(loaded);
  out << "tree with " << tree.size() << " nodes\n";
  const VarSet vars = resolve_names(*loaded.model, vars_csv);
  out << "keep: " << loaded.model->render(vars) << "\n";
  const QueryPlan plan = plan_vars(tree, vars);
  for (const auto& [idx, content] : plan.residual)
    out << "residual edge " << idx + 1 << " " << loaded.model->render(content)
        << "\n";
  for (std::size_t i = 0; i < plan.nodes.size(); ++i)
    out << "plan node " << plan.nodes[i] + 1 << " projected "
        << loaded.model->render(plan.projected[i]) << "\n";
  out << "root: node " << plan.root + 1 << "\n";
  out << "union scope: " << loaded.model->render(plan.union_scope) << "\n";
  out << "projected scope: " << loaded.model->render(plan.projected_scope)
      << "\n";
  return 0;
}

template <Valuation V>
int run_marginal(const LoadedModel& loaded, std::vector<V> factors,
                 const std::string& vars_csv, int node_1based, int root_1based,
                 std::ostream& out) {
  const MarkovTree tree = tree_for(loaded);
  const auto assignment = TreeAssignment<V>::route_factors(
      tree, std::span<const V>(factors.data(), factors.size()));
  const int root = checked_root(tree, root_1based);
  const PropagationResult<V> result = propagate_all(assignment, root);

  if (node_1based != 0) {
    if (node_1based < 1 || static_cast<std::size_t>(node_1based) > tree.size())
      throw ModelError("--node must name a tree node between 1 and " +
                       std::to_string(tree.size()));
    const V& r = result.marginals[static_cast<std::size_t>(node_1based - 1)];
    out << "node " << node_1based << " marginal over "
        << loaded.model->render(r.scope()) << "\n";
    print_table(out, r);
    return 0;
  }

  const VarSet vars = resolve_names(*loaded.model, vars_csv);
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (vars.subset_of(tree.node(static_cast<int>(i)))) {
      const V r = marginalize(result.marginals[i], vars);
      out << "marginal over " << loaded.model->render(vars) << "\n";
      print_table(out, r);
      return 0;
    }
  }
  throw ModelError("no single tree node covers " + loaded.model->render(vars) +
                   "; use the query command");
}

int cmd_marginal(const std::string& path, const std::string& vars_csv,
                 int node_1based, int root_1based, std::ostream& out) {
  const LoadedModel loaded = load_model_file(path);
  if ((vars_csv.empty() && node_1based == 0) ||
      (!vars_csv.empty() && node_1based != 0))
    throw ModelError("give exactly one of --vars or --node");
  switch (loaded.kind) {
    case InstanceKind::Probability:
      return run_marginal(loaded, to_potentials(loaded), vars_csv, node_1based,
                          root_1based, out);
    case InstanceKind::Commonality:
      return run_marginal(loaded, to_commonalities(loaded), vars_csv,
                          node_1based, root_1based, out);
    case InstanceKind::Boolean:
      return run_marginal(loaded, to_relations(loaded), vars_csv, node_1based,
                          root_1based, out);
    case InstanceKind::HypergraphOnly:
      throw ModelError("marginals need a model file with factors");
  }
  throw InvariantError("unreachable instance kind");
}

void print_stats_line(std::ostream& out, const char* label, const OpCounts& c) {
  out << label << ": combinations=" << c.combinations
      << " marginalizations=" << c.marginalizations
      << " removals=" << c.removals
      << " max-combine-scope=" << c.max_combine_scope << "\n";
}

template <Valuation V>
int run_query(const LoadedModel& loaded, std::vector<V> factors,
              const std::string& text, int root_1based, bool stats,
              std::ostream& out) {
  const MarkovTree tree = tree_for(loaded);
  const auto assignment = TreeAssignment<V>::route_factors(
      tree, std::span<const V>(factors.data(), factors.size()));
  const int root = checked_root(tree, root_1based);
  const QueryExpr query = QueryExpr::parse(*loaded.model, text);

  // Node marginals count as precomputed: a chain where removal exists,
  // otherwise a full propagation.
  std::vector<V> marginals;
  if constexpr (Removable<V>) {
    marginals = marginals_by_node(build_setchain(assignment, root), tree);
  } else {
    marginals = propagate_all(assignment, root).marginals;
  }

  op_counts().reset();
  const QueryPlan plan = plan_query(tree, query);
  const double value = evaluate_query(
      plan, tree, std::span<const V>(marginals.data(), marginals.size()), query);
  const OpCounts used = op_counts();

  out << "query: " << query.to_string(*loaded.model) << "\n";
  if (stats) {
    for (std::size_t i = 0; i < plan.nodes.size(); ++i)
      out << "plan node " << plan.nodes[i] + 1 << " projected "
          << loaded.model->render(plan.projected[i]) << "\n";
    out << "root: node " << plan.root + 1 << "\n";
  }
  out << "value: " << format_value(value) << "\n";
  if (stats) {
    print_stats_line(out, "stats", used);
    op_counts().reset();
    (void)propagate_all(assignment, root);
    print_stats_line(out, "full-propagation", op_counts());
  }
  return 0;
}

int cmd_query(const std::string& path, const std::string& text, int root_1based,
              bool stats, std::ostream& out) {
  const LoadedModel loaded = load_model_file(path);
  switch (loaded.kind) {
    case InstanceKind::Probability:
      return run_query(loaded, to_potentials(loaded), text, root_1based, stats,
                       out);
    case InstanceKind::Boolean:
      return run_query(loaded, to_relations(loaded), text, root_1based, stats,
                       out);
    case InstanceKind::Commonality:
      throw CapabilityError(
          "query evaluation needs configuration-addressed values; commonality "
          "tables are subset-addressed");
    case InstanceKind::HypergraphOnly:
      throw ModelError("query evaluation needs a model file with factors");
  }
  throw InvariantError("unreachable instance kind");
}

template <Removable V>
int run_chain(const LoadedModel& loaded, std::vector<V> factors,
              const std::string& out_path, int root_1based, std::ostream& out) {
  const MarkovTree tree = tree_for(loaded);
  const auto assignment = TreeAssignment<V>::route_factors(
      tree, std::span<const V>(factors.data(), factors.size()));
  const int root = checked_root(tree, root_1based);
  const SetChain<V> chain = build_setchain(assignment, root);
  const ChainFile file = chain_to_file(chain, loaded.kind);
  std::ofstream f(out_path);
  if (!f) throw ModelError("cannot write '" + out_path + "'");
  f << render_chain(file, *loaded.model);
  f.close();
  if (!f) throw ModelError("cannot write '" + out_path + "'");
  out << "chain with " << chain.factors.size() << " factors written to "
      << out_path << "\n";
  return 0;
}

int cmd_chain(const std::string& path, const std::string& out_path,
              int root_1based, std::ostream& out) {
  const LoadedModel loaded = load_model_file(path);
  switch (loaded.kind) {
    case InstanceKind::Probability:
      return run_chain(loaded, to_potentials(loaded), out_path, root_1based, out);
    case InstanceKind::Commonality:
      return run_chain(loaded, to_commonalities(loaded), out_path, root_1based,
                       out);
    case InstanceKind::Boolean:
      throw CapabilityError("chains need removal; relations have none");
    case InstanceKind::HypergraphOnly:
      throw ModelError("chains need a model file with factors");
  }
  throw InvariantError("unreachable instance kind");
}

template <Removable V>
int run_chain_verify(const LoadedModel& loaded, std::vector<V> factors,
                     const std::string& chain_path, int root_1based,
                     double tolerance, std::ostream& out) {
  const MarkovTree tree = tree_for(loaded);
  const auto assignment = TreeAssignment<V>::route_factors(
      tree, std::span<const V>(factors.data(), factors.size()));
  const int root = checked_root(tree, root_1based);

  SetChain<V> chain;
  if (chain_path.empty()) {
    chain = build_setchain(assignment, root);
  } else {
    const ChainFile file = load_chain_file(chain_path, *loaded.model);
    if (file.kind != loaded.kind)
      throw ModelError("chain instance does not match the model");
    if (file.numbering.size() != tree.size())
      throw ModelError("chain does not cover the tree");
    chain = chain_from_file<V>(file, loaded.model);
    for (const SetChainFactor<V>& f : chain.factors) {
      if (f.node < 0 || static_cast<std::size_t>(f.node) >= tree.size() ||
          f.marginal.scope() != tree.node(f.node))
        throw ModelError("chain factor " + std::to_string(f.position) +
                         " does not match its tree node");
    }
  }

  const ChainCheck<V> check = verify_chain(chain, assignment);
  for (std::size_t i = 0; i < chain.factors.size(); ++i)
    out << "position " << chain.factors[i].position << " node "
        << chain.factors[i].node + 1 << " deviation "
        << format_value(check.node_deviation[i]) << "\n";
  out << "reconstruction deviation: "
      << format_value(check.reconstruction_deviation) << "\n";
  if (check.max_deviation <= tolerance) {
    out << "verdict: chain matches within tolerance\n";
    return 0;
  }
  out << "verdict: chain deviates beyond tolerance\n";
  return 4;
}

int cmd_chain_verify(const std::string& path, const std::string& chain_path,
                     int root_1based, double tolerance, std::ostream& out) {
  const LoadedModel loaded = load_model_file(path);
  switch (loaded.kind) {
    case InstanceKind::Probability:
      return run_chain_verify(loaded, to_potentials(loaded), chain_path,
                              root_1based, tolerance, out);
    case InstanceKind::Commonality:
      return run_chain_verify(loaded, to_commonalities(loaded), chain_path,
                              root_1based, tolerance, out);
    case InstanceKind::Boolean:
      throw CapabilityError("chains need removal; relations have none");
    case InstanceKind::HypergraphOnly:
      throw ModelError("chains need a model file with factors");
  }
  throw InvariantError("unreachable instance kind");
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"valuation based system engine"};
  app.require_subcommand(1);

  std::string file, keep_csv, vars_csv, query_text, out_path, chain_path;
  int node = 0, root = 0;
  bool stats = false;
  double tolerance = 1e-9;

  CLI::App* check = app.add_subcommand("check", "run the covering reduction");
  check->add_option("file", file)->required();
  check->add_option("--keep", keep_csv, "variables the reduction must keep");

  CLI::App* plan = app.add_subcommand("plan", "plan a query over the tree");
  plan->add_option("file", file)->required();
  plan->add_option("--vars", vars_csv, "query variables")->required();

  CLI::App* marginal = app.add_subcommand("marginal", "compute a marginal");
  marginal->add_option("file", file)->required();
  marginal->add_option("--vars", vars_csv, "target variables");
  marginal->add_option("--node", node, "tree node (1-based)");
  marginal->add_option("--root", root, "propagation root (1-based)");

  CLI::App* query = app.add_subcommand("query", "evaluate a query");
  query->add_option("file", file)->required();
  query->add_option("query", query_text)->required();
  query->add_option("--root", root, "chain root (1-based)");
  query->add_flag("--stats", stats, "report operation counts");

  CLI::App* chain = app.add_subcommand("chain", "build and store a chain");
  chain->add_option("file", file)->required();
  chain->add_option("-o,--output", out_path)->required();
  chain->add_option("--root", root, "chain root (1-based)");

  CLI::App* verify = app.add_subcommand("chain-verify", "verify a chain");
  verify->add_option("file", file)->required();
  verify->add_option("--chain", chain_path, "previously written chain file");
  verify->add_option("--root", root, "chain root (1-based)");
  verify->add_option("--tolerance", tolerance, "largest accepted deviation");

  std::vector<const char*> argv;
  argv.push_back("vbs");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return cmd_check(file, keep_csv, out);
    if (plan->parsed()) return cmd_plan(file, vars_csv, out);
    if (marginal->parsed())
      return cmd_marginal(file, vars_csv, node, root, out);
    if (query->parsed()) return cmd_query(file, query_text, root, stats, out);
    if (chain->parsed()) return cmd_chain(file, out_path, root, out);
    if (verify->parsed())
      return cmd_chain_verify(file, chain_path, root, tolerance, out);
    err << "error: no command given\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << " (line " << e.line() << ")\n";
    return 2;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapabilityError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace vbs::cli
