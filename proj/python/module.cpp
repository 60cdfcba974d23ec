#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "vbs/cli.hpp"
#include "vbs/model_io.hpp"
#include "vbs/propagation.hpp"
#include "vbs/query.hpp"
#include "vbs/setchain.hpp"

namespace py = pybind11;

namespace {

py::tuple run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = vbs::cli::run(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

vbs::MarkovTree tree_of(const vbs::LoadedModel& loaded) {
  return vbs::build_markov_tree(vbs::cover_hypertree(loaded.hypergraph()));
}

template <vbs::Valuation V>
double query_value_impl(const vbs::LoadedModel& loaded, std::vector<V> factors,
                        const std::string& query_text) {
  const vbs::MarkovTree tree = tree_of(loaded);
  const auto assignment = vbs::TreeAssignment<V>::route_factors(
      tree, std::span<const V>(factors.data(), factors.size()));
  const vbs::QueryExpr query = vbs::QueryExpr::parse(*loaded.model, query_text);
  std::vector<V> marginals;
  if constexpr (vbs::Removable<V>) {
    marginals = vbs::marginals_by_node(vbs::build_setchain(assignment), tree);
  } else {
    marginals = vbs::propagate_all(assignment).marginals;
  }
  const vbs::QueryPlan plan = vbs::plan_query(tree, query);
  return vbs::evaluate_query(
      plan, tree, std::span<const V>(marginals.data(), marginals.size()), query);
}

double query_value(const std::string& model_text, const std::string& query_text) {
  const vbs::LoadedModel loaded = vbs::parse_model_text(model_text);
  switch (loaded.kind) {
    case vbs::InstanceKind::Probability:
      return query_value_impl(loaded, vbs::to_potentials(loaded), query_text);
    case vbs::InstanceKind::Boolean:
      return query_value_impl(loaded, vbs::to_relations(loaded), query_text);
    default:
      throw vbs::CapabilityError(
          "query evaluation needs a probability or boolean model");
  }
}

template <vbs::Valuation V>
std::vector<double> marginal_impl(const vbs::LoadedModel& loaded,
                                  std::vector<V> factors, const vbs::VarSet& vars) {
  const vbs::MarkovTree tree = tree_of(loaded);
  const auto assignment = vbs::TreeAssignment<V>::route_factors(
      tree, std::span<const V>(factors.data(), factors.size()));
  const auto result = vbs::propagate_all(assignment);
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (vars.subset_of(tree.node(static_cast<int>(i)))) {
      const V r = marginalize(result.marginals[i], vars);
      std::vector<double> values;
      values.reserve(r.entry_count());
      for (std::size_t j = 0; j < r.entry_count(); ++j)
        values.push_back(r.entry(j));
      return values;
    }
  }
  throw vbs::ModelError("no single tree node covers the requested variables");
}

vbs::VarSet resolve(const vbs::Model& model, const std::vector<std::string>& names) {
  std::vector<vbs::VarId> ids;
  for (const std::string& name : names) {
    const auto id = model.find(name);
    if (!id) throw vbs::ModelError("unknown variable '" + name + "'");
    ids.push_back(*id);
  }
  return vbs::VarSet::from_unsorted(std::move(ids));
}

std::vector<double> marginal_values(const std::string& model_text,
                                    const std::vector<std::string>& names) {
  const vbs::LoadedModel loaded = vbs::parse_model_text(model_text);
  const vbs::VarSet vars = resolve(*loaded.model, names);
  switch (loaded.kind) {
    case vbs::InstanceKind::Probability:
      return marginal_impl(loaded, vbs::to_potentials(loaded), vars);
    case vbs::InstanceKind::Commonality:
      return marginal_impl(loaded, vbs::to_commonalities(loaded), vars);
    case vbs::InstanceKind::Boolean:
      return marginal_impl(loaded, vbs::to_relations(loaded), vars);
    default:
      throw vbs::ModelError("marginals need a model file with factors");
  }
}

std::string check_report(const std::string& text,
                         const std::vector<std::string>& keep_names) {
  const vbs::LoadedModel loaded = vbs::parse_model_text(text);
  const vbs::Hypergraph h = loaded.hypergraph();
  const vbs::VarSet keep = resolve(*loaded.model, keep_names);
  const vbs::GrahamResult g =
      keep.empty() ? vbs::graham_test(h) : vbs::modified_graham(h, keep);
  std::string out;
  for (const vbs::GrahamStep& s : g.trace)
    out += vbs::render_step(*loaded.model, s) + "\n";
  if (keep.empty())
    out += std::string("verdict: ") +
           (g.fully_reduced ? "hypertree" : "not a hypertree") + "\n";
  for (const auto& [idx, content] : g.residual)
    out += "residual edge " + std::to_string(idx + 1) + " " +
           loaded.model->render(content) + "\n";
  return out;
}

std::string plan_report(const std::string& text,
                        const std::vector<std::string>& names) {
  const vbs::LoadedModel loaded = vbs::parse_model_text(text);
  const vbs::MarkovTree tree = tree_of(loaded);
  const vbs::QueryPlan plan = vbs::plan_vars(tree, resolve(*loaded.model, names));
  std::string out;
  for (std::size_t i = 0; i < plan.nodes.size(); ++i)
    out += "plan node " + std::to_string(plan.nodes[i] + 1) + " projected " +
           loaded.model->render(plan.projected[i]) + "\n";
  out += "root: node " + std::to_string(plan.root + 1) + "\n";
  return out;
}

template <vbs::Removable V>
std::string chain_report_impl(const vbs::LoadedModel& loaded,
                              std::vector<V> factors) {
  const vbs::MarkovTree tree = tree_of(loaded);
  const auto assignment = vbs::TreeAssignment<V>::route_factors(
      tree, std::span<const V>(factors.data(), factors.size()));
  const vbs::SetChain<V> chain = vbs::build_setchain(assignment);
  return vbs::render_chain(vbs::chain_to_file(chain, loaded.kind),
                           *loaded.model);
}

std::string chain_report(const std::string& model_text) {
  const vbs::LoadedModel loaded = vbs::parse_model_text(model_text);
  switch (loaded.kind) {
    case vbs::InstanceKind::Probability:
      return chain_report_impl(loaded, vbs::to_potentials(loaded));
    case vbs::InstanceKind::Commonality:
      return chain_report_impl(loaded, vbs::to_commonalities(loaded));
    default:
      throw vbs::CapabilityError("chains need removal");
  }
}

}  // namespace

PYBIND11_MODULE(_vbs, m) {
  m.doc() = "valuation based system engine";

  py::register_exception<vbs::ModelError>(m, "ModelError", PyExc_ValueError);
  py::register_exception<vbs::CapabilityError>(m, "CapabilityError",
                                               PyExc_RuntimeError);

  m.def("run_cli", &run_cli, py::arg("args"),
        "Run the command line; returns (exit_code, stdout, stderr).");
  m.def("query_value", &query_value, py::arg("model_text"), py::arg("query"),
        "Evaluate a query against a model given as text.");
  m.def("marginal_values", &marginal_values, py::arg("model_text"),
        py::arg("variables"), "Dense marginal table over the given variables.");
  m.def("check_report", &check_report, py::arg("text"),
        py::arg("keep") = std::vector<std::string>{},
        "Reduction trace and verdict for a model or hypergraph given as text.");
  m.def("plan_report", &plan_report, py::arg("text"), py::arg("variables"),
        "Query plan for the given variables.");
  m.def("chain_report", &chain_report, py::arg("model_text"),
        "The chain file a model produces.");
}
