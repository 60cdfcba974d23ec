#include <algorithm>
#include <cctype>

#include "vbs/query.hpp"

namespace vbs {

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '-';
}

class Parser {
public:
  Parser(const Model& model, std::string_view text) : model_(model), text_(text) {}

  QueryExpr run() {
    QueryExpr e = parse_or();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& why) {
    throw ParseError("query: " + why, 1, static_cast<int>(pos_) + 1);
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string ident() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    if (pos_ == start) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  QueryExpr parse_or() {
    std::vector<QueryExpr> terms;
    terms.push_back(parse_and());
    while (eat('|')) terms.push_back(parse_and());
    if (terms.size() == 1) return std::move(terms.front());
    return QueryExpr::disjunction(std::move(terms));
  }

  QueryExpr parse_and() {
    std::vector<QueryExpr> terms;
    terms.push_back(parse_unary());
    while (eat('&')) terms.push_back(parse_unary());
    if (terms.size() == 1) return std::move(terms.front());
    return QueryExpr::conjunction(std::move(terms));
  }

  QueryExpr parse_unary() {
    if (eat('!')) return QueryExpr::negate(parse_unary());
    if (eat('(')) {
      QueryExpr e = parse_or();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    const std::string name = ident();
    const auto var = model_.find(name);
    if (!var) fail("unknown variable '" + name + "'");
    if (!eat('=')) fail("expected '=' after '" + name + "'");
    const std::string value = ident();
    const auto& frame = model_.var(*var).frame;
    const auto at = std::find(frame.begin(), frame.end(), value);
    if (at == frame.end())
      fail("variable '" + name + "' has no value '" + value + "'");
    return QueryExpr::literal(*var, static_cast<int>(at - frame.begin()));
  }

  const Model& model_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

QueryExpr QueryExpr::parse(const Model& model, std::string_view text) {
  return Parser(model, text).run();
}

QueryExpr QueryExpr::literal(VarId var, int value) {
  QueryExpr e;
  e.kind_ = Kind::Literal;
  e.var_ = var;
  e.value_ = value;
  e.vars_ = VarSet{var};
  return e;
}

QueryExpr QueryExpr::negate(QueryExpr inner) {
  QueryExpr e;
  e.kind_ = Kind::Not;
  e.vars_ = inner.vars();
  e.children_.push_back(std::move(inner));
  return e;
}

QueryExpr QueryExpr::conjunction(std::vector<QueryExpr> terms) {
  if (terms.empty()) throw ModelError("conjunction needs operands");
  if (terms.size() == 1) return std::move(terms.front());
  QueryExpr e;
  e.kind_ = Kind::And;
  for (const QueryExpr& t : terms) e.vars_ = e.vars_ | t.vars();
  e.children_ = std::move(terms);
  return e;
}

QueryExpr QueryExpr::disjunction(std::vector<QueryExpr> terms) {
  if (terms.empty()) throw ModelError("disjunction needs operands");
  if (terms.size() == 1) return std::move(terms.front());
  QueryExpr e;
  e.kind_ = Kind::Or;
  for (const QueryExpr& t : terms) e.vars_ = e.vars_ | t.vars();
  e.children_ = std::move(terms);
  return e;
}

bool QueryExpr::evaluate(const Configuration& c) const {
  switch (kind_) {
    case Kind::Literal:
      return c.value_of(var_) == value_;
    case Kind::Not:
      return !children_[0].evaluate(c);
    case Kind::And:
      for (const QueryExpr& t : children_) {
        if (!t.evaluate(c)) return false;
      }
      return true;
    case Kind::Or:
      for (const QueryExpr& t : children_) {
        if (t.evaluate(c)) return true;
      }
      return false;
  }
  throw InvariantError("unreachable query node kind");
}

std::string QueryExpr::to_string(const Model& model) const {
  switch (kind_) {
    case Kind::Literal:
      return model.var(var_).name + "=" +
             model.var(var_).frame[static_cast<std::size_t>(value_)];
    case Kind::Not:
      return "!" + children_[0].to_string(model);
    case Kind::And:
    case Kind::Or: {
      std::string out = "(";
      for (std::size_t i = 0; i < children_.size(); ++i) {
        if (i) out += kind_ == Kind::And ? " & " : " | ";
        out += children_[i].to_string(model);
      }
      return out + ")";
    }
  }
  throw InvariantError("unreachable query node kind");
}

std::size_t QueryPlan::position_of(int node) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] == node) return i;
  }
  throw InvariantError("node is not part of the plan");
}

QueryPlan plan_query(const MarkovTree& tree, const QueryExpr& query) {
  return plan_vars(tree, query.vars());
}

QueryPlan plan_vars(const MarkovTree& tree, const VarSet& qvars) {
  if (qvars.empty()) throw ModelError("query mentions no variables");
  VarSet covered;
  for (std::size_t i = 0; i < tree.size(); ++i)
    covered = covered | tree.node(static_cast<int>(i));
  if (!qvars.subset_of(covered))
    throw ModelError("query variables " + tree.model()->render(qvars - covered) +
                     " are not in the tree");

  const Hypergraph h(tree.model(), tree.nodes());
  const GrahamResult reduced = modified_graham(h, qvars);

  std::vector<bool> marked(tree.size(), false);
  for (const auto& [idx, content] : reduced.residual)
    marked[static_cast<std::size_t>(idx)] = true;

  // Close up to the spanning subtree: drop unmarked leaves until none remain.
  std::vector<bool> in_plan(tree.size(), true);
  std::vector<int> degree(tree.size(), 0);
  for (std::size_t i = 0; i < tree.size(); ++i)
    degree[i] = static_cast<int>(tree.neighbors(static_cast<int>(i)).size());
  bool shrunk = true;
  while (shrunk) {
    shrunk = false;
    for (std::size_t i = 0; i < tree.size(); ++i) {
      if (!in_plan[i] || marked[i] || degree[i] > 1) continue;
      in_plan[i] = false;
      shrunk = true;
      for (int w : tree.neighbors(static_cast<int>(i))) {
        if (in_plan[static_cast<std::size_t>(w)]) --degree[static_cast<std::size_t>(w)];
      }
    }
  }

  QueryPlan plan;
  plan.residual = reduced.residual;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (in_plan[i]) plan.nodes.push_back(static_cast<int>(i));
  }

  for (int u : plan.nodes) {
    VarSet rest = qvars;
    for (int w : plan.nodes) {
      if (w != u) rest = rest | tree.node(w);
    }
    plan.projected.push_back(tree.node(u) & rest);
    plan.union_scope = plan.union_scope | tree.node(u);
  }
  for (const VarSet& p : plan.projected)
    plan.projected_scope = plan.projected_scope | p;

  plan.root = plan.nodes.front();
  std::size_t best = plan.projected.front().size();
  for (std::size_t i = 1; i < plan.nodes.size(); ++i) {
    if (plan.projected[i].size() > best) {
      best = plan.projected[i].size();
      plan.root = plan.nodes[i];
    }
  }

  plan.parent.assign(plan.nodes.size(), -1);
  plan.order.push_back(plan.root);
  std::vector<bool> seen(tree.size(), false);
  seen[static_cast<std::size_t>(plan.root)] = true;
  for (std::size_t qi = 0; qi < plan.order.size(); ++qi) {
    for (int w : tree.neighbors(plan.order[qi])) {
      if (seen[static_cast<std::size_t>(w)] || !in_plan[static_cast<std::size_t>(w)])
        continue;
      seen[static_cast<std::size_t>(w)] = true;
      plan.parent[plan.position_of(w)] = plan.order[qi];
      plan.order.push_back(w);
    }
  }
  if (plan.order.size() != plan.nodes.size())
    throw InvariantError("query plan nodes do not form a connected subtree");
  return plan;
}

}  // namespace vbs
