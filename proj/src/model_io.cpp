#include "vbs/model_io.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace vbs {

namespace {

struct Row {
  int line = 0;
  std::vector<std::string> tokens;
};

std::vector<Row> tokenize(std::string_view text) {
  std::vector<Row> rows;
  int line = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    ++line;
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    const std::size_t hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    Row row;
    row.line = line;
    std::size_t p = 0;
    while (p < raw.size()) {
      while (p < raw.size() && std::isspace(static_cast<unsigned char>(raw[p]))) ++p;
      std::size_t q = p;
      while (q < raw.size() && !std::isspace(static_cast<unsigned char>(raw[q]))) ++q;
      if (q > p) row.tokens.emplace_back(raw.substr(p, q - p));
      p = q;
    }
    if (!row.tokens.empty()) rows.push_back(std::move(row));
    if (end == text.size()) break;
    start = end + 1;
  }
  return rows;
}

double parse_number(const std::string& token, int line) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + token.size())
    throw ParseError("expected a number, got '" + token + "'", line, 1);
  return v;
}

int parse_int(const std::string& token, int line) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end != begin + token.size())
    throw ParseError("expected an integer, got '" + token + "'", line, 1);
  return static_cast<int>(v);
}

// Reads exactly `count` numbers from whole rows starting at `cursor`.
std::vector<double> read_values(const std::vector<Row>& rows, std::size_t& cursor,
                                std::size_t count, int header_line) {
  std::vector<double> out;
  out.reserve(count);
  while (out.size() < count) {
    if (cursor >= rows.size())
      throw ParseError("table starting after line " + std::to_string(header_line) +
                           " ends early: got " + std::to_string(out.size()) +
                           " of " + std::to_string(count) + " values",
                       header_line, 1);
    const Row& row = rows[cursor];
    for (const std::string& t : row.tokens) {
      if (out.size() == count)
        throw ParseError("table has more values than the scope allows", row.line, 1);
      out.push_back(parse_number(t, row.line));
    }
    ++cursor;
  }
  return out;
}

VarSet resolve_scope(const Model& model, const Row& row, std::size_t first_token,
                     bool require_declaration_order) {
  std::vector<VarId> ids;
  for (std::size_t i = first_token; i < row.tokens.size(); ++i) {
    const auto id = model.find(row.tokens[i]);
    if (!id)
      throw ParseError("unknown variable '" + row.tokens[i] + "'", row.line, 1);
    ids.push_back(*id);
  }
  for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
    if (ids[i] == ids[i + 1] ||
        (require_declaration_order && ids[i] > ids[i + 1]))
      throw ParseError(require_declaration_order
                           ? "factor variables must be distinct and listed in "
                             "declaration order"
                           : "scope variables must be distinct",
                       row.line, 1);
  }
  const std::size_t n = ids.size();
  VarSet scope = VarSet::from_unsorted(std::move(ids));
  if (scope.size() != n)
    throw ParseError("scope variables must be distinct", row.line, 1);
  return scope;
}

std::size_t table_size_for(InstanceKind kind, const Model& model,
                           const VarSet& scope) {
  const ConfigIndexer idx(model, scope);
  if (kind != InstanceKind::Commonality) return idx.size();
  if (idx.size() > CommonalityTable::kMaxConfigs)
    throw CapabilityError("commonality scope " + model.render(scope) + " has " +
                          std::to_string(idx.size()) +
                          " configurations, limit is " +
                          std::to_string(CommonalityTable::kMaxConfigs));
  return (std::size_t{1} << idx.size()) - 1;
}

}  // namespace

std::string_view instance_name(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::Probability: return "probability";
    case InstanceKind::Commonality: return "commonality";
    case InstanceKind::Boolean: return "boolean";
    case InstanceKind::HypergraphOnly: return "hypergraph";
  }
  return "?";
}

Hypergraph LoadedModel::hypergraph() const {
  std::vector<VarSet> edges;
  for (const VarSet& s : scopes) {
    bool known = false;
    for (const VarSet& e : edges) {
      if (e == s) {
        known = true;
        break;
      }
    }
    if (!known) edges.push_back(s);
  }
  return Hypergraph(model, std::move(edges));
}

LoadedModel parse_model_text(std::string_view text, const std::string& origin) {
  const std::vector<Row> rows = tokenize(text);
  if (rows.empty()) throw ParseError(origin + ": empty input", 1, 1);

  LoadedModel out;
  auto model = std::make_shared<Model>();
  std::size_t cursor = 0;

  const Row& head = rows[cursor];
  if (head.tokens[0] == "hypergraph") {
    if (head.tokens.size() != 1)
      throw ParseError("'hypergraph' takes no arguments", head.line, 1);
    out.kind = InstanceKind::HypergraphOnly;
    ++cursor;
    std::vector<VarSet> edges;
    bool edges_started = false;
    for (; cursor < rows.size(); ++cursor) {
      const Row& row = rows[cursor];
      const std::string& kw = row.tokens[0];
      if (kw == "var") {
        if (edges_started)
          throw ParseError("var rows must precede edge rows", row.line, 1);
        if (row.tokens.size() < 2)
          throw ParseError("var needs a name", row.line, 1);
        std::vector<std::string> frame(row.tokens.begin() + 2, row.tokens.end());
        if (frame.empty()) frame = {"true", "false"};
        model->add_variable(row.tokens[1], std::move(frame));
      } else if (kw == "edge") {
        edges_started = true;
        if (row.tokens.size() < 2)
          throw ParseError("edge needs at least one variable", row.line, 1);
        std::vector<VarId> ids;
        for (std::size_t i = 1; i < row.tokens.size(); ++i) {
          auto id = model->find(row.tokens[i]);
          if (!id) id = model->add_variable(row.tokens[i], {"true", "false"});
          ids.push_back(*id);
        }
        const std::size_t n = ids.size();
        VarSet e = VarSet::from_unsorted(std::move(ids));
        if (e.size() != n)
          throw ParseError("edge variables must be distinct", row.line, 1);
        edges.push_back(std::move(e));
      } else {
        throw ParseError("unexpected keyword '" + kw + "'", row.line, 1);
      }
    }
    if (edges.empty())
      throw ParseError("hypergraph file declares no edges", head.line, 1);
    out.model = model;
    out.scopes = std::move(edges);
    return out;
  }

  if (head.tokens[0] != "instance")
    throw ParseError("input must start with 'instance' or 'hypergraph'",
                     head.line, 1);
  if (head.tokens.size() != 2)
    throw ParseError("usage: instance probability|commonality|boolean",
                     head.line, 1);
  if (head.tokens[1] == "probability") {
    out.kind = InstanceKind::Probability;
  } else if (head.tokens[1] == "commonality") {
    out.kind = InstanceKind::Commonality;
  } else if (head.tokens[1] == "boolean") {
    out.kind = InstanceKind::Boolean;
  } else {
    throw ParseError("unknown instance '" + head.tokens[1] + "'", head.line, 1);
  }
  ++cursor;

  bool factors_started = false;
  while (cursor < rows.size()) {
    const Row& row = rows[cursor];
    const std::string& kw = row.tokens[0];
    if (kw == "var") {
      if (factors_started)
        throw ParseError("var rows must precede factor rows", row.line, 1);
      if (row.tokens.size() < 3)
        throw ParseError("var needs a name and at least one value", row.line, 1);
      model->add_variable(row.tokens[1],
                          {row.tokens.begin() + 2, row.tokens.end()});
      ++cursor;
    } else if (kw == "factor") {
      factors_started = true;
      const VarSet scope = resolve_scope(*model, row, 1, true);
      ++cursor;
      const std::size_t need = table_size_for(out.kind, *model, scope);
      out.tables.push_back(read_values(rows, cursor, need, row.line));
      out.scopes.push_back(scope);
    } else {
      throw ParseError("unexpected keyword '" + kw + "'", row.line, 1);
    }
  }
  if (out.scopes.empty())
    throw ParseError("model declares no factors", head.line, 1);
  out.model = model;
  return out;
}

LoadedModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model_text(buffer.str(), path);
}

std::vector<ProbabilityPotential> to_potentials(const LoadedModel& loaded) {
  if (loaded.kind != InstanceKind::Probability)
    throw ModelError("model is not a probability instance");
  std::vector<ProbabilityPotential> out;
  for (std::size_t i = 0; i < loaded.scopes.size(); ++i)
    out.emplace_back(loaded.model, loaded.scopes[i], loaded.tables[i]);
  return out;
}

std::vector<CommonalityTable> to_commonalities(const LoadedModel& loaded) {
  if (loaded.kind != InstanceKind::Commonality)
    throw ModelError("model is not a commonality instance");
  std::vector<CommonalityTable> out;
  for (std::size_t i = 0; i < loaded.scopes.size(); ++i)
    out.emplace_back(loaded.model, loaded.scopes[i], loaded.tables[i]);
  return out;
}

std::vector<BooleanRelation> to_relations(const LoadedModel& loaded) {
  if (loaded.kind != InstanceKind::Boolean)
    throw ModelError("model is not a boolean instance");
  std::vector<BooleanRelation> out;
  for (std::size_t i = 0; i < loaded.scopes.size(); ++i) {
    std::vector<std::uint8_t> rows;
    rows.reserve(loaded.tables[i].size());
    for (double v : loaded.tables[i]) {
      if (v != 0.0 && v != 1.0)
        throw ModelError("boolean tables may only hold 0 or 1");
      rows.push_back(v == 1.0 ? 1 : 0);
    }
    out.emplace_back(loaded.model, loaded.scopes[i], std::move(rows));
  }
  return out;
}

namespace {

std::string render_scope_names(const Model& model, const VarSet& scope) {
  std::string out;
  for (VarId v : scope) {
    out += " ";
    out += model.var(v).name;
  }
  return out;
}

std::string render_values(const std::vector<double>& values) {
  std::string out;
  char buf[64];
  for (double v : values) {
    std::snprintf(buf, sizeof buf, " %.17g", v);
    out += buf;
  }
  return out;
}

}  // namespace

std::string render_chain(const ChainFile& chain, const Model& model) {
  std::string out = "chain ";
  out += instance_name(chain.kind);
  out += "\nnodes " + std::to_string(chain.numbering.size()) + "\nnumbering";
  for (int node : chain.numbering) out += " " + std::to_string(node + 1);
  out += "\n";
  for (const ChainFile::Factor& f : chain.factors) {
    out += "factor " + std::to_string(f.position) + "\n";
    out += "node " + std::to_string(f.node + 1) + "\n";
    out += "scope" + render_scope_names(model, f.scope) + "\n";
    out += "values" + render_values(f.values) + "\n";
    if (f.separator_scope) {
      out += "separator-scope" + render_scope_names(model, *f.separator_scope) + "\n";
      out += "separator-values" + render_values(f.separator_values) + "\n";
    }
  }
  return out;
}

ChainFile parse_chain_text(std::string_view text, const Model& model,
                           const std::string& origin) {
  const std::vector<Row> rows = tokenize(text);
  std::size_t cursor = 0;
  auto need_row = [&](const std::string& kw) -> const Row& {
    if (cursor >= rows.size())
      throw ParseError(origin + ": expected '" + kw + "', got end of input",
                       rows.empty() ? 1 : rows.back().line, 1);
    const Row& row = rows[cursor];
    if (row.tokens[0] != kw)
      throw ParseError("expected '" + kw + "', got '" + row.tokens[0] + "'",
                       row.line, 1);
    ++cursor;
    return row;
  };

  ChainFile out;
  const Row& head = need_row("chain");
  if (head.tokens.size() != 2)
    throw ParseError("usage: chain probability|commonality", head.line, 1);
  if (head.tokens[1] == "probability") {
    out.kind = InstanceKind::Probability;
  } else if (head.tokens[1] == "commonality") {
    out.kind = InstanceKind::Commonality;
  } else {
    throw ParseError("unknown chain instance '" + head.tokens[1] + "'",
                     head.line, 1);
  }

  const Row& nodes_row = need_row("nodes");
  if (nodes_row.tokens.size() != 2)
    throw ParseError("usage: nodes <count>", nodes_row.line, 1);
  const int n = parse_int(nodes_row.tokens[1], nodes_row.line);
  if (n < 1) throw ParseError("chain needs at least one node", nodes_row.line, 1);

  const Row& numbering_row = need_row("numbering");
  if (numbering_row.tokens.size() != static_cast<std::size_t>(n) + 1)
    throw ParseError("numbering must list every node", numbering_row.line, 1);
  for (int k = 1; k <= n; ++k)
    out.numbering.push_back(
        parse_int(numbering_row.tokens[static_cast<std::size_t>(k)],
                  numbering_row.line) -
        1);

  for (int k = 1; k <= n; ++k) {
    ChainFile::Factor f;
    const Row& factor_row = need_row("factor");
    if (factor_row.tokens.size() != 2 ||
        parse_int(factor_row.tokens[1], factor_row.line) != k)
      throw ParseError("expected 'factor " + std::to_string(k) + "'",
                       factor_row.line, 1);
    f.position = k;
    const Row& node_row = need_row("node");
    if (node_row.tokens.size() != 2)
      throw ParseError("usage: node <id>", node_row.line, 1);
    f.node = parse_int(node_row.tokens[1], node_row.line) - 1;

    const Row& scope_row = need_row("scope");
    f.scope = resolve_scope(model, scope_row, 1, false);
    const Row& values_row = need_row("values");
    for (std::size_t i = 1; i < values_row.tokens.size(); ++i)
      f.values.push_back(parse_number(values_row.tokens[i], values_row.line));
    const std::size_t need = table_size_for(out.kind, model, f.scope);
    if (f.values.size() != need)
      throw ParseError("factor " + std::to_string(k) + " needs " +
                           std::to_string(need) + " values",
                       values_row.line, 1);

    if (k > 1) {
      const Row& sep_scope_row = need_row("separator-scope");
      f.separator_scope = resolve_scope(model, sep_scope_row, 1, false);
      const Row& sep_values_row = need_row("separator-values");
      for (std::size_t i = 1; i < sep_values_row.tokens.size(); ++i)
        f.separator_values.push_back(
            parse_number(sep_values_row.tokens[i], sep_values_row.line));
      const std::size_t sep_need =
          table_size_for(out.kind, model, *f.separator_scope);
      if (f.separator_values.size() != sep_need)
        throw ParseError("separator of factor " + std::to_string(k) +
                             " needs " + std::to_string(sep_need) + " values",
                         sep_values_row.line, 1);
    }
    out.factors.push_back(std::move(f));
  }
  if (cursor != rows.size())
    throw ParseError("unexpected trailing input", rows[cursor].line, 1);
  return out;
}

ChainFile load_chain_file(const std::string& path, const Model& model) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_chain_text(buffer.str(), model, path);
}

}  // namespace vbs
