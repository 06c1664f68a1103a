#include "cogcn/graph_ingest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "cogcn/errors.hpp"

namespace cogcn {
namespace {

using nlohmann::json;

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

std::string expect_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError(where + ": expected a string");
  return v.get<std::string>();
}

std::vector<NamePair> read_pairs(const json& doc, const char* key) {
  std::vector<NamePair> out;
  if (!doc.contains(key)) return out;
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw ParseError(std::string("\"") + key + "\" must be an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = std::string(key) + "[" + std::to_string(i) + "]";
    if (!arr[i].is_array() || arr[i].size() != 2)
      throw ParseError(where + ": expected a pair of class names");
    out.emplace_back(expect_string(arr[i][0], where), expect_string(arr[i][1], where));
  }
  return out;
}

std::unordered_map<std::string, Eigen::Index> index_of(const std::vector<std::string>& names) {
  std::unordered_map<std::string, Eigen::Index> idx;
  for (std::size_t i = 0; i < names.size(); ++i) idx.emplace(names[i], static_cast<Eigen::Index>(i));
  return idx;
}

}  // namespace

RawMonolith parse_monolith_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON at line " + std::to_string(line_of(text, e.byte)) + ": " +
                     e.what());
  }
  if (!doc.is_object()) throw ParseError("top-level value must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "classes" && key != "calls" && key != "inheritance" && key != "entrypoints")
      throw ParseError("unknown top-level key \"" + key + "\"");
  }
  if (!doc.contains("classes") || !doc["classes"].is_array())
    throw ParseError("\"classes\" must be an array of strings");

  RawMonolith raw;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < doc["classes"].size(); ++i) {
    auto name = expect_string(doc["classes"][i], "classes[" + std::to_string(i) + "]");
    if (seen.insert(name).second) raw.classes.push_back(std::move(name));
  }

  std::set<NamePair> seen_calls;
  for (auto& p : read_pairs(doc, "calls")) {
    if (seen_calls.insert(p).second) raw.calls.push_back(std::move(p));
  }
  std::set<NamePair> seen_inh;
  for (auto& p : read_pairs(doc, "inheritance")) {
    NamePair key = p.first < p.second ? p : NamePair{p.second, p.first};
    if (seen_inh.insert(key).second) raw.inheritance.push_back(std::move(p));
  }

  if (doc.contains("entrypoints")) {
    const json& eps = doc["entrypoints"];
    if (!eps.is_object()) throw ParseError("\"entrypoints\" must be an object");
    for (const auto& [name, trace] : eps.items()) {
      if (!trace.is_array()) throw ParseError("entrypoints." + name + " must be an array");
      auto& members = raw.entrypoint_traces[name];
      for (std::size_t i = 0; i < trace.size(); ++i)
        members.insert(expect_string(trace[i], "entrypoints." + name + "[" + std::to_string(i) + "]"));
    }
  }

  validate_monolith(raw);
  return raw;
}

RawMonolith parse_monolith(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_monolith_text(buf.str());
}

void validate_monolith(const RawMonolith& raw) {
  std::unordered_set<std::string> known;
  for (const auto& c : raw.classes) {
    if (!known.insert(c).second) throw ValidationError("duplicate class name \"" + c + "\"");
  }
  auto check = [&](const std::string& name, const std::string& where) {
    if (!known.contains(name))
      throw ValidationError("unknown class \"" + name + "\" referenced in " + where);
  };
  for (const auto& [a, b] : raw.calls) {
    check(a, "calls");
    check(b, "calls");
  }
  for (const auto& [a, b] : raw.inheritance) {
    check(a, "inheritance");
    check(b, "inheritance");
    if (a == b) throw ValidationError("class \"" + a + "\" inherits from itself");
  }
  for (const auto& [ep, trace] : raw.entrypoint_traces) {
    for (const auto& c : trace) check(c, "entrypoint \"" + ep + "\"");
  }
}

RawMonolith prune_untraced(const RawMonolith& raw) {
  std::unordered_set<std::string> traced;
  for (const auto& [_, trace] : raw.entrypoint_traces) traced.insert(trace.begin(), trace.end());

  RawMonolith out;
  for (const auto& c : raw.classes) {
    if (traced.contains(c)) out.classes.push_back(c);
  }
  if (out.classes.empty()) throw EmptyGraphError("no class appears in any entrypoint trace");

  auto keep = [&](const NamePair& p) { return traced.contains(p.first) && traced.contains(p.second); };
  std::copy_if(raw.calls.begin(), raw.calls.end(), std::back_inserter(out.calls), keep);
  std::copy_if(raw.inheritance.begin(), raw.inheritance.end(), std::back_inserter(out.inheritance),
               keep);
  out.entrypoint_traces = raw.entrypoint_traces;
  return out;
}

DenseMatrix build_adjacency(const RawMonolith& raw) {
  const auto n = static_cast<Eigen::Index>(raw.classes.size());
  const auto idx = index_of(raw.classes);
  DenseMatrix a = DenseMatrix::Zero(n, n);
  for (const auto& [caller, callee] : raw.calls) {
    const auto i = idx.at(caller), j = idx.at(callee);
    if (i != j) a(i, j) = 1.0;
  }
  return a;
}

AttributeBlocks build_attribute_blocks(const RawMonolith& raw) {
  const auto n = static_cast<Eigen::Index>(raw.classes.size());
  const auto p = static_cast<Eigen::Index>(raw.entrypoint_traces.size());
  const auto idx = index_of(raw.classes);

  AttributeBlocks b{DenseMatrix::Zero(n, p), DenseMatrix::Zero(n, n), DenseMatrix::Zero(n, n)};
  Eigen::Index col = 0;
  for (const auto& [_, trace] : raw.entrypoint_traces) {
    std::vector<Eigen::Index> members;
    for (const auto& c : trace) {
      if (auto it = idx.find(c); it != idx.end()) members.push_back(it->second);
    }
    for (auto i : members) {
      b.entrypoint(i, col) = 1.0;
      for (auto j : members) b.cooccurrence(i, j) += 1.0;
    }
    ++col;
  }
  for (const auto& [x, y] : raw.inheritance) {
    const auto i = idx.at(x), j = idx.at(y);
    if (i == j) continue;
    b.inheritance(i, j) = 1.0;
    b.inheritance(j, i) = 1.0;
  }
  return b;
}

DenseMatrix row_normalize(const DenseMatrix& m) {
  DenseMatrix out = m;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double s = out.row(i).cwiseAbs().sum();
    if (s > 0.0) out.row(i) /= s;
  }
  return out;
}

DenseMatrix assemble_attributes(const AttributeBlocks& blocks) {
  const auto n = blocks.entrypoint.rows();
  if (blocks.cooccurrence.rows() != n || blocks.inheritance.rows() != n)
    throw ShapeError("assemble_attributes: blocks disagree on row count");
  DenseMatrix x(n, blocks.entrypoint.cols() + blocks.cooccurrence.cols() + blocks.inheritance.cols());
  x << row_normalize(blocks.entrypoint), row_normalize(blocks.cooccurrence),
      row_normalize(blocks.inheritance);
  return x;
}

DenseMatrix symmetrize(const DenseMatrix& a) { return a.cwiseMax(a.transpose()); }

DenseMatrix normalize_adjacency(const DenseMatrix& a, bool symmetrize_first) {
  if (a.rows() != a.cols()) throw ShapeError("normalize_adjacency: matrix must be square");
  DenseMatrix tilde = symmetrize_first ? symmetrize(a) : a;
  tilde.diagonal().array() += 1.0;
  const DenseVector inv_sqrt = tilde.rowwise().sum().cwiseSqrt().cwiseInverse();
  return inv_sqrt.asDiagonal() * tilde * inv_sqrt.asDiagonal();
}

AppGraph build_app_graph(const RawMonolith& raw) {
  RawMonolith pruned = prune_untraced(raw);
  AppGraph g;
  g.node_names = pruned.classes;
  for (const auto& [name, _] : pruned.entrypoint_traces) g.entrypoint_names.push_back(name);
  g.adjacency = build_adjacency(pruned);
  g.blocks = build_attribute_blocks(pruned);
  g.attributes = assemble_attributes(g.blocks);
  return g;
}

std::string monolith_to_json(const RawMonolith& raw) {
  json doc;
  doc["classes"] = raw.classes;
  doc["calls"] = json::array();
  for (const auto& [a, b] : raw.calls) doc["calls"].push_back({a, b});
  doc["inheritance"] = json::array();
  for (const auto& [a, b] : raw.inheritance) doc["inheritance"].push_back({a, b});
  doc["entrypoints"] = json::object();
  for (const auto& [ep, trace] : raw.entrypoint_traces)
    doc["entrypoints"][ep] = std::vector<std::string>(trace.begin(), trace.end());
  return doc.dump(1) + "\n";
}

}  // namespace cogcn
