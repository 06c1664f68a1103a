#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cogcn/numkit.hpp"

namespace cogcn {

using NamePair = std::pair<std::string, std::string>;

/// Monolith description as read from disk, before any matrix is built.
struct RawMonolith {
  std::vector<std::string> classes;
  /// Directed (caller, callee) pairs, unique, in first-seen order.
  std::vector<NamePair> calls;
  /// Unordered pairs, unique, in first-seen order.
  std::vector<NamePair> inheritance;
  /// Entrypoint name -> classes reached in its execution trace. std::map
  /// keeps entrypoints in lexicographic order, which fixes EP columns.
  std::map<std::string, std::set<std::string>> entrypoint_traces;

  bool operator==(const RawMonolith&) const = default;
};

struct AttributeBlocks {
  DenseMatrix entrypoint;    // |V| x |P|, binary
  DenseMatrix cooccurrence;  // |V| x |V|, trace co-occurrence counts
  DenseMatrix inheritance;   // |V| x |V|, symmetric binary
};

/// Attributed class graph. `adjacency` keeps the original call direction;
/// `blocks` are stored before row normalization.
struct AppGraph {
  std::vector<std::string> node_names;
  std::vector<std::string> entrypoint_names;
  DenseMatrix adjacency;
  AttributeBlocks blocks;
  DenseMatrix attributes;  // [EP | Co | In], each block row-normalized

  Eigen::Index num_nodes() const { return adjacency.rows(); }
  Eigen::Index feature_dim() const { return attributes.cols(); }
};

/// Parses and validates a monolith JSON document. Throws ParseError for
/// malformed JSON or schema violations, ValidationError for unknown names.
RawMonolith parse_monolith_text(std::string_view text);
RawMonolith parse_monolith(const std::filesystem::path& path);

/// Checks the RawMonolith invariants, throwing ValidationError on failure.
void validate_monolith(const RawMonolith& raw);

/// Drops classes that no entrypoint trace reaches, plus every pair touching
/// them. Throws EmptyGraphError if nothing survives.
RawMonolith prune_untraced(const RawMonolith& raw);

/// A(i,j) = 1 iff class i calls class j. Inheritance is not an edge.
DenseMatrix build_adjacency(const RawMonolith& raw);

AttributeBlocks build_attribute_blocks(const RawMonolith& raw);

/// Divides each row by its L1 sum; all-zero rows stay zero.
DenseMatrix row_normalize(const DenseMatrix& m);

/// Row-normalizes each block and concatenates them column-wise.
DenseMatrix assemble_attributes(const AttributeBlocks& blocks);

/// max(A, A^T).
DenseMatrix symmetrize(const DenseMatrix& a);

/// D^-1/2 (A + I) D^-1/2 with D the row sums of A + I. When `symmetrize_first`
/// is set, A is replaced by max(A, A^T) beforehand.
DenseMatrix normalize_adjacency(const DenseMatrix& a, bool symmetrize_first = true);

/// prune_untraced, then the adjacency and attribute builders.
AppGraph build_app_graph(const RawMonolith& raw);

/// Serializes back into the input schema (used for synthetic fixtures).
std::string monolith_to_json(const RawMonolith& raw);

}  // namespace cogcn
