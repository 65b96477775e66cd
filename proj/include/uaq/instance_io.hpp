#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uaq/generators.hpp"
#include "uaq/model.hpp"
#include "uaq/reduce.hpp"

namespace uaq {

/// Parses an instance document and validates it. Syntax errors carry
/// "line L, column C"; unknown and duplicate labels are named.
Instance parse_instance(std::string_view text);

/// Canonical text: labels sorted, rp pairs sorted, constraint roles sorted
/// and constraints ordered by their first role label. Ends with a newline.
std::string serialize_instance(const Instance& inst);

Instance read_instance_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

struct SolutionDocument {
  bool sat = false;
  /// Role labels; present iff sat.
  std::vector<std::string> roles;
  std::string engine;
  std::int64_t wall_ms = 0;

  friend bool operator==(const SolutionDocument&, const SolutionDocument&) = default;
};

SolutionDocument parse_solution(std::string_view text);
std::string serialize_solution(const SolutionDocument& doc);

/// Labels of `sol` in the instance's role order.
SolutionDocument make_solution_document(const Instance& inst, const std::optional<Solution>& sol,
                                        const std::string& engine, std::int64_t wall_ms);

/// Resolves the labels of a sat document against `inst`; throws InputError on
/// an unknown role or an unsat document.
Solution solution_from_document(const Instance& inst, const SolutionDocument& doc);

std::string serialize_branch_tree(const BranchTree& tree);

/// {"a": [...], "b": [...], "edges": [[a, b], ...]}
BipartiteGraph parse_bipartite_graph(std::string_view text);
/// {"a_blocks": [[...], ...], "b_blocks": [[...], ...], "edges": [[a, b], ...]}; k is the class count.
BipartiteInstance parse_blocked_graph(std::string_view text);
std::string serialize_blocked_graph(const BipartiteInstance& g);

/// Object with any subset of the RandomSpec field names; absent fields keep
/// their defaults.
RandomSpec parse_random_spec(std::string_view text);

}  // namespace uaq
