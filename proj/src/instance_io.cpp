#include "uaq/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <limits>
#include <unordered_map>

#include <json.hpp>

#include "uaq/errors.hpp"

namespace uaq {

namespace {

using json = nlohmann::json;
using ordered = nlohmann::ordered_json;

json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const auto end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(col));
  }
}

const json& field(const json& doc, const char* key) {
  if (!doc.is_object()) throw InputError("expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) throw InputError(std::string("missing field \"") + key + "\"");
  return *it;
}

std::vector<std::string> string_list(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be a list");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw InputError(std::string(what) + " entries must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

int integer(const json& j, const char* what) {
  if (!j.is_number_integer()) throw InputError(std::string(what) + " must be an integer");
  const auto v = j.get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw InputError(std::string(what) + " out of range");
  return static_cast<int>(v);
}

std::unordered_map<std::string, std::size_t> index_labels(const std::vector<std::string>& labels, const char* kind) {
  std::unordered_map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (!out.emplace(labels[i], i).second) throw InputError(std::string("duplicate ") + kind + " \"" + labels[i] + "\"");
  return out;
}

std::size_t lookup(const std::unordered_map<std::string, std::size_t>& ids, const std::string& label,
                   const char* kind) {
  auto it = ids.find(label);
  if (it == ids.end()) throw InputError(std::string("unknown ") + kind + " \"" + label + "\"");
  return it->second;
}

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

ordered instance_object(const Instance& inst) {
  ordered o;
  o["roles"] = sorted(inst.role_labels);
  o["permissions"] = sorted(inst.perm_labels);
  std::vector<std::pair<std::string, std::string>> rp;
  for (RoleId r = 0; r < inst.num_roles(); ++r)
    inst.role_perms[r].for_each([&](std::size_t p) { rp.emplace_back(inst.role_labels[r], inst.perm_labels[p]); });
  std::sort(rp.begin(), rp.end());
  o["rp"] = ordered::array();
  for (auto& [r, p] : rp) o["rp"].push_back({r, p});
  o["plb"] = sorted(inst.labels_of(inst.plb));
  o["pub"] = sorted(inst.labels_of(inst.pub));
  std::vector<std::pair<std::vector<std::string>, int>> cons;
  for (const auto& c : inst.constraints) cons.emplace_back(sorted(inst.labels_of(c.roles)), c.threshold);
  std::sort(cons.begin(), cons.end());
  o["constraints"] = ordered::array();
  for (auto& [roles, t] : cons) {
    ordered c;
    c["roles"] = roles;
    c["t"] = t;
    o["constraints"].push_back(c);
  }
  o["kr"] = inst.kr;
  o["kp"] = inst.kp;
  return o;
}

std::string render_instance(const ordered& o) {
  std::ostringstream out;
  out << "{\n";
  bool first = true;
  for (auto it = o.begin(); it != o.end(); ++it) {
    if (!first) out << ",\n";
    first = false;
    out << "  " << ordered(it.key()).dump() << ": ";
    const auto& v = it.value();
    if ((it.key() == "rp" || it.key() == "constraints") && !v.empty()) {
      out << "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) out << "    " << v[i].dump() << (i + 1 < v.size() ? ",\n" : "\n");
      out << "  ]";
    } else {
      out << v.dump();
    }
  }
  out << "\n}\n";
  return out.str();
}

}  // namespace

Instance parse_instance(std::string_view text) {
  const auto doc = parse_document(text);
  Instance inst;
  try {
    inst.role_labels = string_list(field(doc, "roles"), "roles");
    inst.perm_labels = string_list(field(doc, "permissions"), "permissions");
    const auto role_ids = index_labels(inst.role_labels, "role");
    const auto perm_ids = index_labels(inst.perm_labels, "permission");
    const auto nr = inst.num_roles();
    const auto np = inst.num_perms();

    inst.role_perms.assign(nr, PermSet(np));
    const auto& rp = field(doc, "rp");
    if (!rp.is_array()) throw InputError("rp must be a list");
    for (const auto& pair : rp) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string())
        throw InputError("rp entries must be [role, permission] pairs");
      const auto r = lookup(role_ids, pair[0].get<std::string>(), "role");
      const auto p = lookup(perm_ids, pair[1].get<std::string>(), "permission");
      inst.role_perms[r].insert(p);
    }
    inst.plb = PermSet(np);
    for (const auto& l : string_list(field(doc, "plb"), "plb")) inst.plb.insert(lookup(perm_ids, l, "permission"));
    if (doc.contains("pub")) {
      inst.pub = PermSet(np);
      for (const auto& l : string_list(doc["pub"], "pub")) inst.pub.insert(lookup(perm_ids, l, "permission"));
    } else {
      inst.pub = PermSet::full(np);
    }
    if (doc.contains("constraints")) {
      const auto& cons = doc["constraints"];
      if (!cons.is_array()) throw InputError("constraints must be a list");
      for (const auto& c : cons) {
        SodConstraint sc{RoleSet(nr), integer(field(c, "t"), "t")};
        for (const auto& l : string_list(field(c, "roles"), "constraint roles"))
          sc.roles.insert(lookup(role_ids, l, "role"));
        inst.constraints.push_back(std::move(sc));
      }
    }
    inst.kr = integer(field(doc, "kr"), "kr");
    inst.kp = integer(field(doc, "kp"), "kp");
  } catch (const json::exception& e) {
    throw InputError(e.what());
  }
  validate(inst);
  return inst;
}

std::string serialize_instance(const Instance& inst) { return render_instance(instance_object(inst)); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("write failed: " + path);
}

Instance read_instance_file(const std::string& path) { return parse_instance(read_text_file(path)); }

SolutionDocument parse_solution(std::string_view text) {
  const auto doc = parse_document(text);
  SolutionDocument out;
  const auto& status = field(doc, "status");
  if (!status.is_string()) throw InputError("status must be a string");
  const auto s = status.get<std::string>();
  if (s == "sat") {
    out.sat = true;
    out.roles = string_list(field(doc, "roles"), "roles");
  } else if (s == "unsat") {
    if (doc.contains("roles")) throw InputError("unsat document must not list roles");
  } else {
    throw InputError("status must be \"sat\" or \"unsat\"");
  }
  if (doc.contains("engine")) {
    if (!doc["engine"].is_string()) throw InputError("engine must be a string");
    out.engine = doc["engine"].get<std::string>();
  }
  if (doc.contains("wall_ms")) {
    if (!doc["wall_ms"].is_number_integer()) throw InputError("wall_ms must be an integer");
    out.wall_ms = doc["wall_ms"].get<std::int64_t>();
  }
  return out;
}

std::string serialize_solution(const SolutionDocument& doc) {
  ordered o;
  o["status"] = doc.sat ? "sat" : "unsat";
  if (doc.sat) o["roles"] = doc.roles;
  o["engine"] = doc.engine;
  o["wall_ms"] = doc.wall_ms;
  return o.dump(2) + "\n";
}

SolutionDocument make_solution_document(const Instance& inst, const std::optional<Solution>& sol,
                                        const std::string& engine, std::int64_t wall_ms) {
  SolutionDocument doc;
  doc.sat = sol.has_value();
  if (sol) doc.roles = inst.labels_of(sol->roles);
  doc.engine = engine;
  doc.wall_ms = wall_ms;
  return doc;
}

Solution solution_from_document(const Instance& inst, const SolutionDocument& doc) {
  if (!doc.sat) throw InputError("document reports unsat; no roles to check");
  return Solution{inst.roles_named(doc.roles)};
}

std::string serialize_branch_tree(const BranchTree& tree) {
  ordered o;
  o["root"] = instance_object(tree.root);
  o["leaves"] = ordered::array();
  for (const auto& leaf : tree.leaves) {
    ordered l;
    l["infeasible"] = leaf.infeasible;
    l["r1"] = sorted(tree.root.labels_of(leaf.r1));
    l["instance"] = instance_object(leaf.inst);
    l["trace"] = ordered::array();
    for (const auto& rec : leaf.trace) {
      ordered t;
      t["rule"] = rec.rule;
      t["roles"] = rec.roles;
      if (!rec.note.empty()) t["note"] = rec.note;
      l["trace"].push_back(t);
    }
    o["leaves"].push_back(l);
  }
  return o.dump(2) + "\n";
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> parse_edges(const json& doc,
                                                             const std::unordered_map<std::string, std::size_t>& a,
                                                             const std::unordered_map<std::string, std::size_t>& b) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const auto& edges = field(doc, "edges");
  if (!edges.is_array()) throw InputError("edges must be a list");
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      throw InputError("edges must be [a, b] pairs");
    out.emplace_back(lookup(a, e[0].get<std::string>(), "vertex"), lookup(b, e[1].get<std::string>(), "vertex"));
  }
  return out;
}

}  // namespace

BipartiteGraph parse_bipartite_graph(std::string_view text) {
  const auto doc = parse_document(text);
  BipartiteGraph g;
  g.a = string_list(field(doc, "a"), "a");
  g.b = string_list(field(doc, "b"), "b");
  g.edges = parse_edges(doc, index_labels(g.a, "vertex"), index_labels(g.b, "vertex"));
  validate(g);
  return g;
}

BipartiteInstance parse_blocked_graph(std::string_view text) {
  const auto doc = parse_document(text);
  BipartiteInstance out;
  auto read_side = [&](const char* key, std::vector<std::string>& labels, std::vector<std::size_t>& block) {
    const auto& blocks = field(doc, key);
    if (!blocks.is_array()) throw InputError(std::string(key) + " must be a list of lists");
    for (std::size_t i = 0; i < blocks.size(); ++i)
      for (const auto& v : string_list(blocks[i], key)) {
        labels.push_back(v);
        block.push_back(i);
      }
    return blocks.size();
  };
  const auto ka = read_side("a_blocks", out.graph.a, out.a_block);
  const auto kb = read_side("b_blocks", out.graph.b, out.b_block);
  if (ka != kb) throw InputError("a_blocks and b_blocks must have the same number of classes");
  out.k = static_cast<int>(ka);
  out.graph.edges = parse_edges(doc, index_labels(out.graph.a, "vertex"), index_labels(out.graph.b, "vertex"));
  validate(out);
  return out;
}

std::string serialize_blocked_graph(const BipartiteInstance& g) {
  ordered o;
  auto side = [&](const std::vector<std::string>& labels, const std::vector<std::size_t>& block) {
    std::vector<std::vector<std::string>> out(static_cast<std::size_t>(g.k));
    for (std::size_t i = 0; i < labels.size(); ++i) out[block[i]].push_back(labels[i]);
    return out;
  };
  o["a_blocks"] = side(g.graph.a, g.a_block);
  o["b_blocks"] = side(g.graph.b, g.b_block);
  o["edges"] = ordered::array();
  for (auto [u, v] : g.graph.edges) o["edges"].push_back({g.graph.a[u], g.graph.b[v]});
  return o.dump(2) + "\n";
}

RandomSpec parse_random_spec(std::string_view text) {
  const auto doc = parse_document(text);
  if (!doc.is_object()) throw InputError("random spec must be an object");
  RandomSpec s;
  const std::pair<const char*, int*> ints[] = {
      {"n_roles", &s.n_roles}, {"n_perms", &s.n_perms},   {"plb_size", &s.plb_size},
      {"max_role_degree", &s.max_role_degree}, {"alpha", &s.alpha}, {"beta", &s.beta},
      {"c", &s.c},           {"n_constraints", &s.n_constraints}, {"kr", &s.kr}, {"kp", &s.kp}};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const auto& key = it.key();
    if (key == "plant") {
      if (!it->is_boolean()) throw InputError("plant must be a boolean");
      s.plant = it->get<bool>();
    } else if (key == "seed") {
      if (!it->is_number_unsigned() && !it->is_number_integer()) throw InputError("seed must be an integer");
      s.seed = it->get<std::uint64_t>();
    } else {
      auto match = std::find_if(std::begin(ints), std::end(ints), [&](const auto& e) { return key == e.first; });
      if (match == std::end(ints)) throw InputError("unknown random spec field \"" + key + "\"");
      *match->second = integer(*it, match->first);
    }
  }
  return s;
}

}  // namespace uaq
