// uaq: command-line front end.
//
// Exit codes: solve 0 sat / 1 unsat; verify and check-class 0 ok / 1 not ok;
// bench 0 when engines agree / 1 otherwise; 2 usage, input or class error;
// 3 internal error, time limit or search cap hit.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "uaq/baselines.hpp"
#include "uaq/dp_solver.hpp"
#include "uaq/errors.hpp"
#include "uaq/generators.hpp"
#include "uaq/instance_io.hpp"
#include "uaq/reduce.hpp"

namespace fs = std::filesystem;
using namespace uaq;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct ClassFlags {
  std::optional<int> alpha;
  std::optional<int> beta;
  int c = 1;

  void add_to(CLI::App* app) {
    app->add_option("--alpha", alpha, "K_{alpha,beta}-freeness parameter alpha");
    app->add_option("--beta", beta, "K_{alpha,beta}-freeness parameter beta");
    app->add_option("--max-constraint", c, "largest allowed constraint width")->capture_default_str();
  }

  ClassParams require(const std::string& who) const {
    if (!alpha || !beta) throw CLI::ValidationError(who + " requires --alpha and --beta");
    ClassParams p{*alpha, *beta, c};
    validate(p);
    return p;
  }
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty())
    std::cout << text;
  else
    write_text_file(out, text);
}

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
}

RepConfig rep_config(const std::string& mode, std::uint64_t seed) {
  RepConfig cfg;
  cfg.mode = mode == "truncated" ? RepMode::truncated : RepMode::exact;
  cfg.seed = seed;
  return cfg;
}

struct EngineRun {
  std::string verdict;  // sat, unsat, n/a, refused, timeout, scale
  std::optional<Solution> solution;
  std::size_t leaves = 0;
  std::size_t table_cells = 0;
};

bool type1_applicable(const Instance& inst) {
  return inst.constraints.empty() && static_cast<std::size_t>(inst.kr) >= inst.num_roles();
}

EngineRun run_engine(const std::string& engine, const Instance& inst, const std::optional<ClassParams>& params,
                     const RepConfig& rep, unsigned threads, const Deadline& deadline) {
  EngineRun run;
  if (engine == "brute") {
    BruteForceOptions opts;
    opts.deadline = &deadline;
    run.solution = brute_force(inst, opts);
  } else if (engine == "type1") {
    run.solution = type1_solver(inst, &deadline).solution;
  } else {
    SolveOptions opts;
    opts.params = *params;
    opts.rep = rep;
    opts.threads = threads;
    opts.deadline = deadline;
    auto outcome = solve(inst, opts);
    run.solution = outcome.solution;
    run.leaves = outcome.leaves;
    run.table_cells = outcome.table_cells;
  }
  run.verdict = run.solution ? "sat" : "unsat";
  return run;
}

int cmd_solve(const std::string& path, const std::string& engine, const ClassFlags& flags, const std::string& repfam,
              std::uint64_t seed, const std::string& out, unsigned threads, std::int64_t timeout_ms, bool no_timing) {
  const auto inst = read_instance_file(path);
  std::optional<ClassParams> params;
  if (engine == "fpt") params = flags.require("--engine fpt");
  Deadline deadline = timeout_ms > 0 ? Deadline(std::chrono::milliseconds(timeout_ms)) : Deadline();
  const auto start = std::chrono::steady_clock::now();
  const auto run = run_engine(engine, inst, params, rep_config(repfam, seed), threads, deadline);
  const auto ms = no_timing ? 0 : elapsed_ms(start);
  emit(serialize_solution(make_solution_document(inst, run.solution, engine, ms)), out);
  return run.solution ? 0 : 1;
}

int cmd_reduce(const std::string& path, const ClassFlags& flags, const std::string& out) {
  const auto inst = read_instance_file(path);
  const auto params = flags.require("reduce");
  emit(serialize_branch_tree(preprocess(reduction0(inst), params)), out);
  return 0;
}

int cmd_verify(const std::string& inst_path, const std::string& sol_path) {
  const auto inst = read_instance_file(inst_path);
  const auto doc = parse_solution(read_text_file(sol_path));
  if (!doc.sat) {
    std::cerr << "solution document reports unsat; nothing to verify\n";
    return kExitUsage;
  }
  const auto verdict = verify_solution(inst, solution_from_document(inst, doc));
  if (verdict.ok) {
    std::cout << "valid\n";
    return 0;
  }
  std::cout << "invalid\n";
  for (const auto& v : verdict.violations) std::cout << to_string(v.kind) << ": " << v.detail << "\n";
  return 1;
}

int cmd_check_class(const std::string& path, const ClassFlags& flags) {
  const auto inst = read_instance_file(path);
  const auto params = flags.require("check-class");
  const auto rep = check_class(inst, params);
  std::cout << "kab_free: " << (rep.kab_free ? "yes" : "no") << "\n"
            << "widths_ok: " << (rep.widths_ok ? "yes" : "no") << "\n"
            << "disjoint_ok: " << (rep.disjoint_ok ? "yes" : "no") << "\n";
  for (const auto& w : rep.witnesses) std::cout << "witness: " << w << "\n";
  return rep.ok() ? 0 : 1;
}

struct GenerateFlags {
  std::string kind;
  std::uint64_t seed = 0;
  std::string out;
  std::string solution_out;
  std::string graph;
  std::string spec;
  int k = 2;
  std::size_t na = 4, nb = 4, per_class = 2;
  double edge_prob = 0.5;
  bool plant = false;
  RandomSpec random;
};

int cmd_generate(const GenerateFlags& f) {
  std::mt19937_64 rng(f.seed);
  Instance inst;
  std::optional<Solution> planted;
  if (f.kind == "rbds1" || f.kind == "rbds2") {
    auto g = f.graph.empty() ? random_bipartite(f.na, f.nb, f.edge_prob, rng)
                             : parse_bipartite_graph(read_text_file(f.graph));
    inst = f.kind == "rbds1" ? gen_rbds_type1(g, f.k) : gen_rbds_type2(g, f.k);
  } else if (f.kind == "mcb-nosod" || f.kind == "mcb-k22") {
    auto g = f.graph.empty() ? random_blocked(f.k, f.per_class, f.edge_prob, f.plant, rng)
                             : parse_blocked_graph(read_text_file(f.graph));
    inst = f.kind == "mcb-nosod" ? gen_mcb_nosod(g) : gen_mcb_k22(g);
  } else {
    auto spec = f.spec.empty() ? f.random : parse_random_spec(read_text_file(f.spec));
    if (f.spec.empty()) spec.seed = f.seed;
    spec.plant = spec.plant || f.plant;
    auto gen = gen_random(spec);
    inst = std::move(gen.instance);
    planted = std::move(gen.planted);
  }
  emit(serialize_instance(inst), f.out);
  if (!f.solution_out.empty()) {
    if (!planted) {
      std::cerr << "no planted solution for this generator\n";
      return kExitUsage;
    }
    write_text_file(f.solution_out, serialize_solution(make_solution_document(inst, planted, "planted", 0)));
  }
  return 0;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

int cmd_bench(const std::string& dir, const std::vector<std::string>& engines, std::int64_t timeout_ms,
              const std::string& csv, const ClassFlags& flags, const std::string& repfam, std::uint64_t seed) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.size() > 9 && name.ends_with(".uaq.json")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::optional<ClassParams> params;
  if (std::find(engines.begin(), engines.end(), "fpt") != engines.end()) params = flags.require("bench with fpt");

  std::ostringstream table;
  table << "instance,engine,verdict,wall_ms,leaves,table_cells\n";
  std::size_t disagreements = 0;
  for (const auto& file : files) {
    const auto inst = read_instance_file(file.string());
    std::optional<bool> agreed;
    bool disagree = false;
    for (const auto& engine : engines) {
      EngineRun run;
      const auto start = std::chrono::steady_clock::now();
      Deadline deadline = timeout_ms > 0 ? Deadline(std::chrono::milliseconds(timeout_ms)) : Deadline();
      try {
        if (engine == "type1" && !type1_applicable(inst))
          run.verdict = "n/a";
        else
          run = run_engine(engine, inst, params, rep_config(repfam, seed), 1, deadline);
      } catch (const ClassError&) {
        run.verdict = "refused";
      } catch (const TimeoutError&) {
        run.verdict = "timeout";
      } catch (const ScaleError&) {
        run.verdict = "scale";
      }
      if (run.solution && !is_solution(inst, run.solution->roles)) {
        run.verdict = "invalid";
        disagree = true;
      }
      if (run.verdict == "sat" || run.verdict == "unsat") {
        const bool sat = run.verdict == "sat";
        if (agreed && *agreed != sat) disagree = true;
        agreed = sat;
      }
      table << csv_field(file.filename().string()) << "," << engine << "," << run.verdict << ","
            << elapsed_ms(start) << "," << run.leaves << "," << run.table_cells << "\n";
    }
    if (disagree) ++disagreements;
  }
  emit(table.str(), csv);
  std::cerr << "instances: " << files.size() << ", disagreements: " << disagreements << "\n";
  return disagreements == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"User authorization query solver"};
  app.require_subcommand(1);
  int code = 0;

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "decide an instance and write a solution document");
  std::string solve_path, engine = "fpt", repfam = "exact", out;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::int64_t timeout_ms = 0;
  bool no_timing = false;
  ClassFlags solve_flags;
  solve_cmd->add_option("instance", solve_path, "instance file")->required();
  solve_cmd->add_option("--engine", engine, "brute, fpt or type1")
      ->check(CLI::IsMember({"brute", "fpt", "type1"}))
      ->capture_default_str();
  solve_flags.add_to(solve_cmd);
  solve_cmd->add_option("--repfam", repfam, "representative family mode")
      ->check(CLI::IsMember({"exact", "truncated"}))
      ->capture_default_str();
  solve_cmd->add_option("--seed", seed, "seed for truncated mode");
  solve_cmd->add_option("--out", out, "output file (default: stdout)");
  solve_cmd->add_option("--threads", threads, "leaf worker threads")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--timeout-ms", timeout_ms, "give up after this many milliseconds (0: never)");
  solve_cmd->add_flag("--no-timing", no_timing, "write wall_ms as 0 for byte-stable output");

  // reduce
  auto* reduce_cmd = app.add_subcommand("reduce", "dump the branch tree produced by preprocessing");
  std::string reduce_path, reduce_out;
  ClassFlags reduce_flags;
  reduce_cmd->add_option("instance", reduce_path, "instance file")->required();
  reduce_flags.add_to(reduce_cmd);
  reduce_cmd->add_option("--out", reduce_out, "output file (default: stdout)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "check a solution document against an instance");
  std::string verify_inst, verify_sol;
  verify_cmd->add_option("instance", verify_inst, "instance file")->required();
  verify_cmd->add_option("solution", verify_sol, "solution file")->required();

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "write a generated instance");
  GenerateFlags gen;
  gen_cmd->add_option("kind", gen.kind, "rbds1, rbds2, mcb-nosod, mcb-k22 or random")
      ->required()
      ->check(CLI::IsMember({"rbds1", "rbds2", "mcb-nosod", "mcb-k22", "random"}));
  gen_cmd->add_option("--seed", gen.seed, "random seed");
  gen_cmd->add_option("--out", gen.out, "output file (default: stdout)");
  gen_cmd->add_option("--graph", gen.graph, "graph document instead of a random graph");
  gen_cmd->add_option("--spec", gen.spec, "random spec document (kind random)");
  gen_cmd->add_option("--solution-out", gen.solution_out, "write the planted solution here (kind random)");
  gen_cmd->add_option("--k", gen.k, "k of the source problem")->capture_default_str();
  gen_cmd->add_option("--na", gen.na, "random graph: |A|")->capture_default_str();
  gen_cmd->add_option("--nb", gen.nb, "random graph: |B|")->capture_default_str();
  gen_cmd->add_option("--per-class", gen.per_class, "random blocked graph: max vertices per class")
      ->capture_default_str();
  gen_cmd->add_option("--edge-prob", gen.edge_prob, "random graph edge probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen_cmd->add_flag("--plant", gen.plant, "plant a solution");
  gen_cmd->add_option("--roles", gen.random.n_roles, "random: number of roles");
  gen_cmd->add_option("--perms", gen.random.n_perms, "random: number of permissions");
  gen_cmd->add_option("--plb", gen.random.plb_size, "random: |P_lb|");
  gen_cmd->add_option("--degree", gen.random.max_role_degree, "random: max permissions per role");
  gen_cmd->add_option("--alpha", gen.random.alpha, "random: alpha");
  gen_cmd->add_option("--beta", gen.random.beta, "random: beta");
  gen_cmd->add_option("--max-constraint", gen.random.c, "random: max constraint width");
  gen_cmd->add_option("--constraints", gen.random.n_constraints, "random: number of constraints");
  gen_cmd->add_option("--kr", gen.random.kr, "random: kr");
  gen_cmd->add_option("--kp", gen.random.kp, "random: kp");

  // check-class
  auto* cc_cmd = app.add_subcommand("check-class", "report (alpha, beta, c) class membership");
  std::string cc_path;
  ClassFlags cc_flags;
  cc_cmd->add_option("instance", cc_path, "instance file")->required();
  cc_flags.add_to(cc_cmd);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "run engines over every *.uaq.json in a directory");
  std::string bench_dir, bench_csv, bench_repfam = "exact";
  std::vector<std::string> bench_engines{"brute", "fpt"};
  std::int64_t bench_timeout = 0;
  std::uint64_t bench_seed = 0;
  ClassFlags bench_flags;
  bench_cmd->add_option("dir", bench_dir, "directory of instances")->required()->check(CLI::ExistingDirectory);
  bench_cmd->add_option("--engines", bench_engines, "engines to run")
      ->delimiter(',')
      ->check(CLI::IsMember({"brute", "fpt", "type1"}));
  bench_cmd->add_option("--timeout-ms", bench_timeout, "per-run time limit (0: none)");
  bench_cmd->add_option("--csv", bench_csv, "write the table here (default: stdout)");
  bench_cmd->add_option("--repfam", bench_repfam, "representative family mode")
      ->check(CLI::IsMember({"exact", "truncated"}));
  bench_cmd->add_option("--seed", bench_seed, "seed for truncated mode");
  bench_flags.add_to(bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*solve_cmd)
      code = cmd_solve(solve_path, engine, solve_flags, repfam, seed, out, threads, timeout_ms, no_timing);
    else if (*reduce_cmd)
      code = cmd_reduce(reduce_path, reduce_flags, reduce_out);
    else if (*verify_cmd)
      code = cmd_verify(verify_inst, verify_sol);
    else if (*gen_cmd)
      code = cmd_generate(gen);
    else if (*cc_cmd)
      code = cmd_check_class(cc_path, cc_flags);
    else if (*bench_cmd)
      code = cmd_bench(bench_dir, bench_engines, bench_timeout, bench_csv, bench_flags, bench_repfam, bench_seed);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ClassError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TimeoutError& e) {
    // undecided, not a crash; still exit 3
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const ScaleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return code;
}
