#include "splitform/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include "splitform/emit.hpp"
#include "splitform/fourier_motzkin.hpp"
#include "splitform/instances.hpp"
#include "splitform/problem_io.hpp"
#include "splitform/reformulate.hpp"
#include "splitform/text.hpp"

namespace splitform {
namespace {

constexpr int kAllSplits = -1;  // "--p n": every support variable alone

bool problem_affine(const DisjunctiveProblem& p) {
  for (const auto& d : p.disjunctions)
    for (const auto& dj : d.disjuncts)
      for (const auto& c : dj.constraints)
        if (!c.lhs.is_affine()) return false;
  return true;
}

std::string p_label(int P) { return P == kAllSplits ? "n" : std::to_string(P); }

std::vector<int> parse_p_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& f : split_fields(text, ',')) {
    const std::string_view t = trim(f);
    if (t.empty()) continue;
    if (t == "n") {
      out.push_back(kAllSplits);
      continue;
    }
    int v = 0;
    try {
      v = parse_int(t);
    } catch (const ModelError&) {
      throw UsageError("--p expects positive integers or n, got \"" + std::string(t) + "\"");
    }
    if (v < 1) throw UsageError("--p values must be at least 1");
    out.push_back(v);
  }
  return out;
}

std::pair<int, int> parse_axes(const std::string& text) {
  const auto f = split_fields(text, ',');
  if (f.size() != 2) throw UsageError("--axes expects two indices like 0,1");
  try {
    return {parse_int(trim(f[0])), parse_int(trim(f[1]))};
  } catch (const ModelError&) {
    throw UsageError("--axes expects two indices like 0,1");
  }
}

BoundMode parse_bound_mode(const std::string& text) {
  if (text == "interval") return BoundMode::kInterval;
  if (text == "obbt-union") return BoundMode::kObbtUnion;
  if (text == "obbt-local") return BoundMode::kObbtLocal;
  if (text == "file") return BoundMode::kFile;
  throw UsageError("unknown bound mode \"" + text + "\"");
}

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
  std::vector<int> out;
  try {
    for (const auto& f : split_fields(text, ',')) out.push_back(parse_int(trim(f)));
  } catch (const ModelError&) {
    throw UsageError(std::string(flag) + " expects a comma separated integer list");
  }
  return out;
}

bool is_formulation(const std::string& f) {
  return f == "bigm" || f == "psplit" || f == "hull" || f == "2term-cuts";
}

std::string instance_label(const std::string& spec) {
  if (spec == "ex1" || spec == "ex2") return spec;
  return std::filesystem::path(spec).stem().string();
}

int resolve_splits(const DisjunctiveProblem& problem, int j, int P) {
  const int most = std::max(1, max_splits(problem, j));
  return P == kAllSplits ? most : std::min(P, most);
}

RelaxResult root_relaxation(const MixedModel& m) { return solve_relaxation(m); }

ResultRow run_entry(const DisjunctiveProblem& problem, const RunConfig& cfg,
                    const std::string& formulation, int P, bool with_mip) {
  RunConfig c = cfg;
  c.formulation = formulation;
  const MixedModel m = build_model(problem, c, P);
  ResultRow row;
  row.instance = instance_label(cfg.instance);
  row.formulation = formulation;
  row.P = P;
  row.linking = formulation == "psplit" && cfg.linking;
  row.sharing = formulation == "psplit" && cfg.sharing;
  row.bound_mode = formulation == "hull" ? "none" : bound_mode_name(cfg.bound_mode);
  const RelaxResult r = root_relaxation(m);
  row.relax_status = std::string(status_name(r.status));
  row.relax_value = r.objective;
  if (with_mip) {
    BnbOptions opt;
    opt.time_limit = cfg.time_limit;
    opt.node_limit = cfg.node_limit;
    row.mip = solve_bnb(m, opt);
  }
  return row;
}

void append_results(const std::string& path, const std::vector<ResultRow>& rows,
                    bool timing) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream f(path, std::ios::app);
  if (!f) throw ModelError("cannot write " + path);
  if (fresh) f << results_header() << '\n';
  for (const auto& r : rows) f << format_row(r, timing) << '\n';
  if (!f) throw ModelError("cannot write " + path);
}

void write_results(const std::string& path, const std::vector<ResultRow>& rows,
                   bool timing) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw ModelError("cannot write " + path);
  f << results_header() << '\n';
  for (const auto& r : rows) f << format_row(r, timing) << '\n';
  if (!f) throw ModelError("cannot write " + path);
}

void print_counts(const MixedModel& m, std::ostream& out) {
  out << "formulation " << m.formulation << '\n';
  out << "variables " << m.num_vars() << '\n';
  out << "binaries " << m.num_binaries() << '\n';
  out << "linear_rows " << m.rows.size() << '\n';
  out << "convex_rows " << m.convex_rows.size() << '\n';
  for (Role role : {Role::kAlpha, Role::kNu, Role::kHullCopy}) {
    const int c = m.count_role(role);
    if (c > 0) out << role_name(role) << "_columns " << c << '\n';
  }
}

int cmd_reformulate(const RunConfig& cfg, std::ostream& out) {
  const DisjunctiveProblem problem = load_instance(cfg.instance);
  const MixedModel m = build_model(problem, cfg, cfg.p_list.front());
  const std::string ext = std::filesystem::path(cfg.out).extension().string();
  if (ext == ".mps")
    save_mps(m, cfg.out);
  else
    save_lp(m, cfg.out);
  print_counts(m, out);
  out << "wrote " << cfg.out << '\n';
  return kExitOk;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const DisjunctiveProblem problem = load_instance(cfg.instance);
  const ResultRow row = run_entry(problem, cfg, cfg.formulation, cfg.p_list.front(), true);
  out << "relaxation " << format_double(row.relax_value) << " (" << row.relax_status << ")\n";
  out << "objective "
      << (row.mip.has_incumbent() ? format_double(row.mip.objective) : std::string("NA")) << '\n';
  out << "bound " << format_double(row.mip.bound) << '\n';
  out << "nodes " << row.mip.nodes << '\n';
  if (cfg.timing) out << "time_s " << format_double(row.mip.seconds) << '\n';
  out << "status " << status_name(row.mip.status) << '\n';
  if (!cfg.out.empty()) append_results(cfg.out, {row}, cfg.timing);
  return kExitOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  const DisjunctiveProblem problem = load_instance(cfg.instance);
  struct Entry {
    std::string formulation;
    int P;
  };
  std::vector<Entry> entries{{"bigm", 1}};
  for (int P : cfg.p_list) entries.push_back({cfg.formulation, P});
  if (problem_affine(problem)) entries.push_back({"hull", kAllSplits});

  std::vector<ResultRow> rows(entries.size());
  if (cfg.threads == 1) {
    for (std::size_t e = 0; e < entries.size(); ++e)
      rows[e] = run_entry(problem, cfg, entries[e].formulation, entries[e].P, true);
  } else {
    std::vector<std::future<ResultRow>> jobs;
    for (const auto& e : entries)
      jobs.push_back(std::async(std::launch::async, run_entry, std::cref(problem),
                                std::cref(cfg), e.formulation, e.P, true));
    for (std::size_t e = 0; e < jobs.size(); ++e) rows[e] = jobs[e].get();
  }
  out << results_header() << '\n';
  for (const auto& r : rows) out << format_row(r, cfg.timing) << '\n';
  if (!cfg.out.empty()) write_results(cfg.out, rows, cfg.timing);
  return kExitOk;
}

int cmd_project(const RunConfig& cfg, std::ostream& out) {
  const DisjunctiveProblem problem = load_instance(cfg.instance);
  if (cfg.axis_i < 0 || cfg.axis_j < 0 || cfg.axis_i >= problem.n || cfg.axis_j >= problem.n)
    throw UsageError("--axes index out of range for a problem with " +
                     std::to_string(problem.n) + " variables");
  const GridRange range = box_range(problem, cfg.axis_i, cfg.axis_j);
  ProjectOptions opt;
  opt.threads = cfg.threads;
  FeasibilityGrid g;
  if (cfg.formulation == "disjunction") {
    g = project_disjunction(problem, cfg.axis_i, cfg.axis_j, cfg.resolution, range, opt);
  } else {
    const MixedModel m = build_model(problem, cfg, cfg.p_list.front());
    g = project_2d(m, cfg.axis_i, cfg.axis_j, cfg.resolution, range, opt);
  }
  render_grid(g, cfg.out);
  out << "feasible_cells " << g.count() << " of " << cfg.resolution * cfg.resolution << '\n';
  out << "wrote " << cfg.out << ".csv " << cfg.out << ".svg\n";
  return kExitOk;
}

int cmd_generate(const RunConfig& cfg, std::ostream& out) {
  const std::string& kind = cfg.kind;
  if (kind == "network") {
    save_network(cfg.out, random_network(cfg.layers, cfg.seed));
    out << "wrote " << cfg.out << '\n';
    return kExitOk;
  }
  if (kind == "ex1-bounds") {
    const int P = cfg.p_list.front();
    save_bounds_csv(cfg.out, {ex1_closed_form_bounds(P)});
    out << "wrote " << cfg.out << '\n';
    return kExitOk;
  }
  if (kind == "bounds") {
    const DisjunctiveProblem problem = load_instance(cfg.instance);
    const auto parts = make_partitions(problem, cfg.partition, cfg.p_list.front());
    save_bounds_csv(cfg.out, make_bounds(problem, parts, cfg.bound_mode, cfg.bounds_file));
    out << "wrote " << cfg.out << '\n';
    return kExitOk;
  }
  DisjunctiveProblem p;
  if (kind == "ex1" || kind == "ex2") {
    p = load_instance(kind);
  } else if (kind == "clustering") {
    p = make_clustering(load_points_csv(cfg.data), cfg.k);
  } else if (kind == "pball") {
    p = make_pball(cfg.balls, cfg.points, cfg.dim, cfg.seed);
  } else if (kind == "osif") {
    p = make_osif(load_network(cfg.data), cfg.target, cfg.budget);
  } else if (kind == "random-affine") {
    p = make_random_affine(cfg.n, cfg.terms, cfg.seed);
  } else {
    throw UsageError("unknown instance kind \"" + kind + "\"");
  }
  require_valid(p);
  save_problem(cfg.out, p);
  out << "variables " << p.n << '\n';
  out << "disjunctions " << p.disjunctions.size() << '\n';
  out << "wrote " << cfg.out << '\n';
  return kExitOk;
}

}  // namespace

std::string bound_mode_name(BoundMode mode) {
  switch (mode) {
    case BoundMode::kInterval: return "interval";
    case BoundMode::kObbtUnion: return "obbt-union";
    case BoundMode::kObbtLocal: return "obbt-local";
    case BoundMode::kFile: return "file";
  }
  return "unknown";
}

void check_config(const RunConfig& cfg) {
  static const std::vector<std::string> commands{"reformulate", "solve", "compare",
                                                 "project", "generate"};
  if (std::find(commands.begin(), commands.end(), cfg.command) == commands.end())
    throw UsageError("unknown command \"" + cfg.command + "\"");
  if (cfg.p_list.empty()) throw UsageError("--p needs at least one value");
  if (cfg.command != "compare" && cfg.p_list.size() != 1)
    throw UsageError("--p takes a list only for compare");
  const bool project_exact = cfg.command == "project" && cfg.formulation == "disjunction";
  if (!is_formulation(cfg.formulation) && !project_exact)
    throw UsageError("unknown formulation \"" + cfg.formulation + "\"");
  if (cfg.command == "compare" && cfg.formulation != "psplit" &&
      cfg.formulation != "2term-cuts")
    throw UsageError("compare sweeps psplit or 2term-cuts over --p");
  if (cfg.bound_mode == BoundMode::kFile && cfg.bounds_file.empty())
    throw UsageError("--bounds file needs --bounds-file");
  if (cfg.bound_mode != BoundMode::kFile && !cfg.bounds_file.empty())
    throw UsageError("--bounds-file needs --bounds file");
  if ((cfg.linking || cfg.sharing) && cfg.formulation != "psplit")
    throw UsageError("--linking and --share-alpha apply to psplit only");
  if (cfg.formulation == "bigm" && cfg.p_list.front() != 1 && cfg.command != "compare")
    throw UsageError("bigm has a single split; drop --p or use --p 1");
  const bool explicit_partition = !cfg.partition.empty() && cfg.partition != "uniform" &&
                                  cfg.partition != "coefficient";
  if (explicit_partition) {
    const Partition p = parse_partition(cfg.partition);
    if (cfg.p_list.size() != 1 ||
        (cfg.p_list.front() != 1 && cfg.p_list.front() != p.size()))
      throw UsageError("--partition fixes P=" + std::to_string(p.size()) +
                       "; --p disagrees");
  }
  if (cfg.time_limit < 0.0) throw UsageError("--time-limit must be nonnegative");
  if (cfg.node_limit < 0) throw UsageError("--node-limit must be nonnegative");
  if (cfg.resolution < 1) throw UsageError("--resolution must be positive");
  if (cfg.axis_i == cfg.axis_j) throw UsageError("--axes must name two different variables");
  const bool needs_out = cfg.command != "solve" && cfg.command != "compare";
  if (needs_out && cfg.out.empty()) throw UsageError("--out is required for " + cfg.command);
  if (cfg.command == "generate") {
    if (cfg.kind.empty()) throw UsageError("generate needs --kind");
    if ((cfg.kind == "clustering" || cfg.kind == "osif") && cfg.data.empty())
      throw UsageError(cfg.kind + " needs --data");
    if (cfg.kind == "bounds" && cfg.instance.empty())
      throw UsageError("bounds needs --instance");
  } else if (cfg.instance.empty()) {
    throw UsageError(cfg.command + " needs --instance");
  }
}

DisjunctiveProblem load_instance(const std::string& spec) {
  DisjunctiveProblem p;
  if (spec == "ex1" || spec == "ex2") {
    p = spec == "ex1" ? make_ex1() : make_ex2();
    p.objective.coeffs.assign(static_cast<std::size_t>(p.n), 1.0);
    p.objective.sense = ObjectiveSense::kMinimize;
  } else {
    p = load_problem(spec);
  }
  require_valid(p);
  return p;
}

std::vector<Partition> make_partitions(const DisjunctiveProblem& problem,
                                       const std::string& spec, int P) {
  std::vector<Partition> parts;
  if (spec.empty() || spec == "uniform" || spec == "coefficient") {
    const auto strategy = spec == "coefficient" ? PartitionStrategy::kCoefficient
                                                : PartitionStrategy::kUniform;
    for (int j = 0; j < static_cast<int>(problem.disjunctions.size()); ++j)
      parts.push_back(partition_for(problem, j, resolve_splits(problem, j, P), strategy));
    return parts;
  }
  const Partition p = parse_partition(spec);
  validate_partition(p, problem.n);
  parts.assign(problem.disjunctions.size(), p);
  return parts;
}

std::vector<AlphaBounds> make_bounds(const DisjunctiveProblem& problem,
                                     const std::vector<Partition>& parts,
                                     BoundMode mode, const std::string& file) {
  switch (mode) {
    case BoundMode::kInterval: return alpha_bounds_interval(problem, parts);
    case BoundMode::kObbtUnion:
      return alpha_bounds_obbt(problem, parts, ObbtMode::kUnion);
    case BoundMode::kObbtLocal:
      return alpha_bounds_obbt(problem, parts, ObbtMode::kLocal);
    case BoundMode::kFile: {
      auto b = load_bounds_csv(file);
      if (b.size() != parts.size())
        throw ModelError(file + ": bounds for " + std::to_string(b.size()) +
                         " disjunctions, the problem has " + std::to_string(parts.size()));
      for (std::size_t j = 0; j < b.size(); ++j)
        if (b[j].num_splits != parts[j].size())
          throw ModelError(file + ": disjunction " + std::to_string(j) + " has " +
                           std::to_string(b[j].num_splits) + " splits, the partition has " +
                           std::to_string(parts[j].size()));
      return b;
    }
  }
  throw ModelError("unknown bound mode");
}

MixedModel build_model(const DisjunctiveProblem& problem, const RunConfig& cfg,
                       int P) {
  const std::string& f = cfg.formulation;
  if (f == "hull") return compile_hull_linear(problem);
  if (f == "bigm") {
    const auto parts = make_partitions(problem, "", 1);
    return compile_bigm(problem, make_bounds(problem, parts, cfg.bound_mode, cfg.bounds_file));
  }
  const auto parts = make_partitions(problem, cfg.partition, P);
  const auto bounds = make_bounds(problem, parts, cfg.bound_mode, cfg.bounds_file);
  if (f == "2term-cuts") return compile_two_term(problem, parts, bounds);
  PsplitOptions opt;
  opt.linking = cfg.linking;
  opt.share_alpha = cfg.sharing;
  opt.allow_negative = cfg.sharing;
  return compile_psplit(problem, parts, bounds, opt);
}

std::string results_header() {
  return "instance,formulation,P,linking,sharing,bound_mode,relax_value,mip_value,"
         "nodes,time_s,status";
}

std::string format_row(const ResultRow& row, bool timing) {
  std::ostringstream s;
  s << row.instance << ',' << row.formulation << ',' << p_label(row.P) << ','
    << (row.linking ? "on" : "off") << ',' << (row.sharing ? "on" : "off") << ','
    << row.bound_mode << ','
    << (row.relax_status == "optimal" ? format_double(row.relax_value) : row.relax_status)
    << ',' << (row.mip.has_incumbent() ? format_double(row.mip.objective) : "NA") << ','
    << row.mip.nodes << ',' << (timing ? format_double(row.mip.seconds) : "NA") << ','
    << status_name(row.mip.status);
  return s.str();
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    check_config(cfg);
    if (cfg.command == "reformulate") return cmd_reformulate(cfg, out);
    if (cfg.command == "solve") return cmd_solve(cfg, out);
    if (cfg.command == "compare") return cmd_compare(cfg, out);
    if (cfg.command == "project") return cmd_project(cfg, out);
    return cmd_generate(cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PartitionError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUnsupported;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << '\n';
    return kExitModel;
  } catch (const FmLimitError& e) {
    err << "error: " << e.what() << '\n';
    return kExitModel;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Disjunctive formulation compiler: big-M, P-split and hull", "splitform"};
  app.require_subcommand(1);

  std::string p_text = "1";
  std::string bounds_text = "interval";
  std::string axes_text = "0,1";
  std::string timing_text = "wall";
  std::string layers_text = "2,4,4,2";

  auto common = [&](CLI::App* sub) {
    sub->add_option("--instance", cfg.instance, "ex1, ex2 or a problem JSON file");
    sub->add_option("--formulation", cfg.formulation, "bigm, psplit, hull or 2term-cuts");
    sub->add_option("--p", p_text, "number of splits (compare: comma list; n = all)");
    sub->add_option("--partition", cfg.partition,
                    "uniform, coefficient or explicit classes like 0,1|2,3");
    sub->add_option("--bounds", bounds_text, "interval, obbt-union, obbt-local or file");
    sub->add_option("--bounds-file", cfg.bounds_file, "alpha bounds CSV for --bounds file");
    sub->add_flag("--linking", cfg.linking, "add linking constraints (psplit)");
    sub->add_flag("--share-alpha", cfg.sharing, "share proportional split sums (psplit)");
    sub->add_option("--out", cfg.out, "output file or stem");
    sub->add_option("--threads", cfg.threads, "worker threads, 0 = all cores");
  };
  auto limits = [&](CLI::App* sub) {
    sub->add_option("--time-limit", cfg.time_limit, "seconds");
    sub->add_option("--node-limit", cfg.node_limit, "branch and bound nodes");
    sub->add_option("--timing", timing_text, "wall or none (none writes NA for time_s)");
  };

  auto* reformulate = app.add_subcommand("reformulate", "compile and write an LP or MPS file");
  common(reformulate);
  auto* solve = app.add_subcommand("solve", "relax and branch and bound one formulation");
  common(solve);
  limits(solve);
  auto* compare = app.add_subcommand("compare", "sweep big-M, P-split over --p and hull");
  common(compare);
  limits(compare);
  auto* project = app.add_subcommand("project", "2-D feasibility grid of the relaxation");
  common(project);
  project->add_option("--resolution", cfg.resolution, "cells per axis");
  project->add_option("--axes", axes_text, "two variable indices, e.g. 0,1");
  auto* generate = app.add_subcommand("generate", "write an instance, network or bounds file");
  common(generate);
  generate->add_option("--kind", cfg.kind,
                       "ex1, ex2, clustering, pball, osif, random-affine, network, "
                       "ex1-bounds or bounds");
  generate->add_option("--seed", cfg.seed, "generator seed");
  generate->add_option("--data", cfg.data, "points CSV (clustering) or network JSON (osif)");
  generate->add_option("--k", cfg.k, "clusters");
  generate->add_option("--balls", cfg.balls, "unit balls");
  generate->add_option("--points", cfg.points, "points");
  generate->add_option("--dim", cfg.dim, "dimension");
  generate->add_option("--target", cfg.target, "output unit to maximize");
  generate->add_option("--budget", cfg.budget, "l1 budget on the inputs");
  generate->add_option("--n", cfg.n, "variables (random-affine)");
  generate->add_option("--terms", cfg.terms, "disjuncts (random-affine)");
  generate->add_option("--layers", layers_text, "layer sizes (network), e.g. 2,4,4,2");
  for (auto* sub : {solve, compare}) sub->add_option("--seed", cfg.seed, "unused; accepted for symmetry");

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.p_list = parse_p_list(p_text);
    cfg.bound_mode = parse_bound_mode(bounds_text);
    std::tie(cfg.axis_i, cfg.axis_j) = parse_axes(axes_text);
    if (timing_text != "wall" && timing_text != "none")
      throw UsageError("--timing expects wall or none");
    cfg.timing = timing_text == "wall";
    cfg.layers = parse_int_list(layers_text, "--layers");
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  return run_command(cfg, out, err);
}

}  // namespace splitform
