#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "splitform/bounds.hpp"
#include "splitform/mixed_model.hpp"
#include "splitform/model.hpp"
#include "splitform/partition.hpp"
#include "splitform/solver.hpp"

namespace splitform {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,      // unexpected internal error
  kExitUsage = 2,        // bad flags or flag combinations
  kExitModel = 3,        // invalid input data, unreadable/unwritable files
  kExitUnsupported = 4,  // formulation or format cannot express the model
};

enum class BoundMode { kInterval, kObbtUnion, kObbtLocal, kFile };
std::string bound_mode_name(BoundMode mode);

struct RunConfig {
  std::string command;  // reformulate | solve | compare | project | generate
  std::string instance;  // ex1, ex2 or a problem JSON path
  std::string formulation = "psplit";  // bigm | psplit | hull | 2term-cuts
  std::vector<int> p_list{1};
  std::string partition;  // "", "uniform", "coefficient" or "0,1|2,3"
  BoundMode bound_mode = BoundMode::kInterval;
  std::string bounds_file;
  bool linking = false;
  bool sharing = false;
  double time_limit = 3600.0;
  std::int64_t node_limit = 1000000;
  std::uint64_t seed = 0;
  std::string out;
  int resolution = 101;
  int axis_i = 0;
  int axis_j = 1;
  bool timing = true;  // false writes "NA" for time_s
  int threads = 0;

  // generate
  std::string kind;  // ex1 | ex2 | clustering | pball | osif | random-affine
                     // | network | ex1-bounds | bounds
  std::string data;  // clustering points CSV or network JSON
  int k = 2;
  int balls = 2;
  int points = 2;
  int dim = 2;
  int target = 0;
  double budget = 1.0;
  int n = 4;
  int terms = 2;
  std::vector<int> layers{2, 4, 4, 2};
};

// Throws UsageError when flags do not fit the command.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
void check_config(const RunConfig& cfg);

// The instance named by cfg.instance: built-in examples get the objective
// min sum x; anything else is read as a problem JSON file.
DisjunctiveProblem load_instance(const std::string& spec);

std::vector<Partition> make_partitions(const DisjunctiveProblem& problem,
                                       const std::string& spec, int P);
std::vector<AlphaBounds> make_bounds(const DisjunctiveProblem& problem,
                                     const std::vector<Partition>& parts,
                                     BoundMode mode, const std::string& file);
// Compiles the configured formulation for the given P.
MixedModel build_model(const DisjunctiveProblem& problem, const RunConfig& cfg,
                       int P);

struct ResultRow {
  std::string instance;
  std::string formulation;
  int P = 0;
  bool linking = false;
  bool sharing = false;
  std::string bound_mode;
  double relax_value = 0.0;
  std::string relax_status;
  MipResult mip;
};
std::string results_header();
std::string format_row(const ResultRow& row, bool timing);

// Parses argv and runs the command. Results go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace splitform
