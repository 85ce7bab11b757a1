#include <filesystem>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "splitform/cli.hpp"

using namespace splitform;

namespace {

int run(std::vector<const char*> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "splitform");
  std::ostringstream out, err;
  const int rc = run_cli(static_cast<int>(args.size()), args.data(), out, err);
  if (out_text) *out_text = out.str();
  return rc;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("splitform_cli_" + name)).string();
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run({}) == kExitUsage);
  CHECK(run({"solve"}) == kExitUsage);
  CHECK(run({"solve", "--instance", "ex1", "--formulation", "nope"}) == kExitUsage);
  CHECK(run({"reformulate", "--instance", "ex1", "--partition", "0,1|1,2,3", "--out",
             temp_path("x.lp").c_str()}) == kExitUsage);
  CHECK(run({"solve", "--instance", "/nonexistent/problem.json"}) == kExitModel);
  CHECK(run({"reformulate", "--instance", "ex1", "--formulation", "hull", "--out",
             temp_path("h.lp").c_str()}) == kExitUnsupported);
}

TEST_CASE("reformulate writes a readable LP") {
  const auto path = temp_path("ex1.lp");
  std::string text;
  CHECK(run({"reformulate", "--instance", "ex1", "--p", "2", "--out", path.c_str()},
            &text) == kExitOk);
  CHECK(std::filesystem::file_size(path) > 0);
  std::filesystem::remove(path);
}

TEST_CASE("solve prints the objective") {
  std::string text;
  CHECK(run({"solve", "--instance", "ex2", "--formulation", "bigm"}, &text) == kExitOk);
  CHECK(text.find("objective") != std::string::npos);
}

TEST_CASE("make_partitions clamps P and accepts explicit text") {
  const auto p = load_instance("ex1");
  CHECK(make_partitions(p, "", 9)[0].size() == 4);
  CHECK(make_partitions(p, "", -1)[0].size() == 4);
  CHECK(make_partitions(p, "0,3|1,2", 2)[0].classes ==
        std::vector<std::vector<int>>{{0, 3}, {1, 2}});
}
