#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "sudler/cli.hpp"
#include "sudler/csv.hpp"

using namespace sudler;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "sudler");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("shortest round-trip formatting") {
  CHECK(csv::shortest(0.1) == "0.1");
  CHECK(csv::shortest(1.0) == "1");
  CHECK(std::stod(csv::shortest(2.4071136943434)) == 2.4071136943434);
}

TEST_CASE("subcommands") {
  CHECK(run({"fib", "30"}).out == "F_30 = 832040\n");
  Run z = run({"zeck", "100"});
  CHECK(z.code == cli::kOk);
  CHECK(z.out.find("F_11 + F_6 + F_4") != std::string::npos);
  Run q = run({"q", "1"});
  CHECK(q.out.find("Q = 1.864064847626") != std::string::npos);
  Run d = run({"decompose", "12"});
  CHECK(d.code == cli::kOk);
  CHECK(d.out.find("|Q - ABC|/Q") != std::string::npos);
  Run prof = run({"profile", "5", "--stride", "2"});
  CHECK(prof.out.rfind("k,P,logP\n1,", 0) == 0);
  CHECK(run({"cotprofile", "4"}).out.rfind("k,partial\n", 0) == 0);
  Run scan = run({"scan", "50"});
  CHECK(scan.out.rfind("k,logP_over_logk\n2,", 0) == 0);
  CHECK(scan.err.find("K2") != std::string::npos);
  Run p = run({"perturbed", "1", "w^2"});
  CHECK(p.code == cli::kOk);
  CHECK(p.out.find("product = 0") != std::string::npos);
  CHECK(run({"perturbed", "8", "-omega^9"}).code == cli::kOk);
  CHECK(run({"identities", "12"}).code == cli::kOk);
}

TEST_CASE("errors and exit codes") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"q"}).code == cli::kUsage);
  CHECK(run({"bogus"}).code == cli::kUsage);
  CHECK(run({"--precision", "32", "q", "3"}).code == cli::kUsage);
  CHECK(run({"q", "0"}).code == cli::kUsage);
  CHECK(run({"perturbed", "5", "1/3"}).code == cli::kUsage);
  CHECK(run({"perturbed", "5", "abc"}).code == cli::kUsage);
  CHECK(run({"zeck", "-4"}).code == cli::kUsage);
  CHECK(run({"verify", "--level", "deep"}).code == cli::kUsage);
  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("worker count does not change CSV") {
  std::string base = run({"--workers", "1", "profile", "21"}).out;
  CHECK(base.size() > 100000);
  CHECK(run({"--workers", "8", "profile", "21"}).out == base);
  CHECK(run({"cotprofile", "21", "--workers", "3"}).out == run({"cotprofile", "21"}).out);
}
