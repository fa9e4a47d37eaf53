#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "cli.hpp"

using namespace qb;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run qb_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> text_lines(const std::string& text) {
  std::map<std::string, std::string> m;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto k = line.find(": ");
    REQUIRE(k != std::string::npos);
    m[line.substr(0, k)] = line.substr(k + 2);
  }
  return m;
}

std::string save(const std::string& name, const std::string& content) {
  std::string path = "qb_test_" + name + ".json";
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("documented examples") {
  auto c = qb_run({"classify", "--surface", "1,3,4,9"});
  CHECK(c.code == cli::kExitOk);
  CHECK(c.json()["result"] == "Z/3");
  CHECK(c.json()["schema"] == "qb-1");

  auto e = qb_run({"evaluate", "--surface", "1,-1,1,-5", "--prime", "5", "--point", "a,1,5,1", "--lift-first"});
  CHECK(e.code == cli::kExitOk);
  auto ej = e.json();
  CHECK(ej["result"] == "nonzero");
  CHECK(ej["certificate"]["s_ab"]["divisible"] == false);
  CHECK(ej["certificate"]["lifted"]["fourth_power"] == "621");

  auto d = qb_run({"divisible", "--m", "18496", "--prime", "5", "--ell", "5", "--point", "-64,-960"});
  CHECK(d.code == cli::kExitOk);
  CHECK(d.json()["result"] == false);
  CHECK(d.json()["certificate"]["profile"]["smooth_count"] == 8);
}

TEST_CASE("document shape") {
  auto j = qb_run({"classify", "--surface", "2,2,4,5"}).json();
  for (const char* key : {"schema", "command", "inputs", "result", "certificate", "precision_used"})
    CHECK(j.contains(key));
  CHECK(j["result"] == "Z/5");
  CHECK(j["precision_used"] == 32);
  CHECK(qb_run({"classify", "--surface", "1,1,1,1"}).json()["result"] == "0");
  CHECK(qb_run({"--precision", "48", "classify", "--surface", "1,1,1,1"}).json()["precision_used"] == 48);
}

TEST_CASE("exit codes") {
  CHECK(qb_run({}).code == cli::kExitUsage);
  CHECK(qb_run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(qb_run({"classify"}).code == cli::kExitUsage);
  CHECK(qb_run({"classify", "--surface", "1,2,3"}).code == cli::kExitUsage);
  CHECK(qb_run({"classify", "--surface", "1,x,3,4"}).code == cli::kExitUsage);
  CHECK(qb_run({"classify", "--surface", "1,0,3,4"}).code == cli::kExitUsage);
  CHECK(qb_run({"--precision", "8", "classify", "--surface", "1,1,1,1"}).code == cli::kExitUsage);
  CHECK(qb_run({"evaluate", "--surface", "1,-1,1,-5", "--prime", "5", "--point", "a,1,5,1"}).code == cli::kExitUsage);
  CHECK(qb_run({"evaluate", "--surface", "1,-1,1,-5", "--prime", "6", "--point", "1,1,0,0"}).code == cli::kExitUsage);
  CHECK(qb_run({"verify-corollary", "--family", "co9", "--n", "1"}).code == cli::kExitUsage);

  auto trivial = qb_run({"evaluate", "--surface", "1,1,1,1", "--prime", "3", "--point", "1,1,1,1"});
  CHECK(trivial.code == cli::kExitMath);
  CHECK(trivial.json()["error"]["kind"] == "math");
  CHECK(qb_run({"evaluate", "--surface", "1,3,4,9", "--prime", "3", "--point", "1,1,1,1"}).code == cli::kExitMath);
  CHECK(qb_run({"divisible", "--m", "18496", "--prime", "5", "--ell", "5", "--point", "1,1"}).code == cli::kExitMath);
  // co3.1 needs a = b = c mod 3; n = 2 breaks it
  CHECK(qb_run({"verify-corollary", "--family", "co3.1", "--n", "2"}).code == cli::kExitMath);
  // a^4 = -3 is not a fourth power in Q_5
  CHECK(qb_run({"evaluate", "--surface", "1,-1,1,-5", "--prime", "5", "--point", "a,1,1,1", "--lift-first"}).code ==
        cli::kExitMath);
}

TEST_CASE("undecided solubility exits with 2") {
  // 1031 = 3 mod 4 divides c and d; the residue search outgrows its budget
  auto r = qb_run({"solvable", "--surface", "1,1,1031,1031", "--prime", "1031"});
  CHECK(r.code == cli::kExitPrecision);
  CHECK(r.json()["error"]["kind"] == "precision");
}

TEST_CASE("evaluation away from ell and at the real place") {
  for (const char* p : {"0", "2", "7", "13"}) {
    auto r = qb_run({"evaluate", "--surface", "1,3,4,9", "--prime", p, "--point", "1,1,1,0"});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.json()["result"] == "zero");
  }
  auto r = qb_run({"evaluate", "--surface", "1,3,4,9", "--prime", "3", "--point", "1,1,1,0"});
  CHECK(r.json()["result"] == "zero");
  CHECK(r.json()["certificate"]["deformation_step"] == 8);
}

TEST_CASE("unnormalized surfaces carry the point along") {
  // 16x^4 + 3*16y^4 = 4*16z^4 + 9*16w^4 is [1,3,4,9] with every coefficient scaled by 16
  auto r = qb_run({"evaluate", "--surface", "16,48,64,144", "--prime", "3", "--point", "1,1,1,0"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.json()["result"] == "zero");
  auto w = qb_run({"evaluate", "--surface", "16,-16,16,-80", "--prime", "5", "--point", "a,1,5,1", "--lift-first"});
  CHECK(w.json()["result"] == "nonzero");
  CHECK(qb_run({"classify", "--surface", "1/2,3/2,2,9/2"}).json()["result"] == "Z/3");
}

TEST_CASE("certificates round-trip") {
  std::vector<std::vector<std::string>> runs = {
      {"evaluate", "--surface", "1,-1,1,-5", "--prime", "5", "--point", "a,1,5,1", "--lift-first"},
      {"evaluate", "--surface", "1,3,4,9", "--prime", "3", "--point", "1,1,1,0"},
      {"evaluate", "--surface", "1,3,4,9", "--prime", "7", "--point", "1,1,1,0"},
      {"classify", "--surface", "1,3,4,9"},
      {"divisible", "--m", "18496", "--prime", "5", "--ell", "5", "--point", "-64,-960"},
      {"witnesses", "--surface", "1,-1,3,9"},
      {"witnesses", "--surface", "2,2,4,5"},
      {"solvable", "--surface", "1,3,4,9", "--prime", "2"},
      {"verify-corollary", "--family", "co1.1", "--n", "1", "--bound", "10"},
  };
  int i = 0;
  for (const auto& args : runs) {
    auto first = qb_run(args);
    REQUIRE(first.code == cli::kExitOk);
    std::string path = save(std::to_string(i++), first.out);
    auto check = qb_run({"--verify-certificate", path});
    CHECK_MESSAGE(check.code == cli::kExitOk, args[0]);
    auto j = check.json();
    CHECK(j["result"] == true);
    CHECK(j["certificate"]["recomputed_result"] == first.json()["result"]);
    if (args[0] == "evaluate") CHECK(j["certificate"]["certificate_replay"] == first.json()["result"]);
    std::remove(path.c_str());
  }
}

TEST_CASE("tampered certificates are rejected") {
  auto first = qb_run({"evaluate", "--surface", "1,-1,1,-5", "--prime", "5", "--point", "a,1,5,1", "--lift-first"});
  Json doc = first.json();
  doc["result"] = "zero";
  std::string path = save("tampered", doc.dump());
  CHECK(qb_run({"--verify-certificate", path}).code == cli::kExitMath);

  // the replayed point moved off the reference surface
  doc = first.json();
  doc["certificate"]["point_on_normal_form"][2]["unit"] = "7";
  std::ofstream(path) << doc.dump();
  CHECK(qb_run({"--verify-certificate", path}).code == cli::kExitMath);

  std::ofstream(path) << "{\"schema\": \"other\"}";
  CHECK(qb_run({"--verify-certificate", path}).code == cli::kExitUsage);
  std::ofstream(path) << "not json";
  CHECK(qb_run({"--verify-certificate", path}).code == cli::kExitUsage);
  std::remove(path.c_str());
}

TEST_CASE("text and json carry the same content") {
  std::vector<std::vector<std::string>> runs = {
      {"classify", "--surface", "1,3,4,9"},
      {"evaluate", "--surface", "1,-1,1,-5", "--prime", "5", "--point", "a,1,5,1", "--lift-first"},
      {"divisible", "--m", "18496", "--prime", "5", "--ell", "5", "--point", "-64,-960"},
      {"witnesses", "--surface", "1,-1,1,-5"},
      {"verify-corollary", "--family", "co3.2", "--n", "1", "--bound", "12"},
  };
  for (auto args : runs) {
    auto j = qb_run(args);
    args.insert(args.begin(), {"--format", "text"});
    auto t = qb_run(args);
    REQUIRE(t.code == j.code);
    CHECK(t.out == cli::render_text(j.json()));
    auto lines = text_lines(t.out);
    auto result = j.json()["result"];
    if (result.is_string()) CHECK(lines["result"] == result.get<std::string>());
    else if (result.is_boolean()) CHECK(lines["result"] == result.dump());
    CHECK(t.out.rfind("schema: qb-1\ncommand: ", 0) == 0);
  }
}

TEST_CASE("format flag may follow the subcommand") {
  auto t = qb_run({"classify", "--surface", "1,3,4,9", "--format", "text"});
  CHECK(t.code == cli::kExitOk);
  CHECK(text_lines(t.out)["result"] == "Z/3");
}

TEST_CASE("solvable") {
  CHECK(qb_run({"solvable", "--surface", "1,3,4,9", "--prime", "3"}).json()["result"] == true);
  // x^4 + y^4 = 5(z^4 + w^4): x^4 + y^4 = 0 mod 5 forces 5 | x, y, and then 5 | z, w
  auto r = qb_run({"solvable", "--surface", "1,1,5,5", "--prime", "5"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.json()["result"] == false);
}
