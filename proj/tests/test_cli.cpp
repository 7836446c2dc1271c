#include "doctest.h"

#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "lipx/cli.hpp"
#include "lipx/io.hpp"
#include "lipx/oscillator.hpp"

namespace fs = std::filesystem;
using lipx::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "lipx_test_cli" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"synth", "zigzag", "--p", "1/4"}).code == 2);  // missing --q, --k
  const Result r = call({"synth", "zigzag", "--p", "1/0", "--q", "1", "--k", "3"});
  CHECK(r.code == 2);
  CHECK(r.err.find("core.parse") != std::string::npos);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("contract and file errors are reported with their module code") {
  const Result spec = call({"synth", "zigzag", "--p", "1/4", "--q", "3/4", "--k", "1"});
  CHECK(spec.code == 2);
  CHECK(spec.err.find("synth.spec") != std::string::npos);
  const Result file = call({"mg", "check", "--table", "/nonexistent/table.jsonl"});
  CHECK(file.code == 2);
  CHECK(file.err.find("cli.file") != std::string::npos);
  const Result oracle = call({"synth", "thm34", "--oracle", "quadratic"});
  CHECK(oracle.code == 2);
}

TEST_CASE("zigzag and fact31 print exact results") {
  const Result z = call({"--json", "synth", "zigzag", "--p", "1/4", "--q", "3/4", "--k", "3"});
  REQUIRE(z.code == 0);
  const auto j = nlohmann::json::parse(z.out);
  CHECK(j["command"] == "--json synth zigzag --p 1/4 --q 3/4 --k 3");
  const Result f = call({"synth", "fact31", "--alphas", "0,1/2,3/4"});
  CHECK(f.code == 0);
  CHECK(f.out.find("3/4") != std::string::npos);
}

TEST_CASE("martingale files through the command line") {
  const fs::path dir = scratch("mg");
  const fs::path table = dir / "m.jsonl";
  lipx::io::writeFile(table, lipx::io::tableToJsonLines(lipx::Strategy::parse("pattern:01").tabulate(4).table()));
  CHECK(call({"mg", "check", "--table", table.string()}).code == 0);
  const Result cdf = call({"--json", "mg", "cdf", "--table", table.string(), "--x", "1/4", "--y", "3/4", "--c",
                           "0", "--d", "16"});
  CHECK(cdf.code == 0);
  CHECK(nlohmann::json::parse(cdf.out).contains("results"));
  lipx::io::writeFile(dir / "bad.jsonl", "{\"word\":\"\",\"value\":\"1\"}\n{\"word\":\"0\",\"value\":\"1\"}\n"
                                         "{\"word\":\"1\",\"value\":\"2\"}\n");
  // checking is the point of this command, so unfairness is a failed check
  const Result bad = call({"mg", "check", "--table", (dir / "bad.jsonl").string()});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("FAIL fairness") != std::string::npos);
  // other commands need a fair table up front
  const Result cdfBad = call({"mg", "cdf", "--table", (dir / "bad.jsonl").string(), "--x", "1/2"});
  CHECK(cdfBad.code == 2);
  CHECK(cdfBad.err.find("mg.unfair") != std::string::npos);
}

TEST_CASE("reports are deterministic for a fixed seed") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  for (const auto& dir : {a, b}) {
    CHECK(call({"--seed", "7", "--out-dir", dir.string(), "synth", "lemma33", "--depth", "8", "--stages", "2"}).code ==
          0);
  }
  // identical up to the output directory named in the report
  const auto withoutDir = [](std::string text, const std::string& dir) {
    for (std::size_t at; (at = text.find(dir)) != std::string::npos;) text.replace(at, dir.size(), "<dir>");
    return text;
  };
  CHECK(withoutDir(lipx::io::readFile(a / "report.json"), a.string()) ==
        withoutDir(lipx::io::readFile(b / "report.json"), b.string()));
  CHECK(withoutDir(lipx::io::readFile(a / "report.txt"), a.string()) ==
        withoutDir(lipx::io::readFile(b / "report.txt"), b.string()));
  for (const char* f : {"staged.jsonl", "signed.jsonl", "trace.log"}) {
    CHECK(lipx::io::readFile(a / f) == lipx::io::readFile(b / f));
  }
  const fs::path c = scratch("det_c");
  CHECK(call({"--seed", "8", "--out-dir", c.string(), "synth", "lemma33", "--depth", "8", "--stages", "2"}).code == 0);
  CHECK(lipx::io::readFile(a / "staged.jsonl") != lipx::io::readFile(c / "staged.jsonl"));
}

TEST_CASE("oscillate writes a cdf and passes its checks") {
  const fs::path dir = scratch("osc");
  const Result r = call({"--out-dir", dir.string(), "oscillate", "--strategy", "double-on-0", "--target", "0",
                         "--depth", "40"});
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "cdf.csv"));
  CHECK(fs::exists(dir / "report.json"));
}

TEST_CASE("schnorr build reports the odd-level average bound as failing") {
  const fs::path dir = scratch("schnorr");
  const Result r = call({"--out-dir", dir.string(), "schnorr", "build", "--z", "1/3", "--levels", "4"});
  // every other check passes; only the alternation bound at odd levels fails
  CHECK(r.code == 1);
  const auto j = nlohmann::json::parse(lipx::io::readFile(dir / "report.json"));
  for (const auto& c : j["checks"]) {
    INFO(c.dump());
    CHECK(c["pass"].get<bool>() == (c["name"] != "average-alternation"));
  }
  CHECK(fs::exists(dir / "G4.json"));
  CHECK(fs::exists(dir / "averages.csv"));
}

TEST_CASE("sample prints CSV when no destination is given") {
  const fs::path dir = scratch("sample");
  lipx::io::writeFile(dir / "f.json", R"({"mode":"linear","breakpoints":["0","1"],"values":["0","1/2"]})");
  const Result r = call({"sample", "--fn", (dir / "f.json").string(), "--depth", "2"});
  CHECK(r.code == 0);
  CHECK(r.out == "x,f(x)\n0,0\n1/4,1/8\n1/2,1/4\n3/4,3/8\n1,1/2\n");
  const Result d = call({"report", "derivative-bounds", "--fn", (dir / "f.json").string(), "--z", "0101", "--from",
                         "1", "--to", "4"});
  CHECK(d.code == 0);
  CHECK(d.out.find("1/2") != std::string::npos);
}
