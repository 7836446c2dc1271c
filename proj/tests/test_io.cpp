#include "doctest.h"

#include <filesystem>

#include "lipx/error.hpp"
#include "lipx/io.hpp"
#include "lipx/random.hpp"

using namespace lipx;
namespace fs = std::filesystem;

namespace {

template <class F>
Error errorOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  FAIL("no lipx::Error thrown");
  return Error(Errc::parse, "");
}

}  // namespace

TEST_CASE("function files") {
  const PiecewiseFn f = PiecewiseFn::linear({Rat(0), Rat(3, 8), Rat(1)}, {Rat(1), Rat(-1, 3), Rat(2)});
  const std::string text = io::pieceToJson(f);
  CHECK(text.find("\"-1/3\"") != std::string::npos);
  CHECK(io::pieceFromJson(text) == f);
  CHECK(io::pieceFromJson(R"({"mode":"step","breakpoints":["0","1"],"values":[5]})") ==
        PiecewiseFn::constant(Rat(5)));

  const Error bad = errorOf([] { io::pieceFromJson("{\"mode\": \"step\",\n \"breakpoints\": [\"0\", 1/2]}"); });
  CHECK(bad.errc() == Errc::parse);
  CHECK(std::string(bad.what()).find("line 2") != std::string::npos);
  CHECK(errorOf([] { io::pieceFromJson(R"({"mode":"cubic","breakpoints":["0","1"],"values":["0"]})"); }).errc() ==
        Errc::parse);
  CHECK(errorOf([] { io::pieceFromJson(R"({"mode":"step","breakpoints":["0","1"],"values":["1/0"]})"); }).errc() ==
        Errc::parse);
}

TEST_CASE("martingale tables as JSON lines") {
  rnd::Rng g(81);
  const MartingaleTable m = rnd::fairTable(g, 5, Rat(3, 2));
  const std::string text = io::tableToJsonLines(m.table());
  CHECK(text.substr(0, text.find('\n')) == R"({"word":"","value":"3/2"})");
  CHECK(io::martingaleFromJsonLines(text) == m);

  const std::string unfair = "{\"word\":\"\",\"value\":\"1\"}\n{\"word\":\"0\",\"value\":\"1\"}\n"
                             "{\"word\":\"1\",\"value\":\"2\"}\n";
  CHECK(errorOf([&] { io::martingaleFromJsonLines(unfair); }).errc() == Errc::unfair);
  const Error line = errorOf([] { io::tableFromJsonLines("{\"word\":\"\",\"value\":\"1\"}\n{\"word\":\"0\",}\n"); });
  CHECK(line.errc() == Errc::parse);
  CHECK(std::string(line.what()).find("line 2") != std::string::npos);
  CHECK(errorOf([] { io::tableFromJsonLines("{\"word\":\"\",\"value\":\"1\"}\n{\"word\":\"0\",\"value\":\"1\"}\n"); })
            .errc() == Errc::incomplete_table);
}

TEST_CASE("staged files need contiguous stages") {
  rnd::Rng g(82);
  const StagedMartingale sm = rnd::stagedTable(g, 3, 3, Rat(1));
  const StagedMartingale back = io::stagedFromJsonLines(io::stagedToJsonLines(sm));
  REQUIRE(back.stageCount() == 3);
  for (std::size_t s = 0; s < 3; ++s) CHECK(back.stage(s) == sm.stage(s));
  CHECK(errorOf([] { io::stagedFromJsonLines("{\"stage\":1,\"word\":\"\",\"value\":\"1\"}\n"); }).errc() ==
        Errc::staging);
  CHECK(errorOf([] { io::stagedFromJsonLines("{\"word\":\"\",\"value\":\"1\"}\n"); }).errc() == Errc::parse);
}

TEST_CASE("machines and cube sets") {
  const PrefixFreeMachine s({{BinWord::parse("1"), Rat(1, 4)}, {BinWord::parse("01"), Rat(0)}});
  CHECK(io::machineFromJson(io::machineToJson(s)).table() == s.table());
  CHECK(errorOf([] { io::machineFromJson(R"({"0":"1/2","01":"0"})"); }).errc() == Errc::machine);

  rnd::Rng g(83);
  for (unsigned dim = 1; dim <= 3; ++dim) {
    const DyadicCubeSet c = rnd::cubeSet(g, dim, 4, 6);
    CHECK(io::cubeSetFromJson(io::cubeSetToJson(c)) == c);
  }
  CHECK(io::cubeSetToJson(DyadicCubeSet::full(2)) == "{\"dim\":2,\"node\":\"full\"}\n");
  // a split whose children are all full loads as the canonical full set
  CHECK(io::cubeSetFromJson(R"({"dim":1,"node":["full","full"]})").isFull());
  CHECK(errorOf([] { io::cubeSetFromJson(R"({"dim":2,"node":["full","empty"]})"); }).errc() == Errc::parse);
}

TEST_CASE("csv rows are exact") {
  CHECK(io::csv({{Rat(0), Rat(1, 3)}, {Rat(1), Rat(-2)}}) == "x,f(x)\n0,1/3\n1,-2\n");
}

TEST_CASE("files") {
  const fs::path dir = fs::temp_directory_path() / "lipx_test_io";
  fs::remove_all(dir);
  io::writeFile(dir / "a" / "b.txt", "hello\n");
  CHECK(io::readFile(dir / "a" / "b.txt") == "hello\n");
  io::writeFile(dir / "empty.txt", "");
  CHECK(errorOf([&] { io::readFile(dir / "empty.txt"); }).errc() == Errc::file);
  CHECK(errorOf([&] { io::readFile(dir / "missing.txt"); }).errc() == Errc::file);
  fs::remove_all(dir);
}
