#include "lipx/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "lipx/error.hpp"

namespace lipx::io {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void failAt(std::size_t line, std::size_t column, const std::string& msg) {
  throw Error(Errc::parse, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg);
}

// `byte` is nlohmann's 1-based offset of the offending character.
std::pair<std::size_t, std::size_t> lineColumn(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

Json parseJson(std::string_view text, std::size_t lineBase = 0) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = lineColumn(text, e.byte);
    std::string msg = e.what();
    if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    failAt(line + lineBase, col, msg);
  }
}

Rat ratField(const Json& j, const std::string& what, std::size_t line) {
  try {
    if (j.is_string()) return Rat::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rat(j.get<long>());
  } catch (const Error& e) {
    failAt(line, 1, what + ": " + e.what());
  }
  failAt(line, 1, what + " must be a rational string");
}

std::string stringField(const Json& obj, const std::string& key, std::size_t line) {
  if (!obj.is_object() || !obj.contains(key) || !obj[key].is_string()) {
    failAt(line, 1, "expected string field \"" + key + "\"");
  }
  return obj[key].get<std::string>();
}

BinWord wordField(const Json& obj, std::size_t line) {
  try {
    return BinWord::parse(stringField(obj, "word", line));
  } catch (const Error& e) {
    if (e.errc() == Errc::parse && std::string(e.what()).rfind("line ", 0) == 0) throw;
    failAt(line, 1, std::string("word: ") + e.what());
  }
}

struct Line {
  std::size_t number;
  Json value;
};

std::vector<Line> jsonLines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0, start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = text.substr(start, end - start);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      out.push_back({number, parseJson(line, number - 1)});
      if (!out.back().value.is_object()) failAt(number, 1, "expected a JSON object");
    }
    start = end + 1;
  }
  if (out.empty()) throw Error(Errc::parse, "no records");
  return out;
}

std::vector<std::pair<const BinWord*, const Rat*>> shortlex(const TreeTable& t,
                                                            std::vector<BinWord>& words) {
  words.clear();
  for (unsigned l = 0; l <= t.depth(); ++l) {
    for (std::size_t i = 0; i < (std::size_t{1} << l); ++i) words.push_back(BinWord::fromIndex(l, i));
  }
  std::vector<std::pair<const BinWord*, const Rat*>> out;
  for (const auto& w : words) out.emplace_back(&w, &t.at(w));
  return out;
}

TreeTable tableFromLines(const std::vector<Line>& lines) {
  std::vector<std::pair<BinWord, Rat>> entries;
  for (const auto& l : lines) {
    if (!l.value.contains("value")) failAt(l.number, 1, "missing field \"value\"");
    entries.emplace_back(wordField(l.value, l.number), ratField(l.value["value"], "value", l.number));
  }
  return TreeTable::fromEntries(entries);
}

Json nodeToJson(const DyadicCubeSet::NodePtr& n) {
  using K = DyadicCubeSet::Node::Kind;
  if (n->kind == K::full) return "full";
  if (n->kind == K::empty) return "empty";
  Json arr = Json::array();
  for (const auto& c : n->children) arr.push_back(nodeToJson(c));
  return arr;
}

DyadicCubeSet::NodePtr nodeFromJson(const Json& j, unsigned arity, unsigned level) {
  using Node = DyadicCubeSet::Node;
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "full") return std::make_shared<const Node>(Node{Node::Kind::full, {}});
    if (s == "empty") return std::make_shared<const Node>(Node{Node::Kind::empty, {}});
    failAt(1, 1, "unknown node \"" + s + "\"");
  }
  if (!j.is_array() || j.size() != arity) {
    failAt(1, 1, "a split node needs " + std::to_string(arity) + " children");
  }
  if (level >= kMaxCubeLevel) throw Error(Errc::depth, "cube tree deeper than " + std::to_string(kMaxCubeLevel));
  std::vector<DyadicCubeSet::NodePtr> kids;
  for (const auto& c : j) kids.push_back(nodeFromJson(c, arity, level + 1));
  return std::make_shared<const Node>(Node{Node::Kind::split, std::move(kids)});
}

}  // namespace

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::file, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  if (s.find_first_not_of(" \t\r\n") == std::string::npos) throw Error(Errc::file, path.string() + " is empty");
  return s;
}

void writeFile(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::file, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::file, "write failed for " + path.string());
}

std::string pieceToJson(const PiecewiseFn& f) {
  Json j;
  j["mode"] = modeName(f.mode());
  j["breakpoints"] = Json::array();
  for (const auto& b : f.breakpoints()) j["breakpoints"].push_back(b.str());
  j["values"] = Json::array();
  for (const auto& v : f.values()) j["values"].push_back(v.str());
  return j.dump(2) + "\n";
}

PiecewiseFn pieceFromJson(std::string_view text) {
  const Json j = parseJson(text);
  if (!j.is_object()) failAt(1, 1, "expected a JSON object");
  const std::string mode = stringField(j, "mode", 1);
  std::vector<Rat> b, v;
  for (const char* key : {"breakpoints", "values"}) {
    if (!j.contains(key) || !j[key].is_array()) failAt(1, 1, std::string("expected array field \"") + key + "\"");
    for (const auto& x : j[key]) (key[0] == 'b' ? b : v).push_back(ratField(x, key, 1));
  }
  if (mode == "step") return PiecewiseFn::step(std::move(b), std::move(v));
  if (mode == "linear") return PiecewiseFn::linear(std::move(b), std::move(v));
  failAt(1, 1, "mode must be \"step\" or \"linear\"");
}

std::string tableToJsonLines(const TreeTable& t) {
  std::vector<BinWord> words;
  std::string out;
  for (auto [w, v] : shortlex(t, words)) {
    Json j;
    j["word"] = w->str();
    j["value"] = v->str();
    out += j.dump() + "\n";
  }
  return out;
}

TreeTable tableFromJsonLines(std::string_view text) { return tableFromLines(jsonLines(text)); }

MartingaleTable martingaleFromJsonLines(std::string_view text) { return MartingaleTable(tableFromJsonLines(text)); }

std::string stagedToJsonLines(const StagedMartingale& sm) {
  std::string out;
  std::vector<BinWord> words;
  for (std::size_t s = 0; s < sm.stageCount(); ++s) {
    for (auto [w, v] : shortlex(sm.stage(s).table(), words)) {
      Json j;
      j["stage"] = s;
      j["word"] = w->str();
      j["value"] = v->str();
      out += j.dump() + "\n";
    }
  }
  return out;
}

StagedMartingale stagedFromJsonLines(std::string_view text) {
  std::map<std::size_t, std::vector<Line>> byStage;
  for (auto& l : jsonLines(text)) {
    if (!l.value.contains("stage") || !l.value["stage"].is_number_unsigned()) {
      failAt(l.number, 1, "expected nonnegative integer field \"stage\"");
    }
    const auto s = l.value["stage"].get<std::size_t>();
    byStage[s].push_back(std::move(l));
  }
  std::vector<MartingaleTable> stages;
  std::size_t expect = 0;
  for (auto& [s, lines] : byStage) {
    if (s != expect++) throw Error(Errc::staging, "stage " + std::to_string(expect - 1) + " is missing");
    stages.emplace_back(tableFromLines(lines));
  }
  return StagedMartingale(std::move(stages));
}

std::string machineToJson(const PrefixFreeMachine& m) {
  Json j = Json::object();
  for (const auto& [w, v] : m.table()) j[w.str()] = v.str();
  return j.dump(2) + "\n";
}

PrefixFreeMachine machineFromJson(std::string_view text) {
  const Json j = parseJson(text);
  if (!j.is_object()) failAt(1, 1, "expected a JSON object");
  std::map<BinWord, Rat> table;
  for (const auto& [k, v] : j.items()) {
    BinWord w;
    try {
      w = BinWord::parse(k);
    } catch (const Error& e) {
      failAt(1, 1, "program \"" + k + "\": " + e.what());
    }
    table.emplace(w, ratField(v, "output of " + k, 1));
  }
  return PrefixFreeMachine(std::move(table));
}

std::string cubeSetToJson(const DyadicCubeSet& s) {
  Json j;
  j["dim"] = s.dim();
  j["node"] = nodeToJson(s.root());
  return j.dump() + "\n";
}

DyadicCubeSet cubeSetFromJson(std::string_view text) {
  const Json j = parseJson(text);
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_unsigned() || !j.contains("node")) {
    failAt(1, 1, "expected {\"dim\": n, \"node\": ...}");
  }
  const unsigned dim = j["dim"].get<unsigned>();
  if (dim == 0 || dim > kMaxDim) throw Error(Errc::dimension, "unsupported dimension " + std::to_string(dim));
  // Rebuilt from its full leaves so a non-canonical file still compares equal.
  const DyadicCubeSet raw(dim, nodeFromJson(j["node"], 1u << dim, 0));
  return DyadicCubeSet::of(dim, raw.cubes());
}

std::string csv(const std::vector<std::pair<Rat, Rat>>& rows, std::string_view header) {
  std::string out(header);
  out += "\n";
  for (const auto& [x, y] : rows) out += x.str() + "," + y.str() + "\n";
  return out;
}

}  // namespace lipx::io
