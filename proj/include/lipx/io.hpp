#pragma once
// Text formats. Rationals are written as "p/q" strings (integers as "p").
// Parse failures raise Errc::parse with "line L, column C"; unreadable or
// empty files raise Errc::file.

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lipx/cubes.hpp"
#include "lipx/interval_re.hpp"
#include "lipx/martingale.hpp"
#include "lipx/piecewise.hpp"

namespace lipx::io {

std::string readFile(const std::filesystem::path& path);
void writeFile(const std::filesystem::path& path, std::string_view text);

/// {"mode": "step"|"linear", "breakpoints": [...], "values": [...]}
std::string pieceToJson(const PiecewiseFn& f);
PiecewiseFn pieceFromJson(std::string_view text);

/// One {"word": "...", "value": "p/q"} object per line, shortlex order.
std::string tableToJsonLines(const TreeTable& t);
TreeTable tableFromJsonLines(std::string_view text);
/// Fairness and nonnegativity are checked on load.
MartingaleTable martingaleFromJsonLines(std::string_view text);

/// Same lines with an added "stage" field.
std::string stagedToJsonLines(const StagedMartingale& sm);
StagedMartingale stagedFromJsonLines(std::string_view text);

/// {"word": "p/2^k", ...}
std::string machineToJson(const PrefixFreeMachine& m);
PrefixFreeMachine machineFromJson(std::string_view text);

/// {"dim": n, "node": "full" | "empty" | [node x 2^n]}
std::string cubeSetToJson(const DyadicCubeSet& s);
DyadicCubeSet cubeSetFromJson(std::string_view text);

/// "x,f(x)" header then one exact row per pair.
std::string csv(const std::vector<std::pair<Rat, Rat>>& rows, std::string_view header = "x,f(x)");

}  // namespace lipx::io
