#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "rg/rg.hpp"

inline std::string corpus_path(const std::string& name) {
  return std::string(RG_CORPUS_DIR) + "/" + name;
}

inline std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parse + inject + static validation; throws on any error so fixtures fail
// loudly where they are used.
inline rg::Game load_text(const std::string& source) {
  auto parsed = rg::parse_game(source);
  if (!parsed.ok())
    throw rg::RgError(parsed.diagnostics.front().code, parsed.diagnostics.front().message);
  auto inject = rg::inject_implicit_definitions(parsed.game);
  if (rg::count_errors(inject) > 0)
    throw rg::RgError(inject.front().code, inject.front().message);
  auto statics = rg::validate_static(parsed.game);
  if (rg::count_errors(statics) > 0)
    throw rg::RgError(statics.front().code, statics.front().message);
  return std::move(parsed.game);
}

inline rg::Game load_corpus(const std::string& name) { return load_text(read_all(corpus_path(name))); }

// Parse + inject only; for schematic automaton fragments that are not
// meant to pass the full static gate.
inline rg::Game load_text_loose(const std::string& source) {
  auto parsed = rg::parse_game(source);
  if (!parsed.ok())
    throw rg::RgError(parsed.diagnostics.front().code, parsed.diagnostics.front().message);
  auto inject = rg::inject_implicit_definitions(parsed.game);
  if (rg::count_errors(inject) > 0)
    throw rg::RgError(inject.front().code, inject.front().message);
  return std::move(parsed.game);
}

// The declarations from the tic-tac-toe walkthrough, used across core tests.
inline const char* kBoardFixture = R"(
type Coord = {0, 1, 2};
type Piece = {e, X, O};
type ColumnOfBoard = Coord -> Piece;
type Board = Coord -> ColumnOfBoard;
type Player = {x, o};
type Score = {0, 100};
const next: Coord -> Coord = {:0, 0: 1, 1: 2};
const initColumn: ColumnOfBoard = {:e};
const initBoard: Board = {:initColumn};
var board: Board = initBoard;
var posX: Coord = 0;
begin, end: player = keeper;
)";
