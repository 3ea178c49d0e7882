#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace rg;

TEST_CASE("injection adds the six implicit declarations to the minimal game") {
  auto pr = parse_game(read_all(corpus_path("minimal.rg")));
  REQUIRE(pr.ok());
  size_t aliases_before = pr.game.aliases.size();
  size_t vars_before = pr.game.vars.size();
  auto diags = inject_implicit_definitions(pr.game);
  REQUIRE(count_errors(diags) == 0);
  CHECK(pr.game.aliases.size() - aliases_before == 4);  // Bool, Goals, PlayerOrSystem, Visibility
  CHECK(pr.game.vars.size() - vars_before == 3);        // player, goals, visible

  // PlayerOrSystem is Player plus the two system players
  Env env(pr.game);
  TypeExpr pos = resolve_type(TypeExpr::alias_ref(pr.game.names.find("PlayerOrSystem")),
                              env.aliases());
  REQUIRE(pos.symbols.size() == 3);
  CHECK(pr.game.text(pos.symbols[1]) == "keeper");
  CHECK(pr.game.text(pos.symbols[2]) == "random");

  // goals defaults to the first Score symbol
  const VarDecl* goals = pr.game.find_var(pr.game.names.find("goals"));
  REQUIRE(goals);
  CHECK(pr.game.text(goals->init.map_data().def.sym()) == "0");
}

TEST_CASE("injection is idempotent") {
  auto pr = parse_game(read_all(corpus_path("minimal.rg")));
  inject_implicit_definitions(pr.game);
  Game snapshot = pr.game;
  auto diags = inject_implicit_definitions(pr.game);
  CHECK(count_errors(diags) == 0);
  CHECK(game_equal(snapshot, pr.game));
}

TEST_CASE("explicit builtins must match exactly") {
  auto ok = parse_game(
      "type Player = {x}; type Score = {0}; type Bool = {0, 1}; begin, end: player = keeper;");
  REQUIRE(ok.ok());
  CHECK(count_errors(inject_implicit_definitions(ok.game)) == 0);

  auto bad = parse_game(
      "type Player = {x}; type Score = {0}; type Bool = {yes, no}; begin, end: player = keeper;");
  REQUIRE(bad.ok());
  auto diags = inject_implicit_definitions(bad.game);
  REQUIRE(count_errors(diags) == 1);
  CHECK(diags.front().code == "MismatchedBuiltin");

  auto bad_player_init = parse_game(
      "type Player = {x}; type Score = {0}; var player: PlayerOrSystem = x; begin, end: player = keeper;");
  REQUIRE(bad_player_init.ok());
  auto diags2 = inject_implicit_definitions(bad_player_init.game);
  REQUIRE(count_errors(diags2) >= 1);
  CHECK(diags2.front().code == "MismatchedBuiltin");
}

TEST_CASE("missing Player or Score is an error") {
  auto no_player = parse_game("type Score = {0}; begin, end: player = keeper;");
  auto d1 = inject_implicit_definitions(no_player.game);
  REQUIRE(count_errors(d1) == 1);
  CHECK(d1.front().code == "MissingPlayerType");

  auto no_score = parse_game("type Player = {x}; begin, end: player = keeper;");
  auto d2 = inject_implicit_definitions(no_score.game);
  REQUIRE(count_errors(d2) == 1);
  CHECK(d2.front().code == "MissingScoreType");
}

TEST_CASE("validate_static accepts the whole positive corpus") {
  for (const char* name :
       {"minimal.rg", "tictactoe.rg", "coinflip.rg", "hiddencoin.rg", "turing_n4.rg"}) {
    CAPTURE(name);
    auto pr = parse_game(read_all(corpus_path(name)));
    REQUIRE(pr.ok());
    REQUIRE(count_errors(inject_implicit_definitions(pr.game)) == 0);
    auto diags = validate_static(pr.game);
    CHECK(count_errors(diags) == 0);
    // tictactoe is authored to be diagnostics-free altogether
    if (std::string(name) == "tictactoe.rg") CHECK(diags.empty());
  }
}

namespace {

Diagnostics statics_for(const std::string& body) {
  std::string src = "type Player = {x};\ntype Score = {0};\n" + body +
                    "\nbegin, end: player = keeper;\n";
  auto pr = parse_game(src);
  REQUIRE(pr.ok());
  REQUIRE(count_errors(inject_implicit_definitions(pr.game)) == 0);
  return validate_static(pr.game);
}

bool has_code(const Diagnostics& ds, const std::string& code) {
  for (const auto& d : ds)
    if (d.code == code) return true;
  return false;
}

}  // namespace

TEST_CASE("static checks flag the named defects") {
  CHECK(has_code(statics_for("type T = {a, b};\nconst m: T -> T = {:a, a: b, a: a};"),
                 "DuplicateKey"));
  CHECK(has_code(statics_for("a, c: ? a -> b;"), "ReachabilityImpossible"));
  CHECK(has_code(statics_for("type T = {a};\nvar v: T = missing;"), "UnknownName"));
  CHECK(has_code(statics_for("type T = {a};\ntype U = {b};\nvar t: T = a;\nvar u: U = b;\nq1, q2: t == u;"),
                 "NotAssignable"));
  CHECK(has_code(statics_for("type T = {a};\nconst c: T = a;\nq1, q2: c = a;"),
                 "AssignTargetNotVariable"));
  CHECK(has_code(statics_for("type T = {a};\nconst c1: T = c2;\nconst c2: T = c1;"),
                 "RecursiveValue"));
  CHECK(has_code(statics_for("type T = {a, b};\nvar v: T = a;\nvar w: T -> T = {:a};\nq1, q2: v = w;"),
                 "NotAssignable"));
  CHECK(has_code(statics_for("type T = {a, b};\nvar w: T -> T = a;"), "ValueShapeMismatch"));
  // reach recursion: the checking edge lies inside its own pattern
  CHECK(has_code(statics_for("type T = {a};\nvar v: T = a;\na1, a2: ? a1 -> a2;"),
                 "ReachRecursion"));
}

TEST_CASE("shadowing a symbol by a variable is a warning") {
  auto ds = statics_for("type T = {a, v};\nvar v: T = a;");
  CHECK(count_errors(ds) == 0);
  CHECK(has_code(ds, "NameShadowing"));
}

TEST_CASE("games without a start or without an end are flagged") {
  auto pr = parse_game("type Player = {x}; type Score = {0}; a, end: player = keeper;");
  REQUIRE(pr.ok());
  inject_implicit_definitions(pr.game);
  CHECK(has_code(validate_static(pr.game), "MissingBegin"));

  auto no_end = parse_game("type Player = {x}; type Score = {0}; begin, q: $ t;");
  REQUIRE(no_end.ok());
  inject_implicit_definitions(no_end.game);
  auto ds = validate_static(no_end.game);
  CHECK(count_errors(ds) == 0);  // warnings only
  CHECK(has_code(ds, "EndUnreachable"));
}

TEST_CASE("edges into end that skip the keeper handoff draw a warning") {
  std::string src =
      "type Player = {x};\ntype Score = {0};\nbegin, q: player = x;\nq, end: $ t;\n";
  auto pr = parse_game(src);
  REQUIRE(pr.ok());
  inject_implicit_definitions(pr.game);
  auto ds = validate_static(pr.game);
  CHECK(count_errors(ds) == 0);
  CHECK(has_code(ds, "EndWithoutKeeper"));
}

TEST_CASE("constant folding substitutes constant references") {
  Game g = load_text(kBoardFixture);
  Env env(g);
  const Value* init = env.const_value(g.names.find("initBoard"));
  REQUIRE(init);
  REQUIRE(init->is_map());
  // the initColumn reference is folded into a nested map
  CHECK(init->map_data().def.is_map());
  CHECK(g.text(init->map_data().def.map_data().def.sym()) == "e");
}
