#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace rg;

namespace {

// Parse + inject without the full static gate: several fixtures are
// schematic automaton fragments.
Game load_loose(const std::string& source) {
  auto parsed = parse_game(source);
  REQUIRE(parsed.ok());
  REQUIRE(count_errors(inject_implicit_definitions(parsed.game)) == 0);
  return std::move(parsed.game);
}

std::string edge_text(const Game& g, const Edge& e) {
  return g.text(e.from) + "," + g.text(e.to) + ": " + render_action(g, e.action);
}

std::vector<std::string> edge_texts(const Game& g) {
  std::vector<std::string> out;
  for (const Edge& e : g.edges) out.push_back(edge_text(g, e));
  return out;
}

bool has_edge(const Game& g, const std::string& text) {
  for (const Edge& e : g.edges)
    if (edge_text(g, e) == text) return true;
  return false;
}

const char* kHeader = "type Player = {p};\ntype Score = {0};\n";

std::pair<std::vector<uint64_t>, std::map<std::string, uint64_t>> perft_signature(const Game& g,
                                                                                  size_t depth) {
  auto cg = compile(g);
  TraversalCache cache;
  cache.config.budget = 200'000'000;
  auto res = perft(cg, cg.initial_state(), depth, cache);
  return {res.per_depth, res.terminal_goals};
}

}  // namespace

TEST_CASE("compact comparisons folds a near-cover into one inequality") {
  Game g = load_loose(std::string(kHeader) + R"(
type A = {1, 2, 3};
var x: A = 1;
begin, end: x == 1;
begin, end: x == 2;
)");
  REQUIRE(run_pass(g, PassId::CompactComparisons));
  REQUIRE(g.edges.size() == 1);
  CHECK(edge_text(g, g.edges[0]) == "begin,end: x != 3");
  CHECK_FALSE(run_pass(g, PassId::CompactComparisons));
}

TEST_CASE("compact comparisons folds a full cover into a skip edge") {
  Game g = load_loose(std::string(kHeader) + R"(
type A = {1, 2};
var x: A = 1;
begin, end: x == 1;
begin, end: x == 2;
)");
  REQUIRE(run_pass(g, PassId::CompactComparisons));
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0].action.kind == Action::Kind::Empty);
}

TEST_CASE("inline assignment rewrites the uses and skips the definition") {
  Game g = load_loose(std::string(kHeader) + R"(
type Coord = {0, 1, 2};
type Board = Coord -> Coord;
const up: Coord -> Coord = {:0, 0: 1, 1: 2};
var board: Board = {:0};
var x: Coord = 0;
var coordX: Coord = 0;
var coordY: Coord = 0;
begin, a: coordX = board[x];
a, b: coordX != coordY;
b, c: coordX = up[coordX];
)");
  REQUIRE(run_pass(g, PassId::InlineAssignment));
  CHECK(g.edges[0].action.kind == Action::Kind::Empty);
  CHECK(edge_text(g, g.edges[1]) == "a,b: board[x] != coordY");
  CHECK(edge_text(g, g.edges[2]) == "b,c: coordX = up[board[x]]");
  // the final reassignment has no further uses, so nothing else fires
  CHECK_FALSE(run_pass(g, PassId::InlineAssignment));
}

TEST_CASE("inline assignment leaves definitions whose operands get redefined") {
  Game g = load_loose(std::string(kHeader) + R"(
type Coord = {0, 1, 2};
const up: Coord -> Coord = {:0, 0: 1, 1: 2};
var src: Coord = 0;
var dst: Coord = 0;
begin, a: dst = up[src];
a, b: src = 1;
b, c: dst == 2;
)");
  CHECK_FALSE(run_pass(g, PassId::InlineAssignment));
}

TEST_CASE("merge accesses composes constant lookups") {
  Game g = load_loose(std::string(kHeader) + R"(
type A = {1};
type B = {1, 2};
type C = {2, 3, 4};
const MapAB: A -> B = {:2, 1: 1};
const MapBC: B -> C = {:4, 1: 2, 2: 3};
var x: C = 2;
begin, end: x = MapBC[MapAB[1]];
)");
  REQUIRE(run_pass(g, PassId::MergeAccesses));
  CHECK(edge_text(g, g.edges[0]) == "begin,end: x = MapBC_MapAB[1]");
  const ConstDecl* merged = g.find_const(g.names.find("MapBC_MapAB"));
  REQUIRE(merged);
  // composed: default MapBC[2] = 3, entry 1 -> MapBC[1] = 2
  Env env(g);
  const Value* v = env.const_value(merged->name);
  REQUIRE(v);
  CHECK(g.text(v->map_data().def.sym()) == "3");
  REQUIRE(v->map_data().entries.size() == 1);
  CHECK(g.text(v->map_data().entries[0].second.sym()) == "2");
}

TEST_CASE("propagate constants folds known lookups into symbols") {
  Game g = load_loose(std::string(kHeader) + R"(
type A = {1, 2, 3, 4};
const down: A -> A = {:1, 4: 3, 3: 2};
var x: A = 3;
var y: A = 1;
begin, a: y = A(*);
a, b: y == down[x];
b, end: player = keeper;
)");
  REQUIRE(run_pass(g, PassId::PropagateConstants));
  CHECK(edge_text(g, g.edges[1]) == "a,b: y == 2");
  CHECK_FALSE(run_pass(g, PassId::PropagateConstants));
}

TEST_CASE("reorder conditions hoists the shared comparison (opt-in pass)") {
  Game g = load_loose(std::string(kHeader) + R"(
type T = {1, 2, 4};
begin, a: 4 == 4;
begin, b: 2 == 2;
a, a1: 1 == 1;
b, b1: 4 == 4;
)");
  REQUIRE(run_pass(g, PassId::ReorderConditions));
  CHECK(has_edge(g, "begin,a: 4 == 4"));
  CHECK(has_edge(g, "begin,b: 4 == 4"));
  CHECK(has_edge(g, "a,a1: 1 == 1"));
  CHECK(has_edge(g, "b,b1: 2 == 2"));
  CHECK_FALSE(run_pass(g, PassId::ReorderConditions));
}

TEST_CASE("self assignments and comparisons become skips; x != x disappears") {
  Game g = load_loose(std::string(kHeader) + R"(
type T = {a};
var x: T = a;
begin, a1: x == x;
begin, a2: x != x;
begin, a3: x = x;
)");
  REQUIRE(run_pass(g, PassId::SkipSelfAssignCompare));
  auto texts = edge_texts(g);
  REQUIRE(texts.size() == 2);
  CHECK(texts[0] == "begin,a1: ");
  CHECK(texts[1] == "begin,a3: ");
}

TEST_CASE("exclusive multiedges join into a skip") {
  Game g = load_loose(std::string(kHeader) + R"(
type T = {u, v};
var x: T = u;
var y: T = u;
begin, end: ? a -> b;
begin, end: ! a -> b;
c, d: x == y;
c, d: x != y;
a, b: x == y;
)");
  REQUIRE(run_pass(g, PassId::JoinExclusiveEdges));
  auto texts = edge_texts(g);
  CHECK(texts[0] == "begin,end: ");
  CHECK(texts[1] == "c,d: ");
  REQUIRE(g.edges.size() == 3);  // the a,b helper edge stays
}

TEST_CASE("fork prefixes with identical labels join behind one edge") {
  Game g = load_loose(std::string(kHeader) + R"(
begin, b: 1 == 1;
begin, c: 1 == 1;
b, end: 2 == 2;
c, d: ;
)");
  REQUIRE(run_pass(g, PassId::JoinForkPrefixes));
  CHECK(has_edge(g, "begin,b: 1 == 1"));
  CHECK(has_edge(g, "b,end: 2 == 2"));
  CHECK(has_edge(g, "c,d: "));
  CHECK(has_edge(g, "b,c: "));
  CHECK(g.edges.size() == 4);
}

TEST_CASE("fork suffixes with identical labels merge their sources") {
  Game g = load_loose(std::string(kHeader) + R"(
type T = {0, 1, 2};
var x: T = 0;
begin, a1: x == 1;
begin, a2: x == 2;
a1, end: 0 == 0;
a2, end: 0 == 0;
)");
  REQUIRE(run_pass(g, PassId::JoinForkSuffixes));
  auto texts = edge_texts(g);
  REQUIRE(texts.size() == 3);
  CHECK(has_edge(g, "begin,a1: x == 1"));
  CHECK(has_edge(g, "begin,a1: x == 2"));
  CHECK(has_edge(g, "a1,end: 0 == 0"));
}

TEST_CASE("skip edges compact away") {
  Game g = load_loose(std::string(kHeader) + R"(
begin, b: 1 == 1;
b, c: ;
c, end: 2 == 2;
)");
  REQUIRE(run_pass(g, PassId::CompactSkipEdges));
  auto texts = edge_texts(g);
  REQUIRE(texts.size() == 2);
  CHECK(has_edge(g, "begin,c: 1 == 1"));
  CHECK(has_edge(g, "c,end: 2 == 2"));
}

TEST_CASE("unreachable and useless edges prune away") {
  Game g = load_loose(std::string(kHeader) + R"(
begin, b: ? r1 -> target;
b, end: ;
a, end: ;
r1, r2: ;
r1, target: ;
)");
  REQUIRE(run_pass(g, PassId::PruneUnreachableNodes));
  auto texts = edge_texts(g);
  REQUIRE(texts.size() == 3);
  CHECK(has_edge(g, "begin,b: ? r1 -> target"));
  CHECK(has_edge(g, "b,end: "));
  CHECK(has_edge(g, "r1,target: "));
}

TEST_CASE("unused constants and variables prune away, specials stay") {
  Game g = load_loose(std::string(kHeader) + R"(
type T = {a, b};
const used: T = a;
const unused: T = b;
const only_by_unused: T = a;
var v: T = used;
var w: T = only_by_unused;
begin, q: v == a;
q, end: player = keeper;
)");
  // w is written by no one and read by no one except its own declaration
  REQUIRE(run_pass(g, PassId::PruneUnusedConstsVars));
  CHECK(g.find_var(g.names.find("v")));
  CHECK_FALSE(g.find_var(g.names.find("w")));
  CHECK(g.find_const(g.names.find("used")));
  CHECK_FALSE(g.find_const(g.names.find("unused")));
  CHECK_FALSE(g.find_const(g.names.find("only_by_unused")));
  CHECK(g.find_var(g.names.find("player")));
  CHECK(g.find_var(g.names.find("goals")));
  CHECK(g.find_var(g.names.find("visible")));
}

TEST_CASE("artificial tags strip at the end of the pipeline") {
  Game g = load_loose(std::string(kHeader) + R"(
begin, end: $ t;
@artificialTag t;
)");
  REQUIRE(run_pass(g, PassId::SkipArtificialTags));
  CHECK(g.edges[0].action.kind == Action::Kind::Empty);
  CHECK(g.pragmas.size() == 1);  // the pragma itself round-trips
}

TEST_CASE("redundant tags at a uniform position strip away") {
  Game g = load_loose(std::string(kHeader) + R"(
begin, a: $ t1;
begin, b: $ t2;
begin, c: $ t3;
a, end: $ rt;
b, end: $ rt;
c, end: $ rt;
)");
  REQUIRE(run_pass(g, PassId::SkipRedundantTags));
  CHECK(has_edge(g, "begin,a: $t1"));
  CHECK(has_edge(g, "begin,b: $t2"));
  CHECK(has_edge(g, "begin,c: $t3"));
  CHECK(has_edge(g, "a,end: "));
  CHECK(has_edge(g, "b,end: "));
  CHECK(has_edge(g, "c,end: "));
  // the differing first position must survive
  CHECK_FALSE(run_pass(g, PassId::SkipRedundantTags));
}

TEST_CASE("redundant-tag stripping refuses to shorten moves into collisions") {
  // moves are [go], [other] and [go, rt]: rt sits at a uniform index but one
  // move already ends before it, so removal would conflate [go] and [go, rt]
  Game g = load_loose(std::string(kHeader) + R"(
begin, a: $ go;
begin, a2: $ other;
a2, p3: player = p;
a, p1: player = p;
a, b: $ rt;
b, p2: player = p;
)");
  CHECK_FALSE(run_pass(g, PassId::SkipRedundantTags));
}

TEST_CASE("compact reachability steps over unconditional ends of the pattern") {
  Game g = load_loose(std::string(kHeader) + R"(
type T = {0, 1};
var coordX: T = 0;
var coordY: T = 0;
a, b: ? x0 -> y0;
x0, x1: ;
x1, x2: coordX == coordY;
x2, y0: ;
)");
  REQUIRE(run_pass(g, PassId::CompactReachability));
  CHECK(has_edge(g, "a,b: ? x1 -> x2"));
  CHECK(has_edge(g, "x0,x1: "));  // the stepped-over edges stay in place
  CHECK(has_edge(g, "x2,y0: "));
  CHECK_FALSE(run_pass(g, PassId::CompactReachability));
}

TEST_CASE("a pattern that collapses onto itself folds the check away") {
  Game g = load_loose(std::string(kHeader) + R"(
begin, m: ? w -> w;
m, n: ! w -> w;
w, z: ;
)");
  REQUIRE(run_pass(g, PassId::CompactReachability));
  CHECK(has_edge(g, "begin,m: "));  // always true
  for (const Edge& e : g.edges) CHECK(g.text(e.from) != "m");  // never true: deleted
}

TEST_CASE("inline reachability splices an exclusive pattern in place") {
  Game g = load_loose(std::string(kHeader) + R"(
begin, end: ? a -> c;
a, b: 1 == 1;
b, c: 2 == 2;
)");
  REQUIRE(run_pass(g, PassId::InlineReachability));
  auto texts = edge_texts(g);
  REQUIRE(texts.size() == 3);
  CHECK(has_edge(g, "begin,a: "));
  CHECK(has_edge(g, "a,b: 1 == 1"));
  CHECK(has_edge(g, "b,end: 2 == 2"));
}

TEST_CASE("inline reachability refuses tagged or live-writing patterns") {
  Game tagged = load_loose(std::string(kHeader) + R"(
begin, end: ? a -> c;
a, b: $ t;
b, c: 2 == 2;
)");
  CHECK_FALSE(run_pass(tagged, PassId::InlineReachability));

  Game live = load_loose(std::string(kHeader) + R"(
type T = {u, v};
var x: T = u;
begin, q: ? a -> c;
q, end: x == v;
a, b: x = v;
b, c: 2 == 2;
)");
  CHECK_FALSE(run_pass(live, PassId::InlineReachability));
}

TEST_CASE("tags locked inside reachability patterns strip away") {
  Game g = load_loose(std::string(kHeader) + R"(
begin, end: ? t1 -> t3;
t1, t2: $ 1;
t2, t3: $ 2;
)");
  REQUIRE(run_pass(g, PassId::SkipUnusedTags));
  CHECK(has_edge(g, "t1,t2: "));
  CHECK(has_edge(g, "t2,t3: "));
  CHECK(has_edge(g, "begin,end: ? t1 -> t3"));
}

TEST_CASE("explicit casts wrap variable-rooted expressions") {
  Game g = load_loose(std::string(kHeader) + R"(
type T = {1};
var t: T = 1;
x1, y1: t == t;
)");
  REQUIRE(run_pass(g, PassId::AddExplicitCasts));
  CHECK(has_edge(g, "x1,y1: T(t) == T(t)"));
  CHECK_FALSE(run_pass(g, PassId::AddExplicitCasts));
}

TEST_CASE("normalize constants hoists nested maps") {
  Game g = load_loose(std::string(kHeader) + R"(
var X: Bool -> Bool -> Bool = {:{:0}};
begin, end: player = keeper;
)");
  REQUIRE(run_pass(g, PassId::NormalizeConstants));
  const VarDecl* x = g.find_var(g.names.find("X"));
  REQUIRE(x);
  REQUIRE(x->init.is_symbol());  // the whole literal now lives in a constant
  const ConstDecl* top = g.find_const(x->init.sym());
  REQUIRE(top);
  REQUIRE(top->value.is_map());
  CHECK(top->value.map_data().def.is_symbol());  // its nesting was hoisted too
  CHECK(g.find_const(top->value.map_data().def.sym()));
  CHECK_FALSE(run_pass(g, PassId::NormalizeConstants));
}

TEST_CASE("normalize types flattens inline arrows to alias references") {
  Game g = load_loose(std::string(kHeader) + R"(
type X = {x} -> {y};
)");
  REQUIRE(run_pass(g, PassId::NormalizeTypes));
  const AliasDecl* x = g.find_alias(g.names.find("X"));
  REQUIRE(x);
  REQUIRE(x->type.is_arrow());
  CHECK(x->type.source->is_alias());
  CHECK(x->type.dest->is_alias());
  CHECK(g.find_alias(x->type.source->alias));
  CHECK(g.find_alias(x->type.dest->alias));
  CHECK_FALSE(run_pass(g, PassId::NormalizeTypes));
}

TEST_CASE("any-assignment expansion: one edge per domain member") {
  Game g = load_loose(std::string(kHeader) + R"(
type Coord = {0, 1, 2};
var coordX: Coord = 0;
var coordY: Coord = 0;
a, b: coordX = Coord(*);
b, c: coordY = Coord(*);
)");
  REQUIRE(run_pass(g, PassId::ExpandAnyAssignment));
  auto texts = edge_texts(g);
  REQUIRE(texts.size() == 6);
  CHECK(texts[0] == "a,b: coordX = 0");
  CHECK(texts[1] == "a,b: coordX = 1");
  CHECK(texts[2] == "a,b: coordX = 2");
  CHECK(texts[3] == "b,c: coordY = 0");
  CHECK(texts[4] == "b,c: coordY = 1");
  CHECK(texts[5] == "b,c: coordY = 2");
}

TEST_CASE("variable-tag expansion: comparison plus tag through fresh nodes") {
  Game g = load_loose(std::string(kHeader) + R"(
type Coord = {0, 1, 2};
var coord: Coord = 0;
a, b: $$ coord;
)");
  size_t nodes_before = g.node_set().size();
  REQUIRE(run_pass(g, PassId::ExpandVariableTags));
  REQUIRE(g.edges.size() == 6);
  size_t fresh = g.node_set().size() - nodes_before;
  CHECK(fresh == 3);
  for (int i = 0; i < 3; ++i) {
    const Edge& cmp = g.edges[static_cast<size_t>(2 * i)];
    const Edge& tag = g.edges[static_cast<size_t>(2 * i + 1)];
    CHECK(render_action(g, cmp.action) ==
          "coord == Coord(" + std::to_string(i) + ")");
    CHECK(cmp.from == g.names.find("a"));
    CHECK(cmp.to == tag.from);  // the fresh middle node
    CHECK(tag.to == g.names.find("b"));
    CHECK(render_action(g, tag.action) == "$" + std::to_string(i));
  }
}

TEST_CASE("mangle symbols keeps the language contract names") {
  Game g = load_corpus("coinflip.rg");
  auto cg_before = compile(g);
  TraversalCache cache;
  size_t moves_before =
      legal_moves(cg_before, advance_keeper(cg_before, cg_before.initial_state(), cache), cache)
          .size();

  REQUIRE(run_pass(g, PassId::MangleSymbols));
  CHECK(count_errors(validate_static(g)) == 0);
  for (const char* name : {"Player", "Score", "Bool", "Goals", "PlayerOrSystem", "Visibility",
                           "player", "goals", "visible"})
    CHECK((g.find_alias(g.names.find(name)) || g.find_var(g.names.find(name))));
  auto nodes = g.node_set();
  auto node_named = [&](const char* n) {
    for (NameId id : nodes)
      if (g.text(id) == n) return true;
    return false;
  };
  CHECK(node_named("begin"));
  CHECK(node_named("end"));
  CHECK_FALSE(node_named("flip"));  // interior nodes are renamed
  CHECK_FALSE(g.find_const(g.names.find("goalsHeads")));  // renamed away

  auto cg_after = compile(g);
  size_t moves_after =
      legal_moves(cg_after, advance_keeper(cg_after, cg_after.initial_state(), cache), cache)
          .size();
  CHECK(moves_before == moves_after);  // tree shape survives renaming
}

TEST_CASE("every safe loop pass individually preserves tic-tac-toe to depth 3") {
  Game base = load_corpus("tictactoe.rg");
  auto baseline = perft_signature(base, 3);
  for (const PassInfo& info : pass_catalog()) {
    if (!info.safe || info.id == PassId::MangleSymbols) continue;
    CAPTURE(info.name);
    Game g = base;
    bool changed = run_pass(g, info.id);
    if (changed) CHECK(count_errors(validate_static(g)) == 0);
    auto after = perft_signature(g, 3);
    CHECK(after == baseline);
  }
}

TEST_CASE("changed=false means structurally identical") {
  Game g = load_corpus("hiddencoin.rg");
  for (const PassInfo& info : pass_catalog()) {
    CAPTURE(info.name);
    Game copy = g;
    bool changed = run_pass(copy, info.id);
    if (!changed) CHECK(game_equal(copy, g));
  }
}

TEST_CASE("the default pipeline reaches a fixed point and logs no unsafe pass") {
  Game g = load_corpus("tictactoe.rg");
  auto res = run_pipeline(g, PipelineConfig::defaults());
  CHECK(res.reached_fixed_point);
  for (const std::string& name : res.applied) {
    CHECK(name != "reorder_conditions");
    CHECK(name != "mangle_symbols");
  }
  // node and edge counts never grow inside the loop
  for (const PassStats& st : res.stats) {
    if (pass_info(st.pass).phase == PassPhase::Loop) {
      CHECK(st.nodes_after <= st.nodes_before);
      CHECK(st.edges_after <= st.edges_before);
    }
  }
  // the pipeline's own output is already fixed
  auto again = run_pipeline(res.game, PipelineConfig::defaults());
  CHECK(again.applied.empty());
  CHECK(game_equal(again.game, res.game));
}

TEST_CASE("snapshots reparse and revalidate cleanly") {
  Game g = load_corpus("tictactoe.rg");
  auto res = run_pipeline(g, PipelineConfig::defaults());
  REQUIRE_FALSE(res.snapshots.empty());
  for (const auto& snap : res.snapshots) {
    CAPTURE(snap.label);
    auto reparsed = parse_game(snap.text);
    REQUIRE(reparsed.ok());
    REQUIRE(count_errors(inject_implicit_definitions(reparsed.game)) == 0);
    CHECK(count_errors(validate_static(reparsed.game)) == 0);
  }
}

TEST_CASE("an empty pass list leaves the game untouched") {
  Game g = load_corpus("tictactoe.rg");
  PipelineConfig none;
  auto res = run_pipeline(g, none);
  CHECK(res.applied.empty());
  CHECK(res.iterations == 0);
  CHECK(game_equal(res.game, g));
}
