#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "plahx/pddl.hpp"
#include "plahx/rng.hpp"
#include "test_support.hpp"

using namespace plahx;

TEST_CASE("blocks domain parses with 4 schemas and 5 predicates") {
  Domain domain = parse_domain(testing::blocks_domain_text());
  CHECK(domain.name == "blocks");
  CHECK(domain.schemas.size() == 4);
  CHECK(domain.predicates.size() == 5);
  CHECK(domain.type_parents.at("block") == "object");
}

TEST_CASE("minimal domain: nullary predicate, parameterless schema") {
  Domain domain = parse_domain(R"((define (domain tiny)
    (:requirements :strips)
    (:predicates (lit))
    (:action flip :parameters () :effect (lit))))");
  CHECK(domain.schemas.size() == 1);
  CHECK(domain.schemas[0].params.empty());
  CHECK(domain.predicates[0].arity() == 0);
  CHECK(domain.schemas[0].preconditions.empty());
}

TEST_CASE("negative preconditions are rejected as unsupported") {
  std::string text = R"((define (domain neg)
    (:predicates (clear ?x))
    (:action a :parameters (?x)
      :precondition (not (clear ?x))
      :effect (clear ?x))))";
  try {
    parse_domain(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::Unsupported);
    CHECK(e.token() == "not");
    CHECK(e.line() == 4);
  }
}

TEST_CASE("unsupported constructs name the offending token and line") {
  auto expect = [](const std::string& text, ParseError::Kind kind,
                   const std::string& token) {
    try {
      parse_domain(text);
      FAIL("expected ParseError for token " << token);
    } catch (const ParseError& e) {
      CHECK(e.kind() == kind);
      CHECK(e.token() == token);
      CHECK(e.line() >= 1);
    }
  };
  expect("(define (domain d) (:functions (cost)))",
         ParseError::Kind::Unsupported, ":functions");
  expect("(define (domain d) (:requirements :adl))",
         ParseError::Kind::Unsupported, ":adl");
  expect(R"((define (domain d) (:predicates (p ?x))
            (:action a :parameters (?x)
              :precondition (forall (?y) (p ?y)) :effect (p ?x))))",
         ParseError::Kind::Unsupported, "forall");
  expect(R"((define (domain d) (:predicates (p ?x))
            (:action a :parameters (?x)
              :effect (when (p ?x) (p ?x)))))",
         ParseError::Kind::Unsupported, "when");
}

TEST_CASE("malformed s-expressions are syntax errors") {
  CHECK_THROWS_AS(parse_domain("(define (domain d)"), ParseError);
  CHECK_THROWS_AS(parse_domain("(define (domain d)))"), ParseError);
  try {
    parse_domain("(define (domain d))\n(stray)");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::Syntax);
    CHECK(e.line() == 2);
  }
}

TEST_CASE("effects adding and deleting the same atom are rejected") {
  std::string text = R"((define (domain d)
    (:predicates (p ?x))
    (:action a :parameters (?x)
      :effect (and (p ?x) (not (p ?x))))))";
  try {
    parse_domain(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::Semantic);
  }
}

TEST_CASE("identifiers are case-normalized to lower case") {
  Domain domain = parse_domain(R"((define (domain Mixed)
    (:predicates (On ?X ?Y))
    (:action Move :parameters (?X ?Y) :precondition (ON ?x ?y)
             :effect (not (On ?X ?y)))))");
  CHECK(domain.name == "mixed");
  CHECK(domain.predicates[0].name == "on");
  CHECK(domain.schemas[0].name == "move");
  CHECK(domain.schemas[0].preconditions[0].pred == "on");
}

TEST_CASE("two-block problem parses against the blocks domain") {
  Domain domain = parse_domain(testing::blocks_domain_text());
  Problem problem = parse_problem(testing::two_block_problem_text(), domain);
  CHECK(problem.objects.size() == 2);
  CHECK(problem.init.size() == 5);
  CHECK(problem.goal.size() == 1);
  CHECK(problem.goal[0] == Atom{"on", {"b1", "b2"}});
}

TEST_CASE("empty goal is a semantic error") {
  Domain domain = parse_domain(testing::blocks_domain_text());
  std::string text = R"((define (problem p) (:domain blocks)
    (:objects b1 - block) (:init (ontable b1)) (:goal (and))))";
  try {
    parse_problem(text, domain);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::Semantic);
  }
}

TEST_CASE("arity mismatch in init is a semantic error") {
  Domain domain = parse_domain(testing::blocks_domain_text());
  std::string text = R"((define (problem p) (:domain blocks)
    (:objects b1 b2 - block) (:init (on b1)) (:goal (clear b1))))";
  try {
    parse_problem(text, domain);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::Semantic);
    CHECK(e.token() == "on");
  }
}

TEST_CASE("unknown objects, predicates, and types are semantic errors") {
  Domain domain = parse_domain(testing::blocks_domain_text());
  CHECK_THROWS_AS(parse_problem(R"((define (problem p) (:domain blocks)
    (:objects b1 - block) (:init (ontable b9)) (:goal (clear b1))))",
                                domain),
                  ParseError);
  CHECK_THROWS_AS(parse_problem(R"((define (problem p) (:domain blocks)
    (:objects b1 - block) (:init (green b1)) (:goal (clear b1))))",
                                domain),
                  ParseError);
  CHECK_THROWS_AS(parse_problem(R"((define (problem p) (:domain blocks)
    (:objects b1 - cube) (:init) (:goal (clear b1))))",
                                domain),
                  ParseError);
}

TEST_CASE("duplicate init atoms deduplicate silently") {
  Domain domain = parse_domain(testing::blocks_domain_text());
  Problem problem = parse_problem(R"((define (problem p) (:domain blocks)
    (:objects b1 - block)
    (:init (ontable b1) (ontable b1) (clear b1) (handempty))
    (:goal (ontable b1))))",
                                  domain);
  CHECK(problem.init.size() == 3);
}

TEST_CASE("untyped parameters default to object") {
  Domain domain = parse_domain(R"((define (domain plain)
    (:predicates (p ?x))
    (:action a :parameters (?x) :precondition (p ?x) :effect (not (p ?x)))))");
  CHECK(domain.schemas[0].params[0].type == "object");
  CHECK(domain.predicates[0].param_types[0] == "object");
}

TEST_CASE("domain constants fold into problem objects") {
  Domain domain = parse_domain(R"((define (domain withc)
    (:types spot)
    (:constants home - spot)
    (:predicates (at ?s - spot))
    (:action visit :parameters (?s - spot)
      :precondition (at home) :effect (at ?s))))");
  CHECK(domain.constants.size() == 1);
  Problem problem = parse_problem(R"((define (problem p) (:domain withc)
    (:objects away - spot) (:init (at home)) (:goal (at away))))",
                                  domain);
  CHECK(problem.objects.size() == 2);
  CHECK(problem.objects[0].name == "home");
}

TEST_CASE("round-trip: blocks domain") {
  Domain domain = parse_domain(testing::blocks_domain_text());
  Domain again = parse_domain(serialize(domain));
  CHECK(domain == again);
  CHECK(serialize(domain) == serialize(again));
}

TEST_CASE("round-trip: two-block problem") {
  Domain domain = parse_domain(testing::blocks_domain_text());
  Problem problem = parse_problem(testing::two_block_problem_text(), domain);
  Problem again = parse_problem(serialize(problem), domain);
  CHECK(problem == again);
}

TEST_CASE("round-trip: problem with zero objects") {
  Domain domain = parse_domain(R"((define (domain z)
    (:predicates (done))
    (:action finish :parameters () :effect (done))))");
  Problem problem = parse_problem(R"((define (problem p) (:domain z)
    (:objects) (:init) (:goal (done))))",
                                  domain);
  CHECK(problem.objects.empty());
  std::string text = serialize(problem);
  CHECK(text.find("(:objects )") != std::string::npos);
  CHECK(parse_problem(text, domain) == problem);
}

TEST_CASE("round-trip: every generator domain") {
  for (DomainKind kind : {DomainKind::Blocks, DomainKind::Hanoi,
                          DomainKind::Grippers, DomainKind::Rearrangement}) {
    Domain domain = parse_domain(domain_text(kind));
    CHECK(parse_domain(serialize(domain)) == domain);
  }
}

// Type soundness property: random valid problems parse; random single-fault
// mutations (bad arity, unknown object, unknown predicate, wrong type) are
// rejected.
TEST_CASE("type soundness over random problems and mutations") {
  Domain domain = parse_domain(std::string(domain_text(DomainKind::Grippers)));
  Rng rng(20240817);

  auto random_problem_text = [&](bool corrupt) {
    std::vector<std::string> rooms = {"room1", "room2", "room3"};
    std::string text = "(define (problem p) (:domain grippers)\n"
                       "(:objects room1 room2 room3 - room gleft - gripper "
                       "key1 - key box1 - box)\n(:init (at-robby room1)";
    for (int i = 0; i < 4; ++i) {
      switch (rng.index(3)) {
        case 0:
          text += " (at key1 " + rooms[rng.index(3)] + ")";
          break;
        case 1:
          text += " (connected " + rooms[rng.index(3)] + " " +
                  rooms[rng.index(3)] + ")";
          break;
        default:
          text += " (free gleft)";
      }
    }
    if (corrupt) {
      switch (rng.index(4)) {
        case 0: text += " (at key1)"; break;               // arity
        case 1: text += " (at key1 room9)"; break;         // unknown object
        case 2: text += " (teleport room1 room2)"; break;  // unknown predicate
        default: text += " (at-robby key1)"; break;        // type mismatch
      }
    }
    text += ")\n(:goal (at box1 room1)))";
    return text;
  };

  int accepted = 0, rejected = 0;
  for (int round = 0; round < 120; ++round) {
    bool corrupt = round % 2 == 1;
    std::string text = random_problem_text(corrupt);
    if (!corrupt) {
      Problem problem = parse_problem(text, domain);
      for (const Atom& atom : problem.init) {
        const Predicate* pred = domain.find_predicate(atom.pred);
        REQUIRE(pred != nullptr);
        REQUIRE(static_cast<int>(atom.args.size()) == pred->arity());
      }
      ++accepted;
    } else {
      CHECK_THROWS_AS(parse_problem(text, domain), ParseError);
      ++rejected;
    }
  }
  CHECK(accepted == 60);
  CHECK(rejected == 60);
}
