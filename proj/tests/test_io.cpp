#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "defcomplex/io.hpp"
#include "fixtures.hpp"

using namespace defc;
using namespace fixtures;
using nlohmann::json;

namespace {
const FieldCtx<Rat> Q;

// A complete well-formed problem used by most cases below.
json base_problem() {
    return json::parse(R"({
      "field": "Q",
      "algebras": {
        "dual": {"basis": ["e", "x"], "structure": [[0,0,0,1],[0,1,1,1],[1,0,1,1]]}
      },
      "actions": {
        "triv": {"algebra": "dual", "generators": []},
        "sign": {"algebra": "dual", "generators": [[[1,0],[0,-1]]]},
        "sign_explicit": {
          "algebra": "dual",
          "elements": [[[1,0],[0,1]],[[1,0],[0,-1]]],
          "identity_index": 0,
          "mult_table": [[0,1],[1,0]]
        }
      },
      "morphisms": {
        "id": {"source": "dual", "target": "dual",
               "source_action": "triv", "target_action": "triv",
               "matrix": [[1,0],[0,1]]}
      },
      "deformations": {
        "sqrt": {"morphism": "id", "order": 1,
                 "mu": [{"degree": 2, "entries": [[[1,1],0,1]]}],
                 "nu": [{"degree": 2, "entries": [[[1,1],0,1]]}],
                 "phi_higher": [[[0,0],[0,0]]]}
      },
      "pairs": {
        "shear": {"morphism": "id", "order": 1,
                  "psi": [[[0,0],[1,0]]], "theta": [[[0,0],[0,0]]]}
      }
    })");
}
}  // namespace

TEST_CASE("the content hash matches the published fnv1a test vectors") {
    CHECK(fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a64_hex("abc") == "e71fa2190541574b");
}

TEST_CASE("scalars load from integers and exact strings") {
    CHECK(scalar_from_json(Q, json(5), "t") == Rat(5));
    CHECK(scalar_from_json(Q, json(-3), "t") == Rat(-3));
    CHECK(scalar_from_json(Q, json("3/4"), "t") == Rat(3) / Rat(4));
    CHECK_THROWS_AS(scalar_from_json(Q, json(1.5), "t"), ProblemError);
    CHECK_THROWS_AS(scalar_from_json(Q, json("x+1"), "t"), ProblemError);
    CHECK_THROWS_AS(scalar_from_json(Q, json::array(), "t"), ProblemError);

    FieldCtx<Zp> F5(5);
    CHECK(scalar_from_json(F5, json(7), "t") == F5.from_int(2));
    CHECK(scalar_from_json(F5, json("-1"), "t") == F5.from_int(4));
    CHECK_THROWS_AS(scalar_from_json(F5, json("1/2"), "t"), ProblemError);
}

TEST_CASE("matrices round trip through their JSON form") {
    Matrix<Rat> m(Q, 2, 3);
    m.at(0, 1) = Rat(5);
    m.at(1, 2) = Rat(-1) / Rat(2);
    json j = matrix_json(m);
    CHECK(matrix_from_json(Q, j, 2, 3, "t") == m);
    CHECK_THROWS_AS(matrix_from_json(Q, j, 3, 2, "t"), ProblemError);
    CHECK_THROWS_AS(matrix_from_json(Q, json::array(), 2, 3, "t"), ProblemError);
}

TEST_CASE("cochains round trip and reject malformed entries") {
    auto A = dual_algebra(Q);
    BimodulePtr<Rat> reg = std::make_shared<BimoduleStructure<Rat>>(regular_bimodule(*A));
    Cochain<Rat> c = zero_cochain(A, reg, 2);
    c.at(3, 0) = Rat(2);      // tuple (1,1), module e
    c.at(1, 1) = Rat(-1);     // tuple (0,1), module x
    json j = cochain_json(c);
    Cochain<Rat> back = cochain_from_json(j, A, reg, 2, "t");
    CHECK(back == c);

    CHECK_THROWS_AS(cochain_from_json(j, A, reg, 3, "t"), ProblemError);

    json bad = json{{"degree", 2}, {"entries", json::array({json::array({json::array({1}), 0, 1})})}};
    CHECK_THROWS_AS(cochain_from_json(bad, A, reg, 2, "t"), ProblemError);  // short tuple

    bad = json{{"degree", 2}, {"entries", json::array({json::array({json::array({1, 2}), 0, 1})})}};
    CHECK_THROWS_AS(cochain_from_json(bad, A, reg, 2, "t"), ProblemError);  // index out of range

    bad = json{{"degree", 2}, {"entries", json::array({json::array({json::array({1, 1}), 2, 1})})}};
    CHECK_THROWS_AS(cochain_from_json(bad, A, reg, 2, "t"), ProblemError);  // module out of range

    bad = json{{"degree", 2},
               {"entries", json::array({json::array({json::array({1, 1}), 0, 1}),
                                        json::array({json::array({1, 1}), 0, 2})})}};
    CHECK_THROWS_AS(cochain_from_json(bad, A, reg, 2, "t"), ProblemError);  // duplicate coordinate
}

TEST_CASE("a full problem loads with every cross reference resolved") {
    Problem<Rat> P = load_problem(base_problem(), Q);
    CHECK(P.algebra("dual")->dim() == 2);
    CHECK(P.action("sign")->order() == 2);
    CHECK(P.action("sign_explicit")->order() == 2);
    CHECK(P.action("triv")->order() == 1);
    CHECK(P.morphism("id")->matrix == Matrix<Rat>::identity(Q, 2));

    const DeformationTriple<Rat>& d = P.deformation("sqrt");
    CHECK(d.order == 1);
    CHECK(d.verified_to == 0);  // loading never runs the order checks
    CHECK(d.mu[0].at(3, 0) == Q.one());
    CHECK(d.phi->source == P.algebra("dual"));

    const FormalIsomorphismPair<Rat>& p = P.pair("shear");
    CHECK(p.order == 1);
    CHECK(p.psi[0].at(1, 0) == Q.one());

    CHECK_THROWS_AS(P.algebra("nope"), ProblemError);
    CHECK_THROWS_AS(P.deformation("nope"), ProblemError);
    CHECK_THROWS_AS(P.pair("nope"), ProblemError);
}

TEST_CASE("loaded deformations verify and run through the calculus") {
    Problem<Rat> P = load_problem(base_problem(), Q);
    const DeformationTriple<Rat>& d = P.deformation("sqrt");
    MorphismComplex<Rat> C(d.phi);
    VerifyReport<Rat> rep = verify(C, d, 2);
    CHECK(rep.pass());
    CHECK(obstruction(C, make_deformation(C, d.mu, d.nu, d.phi_higher)).is_zero());
}

TEST_CASE("schema violations come back as input errors with context") {
    auto expect_problem = [](json j, const char* needle) {
        try {
            load_problem(j, FieldCtx<Rat>{});
            FAIL_CHECK("expected a ProblemError mentioning " << needle);
        } catch (const ProblemError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    expect_problem(json::array(), "top level");
    expect_problem(json{{"bogus", 1}}, "unknown top-level key");
    expect_problem(json{{"algebras", {{"a", {{"structure", json::array()}}}}}}, "missing key 'basis'");
    expect_problem(json{{"algebras", {{"a", {{"basis", json::array()}, {"structure", json::array()}}}}}},
                   "must not be empty");

    json dup = base_problem();
    dup["algebras"]["dual"]["structure"].push_back({0, 0, 0, 1});
    expect_problem(dup, "duplicate structure entry");

    json badref = base_problem();
    badref["actions"]["triv"]["algebra"] = "missing";
    expect_problem(badref, "unknown algebra");

    json shortd = base_problem();
    shortd["deformations"]["sqrt"]["order"] = 2;
    expect_problem(shortd, "length 2");

    json badidx = base_problem();
    badidx["actions"]["sign_explicit"]["identity_index"] = 9;
    expect_problem(badidx, "identity_index out of range");

    // Type confusion inside the JSON library surfaces the same way.
    json badtype = base_problem();
    badtype["morphisms"]["id"]["source"] = 3;
    CHECK_THROWS_AS(load_problem(badtype, Q), ProblemError);
}

TEST_CASE("mathematical defects come back as validation errors") {
    json bad = json{{"algebras",
                     {{"bad", {{"basis", {"a", "b"}}, {"structure", {{0, 0, 1, 1}, {0, 1, 0, 1}}}}}}}};
    CHECK_THROWS_AS(load_problem(bad, Q), MathError);

    json sing = base_problem();
    sing["actions"]["triv"]["generators"].push_back({{1, 0}, {0, 0}});
    CHECK_THROWS_AS(load_problem(sing, Q), MathError);

    json notmult = base_problem();
    notmult["morphisms"]["id"]["matrix"] = {{1, 1}, {0, 0}};
    CHECK_THROWS_AS(load_problem(notmult, Q), MathError);

    json table = base_problem();
    table["actions"]["sign_explicit"]["mult_table"] = {{0, 1}, {1, 1}};
    CHECK_THROWS_AS(load_problem(table, Q), MathError);
}

TEST_CASE("the field choice prefers the override, then the file, then Q") {
    json root = base_problem();
    CHECK(field_choice(root, "").rational);
    CHECK(field_choice(json::object(), "").rational);

    root["field"] = "F7";
    FieldChoice c = field_choice(root, "");
    CHECK_FALSE(c.rational);
    CHECK(c.p == 7);

    root["field"] = json{{"p", 11}};
    c = field_choice(root, "");
    CHECK_FALSE(c.rational);
    CHECK(c.p == 11);

    c = field_choice(root, "Q");
    CHECK(c.rational);
    c = field_choice(root, "13");
    CHECK(c.p == 13);
    c = field_choice(root, "f3");
    CHECK(c.p == 3);

    CHECK_THROWS_AS(parse_field_name("F"), ProblemError);
    CHECK_THROWS_AS(parse_field_name("Fx"), ProblemError);
    CHECK_THROWS_AS(parse_field_name("99999999999999999999999"), ProblemError);
    root["field"] = true;
    CHECK_THROWS_AS(field_choice(root, ""), ProblemError);
}

TEST_CASE("deformations and pairs survive a serialization round trip") {
    Problem<Rat> P = load_problem(base_problem(), Q);
    const DeformationTriple<Rat>& d = P.deformation("sqrt");
    MorphismComplex<Rat> C(d.phi);
    DeformationTriple<Rat> v = make_deformation(C, d.mu, d.nu, d.phi_higher);
    CHECK(v.verified_to == 1);

    json root = base_problem();
    root["deformations"]["again"] = deformation_json(v);
    // verified_to in the output is informational; the loader ignores it
    // and every freshly loaded deformation starts unverified.
    root["deformations"]["again"]["morphism"] = "id";
    Problem<Rat> P2 = load_problem(root, Q);
    const DeformationTriple<Rat>& back = P2.deformation("again");
    CHECK(back.mu == d.mu);
    CHECK(back.nu == d.nu);
    CHECK(back.phi_higher == d.phi_higher);
    CHECK(back.verified_to == 0);

    json pj = pair_json(P.pair("shear"));
    pj["morphism"] = "id";
    root["pairs"]["again"] = pj;
    Problem<Rat> P3 = load_problem(root, Q);
    CHECK(P3.pair("again").psi == P.pair("shear").psi);
    CHECK(P3.pair("again").theta == P.pair("shear").theta);
}

TEST_CASE("the report envelope is stable and content addressed") {
    json env = report_envelope("cohomology", "Q", "abc");
    CHECK(env["format"] == "defcomplex/1");
    CHECK(env["command"] == "cohomology");
    CHECK(env["field"] == "Q");
    CHECK(env["problem_hash"] == "fnv1a64:e71fa2190541574b");
    CHECK(env.size() == 4);  // no timestamps, no paths
}
