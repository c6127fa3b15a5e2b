// Command line front end: loads a problem file, runs one computation,
// and prints a deterministic JSON report. Exit codes: 0 success, 1
// validation failure, 2 obstruction or blocked trivialization, 3
// malformed input.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "defcomplex/io.hpp"
#include "defcomplex/threading.hpp"

using namespace defc;

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailed = 1;
constexpr int kObstructed = 2;
constexpr int kInputError = 3;

constexpr std::size_t kWarnCoords = 100000;
constexpr std::size_t kMaxCoords = 1000000;

struct Args {
    std::string command;
    std::string problem_path;
    std::string field;
    std::string output;
    unsigned threads = 1;
    std::string algebra, action, morphism, deformation, pair, from, to;
    std::size_t degree = 1;
    std::size_t max_order = 1;
    std::size_t probe_order = 1;
    std::size_t order = 0;  // 0 means "the deformation's own order"
};

void emit(const Args& a, const nlohmann::json& doc) {
    std::string text = doc.dump(2);
    text.push_back('\n');
    if (a.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(a.output, std::ios::binary);
    if (!out) throw ProblemError("cannot open output file '" + a.output + "'");
    out << text;
}

// The number of stored coordinates the computation will touch; the
// cap keeps desk-scale misuse from turning into a memory accident.
void cap_check(std::size_t coords) {
    if (coords > kMaxCoords)
        throw ProblemError("problem too large: " + std::to_string(coords) + " coordinates exceed the limit of " +
                           std::to_string(kMaxCoords));
    if (coords > kWarnCoords)
        std::cerr << "warning: large problem, " << std::to_string(coords) << " coordinates\n";
}

std::size_t checked_pow(std::size_t base, std::size_t exp) {
    try {
        return pow_sz(base, exp);
    } catch (const std::overflow_error&) {
        throw ProblemError("problem too large: coordinate count overflows");
    }
}

template <class K>
std::size_t morphism_coords(const MorphismPtr<K>& phi, std::size_t n) {
    std::size_t da = phi->source->dim(), db = phi->target->dim();
    return checked_pow(da, n) * da + checked_pow(db, n) * db + checked_pow(da, n - 1) * db;
}

template <class K>
DeformationTriple<K> verified_copy(const MorphismComplex<K>& C, const DeformationTriple<K>& d,
                                   VerifyReport<K>* out_rep = nullptr) {
    DeformationTriple<K> v = d;
    VerifyReport<K> rep = verify(C, v, v.order);
    v.verified_to = rep.invariance_failures.empty() ? rep.verified_prefix() : 0;
    if (out_rep) *out_rep = std::move(rep);
    return v;
}

template <class K>
int run_command(const Args& a, FieldCtx<K> F, const nlohmann::json& root, const std::string& bytes) {
    Problem<K> P = load_problem(root, F);
    nlohmann::json doc = report_envelope(a.command, F.describe(), bytes);

    if (a.command == "validate") {
        nlohmann::json names;
        auto collect = [](const auto& m) {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& [k, v] : m) arr.push_back(k);
            return arr;
        };
        names["algebras"] = collect(P.algebras);
        names["actions"] = collect(P.actions);
        names["morphisms"] = collect(P.morphisms);
        names["deformations"] = collect(P.deformations);
        names["pairs"] = collect(P.pairs);
        doc["status"] = "ok";
        doc["result"] = std::move(names);
        emit(a, doc);
        return kOk;
    }

    if (a.command == "cohomology") {
        AlgebraPtr<K> A = P.algebra(a.algebra);
        ActionPtr<K> G = a.action.empty() ? std::make_shared<GroupAction<K>>(trivial_action(A)) : P.action(a.action);
        std::size_t d = A->dim();
        cap_check(checked_pow(d, a.degree + 1) * d);
        BimodulePtr<K> reg = std::make_shared<BimoduleStructure<K>>(regular_bimodule(*A));
        CohomologyResult<K> h = equivariant_cohomology(A, reg, a.degree, *G, *G);
        doc["options"] = {{"algebra", a.algebra}, {"action", a.action.empty() ? "(trivial)" : a.action},
                          {"degree", a.degree}};
        doc["status"] = "ok";
        doc["result"] = cohomology_json(h);
        emit(a, doc);
        return kOk;
    }

    if (a.command == "morphism-cohomology" || a.command == "vanishing-check") {
        MorphismPtr<K> phi = P.morphism(a.morphism);
        std::size_t min_degree = a.command == "vanishing-check" ? 2 : 1;
        if (a.degree < min_degree)
            throw ProblemError(a.command + ": degree must be at least " + std::to_string(min_degree));
        cap_check(morphism_coords(phi, a.degree + 1));
        MorphismComplex<K> C(phi);
        doc["options"] = {{"morphism", a.morphism}, {"degree", a.degree}};
        doc["status"] = "ok";
        if (a.command == "morphism-cohomology") {
            doc["result"] = morphism_cohomology_json(C.cohomology(a.degree));
        } else {
            VanishingReport<K> rep = C.vanishing_check(a.degree);
            doc["result"] = {{"degree", rep.degree},
                             {"ingredient_dims", rep.ingredient_dims},
                             {"prediction_applicable", rep.prediction_applicable},
                             {"direct_dim", rep.direct_dim},
                             {"consistent", rep.consistent}};
        }
        emit(a, doc);
        return kOk;
    }

    // Everything below consumes a deformation or pair through the
    // morphism complex of its underlying morphism.
    if (a.command == "verify-deformation") {
        const DeformationTriple<K>& d0 = P.deformation(a.deformation);
        cap_check(morphism_coords(d0.phi, 3));
        MorphismComplex<K> C(d0.phi);
        std::size_t r_max = a.order == 0 ? d0.order : a.order;
        VerifyReport<K> rep = verify(C, d0, r_max);
        doc["options"] = {{"deformation", a.deformation}, {"order", r_max}};
        doc["status"] = rep.pass() ? "ok" : "validation_failed";
        doc["result"] = verify_report_json(rep);
        emit(a, doc);
        return rep.pass() ? kOk : kValidationFailed;
    }

    if (a.command == "obstruction" || a.command == "extend" || a.command == "build" || a.command == "trivialize") {
        const DeformationTriple<K>& d0 = P.deformation(a.deformation);
        cap_check(morphism_coords(d0.phi, 3));
        MorphismComplex<K> C(d0.phi);
        VerifyReport<K> vrep;
        DeformationTriple<K> d = verified_copy(C, d0, &vrep);
        doc["options"] = {{"deformation", a.deformation}};
        if (d.verified_to < d.order) {
            doc["status"] = "validation_failed";
            doc["result"] = {{"reason", "deformation does not verify through its order"},
                             {"verify", verify_report_json(vrep)}};
            emit(a, doc);
            return kValidationFailed;
        }

        if (a.command == "obstruction") {
            MorphismCochain<K> ob = obstruction(C, d);
            bool cocycle = C.d_apply(ob).is_zero();
            bool invariant = true;
            try {
                C.to_invariant_coords(ob);
            } catch (const std::invalid_argument&) {
                invariant = false;
            }
            doc["status"] = "ok";
            doc["result"] = {{"at_order", d.order + 1},
                             {"cochain", morphism_cochain_json(ob)},
                             {"is_zero", ob.is_zero()},
                             {"is_cocycle", cocycle},
                             {"invariant", invariant}};
            emit(a, doc);
            return kOk;
        }

        if (a.command == "extend") {
            ExtendOutcome<K> out = extend_one_order(C, d);
            if (std::holds_alternative<DeformationTriple<K>>(out)) {
                doc["status"] = "ok";
                doc["result"] = {{"deformation", deformation_json(std::get<DeformationTriple<K>>(out))}};
                emit(a, doc);
                return kOk;
            }
            doc["status"] = "obstructed";
            doc["result"] = {{"obstruction", obstruction_report_json(std::get<ObstructionReport<K>>(out))}};
            emit(a, doc);
            return kObstructed;
        }

        if (a.command == "build") {
            DeformationTriple<K> cur = d;
            while (cur.order < a.max_order) {
                ExtendOutcome<K> out = extend_one_order(C, cur);
                if (std::holds_alternative<ObstructionReport<K>>(out)) {
                    doc["status"] = "obstructed";
                    doc["result"] = {{"reached", cur.order},
                                     {"obstruction", obstruction_report_json(std::get<ObstructionReport<K>>(out))}};
                    emit(a, doc);
                    return kObstructed;
                }
                cur = std::get<DeformationTriple<K>>(std::move(out));
            }
            doc["status"] = "ok";
            doc["options"]["max_order"] = a.max_order;
            doc["result"] = {{"deformation", deformation_json(cur)}};
            emit(a, doc);
            return kOk;
        }

        // trivialize
        TrivializeResult<K> res = trivialize(C, d);
        if (res.trivialized) {
            doc["status"] = "ok";
            doc["result"] = {{"trivialized", true},
                             {"cleared_to", res.cleared_to},
                             {"pair", pair_json(*res.pair)},
                             {"final_form", deformation_json(res.final_form)}};
            emit(a, doc);
            return kOk;
        }
        const TrivializeOutcome<K>& step = *res.blocked_step;
        doc["status"] = "blocked";
        doc["result"] = {{"trivialized", false},
                         {"cleared_to", res.cleared_to},
                         {"final_form", deformation_json(res.final_form)},
                         {"nonzero_class", morphism_cochain_json(*step.nonzero_class)},
                         {"rank_d1", step.rank_d1},
                         {"rank_augmented", step.rank_augmented}};
        emit(a, doc);
        return kObstructed;
    }

    if (a.command == "equivalence") {
        const FormalIsomorphismPair<K>& p = P.pair(a.pair);
        const DeformationTriple<K>& from0 = P.deformation(a.from);
        const DeformationTriple<K>& to0 = P.deformation(a.to);
        cap_check(morphism_coords(p.phi, 3));
        MorphismComplex<K> C(p.phi);
        doc["options"] = {{"pair", a.pair}, {"from", a.from}, {"to", a.to}};
        DeformationTriple<K> from = verified_copy(C, from0);
        DeformationTriple<K> to = verified_copy(C, to0);
        for (const auto* d : {&from, &to}) {
            if (d->verified_to < d->order) {
                doc["status"] = "validation_failed";
                doc["result"] = {{"reason", std::string(d == &from ? a.from : a.to) +
                                                " does not verify through its order"}};
                emit(a, doc);
                return kValidationFailed;
            }
        }
        EquivalenceReport<K> rep = is_equivalence(C, p, from, to);
        doc["status"] = rep.equivalent ? "ok" : "validation_failed";
        doc["result"] = {{"equivalent", rep.equivalent},
                         {"checked_to", rep.checked_to},
                         {"pair_failures", rep.pair_failures},
                         {"mismatched_orders", rep.mismatched_orders}};
        emit(a, doc);
        return rep.equivalent ? kOk : kValidationFailed;
    }

    if (a.command == "rigidity") {
        MorphismPtr<K> phi = P.morphism(a.morphism);
        cap_check(morphism_coords(phi, 3));
        MorphismComplex<K> C(phi);
        RigidityReport<K> rep = rigidity_report(C, a.probe_order);
        doc["options"] = {{"morphism", a.morphism}, {"probe_order", a.probe_order}};
        doc["status"] = "ok";
        doc["result"] = {{"h2_dim", rep.h2_dim},
                         {"rigid_sufficient", rep.rigid_sufficient},
                         {"ingredient_route", rep.ingredient_route},
                         {"probe_order", rep.probe_order}};
        emit(a, doc);
        return kOk;
    }

    throw ProblemError("unknown command '" + a.command + "'");
}

}  // namespace

int main(int argc, char** argv) {
    Args args;
    CLI::App app{"exact equivariant deformation computations for finite-dimensional algebras"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--problem", args.problem_path, "problem JSON file")->required();
    app.add_option("--field", args.field, "scalar field: Q or F<p>; overrides the file");
    app.add_option("--output", args.output, "write the report here instead of stdout");
    app.add_option("--threads", args.threads, "worker threads for matrix assembly");

    auto* validate = app.add_subcommand("validate", "load and check every object in the problem");
    auto* coh = app.add_subcommand("cohomology", "equivariant Hochschild cohomology of an algebra");
    coh->add_option("--algebra", args.algebra, "algebra name")->required();
    coh->add_option("--action", args.action, "group action name; trivial when omitted");
    coh->add_option("--degree", args.degree, "cohomological degree")->required();
    auto* mcoh = app.add_subcommand("morphism-cohomology", "cohomology of the complex of a morphism");
    mcoh->add_option("--morphism", args.morphism, "morphism name")->required();
    mcoh->add_option("--degree", args.degree, "cohomological degree, at least 1")->required();
    auto* vanish = app.add_subcommand("vanishing-check", "compare ingredient cohomology with the direct computation");
    vanish->add_option("--morphism", args.morphism, "morphism name")->required();
    vanish->add_option("--degree", args.degree, "degree, at least 2")->required();
    auto* verify_cmd = app.add_subcommand("verify-deformation", "check the deformation equations order by order");
    verify_cmd->add_option("--deformation", args.deformation, "deformation name")->required();
    verify_cmd->add_option("--order", args.order, "check through this order; defaults to the stored order");
    auto* obs = app.add_subcommand("obstruction", "obstruction cochain at the next order");
    obs->add_option("--deformation", args.deformation, "deformation name")->required();
    auto* ext = app.add_subcommand("extend", "extend the deformation by one order if possible");
    ext->add_option("--deformation", args.deformation, "deformation name")->required();
    auto* build = app.add_subcommand("build", "extend repeatedly up to a target order");
    build->add_option("--deformation", args.deformation, "deformation name")->required();
    build->add_option("--max-order", args.max_order, "target order")->required();
    auto* equiv = app.add_subcommand("equivalence", "does the pair carry one deformation to the other");
    equiv->add_option("--pair", args.pair, "formal isomorphism pair name")->required();
    equiv->add_option("--from", args.from, "deformation carried by the pair")->required();
    equiv->add_option("--to", args.to, "expected image deformation")->required();
    auto* triv = app.add_subcommand("trivialize", "peel the deformation down to nothing or a blocking class");
    triv->add_option("--deformation", args.deformation, "deformation name")->required();
    auto* rigid = app.add_subcommand("rigidity", "second cohomology test for rigidity of a morphism");
    rigid->add_option("--morphism", args.morphism, "morphism name")->required();
    rigid->add_option("--probe-order", args.probe_order, "echoed in the report");

    CLI11_PARSE(app, argc, argv);
    for (auto* sub : {validate, coh, mcoh, vanish, verify_cmd, obs, ext, build, equiv, triv, rigid})
        if (sub->parsed()) args.command = sub->get_name();

    try {
        std::ifstream in(args.problem_path, std::ios::binary);
        if (!in) throw ProblemError("cannot read problem file '" + args.problem_path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        std::string bytes = ss.str();
        nlohmann::json root;
        try {
            root = nlohmann::json::parse(bytes);
        } catch (const nlohmann::json::parse_error& e) {
            throw ProblemError(std::string("problem: ") + e.what());
        }
        set_thread_count(args.threads == 0 ? 1 : args.threads);
        FieldChoice fc = field_choice(root, args.field);
        if (fc.rational) return run_command<Rat>(args, FieldCtx<Rat>{}, root, bytes);
        FieldCtx<Zp> F;
        try {
            F = FieldCtx<Zp>(fc.p);
        } catch (const std::invalid_argument& e) {
            throw ProblemError(e.what());
        }
        return run_command<Zp>(args, F, root, bytes);
    } catch (const ProblemError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const MathError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidationFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
}
