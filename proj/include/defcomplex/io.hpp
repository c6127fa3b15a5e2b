#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "equivalence.hpp"

namespace defc {

// Malformed input: unreadable JSON, missing keys, bad shapes, unknown
// names, invalid field moduli. Mapped to the input-error exit code.
struct ProblemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Well-formed input that fails its mathematics: a non-associative
// table, a broken action, a map that is not a morphism. Mapped to the
// validation-failure exit code.
struct MathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

namespace jsdetail {

inline const nlohmann::json& need(const nlohmann::json& j, const std::string& key, const std::string& where) {
    if (!j.is_object()) throw ProblemError(where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ProblemError(where + ": missing key '" + key + "'");
    return *it;
}

// Nonnegative integer regardless of whether the JSON value is stored
// signed or unsigned; the parser and programmatic construction differ.
inline std::optional<std::size_t> as_index(const nlohmann::json& j) {
    if (j.is_number_unsigned()) return j.get<std::size_t>();
    if (j.is_number_integer()) {
        long long v = j.get<long long>();
        if (v >= 0) return static_cast<std::size_t>(v);
    }
    return std::nullopt;
}

inline std::size_t need_size(const nlohmann::json& j, const std::string& key, const std::string& where) {
    std::optional<std::size_t> v = as_index(need(j, key, where));
    if (!v) throw ProblemError(where + "." + key + ": expected a non-negative integer");
    return *v;
}

inline const nlohmann::json& need_array(const nlohmann::json& j, const std::string& key, const std::string& where) {
    const nlohmann::json& v = need(j, key, where);
    if (!v.is_array()) throw ProblemError(where + "." + key + ": expected an array");
    return v;
}

}  // namespace jsdetail

// Scalars arrive either as JSON integers or as exact literals in
// strings; everything is parsed through the field context.
template <class K>
K scalar_from_json(const FieldCtx<K>& F, const nlohmann::json& j, const std::string& where) {
    try {
        if (j.is_number_integer()) return F.from_int(j.get<long long>());
        if (j.is_string()) return F.parse(j.get<std::string>());
    } catch (const std::exception& e) {
        throw ProblemError(where + ": " + e.what());
    }
    throw ProblemError(where + ": expected an integer or a scalar string");
}

template <class K>
Matrix<K> matrix_from_json(const FieldCtx<K>& F, const nlohmann::json& j, std::size_t rows, std::size_t cols,
                           const std::string& where) {
    if (!j.is_array() || j.size() != rows)
        throw ProblemError(where + ": expected " + std::to_string(rows) + " rows");
    Matrix<K> m(F, rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const nlohmann::json& row = j[r];
        if (!row.is_array() || row.size() != cols)
            throw ProblemError(where + ": row " + std::to_string(r) + " must have " + std::to_string(cols) +
                               " entries");
        for (std::size_t c = 0; c < cols; ++c)
            m.at(r, c) = scalar_from_json(F, row[c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
    return m;
}

template <class K>
nlohmann::json matrix_json(const Matrix<K>& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

// Sparse cochain form: {"degree": n, "entries": [[[i1..in], m, scalar]...]}
// with one entry per nonzero coordinate.
template <class K>
Cochain<K> cochain_from_json(const nlohmann::json& j, AlgebraPtr<K> A, BimodulePtr<K> M,
                             std::size_t expect_degree, const std::string& where) {
    std::size_t deg = jsdetail::need_size(j, "degree", where);
    if (deg != expect_degree)
        throw ProblemError(where + ": degree " + std::to_string(deg) + " where " + std::to_string(expect_degree) +
                           " is required");
    Cochain<K> c = zero_cochain(A, M, deg);
    std::size_t d = A->dim();
    const nlohmann::json& entries = jsdetail::need_array(j, "entries", where);
    for (std::size_t e = 0; e < entries.size(); ++e) {
        std::string ew = where + ".entries[" + std::to_string(e) + "]";
        const nlohmann::json& ent = entries[e];
        if (!ent.is_array() || ent.size() != 3) throw ProblemError(ew + ": expected [tuple, module, scalar]");
        const nlohmann::json& tup = ent[0];
        if (!tup.is_array() || tup.size() != deg)
            throw ProblemError(ew + ": tuple must have " + std::to_string(deg) + " indices");
        std::vector<std::size_t> T(deg);
        for (std::size_t k = 0; k < deg; ++k) {
            std::optional<std::size_t> idx = jsdetail::as_index(tup[k]);
            if (!idx || *idx >= d) throw ProblemError(ew + ": tuple index out of range");
            T[k] = *idx;
        }
        std::optional<std::size_t> mi = jsdetail::as_index(ent[1]);
        if (!mi || *mi >= M->mod_dim) throw ProblemError(ew + ": module index out of range");
        std::size_t m = *mi;
        std::size_t t = tuple_index(T.data(), deg, d);
        if (!c.at(t, m).is_zero()) throw ProblemError(ew + ": duplicate coordinate");
        c.at(t, m) = scalar_from_json(A->field, ent[2], ew);
    }
    return c;
}

template <class K>
nlohmann::json cochain_json(const Cochain<K>& c) {
    nlohmann::json entries = nlohmann::json::array();
    std::vector<std::size_t> T(c.degree);
    for (std::size_t t = 0; t < c.tuples(); ++t)
        for (std::size_t m = 0; m < c.mod_dim(); ++m) {
            if (c.at(t, m).is_zero()) continue;
            tuple_decode(t, c.degree, c.arg_dim(), T.data());
            nlohmann::json tup = nlohmann::json::array();
            for (std::size_t k = 0; k < c.degree; ++k) tup.push_back(T[k]);
            entries.push_back(nlohmann::json::array({tup, m, c.at(t, m).str()}));
        }
    return nlohmann::json{{"degree", c.degree}, {"entries", std::move(entries)}};
}

template <class K>
nlohmann::json morphism_cochain_json(const MorphismCochain<K>& c) {
    return nlohmann::json{{"degree", c.degree},
                          {"u", cochain_json(c.u)},
                          {"v", cochain_json(c.v)},
                          {"w", cochain_json(c.w)}};
}

template <class K>
struct Problem {
    FieldCtx<K> field;
    std::map<std::string, AlgebraPtr<K>> algebras;
    std::map<std::string, ActionPtr<K>> actions;
    std::map<std::string, MorphismPtr<K>> morphisms;
    std::map<std::string, DeformationTriple<K>> deformations;  // loaded unverified
    std::map<std::string, FormalIsomorphismPair<K>> pairs;

    template <class T>
    static const T& find(const std::map<std::string, T>& m, const std::string& name, const std::string& kind) {
        auto it = m.find(name);
        if (it == m.end()) throw ProblemError("unknown " + kind + " '" + name + "'");
        return it->second;
    }

    AlgebraPtr<K> algebra(const std::string& n) const { return find(algebras, n, "algebra"); }
    ActionPtr<K> action(const std::string& n) const { return find(actions, n, "action"); }
    MorphismPtr<K> morphism(const std::string& n) const { return find(morphisms, n, "morphism"); }
    const DeformationTriple<K>& deformation(const std::string& n) const {
        return find(deformations, n, "deformation");
    }
    const FormalIsomorphismPair<K>& pair(const std::string& n) const { return find(pairs, n, "pair"); }
};

namespace jsdetail {

template <class K>
AlgebraPtr<K> algebra_from_json(const FieldCtx<K>& F, const nlohmann::json& j, const std::string& where) {
    const nlohmann::json& basis = need_array(j, "basis", where);
    std::vector<std::string> names;
    for (const auto& b : basis) {
        if (!b.is_string()) throw ProblemError(where + ".basis: names must be strings");
        names.push_back(b.get<std::string>());
    }
    if (names.empty()) throw ProblemError(where + ".basis: must not be empty");
    auto A = std::make_shared<Algebra<K>>(F, names);
    std::size_t d = names.size();
    const nlohmann::json& st = need_array(j, "structure", where);
    for (std::size_t e = 0; e < st.size(); ++e) {
        std::string ew = where + ".structure[" + std::to_string(e) + "]";
        const nlohmann::json& ent = st[e];
        if (!ent.is_array() || ent.size() != 4) throw ProblemError(ew + ": expected [i, j, k, scalar]");
        std::size_t idx[3];
        for (int k = 0; k < 3; ++k) {
            std::optional<std::size_t> v = as_index(ent[k]);
            if (!v || *v >= d) throw ProblemError(ew + ": basis index out of range");
            idx[k] = *v;
        }
        if (!A->sc(idx[0], idx[1], idx[2]).is_zero()) throw ProblemError(ew + ": duplicate structure entry");
        A->sc(idx[0], idx[1], idx[2]) = scalar_from_json(F, ent[3], ew);
    }
    AssocReport rep = check_associativity(*A);
    if (!rep.pass()) {
        const auto& v = rep.violations.front();
        throw MathError(where + ": not associative, first failure at basis triple (" + std::to_string(v[0]) + ", " +
                        std::to_string(v[1]) + ", " + std::to_string(v[2]) + ") coordinate " + std::to_string(v[3]));
    }
    return A;
}

template <class K>
ActionPtr<K> action_from_json(const Problem<K>& P, const nlohmann::json& j, const std::string& where) {
    std::string alg = need(j, "algebra", where).template get<std::string>();
    AlgebraPtr<K> A = P.algebra(alg);
    std::size_t d = A->dim();
    GroupAction<K> ga;
    if (j.contains("generators")) {
        const nlohmann::json& gens = need_array(j, "generators", where);
        std::vector<Matrix<K>> mats;
        for (std::size_t g = 0; g < gens.size(); ++g)
            mats.push_back(matrix_from_json(A->field, gens[g], d, d, where + ".generators[" + std::to_string(g) + "]"));
        std::size_t cap = j.contains("cap") ? need_size(j, "cap", where) : 1024;
        try {
            ga = close_group(A, mats, cap);
        } catch (const std::domain_error& e) {
            throw MathError(where + ": " + e.what());
        } catch (const std::length_error& e) {
            throw MathError(where + ": " + e.what());
        }
    } else if (j.contains("elements")) {
        const nlohmann::json& els = need_array(j, "elements", where);
        for (std::size_t g = 0; g < els.size(); ++g)
            ga.elements.push_back(matrix_from_json(A->field, els[g], d, d, where + ".elements[" + std::to_string(g) + "]"));
        ga.algebra = A;
        ga.identity_index = need_size(j, "identity_index", where);
        if (ga.elements.empty() || ga.identity_index >= ga.elements.size())
            throw ProblemError(where + ": identity_index out of range");
        const nlohmann::json& mt = need_array(j, "mult_table", where);
        for (const auto& row : mt) {
            if (!row.is_array()) throw ProblemError(where + ".mult_table: expected rows");
            std::vector<std::size_t> r;
            for (const auto& x : row) {
                std::optional<std::size_t> v = as_index(x);
                if (!v) throw ProblemError(where + ".mult_table: expected indices");
                r.push_back(*v);
            }
            ga.mult_table.push_back(std::move(r));
        }
        for (std::size_t g = 0; g < ga.elements.size(); ++g) ga.generators.push_back(g);
    } else {
        throw ProblemError(where + ": need either 'generators' or 'elements'");
    }
    ActionReport rep = check_action(ga);
    if (!rep.pass()) throw MathError(where + ": " + rep.failures.front());
    return std::make_shared<GroupAction<K>>(std::move(ga));
}

template <class K>
MorphismPtr<K> morphism_from_json(const Problem<K>& P, const nlohmann::json& j, const std::string& where) {
    auto phi = std::make_shared<EquivariantMorphism<K>>();
    phi->source = P.algebra(need(j, "source", where).template get<std::string>());
    phi->target = P.algebra(need(j, "target", where).template get<std::string>());
    phi->source_action = P.action(need(j, "source_action", where).template get<std::string>());
    phi->target_action = P.action(need(j, "target_action", where).template get<std::string>());
    phi->matrix = matrix_from_json(phi->source->field, need(j, "matrix", where), phi->target->dim(),
                                   phi->source->dim(), where + ".matrix");
    MorphismReport rep;
    try {
        rep = check_morphism(*phi);
    } catch (const std::invalid_argument& e) {
        throw ProblemError(where + ": " + e.what());
    }
    if (!rep.pass()) {
        if (!rep.mult_violations.empty()) {
            const auto& v = rep.mult_violations.front();
            throw MathError(where + ": not multiplicative at basis pair (" + std::to_string(v[0]) + ", " +
                            std::to_string(v[1]) + ")");
        }
        throw MathError(where + ": not equivariant at group element " +
                        std::to_string(rep.equivariance_violations.front()));
    }
    return phi;
}

template <class K>
DeformationTriple<K> deformation_from_json(const Problem<K>& P, const nlohmann::json& j, const std::string& where) {
    DeformationTriple<K> d;
    d.phi = P.morphism(need(j, "morphism", where).template get<std::string>());
    d.order = need_size(j, "order", where);
    BimodulePtr<K> regA = std::make_shared<BimoduleStructure<K>>(regular_bimodule(*d.phi->source));
    BimodulePtr<K> regB = std::make_shared<BimoduleStructure<K>>(regular_bimodule(*d.phi->target));
    const nlohmann::json& mu = need_array(j, "mu", where);
    const nlohmann::json& nu = need_array(j, "nu", where);
    const nlohmann::json& ph = need_array(j, "phi_higher", where);
    if (mu.size() != d.order || nu.size() != d.order || ph.size() != d.order)
        throw ProblemError(where + ": coefficient lists must have length " + std::to_string(d.order));
    for (std::size_t i = 0; i < d.order; ++i) {
        std::string iw = "[" + std::to_string(i) + "]";
        d.mu.push_back(cochain_from_json(mu[i], d.phi->source, regA, 2, where + ".mu" + iw));
        d.nu.push_back(cochain_from_json(nu[i], d.phi->target, regB, 2, where + ".nu" + iw));
        d.phi_higher.push_back(matrix_from_json(d.phi->source->field, ph[i], d.phi->target->dim(),
                                                d.phi->source->dim(), where + ".phi_higher" + iw));
    }
    return d;
}

template <class K>
FormalIsomorphismPair<K> pair_from_json(const Problem<K>& P, const nlohmann::json& j, const std::string& where) {
    FormalIsomorphismPair<K> p;
    p.phi = P.morphism(need(j, "morphism", where).template get<std::string>());
    p.order = need_size(j, "order", where);
    const nlohmann::json& psi = need_array(j, "psi", where);
    const nlohmann::json& theta = need_array(j, "theta", where);
    if (psi.size() != p.order || theta.size() != p.order)
        throw ProblemError(where + ": coefficient lists must have length " + std::to_string(p.order));
    std::size_t da = p.phi->source->dim(), db = p.phi->target->dim();
    for (std::size_t i = 0; i < p.order; ++i) {
        std::string iw = "[" + std::to_string(i) + "]";
        p.psi.push_back(matrix_from_json(p.phi->source->field, psi[i], da, da, where + ".psi" + iw));
        p.theta.push_back(matrix_from_json(p.phi->target->field, theta[i], db, db, where + ".theta" + iw));
    }
    return p;
}

}  // namespace jsdetail

// Builds the whole problem, validating structure and mathematics as it
// goes: algebras must associate, actions must satisfy the group axioms,
// morphisms must be multiplicative and equivariant. Deformations and
// pairs are loaded without running their order-by-order checks; those
// belong to the operations that consume them.
template <class K>
Problem<K> load_problem(const nlohmann::json& root, FieldCtx<K> F) {
    if (!root.is_object()) throw ProblemError("problem: top level must be an object");
    Problem<K> P;
    P.field = F;
    try {
        static const char* known[] = {"field", "algebras", "actions", "morphisms", "deformations", "pairs"};
        for (auto it = root.begin(); it != root.end(); ++it) {
            bool ok = false;
            for (const char* k : known) ok = ok || it.key() == k;
            if (!ok) throw ProblemError("problem: unknown top-level key '" + it.key() + "'");
        }
        if (root.contains("algebras"))
            for (auto it = root["algebras"].begin(); it != root["algebras"].end(); ++it)
                P.algebras.emplace(it.key(), jsdetail::algebra_from_json(F, it.value(), "algebra '" + it.key() + "'"));
        if (root.contains("actions"))
            for (auto it = root["actions"].begin(); it != root["actions"].end(); ++it)
                P.actions.emplace(it.key(), jsdetail::action_from_json(P, it.value(), "action '" + it.key() + "'"));
        if (root.contains("morphisms"))
            for (auto it = root["morphisms"].begin(); it != root["morphisms"].end(); ++it)
                P.morphisms.emplace(it.key(),
                                    jsdetail::morphism_from_json(P, it.value(), "morphism '" + it.key() + "'"));
        if (root.contains("deformations"))
            for (auto it = root["deformations"].begin(); it != root["deformations"].end(); ++it)
                P.deformations.emplace(
                    it.key(), jsdetail::deformation_from_json(P, it.value(), "deformation '" + it.key() + "'"));
        if (root.contains("pairs"))
            for (auto it = root["pairs"].begin(); it != root["pairs"].end(); ++it)
                P.pairs.emplace(it.key(), jsdetail::pair_from_json(P, it.value(), "pair '" + it.key() + "'"));
    } catch (const nlohmann::json::exception& e) {
        throw ProblemError(std::string("problem: ") + e.what());
    }
    return P;
}

// Which scalar a problem runs over: an explicit --field style override
// wins, then the file's "field" member, then the rationals.
struct FieldChoice {
    bool rational = true;
    std::uint64_t p = 0;
};

inline FieldChoice parse_field_name(const std::string& s) {
    FieldChoice c;
    if (s == "Q" || s == "q") return c;
    std::string digits = (s.size() > 1 && (s[0] == 'F' || s[0] == 'f')) ? s.substr(1) : s;
    if (digits.empty()) throw ProblemError("field: bad name '" + s + "'");
    std::uint64_t p = 0;
    for (char ch : digits) {
        if (ch < '0' || ch > '9') throw ProblemError("field: bad name '" + s + "'");
        p = p * 10 + static_cast<std::uint64_t>(ch - '0');
        if (p > (1ull << 62)) throw ProblemError("field: modulus too large");
    }
    c.rational = false;
    c.p = p;
    return c;
}

inline FieldChoice field_choice(const nlohmann::json& root, const std::string& override_name) {
    if (!override_name.empty()) return parse_field_name(override_name);
    if (root.is_object() && root.contains("field")) {
        const nlohmann::json& f = root["field"];
        if (f.is_string()) return parse_field_name(f.get<std::string>());
        if (f.is_object() && f.contains("p")) {
            std::optional<std::size_t> p = jsdetail::as_index(f["p"]);
            if (p) {
                FieldChoice c;
                c.rational = false;
                c.p = *p;
                return c;
            }
        }
        throw ProblemError("field: expected \"Q\", \"F<p>\", or {\"p\": <prime>}");
    }
    return FieldChoice{};
}

// Stable envelope for every command's output: no timestamps, no paths,
// keys sorted by the JSON library, content hash of the problem bytes.
inline nlohmann::json report_envelope(const std::string& command, const std::string& field_desc,
                                      const std::string& problem_bytes) {
    return nlohmann::json{{"format", "defcomplex/1"},
                          {"command", command},
                          {"field", field_desc},
                          {"problem_hash", "fnv1a64:" + fnv1a64_hex(problem_bytes)}};
}

template <class K>
nlohmann::json deformation_json(const DeformationTriple<K>& d) {
    nlohmann::json mu = nlohmann::json::array(), nu = nlohmann::json::array(), ph = nlohmann::json::array();
    for (const auto& c : d.mu) mu.push_back(cochain_json(c));
    for (const auto& c : d.nu) nu.push_back(cochain_json(c));
    for (const auto& m : d.phi_higher) ph.push_back(matrix_json(m));
    return nlohmann::json{{"order", d.order},
                          {"verified_to", d.verified_to},
                          {"mu", std::move(mu)},
                          {"nu", std::move(nu)},
                          {"phi_higher", std::move(ph)}};
}

template <class K>
nlohmann::json pair_json(const FormalIsomorphismPair<K>& p) {
    nlohmann::json psi = nlohmann::json::array(), theta = nlohmann::json::array();
    for (const auto& m : p.psi) psi.push_back(matrix_json(m));
    for (const auto& m : p.theta) theta.push_back(matrix_json(m));
    return nlohmann::json{{"order", p.order}, {"psi", std::move(psi)}, {"theta", std::move(theta)}};
}

template <class K>
nlohmann::json verify_report_json(const VerifyReport<K>& rep) {
    nlohmann::json residuals = nlohmann::json::array();
    for (const auto& r : rep.residuals)
        residuals.push_back(nlohmann::json{{"order", r.r},
                                           {"ok", r.ok()},
                                           {"nonzero_coords", r.nonzero_coords()},
                                           {"r1", cochain_json(r.r1)},
                                           {"r2", cochain_json(r.r2)},
                                           {"r3", cochain_json(r.r3)}});
    return nlohmann::json{{"checked_to", rep.checked_to},
                          {"pass", rep.pass()},
                          {"equations_pass", rep.equations_pass()},
                          {"verified_prefix", rep.verified_prefix()},
                          {"invariance_failures", rep.invariance_failures},
                          {"residuals", std::move(residuals)}};
}

template <class K>
nlohmann::json cohomology_json(const CohomologyResult<K>& h) {
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& c : h.representatives) reps.push_back(cochain_json(c));
    return nlohmann::json{{"degree", h.degree},
                          {"dim_invariant", h.dim_invariant},
                          {"dim_cocycles", h.dim_cocycles},
                          {"dim_coboundaries", h.dim_coboundaries},
                          {"dim_cohomology", h.dim_cohomology},
                          {"representatives", std::move(reps)}};
}

template <class K>
nlohmann::json morphism_cohomology_json(const MorphismCohomology<K>& h) {
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& c : h.representatives) reps.push_back(morphism_cochain_json(c));
    return nlohmann::json{{"degree", h.degree},
                          {"block_dims", h.block_dims},
                          {"dim_invariant", h.dim_invariant},
                          {"dim_cocycles", h.dim_cocycles},
                          {"dim_coboundaries", h.dim_coboundaries},
                          {"dim_cohomology", h.dim_cohomology},
                          {"representatives", std::move(reps)}};
}

template <class K>
nlohmann::json obstruction_report_json(const ObstructionReport<K>& rep) {
    return nlohmann::json{{"at_order", rep.at_order},
                          {"cochain", morphism_cochain_json(rep.cochain)},
                          {"is_cocycle", rep.is_cocycle},
                          {"invariant", rep.invariant},
                          {"rank_d2", rep.rank_d2},
                          {"rank_augmented", rep.rank_augmented}};
}

}  // namespace defc
