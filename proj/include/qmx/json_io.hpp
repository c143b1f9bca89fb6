#pragma once

// JSON views of the core types. Every serializer walks ordered containers and
// nlohmann::json sorts object keys, so identical inputs produce identical
// bytes — reports double as regression fixtures.

#include <string>
#include <utility>

#include <json.hpp>

#include "qmx/cauchon.hpp"
#include "qmx/intmat.hpp"
#include "qmx/pbw.hpp"
#include "qmx/qmatrix.hpp"
#include "qmx/qtorus.hpp"
#include "qmx/solver.hpp"

namespace qmx {

using Json = nlohmann::json;

// coefficients as decimal strings, ascending powers of q; strings because the
// integers routinely outgrow 64 bits
inline Json to_json(const IntPoly& p) {
    Json a = Json::array();
    for (const auto& c : p.coeffs()) a.push_back(c.str());
    return a;
}

inline Json to_json(const Scalar& s) {
    return Json{{"num", to_json(s.num())}, {"den", to_json(s.den())}};
}

inline Json to_json(const PBWElement& e) {
    Json terms = Json::array();
    for (const auto& [w, c] : e.terms())
        terms.push_back(Json{{"word", w}, {"coeff", to_json(c)}});
    return Json{{"terms", std::move(terms)}, {"text", e.to_string()}};
}

inline Json to_json(const TorusElement& e) {
    Json terms = Json::array();
    for (const auto& [m, c] : e.terms())
        terms.push_back(Json{{"exp", m}, {"coeff", to_json(c)}});
    return Json{{"terms", std::move(terms)}};
}

inline Json to_json(const IntMat& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.nrows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m.at(i, j).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json to_json(const Presentation& p) {
    Json corr = Json::array();
    for (const auto& [key, terms] : p.corrections()) {
        Json list = Json::array();
        for (const auto& t : terms)
            list.push_back(Json{{"u", t.u}, {"v", t.v}, {"coeff", to_json(t.coeff)}});
        corr.push_back(Json{{"j", key.first}, {"i", key.second}, {"terms", std::move(list)}});
    }
    return Json{{"size", p.size()},
                {"exp", p.exp()},
                {"corrections", std::move(corr)},
                {"degrees", p.degrees()}};
}

inline Json to_json(const LocElement& e) {
    Json terms = Json::array();
    for (const auto& [key, c] : e.terms())
        terms.push_back(
            Json{{"word", key.first}, {"pivot_exp", key.second}, {"coeff", to_json(c)}});
    return Json{{"pivot", e.pivot()}, {"terms", std::move(terms)}};
}

// the published report shape: exactly these keys
inline Json to_json(const SolveReport& r) {
    Json stages = Json::array();
    for (const auto& st : r.per_degree)
        stages.push_back(Json{{"degree", st.degree},
                              {"unknowns", st.unknowns},
                              {"rank", st.rank},
                              {"solution_dim", st.solution_dim}});
    return Json{{"n", r.n},
                {"D", r.D},
                {"constraints", r.constraints},
                {"per_degree", std::move(stages)},
                {"verdict", r.verdict}};
}

// stage array, outermost first; generator expressions only when traced
inline Json to_json(const CauchonRun& run) {
    Json stages = Json::array();
    for (const auto& st : run.stages) {
        Json entry{{"stage", st.k},
                   {"presentation", to_json(*st.pres)},
                   {"nilpotency", st.nilpotency}};
        // the step producing stage k inverts the pivot generator X^(k+1)_k;
        // the first entry is the input algebra and has no pivot
        if (st.k <= run.n * run.n) entry["pivot"] = st.k;
        if (st.expr) {
            Json gens = Json::array();
            for (const auto& g : *st.expr) gens.push_back(to_json(g));
            entry["generators"] = std::move(gens);
        }
        stages.push_back(std::move(entry));
    }
    return Json{{"n", run.n}, {"stages", std::move(stages)}};
}

inline Json to_json(const Ca1Report& r) {
    Json pairs = Json::array();
    for (const auto& e : r.commutations)
        pairs.push_back(Json{{"i", e.i},
                             {"j", e.j},
                             {"expected", e.expected},
                             {"got", e.got},
                             {"pass", e.pass}});
    Json ids = Json::array();
    for (const auto& e : r.identities) {
        Json entry{{"i", e.i}, {"pass", e.pass}};
        if (e.s) entry["s"] = *e.s;
        if (!e.note.empty()) entry["note"] = e.note;
        ids.push_back(std::move(entry));
    }
    return Json{{"n", r.n},
                {"commutations", std::move(pairs)},
                {"identities_checked", r.identities_checked},
                {"identities", std::move(ids)},
                {"ok", r.ok()}};
}

// index tables for cross-checking positions, levels, chains, and minor sizes
inline Json to_json(const MatrixIndexing& ix) {
    Json gens = Json::array();
    for (int i = 1; i <= ix.N; ++i) {
        auto [k, l] = ix.to_pos(i);
        Json entry{{"index", i}, {"row", k}, {"col", l}, {"mu", ix.mu(i)},
                   {"chain", ix.chain(i)}, {"d", ix.d(i)}};
        if (auto s = ix.succ(i)) entry["succ"] = *s;
        gens.push_back(std::move(entry));
    }
    Json f = Json::array();
    for (int m = 1; m <= 2 * ix.n - 1; ++m) f.push_back(ix.f(m));
    return Json{{"n", ix.n}, {"N", ix.N}, {"generators", std::move(gens)}, {"f", std::move(f)}};
}

} // namespace qmx
