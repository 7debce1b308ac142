#pragma once

#include <array>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "verifier.hpp"

namespace qtorsion::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Parses text, reporting syntax errors as InputError with line and column.
inline Json parse_json(const std::string& text, const std::string& source = "input")
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw InputError("malformed JSON: " + std::string(e.what()),
                         source + ":" + std::to_string(line) + ":" + std::to_string(col));
    }
}

inline Json read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open file", path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str(), path);
}

inline void write_file(const std::string& path, const Json& j)
{
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write file", path);
    out << j.dump(2) << '\n';
}

inline const Json& require(const Json& j, const std::string& key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key))
        throw InputError("missing key \"" + key + "\"", where);
    return j.at(key);
}

inline void check_version(const Json& j)
{
    if (j.contains("v") && j.at("v") != kSchemaVersion)
        throw InputError("unsupported schema version", "v");
}

/// Integers and scalars accept JSON numbers or strings.
inline std::string scalar_text(const Json& j, const std::string& where)
{
    if (j.is_string())
        return j.get<std::string>();
    if (j.is_number_integer())
        return std::to_string(j.get<long long>());
    throw InputError("expected a scalar string or integer", where);
}

inline BigInt parse_big(const Json& j, const std::string& where)
{
    try {
        return parse_integer(scalar_text(j, where));
    } catch (const InputError& e) {
        throw InputError(e.what(), where);
    }
}

// ---- fields -------------------------------------------------------------

/// "Q", "Fp:7", {"type":"Q"} or {"type":"Fp","p":7}.
inline FieldSpec parse_field(const Json& j)
{
    if (j.is_string())
        return FieldSpec::parse(j.get<std::string>());
    if (j.is_object()) {
        const auto type = require(j, "type", "field").get<std::string>();
        if (type == "Q")
            return FieldSpec::rationals();
        if (type == "Fp")
            return FieldSpec::parse("Fp:" + scalar_text(require(j, "p", "field"), "field.p"));
    }
    throw InputError("field must be \"Q\", \"Fp:<p>\" or an object with a type", "field");
}

inline Json field_json(const FieldSpec& f)
{
    if (f.is_rational())
        return Json{{"type", "Q"}};
    return Json{{"type", "Fp"}, {"p", f.p}};
}

// ---- scalars and matrices -----------------------------------------------

template <class F>
typename F::value_type parse_scalar(const F& field, const Json& j, const std::string& where)
{
    try {
        return field.parse(scalar_text(j, where));
    } catch (const InadmissibleCharacteristic&) {
        throw;
    } catch (const InputError& e) {
        throw InputError(e.what(), where);
    }
}

/// Row-major array of rows; shape is checked against (rows, cols). Empty matrices may be [].
template <class F>
Matrix<typename F::value_type> parse_matrix(const F& field, const Json& j, std::size_t rows, std::size_t cols,
                                            const std::string& where)
{
    if (!j.is_array())
        throw InputError("matrix must be an array of rows", where);
    auto m = zeros(field, rows, cols);
    if (j.empty() && (rows == 0 || cols == 0))
        return m;
    if (j.size() != rows)
        throw InputError("matrix has " + std::to_string(j.size()) + " rows, expected " + std::to_string(rows), where);
    for (std::size_t i = 0; i < rows; ++i) {
        const auto& row = j[i];
        if (!row.is_array() || row.size() != cols)
            throw InputError("row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries", where);
        for (std::size_t c = 0; c < cols; ++c)
            m(i, c) = parse_scalar(field, row[c], where + "[" + std::to_string(i) + "][" + std::to_string(c) + "]");
    }
    return m;
}

inline IntegerMatrix parse_int_matrix(const Json& j, std::size_t rows, std::size_t cols, const std::string& where)
{
    if (!j.is_array())
        throw InputError("matrix must be an array of rows", where);
    auto m = int_matrix(rows, cols);
    if (j.empty() && (rows == 0 || cols == 0))
        return m;
    if (j.size() != rows)
        throw InputError("matrix has " + std::to_string(j.size()) + " rows, expected " + std::to_string(rows), where);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw InputError("row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries", where);
        for (std::size_t c = 0; c < cols; ++c)
            m(i, c) = parse_big(j[i][c], where + "[" + std::to_string(i) + "][" + std::to_string(c) + "]");
    }
    return m;
}

template <class F>
Json matrix_json(const F& field, const Matrix<typename F::value_type>& m)
{
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c)
            row.push_back(field.format(m(i, c)));
        rows.push_back(row);
    }
    return rows;
}

inline Json int_matrix_json(const IntegerMatrix& m)
{
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c)
            row.push_back(m(i, c).str());
        rows.push_back(row);
    }
    return rows;
}

template <class T>
Json sign_json(const SignClass<T>& s)
{
    return Json{{"torsion", s.str()}, {"normalized", true}, {"raw", scalar_str(s.value())}};
}

inline std::vector<std::size_t> parse_ranks(const Json& j, const std::string& where)
{
    if (!j.is_array())
        throw InputError("ranks must be an array", where);
    std::vector<std::size_t> r;
    for (const auto& x : j) {
        if (!x.is_number_integer() || x.get<long long>() < 0)
            throw InputError("ranks must be nonnegative integers", where);
        r.push_back(x.get<std::size_t>());
    }
    return r;
}

// ---- ring data ----------------------------------------------------------

/// {"b":3, "entries":[{"ijk":[1,2,3],"v":1}]}, indices 1-based.
inline TripleForm parse_form(const Json& j)
{
    const auto b = require(j, "b", "form").get<std::size_t>();
    TripleForm f(b);
    if (j.contains("entries"))
        for (std::size_t n = 0; n < j.at("entries").size(); ++n) {
            const auto& e = j.at("entries")[n];
            const std::string where = "form.entries[" + std::to_string(n) + "]";
            const auto& ijk = require(e, "ijk", where);
            if (!ijk.is_array() || ijk.size() != 3)
                throw InputError("ijk must have three indices", where);
            std::array<std::size_t, 3> idx{};
            for (int t = 0; t < 3; ++t) {
                const auto x = ijk[t].get<long long>();
                if (x < 1 || static_cast<std::size_t>(x) > b)
                    throw InputError("index out of range 1.." + std::to_string(b), where);
                idx[t] = static_cast<std::size_t>(x - 1);
            }
            f.set(idx[0], idx[1], idx[2], parse_big(require(e, "v", where), where));
        }
    return f;
}

inline Json form_json(const TripleForm& f)
{
    Json entries = Json::array();
    for (const auto& [key, v] : f.entries()) {
        Json e{{"ijk", {key[0] + 1, key[1] + 1, key[2] + 1}}};
        if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
            e["v"] = v.convert_to<long long>();
        else
            e["v"] = v.str();
        entries.push_back(e);
    }
    return Json{{"b", f.b()}, {"entries", entries}};
}

inline DiscSystem parse_discs(const Json& j)
{
    DiscSystem d;
    d.b = require(j, "b", "discs").get<std::size_t>();
    for (std::size_t n = 0; n < require(j, "discs", "discs").size(); ++n) {
        const auto& e = j.at("discs")[n];
        const std::string where = "discs[" + std::to_string(n) + "]";
        Disc disc{require(e, "d", where).get<std::vector<std::int64_t>>(), parse_big(require(e, "m0", where), where)};
        d.discs.push_back(std::move(disc));
    }
    d.check();
    return d;
}

inline Json discs_json(const DiscSystem& d)
{
    Json arr = Json::array();
    for (const auto& disc : d.discs)
        arr.push_back(Json{{"d", disc.boundary}, {"m0", disc.m0.str()}});
    return Json{{"b", d.b}, {"discs", arr}};
}

inline ThreefoldHomology parse_homology(const Json& j)
{
    ThreefoldHomology h;
    h.b = require(j, "b", "homology").get<std::size_t>();
    if (j.contains("torsion"))
        for (const auto& t : j.at("torsion"))
            h.torsion.push_back(parse_big(t, "homology.torsion"));
    return h;
}

inline Json homology_json(const ThreefoldHomology& h)
{
    Json t = Json::array();
    for (const auto& a : h.torsion)
        t.push_back(a.str());
    return Json{{"b", h.b}, {"torsion", t}};
}

template <class F>
std::vector<typename F::value_type> parse_point(const F& field, const Json& j, const std::string& where)
{
    std::vector<typename F::value_type> z;
    if (!j.is_array())
        throw InputError("representation must be an array", where);
    for (std::size_t i = 0; i < j.size(); ++i)
        z.push_back(parse_scalar(field, j[i], where + "[" + std::to_string(i) + "]"));
    return z;
}

template <class F>
Json point_json(const F& field, const std::vector<typename F::value_type>& z)
{
    Json a = Json::array();
    for (const auto& x : z)
        a.push_back(field.format(x));
    return a;
}

// ---- complexes ----------------------------------------------------------

/// {"ranks":[...], "d":[d_1, ..., d_n], optional "basis":[h_0, ..., h_n]}; d_k : C_k -> C_{k-1}.
template <class F>
BasedChainComplex<typename F::value_type> parse_graded(const F& field, const Json& j)
{
    BasedChainComplex<typename F::value_type> c{parse_ranks(require(j, "ranks", "ranks"), "ranks"), {}, field.zero()};
    const auto& d = require(j, "d", "d");
    if (!d.is_array() || d.size() + 1 != std::max<std::size_t>(c.ranks.size(), 1))
        throw InputError("need one boundary matrix per degree above 0", "d");
    for (std::size_t k = 1; k < c.ranks.size(); ++k)
        c.d.push_back(parse_matrix(field, d[k - 1], c.ranks[k - 1], c.ranks[k], "d[" + std::to_string(k - 1) + "]"));
    return c;
}

/// True iff every entry of the "d" matrices is an integer, so the complex is defined over Z.
inline std::optional<IntegerComplex> parse_graded_integral(const Json& j)
{
    IntegerComplex c{parse_ranks(require(j, "ranks", "ranks"), "ranks"), {}, BigInt(0)};
    const auto& d = require(j, "d", "d");
    try {
        for (std::size_t k = 1; k < c.ranks.size(); ++k)
            c.d.push_back(parse_int_matrix(d.at(k - 1), c.ranks[k - 1], c.ranks[k], "d"));
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return c;
}

template <class F>
std::vector<Matrix<typename F::value_type>> parse_basis(const F& field, const Json& j,
                                                        const std::vector<std::size_t>& ranks)
{
    if (!j.is_array() || j.size() != ranks.size())
        throw InputError("basis needs one matrix per degree", "basis");
    std::vector<Matrix<typename F::value_type>> h;
    for (std::size_t k = 0; k < ranks.size(); ++k) {
        const std::string where = "basis[" + std::to_string(k) + "]";
        const auto& m = j[k];
        // Columns are representatives; stored as a list of column vectors.
        if (!m.is_array())
            throw InputError("basis entry must be a list of vectors", where);
        auto hk = zeros(field, ranks[k], m.size());
        for (std::size_t c = 0; c < m.size(); ++c) {
            if (!m[c].is_array() || m[c].size() != ranks[k])
                throw InputError("vector " + std::to_string(c) + " must have length " + std::to_string(ranks[k]),
                                 where);
            for (std::size_t i = 0; i < ranks[k]; ++i)
                hk(i, c) = parse_scalar(field, m[c][i], where);
        }
        h.push_back(hk);
    }
    return h;
}

template <class F>
PeriodicComplex<typename F::value_type> parse_periodic(const F& field, const Json& j)
{
    PeriodicComplex<typename F::value_type> c;
    c.odd_rank = require(j, "odd_rank", "odd_rank").get<std::size_t>();
    c.even_rank = require(j, "even_rank", "even_rank").get<std::size_t>();
    c.d_oe = parse_matrix(field, require(j, "d_oe", "d_oe"), c.even_rank, c.odd_rank, "d_oe");
    c.d_eo = parse_matrix(field, require(j, "d_eo", "d_eo"), c.odd_rank, c.even_rank, "d_eo");
    return c;
}

/// Pearl data: "ranks" (4 entries), integer "dM" (three matrices), "d1" (three), "d2" (C_0 -> C_3).
template <class F>
std::pair<IntegerComplex, PearlComplex<typename F::value_type>> parse_pearl(const F& field, const Json& j)
{
    const auto ranks = parse_ranks(require(j, "ranks", "ranks"), "ranks");
    if (ranks.size() != 4)
        throw InputError("pearl complexes of 3-folds have four ranks", "ranks");
    IntegerComplex morse{ranks, {}, BigInt(0)};
    const auto& dm = require(j, "dM", "dM");
    const auto& d1 = require(j, "d1", "d1");
    if (!dm.is_array() || dm.size() != 3)
        throw InputError("dM needs three matrices d_M(1..3)", "dM");
    if (!d1.is_array() || d1.size() != 3)
        throw InputError("d1 needs three matrices C_0->C_1, C_1->C_2, C_2->C_3", "d1");
    for (std::size_t k = 1; k <= 3; ++k)
        morse.d.push_back(parse_int_matrix(dm[k - 1], ranks[k - 1], ranks[k], "dM[" + std::to_string(k - 1) + "]"));
    auto p = pearl_from_morse(field, morse);
    for (std::size_t k = 0; k < 3; ++k)
        p.d1[k] = parse_matrix(field, d1[k], ranks[k + 1], ranks[k], "d1[" + std::to_string(k) + "]");
    p.d2 = parse_matrix(field, require(j, "d2", "d2"), ranks[3], ranks[0], "d2");
    return {morse, p};
}

template <class F>
Json pearl_json(const F& field, const IntegerComplex& morse, const PearlComplex<typename F::value_type>& p)
{
    Json dm = Json::array(), d1 = Json::array();
    for (const auto& m : morse.d)
        dm.push_back(int_matrix_json(m));
    for (const auto& m : p.d1)
        d1.push_back(matrix_json(field, m));
    return Json{{"ranks", morse.ranks}, {"dM", dm}, {"d1", d1}, {"d2", matrix_json(field, p.d2)}};
}

// ---- instances ----------------------------------------------------------

template <class F>
Instance<typename F::value_type> parse_instance(const F& field, const FieldSpec& fs, const Json& j)
{
    check_version(j);
    Instance<typename F::value_type> inst;
    inst.field = fs;
    std::tie(inst.morse, inst.pearl) = parse_pearl(field, j);
    if (j.contains("homology")) {
        inst.homology = parse_homology(j.at("homology"));
    } else {
        const auto hom = integral_homology(inst.morse).first;
        if (hom.free_rank.size() != 4 || hom.free_rank[1] != hom.free_rank[2])
            throw InputError("Morse complex does not have 3-fold Betti numbers", "dM");
        inst.homology = {hom.free_rank[1], hom.factors[1]};
    }
    inst.form = j.contains("form") ? parse_form(j.at("form")) : TripleForm(inst.homology.b);
    if (inst.form.b() != inst.homology.b)
        throw InputError("form dimension differs from b", "form");
    if (j.contains("discs"))
        inst.discs = parse_discs(j.at("discs"));
    if (j.contains("representation"))
        inst.representation = parse_point(field, j.at("representation"), "representation");
    if (j.contains("expected")) {
        const auto& e = j.at("expected");
        if (e.contains("rate"))
            inst.expected.rate = parse_scalar(field, e.at("rate"), "expected.rate");
        if (e.contains("torsion"))
            inst.expected.torsion = parse_scalar(field, e.at("torsion"), "expected.torsion");
    }
    return inst;
}

template <class F>
Json instance_json(const F& field, const Instance<typename F::value_type>& inst)
{
    Json j{{"v", kSchemaVersion}, {"field", field_json(inst.field)}, {"homology", homology_json(inst.homology)},
           {"form", form_json(inst.form)}};
    j.update(pearl_json(field, inst.morse, inst.pearl));
    if (inst.discs)
        j["discs"] = discs_json(*inst.discs);
    if (inst.representation)
        j["representation"] = point_json(field, *inst.representation);
    Json e = Json::object();
    if (inst.expected.rate)
        e["rate"] = field.format(*inst.expected.rate);
    if (inst.expected.torsion)
        e["torsion"] = field.format(*inst.expected.torsion);
    if (!e.empty())
        j["expected"] = e;
    return j;
}

template <class F>
Json report_json(const F& field, const VerificationReport<typename F::value_type>& r)
{
    Json flags = Json::array();
    for (const auto& f : r.identities) {
        Json x{{"name", f.name}, {"pass", f.pass}};
        if (!f.detail.empty())
            x["detail"] = f.detail;
        flags.push_back(x);
    }
    Json j{{"v", kSchemaVersion}, {"collapse", collapse_name(r.collapse)}, {"dichotomy", dichotomy_name(r.dichotomy)}};
    if (r.torsion_direct)
        j["torsion_direct"] = sign_json(*r.torsion_direct);
    if (r.torsion_formula)
        j["torsion_formula"] = sign_json(*r.torsion_formula);
    if (r.A_det)
        j["A_det"] = field.format(*r.A_det);
    if (r.r)
        j["r"] = field.format(*r.r);
    if (r.Q_det)
        j["Q_det"] = field.format(*r.Q_det);
    j["identities"] = flags;
    Json implied{{"b_odd", r.b_odd}, {"rationally_prime", r.rationally_prime}};
    if (r.potential_constant)
        implied["potential_constant"] = *r.potential_constant;
    j["implied"] = implied;
    if (r.representation) {
        Json rep{{"is_critical", r.representation->is_critical},
                 {"gradient", point_json(field, r.representation->gradient)}};
        if (r.representation->discriminant)
            rep["discriminant"] = field.format(*r.representation->discriminant);
        j["representation"] = rep;
    }
    j["all_pass"] = r.all_pass();
    return j;
}

} // namespace qtorsion::io
