#pragma once

#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "io.hpp"

namespace qtorsion::cli {

using io::Json;

enum ExitCode : int { kOk = 0, kFailed = 1, kInputError = 2 };

namespace detail {

inline Json error_json(const std::string& what, const std::string& where)
{
    return Json{{"error", what}, {"where", where}};
}

/// The --field option wins over the file's "field" entry; the default is Q.
inline FieldSpec resolve_field(const std::string& option, const Json* file)
{
    if (!option.empty())
        return FieldSpec::parse(option);
    if (file && file->is_object() && file->contains("field"))
        return io::parse_field(file->at("field"));
    return FieldSpec::rationals();
}

inline std::vector<BigInt> parse_list(const std::string& s, const std::string& where)
{
    std::vector<BigInt> out;
    std::size_t start = 0;
    while (start <= s.size() && !s.empty()) {
        const auto comma = s.find(',', start);
        const auto piece = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            out.push_back(parse_integer(piece));
        } catch (const InputError& e) {
            throw InputError(e.what(), where);
        }
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return out;
}

template <class F>
std::vector<typename F::value_type> parse_point_list(const F& field, const std::string& s)
{
    std::vector<typename F::value_type> z;
    std::size_t start = 0;
    for (;;) {
        const auto comma = s.find(',', start);
        const auto piece = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            z.push_back(field.parse(piece));
        } catch (const InputError& e) {
            throw InputError(e.what(), "--at");
        }
        if (comma == std::string::npos)
            return z;
        start = comma + 1;
    }
}

inline Surplus parse_surplus(const std::string& s)
{
    const auto v = parse_list(s, "--surplus");
    if (v.size() != 4)
        throw InputError("surplus needs four comma-separated counts", "--surplus");
    Surplus out{};
    for (std::size_t k = 0; k < 4; ++k) {
        if (v[k] < 0 || v[k] > 64)
            throw InputError("surplus counts must lie in 0..64", "--surplus");
        out[k] = v[k].convert_to<std::size_t>();
    }
    return out;
}

inline std::string hex64(std::uint64_t x)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

inline void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

// ---- verbs --------------------------------------------------------------

template <class F>
int torsion_verb(const F& field, const FieldSpec& fs, const std::string& kind, const Json& j, std::ostream& out)
{
    using T = typename F::value_type;
    SignClass<T> tau(field.one());
    if (kind == "graded") {
        const auto c = io::parse_graded(field, j);
        if (auto k = c.first_square_violation())
            throw InputError("d_" + std::to_string(k - 1) + " d_" + std::to_string(k) + " != 0", "d");
        std::vector<Matrix<T>> h;
        if (j.contains("basis")) {
            h = io::parse_basis(field, j.at("basis"), c.ranks);
        } else if (auto integral = io::parse_graded_integral(j)) {
            const auto [hom, basis] = integral_homology(*integral);
            require_admissible(hom, fs);
            for (const auto& r : basis.reps)
                h.push_back(to_field(field, r));
        } else {
            h = empty_homology(field, c.ranks);
        }
        tau = milnor_torsion(field, c, h);
    } else if (kind == "periodic") {
        tau = periodic_torsion(field, io::parse_periodic(field, j));
    } else {
        const auto [morse, p] = io::parse_pearl(field, j);
        if (auto v = validate_pearl(p); !v.empty())
            throw InputError("invalid pearl complex: " + v.front(), "pearl");
        tau = quantum_torsion(field, p);
    }
    emit(out, io::sign_json(tau));
    return kOk;
}

template <class F>
int spectral_verb(const F& field, const FieldSpec& fs, const Json& j, std::ostream& out)
{
    const auto inst = io::parse_instance(field, fs, j);
    require_admissible(integral_homology(inst.morse).first, fs);
    if (auto v = validate_pearl(inst.pearl); !v.empty())
        throw InputError("invalid pearl complex: " + v.front(), "pearl");
    const auto h = qtorsion::detail::field_basis(field, integral_homology(inst.morse).second);
    const auto s = spectral_summary(field, inst.pearl);
    const auto one = page1(field, inst.pearl, h);
    Json d1 = Json::array();
    for (const auto& m : one.d1star)
        d1.push_back(io::matrix_json(field, m));
    Json r = nullptr;
    if (s.collapse == Collapse::Page3)
        r = field.format(page2_rate(field, inst.pearl, h));
    emit(out, Json{{"e1", s.e1}, {"e2", s.e2}, {"e3", s.e3}, {"d1star", d1}, {"r", r},
                   {"collapse", collapse_name(s.collapse)}});
    return kOk;
}

template <class F>
int classify_verb(const F& field, const FieldSpec& fs, const Json& j, std::size_t trials, std::uint64_t seed,
                  std::ostream& out)
{
    TripleForm form;
    std::optional<Collapse> collapse;
    if (j.contains("dM")) {
        const auto inst = io::parse_instance(field, fs, j);
        form = inst.form;
        collapse = collapsing_page(field, inst.pearl);
    } else {
        form = io::parse_form(j.contains("form") ? j.at("form") : j);
    }
    const auto slice = find_slice(field, form, trials, seed);
    Json sj = nullptr;
    if (slice.vector)
        sj = Json{{"vector", io::point_json(field, *slice.vector)}, {"det", field.format(*slice.det)}};
    Json result{{"b", form.b()},
                {"dichotomy", dichotomy_name(dichotomy_class(field, form, trials, seed))},
                {"slice", sj},
                {"randomized", slice.randomized},
                {"ring_generated_by_h2", ring_generated_by_h2(field, form)},
                {"b_odd", form.b() % 2 == 1}};
    if (collapse)
        result["collapse"] = collapse_name(*collapse);
    emit(out, result);
    return kOk;
}

template <class F>
int potential_verb(const F& field, const std::string& kind, const Json& j, const std::string& at, std::ostream& out)
{
    const auto d = io::parse_discs(j.contains("discs") && j.at("discs").is_object() ? j.at("discs") : j);
    const auto w = build_potential(d);
    const auto z = parse_point_list(field, at);
    check_representation(field, d.b, z);
    if (kind == "eval")
        emit(out, Json{{"potential", w.str()}, {"value", field.format(w.evaluate(field, z))}});
    else if (kind == "grad")
        emit(out, Json{{"gradient", io::point_json(field, log_gradient(field, w, z))}});
    else
        emit(out, Json{{"discriminant", field.format(discriminant(field, w, z))}});
    return kOk;
}

struct GenerateArgs
{
    int page = 2;
    std::size_t b = 0; ///< 0: 3 for page 2, 2 for page 3
    std::string torsion, surplus = "0,0,0,0", output;
    std::uint64_t seed = 0;
    bool no_scramble = false;
};

template <class F>
int generate_verb(const F& field, const FieldSpec& fs, const GenerateArgs& a, std::ostream& out)
{
    GenerateOptions o;
    o.page = a.page;
    o.b = a.b ? a.b : (a.page == 3 ? 2 : 3);
    o.torsion = a.torsion.empty() ? std::vector<BigInt>{} : parse_list(a.torsion, "--torsion");
    o.surplus = parse_surplus(a.surplus);
    o.seed = a.seed;
    o.scramble = !a.no_scramble;
    const auto g = generate_instance(field, fs, o);
    const auto j = io::instance_json(field, make_instance(field, fs, g));
    if (a.output.empty()) {
        emit(out, j);
    } else {
        io::write_file(a.output, j);
        emit(out, Json{{"written", a.output}, {"page", g.page}, {"attempts", g.attempts}});
    }
    return kOk;
}

template <class F>
int verify_verb(const F& field, const FieldSpec& fs, const Json& j, const std::string& report, std::ostream& out)
{
    const auto rep = verify_main_theorem(field, io::parse_instance(field, fs, j));
    const auto rj = io::report_json(field, rep);
    if (!report.empty())
        io::write_file(report, rj);
    emit(out, rj);
    return rep.all_pass() ? kOk : kFailed;
}

struct BatchArgs
{
    int page = 3;
    std::size_t count = 10, b = 0;
    std::uint64_t seed = 0;
    std::string torsion, surplus, report;
    bool corrupt = false;
};

/// Per-instance parameters drawn from the instance stream when not fixed by flags.
template <class F>
GenerateOptions batch_options(const F& field, const BatchArgs& a, Rng& rng)
{
    GenerateOptions o;
    o.page = a.page;
    if (a.b)
        o.b = a.b;
    else
        o.b = a.page == 2 ? 1 + 2 * rng.below(3) : 2 + 2 * rng.below(2);
    if (!a.surplus.empty()) {
        o.surplus = parse_surplus(a.surplus);
    } else {
        const std::size_t s0 = rng.below(2), s3 = rng.below(2), t = rng.below(3);
        o.surplus = {s0, s0 + t, s3 + t, s3};
    }
    if (!a.torsion.empty()) {
        o.torsion = parse_list(a.torsion, "--torsion");
    } else if (rng.chance(1, 2)) {
        const BigInt pool[] = {3, 5, 7, 9};
        const BigInt t = pool[rng.below(4)];
        if (!field.is_zero(field.from_integer(t)))
            o.torsion = {t};
    }
    o.seed = rng.split("generate").seed();
    return o;
}

template <class F>
int batch_verb(const F& field, const FieldSpec& fs, const BatchArgs& a, std::ostream& out)
{
    std::size_t passed = 0, failed = 0, corrupted = 0, detected = 0, genuine = 0, skipped = 0;
    std::map<std::string, std::size_t> histogram;
    std::uint64_t digest = Rng::fnv1a("");
    Json reports = Json::array();
    const Rng root(a.seed);
    for (std::size_t i = 0; i < a.count; ++i) {
        Rng rng = root.split(static_cast<std::uint64_t>(i));
        const auto o = batch_options(field, a, rng);
        auto inst = make_instance(field, fs, generate_instance(field, fs, o));
        if (a.corrupt) {
            Rng mrng = rng.split("corrupt");
            if (!corrupt_d2(inst, mrng)) {
                ++skipped;
                continue;
            }
            ++corrupted;
        }
        const auto rep = verify_main_theorem(field, inst);
        const auto rj = io::report_json(field, rep);
        const std::string text = rj.dump();
        digest = Rng::fnv1a(hex64(digest) + text);
        if (!a.report.empty())
            reports.push_back(rj);
        if (rep.all_pass()) {
            ++passed;
        } else {
            ++failed;
            for (const auto& f : rep.identities)
                if (!f.pass)
                    ++histogram[f.name];
        }
        if (a.corrupt) {
            if (!rep.all_pass()) {
                ++detected;
            } else {
                inst.expected = {};
                genuine += verify_main_theorem(field, inst).all_pass();
            }
        }
    }
    Json hist = Json::object();
    for (const auto& [k, v] : histogram)
        hist[k] = v;
    Json summary{{"v", io::kSchemaVersion}, {"page", a.page},        {"field", fs.str()},
                 {"seed", a.seed},           {"count", a.count},      {"passed", passed},
                 {"failed", failed},         {"failures", hist},      {"digest", hex64(digest)}};
    if (a.corrupt) {
        summary["corrupted"] = corrupted;
        summary["detected"] = detected;
        summary["genuine"] = genuine;
        summary["skipped"] = skipped;
    }
    if (!a.report.empty())
        io::write_file(a.report, Json{{"v", io::kSchemaVersion}, {"summary", summary}, {"reports", reports}});
    emit(out, summary);
    if (a.corrupt)
        return detected + genuine == corrupted ? kOk : kFailed;
    return failed == 0 ? kOk : kFailed;
}

} // namespace detail

/**
 * Runs one command line. Output JSON goes to `out`; errors are written to
 * `err` as {"error", "where"}. Returns 0 on success, 1 on failed
 * verification, 2 on invalid input.
 */
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Quantum Reidemeister torsion of narrow Lagrangian 3-folds", "qtorsion"};
    app.require_subcommand(1);
    std::string field_opt;

    std::string torsion_kind, file;
    auto* torsion = app.add_subcommand("torsion", "torsion of a graded, periodic or pearl complex");
    torsion->add_option("kind", torsion_kind, "graded | periodic | quantum")
        ->required()
        ->check(CLI::IsMember({"graded", "periodic", "quantum"}));
    torsion->add_option("file", file, "complex JSON")->required();

    auto* spectral = app.add_subcommand("spectral", "pages of the degree spectral sequence");
    spectral->add_option("file", file, "instance JSON")->required();

    std::size_t trials = 200;
    std::uint64_t classify_seed = 0;
    auto* classify = app.add_subcommand("classify", "slice dichotomy of a triple form");
    classify->add_option("file", file, "instance or form JSON")->required();
    classify->add_option("--trials", trials, "random slice trials over Q or large fields");
    classify->add_option("--seed", classify_seed, "seed of the slice search");

    detail::GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "generate a narrow instance");
    generate->add_option("--page", gen.page, "2 or 3")->check(CLI::IsMember({2, 3}));
    generate->add_option("--b", gen.b, "first Betti number");
    generate->add_option("--seed", gen.seed, "generator seed");
    generate->add_option("--torsion", gen.torsion, "H_1 torsion factors a1,a2,...");
    generate->add_option("--surplus", gen.surplus, "extra critical points s0,s1,s2,s3");
    generate->add_flag("--no-scramble", gen.no_scramble, "keep the block form of the Morse complex");
    generate->add_option("-o,--output", gen.output, "output file");

    std::string potential_kind, at;
    auto* potential = app.add_subcommand("potential", "superpotential of a disc system");
    potential->add_option("kind", potential_kind, "eval | grad | disc")
        ->required()
        ->check(CLI::IsMember({"eval", "grad", "disc"}));
    potential->add_option("file", file, "disc system JSON")->required();
    potential->add_option("--at", at, "representation z1,z2,...")->required();

    std::string report;
    auto* verify = app.add_subcommand("verify", "verify the main theorem on an instance");
    verify->add_option("file", file, "instance JSON")->required();
    verify->add_option("--report", report, "write the report here");

    detail::BatchArgs batch;
    auto* batchc = app.add_subcommand("batch", "generate and verify many instances");
    batchc->add_option("--page", batch.page, "2 or 3")->check(CLI::IsMember({2, 3}));
    batchc->add_option("--count", batch.count, "number of instances");
    batchc->add_option("--seed", batch.seed, "batch seed");
    batchc->add_option("--b", batch.b, "fixed first Betti number");
    batchc->add_option("--torsion", batch.torsion, "fixed H_1 torsion factors");
    batchc->add_option("--surplus", batch.surplus, "fixed surplus s0,s1,s2,s3");
    batchc->add_flag("--corrupt", batch.corrupt, "negate one nonzero d2 entry per instance");
    batchc->add_option("--report", batch.report, "write all reports here");

    for (auto* sub : {torsion, spectral, classify, generate, potential, verify, batchc})
        sub->add_option("--field", field_opt, "Q or Fp:<p>");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << detail::error_json(e.what(), "command line").dump() << '\n';
        return kInputError;
    }

    try {
        std::optional<Json> input;
        if (!file.empty())
            input = io::read_file(file);
        const Json* in = input ? &*input : nullptr;
        if (in)
            io::check_version(*in);
        const FieldSpec fs = detail::resolve_field(field_opt, in);
        return visit_field(fs, [&](const auto& field) -> int {
            if (torsion->parsed())
                return detail::torsion_verb(field, fs, torsion_kind, *in, out);
            if (spectral->parsed())
                return detail::spectral_verb(field, fs, *in, out);
            if (classify->parsed())
                return detail::classify_verb(field, fs, *in, trials, classify_seed, out);
            if (generate->parsed())
                return detail::generate_verb(field, fs, gen, out);
            if (potential->parsed())
                return detail::potential_verb(field, potential_kind, *in, at, out);
            if (verify->parsed())
                return detail::verify_verb(field, fs, *in, report, out);
            return detail::batch_verb(field, fs, batch, out);
        });
    } catch (const InadmissibleCharacteristic& e) {
        err << Json{{"error", e.what()}, {"where", e.where().empty() ? "field" : e.where()}, {"factor", e.factor()}}.dump()
            << '\n';
        return kInputError;
    } catch (const InternalError& e) {
        err << detail::error_json(e.what(), e.where().empty() ? "internal" : e.where()).dump() << '\n';
        return kFailed;
    } catch (const Error& e) {
        err << detail::error_json(e.what(), e.where()).dump() << '\n';
        return kInputError;
    } catch (const Json::exception& e) {
        err << detail::error_json(std::string("schema violation: ") + e.what(), file).dump() << '\n';
        return kInputError;
    }
}

} // namespace qtorsion::cli
