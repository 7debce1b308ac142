#include <catch_amalgamated.hpp>

#include <qtorsion/pearl_models.hpp>

using namespace qtorsion;

namespace {

const RationalField QQ;

template <class F>
void check_homology_derivation(const F& field, const GeneratedPearl<typename F::value_type>& g)
{
    CHECK(validate_pearl(g.pearl).empty());
    const auto one = page1(field, g.pearl, detail::field_basis(field, g.basis));
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(one.d1star[k] == g.d1star[k]);
}

} // namespace

TEST_CASE("Leibniz solution on the homology ring")
{
    // I = e1 ∧ e2 ∧ e3, r = (1, 0, 0): D is forced up to the antisymmetric kernel conditions.
    TripleForm form(3);
    form.set(0, 1, 2, BigInt(1));
    const std::vector<Rational> r{Rational(1), Rational(0), Rational(0)};
    const auto D = solve_leibniz(QQ, form, r);
    REQUIRE(D);
    const HomologyRing ring(QQ, form);
    auto rv = zeros(QQ, 3, 1);
    rv(0, 0) = 1;
    CHECK(ring.leibniz_failures(ring.derivation(rv, *D, rv.transpose())).empty());
    CHECK(*D == -D->transpose());
    CHECK(rank(QQ, *D) == 2);

    // Zero form: the pairs (e_i, ē_i) force r = 0 once b ≥ 2.
    CHECK_FALSE(solve_leibniz(QQ, TripleForm(3), r));
}

TEMPLATE_TEST_CASE("page-2 generator produces the prescribed derivation", "", RationalField, PrimeField)
{
    const auto field = [] {
        if constexpr (std::is_same_v<TestType, RationalField>)
            return RationalField{};
        else
            return PrimeField(7);
    }();
    const auto fs = std::is_same_v<TestType, RationalField> ? FieldSpec::rationals() : FieldSpec::prime(7);
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        GenerateOptions o;
        o.page = 2;
        o.b = seed % 2 == 0 ? 3 : 1;
        o.torsion = seed % 3 == 0 ? std::vector<BigInt>{BigInt(5)} : std::vector<BigInt>{};
        o.surplus = {0, seed % 2, seed % 2, 0};
        o.seed = seed;
        const auto g = generate_instance(field, fs, o);
        CHECK(g.page == 2);
        CHECK(g.attempts >= 1);
        CHECK(g.attempts <= kLiftRetries);
        check_homology_derivation(field, g);
        const HomologyRing ring(field, g.form);
        CHECK(ring.leibniz_failures(ring.derivation(g.d1star[0], g.d1star[1], g.d1star[2])).empty());
    }
}

TEST_CASE("page-3 generator realizes the rate")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        GenerateOptions o;
        o.page = 3;
        o.b = 2 * (seed % 2 + 1);
        o.surplus = {0, 1, 1, 0};
        o.seed = seed;
        const auto g = generate_instance(QQ, FieldSpec::rationals(), o);
        REQUIRE(g.rate);
        check_homology_derivation(QQ, g);
        CHECK(g.d1star[0].is_zero());
        CHECK(g.d1star[2].is_zero());
        CHECK(page2_rate(QQ, g.pearl, detail::field_basis(QQ, g.basis)) == *g.rate);
    }
}

TEST_CASE("generator rejects inadmissible requests")
{
    GenerateOptions o;
    o.page = 3;
    o.b = 3;
    CHECK_THROWS_WITH(generate_instance(QQ, FieldSpec::rationals(), o), Catch::Matchers::ContainsSubstring(kOddAntisymmetric));
    o.page = 2;
    o.b = 2;
    CHECK_THROWS_AS(generate_instance(QQ, FieldSpec::rationals(), o), InputError);
    o.b = 3;
    o.torsion = {BigInt(7)};
    CHECK_THROWS_AS(generate_instance(PrimeField(7), FieldSpec::prime(7), o), InadmissibleCharacteristic);

    // Zero form: the page-1 sequence cannot be exact.
    Rng rng(3);
    const auto morse = realize_morse({3, {}}, {0, 0, 0, 0}, rng);
    Page2Spec<Rational> spec{{3, {}}, TripleForm(3), {Rational(1), Rational(0), Rational(0)}};
    CHECK_THROWS_WITH(lift_derivation_page2(QQ, spec, morse, FieldSpec::rationals(), 1),
                      Catch::Matchers::ContainsSubstring(kNotPage2));
    spec.r = {Rational(0), Rational(0), Rational(0)};
    TripleForm f(3);
    f.set(0, 1, 2, BigInt(1));
    spec.form = f;
    CHECK_THROWS_WITH(lift_derivation_page2(QQ, spec, morse, FieldSpec::rationals(), 1),
                      Catch::Matchers::ContainsSubstring(kNotPage2));
}

TEST_CASE("generation is deterministic in the seed")
{
    GenerateOptions o;
    o.b = 3;
    o.surplus = {1, 1, 1, 1};
    o.seed = 42;
    const auto a = generate_instance(QQ, FieldSpec::rationals(), o);
    const auto b = generate_instance(QQ, FieldSpec::rationals(), o);
    CHECK(a.pearl.total_differential() == b.pearl.total_differential());
    o.seed = 43;
    const auto c = generate_instance(QQ, FieldSpec::rationals(), o);
    CHECK_FALSE(a.pearl.total_differential() == c.pearl.total_differential());
}

TEST_CASE("random pearl complexes are valid")
{
    Rng rng(11);
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto morse = realize_morse({2, {}}, {0, 1, 1, 0}, rng);
        const auto g = random_pearl(QQ, morse, FieldSpec::rationals(), seed);
        check_homology_derivation(QQ, g);
        CHECK((g.d1star[1] * g.d1star[0]).is_zero());
        CHECK((g.d1star[2] * g.d1star[1]).is_zero());
    }
    TripleForm f(3);
    f.set(0, 1, 2, BigInt(2));
    RandomPearlOptions opt;
    opt.form = &f;
    const auto morse = realize_morse({3, {}}, {0, 0, 0, 0}, rng);
    const auto g = random_pearl(QQ, morse, FieldSpec::rationals(), 5, opt);
    const HomologyRing ring(QQ, f);
    CHECK(ring.leibniz_failures(ring.derivation(g.d1star[0], g.d1star[1], g.d1star[2])).empty());
}
